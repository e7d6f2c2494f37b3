use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use fkplab::dynamics::Dealias;
use fkplab::harness::*;
use fkplab::spectral::{random_smooth, Grid};
use fkplab::Error;

fn config_errors(text: &str) -> Vec<String> {
    match parse_config(text) {
        Err(Error::Config(errs)) => errs,
        other => panic!("expected a config error, got {other:?}"),
    }
}

#[test]
fn minimal_simulate_fills_defaults() {
    let c = parse_config("experiment = \"simulate\"\n[simulate]\nalpha = 1.5\nnx = 64\nny = 16\nlx = 30.0\nt_end = 1.0\n").unwrap();
    assert_eq!(c.seed, 0);
    let Experiment::Simulate(s) = &c.experiment else { panic!("wrong tag") };
    assert_eq!(s.dt, 1e-3);
    assert_eq!(s.dealias, Dealias::TwoThirds);
    assert!(s.nonlinear);
    let errs = config_errors("experiment = \"simulate\"\n");
    assert!(errs.iter().any(|e| e.contains("simulate.alpha")), "{errs:?}");
    for tag in TAGS {
        let d = ExperimentConfig::default_for(tag).unwrap();
        assert_eq!(d.experiment.tag(), tag);
    }
}

#[test]
fn schema_violations_are_named() {
    let errs = config_errors("experiment = \"simulate\"\n[simulate]\nalpha = 2.5\n");
    assert!(errs.iter().any(|e| e.contains("alpha out of [1,2]")), "{errs:?}");
    let errs = config_errors("experiment = \"simulate\"\n[simulate]\nalpah = 1.5\nnx = \"big\"\n");
    assert!(errs.iter().any(|e| e.contains("unknown key") && e.contains("alpah")), "{errs:?}");
    assert!(errs.iter().any(|e| e.contains("nx")), "{errs:?}");
    let errs = config_errors("seed = 3\n");
    assert!(errs.iter().any(|e| e.contains("missing key") && e.contains("experiment")), "{errs:?}");
    let errs = config_errors("experiment = \"nope\"\n");
    assert!(errs.iter().any(|e| e.contains("nope")));
    let errs = config_errors("experiment = \"simulate\"\nextra = 1\n");
    assert!(errs.iter().any(|e| e.contains("extra")));
}

#[test]
fn config_round_trip() {
    for tag in TAGS {
        let c = ExperimentConfig::default_for(tag).unwrap();
        let text = c.to_toml().unwrap();
        let back = parse_config(&text).unwrap();
        assert_eq!(back, c, "{tag}");
        assert_eq!(back.to_toml().unwrap(), text);
    }
    let custom = parse_config(
        "experiment = \"longtime\"\nseed = 9\noutput = \"out/x\"\n[longtime]\nalpha = 1.5\nnorm = 0.02\n",
    )
    .unwrap();
    assert_eq!(parse_config(&custom.to_toml().unwrap()).unwrap(), custom);
}

fn sample_spectrum() -> fkplab::spectral::Spectrum {
    let g = Grid::new(16, 8, 3.0 * PI).unwrap();
    random_smooth(&g, 4, 1.0, 1.0, 1.0).constrained()
}

#[test]
fn checkpoint_round_trip_is_bit_exact() {
    let s = sample_spectrum();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.fkp");
    save_checkpoint(&path, 0.125, 1.9, &s).unwrap();
    let back = load_checkpoint(&path).unwrap();
    assert_eq!(back.t.to_bits(), 0.125f64.to_bits());
    assert_eq!(back.alpha, 1.9);
    assert_eq!(back.spectrum.grid(), s.grid());
    for (a, b) in back.spectrum.coeffs().iter().zip(s.coeffs()) {
        assert_eq!((a.re.to_bits(), a.im.to_bits()), (b.re.to_bits(), b.im.to_bits()));
    }
    let bytes = fs::read(&path).unwrap();
    assert_eq!(bytes.len(), HEADER_LEN + 16 * s.grid().len());
    assert_eq!(&bytes[..4], MAGIC);
    assert_eq!(u32::from_le_bytes(bytes[4..8].try_into().unwrap()), VERSION);
    assert_eq!(u32::from_le_bytes(bytes[8..12].try_into().unwrap()), 16);
    assert_eq!(f64::from_le_bytes(bytes[16..24].try_into().unwrap()), 3.0 * PI);
    let first = s.get(-8, -4).unwrap();
    assert_eq!(f64::from_le_bytes(bytes[HEADER_LEN..HEADER_LEN + 8].try_into().unwrap()), first.re);
    assert!(dir.path().read_dir().unwrap().count() == 1, "no temporary file left behind");
}

#[test]
fn checkpoint_errors() {
    let s = sample_spectrum();
    let good = encode_checkpoint(1.0, 2.0, &s);
    let mut bad = good.clone();
    bad[0] = b'X';
    assert!(decode_checkpoint(&bad).unwrap_err().to_string().contains("bad magic"));
    let short = &good[..good.len() - 3];
    assert!(decode_checkpoint(short).unwrap_err().to_string().contains("truncated"));
    assert!(decode_checkpoint(&good[..10]).unwrap_err().to_string().contains("truncated"));
    let mut long = good.clone();
    long.push(0);
    assert!(decode_checkpoint(&long).unwrap_err().to_string().contains("truncated"));
    let mut ver = good.clone();
    ver[4] = 7;
    assert!(decode_checkpoint(&ver).unwrap_err().to_string().contains("version mismatch"));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.fkp");
    write_atomic(&path, &good).unwrap();
    let other = Grid::new(32, 8, 3.0 * PI).unwrap();
    assert!(matches!(load_checkpoint_on(&path, &other), Err(Error::GridMismatch)));
    assert!(load_checkpoint_on(&path, s.grid()).is_ok());
}

fn read_all(dir: &Path, files: &[String]) -> Vec<(String, Vec<u8>)> {
    files.iter().map(|f| (f.clone(), fs::read(dir.join(f)).unwrap())).collect()
}

#[test]
fn simulate_with_zero_time_writes_one_checkpoint() {
    let c = parse_config(
        "experiment = \"simulate\"\n[simulate]\nalpha = 1.5\nnx = 32\nny = 8\nlx = 20.0\nt_end = 0.0\n",
    )
    .unwrap();
    let dir = tempfile::tempdir().unwrap();
    let summary = run(&c, dir.path()).unwrap();
    let cps: Vec<_> = summary.files.iter().filter(|f| f.ends_with(".fkp")).collect();
    assert_eq!(cps, vec!["checkpoint_0000.fkp"]);
    let cp = load_checkpoint(&dir.path().join(cps[0])).unwrap();
    assert_eq!(cp.t, 0.0);
    let diag = fs::read_to_string(dir.path().join("diagnostics.csv")).unwrap();
    assert_eq!(diag.lines().count(), 2);
    let manifest: serde_json::Value = serde_json::from_slice(&fs::read(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 0);
    assert_eq!(manifest["experiment"], "simulate");
}

#[test]
fn resonance_and_strichartz_outputs() {
    let c = parse_config(
        "experiment = \"resonance\"\n[resonance]\nalphas = [1.0, 2.0]\nshell_min = -1\nshell_max = 1\ninterior = 2\neta_cap = 4\n",
    )
    .unwrap();
    let dir = tempfile::tempdir().unwrap();
    run(&c, dir.path()).unwrap();
    let v: serde_json::Value = serde_json::from_slice(&fs::read(dir.path().join("resonance.json")).unwrap()).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    for r in rows {
        assert!(r["alpha"].is_number() && r["c_observed"].as_f64().unwrap() > 0.0);
        assert!(r["argmin"].is_array());
    }

    let c = parse_config(
        "experiment = \"strichartz\"\n[strichartz]\nalphas = [1.0, 2.0]\nn_list = [8.0, 16.0]\nt_samples = 16\n",
    )
    .unwrap();
    let dir = tempfile::tempdir().unwrap();
    run(&c, dir.path()).unwrap();
    let csv = fs::read_to_string(dir.path().join("strichartz.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "alpha,n,value");
    assert_eq!(lines.count(), 4);
}

#[test]
fn runs_are_deterministic() {
    let text = "experiment = \"simulate\"\nseed = 42\n[simulate]\nalpha = 1.5\nnx = 32\nny = 8\nlx = 20.0\nt_end = 0.05\ndt = 0.01\nsnapshot_stride = 2\n";
    let c = parse_config(text).unwrap();
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let sa = run(&c, a.path()).unwrap();
    let sb = run(&c, b.path()).unwrap();
    assert_eq!(sa.files, sb.files);
    assert_eq!(read_all(a.path(), &sa.files), read_all(b.path(), &sb.files));

    let c = parse_config("experiment = \"bilinear\"\nseed = 7\n[bilinear]\ntrials = 4\n").unwrap();
    let sa = run(&c, a.path()).unwrap();
    let sb = run(&c, b.path()).unwrap();
    assert_eq!(read_all(a.path(), &sa.files), read_all(b.path(), &sb.files));
}

#[test]
fn module_errors_carry_experiment_context() {
    let c = parse_config(
        "experiment = \"simulate\"\n[simulate]\nalpha = 1.5\nnx = 32\nny = 8\nlx = 5.0\nt_end = 0.0\n[simulate.initial]\nkind = \"soliton\"\nc = 1.0\nx0 = 0.0\n",
    )
    .unwrap();
    let dir = tempfile::tempdir().unwrap();
    let err = run(&c, dir.path()).unwrap_err();
    assert!(matches!(err, Error::Experiment { .. }));
    assert!(err.to_string().starts_with("simulate experiment failed"), "{err}");
}

#[test]
fn atomic_write_replaces_whole_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.txt");
    write_atomic(&path, b"first version, longer").unwrap();
    write_atomic(&path, b"second").unwrap();
    assert_eq!(fs::read(&path).unwrap(), b"second");
    let names: Vec<_> = dir.path().read_dir().unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(names.len(), 1);
    assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
    let mut csv = Csv::new(&["a", "b"]);
    csv.row(&[Cell::I(3), Cell::S("z")]);
    assert_eq!(csv.as_str(), "a,b\n3,z\n");
}
