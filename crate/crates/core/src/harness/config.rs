use std::path::{Path, PathBuf};

use serde::Serialize;
use toml::{Table, Value};

use crate::dynamics::Dealias;
use crate::estimates::LemmaKind;
use crate::{Error, Result};

/// Initial data of a `simulate` run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InitialData {
    /// `random_smooth` with the run seed.
    Random { xi_c: f64, eta_c: f64, norm: f64 },
    Soliton { c: f64, x0: f64 },
    Packet { xi0: f64, sigma: f64, norm: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulateConfig {
    pub alpha: f64,
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub t_end: f64,
    pub dt: f64,
    pub dealias: Dealias,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_trunc: Option<f64>,
    pub snapshot_stride: usize,
    pub nonlinear: bool,
    pub initial: InitialData,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrichartzConfig {
    pub alphas: Vec<f64>,
    pub n_list: Vec<f64>,
    pub t_samples: usize,
    pub lx: f64,
    pub a: f64,
    pub band: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResonanceConfig {
    pub alphas: Vec<f64>,
    pub shell_min: i32,
    pub shell_max: i32,
    pub interior: usize,
    pub eta_cap: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlatsetConfig {
    pub alpha: f64,
    pub point: [f64; 2],
    pub deltas: Vec<f64>,
    pub domain_xi: [f64; 2],
    pub domain_eta: [f64; 2],
    pub tile: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BilinearConfig {
    pub lemmas: Vec<LemmaKind>,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LongtimeConfig {
    pub alpha: f64,
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub t_end: f64,
    pub dt: f64,
    pub snapshot_stride: usize,
    pub m_trunc: f64,
    pub xi0: f64,
    pub sigma: f64,
    pub norm: f64,
    pub r: f64,
    pub eps: f64,
    pub c: f64,
    pub frames: usize,
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Experiment {
    Simulate(SimulateConfig),
    Strichartz(StrichartzConfig),
    Resonance(ResonanceConfig),
    Flatset(FlatsetConfig),
    Bilinear(BilinearConfig),
    Longtime(LongtimeConfig),
}

pub const TAGS: [&str; 6] = ["simulate", "strichartz", "resonance", "flatset", "bilinear", "longtime"];

impl Experiment {
    pub fn tag(&self) -> &'static str {
        match self {
            Experiment::Simulate(_) => "simulate",
            Experiment::Strichartz(_) => "strichartz",
            Experiment::Resonance(_) => "resonance",
            Experiment::Flatset(_) => "flatset",
            Experiment::Bilinear(_) => "bilinear",
            Experiment::Longtime(_) => "longtime",
        }
    }

    fn to_value(&self) -> Result<Value> {
        let v = match self {
            Experiment::Simulate(c) => Value::try_from(c),
            Experiment::Strichartz(c) => Value::try_from(c),
            Experiment::Resonance(c) => Value::try_from(c),
            Experiment::Flatset(c) => Value::try_from(c),
            Experiment::Bilinear(c) => Value::try_from(c),
            Experiment::Longtime(c) => Value::try_from(c),
        };
        v.map_err(|e| Error::Format(format!("cannot serialize config: {e}")))
    }
}

/// A validated experiment description.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub experiment: Experiment,
}

/// Collects every schema violation of one table before failing.
struct Reader<'a> {
    table: Table,
    path: String,
    errors: &'a mut Vec<String>,
}

impl<'a> Reader<'a> {
    fn new(table: Table, path: &str, errors: &'a mut Vec<String>) -> Self {
        Reader {
            table,
            path: path.to_string(),
            errors,
        }
    }

    fn name(&self, key: &str) -> String {
        if self.path.is_empty() {
            key.to_string()
        } else {
            format!("{}.{key}", self.path)
        }
    }

    fn take(&mut self, key: &str) -> Option<Value> {
        self.table.remove(key)
    }

    fn mismatch(&mut self, key: &str, want: &str, got: &Value) {
        let name = self.name(key);
        self.errors
            .push(format!("{name}: expected {want}, found {}", got.type_str()));
    }

    fn missing(&mut self, key: &str) {
        let name = self.name(key);
        self.errors.push(format!("missing key `{name}`"));
    }

    fn float(&mut self, key: &str, default: Option<f64>) -> f64 {
        match self.take(key) {
            Some(Value::Float(x)) => x,
            Some(Value::Integer(n)) => n as f64,
            Some(v) => {
                self.mismatch(key, "number", &v);
                f64::NAN
            }
            None => default.unwrap_or_else(|| {
                self.missing(key);
                f64::NAN
            }),
        }
    }

    fn int(&mut self, key: &str, default: Option<i64>) -> i64 {
        match self.take(key) {
            Some(Value::Integer(n)) => n,
            Some(v) => {
                self.mismatch(key, "integer", &v);
                0
            }
            None => default.unwrap_or_else(|| {
                self.missing(key);
                0
            }),
        }
    }

    fn count(&mut self, key: &str, default: Option<usize>) -> usize {
        let n = self.int(key, default.map(|d| d as i64));
        if n < 0 {
            let name = self.name(key);
            self.errors.push(format!("{name}: must be nonnegative, found {n}"));
            return 0;
        }
        n as usize
    }

    fn boolean(&mut self, key: &str, default: bool) -> bool {
        match self.take(key) {
            Some(Value::Boolean(b)) => b,
            Some(v) => {
                self.mismatch(key, "boolean", &v);
                default
            }
            None => default,
        }
    }

    fn string(&mut self, key: &str, default: Option<&str>) -> String {
        match self.take(key) {
            Some(Value::String(s)) => s,
            Some(v) => {
                self.mismatch(key, "string", &v);
                String::new()
            }
            None => match default {
                Some(d) => d.to_string(),
                None => {
                    self.missing(key);
                    String::new()
                }
            },
        }
    }

    fn floats(&mut self, key: &str, default: &[f64]) -> Vec<f64> {
        match self.take(key) {
            Some(Value::Array(items)) => {
                let mut out = Vec::with_capacity(items.len());
                for v in &items {
                    match v {
                        Value::Float(x) => out.push(*x),
                        Value::Integer(n) => out.push(*n as f64),
                        other => {
                            self.mismatch(key, "array of numbers", other);
                            return Vec::new();
                        }
                    }
                }
                out
            }
            Some(v) => {
                self.mismatch(key, "array of numbers", &v);
                Vec::new()
            }
            None => default.to_vec(),
        }
    }

    fn pair(&mut self, key: &str, default: [f64; 2]) -> [f64; 2] {
        let v = self.floats(key, &default);
        if v.len() == 2 {
            [v[0], v[1]]
        } else {
            let name = self.name(key);
            self.errors
                .push(format!("{name}: expected 2 numbers, found {}", v.len()));
            default
        }
    }

    fn table(&mut self, key: &str, required: bool) -> Table {
        match self.take(key) {
            Some(Value::Table(t)) => t,
            Some(v) => {
                self.mismatch(key, "table", &v);
                Table::new()
            }
            None => {
                if required {
                    self.missing(key);
                }
                Table::new()
            }
        }
    }

    fn alpha(&mut self, key: &str, default: Option<f64>) -> f64 {
        let a = self.float(key, default);
        self.check_alpha(key, a);
        a
    }

    fn check_alpha(&mut self, key: &str, a: f64) {
        if a.is_finite() && !(1.0..=2.0).contains(&a) {
            let name = self.name(key);
            self.errors.push(format!("{name}: alpha out of [1,2] (found {a})"));
        }
    }

    fn positive(&mut self, key: &str, x: f64) {
        if x.is_finite() && x <= 0.0 {
            let name = self.name(key);
            self.errors.push(format!("{name}: must be positive (found {x})"));
        }
    }

    fn finish(self) {
        let mut keys: Vec<&String> = self.table.keys().collect();
        keys.sort();
        for k in keys {
            let name = if self.path.is_empty() {
                k.clone()
            } else {
                format!("{}.{k}", self.path)
            };
            self.errors.push(format!("unknown key `{name}`"));
        }
    }
}

fn parse_dealias(r: &mut Reader, key: &str) -> Dealias {
    match r.string(key, Some("two-thirds")).as_str() {
        "two-thirds" => Dealias::TwoThirds,
        "none" => Dealias::None,
        other => {
            let name = r.name(key);
            r.errors
                .push(format!("{name}: expected \"two-thirds\" or \"none\", found \"{other}\""));
            Dealias::TwoThirds
        }
    }
}

fn parse_initial(table: Table, errors: &mut Vec<String>) -> InitialData {
    let mut r = Reader::new(table, "simulate.initial", errors);
    let kind = r.string("kind", Some("random"));
    let init = match kind.as_str() {
        "random" => InitialData::Random {
            xi_c: r.float("xi_c", Some(1.0)),
            eta_c: r.float("eta_c", Some(2.0)),
            norm: r.float("norm", Some(0.1)),
        },
        "soliton" => {
            let c = r.float("c", Some(1.0));
            r.positive("c", c);
            InitialData::Soliton {
                c,
                x0: r.float("x0", Some(0.0)),
            }
        }
        "packet" => InitialData::Packet {
            xi0: r.float("xi0", Some(1.0)),
            sigma: r.float("sigma", Some(8.0)),
            norm: r.float("norm", Some(0.05)),
        },
        other => {
            r.errors.push(format!(
                "simulate.initial.kind: expected \"random\", \"soliton\" or \"packet\", found \"{other}\""
            ));
            InitialData::Random {
                xi_c: 1.0,
                eta_c: 2.0,
                norm: 0.1,
            }
        }
    };
    r.finish();
    init
}

fn parse_simulate(table: Table, errors: &mut Vec<String>) -> SimulateConfig {
    let mut r = Reader::new(table, "simulate", errors);
    let alpha = r.alpha("alpha", None);
    let nx = r.count("nx", None);
    let ny = r.count("ny", None);
    let lx = r.float("lx", None);
    r.positive("lx", lx);
    let t_end = r.float("t_end", None);
    let dt = r.float("dt", Some(1e-3));
    r.positive("dt", dt);
    let dealias = parse_dealias(&mut r, "dealias");
    let m_trunc = match r.take("m_trunc") {
        None => None,
        Some(Value::Float(m)) => Some(m),
        Some(Value::Integer(m)) => Some(m as f64),
        Some(v) => {
            r.mismatch("m_trunc", "number", &v);
            None
        }
    };
    if let Some(m) = m_trunc {
        r.positive("m_trunc", m);
    }
    let snapshot_stride = r.count("snapshot_stride", Some(100));
    let nonlinear = r.boolean("nonlinear", true);
    let init_table = r.table("initial", false);
    r.finish();
    let initial = parse_initial(init_table, errors);
    SimulateConfig {
        alpha,
        nx,
        ny,
        lx,
        t_end,
        dt,
        dealias,
        m_trunc,
        snapshot_stride,
        nonlinear,
        initial,
    }
}

fn parse_alphas(r: &mut Reader, default: &[f64]) -> Vec<f64> {
    let alphas = r.floats("alphas", default);
    for a in &alphas {
        r.check_alpha("alphas", *a);
    }
    alphas
}

fn parse_strichartz(table: Table, errors: &mut Vec<String>) -> StrichartzConfig {
    let mut r = Reader::new(table, "strichartz", errors);
    let c = StrichartzConfig {
        alphas: parse_alphas(&mut r, &[1.0, 1.5, 2.0]),
        n_list: r.floats("n_list", &[8.0, 16.0, 32.0, 64.0, 128.0]),
        t_samples: r.count("t_samples", Some(32)),
        lx: r.float("lx", Some(128.0 * std::f64::consts::PI)),
        a: r.float("a", Some(0.0)),
        band: r.count("band", Some(0)) as u32,
    };
    r.finish();
    c
}

fn parse_resonance(table: Table, errors: &mut Vec<String>) -> ResonanceConfig {
    let mut r = Reader::new(table, "resonance", errors);
    let c = ResonanceConfig {
        alphas: parse_alphas(&mut r, &[1.0, 1.5, 1.9, 2.0]),
        shell_min: r.int("shell_min", Some(-3)) as i32,
        shell_max: r.int("shell_max", Some(6)) as i32,
        interior: r.count("interior", Some(16)),
        eta_cap: r.int("eta_cap", Some(64)),
    };
    r.finish();
    c
}

fn parse_flatset(table: Table, errors: &mut Vec<String>) -> FlatsetConfig {
    let mut r = Reader::new(table, "flatset", errors);
    let c = FlatsetConfig {
        alpha: r.alpha("alpha", Some(1.5)),
        point: r.pair("point", [1.0, 1.0]),
        deltas: r.floats("deltas", &[1e-2, 1e-3, 1e-4]),
        domain_xi: r.pair("domain_xi", [0.9, 1.1]),
        domain_eta: r.pair("domain_eta", [0.8, 1.2]),
        tile: r.boolean("tile", true),
    };
    r.finish();
    c
}

fn parse_lemma(s: &str) -> Option<LemmaKind> {
    match s {
        "first-order" => Some(LemmaKind::FirstOrder),
        "second-order" => Some(LemmaKind::SecondOrder),
        "high-low" => Some(LemmaKind::HighLow),
        _ => None,
    }
}

fn parse_bilinear(table: Table, errors: &mut Vec<String>) -> BilinearConfig {
    let mut r = Reader::new(table, "bilinear", errors);
    let lemmas = match r.take("lemmas") {
        None => LemmaKind::ALL.to_vec(),
        Some(Value::Array(items)) => {
            let mut out = Vec::new();
            for v in items {
                match v.as_str().and_then(parse_lemma) {
                    Some(k) => out.push(k),
                    None => r.errors.push(format!(
                        "bilinear.lemmas: expected \"first-order\", \"second-order\" or \"high-low\", found {v}"
                    )),
                }
            }
            out
        }
        Some(v) => {
            r.mismatch("lemmas", "array of strings", &v);
            Vec::new()
        }
    };
    let trials = r.count("trials", Some(1000));
    r.finish();
    BilinearConfig { lemmas, trials }
}

fn parse_longtime(table: Table, errors: &mut Vec<String>) -> LongtimeConfig {
    let mut r = Reader::new(table, "longtime", errors);
    let c = LongtimeConfig {
        alpha: r.alpha("alpha", Some(1.9)),
        nx: r.count("nx", Some(512)),
        ny: r.count("ny", Some(16)),
        lx: r.float("lx", Some(128.0 * std::f64::consts::PI)),
        t_end: r.float("t_end", Some(10.0)),
        dt: r.float("dt", Some(1e-3)),
        snapshot_stride: r.count("snapshot_stride", Some(100)),
        m_trunc: r.float("m_trunc", Some(16.0)),
        xi0: r.float("xi0", Some(1.0)),
        sigma: r.float("sigma", Some(8.0)),
        norm: r.float("norm", Some(0.05)),
        r: r.float("r", Some(1.1)),
        eps: r.float("eps", Some(0.1)),
        c: r.float("c", Some(1.0)),
        frames: r.count("frames", Some(8)),
        gamma: r.float("gamma", Some(1.0)),
    };
    for (k, v) in [("dt", c.dt), ("lx", c.lx), ("m_trunc", c.m_trunc), ("c", c.c), ("gamma", c.gamma)] {
        r.positive(k, v);
    }
    if c.r.is_finite() && c.r <= 1.0 {
        r.errors.push(format!("longtime.r: must exceed 1 (found {})", c.r));
    }
    r.finish();
    c
}

/// Parses and validates a TOML experiment description.
///
/// Top-level keys are `experiment` (one of [`TAGS`]), `seed` (default 0)
/// and `output` (optional directory); the parameters live in a table named
/// after the experiment. All violations are reported together.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let table: Table = text
        .parse()
        .map_err(|e: toml::de::Error| Error::Config(vec![format!("parse error: {}", e.message())]))?;
    let mut errors = Vec::new();
    let mut r = Reader::new(table, "", &mut errors);
    let tag = r.string("experiment", None);
    let seed = r.int("seed", Some(0));
    if seed < 0 {
        r.errors.push(format!("seed: must be nonnegative, found {seed}"));
    }
    let output = match r.take("output") {
        None => None,
        Some(Value::String(s)) => Some(PathBuf::from(s)),
        Some(v) => {
            r.mismatch("output", "string", &v);
            None
        }
    };
    let experiment = if TAGS.contains(&tag.as_str()) {
        let sub = r.table(&tag, tag == "simulate");
        Some(match tag.as_str() {
            "simulate" => Experiment::Simulate(parse_simulate(sub, r.errors)),
            "strichartz" => Experiment::Strichartz(parse_strichartz(sub, r.errors)),
            "resonance" => Experiment::Resonance(parse_resonance(sub, r.errors)),
            "flatset" => Experiment::Flatset(parse_flatset(sub, r.errors)),
            "bilinear" => Experiment::Bilinear(parse_bilinear(sub, r.errors)),
            _ => Experiment::Longtime(parse_longtime(sub, r.errors)),
        })
    } else {
        if !tag.is_empty() {
            r.errors.push(format!(
                "experiment: unknown tag \"{tag}\" (expected one of {})",
                TAGS.join(", ")
            ));
        }
        None
    };
    r.finish();
    match experiment {
        Some(experiment) if errors.is_empty() => Ok(ExperimentConfig {
            seed: seed as u64,
            output,
            experiment,
        }),
        _ => Err(Error::Config(errors)),
    }
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    parse_config(&std::fs::read_to_string(path)?)
}

impl ExperimentConfig {
    /// The configuration with every default spelled out.
    pub fn to_toml(&self) -> Result<String> {
        let mut table = Table::new();
        table.insert("experiment".into(), Value::String(self.experiment.tag().into()));
        table.insert("seed".into(), Value::Integer(self.seed as i64));
        if let Some(o) = &self.output {
            table.insert("output".into(), Value::String(o.to_string_lossy().into_owned()));
        }
        table.insert(self.experiment.tag().into(), self.experiment.to_value()?);
        toml::to_string(&table).map_err(|e| Error::Format(format!("cannot serialize config: {e}")))
    }

    /// Built-in defaults for `tag`; `simulate` runs a 256×64 random-data
    /// evolution to `t = 1`.
    pub fn default_for(tag: &str) -> Result<Self> {
        let text = if tag == "simulate" {
            format!(
                "experiment = \"simulate\"\n[simulate]\nalpha = 1.9\nnx = 256\nny = 64\nlx = {}\nt_end = 1.0\nm_trunc = 64.0\n",
                32.0 * std::f64::consts::PI
            )
        } else {
            format!("experiment = \"{tag}\"\n")
        };
        parse_config(&text)
    }
}
