use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use fkplab::harness::{load_config, run, ExperimentConfig};

/// Experiments for the dispersion-generalized KP-II equation on ℝ × 𝕋.
#[derive(Parser)]
#[command(name = "fkplab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run whatever experiment the config file names.
    Run(Common),
    /// Evolve initial data and write checkpoints plus mass/energy diagnostics.
    Simulate(Common),
    /// Fit L⁴ Strichartz exponents on Knapp caps.
    Strichartz(Common),
    /// Scan the resonance lower bound over dyadic frequencies.
    Resonance(Common),
    /// Measure flat lengths and flat tilings of the phase surface.
    Flatset(Common),
    /// Randomized bilinear convolution ratio suites.
    Bilinear(Common),
    /// Weighted-mass monotonicity and rightward mass of a small packet.
    Longtime(Common),
}

#[derive(Args)]
struct Common {
    /// TOML experiment description; built-in defaults when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, env = "FKP_OUT")]
    out: Option<PathBuf>,
    /// Seed override.
    #[arg(long, env = "FKP_SEED")]
    seed: Option<u64>,
    /// Worker threads.
    #[arg(long, env = "FKP_THREADS")]
    threads: Option<usize>,
}

fn execute(tag: Option<&str>, args: Common) -> Result<()> {
    if let Some(n) = args.threads {
        if n == 0 {
            bail!("--threads must be positive");
        }
        fkplab::par::init_threads(n);
    }
    let mut config = match (&args.config, tag) {
        (Some(path), _) => load_config(path).with_context(|| format!("loading {}", path.display()))?,
        (None, Some(tag)) => ExperimentConfig::default_for(tag)?,
        (None, None) => bail!("`run` needs --config"),
    };
    if let Some(tag) = tag {
        if config.experiment.tag() != tag {
            bail!(
                "config describes a `{}` experiment, not `{tag}`",
                config.experiment.tag()
            );
        }
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    let dir = args
        .out
        .or_else(|| config.output.clone())
        .unwrap_or_else(|| PathBuf::from("fkplab-out").join(config.experiment.tag()));
    let summary = run(&config, &dir)?;
    println!("{}", summary.dir.display());
    for f in &summary.files {
        println!("  {f}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (tag, args) = match cli.command {
        Command::Run(a) => (None, a),
        Command::Simulate(a) => (Some("simulate"), a),
        Command::Strichartz(a) => (Some("strichartz"), a),
        Command::Resonance(a) => (Some("resonance"), a),
        Command::Flatset(a) => (Some("flatset"), a),
        Command::Bilinear(a) => (Some("bilinear"), a),
        Command::Longtime(a) => (Some("longtime"), a),
    };
    match execute(tag, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
