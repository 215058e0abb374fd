use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use qfp_cli::commands;
use qfp_cli::config::{ExperimentConfig, OutputFormat};
use qfp_core::analysis::{BoundMode, DeltaQConvention};
use qfp_core::protocol::DoubleClickPolicy;

#[derive(Parser, Debug)]
#[command(name = "qfp", version, about = "Coherent-state quantum fingerprinting experiments")]
struct Cli {
    /// TOML experiment configuration; defaults apply to missing keys.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    trials: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    #[arg(long, global = true)]
    mode: Option<BoundMode>,
    #[arg(long = "delta-q-convention", global = true)]
    delta_q_convention: Option<DeltaQConvention>,
    #[arg(long = "double-click-policy", global = true)]
    double_click_policy: Option<DoubleClickPolicy>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Encode a QFP1 bit-string file.
    Encode { input: PathBuf },
    /// Monte Carlo runs of the protocol on two QFP1 input files.
    Simulate { x: PathBuf, x_prime: PathBuf },
    /// Transmitted information against input size.
    Sweep,
    /// Click probabilities, expected fractions, error and dimension bounds.
    Bounds,
    /// Required mean photon numbers.
    Optimize,
    /// Print the effective configuration as TOML.
    ShowConfig,
}

fn effective_config(cli: &Cli) -> Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(v) = cli.seed {
        cfg.master_seed = v;
    }
    if let Some(v) = cli.trials {
        cfg.trials = v;
    }
    if let Some(v) = &cli.out {
        cfg.output = Some(v.clone());
    }
    if let Some(v) = cli.format {
        cfg.format = v;
    }
    if let Some(v) = cli.mode {
        cfg.mode = v;
    }
    if let Some(v) = cli.delta_q_convention {
        cfg.delta_q_convention = v;
    }
    if let Some(v) = cli.double_click_policy {
        cfg.double_click_policy = v;
    }
    cfg.validate().context("invalid configuration")?;
    Ok(cfg)
}

fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => Ok(std::io::stdout().write_all(bytes)?),
    }
}

fn run(cli: Cli) -> Result<()> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    let cfg = effective_config(&cli)?;
    let out = cfg.output.as_deref();
    match &cli.command {
        Command::Encode { input } => {
            let enc = commands::encode(&cfg, input)?;
            emit(out, &enc.codeword)?;
            if out.is_some() {
                println!("{}", enc.summary);
            } else {
                eprintln!("{}", enc.summary);
            }
        }
        Command::Simulate { x, x_prime } => {
            emit(out, commands::simulate(&cfg, x, x_prime)?.render(cfg.format).as_bytes())?;
        }
        Command::Sweep => emit(out, commands::sweep(&cfg)?.as_bytes())?,
        Command::Bounds => emit(out, commands::bounds(&cfg)?.render(cfg.format).as_bytes())?,
        Command::Optimize => emit(out, commands::optimize(&cfg)?.render(cfg.format).as_bytes())?,
        Command::ShowConfig => emit(out, cfg.to_toml()?.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
