use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::Rng;

use mpcsb::harness::{emit, run_experiment, ExperimentConfig};
use mpcsb::oracle::{argmin_action, enumerate_actions};
use mpcsb::{stream_rng, STREAM_INSTANCE};

#[derive(Parser)]
#[command(name = "mpcsb", version, about = "Multi-play combinatorial semi-bandit experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run all trials of an experiment and write regret.csv and summary.json.
    Run(RunArgs),
    /// List every action of the configured instance.
    Enumerate {
        config: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        limit: usize,
    },
    /// Compare the oracle with brute force on random loss vectors.
    OracleCheck {
        config: PathBuf,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 100_000)]
        limit: usize,
    },
}

#[derive(Args)]
struct RunArgs {
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn load(path: &PathBuf) -> Result<ExperimentConfig> {
    ExperimentConfig::load(path).with_context(|| format!("loading {}", path.display()))
}

fn run(args: RunArgs) -> Result<()> {
    let mut cfg = load(&args.config)?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(trials) = args.trials {
        cfg.trials = trials;
    }
    if let Some(out) = args.out {
        cfg.output = Some(out);
    }
    let out = cfg.output.clone().unwrap_or_else(|| PathBuf::from("out"));
    let result = run_experiment(&cfg)?;
    emit(&result, &out)?;
    println!(
        "{}: {} trials x {} rounds, final mean pseudo-regret {:.3} ({:.1}s) -> {}",
        cfg.algorithm.kind.name(),
        cfg.trials,
        cfg.horizon,
        result.pseudo.mean.last().copied().unwrap_or(0.0),
        result.runtime_secs,
        out.display()
    );
    Ok(())
}

fn enumerate(config: PathBuf, limit: usize) -> Result<()> {
    let cfg = load(&config)?;
    let mut out = io::stdout().lock();
    for a in enumerate_actions(&cfg.instance, limit)? {
        match writeln!(out, "{a}") {
            Err(e) if e.kind() == io::ErrorKind::BrokenPipe => return Ok(()),
            other => other?,
        }
    }
    Ok(())
}

fn oracle_check(config: PathBuf, samples: usize, seed: Option<u64>, limit: usize) -> Result<()> {
    let cfg = load(&config)?;
    let spec = &cfg.instance;
    let actions = enumerate_actions(spec, limit)?;
    let mut rng = stream_rng(seed.unwrap_or(cfg.seed), STREAM_INSTANCE);
    let mut mismatches = 0;
    for _ in 0..samples {
        let rho: Vec<f64> = (0..spec.dim()).map(|_| rng.random::<f64>()).collect();
        let oracle = argmin_action(spec, &rho)?.dot(&rho);
        let brute = actions
            .iter()
            .map(|a| a.dot(&rho))
            .fold(f64::INFINITY, f64::min);
        if oracle != brute {
            mismatches += 1;
            eprintln!("mismatch: rho = {rho:?}, oracle {oracle}, brute force {brute}");
        }
    }
    println!(
        "{samples} samples over {} actions: {mismatches} mismatches",
        actions.len()
    );
    if mismatches > 0 {
        bail!("oracle disagrees with brute force");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::Enumerate { config, limit } => enumerate(config, limit),
        Command::OracleCheck {
            config,
            samples,
            seed,
            limit,
        } => oracle_check(config, samples, seed, limit),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
