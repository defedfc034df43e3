use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use geoboot::io::{read_config, Config};
use geoboot::pipeline::{self, RunOptions, Stage};
use geoboot::Error;

/// Spatial bootstrap and Bayesian ranking of conceptual geological models.
#[derive(Debug, Parser)]
#[command(name = "geoboot", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML run configuration; the desk-scale preset when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Override the master seed.
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,

    /// Worker threads.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,

    /// Skip jobs already completed for the same config hash and seed.
    #[arg(long, global = true)]
    resume: bool,

    /// Run directory.
    #[arg(long, global = true, value_name = "DIR", default_value = "run")]
    out: PathBuf,

    /// Reject unknown config keys instead of warning.
    #[arg(long, global = true)]
    strict_config: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate the initial map into the run directory.
    MakeInitial,
    /// Run every stage.
    RunAll,
    /// Run one stage: realities, samples, scenarios, bayes or rank.
    Stage { name: String },
    /// Summarize a run directory.
    Report,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) => 2,
        Error::JobsFailed { .. } => 3,
        Error::MissingStage(_) => 4,
        _ => 1,
    }
}

fn load_config(cli: &Cli) -> Result<Config, Error> {
    let mut config = match &cli.config {
        Some(p) => read_config(p, cli.strict_config)?,
        None => {
            log::info!("no --config given; using the desk-scale preset");
            Config::desk()
        }
    };
    if let Some(seed) = cli.seed {
        config.seeds.master = seed;
    }
    Ok(config)
}

fn run(cli: &Cli) -> Result<(), Error> {
    let opts = RunOptions {
        out: cli.out.clone(),
        jobs: cli
            .jobs
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())),
        resume: cli.resume,
    };
    match &cli.command {
        Command::MakeInitial => {
            let path = pipeline::cmd_make_initial(&load_config(cli)?, &cli.out)?;
            println!("wrote {}", path.display());
        }
        Command::RunAll => {
            let summary = pipeline::cmd_run_all(load_config(cli)?, &opts)?;
            println!("{summary}");
        }
        Command::Stage { name } => {
            let stage: Stage = name.parse()?;
            let summary = pipeline::cmd_stage(load_config(cli)?, stage, &opts)?;
            println!("{summary}");
        }
        Command::Report => print!("{}", pipeline::report(&cli.out)?),
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
