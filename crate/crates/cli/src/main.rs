use std::path::PathBuf;
use std::process::ExitCode;

use anosovlab_cli::config::env_vars;
use anosovlab_cli::{run, CliError, CliResult, Command, RunConfig};
use clap::Parser;

/// Diagnostics for projective Anosov subgroups and their flow space.
#[derive(Parser, Debug)]
#[command(name = "anosovlab", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// Configuration file.
    #[arg(long, env = "ANOSOVLAB_CONFIG")]
    config: PathBuf,
    /// Output directory for CSV and JSON reports.
    #[arg(long, env = "ANOSOVLAB_OUT", default_value = "out")]
    out: PathBuf,
    /// Overrides the seed in the configuration.
    #[arg(long, env = "ANOSOVLAB_SEED")]
    seed: Option<u64>,
    /// Worker threads (0 picks the number of cores).
    #[arg(long, env = "ANOSOVLAB_THREADS", default_value_t = 0)]
    threads: usize,
}

fn execute(args: &Args) -> CliResult<()> {
    if args.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(args.threads)
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }
    let mut cfg = RunConfig::from_file(&args.config, &env_vars())?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    cfg.out = args.out.clone();
    let report = run(args.command, &cfg)?;
    report.write(&cfg, &cfg.out)?;
    println!("{}", report.json(&cfg).trim_end());
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("anosovlab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
