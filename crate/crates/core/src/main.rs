use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cooper_oam::config::{load_config, ConfigError, Format};
use cooper_oam::sweep::{run, Command, RunError};

const THREADS_ENV: &str = "COOPER_OAM_THREADS";

#[derive(Parser)]
#[command(name = "cooper-oam", version, about = "Two-photon OAM emission from a superconducting LED")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// CP and BQP spectral rate surfaces
    Rates(Args),
    /// Pair density matrices per temperature and enhancement
    Dm(Args),
    /// Fidelity against the ideal pair state
    Fidelity(Args),
}

#[derive(clap::Args)]
struct Args {
    /// TOML run file, or a built-in preset (fig2, fig3, fig4, fig4-minus, fig5)
    #[arg(long)]
    config: PathBuf,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated subset of csv,json,svg
    #[arg(long, value_delimiter = ',')]
    format: Option<Vec<Format>>,
    /// Worker threads, 0 for all cores
    #[arg(long)]
    threads: Option<usize>,
    /// Override a config key, e.g. --set grid.nodes=8192
    #[arg(long = "set", value_name = "SECTION.KEY=VALUE")]
    set: Vec<String>,
    /// Logarithmic color scale for heatmaps
    #[arg(long)]
    log_scale: bool,
}

fn execute(command: Command, args: Args) -> Result<(), RunError> {
    let mut cfg = load_config(&args.config, &args.set)?;
    if let Some(dir) = args.out {
        cfg.output.dir = dir;
    }
    if let Some(f) = args.format {
        cfg.output.formats = f.into_iter().collect();
    }
    let threads = match args.threads {
        Some(n) => Some(n),
        None => match std::env::var(THREADS_ENV) {
            Ok(v) => Some(v.trim().parse().map_err(|_| ConfigError::Validation {
                key: THREADS_ENV.into(),
                reason: format!("not a thread count: `{v}`"),
            })?),
            Err(_) => None,
        },
    };
    if let Some(n) = threads {
        cfg.output.threads = n;
    }
    if args.log_scale {
        cfg.output.log_scale = true;
    }
    let manifest = run(command, &cfg)?;
    for o in &manifest.outputs {
        println!("{}", cfg.output.dir.join(&o.file).display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Cmd::Rates(a) => (Command::Rates, a),
        Cmd::Dm(a) => (Command::Dm, a),
        Cmd::Fidelity(a) => (Command::Fidelity, a),
    };
    match execute(command, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
