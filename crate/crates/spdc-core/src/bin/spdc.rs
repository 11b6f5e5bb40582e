//! Command-line driver for the SPDC simulator.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use spdc_core::config::{parse_config_file, serialize_config};
use spdc_core::runner::{run, sweep, RunOverrides};

#[derive(Parser)]
#[command(name = "spdc", version, about = "Biphoton spectra of chirped quasi-phase-matched crystals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Run configuration (TOML).
    config: PathBuf,
    /// Output directory (overrides the config).
    #[arg(long)]
    output_dir: Option<PathBuf>,
    /// Worker threads; results are independent of this.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Skip heatmap images.
    #[arg(long)]
    no_heatmap: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the configured observable and write its files.
    Run(CommonArgs),
    /// Fan a parameter sweep out into per-value subdirectories.
    Sweep(CommonArgs),
    /// Parse a config, apply defaults, and print the resolved document.
    Validate {
        /// Run configuration (TOML).
        config: PathBuf,
    },
}

fn main() -> ExitCode {
    match main_inner() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn main_inner() -> anyhow::Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(args) => {
            init_threads(args.threads)?;
            let cfg = parse_config_file(&args.config)?;
            let outcome = run(
                &cfg,
                &RunOverrides {
                    output_dir: args.output_dir,
                    no_heatmap: args.no_heatmap,
                },
            )?;
            for w in &outcome.warnings {
                eprintln!("warning: {w}");
            }
            for f in &outcome.files {
                println!("{}", f.display());
            }
        }
        Command::Sweep(args) => {
            init_threads(args.threads)?;
            let cfg = parse_config_file(&args.config)?;
            let outcomes = sweep(
                &cfg,
                &RunOverrides {
                    output_dir: args.output_dir,
                    no_heatmap: args.no_heatmap,
                },
            )?;
            for outcome in &outcomes {
                for w in &outcome.warnings {
                    eprintln!("warning [{}]: {w}", outcome.directory.display());
                }
                println!("{}", outcome.directory.display());
            }
        }
        Command::Validate { config } => {
            let cfg = parse_config_file(&config)?;
            print!("{}", serialize_config(&cfg));
        }
    }
    Ok(())
}

fn init_threads(threads: usize) -> anyhow::Result<()> {
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()?;
    }
    Ok(())
}
