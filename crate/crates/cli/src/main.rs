use std::path::{Path, PathBuf};
use std::process::ExitCode;

use acoustic_bh_cli::commands::{cmd_geometry, cmd_limit, cmd_spectrum, Report};
use acoustic_bh_cli::config::{Format, LoadedConfig};
use acoustic_bh_cli::output::atomic_write;
use acoustic_bh_cli::verify::{run, Suite};
use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

#[derive(Parser)]
#[command(name = "acoustic-bh", version, about = "Horizons, wave packets and particle spectra of acoustic black holes")]
struct Cli {
    /// Worker threads for the parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides output.dir of the config).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand)]
enum Command {
    /// Ergosphere, geodesics, horizon and corners of the configured field.
    Geometry(RunArgs),
    /// Spectral density and particle numbers of the configured packet.
    Spectrum(RunArgs),
    /// Normalized a -> infinity limit and its a-sweep.
    Limit(RunArgs),
    /// Oracle-comparison suites; exits nonzero on any failed check.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        /// Also write verify_report.json here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn resolve(args: &RunArgs) -> Result<(LoadedConfig, PathBuf, Format)> {
    let cfg = LoadedConfig::from_path(&args.config)?;
    let out = args
        .out
        .clone()
        .or_else(|| cfg.config.output.dir.clone().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    let format = args.format.or(cfg.config.output.format).unwrap_or_default();
    Ok((cfg, out, format))
}

fn run_command(args: &RunArgs, f: fn(&LoadedConfig, &Path, Format) -> Result<Report>) -> Result<ExitCode> {
    let (cfg, out, format) = resolve(args)?;
    let report = f(&cfg, &out, format).map_err(|e| {
        let body = json!({"error": format!("{e:#}")});
        let _ = atomic_write(&out.join("error.json"), format!("{body:#}\n").as_bytes());
        e
    })?;
    for file in &report.files {
        println!("{file}");
    }
    if report.partial() {
        eprintln!("{:#}", json!({"partial": true, "errors": report.errors}));
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = (|| -> Result<ExitCode> {
        if let Some(n) = cli.threads {
            rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring threads")?;
        }
        match &cli.command {
            Command::Geometry(a) => run_command(a, cmd_geometry),
            Command::Spectrum(a) => run_command(a, cmd_spectrum),
            Command::Limit(a) => run_command(a, cmd_limit),
            Command::Verify { suite, out } => {
                let report = run(*suite);
                let body = serde_json::to_string_pretty(&report)? + "\n";
                if let Some(dir) = out {
                    atomic_write(&dir.join("verify_report.json"), body.as_bytes())?;
                }
                print!("{body}");
                Ok(if report.passed { ExitCode::SUCCESS } else { ExitCode::FAILURE })
            }
        }
    })();
    result.unwrap_or_else(|e| {
        eprintln!("{:#}", json!({"error": format!("{e:#}")}));
        ExitCode::FAILURE
    })
}
