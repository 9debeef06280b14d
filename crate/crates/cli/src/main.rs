mod config;
mod error;
mod experiments;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::config::{Experiment, ExperimentConfig};
use crate::error::CliError;

/// Thread count override for the parallel parts (ensembles, eigenstate diagnostics).
const THREADS_ENV: &str = "QLM_THREADS";

#[derive(Parser)]
#[command(name = "qlm", version, about = "Quantum link model scars and Trotter circuit experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Run { config: PathBuf },
    /// Check a config file without running anything.
    Validate { config: PathBuf },
    /// Print the available experiment names.
    ListExperiments,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(e.exit_code());
    }
    let result = match cli.command {
        Command::Run { config } => load(&config).and_then(|(cfg, text)| run(&cfg, &text)),
        Command::Validate { config } => load(&config).map(|(cfg, _)| {
            println!("{}: ok ({}, L={}, N={})", config.display(), cfg.experiment, cfg.sites, cfg.steps);
        }),
        Command::ListExperiments => {
            for e in Experiment::ALL {
                println!("{:<24} {}", e.name(), e.summary());
            }
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| CliError::InvalidValue {
        key: THREADS_ENV.into(),
        reason: format!("{raw:?} is not a positive integer"),
    })?;
    // a second initialization can only happen in-process, which the binary never does
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn load(path: &Path) -> Result<(ExperimentConfig, String), CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::ReadConfig { path: path.to_path_buf(), source })?;
    Ok((ExperimentConfig::parse(&text)?, text))
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn run(cfg: &ExperimentConfig, config_text: &str) -> Result<(), CliError> {
    let artifacts = experiments::run(cfg)?;

    let outputs: Vec<Value> =
        artifacts.files.iter().map(|(name, bytes)| json!({"path": name, "sha256": sha256_hex(bytes)})).collect();
    let schedule = match cfg.experiment {
        Experiment::RandomEnsemble => "random",
        _ => cfg.order.name(),
    };
    let manifest = json!({
        "experiment": cfg.experiment.name(),
        "version": env!("CARGO_PKG_VERSION"),
        "config_sha256": sha256_hex(config_text.as_bytes()),
        "seed": cfg.seed,
        "params": {
            "L": cfg.sites,
            "tau": cfg.tau,
            "T": cfg.final_time,
            "N": cfg.steps,
            "M": cfg.runs,
            "K": cfg.group_size,
            "seed": cfg.seed,
            "initial": cfg.initial.label(),
            "site": cfg.site,
            "order": cfg.order.name(),
            "entropy": cfg.entropy,
            "scar_mode": cfg.scar_mode.name(),
            "scar_peaks": cfg.scar_peaks,
            "overlap_floor": cfg.overlap_floor,
            "entropy_ceiling": cfg.entropy_ceiling,
            "window": cfg.window,
        },
        "schedule_kind": schedule,
        "rng": {
            "algorithm": "ChaCha8",
            "crate": "rand_chacha 0.9",
            "seeding": "seed_from_u64(seed), stream = run index",
        },
        "results": artifacts.results,
        "outputs": outputs,
    });
    let mut manifest_bytes = serde_json::to_vec_pretty(&manifest).expect("manifest is plain JSON");
    manifest_bytes.push(b'\n');

    let mut files = artifacts.files;
    files.push(("manifest.json".to_string(), manifest_bytes));
    write_all(&cfg.output, &files)?;
    for (name, _) in &files {
        println!("{}", cfg.output.join(name).display());
    }
    Ok(())
}

/// Writes every file or none: on the first failure the files already written
/// are removed again.
fn write_all(dir: &Path, files: &[(String, Vec<u8>)]) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Output { path: dir.to_path_buf(), source })?;
    let mut written = Vec::new();
    for (name, bytes) in files {
        let path = dir.join(name);
        if let Err(source) = fs::write(&path, bytes) {
            for p in &written {
                let _ = fs::remove_file(p);
            }
            return Err(CliError::Output { path, source });
        }
        written.push(path);
    }
    Ok(())
}
