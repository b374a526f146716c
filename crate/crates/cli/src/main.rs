use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use mccdma::equilibrium::Status;
use mccdma::montecarlo::{Execution, ExperimentSpec};
use mccdma::PowerAllocation;
use mccdma_cli::commands;
use mccdma_cli::config::{load_spec, ConfigFile};
use mccdma_cli::io::{read_channels, read_powers};
use mccdma_cli::manifest::RunManifest;
use mccdma_cli::CliError;

/// Energy-efficient multicarrier power control: equilibria, dynamics and
/// Monte-Carlo statistics.
#[derive(Parser)]
#[command(name = "mccdma", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// TOML config, JSON manifest, or CSV with an embedded manifest.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Directory for `<command>.csv` and `<command>.manifest.json`;
    /// stdout when unset.
    #[arg(long, env = "MCCDMA_OUT_DIR")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Sampling {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<u64>,
    /// Run trials on one thread.
    #[arg(long)]
    serial: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Optimal SIR target for the efficiency exponent.
    GammaStar {
        #[arg(long, default_value_t = 100)]
        exponent: u32,
        #[arg(long, default_value_t = mccdma::efficiency::GAMMA_STAR_TOLERANCE)]
        tol: f64,
    },
    /// One user's best response to the other users' powers.
    BestResponse {
        #[command(flatten)]
        common: Common,
        /// Channel gains, K rows by D columns.
        #[arg(long)]
        channels: PathBuf,
        /// One-based user index.
        #[arg(long)]
        user: usize,
        /// Current powers, K×D; all zero when omitted.
        #[arg(long)]
        powers: Option<PathBuf>,
    },
    /// Every pure Nash equilibrium of a channel realization.
    Equilibria {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        channels: PathBuf,
    },
    /// Sequential best-response dynamics.
    Dynamics {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        channels: PathBuf,
        /// Starting powers, K×D; all zero when omitted.
        #[arg(long)]
        powers: Option<PathBuf>,
    },
    /// Distribution of the number of users on the first carrier.
    Pmf {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sampling: Sampling,
        /// Processing gains to sweep, comma separated.
        #[arg(long, value_delimiter = ',')]
        processing_gains: Option<Vec<u32>>,
    },
    /// Total utility at equilibrium versus independent per-carrier control.
    Compare {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sampling: Sampling,
    },
}

fn base_spec(config: Option<&Path>) -> Result<ExperimentSpec, CliError> {
    match config {
        Some(path) => load_spec(path),
        None => ConfigFile::default().resolve(),
    }
}

fn sampled_spec(common: &Common, sampling: &Sampling) -> Result<ExperimentSpec, CliError> {
    let mut spec = base_spec(common.config.as_deref())?;
    if let Some(seed) = sampling.seed {
        spec.seed = seed;
    }
    if let Some(trials) = sampling.trials {
        spec.trials = trials;
    }
    if sampling.serial {
        spec.execution = Execution::Serial;
    }
    spec.validate()?;
    Ok(spec)
}

fn emit(
    name: &str,
    common: &Common,
    mut manifest: RunManifest,
    table: &str,
    started: Instant,
) -> Result<(), CliError> {
    manifest.elapsed_ms = started.elapsed().as_millis();
    let Some(dir) = &common.out else {
        print!("{}{table}", manifest.csv_header_line());
        return Ok(());
    };
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io {
        path: dir.clone(),
        source: e,
    })?;
    let csv_path = dir.join(format!("{name}.csv"));
    let json_path = dir.join(format!("{name}.manifest.json"));
    manifest.outputs = vec![csv_path.clone(), json_path.clone()];
    let write = |path: &PathBuf, text: String| {
        std::fs::write(path, text).map_err(|e| CliError::Io {
            path: path.clone(),
            source: e,
        })
    };
    write(&csv_path, format!("{}{table}", manifest.csv_header_line()))?;
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    write(&json_path, json + "\n")?;
    eprintln!("wrote {}", csv_path.display());
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let started = Instant::now();
    match cli.command {
        Command::GammaStar { exponent, tol } => {
            print!("{}", commands::gamma_star(exponent, tol)?);
            Ok(())
        }
        Command::BestResponse {
            common,
            channels,
            user,
            powers,
        } => {
            let spec = base_spec(common.config.as_deref())?;
            let h = read_channels(&channels)?;
            let config = commands::fit_config(&spec.base, &h);
            let others = match &powers {
                Some(path) => read_powers(path, config.p_max)?,
                None => PowerAllocation::zeros(h.users(), h.carriers()),
            };
            if user == 0 {
                return Err(CliError::Usage("--user is one-based".into()));
            }
            let table = commands::best_response_table(&config, &h, &others, user - 1)?;
            let mut manifest = RunManifest::new("best-response", common.config.clone(), spec);
            manifest.inputs = std::iter::once(channels).chain(powers).collect();
            emit("best-response", &common, manifest, &table, started)
        }
        Command::Equilibria { common, channels } => {
            let spec = base_spec(common.config.as_deref())?;
            let h = read_channels(&channels)?;
            let config = commands::fit_config(&spec.base, &h);
            let (table, found) = commands::equilibria_table(&config, &h)?;
            let mut manifest = RunManifest::new("equilibria", common.config.clone(), spec);
            manifest.inputs = vec![channels];
            emit("equilibria", &common, manifest, &table, started)?;
            if found == 0 {
                return Err(CliError::NoEquilibrium);
            }
            Ok(())
        }
        Command::Dynamics {
            common,
            channels,
            powers,
        } => {
            let spec = base_spec(common.config.as_deref())?;
            let h = read_channels(&channels)?;
            let config = commands::fit_config(&spec.base, &h);
            let initial = match &powers {
                Some(path) => read_powers(path, config.p_max)?,
                None => PowerAllocation::zeros(h.users(), h.carriers()),
            };
            let (table, result) = commands::dynamics_table(&config, &h, &initial, &spec.dynamics)?;
            let mut manifest = RunManifest::new("dynamics", common.config.clone(), spec);
            manifest.inputs = std::iter::once(channels).chain(powers).collect();
            emit("dynamics", &common, manifest, &table, started)?;
            match result.status {
                Status::Converged => Ok(()),
                Status::NoEquilibrium => Err(CliError::NoEquilibrium),
            }
        }
        Command::Pmf {
            common,
            sampling,
            processing_gains,
        } => {
            let mut spec = sampled_spec(&common, &sampling)?;
            if let Some(gains) = processing_gains {
                spec.sweep = mccdma::montecarlo::Sweep::ProcessingGain(gains);
            }
            let table = commands::pmf_table(&spec)?;
            let manifest = RunManifest::new("pmf", common.config.clone(), spec);
            emit("pmf", &common, manifest, &table, started)
        }
        Command::Compare { common, sampling } => {
            let spec = sampled_spec(&common, &sampling)?;
            let table = commands::compare_table(&spec)?;
            let manifest = RunManifest::new("compare", common.config.clone(), spec);
            emit("compare", &common, manifest, &table, started)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
