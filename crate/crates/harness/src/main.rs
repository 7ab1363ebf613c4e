use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tvqe_harness::config::{Experiment, SystemKind};
use tvqe_harness::experiments::{self, write_artifacts};
use tvqe_harness::{ExperimentConfig, Result};

#[derive(Parser)]
#[command(name = "tvqe", version, about = "Variational excited-state experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Run {
        #[command(flatten)]
        common: Common,
        /// Worker threads for bond-length scans.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Compare analytic and finite-difference energy gradients.
    ValidateGradients {
        #[command(flatten)]
        common: Common,
        /// Finite-difference step, overriding the config.
        #[arg(long)]
        fd_step: Option<f64>,
        #[arg(long)]
        draws: Option<usize>,
    },
    /// Print the sector-resolved spectrum of a system.
    ExactSpectrum {
        #[command(flatten)]
        common: Common,
    },
    /// List the Hamiltonian files in the data directory.
    ListData {
        #[arg(long, default_value = "data")]
        data_dir: PathBuf,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: Option<PathBuf>,
    /// h2, lih or hubbard; used when no config is given or to override it.
    #[arg(long)]
    system: Option<String>,
    /// Comma-separated list of methods.
    #[arg(long, value_delimiter = ',')]
    method: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    data_dir: Option<PathBuf>,
    #[arg(long)]
    bond_length: Option<f64>,
}

impl Common {
    fn load(&self, fallback: Experiment) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => {
                let system = SystemKind::parse(self.system.as_deref().unwrap_or("h2"))?;
                ExperimentConfig::for_system(fallback, system)
            }
        };
        if let (Some(s), Some(_)) = (&self.system, &self.config) {
            cfg.system = SystemKind::parse(s)?;
        }
        if !self.method.is_empty() {
            cfg.methods = self.method.clone();
        }
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(out) = &self.out {
            cfg.out_dir = out.clone();
        }
        if let Some(d) = &self.data_dir {
            cfg.data_dir = d.clone();
        }
        if self.bond_length.is_some() {
            cfg.bond_length = self.bond_length;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Run { common, jobs } => {
            let cfg = common.load(Experiment::Convergence)?;
            let report = experiments::run(&cfg, jobs)?;
            write_artifacts(&report, &cfg.out_dir)?;
            print!("{}", report.text);
            log::info!("wrote {} files to {}", report.artifacts.len(), cfg.out_dir.display());
        }
        Command::ValidateGradients { common, fd_step, draws } => {
            let mut cfg = common.load(Experiment::Convergence)?;
            if let Some(h) = fd_step {
                cfg.gradients.fd_step = h;
            }
            if let Some(d) = draws {
                cfg.gradients.draws = d;
            }
            let out = experiments::validate_gradients(&cfg)?;
            write_artifacts(&out.report, &cfg.out_dir)?;
            print!("{}", out.report.text);
            if !out.passed {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::ExactSpectrum { common } => {
            let cfg = common.load(Experiment::Convergence)?;
            print!("{}", experiments::exact_spectrum(&cfg)?);
        }
        Command::ListData { data_dir } => print!("{}", experiments::list_data(&data_dir)?),
    }
    Ok(ExitCode::SUCCESS)
}
