use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use zerofilter::experiments::{self, ExperimentConfig, Outcome};
use zerofilter::{Error, FilterParam, Result};

#[derive(Parser)]
#[command(
    name = "zerofilter",
    about = "Zero-filter limit experiments for the filtered Camassa-Holm equation"
)]
struct Cli {
    /// key=value config file; missing keys take their defaults
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// CSV destination (overrides output_path; stdout when neither is set)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for concurrent rows
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the cutoff pair and check the partition of unity
    LpCheck,
    /// Taylor remainder ladder
    Taylor {
        /// Single alpha instead of the configured list
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Sup-in-time Besov norms across alpha = 2^-k
    Uniform,
    /// Filtered versus unfiltered gap along alpha_n, t_n
    Sweep {
        /// Run the single-packet contrast instead
        #[arg(long)]
        contrast: bool,
    },
    /// Datum diagnostics
    U0Info,
}

fn load(cli: &Cli) -> Result<ExperimentConfig> {
    match &cli.config {
        Some(path) => experiments::parse_config(path),
        None => Ok(ExperimentConfig::default()),
    }
}

fn emit(cli: &Cli, config: &ExperimentConfig, outcome: &Outcome) -> Result<()> {
    let csv = outcome.report.to_csv(&config.echo());
    match cli.out.as_ref().or(config.output_path.as_ref()) {
        Some(path) => {
            std::fs::write(path, csv).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?
        }
        None => print!("{csv}"),
    }
    for check in &outcome.checks {
        eprintln!("{check}");
    }
    outcome.status()
}

fn run(cli: &Cli) -> Result<()> {
    let config = load(cli)?;
    if let Some(k) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| Error::ConfigRange(format!("threads: {e}")))?;
    }
    let outcome = match &cli.command {
        Command::LpCheck => experiments::run_lp_report(&config)?,
        Command::Taylor { alpha: Some(a) } => {
            experiments::run_taylor(&config, FilterParam::new(*a)?)?
        }
        Command::Taylor { alpha: None } => experiments::run_taylor_all(&config)?,
        Command::Uniform => {
            let alphas = config
                .uniform_alphas()
                .into_iter()
                .map(FilterParam::new)
                .collect::<Result<Vec<_>>>()?;
            experiments::run_uniform(&config, &alphas, config.uniform_t_end)?
        }
        Command::Sweep { contrast: false } => experiments::run_sweep(&config)?,
        Command::Sweep { contrast: true } => experiments::run_contrast(&config)?,
        Command::U0Info => {
            print!("{}", experiments::u0_info(&config)?);
            return Ok(());
        }
    };
    emit(cli, &config, &outcome)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
