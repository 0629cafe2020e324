//! `cca` command-line front end.
//!
//! Exit codes: 0 success, 1 validation error, 2 verification failure,
//! 3 I/O error.

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::observables::Pairing;
use crate::state::Branch;
use commands::VerifyOptions;
use config::{OutputFormat, ScenarioConfig, SweepConfig};
use output::Table;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "cca",
    version,
    about = "Two-photon dynamics in a coupled-cavity array"
)]
pub struct Cli {
    /// Scenario JSON file, or an earlier CSV output whose header carries the config
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Output path (overrides output.path); stdout when neither is set
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Override a config field, e.g. --set lattice.hopping=0.1
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normal-mode frequencies
    Spectrum,
    /// Coincidence matrix P_mn at the end of the time window
    Correlation,
    /// Delocalization degree over the time grid
    Tpd,
    /// Delocalization series for several input angles
    Sweep {
        /// Comma-separated angles in radians
        #[arg(long, value_delimiter = ',', conflicts_with = "concurrences")]
        thetas: Vec<f64>,
        /// Comma-separated concurrences in [0, 1]
        #[arg(long, value_delimiter = ',')]
        concurrences: Vec<f64>,
        /// Branch used to turn concurrences into angles
        #[arg(long)]
        branch: Option<Branch>,
    },
    /// Compare the closed-form results against the Fock-space oracle
    Verify {
        /// Chain length for the oracle comparison
        #[arg(long, default_value_t = 8)]
        oracle_sites: usize,
        /// Number of comparison intervals over [0, t_max]
        #[arg(long, default_value_t = 16)]
        samples: usize,
        /// Amplitude pairing of the closed form under test
        #[arg(long, value_enum, default_value_t = PairingArg::SinOnR)]
        pairing: PairingArg,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PairingArg {
    SinOnR,
    CosOnR,
}

impl From<PairingArg> for Pairing {
    fn from(p: PairingArg) -> Self {
        match p {
            PairingArg::SinOnR => Pairing::SinOnR,
            PairingArg::CosOnR => Pairing::CosOnR,
        }
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { EXIT_OK };
        }
    };
    match run(&cli) {
        Ok(code) => code,
        // downstream reader closed early (e.g. `| head`)
        Err(Error::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: &Cli) -> Result<i32> {
    let mut config = ScenarioConfig::load(cli.config.as_deref(), &cli.overrides)?;
    let out_path = cli
        .out
        .clone()
        .or_else(|| config.output.path.as_ref().map(PathBuf::from));

    let table = match &cli.command {
        Command::Spectrum => commands::spectrum(&config)?,
        Command::Correlation => commands::correlation(&config)?,
        Command::Tpd => commands::tpd(&config)?,
        Command::Sweep {
            thetas,
            concurrences,
            branch,
        } => {
            if !thetas.is_empty() || !concurrences.is_empty() {
                config.sweep = Some(SweepConfig {
                    thetas: (!thetas.is_empty()).then(|| thetas.clone()),
                    concurrences: (!concurrences.is_empty()).then(|| concurrences.clone()),
                    branch: if concurrences.is_empty() {
                        None
                    } else {
                        *branch
                    },
                });
            }
            let sweep = config.sweep.clone().unwrap_or_default();
            let thetas = sweep.resolve_thetas()?;
            commands::sweep(&config, &thetas)?
        }
        Command::Verify {
            oracle_sites,
            samples,
            pairing,
        } => {
            let options = VerifyOptions {
                oracle_sites: *oracle_sites,
                samples: *samples,
                pairing: (*pairing).into(),
            };
            let report = commands::verify(&config, &options)?;
            let text = match config.output.format {
                OutputFormat::Csv => report.to_text(),
                OutputFormat::Json => serde_json::to_string_pretty(&report)? + "\n",
            };
            write_to(out_path.as_deref(), |w| Ok(w.write_all(text.as_bytes())?))?;
            return Ok(if report.passed() {
                EXIT_OK
            } else {
                EXIT_VERIFY_FAILED
            });
        }
    };

    write_table(&table, &config, out_path.as_deref())?;
    Ok(EXIT_OK)
}

fn write_table(table: &Table, config: &ScenarioConfig, path: Option<&Path>) -> Result<()> {
    write_to(path, |w| match config.output.format {
        OutputFormat::Csv => table.write_csv(config, w),
        OutputFormat::Json => table.write_json(config, w),
    })
}

fn write_to(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match path {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            f(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            f(&mut w)?;
        }
    }
    Ok(())
}
