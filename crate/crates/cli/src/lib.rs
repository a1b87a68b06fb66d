//! Command-line front end: configuration, reports and figure data.

pub mod commands;
pub mod config;
pub mod io;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use commands::{execute, Outcome, Verdict};
pub use config::{resolve, Overrides, Preset, RunConfig};
pub use report::ReportEnvelope;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_AGREEMENT: i32 = 2;
pub const EXIT_NONEQUIVALENCE: i32 = 3;
pub const EXIT_SOLVER: i32 = 4;

/// Invalid input detected by the front end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Debug, Parser)]
#[command(name = "gaborlab", version, about = "Spectrogram phase-retrieval counterexamples and weighted Poincare constants")]
pub struct Cli {
    /// JSON document overriding preset values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Directory for reports and data files.
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub preset: Option<Preset>,
    #[command(flatten)]
    pub overrides: Overrides,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Magnitude field of the configured signal as CSV and PGM.
    Spectrogram,
    /// Agreement on the sampling lattice and non-equivalence of a pair.
    Verify,
    /// Zeros of the pair's transforms.
    Roots,
    /// Gamma threshold and the zero-free strip scan.
    Threshold,
    /// Leading eigenpairs of the weighted Neumann Laplacian.
    Spectrum,
    /// Poincare constant `1 / sqrt(lambda_1)`.
    Poincare,
    /// Poincare constants of a weight and a perturbation of it.
    Variation,
    /// Spectral refinement of the Poincare inequality on random fields.
    Refine,
    /// Cheeger upper bound from a cut family.
    Cheeger,
    /// Stability ratio of the pair against the measurement norm.
    Probe,
    /// Measurement norm of the signal's magnitude.
    Dnorm,
    /// Figure 1a data.
    Figure1a,
    /// Figure 1b data.
    Figure1b,
    /// Figure 2 data and overlay.
    Figure2,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrogram => "spectrogram",
            Command::Verify => "verify",
            Command::Roots => "roots",
            Command::Threshold => "threshold",
            Command::Spectrum => "spectrum",
            Command::Poincare => "poincare",
            Command::Variation => "variation",
            Command::Refine => "refine",
            Command::Cheeger => "cheeger",
            Command::Probe => "probe",
            Command::Dnorm => "dnorm",
            Command::Figure1a => "figure1a",
            Command::Figure1b => "figure1b",
            Command::Figure2 => "figure2",
        }
    }

    /// Preset implied by the figure commands.
    pub fn implied_preset(self) -> Option<Preset> {
        match self {
            Command::Figure1a => Some(Preset::Fig1a),
            Command::Figure1b => Some(Preset::Fig1b),
            Command::Figure2 => Some(Preset::Fig2),
            _ => None,
        }
    }
}

/// Exit code for an error raised while running a command.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    use gaborlab::Error as E;
    if let Some(e) = err.downcast_ref::<E>() {
        return match e {
            E::NoConvergence { .. } | E::NotPositiveDefinite(_) | E::DegenerateSpectrum(_) => EXIT_SOLVER,
            _ => EXIT_USAGE,
        };
    }
    EXIT_USAGE
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    let result = cli
        .command
        .implied_preset()
        .map_or(Ok(()), |p| match cli.preset {
            Some(q) if q != p => Err(anyhow::Error::new(UsageError(format!(
                "{} always uses its own preset",
                cli.command.name()
            )))),
            _ => Ok(()),
        })
        .and_then(|_| {
            let preset = cli.command.implied_preset().or(cli.preset);
            resolve(preset, cli.config.as_deref(), &cli.overrides, cli.out_dir.as_deref())
        })
        .and_then(|cfg| execute(cli.command, &cfg));
    match result {
        Ok(outcome) => {
            for f in &outcome.files {
                println!("{}", f.display());
            }
            if let Some(msg) = outcome.verdict.message() {
                eprintln!("{msg}");
            }
            outcome.verdict.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code(&e)
        }
    }
}
