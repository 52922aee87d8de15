//! Argument parsing and dispatch.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use cartier_core::suite::{Scope, DEFAULT_SEED};

use crate::commands::{self, parse_side, CliError, Options};
use crate::report::RunReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Machine,
}

#[derive(Debug, Parser)]
#[command(name = "cartier", version, about = "Homological algebra of Cartier modules over finite F_p-algebras")]
pub struct Cli {
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 4)]
    pub max_degree: usize,
    /// Number of Frobenius twists realized for free Cartier modules.
    #[arg(long, global = true, default_value_t = 4)]
    pub kappa_cutoff: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse an instance file and check every invariant.
    Validate { path: PathBuf },
    /// Hom between two modules or two Cartier modules.
    Hom { path: PathBuf, source: String, target: String },
    /// Ext groups up to --max-degree.
    Ext { path: PathBuf, source: String, target: String },
    /// The long exact sequence relating Ext over Cartier modules and over A.
    Les { path: PathBuf, source: String, target: String },
    /// Truncate a complex, optionally with respect to a perversity.
    Truncate {
        path: PathBuf,
        complex: String,
        #[arg(long, allow_hyphen_values = true)]
        degree: i32,
        #[arg(long, default_value = "geq")]
        side: String,
        #[arg(long)]
        perversity: Option<String>,
    },
    /// Perverse truncations of a complex and the t-exactness of F_*.
    Perverse {
        path: PathBuf,
        complex: String,
        perversity: String,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        degree: i32,
    },
    /// Run the verification suite over the catalog.
    Suite {
        #[arg(long, value_parser = parse_scope)]
        scope: Option<Scope>,
    },
}

fn parse_scope(s: &str) -> Result<Scope, String> {
    s.parse()
}

/// What the binary prints and how it exits.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
    pub report: Option<RunReport>,
}

fn dispatch(cli: &Cli) -> Result<RunReport, CliError> {
    let opts = Options { seed: cli.seed, max_degree: cli.max_degree, cutoff: cli.kappa_cutoff };
    match &cli.command {
        Command::Validate { path } => Ok(commands::validate(&commands::load(path)?, &opts)),
        Command::Hom { path, source, target } => commands::hom(&commands::load(path)?, source, target, &opts),
        Command::Ext { path, source, target } => commands::ext(&commands::load(path)?, source, target, &opts),
        Command::Les { path, source, target } => commands::les(&commands::load(path)?, source, target, &opts),
        Command::Truncate { path, complex, degree, side, perversity } => {
            let side = parse_side(side)?;
            commands::truncate(&commands::load(path)?, complex, *degree, side, perversity.as_deref(), &opts)
        }
        Command::Perverse { path, complex, perversity, degree } => {
            commands::perverse(&commands::load(path)?, complex, perversity, *degree, &opts)
        }
        Command::Suite { scope } => Ok(commands::suite(*scope, &opts)),
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let start = std::time::Instant::now();
    match dispatch(cli) {
        Ok(report) => finish(report, cli.format, start.elapsed().as_secs_f64()),
        Err(e) => Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("error: {e}\n"), report: None },
    }
}

/// Renders a finished report; the exit code is 1 when any verdict failed.
pub fn finish(report: RunReport, format: Format, elapsed: f64) -> Outcome {
    let (stdout, stderr) = match format {
        Format::Human => (report.to_human(), format!("elapsed {elapsed:.2} s\n")),
        Format::Machine => (report.to_machine(), String::new()),
    };
    Outcome { code: if report.passed() { 0 } else { 1 }, stdout, stderr, report: Some(report) }
}
