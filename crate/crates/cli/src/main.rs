mod report;
mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use khlim_core::diagram::{parse_pd, LinkDiagram};
use khlim_core::engine::{compute_kh_with, connected_sum_experiment, KhOptions, Method, NERVE_CROSSING_LIMIT};
use khlim_core::error::Error as CoreError;

use report::{table, text_table, ComputeReport, DiagramInfo};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Input { path: PathBuf, source: CoreError },
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{0}")]
    Usage(String),
    #[error("{0} check(s) failed")]
    Failed(usize),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Usage(_) => 2,
            CliError::Failed(_) => 1,
            CliError::Input { source, .. } | CliError::Core(source) => core_code(source),
        }
    }
}

fn core_code(e: &CoreError) -> u8 {
    use CoreError::*;
    match e {
        MethodDisagreement { .. } | InvarianceFailure { .. } | FormulaFailure { .. } => 1,
        MalformedPD(_) | OpenDiagram { .. } | SignUnderivable(_) | SiteNotApplicable(_) | NoMarkedComponent
        | NTooSmall { .. } | Guard(_) | Invalid(_) => 2,
        NotAComplex { .. } | NotChainMap { .. } | NotExactPointwise { .. } | CompositeNonzero { .. }
        | BasisMismatch(_) | NotNatural { .. } | NotFunctorial { .. } | NotCovering(_) | SiteMismatch(_) => 3,
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Cube,
    Nerve,
    Both,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Cube => Method::Cube,
            MethodArg::Nerve => Method::Nerve,
            MethodArg::Both => Method::Both,
        }
    }
}

/// Khovanov homology as limits of presheaves over the cube.
#[derive(Parser)]
#[command(name = "kh", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute Khovanov homology of a PD code.
    Compute {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "cube")]
        method: MethodArg,
        /// Text output shows only the normalised groups; JSON always carries both.
        #[arg(long)]
        normalised: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long, default_value_t = NERVE_CROSSING_LIMIT)]
        nerve_limit: usize,
    },
    /// Run one of the verification suites.
    Verify(verify::VerifyArgs),
    /// Worked experiments.
    Example {
        #[command(subcommand)]
        which: Example,
    },
}

#[derive(Subcommand)]
enum Example {
    /// Compare the clasped sum of two diagrams with two shifted copies of their connected sum.
    ConnectedSum {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

pub fn load(path: &Path) -> Result<LinkDiagram> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    parse_pd(&text).map_err(|source| CliError::Input { path: path.into(), source })
}

fn compute(file: &Path, method: Method, normalised: bool, format: Format, nerve_limit: usize) -> Result<()> {
    let d = load(file)?;
    let r = compute_kh_with(&d, KhOptions { method, nerve_limit })?;
    match format {
        Format::Json => {
            println!("{}", serde_json::to_string_pretty(&ComputeReport::new(&d, &r)).expect("serialisable"));
        }
        Format::Text => {
            println!("{}", d.summary());
            if !normalised {
                print!("unnormalised\n{}", text_table(&r.unnormalised));
            }
            print!("normalised (shift {})\n{}", r.negative_crossings, text_table(&r.normalised));
            for c in &r.checks {
                println!("[{}] {} ({})", if c.pass { "ok" } else { "FAIL" }, c.name, c.anchor);
            }
        }
    }
    let failed = r.checks.iter().filter(|c| !c.pass).count();
    if failed > 0 {
        return Err(CliError::Failed(failed));
    }
    Ok(())
}

fn connected_sum(first: &Path, second: &Path, format: Format) -> Result<()> {
    let (d1, d2) = (load(first)?, load(second)?);
    let r = connected_sum_experiment(&d1, &d2)?;
    let pass = r.pass();
    match format {
        Format::Json => {
            let out = serde_json::json!({
                "first": DiagramInfo::of(&d1),
                "second": DiagramInfo::of(&d2),
                "sum": table(&r.plain.normalised),
                "clasped_sum": table(&r.doubled.normalised),
                "expected": table(&r.expected),
                "pass": pass,
            });
            println!("{}", serde_json::to_string_pretty(&out).expect("serialisable"));
        }
        Format::Text => {
            print!("D1 # D2\n{}", text_table(&r.plain.normalised));
            print!("D1 ## D2\n{}", text_table(&r.doubled.normalised));
            print!("expected\n{}", text_table(&r.expected));
            println!("[{}] clasped sum formula", if pass { "ok" } else { "FAIL" });
        }
    }
    r.require()?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Compute { file, method, normalised, format, nerve_limit } => {
            compute(&file, method.into(), normalised, format, nerve_limit)
        }
        Command::Verify(args) => verify::run(args),
        Command::Example { which: Example::ConnectedSum { first, second, format } } => {
            connected_sum(&first, &second, format)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("kh: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
