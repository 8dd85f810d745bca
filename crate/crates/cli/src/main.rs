//! `lch`: Legendrian contact cohomology, capacities and cobordism length
//! bounds from the command line.

mod commands;
mod error;
mod schema;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::CliError;

#[derive(Parser)]
#[command(name = "lch", version, about)]
pub struct Cli {
    /// Decimal digits for rendered bounds and for interval certification.
    #[arg(long, global = true, default_value_t = 12)]
    pub precision: u32,
    /// Downgrade zero-energy differential terms from errors to warnings.
    #[arg(long, global = true)]
    pub allow_weak_energy: bool,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Capacity,
    ChordDiff,
    ChainAction,
    SplitCylinder,
    Product,
}

#[derive(Subcommand)]
pub enum Command {
    /// Check a DGA, diagram, chain map or profile file.
    Validate { file: PathBuf },
    /// Compile a Lagrangian diagram to its DGA.
    Compile {
        diagram: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// List every augmentation.
    Augment { dga: PathBuf },
    /// Linearized cohomology with capacities, per augmentation.
    Lch {
        dga: PathBuf,
        /// Comma-separated generators sent to 1; repeatable. Defaults to all.
        #[arg(long)]
        aug: Vec<String>,
    },
    /// A lower bound on cobordism length.
    LowerBound {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        minus: Option<PathBuf>,
        #[arg(long)]
        plus: Option<PathBuf>,
        #[arg(long)]
        map: Option<PathBuf>,
        /// Augmentation of the lower end, as comma-separated names.
        #[arg(long)]
        aug: Option<String>,
        /// Augmentation of the upper end (split-cylinder).
        #[arg(long)]
        aug_plus: Option<String>,
        /// Component correspondence, e.g. `0,1`.
        #[arg(long)]
        pairing: Option<String>,
        /// Cocycle on the lower end, e.g. `b1+b3`; repeatable (product).
        #[arg(long)]
        theta: Vec<String>,
        /// Cocycle to treat as the fundamental class, e.g. `a2`.
        #[arg(long)]
        assume_fundamental: Option<String>,
    },
    /// The infimal length of the profile construction.
    UpperBound {
        #[arg(long)]
        profile: PathBuf,
    },
    /// Check shifts against the packing region.
    Packing {
        #[arg(long)]
        k: usize,
        /// Comma-separated shifts `v1,...,vk`.
        #[arg(long)]
        v: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = commands::run(&cli);
    let mut stdout = std::io::stdout().lock();
    match out {
        Ok(o) => {
            let text = if cli.json {
                schema::canonical(&o.json)
            } else {
                o.text
            };
            let _ = stdout.write_all(text.as_bytes());
            ExitCode::from(o.status)
        }
        Err(e) => {
            if cli.json {
                let v =
                    serde_json::json!({ "error": { "kind": e.kind(), "message": e.to_string() } });
                let _ = stdout.write_all(schema::canonical(&v).as_bytes());
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}

pub(crate) fn malformed(e: impl std::fmt::Display) -> CliError {
    CliError::Malformed(e.to_string())
}

pub(crate) fn invalid(e: impl std::fmt::Display) -> CliError {
    CliError::Invalid(e.to_string())
}
