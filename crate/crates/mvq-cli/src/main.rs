//! `mvq`: metric queries, Lipschitz extension builds, covering analysis,
//! and the fixture gallery on top of `mvq-core`.
//!
//! Exit codes: 0 pass, 1 bound violation, 2 input error, 3 Lipschitz-budget
//! error, 4 resource cap.

mod commands;
mod report;
mod wire;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mvq_core::extension::ExtensionError;
use mvq_core::mvf::MvfError;
use mvq_core::nagata::NagataError;
use mvq_core::qspace::QSpaceError;
use mvq_core::spaces::SpaceError;

pub const EXIT_PASS: u8 = 0;
pub const EXIT_BOUND: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;
pub const EXIT_CAP: u8 = 4;

/// Error carrying the process exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn input(message: String) -> Self {
        Self {
            code: EXIT_INPUT,
            message,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::input(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::input(format!("malformed JSON: {e}"))
    }
}

impl From<SpaceError> for CliError {
    fn from(e: SpaceError) -> Self {
        CliError::input(e.to_string())
    }
}

impl From<QSpaceError> for CliError {
    fn from(e: QSpaceError) -> Self {
        CliError::input(e.to_string())
    }
}

impl From<MvfError> for CliError {
    fn from(e: MvfError) -> Self {
        CliError::input(e.to_string())
    }
}

impl From<ExtensionError> for CliError {
    fn from(e: ExtensionError) -> Self {
        let code = match e {
            ExtensionError::BudgetViolation { .. } => EXIT_BUDGET,
            _ => EXIT_INPUT,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<NagataError> for CliError {
    fn from(e: NagataError) -> Self {
        let code = match e {
            NagataError::IndexCap { .. } => EXIT_CAP,
            _ => EXIT_INPUT,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum NormArg {
    Euclidean,
    Sup,
    One,
}

#[derive(Parser)]
#[command(name = "mvq", version, about = "Multisets of Q points: bottleneck metric, Lipschitz extension, covering multiplicity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bottleneck distance and optimal pairing between two QPoint files
    Metric {
        /// First QPoint JSON file
        a: PathBuf,
        /// Second QPoint JSON file
        b: PathBuf,
        /// Norm used when the files carry no space descriptor
        #[arg(long, value_enum, default_value_t = NormArg::Euclidean)]
        norm: NormArg,
        /// Directory for matching.json (printed to stdout regardless)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the ball extension of a sphere map and verify its bounds
    Extend {
        /// Named fixture to extend
        #[arg(long, conflicts_with = "input")]
        fixture: Option<String>,
        /// Sample-table JSON file to extend
        #[arg(long)]
        input: Option<PathBuf>,
        /// Sphere/ball mesh size
        #[arg(long, default_value_t = 2000)]
        mesh_n: usize,
        /// Pair budget for Lipschitz sweeps on large meshes
        #[arg(long, default_value_t = 200_000)]
        pairs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Boundary-restriction tolerance
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Safety factor applied to the estimated Lipschitz constant
        #[arg(long, default_value_t = 1.05)]
        lip_inflation: f64,
        /// Supply Lip(f) instead of estimating it
        #[arg(long)]
        lip: Option<f64>,
        /// Base point override, comma-separated coordinates
        #[arg(long)]
        base_point: Option<String>,
        /// Also store the sampled map as a table file loadable via --input
        #[arg(long)]
        export_table: Option<PathBuf>,
        /// Output directory for report JSON and per-pair CSV
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Tile a range, build the product cover, and probe its multiplicity
    Cover {
        /// Bound constant of the tiling (c >= 3)
        #[arg(long, default_value_t = 3.0)]
        c: f64,
        /// Scale s; members have diameter c*s
        #[arg(long, default_value_t = 1.0)]
        s: f64,
        #[arg(long, default_value_t = 0.0)]
        lo: f64,
        #[arg(long, default_value_t = 10.0)]
        hi: f64,
        /// Ground-space dimension (1 tiles the line, higher builds a grid)
        #[arg(long, default_value_t = 1)]
        dim: usize,
        /// Multiset size Q of the product cover
        #[arg(long, default_value_t = 2)]
        q: usize,
        #[arg(long, default_value_t = 10_000)]
        probes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory for cover JSON, report JSON, and probe CSV
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Describe a fixture and run its verification suite
    Examples {
        /// Fixture name; unknown names list the gallery
        name: String,
        #[arg(long, default_value_t = 2000)]
        mesh_n: usize,
        #[arg(long, default_value_t = 200_000)]
        pairs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 1.05)]
        lip_inflation: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Metric { a, b, norm, out } => commands::metric(&a, &b, norm, out.as_deref()),
        Command::Extend {
            fixture,
            input,
            mesh_n,
            pairs,
            seed,
            tol,
            lip_inflation,
            lip,
            base_point,
            export_table,
            out,
        } => commands::extend(commands::ExtendArgs {
            fixture,
            input,
            mesh_n,
            pairs,
            seed,
            tol,
            lip_inflation,
            lip,
            base_point,
            export_table,
            out,
        }),
        Command::Cover {
            c,
            s,
            lo,
            hi,
            dim,
            q,
            probes,
            seed,
            out,
        } => commands::cover(commands::CoverArgs {
            c,
            s,
            lo,
            hi,
            dim,
            q,
            probes,
            seed,
            out,
        }),
        Command::Examples {
            name,
            mesh_n,
            pairs,
            seed,
            tol,
            lip_inflation,
        } => commands::examples(&name, mesh_n, pairs, seed, tol, lip_inflation),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
