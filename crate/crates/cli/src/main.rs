//! `cyclic-hall`: multisegment combinatorics, Hall-algebra canonical bases,
//! induced-module multiplicities and affine-root computations from the
//! command line.

mod cache;
mod commands;
mod render;

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Text,
    Tsv,
    Structured,
}

#[derive(Parser, Debug)]
#[command(
    name = "cyclic-hall",
    version,
    about = "Hall algebras of cyclic quivers: canonical bases, folding coproduct, induced-module multiplicities, affine root data"
)]
pub struct Cli {
    /// Truncation window for the linear quiver, as `lo:hi`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub window: Option<String>,

    /// Maximum total order of any graded piece touched.
    #[arg(long, global = true)]
    pub limit: Option<u64>,

    /// Output rendering.
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: FormatArg,

    /// Directory holding `hallpoly.cache` and `canon.cache`
    /// (overrides the `CYCLIC_HALL_CACHE` environment variable).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,

    /// Disable persistent caches for this invocation.
    #[arg(long, global = true)]
    pub no_cache: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Total order of a multisegment or periodic multisegment.
    Order { label: String },
    /// Reduce a multisegment modulo translation by the period.
    Fold {
        #[arg(long)]
        m: u32,
        label: String,
    },
    /// All lifts of a periodic multisegment inside the window.
    Unfold { label: String },
    /// Degeneration comparison: is the orbit of X inside the closure of Y?
    Closure { x: String, y: String },
    /// Hall polynomial g^M_{P,N}(q) counting submodules X ≅ P with M/X ≅ N.
    Hallpoly {
        #[arg(long = "M")]
        m_label: String,
        #[arg(long = "N")]
        n_label: String,
        #[arg(long = "P")]
        p_label: String,
    },
    /// Canonical-basis conversion matrices of one graded piece.
    Canon {
        /// Period of the cyclic quiver; omit to use the linear quiver on
        /// the window.
        #[arg(long)]
        m: Option<u32>,
        /// Comma-separated dimension vector.
        #[arg(long)]
        dv: String,
    },
    /// Decomposition matrix of one graded piece (canonical basis at v = 1).
    Decomp {
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        dv: String,
    },
    /// Folding coproduct Δ(f_x) at v = 1, truncated to the window.
    Delta {
        #[arg(long)]
        x: String,
    },
    /// Jordan-Hölder multiplicity of the simple labelled by X in the module
    /// induced from XBAR; with no XBAR, the full windowed report for X.
    Mult {
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        x: String,
        #[arg(long)]
        xbar: Option<String>,
    },
    /// Jordan-Hölder profile of the module induced from the simple XBAR.
    Induce {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        xbar: String,
    },
    /// Canonical representative of a periodic pair.
    CanonicalPair { pair: String },
    /// The level-decorated root set Π_k.
    Pik {
        #[arg(long = "type")]
        kind: String,
        #[arg(long)]
        k: i64,
    },
    /// Number of torus orbits attached to Π_k.
    Orbits {
        #[arg(long = "type")]
        kind: String,
        #[arg(long)]
        k: i64,
        /// Re-count the k = 1 case by enumerating weight supports.
        #[arg(long)]
        direct: bool,
    },
    /// Dimension k^r of the attached simple module.
    Dim {
        #[arg(long = "type")]
        kind: String,
        #[arg(long)]
        k: i64,
    },
}

#[derive(Debug)]
pub enum CliError {
    Core(cyclic_hall_core::Error),
    Usage(String),
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl From<cyclic_hall_core::Error> for CliError {
    fn from(e: cyclic_hall_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(cyclic_hall_core::Error::Parse(_)) => 2,
            CliError::Core(cyclic_hall_core::Error::SizeLimit(_)) => 3,
            CliError::Core(_) => 4,
            CliError::Io(_) => 4,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(output) => {
            // output is buffered until success so error paths emit nothing
            print!("{output}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
