//! `clusterbelt` command-line front end.
//!
//! Exit codes: 0 success, 2 validation error, 3 invariant breach.

mod census;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "clusterbelt", version, about = "Exact bipartite belt dynamics on box-product quivers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LabelMode {
    Classify,
    Strict,
    Plain,
    Weak,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit a single Dynkin diagram as quiver JSON, oriented from one color
    /// class to the other.
    Catalog {
        /// Diagram type, e.g. A3, D4, E6, A3(1), D5(1).
        #[arg(long)]
        spec: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the box product of two diagrams as quiver JSON.
    Product {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        /// Attach initial values: all-ones or random:SEED.
        #[arg(long)]
        values: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the belt and write the orbits of the watched vertices.
    Evolve {
        #[arg(long)]
        quiver: PathBuf,
        #[arg(long)]
        steps: usize,
        /// Backward steps before time 0.
        #[arg(long, default_value_t = 0)]
        backward: usize,
        /// Comma-separated vertex ids; all vertices when omitted.
        #[arg(long, value_delimiter = ',')]
        watch: Option<Vec<usize>>,
        /// all-ones, random:SEED, or file (values stored in the quiver file).
        #[arg(long)]
        values: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Smallest p <= bound with (μ₋μ₊)^p the identity.
    Period {
        #[arg(long)]
        quiver: PathBuf,
        #[arg(long)]
        bound: usize,
        #[arg(long)]
        values: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Detect minimal linear recurrences in a trace CSV.
    Linearize {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        kmax: usize,
        /// Quiver file supplying factor metadata for order bounds.
        #[arg(long)]
        quiver: Option<PathBuf>,
        #[arg(long, alias = "out")]
        report: Option<PathBuf>,
    },
    /// Search for subadditive labellings.
    Label {
        #[arg(long)]
        quiver: PathBuf,
        #[arg(long, value_enum, default_value_t = LabelMode::Classify)]
        mode: LabelMode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classification, period, orders and growth for a list of products.
    Census {
        /// Comma-separated products such as A2xA2,A3xA1(1). A default
        /// sweep is used when omitted.
        #[arg(long, value_delimiter = ',')]
        specs: Option<Vec<String>>,
        /// Orbit length for the growth test; raised to fit --kmax.
        #[arg(long, default_value_t = 12)]
        steps: usize,
        #[arg(long, default_value_t = 8)]
        kmax: usize,
        /// Period search bound for products with an affine factor.
        #[arg(long, default_value_t = 30)]
        bound: usize,
        #[arg(long)]
        values: Option<String>,
        /// Output prefix; writes PREFIX.csv and PREFIX.json.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Stdout format when --out is absent.
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Determinant checks for the annulus family A_m □ A(1)_{2n-1}.
    AnnulusVerify {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        kmax: Option<usize>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn validation(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    pub fn breach(message: impl Into<String>) -> Self {
        Failure { code: 3, message: message.into() }
    }
}

impl From<clusterbelt::Error> for Failure {
    fn from(e: clusterbelt::Error) -> Self {
        Failure::validation(e.to_string())
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Catalog { spec, out } => commands::catalog(&spec, out.as_deref()),
        Command::Product { left, right, values, out } => {
            commands::product(&left, &right, values.as_deref(), out.as_deref())
        }
        Command::Evolve { quiver, steps, backward, watch, values, format, out } => commands::evolve(
            &quiver,
            steps,
            backward,
            watch.as_deref(),
            values.as_deref(),
            format,
            out.as_deref(),
        ),
        Command::Period { quiver, bound, values, out } => {
            commands::period(&quiver, bound, values.as_deref(), out.as_deref())
        }
        Command::Linearize { trace, kmax, quiver, report } => {
            commands::linearize(&trace, kmax, quiver.as_deref(), report.as_deref())
        }
        Command::Label { quiver, mode, out } => commands::label(&quiver, mode, out.as_deref()),
        Command::Census { specs, steps, kmax, bound, values, out, format } => census::run(
            specs.as_deref(),
            steps,
            kmax,
            bound,
            values.as_deref(),
            out.as_deref(),
            format,
        ),
        Command::AnnulusVerify { m, n, seed, kmax, samples, out } => {
            commands::annulus_verify(m, n, seed, kmax, samples, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
