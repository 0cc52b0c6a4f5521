use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

/// Curvature tensors on Hermitian vector spaces: decomposition, Gray
/// identity and metric-jet realization.
#[derive(Debug, Parser)]
#[command(name = "hcurv", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScalarMode {
    Rational,
    Float,
}

#[derive(Debug, Args)]
struct Common {
    /// Arithmetic used for the computation.
    #[arg(long, value_enum, default_value = "rational")]
    scalar: ScalarMode,
    /// Zero threshold per entry in float mode.
    #[arg(long, default_value_t = 1e-10)]
    tolerance: f64,
    /// Output file; standard output when absent.
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the component dimensions for complex dimension n.
    Dims {
        #[arg(long)]
        n: usize,
    },
    /// Write a basis vector of one component as a tensor file.
    Basis {
        #[arg(long)]
        n: usize,
        /// Component name, e.g. W7 or W2_plus_W5.
        #[arg(long)]
        component: String,
        #[arg(long, default_value_t = 0)]
        index: usize,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Split the tensor `A` of a file into its ten components.
    Decompose {
        input: PathBuf,
        /// Name of the tensor to read.
        #[arg(long, default_value = "A")]
        tensor: String,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate the Gray identity on the tensor `A` of a file.
    GrayCheck {
        input: PathBuf,
        #[arg(long, default_value = "A")]
        tensor: String,
        #[command(flatten)]
        common: Common,
    },
    /// Find a quadratic Hermitian metric jet whose curvature is `A`.
    Realize {
        input: PathBuf,
        #[arg(long, default_value = "A")]
        tensor: String,
        #[command(flatten)]
        common: Common,
    },
    /// Curvature at the origin of the metric jet (`h`, `q`) in a file.
    Curvature {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Check the example metrics.
    Examples {
        #[arg(long)]
        n: usize,
        /// Restrict to one case, e.g. W3.
        #[arg(long = "case")]
        case: Option<String>,
        /// Write the case metrics and curvatures to this file.
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Run every acceptance check for complex dimension n.
    VerifyAll {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 20240601)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { commands::EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
