//! `hpk`: command-line access to harmonic products, Dirichlet transforms and
//! zero isolation.

mod commands;
mod input;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hpk_core::Error;

#[derive(Parser)]
#[command(name = "hpk", version, about = "Harmonic products, Dirichlet data and zeros of harmonic polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the product fF is harmonic and whether k = h conj(G) + H conj(g) is constant
    CheckProduct {
        #[arg(long = "f")]
        f: String,
        #[arg(long = "F")]
        big_f: String,
    },
    /// Emit the cofactor F = a h - a conj(g) and the product fF
    Cofactor {
        #[arg(long = "f")]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
    },
    /// Emit the dilatation g'/h' as an unreduced rational function
    Dilatation {
        #[arg(long = "f")]
        f: String,
    },
    /// Decide whether f^2 is harmonic
    SquareCheck {
        #[arg(long = "f")]
        f: String,
    },
    /// Solve the unit-disk Dirichlet problem and audit the boundary traces
    Dirichlet {
        #[arg(long)]
        boundary: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        /// Poisson quadrature nodes used for the reference check
        #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u64).range(16..))]
        nodes: u64,
        /// Boundary samples for the trace audit
        #[arg(long, default_value_t = 1024, value_parser = clap::value_parser!(u64).range(64..))]
        samples: u64,
        /// Write f on a polar grid as CSV (r, theta, re, im)
        #[arg(long)]
        grid_dump: Option<String>,
        /// Write the cofactor trace against its closed form as CSV
        #[arg(long)]
        trace_csv: Option<String>,
        /// Write the product trace against its closed form as CSV
        #[arg(long)]
        product_trace_csv: Option<String>,
    },
    /// Isolate the zeros of f = h + conj(g)
    Zeros {
        #[arg(long = "f")]
        f: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long)]
        csv: Option<String>,
    },
    /// Zeros of f, its cofactor and the product, with the 2n^2 bound
    ProductZeros {
        #[arg(long = "f")]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Seeded randomized check of the n^2 and 2n^2 zero bounds
    Experiment {
        #[arg(long)]
        seed: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long = "deg-h", value_parser = clap::value_parser!(u64).range(1..))]
        deg_h: u64,
        #[arg(long = "deg-g")]
        deg_g: u64,
        #[arg(long = "coeff-box", default_value_t = 1.0)]
        coeff_box: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(value) => {
            emit(&value);
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            let body = serde_json::json!({ "error": e.kind(), "message": e.to_string() });
            emit(&body);
            ExitCode::from(1)
        }
    }
}

fn emit(v: &serde_json::Value) {
    use std::io::Write;
    let text = serde_json::to_string_pretty(v).expect("serializable output");
    // a closed pipe downstream is not our failure
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}
