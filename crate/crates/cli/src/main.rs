mod commands;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use twobridge::diagrams::Bounds;
use twobridge::rational::Rational;
use twobridge::slopes::parse_slope;

/// Loops in two-bridge knot complements: decision tables, reductions and certificates.
#[derive(Debug, Parser)]
#[command(name = "twobridge", version)]
pub struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

fn slope(text: &str) -> Result<Rational, String> {
    parse_slope(text).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Diagram,
    Trace,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether the loops of slopes S and S2 are homotopic in the complement of K(R).
    Classify {
        #[arg(value_parser = slope)]
        r: Rational,
        #[arg(value_parser = slope)]
        s: Rational,
        #[arg(value_parser = slope)]
        s2: Rational,
    },
    /// Decide whether the loop of slope S is peripheral.
    Peripheral {
        #[arg(value_parser = slope)]
        r: Rational,
        #[arg(value_parser = slope)]
        s: Rational,
    },
    /// Decide whether the loop of slope S is primitive or a proper power.
    Primitive {
        #[arg(value_parser = slope)]
        r: Rational,
        #[arg(value_parser = slope)]
        s: Rational,
    },
    /// Print the continued fraction, Farey parents, slope class, relator and S-sequences of R.
    Inspect {
        #[arg(value_parser = slope)]
        r: Rational,
    },
    /// Follow the reduction chain of R down to a special slope.
    Reduce {
        #[arg(value_parser = slope)]
        r: Rational,
        /// A loop slope reduced alongside R.
        #[arg(long = "loop", value_parser = slope)]
        loop_slope: Option<Rational>,
        /// Stop after this many reduction steps.
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Search for a certificate and write it as JSON.
    Certify {
        #[arg(value_parser = slope)]
        r: Rational,
        #[arg(value_parser = slope)]
        s: Rational,
        #[arg(value_parser = slope)]
        s2: Rational,
        #[arg(long, value_enum, default_value = "diagram")]
        method: Method,
        #[arg(long, default_value_t = Bounds::default().max_layers)]
        max_layers: usize,
        #[arg(long, default_value_t = Bounds::default().max_faces)]
        max_faces: usize,
        #[arg(long, default_value_t = Bounds::default().max_arc_len)]
        max_arc_len: usize,
        /// Write the certificate here instead of standard output.
        #[arg(long, short)]
        output: Option<std::path::PathBuf>,
    },
    /// Re-validate a certificate file (diagram or trace).
    Verify { file: std::path::PathBuf },
    /// Run the randomized invariant suites.
    Selftest {
        /// One of slopes, words, tseq, classify, diagrams, riley, all.
        #[arg(default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 1000)]
        cases: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Exit status: 0 success or valid, 1 a well-formed negative answer, 2 usage or domain
/// error, 3 internal invariant failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    Negative = 1,
    Usage = 2,
    Internal = 3,
}

fn init_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("TWOBRIDGE_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| format!("TWOBRIDGE_THREADS must be a positive integer, got {v:?}"))?;
    if n == 0 {
        return Err("TWOBRIDGE_THREADS must be positive".into());
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { Status::Usage as u8 } else { 0 });
        }
    };
    if let Err(msg) = init_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(Status::Usage as u8);
    }
    let mut out = std::io::stdout().lock();
    let status = commands::run(&cli.command, cli.json, &mut out);
    ExitCode::from(status as u8)
}
