//! The `fpt` command line: argument parsing, dispatch and exit codes.
//!
//! Exit codes: 0 success, 1 failed verification or invariant violation,
//! 2 budget refusal, 64 invalid usage or input, 74 cache I/O failure.

pub mod acceptance;
mod commands;
mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

pub use output::Format;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_IO: i32 = 74;

/// Environment variable overriding the default enumeration budget.
pub const BUDGET_ENV: &str = "FPT_BUDGET";

#[derive(Debug, Parser)]
#[command(
    name = "fpt",
    version,
    about = "Exact computations with the polynomials f_(m,p), plane orbits, zigzag sequences and orders of appearance"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Size budget; each subcommand applies it to its dominant cost
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Seed for randomized steps (results do not depend on it)
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Directory memoizing f_(m,p) supports as fmp_<p>_<m>.json
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// The polynomials f_(m,p)
    #[command(subcommand)]
    Fmp(FmpCmd),
    /// Planes of F_(p^m) over F_p
    #[command(subcommand)]
    Planes(PlanesCmd),
    /// Zigzag sequences and Fibonacci representations
    #[command(subcommand)]
    Zigzag(ZigzagCmd),
    /// Orders of appearance
    #[command(subcommand)]
    Alpha(AlphaCmd),
    /// Factorization degrees of X^(p+1) - aX - b
    #[command(subcommand)]
    Trinomial(TrinomialCmd),
    /// Morgan-Voyce polynomials
    #[command(subcommand)]
    Mv(MvCmd),
    /// Exhaustive identity checks
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Run the acceptance checks
    Selfcheck {
        #[arg(long, value_enum, default_value_t = acceptance::Level::Quick)]
        level: acceptance::Level,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Method {
    Recursive,
    Zigzag,
    /// Both constructions, cross-checked
    Both,
}

#[derive(Debug, Subcommand)]
pub enum FmpCmd {
    /// Exponent set of f_(m,p)
    Build {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: u64,
        #[arg(long, value_enum, default_value_t = Method::Recursive)]
        method: Method,
    },
    /// f_(m,p)(z) for z in F_p, or for an element of F_(p^k) given by coefficients
    Eval {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: u64,
        #[arg(long, allow_hyphen_values = true)]
        z: Option<i64>,
        /// Coefficients c0,c1,... of an element of F_(p^k), k = their count
        #[arg(long, value_delimiter = ',')]
        elem: Option<Vec<u64>>,
    },
    /// gcd(f_m, f_n) = f_gcd(m,n) over F_p
    Gcd {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: u64,
    },
    /// Streamed support size and degree
    Count {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum PlanesCmd {
    /// Planes and dilation orbits, by enumeration (or closed form with --formula)
    Count {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        formula: bool,
    },
    /// The values of ν over all planes
    Zvalues {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: usize,
        /// Visit every plane instead of one per orbit
        #[arg(long)]
        slow: bool,
    },
    /// Planes through F_p with ν = z
    Pencil {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: usize,
        #[arg(long, allow_hyphen_values = true)]
        z: i64,
    },
    /// f_(m,p) mod p from the plane invariants, compared with the recursion
    Oracle {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum OrientationArg {
    DownUp,
    UpDown,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ParityArg {
    Odd,
    Even,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum BaseArg {
    /// weights Fib(i+1)
    Fib,
    /// weights Fib(-i-2)
    Sfib,
}

#[derive(Debug, Subcommand)]
pub enum ZigzagCmd {
    /// Zigzag sequence with a given value
    #[command(allow_negative_numbers = true)]
    Rep {
        n: String,
        #[arg(long, value_enum, default_value_t = OrientationArg::DownUp)]
        orientation: OrientationArg,
        #[arg(long, value_enum, default_value_t = ParityArg::Odd)]
        parity: ParityArg,
        #[arg(long, value_enum, default_value_t = BaseArg::Fib)]
        base: BaseArg,
    },
    /// Zeckendorf and negafibonacci index sets
    #[command(allow_negative_numbers = true)]
    Zeck { n: String },
    /// All zigzag sequences of a length
    Enum {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = OrientationArg::DownUp)]
        orientation: OrientationArg,
    },
}

#[derive(Debug, Subcommand)]
pub enum AlphaCmd {
    /// α(z,p) for every z in F_p*
    Table {
        #[arg(long)]
        p: u64,
    },
    /// α(z,p) with its bound and symbol
    Zp {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        z: i64,
    },
    /// Least n with N | Fib(n)
    Classical { n: u64 },
    /// Fraction of primes with α(p) = p - 1
    Density {
        #[arg(long, default_value_t = 100_000)]
        limit: u64,
    },
    /// Least prime with α(p) = m
    Carmichael {
        #[arg(long)]
        m: u64,
        #[arg(long, default_value_t = 10_000)]
        limit: u64,
    },
    /// α(n) <= 2n scan with its equality cases
    Salle {
        #[arg(long, default_value_t = 10_000)]
        limit: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum TrinomialCmd {
    /// Predicted factor degrees of X^(p+1) - aX - b
    Predict {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
    },
    /// Prediction against distinct-degree factorization
    Verify {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
    },
    /// An irreducible polynomial of degree m dividing some γ̄_z
    Generate {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: u64,
    },
    /// Roots t of γ̄_z satisfy I_0(t,1) = t^(p^2)
    Frob2 {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        z: i64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KindArg {
    /// b_k = f_(2k+1,1)
    #[value(name = "b")]
    Small,
    /// B_k = f_(2k+2,1)
    #[value(name = "B")]
    Big,
}

#[derive(Debug, Subcommand)]
pub enum MvCmd {
    /// Coefficients of b_k or B_k
    Poly {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        k: u64,
    },
    /// Least m with p | MV_m(Z)
    Apparition {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        z: i64,
        /// Integer lift Z of z (defaults to z itself)
        #[arg(long, allow_hyphen_values = true)]
        lift: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum VerifyCmd {
    /// Bracket recursion for F_m at every point of F_(p^m), for indices 3..=m
    #[command(alias = "appendix")]
    Recursion {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: usize,
        /// Check a single index instead
        #[arg(long)]
        index: Option<usize>,
    },
}

/// A rendered result. `ok` is false when the report records a failed check.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub value: Value,
    pub ok: bool,
}

impl Report {
    fn ok(value: Value) -> Self {
        Report { value, ok: true }
    }
}

/// Invalid input detected outside the core library.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// Exit code for an error returned by a subcommand.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    if let Some(e) = err.downcast_ref::<fpt_core::Error>() {
        return match e {
            e if e.is_budget() => EXIT_BUDGET,
            fpt_core::Error::InternalConsistency(_) => EXIT_FAILED,
            _ => EXIT_USAGE,
        };
    }
    if err.downcast_ref::<UsageError>().is_some() {
        return EXIT_USAGE;
    }
    if err.downcast_ref::<std::io::Error>().is_some() {
        return EXIT_IO;
    }
    EXIT_FAILED
}

/// Executes a parsed command line.
pub fn execute(cli: &Cli) -> anyhow::Result<Report> {
    commands::dispatch(cli)
}

/// Parses and executes `args` (without the program name), returning the JSON
/// report. Failed checks are reported as errors.
pub fn run_json(args: &[&str]) -> anyhow::Result<Value> {
    let cli = Cli::try_parse_from(std::iter::once("fpt").chain(args.iter().copied()))
        .map_err(|e| UsageError(e.to_string()))?;
    let report = execute(&cli)?;
    if !report.ok {
        anyhow::bail!("check failed: {}", report.value);
    }
    Ok(report.value)
}

/// Full program behaviour: parse, execute, print, and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(report) => match output::render(&report.value, cli.global.format) {
            Ok(text) => {
                print!("{text}");
                if report.ok {
                    EXIT_OK
                } else {
                    EXIT_FAILED
                }
            }
            Err(e) => {
                eprintln!("error: {e:#}");
                EXIT_FAILED
            }
        },
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code(&e)
        }
    }
}
