//! Command-line front end: weighted persistence diagrams, distance
//! distributions, pairwise comparisons, filtration export, verification
//! suites, and the equal-distribution pair hunt.
//!
//! All results are JSON (stdout, or `--output` written atomically).
//! Failures print a machine-readable error object on stderr and exit with:
//! 2 for unreadable/unparsable input, 3 for invalid data or options, 4 for
//! an exceeded exactness cap, 1 for internal errors or failed verification.

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use wpdkit::diagram::weighted_pd;
use wpdkit::dist::hunt_equal_gdd;
use wpdkit::filtration::{gdd, vr_filtration};
use wpdkit::homology::zb_function;
use wpdkit::io::{read_mm_space, write_atomic, InputFormat};
use wpdkit::metric::{Exponent, MMSpace};
use wpdkit::report::{
    compare_report, filtration_report, gdd_report, weighted_diagram_report, zb_report,
    CompareOptions, FiltrationReport, ZbReport,
};
use wpdkit::{builtin, tol, verify, Error};

#[derive(Parser)]
#[command(
    name = "wpdkit",
    version,
    about = "Weighted persistence diagrams of Vietoris-Rips filtrations over metric-measure spaces",
    after_help = "Set WPDKIT_THREADS to cap internal parallelism."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Weighted persistence diagram (diagram + flip weights + grid + distance distribution)
    Wpd(WpdArgs),
    /// Global distance distribution of one space
    Gdd(GddArgs),
    /// Distances between two spaces, with optional stability report
    Compare(CompareArgs),
    /// Built-in verification suites (worked-example reproductions and property checks)
    Verify(VerifyArgs),
    /// Vietoris-Rips filtration export, optionally with a birth-death table
    Filtration(FiltrationArgs),
    /// Search for spaces with equal distance distributions but different weighted diagrams
    Hunt(HuntArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Input file: CSV distance matrix, CSV point rows, or JSON
    #[arg(long, value_name = "PATH", conflicts_with = "example")]
    input: Option<PathBuf>,
    /// Built-in space: ums-x, ums-y, hexagon, hexagon-mid, boutin-kemper-x, boutin-kemper-y
    #[arg(long, value_name = "NAME")]
    example: Option<String>,
    /// Input layout: auto, matrix, points, json
    #[arg(long, default_value = "auto", value_name = "FMT")]
    format: String,
}

impl InputArgs {
    fn space(&self) -> Result<MMSpace, Error> {
        match (&self.input, &self.example) {
            (Some(path), None) => read_mm_space(path, self.format.parse()?),
            (None, Some(name)) => builtin_space(name),
            _ => Err(Error::validation("provide exactly one of --input, --example")),
        }
    }
}

fn builtin_space(name: &str) -> Result<MMSpace, Error> {
    use wpdkit::metric::FiniteMetricSpace;
    let uniform = |s: FiniteMetricSpace| MMSpace::uniform(s);
    match name {
        "ums-x" => Ok(builtin::ums_x_mm()),
        "ums-y" => Ok(builtin::ums_y_mm()),
        "hexagon" => Ok(uniform(builtin::hexagon())),
        "hexagon-mid" => Ok(uniform(builtin::hexagon_mid())),
        "boutin-kemper-x" => Ok(uniform(builtin::boutin_kemper_x())),
        "boutin-kemper-y" => Ok(uniform(builtin::boutin_kemper_y())),
        other => Err(Error::validation(format!(
            "unknown example space '{other}' (expected ums-x, ums-y, hexagon, hexagon-mid, boutin-kemper-x, boutin-kemper-y)"
        ))),
    }
}

#[derive(Args)]
struct WpdArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Homology degree
    #[arg(long, default_value_t = 0)]
    degree: usize,
    /// Largest simplex dimension in the filtration
    #[arg(long, default_value_t = tol::MAX_DIM)]
    max_dim: usize,
    /// Tolerance for grouping equal critical values
    #[arg(long, default_value_t = tol::EPS_EQ)]
    eps_eq: f64,
    /// Write JSON here instead of stdout
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GddArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value_t = tol::EPS_EQ)]
    eps_eq: f64,
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    /// First input file
    #[arg(long, value_name = "PATH", conflicts_with = "example")]
    input: Option<PathBuf>,
    /// Second input file
    #[arg(long, value_name = "PATH", conflicts_with = "example")]
    input2: Option<PathBuf>,
    /// Built-in pair: ums, hexagon, boutin-kemper
    #[arg(long, value_name = "NAME")]
    example: Option<String>,
    /// Input layout for both files: auto, matrix, points, json
    #[arg(long, default_value = "auto", value_name = "FMT")]
    format: String,
    /// Homology degree
    #[arg(long, default_value_t = 0)]
    degree: usize,
    /// Exponent for the weighted distances: a number >= 1, or "inf"
    #[arg(long, default_value = "inf")]
    p: String,
    #[arg(long, default_value_t = tol::MAX_DIM)]
    max_dim: usize,
    #[arg(long, default_value_t = tol::EPS_EQ)]
    eps_eq: f64,
    /// Cap on |X|*|Y| for the exact Gromov solvers. The exact displacement
    /// caps stay fixed (8 bars per side, 4096 staircase cell pairs); above
    /// them the weighted distance degrades to a certified upper bound.
    #[arg(long, default_value_t = tol::GH_CAP)]
    cap: usize,
    /// Restarts for the upper-bound solvers
    #[arg(long, default_value_t = 8)]
    restarts: usize,
    /// Seed for the upper-bound solvers
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
    /// Extra analysis suite; only "stability" is available
    #[arg(long, value_name = "SUITE")]
    suite: Option<String>,
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Which suite to run; only "all" (the full acceptance suite) is available
    #[arg(long, default_value = "all", conflicts_with = "example")]
    suite: String,
    /// Run every check (same as --suite all, the default)
    #[arg(long, conflicts_with = "example")]
    all: bool,
    /// Run only one example reproduction: ums, hexagon, boutin-kemper
    #[arg(long, value_name = "NAME")]
    example: Option<String>,
    /// Seed for the randomized checks
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
    /// Also write the reports as JSON here
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct FiltrationArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value_t = tol::MAX_DIM)]
    max_dim: usize,
    #[arg(long, default_value_t = tol::EPS_EQ)]
    eps_eq: f64,
    /// Also export the birth-death (rank) table for this degree
    #[arg(long, value_name = "DEGREE")]
    zb_degree: Option<usize>,
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct HuntArgs {
    /// Number of random clouds to draw
    #[arg(long, default_value_t = 2000)]
    trials: usize,
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
    /// Stop after this many witness pairs
    #[arg(long, default_value_t = 8)]
    max_instances: usize,
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Serialize)]
struct FiltrationOutput {
    #[serde(flatten)]
    filtration: FiltrationReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    zb: Option<ZbReport>,
}

fn emit(output: Option<&PathBuf>, value: &impl Serialize) -> Result<(), Error> {
    let mut bytes = serde_json::to_vec_pretty(value)
        .map_err(|e| Error::internal(format!("serialization failed: {e}")))?;
    bytes.push(b'\n');
    match output {
        Some(path) => write_atomic(path, &bytes),
        None => {
            std::io::stdout().write_all(&bytes)?;
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Wpd(a) => {
            let space = a.input.space()?;
            let w = weighted_pd(&space, a.degree, a.max_dim, a.eps_eq)?;
            emit(a.output.as_ref(), &weighted_diagram_report(&w)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Gdd(a) => {
            let space = a.input.space()?;
            emit(a.output.as_ref(), &gdd_report(&gdd(&space, a.eps_eq)?))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Compare(a) => {
            let (x, y) = match (&a.input, &a.input2, &a.example) {
                (Some(px), Some(py), None) => {
                    let fmt: InputFormat = a.format.parse()?;
                    (read_mm_space(px, fmt)?, read_mm_space(py, fmt)?)
                }
                (None, None, Some(name)) => builtin::example_pair(name).ok_or_else(|| {
                    Error::validation(format!(
                        "unknown example pair '{name}' (expected one of {:?})",
                        builtin::EXAMPLE_NAMES
                    ))
                })?,
                _ => {
                    return Err(Error::validation(
                        "provide either --input and --input2, or --example",
                    ))
                }
            };
            let with_stability = match a.suite.as_deref() {
                None => false,
                Some("stability") => true,
                Some(other) => {
                    return Err(Error::validation(format!(
                        "unknown compare suite '{other}' (expected stability)"
                    )))
                }
            };
            let p: Exponent = a.p.parse::<Exponent>()?.validate()?;
            let opts = CompareOptions {
                degree: a.degree,
                p,
                max_dim: a.max_dim,
                eps_eq: a.eps_eq,
                gromov_cap: a.cap,
                restarts: a.restarts,
                seed: a.seed,
                with_stability,
                ..CompareOptions::default()
            };
            emit(a.output.as_ref(), &compare_report(&x, &y, &opts)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify(a) => {
            let reports = match &a.example {
                Some(name) => verify::run_example(name)?,
                None if a.all || a.suite == "all" => verify::run_all(a.seed),
                None => {
                    return Err(Error::validation(format!(
                        "unknown verify suite '{}' (expected all)",
                        a.suite
                    )))
                }
            };
            let mut passed = 0;
            for r in &reports {
                println!(
                    "[{}] {}: {}",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.id,
                    r.name
                );
                for line in &r.details {
                    println!("    {line}");
                }
                passed += usize::from(r.passed);
            }
            println!(
                "{}: {passed} of {} checks passed",
                if passed == reports.len() { "OK" } else { "FAILED" },
                reports.len()
            );
            if let Some(path) = &a.output {
                emit(Some(path), &reports)?;
            }
            Ok(if passed == reports.len() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Filtration(a) => {
            let space = a.input.space()?;
            let f = vr_filtration(&space.space, a.max_dim, a.eps_eq);
            let zb = match a.zb_degree {
                Some(d) => Some(zb_report(&zb_function(&f, d)?)),
                None => None,
            };
            let out = FiltrationOutput {
                filtration: filtration_report(&f, Some(space.masses())),
                zb,
            };
            emit(a.output.as_ref(), &out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Hunt(a) => {
            let report = hunt_equal_gdd(a.trials, a.seed, a.max_instances)?;
            emit(a.output.as_ref(), &report)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::Io(_) => 2,
        Error::Validation(_) => 3,
        Error::CapExceeded(_) => 4,
        Error::Internal(_) => 1,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse(_) => "parse",
        Error::Io(_) => "io",
        Error::Validation(_) => "validation",
        Error::CapExceeded(_) => "cap_exceeded",
        Error::Internal(_) => "internal",
    }
}

fn init_threads() {
    if let Ok(v) = std::env::var("WPDKIT_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n > 0 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn main() -> ExitCode {
    init_threads();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            let obj = serde_json::json!({
                "error": { "kind": error_kind(&e), "message": e.to_string() }
            });
            eprintln!("{obj}");
            ExitCode::from(exit_code(&e))
        }
    }
}
