use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use phillips_cli::grid::{parse_axis, product};
use phillips_cli::report::{self, Input, Report};
use phillips_cli::suites::{self, SuiteReport};
use phillips_core::extensions::SpectrumClass;
use phillips_core::{Error, Tolerances};

macro_rules! outln {
    ($o:expr, $($t:tt)*) => {{
        let _ = writeln!($o, $($t)*);
    }};
}

#[derive(Parser)]
#[command(name = "phillips", version, about = "Extensions of the Phillips symmetric operator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
    Csv,
}

#[derive(Args)]
struct Common {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Tolerance override `key=value`; repeatable.
    #[arg(long = "tol", value_name = "KEY=VALUE")]
    tol: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Classify one extension and verify its C-symmetry.
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        zeta: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        phi: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        omega: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        xi: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        k1: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        k2: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Classify every point of a parameter grid. Each axis is a comma list
    /// or `start:stop:count`.
    Scan {
        #[arg(long, allow_hyphen_values = true)]
        zeta: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        phi: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        omega: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        xi: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        k1: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        k2: Option<String>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long)]
        suite: String,
        #[command(flatten)]
        common: Common,
    },
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownSuite(_)
            | Error::UnknownTolerance(_)
            | Error::BadOverride(_)
            | Error::GridSpec(_)
            | Error::BadParameters(_) => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

type Outcome = Result<bool, Failure>;

fn tolerances(c: &Common) -> Result<Tolerances, Failure> {
    Ok(Tolerances::with_overrides(c.tol.iter().map(String::as_str))?)
}

/// Picks regular or degenerate mode; mixing the two families is a usage error.
fn mode<T>(regular: [&Option<T>; 4], degenerate: [&Option<T>; 2]) -> Result<bool, Failure> {
    let r = regular.iter().any(|o| o.is_some());
    let d = degenerate.iter().any(|o| o.is_some());
    match (r, d) {
        (true, true) => Err(Failure::Usage("--zeta/--phi/--omega/--xi conflict with --k1/--k2".into())),
        (false, false) => Err(Failure::Usage("give --zeta/--phi/--omega/--xi or --k1/--k2".into())),
        (r, _) => Ok(r),
    }
}

fn print_json<T: Serialize>(out: &mut String, v: &T) -> Result<(), Failure> {
    let s = serde_json::to_string_pretty(v).map_err(|e| Failure::Runtime(e.to_string()))?;
    outln!(out, "{s}");
    Ok(())
}

fn input_columns(i: &Input) -> String {
    match *i {
        Input::Regular { zeta, phi, omega, xi } => format!("regular,{zeta},{phi},{omega},{xi},,"),
        Input::Degenerate { k1, k2 } => format!("degenerate,,,,,{k1},{k2}"),
    }
}

const CSV_HEADER: &str = "kind,zeta,phi,omega,xi,k1,k2,spectrumClass,maxResidual,passed";

fn csv_row(r: &Report) -> String {
    format!("{},{:?},{:e},{}", input_columns(&r.input), r.spectrum_class, r.max_residual(), r.passed)
}

fn print_report_table(out: &mut String, r: &Report) {
    let input = match r.input {
        Input::Regular { zeta, phi, omega, xi } => format!("regular zeta={zeta} phi={phi} omega={omega} xi={xi}"),
        Input::Degenerate { k1, k2 } => format!("degenerate k1={k1} k2={k2}"),
    };
    outln!(out, "{:<16} {input}", "input");
    outln!(out, "{:<16} {:?}", "spectrumClass", r.spectrum_class);
    if let Some(c) = &r.c_solution {
        outln!(out, "{:<16} chi~={} omega~={} chi^={} omega^={}", "cSolution", c.chi_tilde, c.omega_tilde, c.chi_hat, c.omega_hat);
    }
    let res = serde_json::to_value(&r.residuals).unwrap_or_default();
    if let serde_json::Value::Object(map) = res {
        for (k, v) in map {
            match v {
                serde_json::Value::Array(items) => {
                    for item in items {
                        outln!(out, "{:<16} mu={} {}", k, item["mu"], item["residual"]);
                    }
                }
                other => outln!(out, "{k:<16} {other}"),
            }
        }
    }
    for (k, v) in &r.pass {
        outln!(out, "{:<16} {}", format!("pass.{k}"), if *v { "ok" } else { "FAIL" });
    }
    outln!(out, "{:<16} {}", "passed", r.passed);
}

fn classify(input: Input, common: &Common, out: &mut String) -> Outcome {
    let tol = tolerances(common)?;
    let r = report::build(input, &tol, common.seed)?;
    match common.format {
        Format::Json => print_json(out, &r)?,
        Format::Table => print_report_table(out, &r),
        Format::Csv => {
            outln!(out, "{CSV_HEADER}");
            outln!(out, "{}", csv_row(&r));
        }
    }
    Ok(r.passed)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Summary {
    count: usize,
    classes: BTreeMap<String, usize>,
    max_residual: f64,
    failures: usize,
}

#[derive(Serialize)]
struct ScanOutput {
    reports: Vec<Report>,
    summary: Summary,
}

fn axis(spec: &Option<String>) -> Result<Vec<f64>, Failure> {
    Ok(match spec {
        Some(s) => parse_axis(s)?,
        None => vec![0.0],
    })
}

fn scan(inputs: Vec<Input>, jobs: usize, common: &Common, out: &mut String) -> Outcome {
    let tol = tolerances(common)?;
    if jobs == 0 {
        return Err(Failure::Usage("--jobs must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Failure::Runtime(e.to_string()))?;
    let seed = common.seed;
    let reports: Vec<Report> = pool.install(|| {
        inputs
            .par_iter()
            .enumerate()
            .map(|(i, inp)| report::build(*inp, &tol, seed.wrapping_add(i as u64)))
            .collect::<phillips_core::Result<_>>()
    })?;
    let mut classes = BTreeMap::new();
    for r in &reports {
        *classes.entry(format!("{:?}", r.spectrum_class)).or_insert(0) += 1;
    }
    for c in [SpectrumClass::RealLine, SpectrumClass::WholePlane] {
        classes.entry(format!("{c:?}")).or_insert(0);
    }
    let summary = Summary {
        count: reports.len(),
        classes,
        max_residual: reports.iter().map(Report::max_residual).fold(0.0, f64::max),
        failures: reports.iter().filter(|r| !r.passed).count(),
    };
    let ok = summary.failures == 0;
    match common.format {
        Format::Json => print_json(out, &ScanOutput { reports, summary })?,
        Format::Csv => {
            outln!(out, "{CSV_HEADER}");
            for r in &reports {
                outln!(out, "{}", csv_row(r));
            }
        }
        Format::Table => {
            outln!(out, "{:<12} {:<44} {:<11} {:<12} passed", "kind", "parameters", "class", "maxResidual");
            for r in &reports {
                let (kind, params) = match r.input {
                    Input::Regular { zeta, phi, omega, xi } => ("regular", format!("{zeta} {phi} {omega} {xi}")),
                    Input::Degenerate { k1, k2 } => ("degenerate", format!("{k1} {k2}")),
                };
                outln!(out, 
                    "{kind:<12} {params:<44} {:<11} {:<12.3e} {}",
                    format!("{:?}", r.spectrum_class),
                    r.max_residual(),
                    r.passed
                );
            }
            outln!(out, 
                "count {} failures {} maxResidual {:.3e} classes {:?}",
                summary.count, summary.failures, summary.max_residual, summary.classes
            );
        }
    }
    Ok(ok)
}

fn verify(suite: &str, common: &Common, out: &mut String) -> Outcome {
    let tol = tolerances(common)?;
    let r: SuiteReport = suites::run(suite, common.seed, &tol)?;
    match common.format {
        Format::Json => print_json(out, &r)?,
        Format::Csv => {
            outln!(out, "name,value,tolerance,bound,passed");
            for c in &r.cases {
                outln!(out, "\"{}\",{:e},{:e},{:?},{}", c.name, c.value, c.tolerance, c.bound, c.passed);
            }
        }
        Format::Table => {
            for c in &r.cases {
                let op = if c.passed { "ok" } else { "FAIL" };
                outln!(out, "{:<56} {:>12.3e} {:?} {:>9.1e} {op}", c.name, c.value, c.bound, c.tolerance);
            }
            outln!(out, "suite {} seed {} maxResidual {:.3e} passed {}", r.suite, r.seed, r.max_residual, r.passed);
        }
    }
    Ok(r.passed)
}

fn run(cli: Cli, out: &mut String) -> Outcome {
    match cli.command {
        Command::Classify { zeta, phi, omega, xi, k1, k2, common } => {
            let input = if mode([&zeta, &phi, &omega, &xi], [&k1, &k2])? {
                Input::Regular {
                    zeta: zeta.unwrap_or(0.0),
                    phi: phi.unwrap_or(0.0),
                    omega: omega.unwrap_or(0.0),
                    xi: xi.unwrap_or(0.0),
                }
            } else {
                Input::Degenerate { k1: k1.unwrap_or(0.0), k2: k2.unwrap_or(0.0) }
            };
            classify(input, &common, out)
        }
        Command::Scan { zeta, phi, omega, xi, k1, k2, jobs, common } => {
            let inputs = if mode([&zeta, &phi, &omega, &xi], [&k1, &k2])? {
                let axes = [axis(&zeta)?, axis(&phi)?, axis(&omega)?, axis(&xi)?];
                product(&axes)
                    .into_iter()
                    .map(|p| Input::Regular { zeta: p[0], phi: p[1], omega: p[2], xi: p[3] })
                    .collect()
            } else {
                product(&[axis(&k1)?, axis(&k2)?])
                    .into_iter()
                    .map(|p| Input::Degenerate { k1: p[0], k2: p[1] })
                    .collect()
            };
            scan(inputs, jobs, &common, out)
        }
        Command::Verify { suite, common } => verify(&suite, &common, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let outcome = run(cli, &mut out);
    // A closed pipe downstream is not an error worth reporting.
    let _ = std::io::stdout().lock().write_all(out.as_bytes());
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
