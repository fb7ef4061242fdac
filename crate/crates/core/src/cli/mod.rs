//! Command-line front end: `solve`, `bench`, `check-jacobian` and `list`.
//!
//! [`run`] takes the argument list and output sinks explicitly and returns the
//! process exit code, so the binary is a one-line wrapper.

pub mod bench;
pub mod format;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::jacobian::check_jacobian;
use crate::linalg::{NormKind, RealVector};
use crate::methods::{solve, HarmonicForm, MethodId};
use crate::model::SolveConfig;
use crate::problems::{get_problem, list_problems, BenchmarkEntry};

pub use bench::{BenchCell, CompareStatus};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAILED: i32 = 2;

/// Largest accepted analytic-vs-finite-difference discrepancy.
pub const JACOBIAN_TOL: f64 = 1e-4;

#[derive(Debug, Parser)]
#[command(name = "quadnewton", version, about = "Newton-type solvers for nonlinear systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one benchmark problem with one method.
    Solve(SolveArgs),
    /// Run every method on a set of benchmark problems.
    Bench(BenchArgs),
    /// Compare analytic Jacobians with finite differences.
    CheckJacobian(CheckArgs),
    /// List the benchmark problems.
    List,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum NormArg {
    L2,
    Inf,
}

impl From<NormArg> for NormKind {
    fn from(n: NormArg) -> Self {
        match n {
            NormArg::L2 => NormKind::Euclidean,
            NormArg::Inf => NormKind::Infinity,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SolveFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BenchFormat {
    Markdown,
    Csv,
}

#[derive(Debug, clap::Args)]
struct Tolerances {
    /// Stopping tolerance.
    #[arg(long, default_value_t = 1e-14)]
    eps: f64,
    #[arg(long = "max-iter", default_value_t = 500)]
    max_iter: usize,
    #[arg(long, value_enum, default_value_t = NormArg::L2)]
    norm: NormArg,
    /// Harmonic-mean variant: product or average.
    #[arg(long = "hn-form", default_value = "product")]
    hn_form: HarmonicForm,
}

impl Tolerances {
    fn config(&self, method: MethodId) -> Result<SolveConfig, String> {
        let cfg = SolveConfig::new(method)
            .with_epsilon(self.eps)
            .with_max_iterations(self.max_iter)
            .with_norm(self.norm.into())
            .with_harmonic_form(self.hn_form);
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, clap::Args)]
struct SolveArgs {
    #[arg(long)]
    problem: String,
    #[arg(long)]
    method: MethodId,
    /// Starting point as comma-separated values; defaults to the published start.
    #[arg(long, allow_hyphen_values = true)]
    x0: Option<String>,
    #[command(flatten)]
    tol: Tolerances,
    /// Include the per-iteration trace.
    #[arg(long)]
    trace: bool,
    #[arg(long, value_enum, default_value_t = SolveFormat::Text)]
    format: SolveFormat,
}

#[derive(Debug, clap::Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',')]
    problems: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<MethodId>>,
    #[arg(long, value_enum, default_value_t = BenchFormat::Markdown)]
    format: BenchFormat,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    tol: Tolerances,
    /// Mark each cell MATCH, MISMATCH or UNVERIFIED against the published tables.
    #[arg(long)]
    compare: bool,
}

#[derive(Debug, clap::Args)]
struct CheckArgs {
    #[arg(long, value_delimiter = ',')]
    problems: Option<Vec<String>>,
    #[arg(long, default_value_t = 20)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(a, out),
        Command::Bench(a) => cmd_bench(a, out),
        Command::CheckJacobian(a) => cmd_check(a, out),
        Command::List => cmd_list(out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::usage(format!("I/O: {e}"))
    }
}

impl From<crate::Error> for Failure {
    fn from(e: crate::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

fn entries_for(ids: Option<&[String]>) -> Result<Vec<BenchmarkEntry>, Failure> {
    match ids {
        None => Ok(list_problems()),
        Some(ids) => ids
            .iter()
            .map(|id| get_problem(id.trim()).map_err(Failure::from))
            .collect(),
    }
}

fn cmd_solve(a: SolveArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let entry = get_problem(&a.problem)?;
    let cfg = a
        .tol
        .config(a.method)
        .map_err(Failure::usage)?
        .with_trace(a.trace);
    let x0 = match &a.x0 {
        None => entry.published_start.clone(),
        Some(s) => {
            let values = format::parse_list(s).map_err(|e| Failure::usage(format!("--x0: {e}")))?;
            if values.len() != entry.problem.dim {
                return Err(Failure::usage(format!(
                    "--x0 has {} values but problem ({}) has dimension {}",
                    values.len(),
                    entry.id(),
                    entry.problem.dim
                )));
            }
            RealVector::new(values)
        }
    };
    let report = solve(&entry.problem, &x0, &cfg)?;

    match a.format {
        SolveFormat::Json => {
            let trace: Vec<_> = report
                .trace
                .iter()
                .map(|r| {
                    json!({
                        "n": r.n,
                        "x": r.x.as_slice(),
                        "residual_norm": r.residual_norm,
                        "step_norm": r.step_norm,
                    })
                })
                .collect();
            let doc = json!({
                "problem": entry.id(),
                "method": a.method.as_str(),
                "x0": x0.as_slice(),
                "termination": report.termination.as_str(),
                "detail": report.detail,
                "iterations": report.iterations_used,
                "final": report.final_iterate.as_slice(),
                "error_estimate": report.error_estimate,
                "coc": report.coc_estimate,
                "trace": trace,
            });
            let text = serde_json::to_string_pretty(&doc).expect("JSON values are serializable");
            writeln!(out, "{text}")?;
        }
        SolveFormat::Text => {
            writeln!(out, "problem:     ({})", entry.id())?;
            writeln!(out, "method:      {} ({})", a.method, a.method.name())?;
            writeln!(out, "start:       {}", format::vector_exact(&x0))?;
            if report.converged() {
                writeln!(out, "solution:    {}", format::vector(&report.final_iterate))?;
            } else {
                writeln!(out, "solution:    No convergence")?;
                writeln!(out, "last iterate: {}", format::vector(&report.final_iterate))?;
            }
            writeln!(out, "iterations:  {}", report.iterations_used)?;
            let err = report.error_estimate.map_or_else(|| "-".into(), format::sci);
            writeln!(out, "error:       {err}")?;
            writeln!(out, "termination: {}", report.termination)?;
            if let Some(d) = &report.detail {
                writeln!(out, "detail:      {d}")?;
            }
            let coc = report.coc_estimate.map_or_else(|| "-".into(), format::coc);
            writeln!(out, "coc:         {coc}")?;
            if a.trace {
                writeln!(out)?;
                writeln!(out, "{:>4}  {:<48}  {:>10}  {:>10}", "n", "x", "|F(x)|", "|step|")?;
                for r in &report.trace {
                    let step = r.step_norm.map_or_else(|| "-".into(), format::sci);
                    writeln!(
                        out,
                        "{:>4}  {:<48}  {:>10}  {:>10}",
                        r.n,
                        format::vector(&r.x),
                        format::sci(r.residual_norm),
                        step
                    )?;
                }
            }
        }
    }
    Ok(if report.converged() { EXIT_OK } else { EXIT_FAILED })
}

fn cmd_bench(a: BenchArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let entries = entries_for(a.problems.as_deref())?;
    let methods = a.methods.unwrap_or_else(|| MethodId::ALL.to_vec());
    let base = a.tol.config(MethodId::Mtn).map_err(Failure::usage)?;
    let mut cells = bench::run_bench(&entries, &methods, &base);
    if a.compare {
        bench::annotate(&mut cells, &entries);
    }

    let mut sink: Box<dyn Write + '_> = match &a.out {
        Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|e| {
            Failure::usage(format!("cannot create {}: {e}", path.display()))
        })?)),
        None => Box::new(&mut *out),
    };
    match a.format {
        BenchFormat::Csv => bench::write_csv(&cells, &mut sink).map_err(|e| Failure::usage(e.to_string()))?,
        BenchFormat::Markdown => sink.write_all(bench::to_markdown(&cells, &entries).as_bytes())?,
    }
    sink.flush()?;
    Ok(EXIT_OK)
}

fn cmd_check(a: CheckArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let entries = entries_for(a.problems.as_deref())?;
    if a.samples == 0 {
        return Err(Failure::usage("--samples must be positive"));
    }
    let mut all_ok = true;
    writeln!(out, "{:<8} {:>12}  status", "problem", "discrepancy")?;
    for e in &entries {
        match check_jacobian(&e.problem, a.samples, a.seed) {
            Ok(d) => {
                let ok = d <= JACOBIAN_TOL;
                all_ok &= ok;
                let status = if ok { "ok" } else { "FAIL" };
                writeln!(out, "({})      {:>12}  {status}", e.id(), format::sci(d))?;
            }
            Err(err) => {
                all_ok = false;
                writeln!(out, "({})      {:>12}  FAIL: {err}", e.id(), "-")?;
            }
        }
    }
    Ok(if all_ok { EXIT_OK } else { EXIT_FAILED })
}

fn cmd_list(out: &mut dyn Write) -> Result<i32, Failure> {
    for e in list_problems() {
        let p = &e.problem;
        writeln!(out, "({})  dimension {}", e.id(), p.dim)?;
        for line in &p.display {
            writeln!(out, "    {line}")?;
        }
        writeln!(out, "    start: {}", format::vector_exact(&e.published_start))?;
        for r in &p.reference_roots {
            writeln!(out, "    root:  {} [{}]", format::vector(&r.point), r.provenance)?;
        }
        writeln!(out)?;
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("quadnewton").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn solve_text() {
        let (code, out, _) = run_args(&["solve", "--problem", "c", "--method", "mtn"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("solution:    (1.48803387, 0.75598306)"), "{out}");
        assert!(out.contains("iterations:  4"));
    }

    #[test]
    fn solve_json_trace() {
        let (code, out, _) = run_args(&["solve", "--problem", "c", "--method", "cn", "--trace", "--format", "json"]);
        assert_eq!(code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["termination"], "converged");
        assert_eq!(v["iterations"], 5);
        assert_eq!(v["trace"].as_array().unwrap().len(), 6);
    }

    #[test]
    fn negative_start() {
        let (code, out, _) = run_args(&["solve", "--problem", "h", "--method", "mtn", "--x0", "-1,-1,-1,0.5"]);
        assert!(code == EXIT_OK || code == EXIT_FAILED);
        assert!(out.contains("start:       (-1, -1, -1, 0.5)"), "{out}");
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_args(&["solve", "--problem", "c", "--method", "mtn", "--x0", "1,2,3"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["solve", "--problem", "c", "--method", "mtn", "--eps", "0"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["solve", "--problem", "z", "--method", "mtn"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["solve", "--problem", "c", "--method", "xx"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["--help"]).0, EXIT_OK);
        assert_eq!(run_args(&["--version"]).0, EXIT_OK);
    }

    #[test]
    fn non_convergence_exit_code() {
        let (code, out, _) = run_args(&["solve", "--problem", "d", "--method", "cn"]);
        assert_eq!(code, EXIT_FAILED);
        assert!(out.contains("No convergence"));
    }

    #[test]
    fn check_and_list() {
        assert_eq!(run_args(&["check-jacobian", "--samples", "5"]).0, EXIT_OK);
        assert_eq!(run_args(&["check-jacobian", "--problems", "q"]).0, EXIT_USAGE);
        let (code, out, _) = run_args(&["list"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("(h)  dimension 4"));
    }
}
