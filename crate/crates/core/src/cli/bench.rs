//! Benchmark grid: every (problem, method) cell, compared against the
//! published tables and rendered as CSV or Markdown.

use std::fmt;
use std::io::Write;

use rayon::prelude::*;

use super::format;
use crate::linalg::{norm, NormKind, RealVector};
use crate::methods::{solve, MethodId};
use crate::model::{evaluate_residual, SolveConfig, Termination};
use crate::problems::{BenchmarkEntry, PublishedOutcome, RootMatch};

/// Per-coordinate tolerance against printed solution digits.
pub const SOLUTION_TOL: f64 = 1e-3;
/// Allowed difference from the printed iteration count.
pub const ITERATION_TOL: usize = 2;
/// `‖F(x*)‖∞` bound for converged cells.
pub const CERTIFICATE_TOL: f64 = 1e-10;

pub const CSV_HEADER: [&str; 8] = [
    "problem",
    "x0",
    "method",
    "solution",
    "iterations",
    "error",
    "termination",
    "coc",
];

const NO_CONVERGENCE: &str = "No convergence";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompareStatus {
    Match,
    Mismatch,
    /// Nothing printed to compare with.
    Unverified,
}

impl CompareStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CompareStatus::Match => "MATCH",
            CompareStatus::Mismatch => "MISMATCH",
            CompareStatus::Unverified => "UNVERIFIED",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "MATCH" => Some(CompareStatus::Match),
            "MISMATCH" => Some(CompareStatus::Mismatch),
            "UNVERIFIED" => Some(CompareStatus::Unverified),
            _ => None,
        }
    }
}

impl fmt::Display for CompareStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One row of a benchmark table.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchCell {
    pub problem: String,
    pub x0: RealVector,
    pub method: MethodId,
    /// `None` when the run did not converge.
    pub solution: Option<RealVector>,
    pub final_iterate: RealVector,
    pub iterations: usize,
    pub error: Option<f64>,
    pub termination: Termination,
    pub coc: Option<f64>,
    /// `‖F(final_iterate)‖∞`, when it can be evaluated.
    pub residual_inf: Option<f64>,
    pub compare: Option<CompareStatus>,
}

impl BenchCell {
    pub fn converged(&self) -> bool {
        self.termination == Termination::Converged
    }
}

/// Runs a single cell from the entry's published start.
pub fn run_cell(entry: &BenchmarkEntry, method: MethodId, base: &SolveConfig) -> BenchCell {
    let cfg = SolveConfig {
        method,
        trace_enabled: false,
        ..base.clone()
    };
    let report = solve(&entry.problem, &entry.published_start, &cfg)
        .expect("published start has the problem's dimension and the config is validated");
    let residual_inf = evaluate_residual(&entry.problem, &report.final_iterate)
        .ok()
        .map(|f| norm(&f, NormKind::Infinity));
    BenchCell {
        problem: entry.id().to_string(),
        x0: entry.published_start.clone(),
        method,
        solution: report.converged().then(|| report.final_iterate.clone()),
        final_iterate: report.final_iterate,
        iterations: report.iterations_used,
        error: report.error_estimate,
        termination: report.termination,
        coc: report.coc_estimate,
        residual_inf,
        compare: None,
    }
}

/// Runs every (entry, method) pair. Cells execute in parallel; the result is
/// in entry order, then method order.
pub fn run_bench(entries: &[BenchmarkEntry], methods: &[MethodId], base: &SolveConfig) -> Vec<BenchCell> {
    let jobs: Vec<(&BenchmarkEntry, MethodId)> = entries
        .iter()
        .flat_map(|e| methods.iter().map(move |&m| (e, m)))
        .collect();
    jobs.par_iter().map(|&(e, m)| run_cell(e, m, base)).collect()
}

/// Judges a cell against the published row for its method.
pub fn compare_cell(cell: &BenchCell, entry: &BenchmarkEntry) -> CompareStatus {
    match &entry.published_row(cell.method).outcome {
        PublishedOutcome::Blank => CompareStatus::Unverified,
        PublishedOutcome::NoConvergence => {
            if cell.converged() {
                CompareStatus::Mismatch
            } else {
                CompareStatus::Match
            }
        }
        PublishedOutcome::Converged {
            solution,
            iterations,
            ..
        } => {
            let Some(x) = cell.solution.as_ref() else {
                return CompareStatus::Mismatch;
            };
            let count_ok = cell.iterations.abs_diff(*iterations) <= ITERATION_TOL;
            let root_ok = match entry.root_match {
                RootMatch::Digits => x
                    .iter()
                    .zip(solution)
                    .all(|(a, b)| (a - b).abs() <= SOLUTION_TOL),
                RootMatch::CertificateOnly => {
                    cell.residual_inf.is_some_and(|r| r <= CERTIFICATE_TOL)
                }
            };
            if count_ok && root_ok {
                CompareStatus::Match
            } else {
                CompareStatus::Mismatch
            }
        }
    }
}

/// Fills in `compare` for every cell.
pub fn annotate(cells: &mut [BenchCell], entries: &[BenchmarkEntry]) {
    for cell in cells {
        let entry = entries
            .iter()
            .find(|e| e.id() == cell.problem)
            .expect("cell belongs to a listed entry");
        cell.compare = Some(compare_cell(cell, entry));
    }
}

fn csv_fields(cell: &BenchCell) -> Vec<String> {
    let mut fields = vec![
        cell.problem.clone(),
        format::vector_exact(&cell.x0),
        cell.method.as_str().to_string(),
        cell.solution
            .as_ref()
            .map_or_else(|| NO_CONVERGENCE.to_string(), format::vector),
        cell.iterations.to_string(),
        cell.error.map(format::sci).unwrap_or_default(),
        cell.termination.as_str().to_string(),
        cell.coc.map(format::coc).unwrap_or_default(),
    ];
    if let Some(c) = cell.compare {
        fields.push(c.as_str().to_string());
    }
    fields
}

/// Writes `cells` as CSV with a header row. A `compare` column is added when
/// any cell carries a comparison.
pub fn write_csv<W: Write>(cells: &[BenchCell], out: W) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let mut header: Vec<&str> = CSV_HEADER.to_vec();
    if cells.iter().any(|c| c.compare.is_some()) {
        header.push("compare");
    }
    w.write_record(&header)?;
    for cell in cells {
        w.write_record(csv_fields(cell))?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_csv(cells: &[BenchCell]) -> String {
    let mut buf = Vec::new();
    write_csv(cells, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("CSV output is UTF-8")
}

/// A CSV row read back, holding exactly the printed precision.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub problem: String,
    pub x0: RealVector,
    pub method: MethodId,
    pub solution: Option<RealVector>,
    pub iterations: usize,
    pub error: Option<f64>,
    pub termination: String,
    pub coc: Option<f64>,
    pub compare: Option<CompareStatus>,
}

impl CsvRow {
    /// The values a cell shows once printed.
    pub fn printed(cell: &BenchCell) -> CsvRow {
        let round = |s: String| s.parse::<f64>().expect("formatted float parses");
        CsvRow {
            problem: cell.problem.clone(),
            x0: cell.x0.clone(),
            method: cell.method,
            solution: cell
                .solution
                .as_ref()
                .map(|s| format::parse_vector(&format::vector(s)).expect("formatted vector parses")),
            iterations: cell.iterations,
            error: cell.error.map(|e| round(format::sci(e))),
            termination: cell.termination.as_str().to_string(),
            coc: cell.coc.map(|q| round(format::coc(q))),
            compare: cell.compare,
        }
    }
}

/// Parses CSV produced by [`write_csv`].
pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>, String> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().map_err(|e| e.to_string())?.clone();
    if header.iter().take(8).ne(CSV_HEADER.iter().copied()) {
        return Err(format!("unexpected header {header:?}"));
    }
    let opt_f64 = |s: &str| -> Result<Option<f64>, String> {
        if s.is_empty() {
            Ok(None)
        } else {
            s.parse().map(Some).map_err(|_| format!("bad number `{s}`"))
        }
    };
    r.records()
        .map(|rec| {
            let rec = rec.map_err(|e| e.to_string())?;
            let get = |i: usize| rec.get(i).unwrap_or("");
            Ok(CsvRow {
                problem: get(0).to_string(),
                x0: format::parse_vector(get(1)).ok_or("bad x0")?,
                method: get(2).parse()?,
                solution: match get(3) {
                    NO_CONVERGENCE => None,
                    s => Some(format::parse_vector(s).ok_or("bad solution")?),
                },
                iterations: get(4).parse().map_err(|_| "bad iterations")?,
                error: opt_f64(get(5))?,
                termination: get(6).to_string(),
                coc: opt_f64(get(7))?,
                compare: match rec.get(8) {
                    None => None,
                    Some(s) => Some(CompareStatus::parse(s).ok_or("bad compare status")?),
                },
            })
        })
        .collect()
}

/// Renders one Markdown table per published table: (a)–(e) and (f)–(h).
pub fn to_markdown(cells: &[BenchCell], entries: &[BenchmarkEntry]) -> String {
    let with_compare = cells.iter().any(|c| c.compare.is_some());
    let mut out = String::new();
    for table in [1u8, 2] {
        let ids: Vec<&str> = entries
            .iter()
            .filter(|e| e.table() == table)
            .map(|e| e.id())
            .collect();
        let rows: Vec<&BenchCell> = cells
            .iter()
            .filter(|c| ids.contains(&c.problem.as_str()))
            .collect();
        if rows.is_empty() {
            continue;
        }
        if !out.is_empty() {
            out.push('\n');
        }
        let title = match table {
            1 => "Two-variable systems (a)–(e)",
            _ => "Larger systems (f)–(h)",
        };
        out.push_str(&format!("### {title}\n\n"));
        out.push_str("| F(x) | x0 | Method | Approximated solution | Iteration | Error estimation | Termination | COC |");
        if with_compare {
            out.push_str(" Compare |");
        }
        out.push('\n');
        out.push_str("|---|---|---|---|---:|---:|---|---:|");
        if with_compare {
            out.push_str("---|");
        }
        out.push('\n');
        let mut last_problem = "";
        for c in rows {
            let (label, x0) = if c.problem != last_problem {
                (format!("({})", c.problem), format::vector_exact(&c.x0))
            } else {
                (String::new(), String::new())
            };
            last_problem = &c.problem;
            let (solution, iterations, error) = match &c.solution {
                Some(s) => (
                    format::vector(s),
                    c.iterations.to_string(),
                    c.error.map(format::sci_pretty).unwrap_or_default(),
                ),
                None => (NO_CONVERGENCE.to_string(), "-".into(), "-".into()),
            };
            out.push_str(&format!(
                "| {label} | {x0} | {} | {solution} | {iterations} | {error} | {} | {} |",
                c.method,
                c.termination,
                c.coc.map(format::coc).unwrap_or_else(|| "-".into()),
            ));
            if let Some(cmp) = c.compare {
                out.push_str(&format!(" {cmp} |"));
            }
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{get_problem, list_problems};

    fn cells_for(ids: &[&str]) -> (Vec<BenchmarkEntry>, Vec<BenchCell>) {
        let entries: Vec<BenchmarkEntry> = ids.iter().map(|id| get_problem(id).unwrap()).collect();
        let cells = run_bench(&entries, &MethodId::ALL, &SolveConfig::default());
        (entries, cells)
    }

    #[test]
    fn order_is_problem_then_method() {
        let (_, cells) = cells_for(&["h", "c"]);
        let keys: Vec<(String, MethodId)> = cells.iter().map(|c| (c.problem.clone(), c.method)).collect();
        let expected: Vec<(String, MethodId)> = ["h", "c"]
            .iter()
            .flat_map(|p| MethodId::ALL.iter().map(move |&m| (p.to_string(), m)))
            .collect();
        assert_eq!(keys, expected);
    }

    #[test]
    fn problem_h_counts() {
        let (_, cells) = cells_for(&["h"]);
        let counts: Vec<usize> = cells.iter().map(|c| c.iterations).collect();
        assert_eq!(counts, [5, 4, 4, 6, 4]);
    }

    #[test]
    fn compare_on_d() {
        let (entries, mut cells) = cells_for(&["d"]);
        annotate(&mut cells, &entries);
        assert!(cells.iter().all(|c| c.compare == Some(CompareStatus::Match)), "{cells:#?}");
    }

    #[test]
    fn blank_row_is_unverified() {
        let (entries, mut cells) = cells_for(&["a"]);
        annotate(&mut cells, &entries);
        assert_eq!(cells[3].compare, Some(CompareStatus::Unverified));
    }

    #[test]
    fn csv_round_trip() {
        let entries = list_problems();
        let mut cells = run_bench(&entries, &MethodId::ALL, &SolveConfig::default());
        annotate(&mut cells, &entries);
        let text = to_csv(&cells);
        assert!(text.starts_with("problem,x0,method,solution,iterations,error,termination,coc,compare\n"));
        assert!(!text.contains('\r'));
        let parsed = parse_csv(&text).unwrap();
        let printed: Vec<CsvRow> = cells.iter().map(CsvRow::printed).collect();
        assert_eq!(parsed, printed);
    }

    #[test]
    fn markdown_has_two_tables() {
        let entries = list_problems();
        let cells = run_bench(&entries, &MethodId::ALL, &SolveConfig::default());
        let md = to_markdown(&cells, &entries);
        assert!(md.contains("### Two-variable systems (a)–(e)"));
        assert!(md.contains("### Larger systems (f)–(h)"));
        assert_eq!(md.lines().filter(|l| l.starts_with("| ") && !l.starts_with("| F(x)")).count(), 40);
    }
}
