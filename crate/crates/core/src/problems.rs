//! The eight benchmark systems (a)–(h), their published outcomes, and a few
//! synthetic systems used in tests.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, RealVector};
use crate::methods::MethodId;
use crate::model::{ProblemSpec, Provenance};

/// Published outcome of one (problem, method) cell.
#[derive(Debug, Clone, PartialEq)]
pub enum PublishedOutcome {
    Converged {
        solution: Vec<f64>,
        iterations: usize,
        error: f64,
    },
    NoConvergence,
    /// The published table leaves the row empty.
    Blank,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PublishedRow {
    pub method: MethodId,
    pub outcome: PublishedOutcome,
    /// Known defects in the printed row.
    pub note: Option<&'static str>,
}

/// How a computed root is compared with the published digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootMatch {
    /// Per-coordinate agreement with the printed solution.
    Digits,
    /// Several roots exist and methods land on different ones; only the
    /// residual certificate is checked.
    CertificateOnly,
}

#[derive(Debug, Clone)]
pub struct BenchmarkEntry {
    pub problem: ProblemSpec,
    pub published_start: RealVector,
    /// Rows in method order CN, TN, MN, HN, MTN.
    pub published_rows: Vec<PublishedRow>,
    pub root_match: RootMatch,
}

impl BenchmarkEntry {
    pub fn id(&self) -> &str {
        &self.problem.id
    }

    pub fn published_row(&self, method: MethodId) -> &PublishedRow {
        self.published_rows
            .iter()
            .find(|r| r.method == method)
            .expect("every benchmark lists all five methods")
    }

    /// 1 for (a)–(e), 2 for (f)–(h), matching the published split.
    pub fn table(&self) -> u8 {
        if self.problem.dim == 2 {
            1
        } else {
            2
        }
    }
}

fn v(x: &[f64]) -> RealVector {
    RealVector::new(x.to_vec())
}

fn conv(solution: &[f64], iterations: usize, error: f64) -> PublishedOutcome {
    PublishedOutcome::Converged {
        solution: solution.to_vec(),
        iterations,
        error,
    }
}

fn rows(outcomes: [PublishedOutcome; 5]) -> Vec<PublishedRow> {
    MethodId::ALL
        .iter()
        .zip(outcomes)
        .map(|(&method, outcome)| PublishedRow {
            method,
            outcome,
            note: None,
        })
        .collect()
}

fn same_for_all(solution: &[f64], iterations: [usize; 5], errors: [f64; 5]) -> Vec<PublishedRow> {
    rows(std::array::from_fn(|i| conv(solution, iterations[i], errors[i])))
}

fn with_note(mut rows: Vec<PublishedRow>, method: MethodId, note: &'static str) -> Vec<PublishedRow> {
    if let Some(r) = rows.iter_mut().find(|r| r.method == method) {
        r.note = Some(note);
    }
    rows
}

/// Closed-form root of (c) on the branch x2 = (24 - √108)/18.
pub fn root_c() -> [f64; 2] {
    let x2 = (24.0 - 108f64.sqrt()) / 18.0;
    [3.0 - 2.0 * x2, x2]
}

/// Closed-form root of (h): x1 = x2 = x3 = 1/√3, x4 = -1/(2√3).
pub fn root_h() -> [f64; 4] {
    let t = 1.0 / 3f64.sqrt();
    [t, t, t, -0.5 * t]
}

fn problem_a() -> BenchmarkEntry {
    let problem = ProblemSpec::new(
        "a",
        2,
        |x: &RealVector| {
            v(&[
                (-x[0]).exp() * x[1].exp() + x[0] * x[1].cos(),
                x[0] + x[1] - 1.0,
            ])
        },
        |x: &RealVector| {
            let e = (-x[0]).exp() * x[1].exp();
            DenseMatrix::from_rows(&[
                [-e + x[1].cos(), e - x[0] * x[1].sin()],
                [1.0, 1.0],
            ])
        },
    )
    .with_display(["exp(-x1)*exp(x2) + x1*cos(x2) = 0", "x1 + x2 - 1 = 0"])
    .with_start(vec![1.0, 2.0])
    // x2 near -(k + 1/2)π with x1 = 1 - x2; the printed roots do not satisfy
    // the first equation and are kept only in the table rows
    .with_root(vec![2.5768908840099747, -1.5768908840099747], Provenance::Computed)
    .with_root(vec![8.853981640236080, -7.853981640236080], Provenance::Computed)
    .with_root(vec![15.137166941154082, -14.137166941154082], Provenance::Computed);

    let published_rows = with_note(
        with_note(
            rows([
                conv(&[46.61144449, -45.61144449], 9, 9.33e-15),
                conv(&[-4.38161975, 5.38161976], 5, 9.10e-14),
                conv(&[-12.92527753, 13.92527753], 6, 3.55e-15),
                PublishedOutcome::Blank,
                conv(&[-16.44481890, 17.44481890], 6, 1.64e-14),
            ]),
            MethodId::Hn,
            "row left blank in the published table",
        ),
        MethodId::Mtn,
        "printed under the label TMN and without parentheses",
    );
    BenchmarkEntry {
        published_start: v(&[1.0, 2.0]),
        problem,
        published_rows,
        root_match: RootMatch::CertificateOnly,
    }
}

fn problem_b() -> BenchmarkEntry {
    let problem = ProblemSpec::new(
        "b",
        2,
        |x: &RealVector| {
            v(&[
                x[0] * x[0] + 3.0 * x[0].ln() - x[1] * x[1],
                2.0 * x[0] * x[0] - x[0] * x[1] - 5.0 * x[0] + 1.0,
            ])
        },
        |x: &RealVector| {
            DenseMatrix::from_rows(&[
                [2.0 * x[0] + 3.0 / x[0], -2.0 * x[1]],
                [4.0 * x[0] - x[1] - 5.0, -x[0]],
            ])
        },
    )
    .with_guard(|x| {
        if x[0] > 0.0 {
            Ok(())
        } else {
            Err(format!("ln(x1) requires x1 > 0, got x1 = {}", x[0]))
        }
    })
    .with_display(["x1^2 + 3*ln(x1) - x2^2 = 0", "2*x1^2 - x1*x2 - 5*x1 + 1 = 0"])
    .with_start(vec![3.4, 2.2])
    .with_root(vec![5.26375932, 5.71748439], Provenance::Published)
    .with_root(vec![5.2637529322012122, 5.7174843859782495], Provenance::Computed);

    BenchmarkEntry {
        published_start: v(&[3.4, 2.2]),
        problem,
        published_rows: same_for_all(
            &[5.26375932, 5.71748439],
            [10, 7, 7, 8, 8],
            [7.99e-15, 6.21e-15, 4.44e-15, 4.44e-15, 8.88e-15],
        ),
        root_match: RootMatch::Digits,
    }
}

fn problem_c() -> BenchmarkEntry {
    let problem = ProblemSpec::new(
        "c",
        2,
        |x: &RealVector| {
            v(&[
                x[0] + 2.0 * x[1] - 3.0,
                2.0 * x[0] * x[0] + x[1] * x[1] - 5.0,
            ])
        },
        |x: &RealVector| DenseMatrix::from_rows(&[[1.0, 2.0], [4.0 * x[0], 2.0 * x[1]]]),
    )
    .with_display(["x1 + 2*x2 - 3 = 0", "2*x1^2 + x2^2 - 5 = 0"])
    .with_start(vec![1.5, 1.0])
    // printed second coordinate is truncated in the 4th decimal
    .with_root(vec![1.48803387, 0.7558306], Provenance::Published)
    .with_root(root_c().to_vec(), Provenance::Computed);

    BenchmarkEntry {
        published_start: v(&[1.5, 1.0]),
        problem,
        published_rows: same_for_all(
            &[1.48803387, 0.7558306],
            [5, 4, 4, 5, 4],
            [9.99e-16, 9.99e-16, 9.99e-16, 9.99e-15, 9.99e-16],
        ),
        root_match: RootMatch::Digits,
    }
}

/// Points within this distance of a pole of tan are rejected.
const TAN_POLE_GAP: f64 = 1e-12;

fn near_tan_pole(t: f64) -> bool {
    let k = ((t - PI / 2.0) / PI).round();
    (t - (PI / 2.0 + k * PI)).abs() <= TAN_POLE_GAP
}

fn problem_d() -> BenchmarkEntry {
    let problem = ProblemSpec::new(
        "d",
        2,
        |x: &RealVector| {
            let t = x[0] * FRAC_1_SQRT_2 + x[1];
            v(&[
                (x[0] * x[0]).ln() - 2.0 * x[1].cos().ln(),
                x[0] * t.tan() - SQRT_2,
            ])
        },
        |x: &RealVector| {
            let t = x[0] * FRAC_1_SQRT_2 + x[1];
            let tan = t.tan();
            let sec2 = 1.0 + tan * tan;
            DenseMatrix::from_rows(&[
                [2.0 / x[0], 2.0 * x[1].tan()],
                [tan + x[0] * sec2 * FRAC_1_SQRT_2, x[0] * sec2],
            ])
        },
    )
    .with_guard(|x| {
        if x[0] == 0.0 {
            return Err("ln(x1^2) requires x1 != 0".into());
        }
        if !(x[1].cos() > 0.0) {
            return Err(format!("ln(cos(x2)) requires cos(x2) > 0, got x2 = {}", x[1]));
        }
        if near_tan_pole(x[0] * FRAC_1_SQRT_2 + x[1]) {
            return Err("tan(x1/sqrt(2) + x2) at a pole".into());
        }
        Ok(())
    })
    // F' only needs 1/x1, tan(x2) and tan(x1/sqrt(2) + x2)
    .with_jacobian_guard(|x| {
        if x[0] == 0.0 {
            return Err("1/x1 requires x1 != 0".into());
        }
        if near_tan_pole(x[1]) {
            return Err("tan(x2) at a pole".into());
        }
        if near_tan_pole(x[0] * FRAC_1_SQRT_2 + x[1]) {
            return Err("tan(x1/sqrt(2) + x2) at a pole".into());
        }
        Ok(())
    })
    .with_display(["ln(x1^2) - 2*ln(cos(x2)) = 0", "x1*tan(x1/sqrt(2) + x2) - sqrt(2) = 0"])
    .with_start(vec![0.2, 0.2])
    // second sampling center, next to the root reached by MTN
    .with_start(vec![0.95, 6.58])
    .with_root(vec![0.95480414, 6.58498148], Provenance::Published)
    .with_root(vec![0.95480414164162942, 6.5849814844942482], Provenance::Computed);

    let mtn = conv(&[0.95480414, 6.58498148], 8, 1.33e-15);
    BenchmarkEntry {
        published_start: v(&[0.2, 0.2]),
        problem,
        published_rows: rows([
            PublishedOutcome::NoConvergence,
            PublishedOutcome::NoConvergence,
            PublishedOutcome::NoConvergence,
            PublishedOutcome::NoConvergence,
            mtn,
        ]),
        root_match: RootMatch::Digits,
    }
}

fn problem_e() -> BenchmarkEntry {
    let problem = ProblemSpec::new(
        "e",
        2,
        |x: &RealVector| {
            v(&[
                x[0] + x[1].exp() - x[1].cos(),
                3.0 * x[0] - x[1] - x[1].sin(),
            ])
        },
        |x: &RealVector| {
            DenseMatrix::from_rows(&[
                [1.0, x[1].exp() + x[1].sin()],
                [3.0, -1.0 - x[1].cos()],
            ])
        },
    )
    .with_display(["x1 + exp(x2) - cos(x2) = 0", "3*x1 - x2 - sin(x2) = 0"])
    .with_start(vec![-1.0, -3.0])
    .with_root(vec![0.0, 0.0], Provenance::Inspection);

    let published_rows = with_note(
        with_note(
            rows([
                conv(&[2.1378e-16, 3.207e-16], 457, 6.22e-16),
                conv(&[4.817e-18, 7.221e-18], 28, 1.21e-27),
                conv(&[-2.471e-17, -3.707e-27], 8, 4.85e-2),
                conv(&[6.715e-17, 9.107e-17], 53, 2.77e-22),
                conv(&[-1.364e-17, -2.046e-17], 49, 0.0),
            ]),
            MethodId::Mn,
            "printed error 4.85e-2 contradicts the 1e-14 stopping rule",
        ),
        MethodId::Mtn,
        "printed solution is malformed; the evident vector is used",
    );
    BenchmarkEntry {
        published_start: v(&[-1.0, -3.0]),
        problem,
        published_rows,
        root_match: RootMatch::CertificateOnly,
    }
}

fn problem_f() -> BenchmarkEntry {
    let problem = ProblemSpec::new(
        "f",
        3,
        |x: &RealVector| {
            v(&[
                x[0] * x[0] + x[1] * x[1] + x[2] * x[2] - 9.0,
                x[0] * x[1] * x[2] - 1.0,
                x[0] + x[1] - x[2] * x[2],
            ])
        },
        |x: &RealVector| {
            DenseMatrix::from_rows(&[
                [2.0 * x[0], 2.0 * x[1], 2.0 * x[2]],
                [x[1] * x[2], x[0] * x[2], x[0] * x[1]],
                [1.0, 1.0, -2.0 * x[2]],
            ])
        },
    )
    .with_display([
        "x1^2 + x2^2 + x3^2 - 9 = 0",
        "x1*x2*x3 - 1 = 0",
        "x1 + x2 - x3^2 = 0",
    ])
    .with_start(vec![2.0, 2.0, 0.5])
    .with_root(vec![-2.090295, 2.140258, -0.223525], Provenance::Published)
    .with_root(
        vec![-2.0902946422552350, 2.1402581220051751, -0.22352512107130194],
        Provenance::Computed,
    );

    BenchmarkEntry {
        published_start: v(&[2.0, 2.0, 0.5]),
        problem,
        published_rows: same_for_all(
            &[-2.090295, 2.140258, -0.223525],
            [8, 5, 5, 6, 5],
            [8.88e-16, 8.88e-16, 9.02e-16, 1.78e-15, 9.02e-16],
        ),
        root_match: RootMatch::Digits,
    }
}

fn problem_g() -> BenchmarkEntry {
    let problem = ProblemSpec::new(
        "g",
        3,
        |x: &RealVector| {
            v(&[
                x[1].cos() - x[0].sin(),
                (x[0] * x[2].ln()).exp() - 1.0 / x[1],
                x[0].exp() - x[2] * x[2],
            ])
        },
        |x: &RealVector| {
            let ln3 = x[2].ln();
            let pow = (x[0] * ln3).exp();
            DenseMatrix::from_rows(&[
                [-x[0].cos(), -x[1].sin(), 0.0],
                [pow * ln3, 1.0 / (x[1] * x[1]), x[0] * pow / x[2]],
                [x[0].exp(), 0.0, -2.0 * x[2]],
            ])
        },
    )
    .with_guard(|x| {
        if !(x[2] > 0.0) {
            return Err(format!("x3^x1 requires x3 > 0, got x3 = {}", x[2]));
        }
        if x[1] == 0.0 {
            return Err("1/x2 requires x2 != 0".into());
        }
        Ok(())
    })
    .with_display([
        "cos(x2) - sin(x1) = 0",
        "x3^x1 - 1/x2 = 0",
        "exp(x1) - x3^2 = 0",
    ])
    .with_start(vec![-2.5, 1.0, 1.0])
    .with_root(vec![0.909569, 0.661227, 1.575834], Provenance::Published)
    .with_root(
        vec![0.90956949452004488, 0.66122683227485174, 1.5758341439069990],
        Provenance::Computed,
    );

    let root = [0.909569, 0.661227, 1.575834];
    BenchmarkEntry {
        published_start: v(&[-2.5, 1.0, 1.0]),
        problem,
        published_rows: rows([
            conv(&root, 10, 6.82e-14),
            PublishedOutcome::NoConvergence,
            conv(&root, 5, 8.48e-14),
            PublishedOutcome::NoConvergence,
            PublishedOutcome::NoConvergence,
        ]),
        root_match: RootMatch::Digits,
    }
}

fn problem_h() -> BenchmarkEntry {
    let problem = ProblemSpec::new(
        "h",
        4,
        |x: &RealVector| {
            let [a, b, c, d] = [x[0], x[1], x[2], x[3]];
            v(&[
                b * c + d * (b + c),
                a * c + d * (a + c),
                a * b + d * (a + b),
                a * b + a * c + b * c - 1.0,
            ])
        },
        |x: &RealVector| {
            let [a, b, c, d] = [x[0], x[1], x[2], x[3]];
            DenseMatrix::from_rows(&[
                [0.0, c + d, b + d, b + c],
                [c + d, 0.0, a + d, a + c],
                [b + d, a + d, 0.0, a + b],
                [b + c, a + c, a + b, 0.0],
            ])
        },
    )
    .with_display([
        "x2*x3 + x4*(x2 + x3) = 0",
        "x1*x3 + x4*(x1 + x3) = 0",
        "x1*x2 + x4*(x1 + x2) = 0",
        "x1*x2 + x1*x3 + x2*x3 - 1 = 0",
    ])
    .with_start(vec![0.5, 0.5, 0.5, 0.2])
    .with_root(vec![0.5773, 0.5773, 0.5773, -0.2886], Provenance::Published)
    .with_root(root_h().to_vec(), Provenance::Computed);

    BenchmarkEntry {
        published_start: v(&[0.5, 0.5, 0.5, 0.2]),
        problem,
        published_rows: same_for_all(
            &[0.5773, 0.5773, 0.5773, -0.2886],
            [5, 4, 4, 6, 4],
            [2.22e-16, 1.11e-16, 1.11e-16, 1.31e-13, 1.11e-16],
        ),
        root_match: RootMatch::Digits,
    }
}

fn registry() -> &'static [BenchmarkEntry] {
    static REGISTRY: OnceLock<Vec<BenchmarkEntry>> = OnceLock::new();
    REGISTRY.get_or_init(|| {
        vec![
            problem_a(),
            problem_b(),
            problem_c(),
            problem_d(),
            problem_e(),
            problem_f(),
            problem_g(),
            problem_h(),
        ]
    })
}

/// Looks up a benchmark by its id `a`..`h`.
pub fn get_problem(id: &str) -> Result<BenchmarkEntry> {
    registry()
        .iter()
        .find(|e| e.id() == id)
        .cloned()
        .ok_or_else(|| Error::UnknownProblem(id.to_string()))
}

/// All benchmarks in id order.
pub fn list_problems() -> Vec<BenchmarkEntry> {
    registry().to_vec()
}

/// `F(x) = A x - b`.
pub fn affine_system(a: DenseMatrix, b: RealVector) -> ProblemSpec {
    assert!(a.is_square() && a.rows() == b.dim());
    let n = b.dim();
    let jac = a.clone();
    ProblemSpec::new(
        "affine",
        n,
        move |x: &RealVector| &a.mul_vec(x) - &b,
        move |_: &RealVector| jac.clone(),
    )
    .with_start(vec![0.0; n])
}

/// `F(x) = x - c`.
pub fn shifted_identity(c: Vec<f64>) -> ProblemSpec {
    let n = c.len();
    let target = RealVector::new(c.clone());
    ProblemSpec::new(
        "shift",
        n,
        move |x: &RealVector| x - &target,
        move |_: &RealVector| DenseMatrix::identity(n),
    )
    .with_root(c, Provenance::Inspection)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{norm, NormKind};
    use crate::model::{evaluate_jacobian, evaluate_residual};

    #[test]
    fn ids_dims_and_starts() {
        let all = list_problems();
        let ids: Vec<&str> = all.iter().map(|e| e.id()).collect();
        assert_eq!(ids, ["a", "b", "c", "d", "e", "f", "g", "h"]);
        let dims: Vec<usize> = all.iter().map(|e| e.problem.dim).collect();
        assert_eq!(dims, [2, 2, 2, 2, 2, 3, 3, 4]);
        let starts: Vec<Vec<f64>> = all.iter().map(|e| e.published_start.as_slice().to_vec()).collect();
        assert_eq!(
            starts,
            vec![
                vec![1.0, 2.0],
                vec![3.4, 2.2],
                vec![1.5, 1.0],
                vec![0.2, 0.2],
                vec![-1.0, -3.0],
                vec![2.0, 2.0, 0.5],
                vec![-2.5, 1.0, 1.0],
                vec![0.5, 0.5, 0.5, 0.2],
            ]
        );
        for e in &all {
            assert!(e.problem.in_domain(&e.published_start), "{}", e.id());
            assert_eq!(e.problem.default_starts[0], e.published_start);
            assert_eq!(e.published_rows.len(), 5);
            let methods: Vec<MethodId> = e.published_rows.iter().map(|r| r.method).collect();
            assert_eq!(methods, MethodId::ALL);
        }
    }

    #[test]
    fn lookup() {
        let c = get_problem("c").unwrap();
        assert_eq!(c.problem.dim, 2);
        assert_eq!(c.problem.display, ["x1 + 2*x2 - 3 = 0", "2*x1^2 + x2^2 - 5 = 0"]);
        let h = get_problem("h").unwrap();
        assert_eq!(h.problem.dim, 4);
        assert_eq!(h.problem.display[3], "x1*x2 + x1*x3 + x2*x3 - 1 = 0");
        assert!(matches!(get_problem("z"), Err(Error::UnknownProblem(id)) if id == "z"));
    }

    #[test]
    fn reference_roots_satisfy_their_systems() {
        for e in list_problems() {
            for r in &e.problem.reference_roots {
                let f = evaluate_residual(&e.problem, &r.point).unwrap();
                let res = norm(&f, NormKind::Infinity);
                let tol = match r.provenance {
                    Provenance::Published => 1e-3,
                    Provenance::Computed | Provenance::Inspection => 1e-12,
                };
                assert!(res <= tol, "{} {:?}: ‖F‖∞ = {res:e}", e.id(), r);
            }
        }
    }

    #[test]
    fn closed_form_roots() {
        // 9 x2^2 - 24 x2 + 13 = 0
        let [x1, x2] = root_c();
        assert!((9.0 * x2 * x2 - 24.0 * x2 + 13.0).abs() < 1e-13);
        assert!((x1 - 1.4880338).abs() < 1e-7 && (x2 - 0.7559830).abs() < 1e-7);
        let [a, b, c, d] = root_h();
        assert!((a - 0.57735).abs() < 1e-5 && (d + 0.28868).abs() < 1e-5);
        assert_eq!((a, b), (b, c));
        assert!((3.0 * a * a - 1.0).abs() < 1e-15);
        assert!((a * a + 2.0 * a * d).abs() < 1e-15);
    }

    #[test]
    fn origin_is_exact_root_of_e() {
        let p = get_problem("e").unwrap().problem;
        let f = evaluate_residual(&p, &v(&[0.0, 0.0])).unwrap();
        assert_eq!(f.as_slice(), &[0.0, 0.0]);
    }

    #[test]
    fn guards() {
        let d = get_problem("d").unwrap().problem;
        assert!(!d.in_domain(&v(&[0.0, 0.2])));
        assert!(!d.in_domain(&v(&[0.5, PI])));
        assert!(!d.in_domain(&v(&[1e-3, PI / 2.0 - 1e-3 * FRAC_1_SQRT_2])));
        assert!(d.in_domain(&v(&[0.95, 6.58])));
        let g = get_problem("g").unwrap().problem;
        assert!(!g.in_domain(&v(&[1.0, 1.0, 0.0])));
        assert!(!g.in_domain(&v(&[1.0, 1.0, -2.0])));
        assert!(!g.in_domain(&v(&[1.0, 0.0, 1.0])));
        assert!(g.in_domain(&v(&[-2.5, 1.0, 1.0])));
        let b = get_problem("b").unwrap().problem;
        assert!(!b.in_domain(&v(&[0.0, 1.0])));
    }

    #[test]
    fn tan_pole_detection() {
        assert!(near_tan_pole(PI / 2.0));
        assert!(near_tan_pole(PI / 2.0 + 3.0 * PI));
        assert!(near_tan_pole(-PI / 2.0));
        assert!(!near_tan_pole(PI / 2.0 + 1e-6));
        assert!(!near_tan_pole(0.0));
    }

    #[test]
    fn jacobian_of_d_outside_log_domain() {
        let d = get_problem("d").unwrap().problem;
        let x = v(&[0.6, 1.64]);
        assert!(evaluate_residual(&d, &x).is_err());
        assert!(evaluate_jacobian(&d, &x).is_ok());
        assert!(evaluate_jacobian(&d, &v(&[0.0, 0.2])).is_err());
        assert!(evaluate_jacobian(&d, &v(&[0.6, PI / 2.0])).is_err());
        // other problems share one guard
        let b = get_problem("b").unwrap().problem;
        assert!(evaluate_jacobian(&b, &v(&[-1.0, 1.0])).is_err());
    }

    #[test]
    fn table_split() {
        let tables: Vec<u8> = list_problems().iter().map(|e| e.table()).collect();
        assert_eq!(tables, [1, 1, 1, 1, 1, 2, 2, 2]);
    }
}
