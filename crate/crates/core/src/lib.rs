//! Quadrature-derived Newton-type iterations for square systems of nonlinear
//! equations `F(x) = 0`.
//!
//! Five methods share a Newton predictor and differ in how they approximate
//! the integral of the Jacobian along the step: classical Newton (CN),
//! trapezoidal (TN), midpoint (MN), harmonic (HN) and the third-order
//! midpoint-trapezoidal Newton method (MTN). The crate also ships the eight
//! benchmark systems used to compare them, a finite-difference Jacobian
//! checker and a CLI that regenerates the comparison tables.
//!
//! ```
//! use quadnewton::{get_problem, solve, MethodId, SolveConfig};
//!
//! let entry = get_problem("c").unwrap();
//! let report = solve(&entry.problem, &entry.published_start, &SolveConfig::new(MethodId::Mtn)).unwrap();
//! assert!(report.converged());
//! assert_eq!(report.iterations_used, 4);
//! ```

pub mod cli;
pub mod error;
pub mod jacobian;
pub mod linalg;
pub mod methods;
pub mod model;
pub mod problems;

pub use error::{Error, Result};
pub use jacobian::{check_jacobian, fd_jacobian};
pub use linalg::{lu_factor, lu_solve, norm, DenseMatrix, LuFactors, NormKind, RealVector};
pub use methods::{estimate_coc, observed_order, solve, HarmonicForm, MethodId};
pub use model::{
    evaluate_jacobian, evaluate_residual, IterationRecord, ProblemSpec, SolveConfig, SolveReport,
    Termination,
};
pub use problems::{get_problem, list_problems, BenchmarkEntry};
