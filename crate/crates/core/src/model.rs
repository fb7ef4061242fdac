//! What a nonlinear system is, how a solve is configured, and what it returns.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, NormKind, RealVector};
use crate::methods::{HarmonicForm, MethodId};

pub type ResidualFn = Arc<dyn Fn(&RealVector) -> RealVector + Send + Sync>;
pub type JacobianFn = Arc<dyn Fn(&RealVector) -> DenseMatrix + Send + Sync>;
/// Returns `Err(description)` for points outside the real domain of `F`.
pub type DomainGuardFn = Arc<dyn Fn(&RealVector) -> Result<(), String> + Send + Sync>;

/// Where a stored value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Digits as printed in the published benchmark tables.
    Published,
    /// Recomputed to high precision or obtained in closed form.
    Computed,
    /// Exact by inspection.
    Inspection,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Published => "published",
            Provenance::Computed => "computed",
            Provenance::Inspection => "inspection",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceRoot {
    pub point: RealVector,
    pub provenance: Provenance,
}

/// A square nonlinear system `F(x) = 0` with its analytic Jacobian.
#[derive(Clone)]
pub struct ProblemSpec {
    pub id: String,
    pub dim: usize,
    residual: ResidualFn,
    jacobian: JacobianFn,
    domain_guard: Option<DomainGuardFn>,
    /// Domain of `F'` when it is wider than the domain of `F`.
    jacobian_guard: Option<DomainGuardFn>,
    pub default_starts: Vec<RealVector>,
    pub reference_roots: Vec<ReferenceRoot>,
    /// One line per equation.
    pub display: Vec<String>,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("id", &self.id)
            .field("dim", &self.dim)
            .field("default_starts", &self.default_starts)
            .field("reference_roots", &self.reference_roots)
            .field("display", &self.display)
            .finish_non_exhaustive()
    }
}

impl ProblemSpec {
    pub fn new<R, J>(id: impl Into<String>, dim: usize, residual: R, jacobian: J) -> Self
    where
        R: Fn(&RealVector) -> RealVector + Send + Sync + 'static,
        J: Fn(&RealVector) -> DenseMatrix + Send + Sync + 'static,
    {
        assert!(dim >= 1);
        ProblemSpec {
            id: id.into(),
            dim,
            residual: Arc::new(residual),
            jacobian: Arc::new(jacobian),
            domain_guard: None,
            jacobian_guard: None,
            default_starts: Vec::new(),
            reference_roots: Vec::new(),
            display: Vec::new(),
        }
    }

    pub fn with_guard<G>(mut self, guard: G) -> Self
    where
        G: Fn(&RealVector) -> Result<(), String> + Send + Sync + 'static,
    {
        self.domain_guard = Some(Arc::new(guard));
        self
    }

    /// Guards Jacobian evaluations separately from residual evaluations.
    pub fn with_jacobian_guard<G>(mut self, guard: G) -> Self
    where
        G: Fn(&RealVector) -> Result<(), String> + Send + Sync + 'static,
    {
        self.jacobian_guard = Some(Arc::new(guard));
        self
    }

    pub fn with_start(mut self, x0: Vec<f64>) -> Self {
        assert_eq!(x0.len(), self.dim);
        self.default_starts.push(RealVector::new(x0));
        self
    }

    pub fn with_root(mut self, point: Vec<f64>, provenance: Provenance) -> Self {
        assert_eq!(point.len(), self.dim);
        self.reference_roots.push(ReferenceRoot {
            point: RealVector::new(point),
            provenance,
        });
        self
    }

    pub fn with_display<S: Into<String>>(mut self, lines: impl IntoIterator<Item = S>) -> Self {
        self.display = lines.into_iter().map(Into::into).collect();
        self
    }

    /// Runs the domain guard only.
    pub fn check_domain(&self, x: &RealVector) -> Result<()> {
        self.check_dim(x)?;
        if !x.is_finite() {
            return Err(Error::DomainViolation("non-finite point".into()));
        }
        match &self.domain_guard {
            Some(g) => g(x).map_err(Error::DomainViolation),
            None => Ok(()),
        }
    }

    /// Guard applied before `F'(x)`; falls back to the residual guard.
    pub fn check_jacobian_domain(&self, x: &RealVector) -> Result<()> {
        match &self.jacobian_guard {
            Some(g) => {
                self.check_dim(x)?;
                if !x.is_finite() {
                    return Err(Error::DomainViolation("non-finite point".into()));
                }
                g(x).map_err(Error::DomainViolation)
            }
            None => self.check_domain(x),
        }
    }

    pub fn in_domain(&self, x: &RealVector) -> bool {
        self.check_domain(x).is_ok()
    }

    pub fn residual(&self, x: &RealVector) -> Result<RealVector> {
        evaluate_residual(self, x)
    }

    pub fn jacobian(&self, x: &RealVector) -> Result<DenseMatrix> {
        evaluate_jacobian(self, x)
    }

    fn check_dim(&self, x: &RealVector) -> Result<()> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.dim(),
            });
        }
        Ok(())
    }
}

/// `F(x)`, guarded. Non-finite output is reported as a domain violation.
pub fn evaluate_residual(p: &ProblemSpec, x: &RealVector) -> Result<RealVector> {
    p.check_domain(x)?;
    let fx = (p.residual)(x);
    if fx.dim() != p.dim {
        return Err(Error::DimensionMismatch {
            expected: p.dim,
            found: fx.dim(),
        });
    }
    if let Some(i) = fx.iter().position(|v| !v.is_finite()) {
        return Err(Error::DomainViolation(format!(
            "residual component {} is non-finite at {x}",
            i + 1
        )));
    }
    Ok(fx)
}

/// Analytic `F'(x)`, guarded.
pub fn evaluate_jacobian(p: &ProblemSpec, x: &RealVector) -> Result<DenseMatrix> {
    p.check_jacobian_domain(x)?;
    let j = (p.jacobian)(x);
    if j.rows() != p.dim || j.cols() != p.dim {
        return Err(Error::DimensionMismatch {
            expected: p.dim,
            found: if j.rows() != p.dim { j.rows() } else { j.cols() },
        });
    }
    if !j.is_finite() {
        return Err(Error::DomainViolation(format!(
            "Jacobian has non-finite entries at {x}"
        )));
    }
    Ok(j)
}

/// Solver settings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveConfig {
    pub method: MethodId,
    /// Stopping threshold for `‖x_{n+1} - x_n‖ + ‖F(x_n)‖`.
    pub epsilon: f64,
    pub max_iterations: usize,
    pub norm_kind: NormKind,
    /// Iterates or residuals beyond this in max-norm abort with `NumericOverflow`.
    pub divergence_bound: f64,
    pub trace_enabled: bool,
    /// Which matrix form the harmonic variant uses.
    pub harmonic_form: HarmonicForm,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            method: MethodId::Mtn,
            epsilon: 1e-14,
            max_iterations: 500,
            norm_kind: NormKind::Euclidean,
            divergence_bound: 1e12,
            trace_enabled: false,
            harmonic_form: HarmonicForm::default(),
        }
    }
}

impl SolveConfig {
    pub fn new(method: MethodId) -> Self {
        SolveConfig {
            method,
            ..Default::default()
        }
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_max_iterations(mut self, n: usize) -> Self {
        self.max_iterations = n;
        self
    }

    pub fn with_norm(mut self, kind: NormKind) -> Self {
        self.norm_kind = kind;
        self
    }

    pub fn with_divergence_bound(mut self, bound: f64) -> Self {
        self.divergence_bound = bound;
        self
    }

    pub fn with_trace(mut self, enabled: bool) -> Self {
        self.trace_enabled = enabled;
        self
    }

    pub fn with_harmonic_form(mut self, form: HarmonicForm) -> Self {
        self.harmonic_form = form;
        self
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.epsilon > 0.0) || !self.epsilon.is_finite() {
            return Err(format!("epsilon must be positive, got {}", self.epsilon));
        }
        if self.max_iterations < 1 {
            return Err("max_iterations must be at least 1".into());
        }
        if !(self.divergence_bound > 1.0) {
            return Err(format!(
                "divergence_bound must exceed 1, got {}",
                self.divergence_bound
            ));
        }
        Ok(())
    }
}

/// One row of the iteration trace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterationRecord {
    pub n: usize,
    pub x: RealVector,
    pub residual_norm: f64,
    /// `‖x_{n+1} - x_n‖`; absent on the final record.
    pub step_norm: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Converged,
    MaxIterations,
    SingularJacobian,
    DomainViolation,
    NumericOverflow,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::Converged => "converged",
            Termination::MaxIterations => "max_iterations",
            Termination::SingularJacobian => "singular_jacobian",
            Termination::DomainViolation => "domain_violation",
            Termination::NumericOverflow => "numeric_overflow",
        }
    }
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of a solve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub termination: Termination,
    /// Human-readable cause for non-converged terminations.
    pub detail: Option<String>,
    pub final_iterate: RealVector,
    /// Number of update steps applied, counting the one that triggered convergence.
    pub iterations_used: usize,
    /// Stopping sum of the last completed step, if any step completed.
    pub error_estimate: Option<f64>,
    pub trace: Vec<IterationRecord>,
    pub coc_estimate: Option<f64>,
}

impl SolveReport {
    pub fn converged(&self) -> bool {
        self.termination == Termination::Converged
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{affine_system, get_problem};

    fn v(x: &[f64]) -> RealVector {
        RealVector::new(x.to_vec())
    }

    #[test]
    fn residual_of_problem_c() {
        let p = get_problem("c").unwrap().problem;
        // 1.5 + 2 - 3 = 0.5, 2*2.25 + 1 - 5 = 0.5
        assert_eq!(evaluate_residual(&p, &v(&[1.5, 1.0])).unwrap().as_slice(), &[0.5, 0.5]);
        assert_eq!(evaluate_residual(&p, &v(&[1.0, 1.0])).unwrap().as_slice(), &[0.0, -2.0]);
    }

    #[test]
    fn log_of_negative_is_domain_violation() {
        let p = get_problem("b").unwrap().problem;
        let err = evaluate_residual(&p, &v(&[-1.0, 1.0])).unwrap_err();
        assert!(matches!(err, Error::DomainViolation(_)), "{err}");
        assert!(matches!(evaluate_jacobian(&p, &v(&[-1.0, 1.0])), Err(Error::DomainViolation(_))));
    }

    #[test]
    fn jacobian_of_problem_c_is_hand_derivative() {
        let p = get_problem("c").unwrap().problem;
        for &(a, b) in &[(1.5, 1.0), (-2.0, 0.3), (0.0, 0.0)] {
            let j = evaluate_jacobian(&p, &v(&[a, b])).unwrap();
            assert_eq!(j, DenseMatrix::from_rows(&[[1.0, 2.0], [4.0 * a, 2.0 * b]]));
        }
    }

    #[test]
    fn jacobian_of_problem_h_last_row() {
        let p = get_problem("h").unwrap().problem;
        let j = evaluate_jacobian(&p, &v(&[1.0, 1.0, 1.0, 1.0])).unwrap();
        // d/dx of x1x2 + x1x3 + x2x3 - 1
        assert_eq!(j.row(3), &[2.0, 2.0, 2.0, 0.0]);
        // d/dx of x2x3 + x4(x2 + x3)
        assert_eq!(j.row(0), &[0.0, 2.0, 2.0, 2.0]);
    }

    #[test]
    fn affine_jacobian_is_constant() {
        let a = DenseMatrix::from_rows(&[[2.0, 1.0], [1.0, 3.0]]);
        let p = affine_system(a.clone(), v(&[1.0, 2.0]));
        for x in [v(&[0.0, 0.0]), v(&[10.0, -4.0]), v(&[1e6, 3.0])] {
            assert_eq!(evaluate_jacobian(&p, &x).unwrap(), a);
        }
    }

    #[test]
    fn wrong_dimension_is_rejected() {
        let p = get_problem("c").unwrap().problem;
        assert!(matches!(
            evaluate_residual(&p, &v(&[1.0, 2.0, 3.0])),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        ));
    }

    #[test]
    fn overflowing_residual_is_flagged() {
        // e^{x2 - x1} overflows far out
        let p = get_problem("a").unwrap().problem;
        assert!(matches!(evaluate_residual(&p, &v(&[-400.0, 400.0])), Err(Error::DomainViolation(_))));
    }

    #[test]
    fn config_validation() {
        assert!(SolveConfig::default().validate().is_ok());
        assert!(SolveConfig::default().with_epsilon(0.0).validate().is_err());
        assert!(SolveConfig::default().with_epsilon(-1.0).validate().is_err());
        assert!(SolveConfig::default().with_max_iterations(0).validate().is_err());
        assert!(SolveConfig::default().with_divergence_bound(1.0).validate().is_err());
    }
}
