//! Newton-type step operators obtained from quadrature rules applied to
//! `F(x) = F(x_n) + ∫ F'(t) dt`, the iteration driver and the empirical
//! order-of-convergence estimator.
//!
//! Every method except classical Newton starts from the Newton predictor
//! `y = x - F'(x)⁻¹ F(x)`:
//!
//! ```text
//! CN   x+ = y
//! TN   x+ = x - 2 [F'(x) + F'(y)]⁻¹ F(x)                      trapezoidal
//! MN   x+ = x - F'((x + y)/2)⁻¹ F(x)                          midpoint
//! HN   x+ = x - ½ F'(x)⁻¹ F'(y)⁻¹ [F'(x) + F'(y)] F(x)         harmonic mean
//! MTN  x+ = x - 4 [F'(x) + 2 F'((x + y)/2) + F'(y)]⁻¹ F(x)     midpoint + trapezoidal
//! ```
//!
//! MTN converges with order three near a simple root.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{lu_factor, norm, DenseMatrix, LuFactors, NormKind, RealVector};
use crate::model::{
    evaluate_jacobian, evaluate_residual, IterationRecord, ProblemSpec, SolveConfig, SolveReport,
    Termination,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum MethodId {
    /// Classical Newton.
    #[serde(rename = "CN")]
    Cn,
    /// Trapezoidal Newton.
    #[serde(rename = "TN")]
    Tn,
    /// Midpoint Newton.
    #[serde(rename = "MN")]
    Mn,
    /// Harmonic Newton.
    #[serde(rename = "HN")]
    Hn,
    /// Midpoint-trapezoidal Newton.
    #[serde(rename = "MTN")]
    Mtn,
}

impl MethodId {
    /// Benchmark table order.
    pub const ALL: [MethodId; 5] = [
        MethodId::Cn,
        MethodId::Tn,
        MethodId::Mn,
        MethodId::Hn,
        MethodId::Mtn,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MethodId::Cn => "CN",
            MethodId::Tn => "TN",
            MethodId::Mn => "MN",
            MethodId::Hn => "HN",
            MethodId::Mtn => "MTN",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MethodId::Cn => "classical Newton",
            MethodId::Tn => "trapezoidal Newton",
            MethodId::Mn => "midpoint Newton",
            MethodId::Hn => "harmonic Newton",
            MethodId::Mtn => "midpoint-trapezoidal Newton",
        }
    }
}

impl fmt::Display for MethodId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MethodId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "cn" => Ok(MethodId::Cn),
            "tn" => Ok(MethodId::Tn),
            "mn" => Ok(MethodId::Mn),
            "hn" => Ok(MethodId::Hn),
            "mtn" => Ok(MethodId::Mtn),
            _ => Err(format!("unknown method `{s}` (expected cn, tn, mn, hn or mtn)")),
        }
    }
}

/// Matrix realization of the harmonic-mean update.
///
/// For scalar equations both forms coincide with
/// `x - f(x) (f'(x) + f'(y)) / (2 f'(x) f'(y))`; for systems they differ
/// because the Jacobians do not commute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HarmonicForm {
    /// `x - ½ F'(x)⁻¹ F'(y)⁻¹ [F'(x) + F'(y)] F(x)`.
    #[default]
    Product,
    /// `x - ½ [F'(x)⁻¹ + F'(y)⁻¹] F(x)`, the mean of two Newton steps.
    StepAverage,
}

impl FromStr for HarmonicForm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "product" => Ok(HarmonicForm::Product),
            "average" | "step-average" => Ok(HarmonicForm::StepAverage),
            _ => Err(format!("unknown harmonic form `{s}` (expected product or average)")),
        }
    }
}

/// Newton predictor data at `x`, shared by all step operators.
struct Predicted {
    jx: DenseMatrix,
    jx_lu: LuFactors,
    newton_step: RealVector,
    y: RealVector,
}

fn predict(p: &ProblemSpec, x: &RealVector, fx: &RealVector) -> Result<Predicted> {
    let jx = evaluate_jacobian(p, x)?;
    let jx_lu = lu_factor(&jx)?;
    let newton_step = jx_lu.solve(fx)?;
    let y = x - &newton_step;
    Ok(Predicted {
        jx,
        jx_lu,
        newton_step,
        y,
    })
}

/// Applies one step of `method` from `x`, given `fx = F(x)`.
pub fn step_from(
    method: MethodId,
    form: HarmonicForm,
    p: &ProblemSpec,
    x: &RealVector,
    fx: &RealVector,
) -> Result<RealVector> {
    let pred = predict(p, x, fx)?;
    match method {
        MethodId::Cn => Ok(pred.y),
        MethodId::Tn => {
            let jy = evaluate_jacobian(p, &pred.y)?;
            let d = lu_factor(&(&pred.jx + &jy))?.solve(&fx.scale(2.0))?;
            Ok(x - &d)
        }
        MethodId::Mn => {
            let jm = evaluate_jacobian(p, &x.midpoint(&pred.y))?;
            let d = lu_factor(&jm)?.solve(fx)?;
            Ok(x - &d)
        }
        MethodId::Hn => {
            let jy = evaluate_jacobian(p, &pred.y)?;
            let jy_lu = lu_factor(&jy)?;
            let d = match form {
                HarmonicForm::Product => {
                    let w = (&pred.jx + &jy).mul_vec(fx);
                    pred.jx_lu.solve(&jy_lu.solve(&w)?)?
                }
                HarmonicForm::StepAverage => &pred.newton_step + &jy_lu.solve(fx)?,
            };
            Ok(x - &d.scale(0.5))
        }
        MethodId::Mtn => {
            let jm = evaluate_jacobian(p, &x.midpoint(&pred.y))?;
            let jy = evaluate_jacobian(p, &pred.y)?;
            let bracket = pred.jx.add_scaled(2.0, &jm).add_scaled(1.0, &jy);
            let d = lu_factor(&bracket)?.solve(&fx.scale(4.0))?;
            Ok(x - &d)
        }
    }
}

/// One step of `method` from `x` (harmonic variant in its default form).
pub fn step(method: MethodId, p: &ProblemSpec, x: &RealVector) -> Result<RealVector> {
    let fx = evaluate_residual(p, x)?;
    step_from(method, HarmonicForm::default(), p, x, &fx)
}

/// `y = x - F'(x)⁻¹ F(x)`.
pub fn predictor(p: &ProblemSpec, x: &RealVector) -> Result<RealVector> {
    let fx = evaluate_residual(p, x)?;
    Ok(predict(p, x, &fx)?.y)
}

pub fn cn_step(p: &ProblemSpec, x: &RealVector) -> Result<RealVector> {
    step(MethodId::Cn, p, x)
}

pub fn tn_step(p: &ProblemSpec, x: &RealVector) -> Result<RealVector> {
    step(MethodId::Tn, p, x)
}

pub fn mn_step(p: &ProblemSpec, x: &RealVector) -> Result<RealVector> {
    step(MethodId::Mn, p, x)
}

pub fn hn_step(p: &ProblemSpec, x: &RealVector, form: HarmonicForm) -> Result<RealVector> {
    let fx = evaluate_residual(p, x)?;
    step_from(MethodId::Hn, form, p, x, &fx)
}

pub fn mtn_step(p: &ProblemSpec, x: &RealVector) -> Result<RealVector> {
    step(MethodId::Mtn, p, x)
}

fn termination_for(err: &Error, p: &ProblemSpec, at: &RealVector) -> Termination {
    match err {
        Error::SingularMatrix { .. } => Termination::SingularJacobian,
        // guard passed but the evaluation blew up
        Error::DomainViolation(_) if p.in_domain(at) && at.is_finite() => {
            Termination::NumericOverflow
        }
        _ => Termination::DomainViolation,
    }
}

fn exceeds(v: &RealVector, bound: f64) -> bool {
    let m = norm(v, NormKind::Infinity);
    !(m <= bound)
}

/// Iterates `cfg.method` from `x0` until
/// `‖x_{n+1} - x_n‖ + ‖F(x_n)‖ ≤ cfg.epsilon`.
///
/// Failures never surface as `Err`; they end the run with the matching
/// [`Termination`]. The only `Err` is an invalid configuration or a start of
/// the wrong dimension.
pub fn solve(p: &ProblemSpec, x0: &RealVector, cfg: &SolveConfig) -> Result<SolveReport> {
    cfg.validate().map_err(Error::InvalidConfig)?;
    if x0.dim() != p.dim {
        return Err(Error::DimensionMismatch {
            expected: p.dim,
            found: x0.dim(),
        });
    }

    let mut x = x0.clone();
    let mut trace: Vec<IterationRecord> = Vec::new();
    let mut iterations = 0;
    let mut error_estimate = None;

    let finish = |termination, detail: Option<String>, x: RealVector, fx: Option<&RealVector>,
                  iterations, error_estimate, mut trace: Vec<IterationRecord>| {
        if let Some(fx) = fx {
            trace.push(IterationRecord {
                n: iterations,
                x: x.clone(),
                residual_norm: norm(fx, cfg.norm_kind),
                step_norm: None,
            });
        }
        let coc_estimate = if iterations >= 4 {
            estimate_coc(&trace).ok()
        } else {
            None
        };
        if !cfg.trace_enabled {
            trace.clear();
        }
        SolveReport {
            termination,
            detail,
            final_iterate: x,
            iterations_used: iterations,
            error_estimate,
            trace,
            coc_estimate,
        }
    };

    let mut fx = match evaluate_residual(p, &x) {
        Ok(fx) => fx,
        Err(e) => {
            let t = termination_for(&e, p, &x);
            return Ok(finish(t, Some(e.to_string()), x, None, 0, None, trace));
        }
    };

    loop {
        if exceeds(&x, cfg.divergence_bound) || exceeds(&fx, cfg.divergence_bound) {
            let detail = format!("iterate or residual exceeds {:e}", cfg.divergence_bound);
            return Ok(finish(
                Termination::NumericOverflow,
                Some(detail),
                x,
                Some(&fx),
                iterations,
                error_estimate,
                trace,
            ));
        }
        if iterations >= cfg.max_iterations {
            return Ok(finish(
                Termination::MaxIterations,
                Some(format!("no convergence after {iterations} iterations")),
                x,
                Some(&fx),
                iterations,
                error_estimate,
                trace,
            ));
        }

        let next = match step_from(cfg.method, cfg.harmonic_form, p, &x, &fx) {
            Ok(next) => next,
            Err(e) => {
                let t = match e {
                    Error::SingularMatrix { .. } => Termination::SingularJacobian,
                    _ => Termination::DomainViolation,
                };
                return Ok(finish(
                    t,
                    Some(e.to_string()),
                    x,
                    Some(&fx),
                    iterations,
                    error_estimate,
                    trace,
                ));
            }
        };
        if exceeds(&next, cfg.divergence_bound) {
            let detail = format!("next iterate {next} exceeds {:e}", cfg.divergence_bound);
            return Ok(finish(
                Termination::NumericOverflow,
                Some(detail),
                x,
                Some(&fx),
                iterations,
                error_estimate,
                trace,
            ));
        }

        let step_norm = norm(&(&next - &x), cfg.norm_kind);
        let residual_norm = norm(&fx, cfg.norm_kind);
        trace.push(IterationRecord {
            n: iterations,
            x: x.clone(),
            residual_norm,
            step_norm: Some(step_norm),
        });
        iterations += 1;
        let stop_sum = step_norm + residual_norm;
        error_estimate = Some(stop_sum);
        x = next;

        match evaluate_residual(p, &x) {
            Ok(f_next) => fx = f_next,
            Err(e) => {
                let t = termination_for(&e, p, &x);
                return Ok(finish(
                    t,
                    Some(e.to_string()),
                    x,
                    None,
                    iterations,
                    error_estimate,
                    trace,
                ));
            }
        }

        if stop_sum <= cfg.epsilon {
            return Ok(finish(
                Termination::Converged,
                None,
                x,
                Some(&fx),
                iterations,
                error_estimate,
                trace,
            ));
        }
    }
}

/// Step norms at or below `SATURATION_ULPS * eps * max(1, ‖x_n‖∞)` are
/// rounding noise and carry no rate information.
pub const SATURATION_ULPS: f64 = 64.0;

/// Positive step norms of `trace` that lie above the rounding floor, in order.
pub fn usable_step_norms(trace: &[IterationRecord]) -> Vec<f64> {
    trace
        .iter()
        .filter_map(|r| {
            let s = r.step_norm?;
            let floor = SATURATION_ULPS * f64::EPSILON * norm(&r.x, NormKind::Infinity).max(1.0);
            (s > floor && s.is_finite()).then_some(s)
        })
        .collect()
}

/// Computational order of convergence from the last three usable step norms
/// `s_{k-2}, s_{k-1}, s_k`:
///
/// ```text
/// ln(s_k / s_{k-1}) / ln(s_{k-1} / s_{k-2})
/// ```
///
/// Degenerate triples (a ratio of exactly one, or a non-finite quotient) are
/// skipped in favor of the previous triple.
pub fn estimate_coc(trace: &[IterationRecord]) -> Result<f64> {
    coc_from_steps(&usable_step_norms(trace))
}

/// [`estimate_coc`] on a plain sequence of step norms.
pub fn coc_from_steps(steps: &[f64]) -> Result<f64> {
    if steps.len() < 3 {
        return Err(Error::InsufficientTrace { found: steps.len() });
    }
    for k in (2..steps.len()).rev() {
        let (s0, s1, s2) = (steps[k - 2], steps[k - 1], steps[k]);
        if s0 <= 0.0 || s1 <= 0.0 || s2 <= 0.0 {
            continue;
        }
        let num = (s2 / s1).ln();
        let den = (s1 / s0).ln();
        if den == 0.0 || num == 0.0 {
            continue;
        }
        let q = num / den;
        if q.is_finite() {
            return Ok(q);
        }
    }
    Err(Error::DegenerateTrace(
        "no triple of step norms yields a finite, non-trivial ratio".into(),
    ))
}

/// Offset added to every coordinate of the start when a trace is too short.
pub const COC_FALLBACK_SHIFT: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct OrderEstimate {
    pub order: f64,
    /// The start actually used for the estimate.
    pub start: RealVector,
    pub used_fallback: bool,
    pub steps: Vec<f64>,
}

/// Observed order of `cfg.method` from `x0`. When the converged trace holds
/// fewer than three usable step norms, reruns once from `x0 + 0.5` per
/// coordinate to lengthen it.
pub fn observed_order(p: &ProblemSpec, x0: &RealVector, cfg: &SolveConfig) -> Result<OrderEstimate> {
    let cfg = cfg.clone().with_trace(true);
    let run = |start: &RealVector| -> Result<Vec<f64>> {
        let report = solve(p, start, &cfg)?;
        Ok(usable_step_norms(&report.trace))
    };
    let steps = run(x0)?;
    if steps.len() >= 3 {
        return Ok(OrderEstimate {
            order: coc_from_steps(&steps)?,
            start: x0.clone(),
            used_fallback: false,
            steps,
        });
    }
    let shifted = RealVector::new(x0.iter().map(|v| v + COC_FALLBACK_SHIFT).collect());
    let steps = run(&shifted)?;
    Ok(OrderEstimate {
        order: coc_from_steps(&steps)?,
        start: shifted,
        used_fallback: true,
        steps,
    })
}
