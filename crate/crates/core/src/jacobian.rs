//! Forward-difference Jacobians and validation of analytic Jacobians.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, RealVector};
use crate::model::{evaluate_jacobian, evaluate_residual, ProblemSpec};

/// Half-width of the uniform box sampled around each start point.
pub const SAMPLE_RADIUS: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Difference {
    Forward,
    Backward,
}

/// Step for coordinate `xj`: `sqrt(eps) * max(1, |xj|)`.
pub fn fd_step(xj: f64) -> f64 {
    f64::EPSILON.sqrt() * xj.abs().max(1.0)
}

/// Forward-difference approximation of the Jacobian of `f` at `x`.
pub fn fd_jacobian<F>(f: F, x: &RealVector) -> Result<DenseMatrix>
where
    F: Fn(&RealVector) -> Result<RealVector>,
{
    fd_jacobian_with(f, x, Difference::Forward)
}

/// One-sided difference Jacobian; column `j` is `(F(x ± h_j e_j) - F(x)) / (± h_j)`.
pub fn fd_jacobian_with<F>(f: F, x: &RealVector, diff: Difference) -> Result<DenseMatrix>
where
    F: Fn(&RealVector) -> Result<RealVector>,
{
    let n = x.dim();
    let f0 = f(x)?;
    let m = f0.dim();
    let mut jac = DenseMatrix::zeros(m, n);
    let mut xp = x.clone();
    for j in 0..n {
        let h = match diff {
            Difference::Forward => fd_step(x[j]),
            Difference::Backward => -fd_step(x[j]),
        };
        xp[j] = x[j] + h;
        // the actually representable step
        let h = xp[j] - x[j];
        let fj = f(&xp)?;
        if fj.dim() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: fj.dim(),
            });
        }
        for i in 0..m {
            jac[(i, j)] = (fj[i] - f0[i]) / h;
        }
        xp[j] = x[j];
    }
    Ok(jac)
}

/// Forward differences on the guarded residual of `p`, retrying backward
/// when a forward-perturbed point leaves the domain.
pub fn fd_jacobian_of(p: &ProblemSpec, x: &RealVector) -> Result<DenseMatrix> {
    let f = |z: &RealVector| evaluate_residual(p, z);
    match fd_jacobian_with(f, x, Difference::Forward) {
        Err(Error::DomainViolation(_)) => fd_jacobian_with(f, x, Difference::Backward),
        other => other,
    }
}

/// `‖J_analytic - J_fd‖∞ / max(1, ‖J_analytic‖∞)` at a single point.
pub fn jacobian_discrepancy(p: &ProblemSpec, x: &RealVector) -> Result<f64> {
    let analytic = evaluate_jacobian(p, x)?;
    let approx = fd_jacobian_of(p, x)?;
    let diff = analytic.add_scaled(-1.0, &approx);
    Ok(diff.norm_inf() / analytic.norm_inf().max(1.0))
}

/// Compares the analytic Jacobian of `p` with forward differences at
/// `samples` random domain-valid points near its default starts.
///
/// Points are drawn uniformly from a box of half-width [`SAMPLE_RADIUS`]
/// around the starts (cycled in order) and rejected when the guard, the
/// residual or either Jacobian cannot be evaluated there. Deterministic in
/// `seed`.
pub fn check_jacobian(p: &ProblemSpec, samples: usize, seed: u64) -> Result<f64> {
    assert!(samples >= 1, "samples must be at least 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let origin = [RealVector::zeros(p.dim)];
    let centers: &[RealVector] = if p.default_starts.is_empty() {
        &origin
    } else {
        &p.default_starts
    };
    let max_rejections = 100 * samples;
    let mut rejections = 0;
    let mut worst = 0.0_f64;

    for i in 0..samples {
        let center = &centers[i % centers.len()];
        loop {
            let x = RealVector::new(
                center
                    .iter()
                    .map(|c| c + rng.gen_range(-SAMPLE_RADIUS..SAMPLE_RADIUS))
                    .collect(),
            );
            match jacobian_discrepancy(p, &x) {
                Ok(d) => {
                    worst = worst.max(d);
                    break;
                }
                Err(Error::DomainViolation(_)) => {
                    rejections += 1;
                    if rejections >= max_rejections {
                        return Err(Error::SamplingExhausted { rejections });
                    }
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{affine_system, get_problem};

    fn v(x: &[f64]) -> RealVector {
        RealVector::new(x.to_vec())
    }

    fn max_rel(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
        a.add_scaled(-1.0, b).norm_inf() / a.norm_inf().max(1.0)
    }

    #[test]
    fn identity_map() {
        let x = v(&[0.3, -7.0, 1e3]);
        let j = fd_jacobian(|z: &RealVector| Ok(z.clone()), &x).unwrap();
        assert!(max_rel(&DenseMatrix::identity(3), &j) <= 1e-7);
    }

    #[test]
    fn affine_map_recovers_matrix() {
        let a = DenseMatrix::from_rows(&[[2.0, -1.0], [0.5, 4.0]]);
        let p = affine_system(a.clone(), v(&[1.0, 1.0]));
        for x in [v(&[0.0, 0.0]), v(&[-30.0, 12.5])] {
            let j = fd_jacobian_of(&p, &x).unwrap();
            assert!(max_rel(&a, &j) <= 1e-7);
        }
    }

    #[test]
    fn problem_c_at_published_start() {
        let p = get_problem("c").unwrap().problem;
        let j = fd_jacobian_of(&p, &v(&[1.5, 1.0])).unwrap();
        let expected = DenseMatrix::from_rows(&[[1.0, 2.0], [6.0, 2.0]]);
        for (a, b) in j.as_slice().iter().zip(expected.as_slice()) {
            assert!((a - b).abs() <= 1e-6, "{j:?}");
        }
    }

    #[test]
    fn backward_matches_forward_on_smooth_problem() {
        let p = get_problem("f").unwrap().problem;
        let x = v(&[1.1, -0.7, 2.3]);
        let analytic = evaluate_jacobian(&p, &x).unwrap();
        let f = |z: &RealVector| evaluate_residual(&p, z);
        let fwd = fd_jacobian_with(f, &x, Difference::Forward).unwrap();
        let bwd = fd_jacobian_with(f, &x, Difference::Backward).unwrap();
        let fwd_err = max_rel(&analytic, &fwd);
        let gap = max_rel(&fwd, &bwd);
        // forward error bound: h * |F''| / 2 plus rounding, with h ~ 1.5e-8
        let bound = 1e-7;
        assert!(fwd_err <= bound, "{fwd_err}");
        assert!(gap <= 10.0 * bound, "{gap}");
    }

    #[test]
    fn backward_fallback_near_guard() {
        // domain ends exactly at x = 1
        let f = |z: &RealVector| {
            if z[0] > 1.0 {
                Err(Error::DomainViolation("x > 1".into()))
            } else {
                Ok(v(&[z[0] * z[0]]))
            }
        };
        let x = v(&[1.0]);
        assert!(fd_jacobian(f, &x).is_err());
        let j = fd_jacobian_with(f, &x, Difference::Backward).unwrap();
        assert!((j[(0, 0)] - 2.0).abs() < 1e-6);
    }

    #[test]
    fn check_is_deterministic_and_small() {
        let p = get_problem("h").unwrap().problem;
        let a = check_jacobian(&p, 20, 11).unwrap();
        let b = check_jacobian(&p, 20, 11).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
        assert!(a <= 1e-5, "{a}");
    }

    #[test]
    fn check_on_affine() {
        let a = DenseMatrix::from_rows(&[[3.0, 1.0, 0.0], [1.0, -2.0, 1.0], [0.0, 1.0, 5.0]]);
        let p = affine_system(a, v(&[1.0, 2.0, 3.0]));
        for seed in [0, 1, 99] {
            assert!(check_jacobian(&p, 10, seed).unwrap() <= 1e-7);
        }
    }

    #[test]
    fn check_on_problem_d_near_root() {
        let p = get_problem("d").unwrap().problem;
        assert!(check_jacobian(&p, 20, 3).unwrap() <= 1e-4);
    }

    #[test]
    fn sampling_exhausted_when_nothing_is_valid() {
        let p = ProblemSpec::new(
            "void",
            1,
            |x: &RealVector| x.clone(),
            |_: &RealVector| DenseMatrix::identity(1),
        )
        .with_guard(|_| Err("never valid".into()))
        .with_start(vec![0.0]);
        assert!(matches!(
            check_jacobian(&p, 2, 0),
            Err(Error::SamplingExhausted { rejections: 200 })
        ));
    }
}
