//! Dense real linear algebra.
//!
//! Small row-major matrices, LU factorization with partial pivoting and the
//! triangular solves built on it. Every `J⁻¹ v` appearing in the iteration
//! formulas is computed as factor-then-solve; no inverse is ever formed.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative singularity threshold: a pivot is rejected when its magnitude is
/// at most `SINGULAR_RTOL * max(1, ‖A‖∞)`.
pub const SINGULAR_RTOL: f64 = 1e-12;

/// Which vector norm to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    #[default]
    Euclidean,
    Infinity,
}

/// A point in ℝⁿ, n ≥ 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RealVector(Vec<f64>);

impl RealVector {
    /// Wraps `entries`. Panics if `entries` is empty.
    pub fn new(entries: Vec<f64>) -> Self {
        assert!(!entries.is_empty(), "RealVector must have dimension >= 1");
        RealVector(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.0.iter()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn scale(&self, c: f64) -> RealVector {
        RealVector(self.0.iter().map(|v| c * v).collect())
    }

    /// Componentwise midpoint `(self + other) / 2`.
    pub fn midpoint(&self, other: &RealVector) -> RealVector {
        debug_assert_eq!(self.dim(), other.dim());
        RealVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| 0.5 * (a + b))
                .collect(),
        )
    }

    pub fn norm(&self, kind: NormKind) -> f64 {
        norm(self, kind)
    }
}

impl From<Vec<f64>> for RealVector {
    fn from(entries: Vec<f64>) -> Self {
        RealVector::new(entries)
    }
}

impl Index<usize> for RealVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for RealVector {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl Sub for &RealVector {
    type Output = RealVector;

    fn sub(self, rhs: &RealVector) -> RealVector {
        assert_eq!(self.dim(), rhs.dim(), "vector dimension mismatch");
        RealVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Add for &RealVector {
    type Output = RealVector;

    fn add(self, rhs: &RealVector) -> RealVector {
        assert_eq!(self.dim(), rhs.dim(), "vector dimension mismatch");
        RealVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for RealVector {
    /// Formats as `(v1, v2, ...)`, honoring the precision flag.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            match f.precision() {
                Some(p) => write!(f, "{:.*}", p, v)?,
                None => write!(f, "{}", v)?,
            }
        }
        write!(f, ")")
    }
}

/// Euclidean or max-abs norm of `v`.
pub fn norm(v: &RealVector, kind: NormKind) -> f64 {
    match kind {
        NormKind::Euclidean => {
            // Scaled accumulation so large entries do not overflow the sum.
            let scale = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
            if scale == 0.0 || !scale.is_finite() {
                return scale;
            }
            let ssq: f64 = v.iter().map(|x| (x / scale) * (x / scale)).sum();
            scale * ssq.sqrt()
        }
        NormKind::Infinity => v.iter().fold(0.0_f64, |m, x| m.max(x.abs())),
    }
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0);
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Builds a matrix from equally long rows. Panics on ragged input.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), n_cols, "ragged rows");
            data.extend_from_slice(r);
        }
        Self::new(n_rows, n_cols, data).expect("non-empty rows")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, c: f64) -> DenseMatrix {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| c * v).collect(),
        }
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: f64, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + c * b)
                .collect(),
        }
    }

    pub fn mul_vec(&self, v: &RealVector) -> RealVector {
        assert_eq!(self.cols, v.dim(), "matrix-vector dimension mismatch");
        RealVector::new(
            (0..self.rows)
                .map(|i| self.row(i).iter().zip(v.iter()).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }

    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// Returns the matrix whose row `i` is row `perm[i]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> DenseMatrix {
        assert_eq!(perm.len(), self.rows);
        let mut data = Vec::with_capacity(self.data.len());
        for &p in perm {
            data.extend_from_slice(self.row(p));
        }
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &DenseMatrix {
    type Output = DenseMatrix;

    fn add(self, rhs: &DenseMatrix) -> DenseMatrix {
        self.add_scaled(1.0, rhs)
    }
}

impl Mul<&RealVector> for &DenseMatrix {
    type Output = RealVector;

    fn mul(self, rhs: &RealVector) -> RealVector {
        self.mul_vec(rhs)
    }
}

/// Packed LU factors of a square matrix with row pivoting: `P A = L U`.
///
/// `L` is unit lower triangular and stored below the diagonal of `lu`; `U`
/// occupies the diagonal and above. Row `i` of `P A` is row `perm[i]` of `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct LuFactors {
    lu: DenseMatrix,
    perm: Vec<usize>,
    parity: i8,
}

impl LuFactors {
    pub fn dim(&self) -> usize {
        self.lu.rows()
    }

    pub fn packed(&self) -> &DenseMatrix {
        &self.lu
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    /// +1 for an even number of row swaps, -1 for odd.
    pub fn parity(&self) -> i8 {
        self.parity
    }

    pub fn lower(&self) -> DenseMatrix {
        let n = self.dim();
        let mut l = DenseMatrix::identity(n);
        for i in 0..n {
            for j in 0..i {
                l[(i, j)] = self.lu[(i, j)];
            }
        }
        l
    }

    pub fn upper(&self) -> DenseMatrix {
        let n = self.dim();
        let mut u = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                u[(i, j)] = self.lu[(i, j)];
            }
        }
        u
    }

    pub fn determinant(&self) -> f64 {
        (0..self.dim()).fold(f64::from(self.parity), |d, i| d * self.lu[(i, i)])
    }

    pub fn solve(&self, b: &RealVector) -> Result<RealVector> {
        lu_solve(self, b)
    }
}

/// Factors `a` with partial pivoting (largest magnitude in the column).
pub fn lu_factor(a: &DenseMatrix) -> Result<LuFactors> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            found: a.cols(),
        });
    }
    let n = a.rows();
    let threshold = SINGULAR_RTOL * a.norm_inf().max(1.0);
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut parity = 1i8;

    for k in 0..n {
        let (p, pivot_abs) = (k..n)
            .map(|i| (i, lu[(i, k)].abs()))
            .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        // NaN pivots compare false above and fall through here as well
        if !(pivot_abs > threshold) {
            return Err(Error::SingularMatrix {
                column: k,
                pivot: lu[(p, k)],
                threshold,
            });
        }
        if p != k {
            for j in 0..n {
                lu.data.swap(k * n + j, p * n + j);
            }
            perm.swap(k, p);
            parity = -parity;
        }
        let pivot = lu[(k, k)];
        for i in (k + 1)..n {
            let factor = lu[(i, k)] / pivot;
            lu[(i, k)] = factor;
            if factor != 0.0 {
                for j in (k + 1)..n {
                    let ukj = lu[(k, j)];
                    lu[(i, j)] -= factor * ukj;
                }
            }
        }
    }

    Ok(LuFactors { lu, perm, parity })
}

/// Solves `A x = b` given the factors of `A`.
pub fn lu_solve(f: &LuFactors, b: &RealVector) -> Result<RealVector> {
    let n = f.dim();
    if b.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.dim(),
        });
    }
    let lu = &f.lu;
    let mut x: Vec<f64> = f.perm.iter().map(|&p| b[p]).collect();
    // forward: L y = P b
    for i in 0..n {
        let mut s = x[i];
        for j in 0..i {
            s -= lu[(i, j)] * x[j];
        }
        x[i] = s;
    }
    // backward: U x = y
    for i in (0..n).rev() {
        let mut s = x[i];
        for j in (i + 1)..n {
            s -= lu[(i, j)] * x[j];
        }
        x[i] = s / lu[(i, i)];
    }
    Ok(RealVector::new(x))
}

/// Factor-and-solve convenience.
pub fn solve(a: &DenseMatrix, b: &RealVector) -> Result<RealVector> {
    lu_solve(&lu_factor(a)?, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn max_abs_diff(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
        a.as_slice()
            .iter()
            .zip(b.as_slice())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn identity_factors_to_identity() {
        let f = lu_factor(&DenseMatrix::identity(2)).unwrap();
        assert_eq!(f.permutation(), &[0, 1]);
        assert_eq!(f.lower(), DenseMatrix::identity(2));
        assert_eq!(f.upper(), DenseMatrix::identity(2));
        let x = f.solve(&RealVector::new(vec![7.0, -2.0])).unwrap();
        assert_eq!(x.as_slice(), &[7.0, -2.0]);
    }

    #[test]
    fn swap_matrix_pivots_and_reconstructs() {
        let a = DenseMatrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]);
        let f = lu_factor(&a).unwrap();
        assert_eq!(f.permutation(), &[1, 0]);
        assert_eq!(f.parity(), -1);
        let pa = a.permute_rows(f.permutation());
        assert_eq!(f.lower().matmul(&f.upper()), pa);
        assert_eq!(f.determinant(), -1.0);
    }

    #[test]
    fn two_by_two_hand_solve() {
        // 2*1 + 1*1 = 3, 6*1 + 4*1 = 10
        let a = DenseMatrix::from_rows(&[[2.0, 1.0], [6.0, 4.0]]);
        let x = solve(&a, &RealVector::new(vec![3.0, 10.0])).unwrap();
        assert_relative_eq!(x[0], 1.0, epsilon = 1e-14);
        assert_relative_eq!(x[1], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn hilbert_row_sums_give_ones() {
        let n = 3;
        let h = DenseMatrix::new(
            n,
            n,
            (0..n * n)
                .map(|k| 1.0 / ((k / n + k % n + 1) as f64))
                .collect(),
        )
        .unwrap();
        let b = RealVector::new((0..n).map(|i| h.row(i).iter().sum()).collect());
        let x = solve(&h, &b).unwrap();
        for v in x.iter() {
            assert!((v - 1.0).abs() < 1e-12, "{x:?}");
        }
        let r = &h.mul_vec(&x) - &b;
        let bound = 1e-10 * (h.norm_inf() * norm(&x, NormKind::Infinity) + norm(&b, NormKind::Infinity));
        assert!(norm(&r, NormKind::Infinity) <= bound);
    }

    #[test]
    fn reconstruction_within_tolerance() {
        let a = DenseMatrix::from_rows(&[[1.0, 2.0, 3.0], [4.0, 5.0, 6.0], [7.0, 8.0, 10.0]]);
        let f = lu_factor(&a).unwrap();
        let rec = f.lower().matmul(&f.upper());
        let pa = a.permute_rows(f.permutation());
        assert!(max_abs_diff(&rec, &pa) <= 1e-12 * a.norm_inf());
        assert_relative_eq!(f.determinant(), -3.0, epsilon = 1e-12);
    }

    #[test]
    fn duplicated_row_is_singular() {
        let a = DenseMatrix::from_rows(&[[1.0, 2.0, 3.0], [4.0, 5.0, 6.0], [1.0, 2.0, 3.0]]);
        assert!(matches!(lu_factor(&a), Err(Error::SingularMatrix { .. })));
    }

    #[test]
    fn threshold_scales_with_norm() {
        // pivot 1e-9 against ‖A‖∞ ≈ 1e4: threshold is 1e-8, so singular
        let a = DenseMatrix::from_rows(&[[1e4, 0.0], [0.0, 1e-9]]);
        assert!(matches!(lu_factor(&a), Err(Error::SingularMatrix { column: 1, .. })));
        // same pivot against ‖A‖∞ = 1 passes
        let b = DenseMatrix::from_rows(&[[1.0, 0.0], [0.0, 1e-9]]);
        assert!(lu_factor(&b).is_ok());
    }

    #[test]
    fn nan_entries_are_rejected() {
        let a = DenseMatrix::from_rows(&[[f64::NAN, 0.0], [0.0, 1.0]]);
        assert!(lu_factor(&a).is_err());
    }

    #[test]
    fn non_square_and_wrong_rhs() {
        let a = DenseMatrix::zeros(2, 3);
        assert!(matches!(lu_factor(&a), Err(Error::DimensionMismatch { .. })));
        let f = lu_factor(&DenseMatrix::identity(2)).unwrap();
        assert!(matches!(
            f.solve(&RealVector::zeros(3)),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        ));
        assert!(DenseMatrix::new(2, 2, vec![1.0; 3]).is_err());
    }

    #[test]
    fn norms() {
        let z = RealVector::zeros(3);
        assert_eq!(norm(&z, NormKind::Euclidean), 0.0);
        assert_eq!(norm(&z, NormKind::Infinity), 0.0);
        assert_eq!(norm(&RealVector::new(vec![3.0, 4.0]), NormKind::Euclidean), 5.0);
        assert_eq!(norm(&RealVector::new(vec![3.0, -4.0]), NormKind::Infinity), 4.0);
        // no overflow in the squared sum
        let big = RealVector::new(vec![3e200, 4e200]);
        assert_relative_eq!(norm(&big, NormKind::Euclidean), 5e200, max_relative = 1e-15);
    }

    #[test]
    fn display_with_precision() {
        let v = RealVector::new(vec![1.5, -0.25]);
        assert_eq!(format!("{v:.3}"), "(1.500, -0.250)");
    }
}
