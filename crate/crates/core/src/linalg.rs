//! Dense complex linear algebra for the small matrices used throughout the
//! crate (Hankel orders up to 33, Vandermonde systems, least-squares designs).
//!
//! The SVD is a cyclic one-sided Jacobi iteration. It needs no external
//! LAPACK, runs in `no_std + alloc`, and produces bit-identical output for
//! bit-identical input because the sweep order is fixed.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::LinalgError;

/// Maximum number of Jacobi sweeps before reporting non-convergence.
const MAX_SWEEPS: usize = 80;
/// Pairwise orthogonality tolerance relative to the column norms.
const JACOBI_TOL: f64 = 1e-15;

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from its columns; all columns must share a length.
    pub fn from_columns(columns: &[Vec<Complex64>]) -> Self {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        assert!(columns.iter().all(|c| c.len() == rows), "ragged columns");
        Self::from_fn(rows, cols, |i, j| columns[j][i])
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Columns `range` as a new matrix.
    pub fn columns(&self, range: core::ops::Range<usize>) -> Self {
        let start = range.start;
        Self::from_fn(self.rows, range.len(), |i, j| self[(i, start + j)])
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, rhs: &CMatrix) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matmul");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, x.len(), "dimension mismatch in matvec");
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(x)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn sub(&self, rhs: &CMatrix) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Spectral norm (largest singular value).
    pub fn norm_2(&self) -> Result<f64, LinalgError> {
        Ok(svd(self)?.singular_values.first().copied().unwrap_or(0.0))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Euclidean norm of a complex vector.
pub fn norm2(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Singular value decomposition `A = U · diag(σ) · V*`.
///
/// For an `m × n` input, `u` is `m × m` when `m ≤ n` is handled through the
/// adjoint, otherwise `m × n` (thin). `v` is always `n × n` unitary. Columns
/// of `u` belonging to zero singular values are zero in the thin case; use
/// [`svd_full_left`] when an orthonormal completion is needed.
#[derive(Clone, Debug)]
pub struct Svd {
    pub singular_values: Vec<f64>,
    pub u: CMatrix,
    pub v: CMatrix,
}

impl Svd {
    /// `U · diag(σ) · V*`.
    pub fn reconstruct(&self) -> CMatrix {
        let k = self.singular_values.len();
        let us = CMatrix::from_fn(self.u.rows(), k, |i, j| self.u[(i, j)] * self.singular_values[j]);
        us.matmul(&self.v.columns(0..k).adjoint())
    }

    /// Ratio of the largest to the smallest singular value (`inf` when singular).
    pub fn condition_number(&self) -> f64 {
        let max = self.singular_values.first().copied().unwrap_or(0.0);
        let min = self.singular_values.last().copied().unwrap_or(0.0);
        if min == 0.0 {
            f64::INFINITY
        } else {
            max / min
        }
    }
}

/// Orthogonalises the columns of `w` in place by cyclic Jacobi rotations and
/// accumulates the rotations into `v`, so that on return `w_in · v = w`.
fn one_sided_jacobi(w: &mut CMatrix, v: &mut CMatrix) -> Result<(), LinalgError> {
    let (m, n) = (w.rows(), w.cols());
    for _sweep in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = Complex64::new(0.0, 0.0);
                for i in 0..m {
                    let x = w[(i, p)];
                    let y = w[(i, q)];
                    alpha += x.norm_sqr();
                    beta += y.norm_sqr();
                    gamma += x.conj() * y;
                }
                let g = gamma.norm();
                if g == 0.0 || g <= JACOBI_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // e^{-i arg γ} aligns column q so the pair has a real inner product.
                let phase = gamma.conj() / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let x = w[(i, p)];
                    let y = w[(i, q)] * phase;
                    w[(i, p)] = x * c - y * s;
                    w[(i, q)] = x * s + y * c;
                }
                for i in 0..v.rows() {
                    let x = v[(i, p)];
                    let y = v[(i, q)] * phase;
                    v[(i, p)] = x * c - y * s;
                    v[(i, q)] = x * s + y * c;
                }
            }
        }
        if !rotated {
            return Ok(());
        }
    }
    Err(LinalgError::NoConvergence { sweeps: MAX_SWEEPS })
}

/// Descending order of `values`, ties kept in index order.
fn descending_order(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).unwrap_or(core::cmp::Ordering::Equal));
    idx
}

/// Thin SVD of a tall (`m ≥ n`) matrix: `u` is `m × n`, `v` is `n × n`.
fn svd_tall(a: &CMatrix) -> Result<Svd, LinalgError> {
    let n = a.cols();
    let mut w = a.clone();
    let mut v = CMatrix::identity(n);
    one_sided_jacobi(&mut w, &mut v)?;
    let norms: Vec<f64> = (0..n).map(|j| norm2(&w.column(j))).collect();
    let order = descending_order(&norms);
    let singular_values: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let u = CMatrix::from_fn(a.rows(), n, |i, k| {
        let j = order[k];
        if norms[j] > 0.0 {
            w[(i, j)] / norms[j]
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let v = CMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(Svd { singular_values, u, v })
}

/// SVD of an arbitrary matrix. Returns `min(m, n)` singular values.
pub fn svd(a: &CMatrix) -> Result<Svd, LinalgError> {
    if !a.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    if a.rows() >= a.cols() {
        svd_tall(a)
    } else {
        let t = svd_tall(&a.adjoint())?;
        Ok(Svd {
            singular_values: t.singular_values,
            u: t.v.columns(0..a.rows()),
            v: t.u,
        })
    }
}

/// SVD whose left factor is a full unitary `m × m` matrix, including an
/// orthonormal basis of the left null space. Requires `m ≤ n`.
///
/// Jacobi on `A*` accumulates the left singular vectors of `A` as the
/// rotation product, which stays unitary even for rank-deficient input.
pub fn svd_full_left(a: &CMatrix) -> Result<Svd, LinalgError> {
    assert!(a.rows() <= a.cols(), "svd_full_left needs rows <= cols");
    if !a.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let t = svd_tall(&a.adjoint())?;
    Ok(Svd {
        singular_values: t.singular_values,
        u: t.v,
        v: t.u,
    })
}

/// Inverse by Gaussian elimination with partial pivoting.
pub fn inverse(a: &CMatrix) -> Result<CMatrix, LinalgError> {
    let n = a.rows();
    if n != a.cols() {
        return Err(LinalgError::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    if !a.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let mut m = a.clone();
    let mut inv = CMatrix::identity(n);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| {
                m[(x, col)]
                    .norm()
                    .partial_cmp(&m[(y, col)].norm())
                    .unwrap_or(core::cmp::Ordering::Equal)
            })
            .unwrap_or(col);
        if m[(pivot, col)].norm() == 0.0 {
            return Err(LinalgError::Singular);
        }
        if pivot != col {
            for j in 0..n {
                let tmp = m[(col, j)];
                m[(col, j)] = m[(pivot, j)];
                m[(pivot, j)] = tmp;
                let tmp = inv[(col, j)];
                inv[(col, j)] = inv[(pivot, j)];
                inv[(pivot, j)] = tmp;
            }
        }
        let p = m[(col, col)];
        for j in 0..n {
            m[(col, j)] /= p;
            inv[(col, j)] /= p;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = m[(r, col)];
            if f == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                let mv = m[(col, j)];
                let iv = inv[(col, j)];
                m[(r, j)] -= f * mv;
                inv[(r, j)] -= f * iv;
            }
        }
    }
    Ok(inv)
}

/// Solution of `min ‖A x − b‖₂` for a full-column-rank tall matrix.
#[derive(Clone, Debug)]
pub struct LeastSquares {
    pub solution: Vec<Complex64>,
    pub residual_norm: f64,
    /// `σ_max / σ_min` of the design matrix.
    pub condition_number: f64,
    /// `‖A⁺‖₂ = 1 / σ_min`.
    pub pseudo_inverse_norm: f64,
}

/// Least squares through the SVD. Rejects designs whose inverse condition
/// number falls below `rcond`.
pub fn least_squares(a: &CMatrix, b: &[Complex64], rcond: f64) -> Result<LeastSquares, LinalgError> {
    assert_eq!(a.rows(), b.len(), "dimension mismatch in least_squares");
    if a.rows() < a.cols() {
        return Err(LinalgError::Underdetermined { rows: a.rows(), cols: a.cols() });
    }
    let dec = svd(a)?;
    let smax = dec.singular_values.first().copied().unwrap_or(0.0);
    let smin = dec.singular_values.last().copied().unwrap_or(0.0);
    if smin <= rcond * smax || smin == 0.0 {
        return Err(LinalgError::RankDeficient { rcond: if smax > 0.0 { smin / smax } else { 0.0 } });
    }
    let k = a.cols();
    // x = V Σ⁻¹ U* b
    let mut coeff = vec![Complex64::new(0.0, 0.0); k];
    for (j, c) in coeff.iter_mut().enumerate() {
        let ub: Complex64 = (0..a.rows()).map(|i| dec.u[(i, j)].conj() * b[i]).sum();
        *c = ub / dec.singular_values[j];
    }
    let solution = dec.v.matvec(&coeff);
    let fitted = a.matvec(&solution);
    let residual_norm = norm2(&fitted.iter().zip(b).map(|(f, y)| f - y).collect::<Vec<_>>());
    Ok(LeastSquares {
        solution,
        residual_norm,
        condition_number: smax / smin,
        pseudo_inverse_norm: 1.0 / smin,
    })
}
