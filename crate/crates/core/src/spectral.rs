//! Hankel assembly, singular value decomposition and noise subspaces.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::combine::CombinedSequence;
use crate::linalg::{svd_full_left, CMatrix};
use crate::{Error, Result};

/// Square Hankel matrix `H[i][j] = seq[i + j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct HankelMatrix {
    matrix: CMatrix,
}

impl HankelMatrix {
    /// Builds the `(s+1) × (s+1)` matrix from `2s + 1` values.
    pub fn from_values(values: &[Complex64]) -> Result<Self> {
        if values.len().is_multiple_of(2) {
            return Err(Error::InvalidArgument(alloc::format!(
                "Hankel matrix needs an odd number of values, got {}",
                values.len()
            )));
        }
        let order = values.len() / 2 + 1;
        Ok(Self { matrix: CMatrix::from_fn(order, order, |i, j| values[i + j]) })
    }

    /// Number of rows (`s + 1`).
    pub fn order(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }
}

/// Hankel matrix of a combined sequence.
pub fn hankel(seq: &CombinedSequence) -> HankelMatrix {
    HankelMatrix::from_values(seq.values()).expect("combined sequences have odd length")
}

/// Full SVD `H = U·Σ·V*` with `U` unitary and singular values descending.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    singular_values: Vec<f64>,
    left: CMatrix,
    right: CMatrix,
}

impl SpectralDecomposition {
    pub fn singular_values(&self) -> &[f64] {
        &self.singular_values
    }

    /// Left singular vectors as columns of a unitary matrix.
    pub fn left_singular_vectors(&self) -> &CMatrix {
        &self.left
    }

    pub fn right_singular_vectors(&self) -> &CMatrix {
        &self.right
    }

    /// `U·Σ·V*`.
    pub fn reconstruct(&self) -> CMatrix {
        let k = self.singular_values.len();
        let us = CMatrix::from_fn(self.left.rows(), k, |i, j| self.left[(i, j)] * self.singular_values[j]);
        us.matmul(&self.right.adjoint())
    }

    pub fn order(&self) -> usize {
        self.left.rows()
    }
}

/// Singular value decomposition of a Hankel matrix.
pub fn decompose(h: &HankelMatrix) -> Result<SpectralDecomposition> {
    let svd = svd_full_left(h.matrix())?;
    Ok(SpectralDecomposition { singular_values: svd.singular_values, left: svd.u, right: svd.v })
}

/// Left singular vectors `n+1 ..= s+1`, spanning the noise space.
pub fn noise_subspace(dec: &SpectralDecomposition, n: usize) -> Result<CMatrix> {
    let order = dec.order();
    if n >= order {
        return Err(Error::NoNoiseSpace { n, order });
    }
    Ok(dec.left.columns(n..order))
}

/// Lower bound on the `n`-th singular value of the noiseless Hankel matrix
/// `H(s)` built at stride `⌊Ω/2s⌋`, valid for sources in
/// `[−sπ/(6Ω), sπ/(6Ω)]²` translated by `(0, sπ/Ω)`:
///
/// `m_min·(3θ)^{2n−2} / (n·(2(1+√3)π)^{2n−2})` with `θ = Ω·D_min/(2s)`.
pub fn signal_singular_value_lower_bound(n: usize, cutoff: usize, s: usize, d_min: f64, m_min: f64) -> f64 {
    let theta = cutoff as f64 * d_min / (2.0 * s as f64);
    let p = (2 * n - 2) as i32;
    let c = 2.0 * (1.0 + 3f64.sqrt()) * core::f64::consts::PI;
    m_min * (3.0 * theta).powi(p) / (n as f64 * c.powi(p))
}

/// Frobenius-norm bound `4^{s+1}σ/3` on the noise part of `H(s)`.
pub fn noise_frobenius_bound(s: usize, sigma: f64) -> f64 {
    4f64.powi(s as i32 + 1) * sigma / 3.0
}
