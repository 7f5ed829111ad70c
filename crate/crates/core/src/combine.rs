//! Coordinate combination: binomial sums of lattice samples that behave like
//! power sums of `e^{irx₁} ± e^{irx₂}`.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::model::FourierGrid;
use crate::{Error, Result};

/// Which coordinate combination a sequence realises.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `D(t)`, powers of `e^{irx₁} + e^{irx₂}`.
    Plus,
    /// `G(t)`, powers of `e^{ix₁} − e^{ix₂}`.
    Minus,
}

/// The `2s + 1` combined values `t = 0..=2s`.
#[derive(Clone, Debug, PartialEq)]
pub struct CombinedSequence {
    values: Vec<Complex64>,
    half_order: usize,
    stride: usize,
    branch: Branch,
}

impl CombinedSequence {
    /// Wraps raw values; the length must be odd.
    pub fn from_values(values: Vec<Complex64>, stride: usize, branch: Branch) -> Result<Self> {
        if values.len().is_multiple_of(2) {
            return Err(Error::InvalidArgument(alloc::format!(
                "combined sequence needs 2s+1 values, got {}",
                values.len()
            )));
        }
        Ok(Self { half_order: values.len() / 2, values, stride, branch })
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// `s`, so the Hankel matrix is `(s+1) × (s+1)`.
    pub fn half_order(&self) -> usize {
        self.half_order
    }

    pub fn stride(&self) -> usize {
        self.stride
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    /// Every value multiplied by `c`.
    pub fn scaled(&self, c: Complex64) -> Self {
        Self { values: self.values.iter().map(|v| v * c).collect(), ..self.clone() }
    }
}

/// Rows `0..=max_t` of Pascal's triangle, exact in `u128` before conversion.
pub fn binomial_rows(max_t: usize) -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<u128>> = Vec::with_capacity(max_t + 1);
    for t in 0..=max_t {
        let mut row = alloc::vec![1u128; t + 1];
        for k in 1..t {
            row[k] = rows[t - 1][k - 1] + rows[t - 1][k];
        }
        rows.push(row);
    }
    rows.into_iter().map(|r| r.into_iter().map(|c| c as f64).collect()).collect()
}

/// Largest stride keeping `r·2s` on the lattice: `⌊Ω / 2s⌋`.
pub fn stride_for(cutoff: usize, s: usize) -> usize {
    if s == 0 {
        cutoff
    } else {
        cutoff / (2 * s)
    }
}

fn combine(grid: &FourierGrid, s: usize, r: usize, branch: Branch) -> Result<CombinedSequence> {
    if s == 0 || r == 0 {
        return Err(Error::InvalidArgument(alloc::format!(
            "half order and stride must be positive (s = {s}, r = {r})"
        )));
    }
    let needed = r * 2 * s;
    if needed > grid.cutoff() {
        return Err(Error::OutOfRange { needed, cutoff: grid.cutoff() });
    }
    let binom = binomial_rows(2 * s);
    let values = (0..=2 * s)
        .map(|t| {
            (0..=t)
                .map(|t1| {
                    let t2 = t - t1;
                    let w = binom[t][t1];
                    let w = if branch == Branch::Minus && t2 % 2 == 1 { -w } else { w };
                    grid.get(r * t1, r * t2) * w
                })
                .sum()
        })
        .collect();
    Ok(CombinedSequence { values, half_order: s, stride: r, branch })
}

/// `D(t) = Σ_{t₁+t₂=t} C(t,t₁)·X(r·t₁, r·t₂)` for `t = 0..=2s`.
pub fn combine_plus(grid: &FourierGrid, s: usize, r: usize) -> Result<CombinedSequence> {
    combine(grid, s, r, Branch::Plus)
}

/// `G(t) = Σ_{t₁+t₂=t} (−1)^{t₂}·C(t,t₁)·X(t₁, t₂)` for `t = 0..=2s`.
pub fn combine_minus(grid: &FourierGrid, s: usize) -> Result<CombinedSequence> {
    combine(grid, s, 1, Branch::Minus)
}

/// Per-entry noise amplification `2^t` for `t = 0..=2s`: a perturbation of
/// sup norm below `σ` moves entry `t` by less than `2^t·σ`.
pub fn noise_amplification_bound(s: usize) -> Vec<f64> {
    (0..=2 * s).map(|t| (2.0f64).powi(t as i32)).collect()
}
