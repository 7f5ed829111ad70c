//! Closed-form resolution limits and error constants.

use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// Separation thresholds and the location error constant for `n` sources
/// observed up to frequency `cutoff` at noise-to-amplitude ratio `σ/m_min`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResolutionLimits {
    pub n: usize,
    pub cutoff: f64,
    pub noise_ratio: f64,
    /// `16.6π(n−1)/Ω · (σ/m)^{1/(2n−2)}`: above it the count is recoverable.
    pub number_threshold: f64,
    /// `15.3π(n−½)/Ω · (σ/m)^{1/(2n−1)}`: above it locations are stable.
    pub location_threshold: f64,
    /// `C(n)` in the location error bound.
    pub error_constant: f64,
}

impl ResolutionLimits {
    /// `C(n)/Ω · SRF^{2n−2} · σ/m`, the worst-case location error at
    /// super-resolution factor `srf`.
    pub fn location_error_bound(&self, srf: f64) -> f64 {
        self.error_constant / self.cutoff * srf.powi(2 * self.n as i32 - 2) * self.noise_ratio
    }
}

/// `C(n) = (1+√3)^{2n−1} 2^{5n−1} (2n−1)^{2n−1} π / 3^{2n−½}`.
pub fn error_constant(n: usize) -> f64 {
    let e = 2.0 * n as f64 - 1.0;
    (1.0 + 3f64.sqrt()).powf(e) * 2f64.powf(5.0 * n as f64 - 1.0) * e.powf(e) * PI / 3f64.powf(e + 0.5)
}

/// Evaluates both separation thresholds and `C(n)`.
pub fn resolution_limit_thresholds(n: usize, cutoff: f64, sigma: f64, m_min: f64) -> Result<ResolutionLimits> {
    if n < 2 || !(cutoff > 0.0) || !(m_min > 0.0) || !(sigma >= 0.0) || sigma > m_min {
        return Err(Error::InvalidArgument(alloc::format!(
            "need n >= 2, cutoff > 0 and 0 <= sigma <= m_min, got n={n}, cutoff={cutoff}, sigma={sigma}, m_min={m_min}"
        )));
    }
    let ratio = sigma / m_min;
    let nf = n as f64;
    Ok(ResolutionLimits {
        n,
        cutoff,
        noise_ratio: ratio,
        number_threshold: 16.6 * PI * (nf - 1.0) / cutoff * ratio.powf(1.0 / (2.0 * nf - 2.0)),
        location_threshold: 15.3 * PI * (nf - 0.5) / cutoff * ratio.powf(1.0 / (2.0 * nf - 1.0)),
        error_constant: error_constant(n),
    })
}

/// Smallest ℓ1 separation for which thresholding `H(s)` at `4^{s+1}σ/3`
/// provably counts `n` sources placed in `[−sπ/6Ω, sπ/6Ω]²`:
/// `4(1+√3)πs/(3Ω) · (2n 4^{s+1} σ / (3m))^{1/(2n−2)}`.
pub fn detection_separation(n: usize, s: usize, cutoff: f64, sigma: f64, m_min: f64) -> Result<f64> {
    if n < 2 || s < n || !(cutoff > 0.0) || !(m_min > 0.0) || !(sigma >= 0.0) {
        return Err(Error::InvalidArgument(alloc::format!(
            "need 2 <= n <= s, cutoff > 0 and m_min > 0, got n={n}, s={s}"
        )));
    }
    let sf = s as f64;
    let inner = 2.0 * n as f64 * 4f64.powi(s as i32 + 1) / 3.0 * sigma / m_min;
    Ok(4.0 * (1.0 + 3f64.sqrt()) * PI * sf / (3.0 * cutoff) * inner.powf(1.0 / (2.0 * n as f64 - 2.0)))
}

/// Largest noise level at which [`detection_separation`] stays at or below
/// `separation`.
pub fn detection_noise_ceiling(n: usize, s: usize, cutoff: f64, separation: f64, m_min: f64) -> Result<f64> {
    let unit = detection_separation(n, s, cutoff, m_min, m_min)?;
    Ok(m_min * (separation / unit).powf(2.0 * n as f64 - 2.0))
}
