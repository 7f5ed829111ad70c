//! Source-number detection by thresholding the singular values of the
//! combined Hankel matrix, at a fixed half order or sweeping over it.

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use crate::combine::{combine_plus, stride_for};
use crate::model::{translate, FourierGrid};
use crate::spectral::{decompose, hankel, noise_frobenius_bound};
use crate::{Error, Point, Result};

/// Tuning for [`detect_count_fixed_s`] and [`detect_count_sweep`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DetectionParams {
    pub translation: Point,
    pub noise_level: f64,
    /// Relative rank floor used instead of the threshold when `σ = 0`.
    pub zero_noise_floor: f64,
    /// Multiplier on `4^{s+1}σ/3`; `1.0` is the guaranteed-sound threshold.
    pub threshold_scale: f64,
    /// Non-improving steps the sweep tolerates after its last maximum.
    pub patience: usize,
}

impl DetectionParams {
    /// Defaults: translation `(0, π/2)`, floor `1e−10`, scale 1, patience 2.
    pub fn new(noise_level: f64) -> Self {
        Self {
            translation: [0.0, FRAC_PI_2],
            noise_level,
            zero_noise_floor: 1e-10,
            threshold_scale: 1.0,
            patience: 2,
        }
    }

    pub fn with_translation(mut self, v: Point) -> Self {
        self.translation = v;
        self
    }

    pub fn with_threshold_scale(mut self, scale: f64) -> Self {
        self.threshold_scale = scale;
        self
    }

    pub fn with_patience(mut self, patience: usize) -> Self {
        self.patience = patience;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.noise_level >= 0.0) || !(self.zero_noise_floor > 0.0) || !(self.threshold_scale > 0.0) {
            return Err(Error::InvalidArgument(alloc::format!("invalid detection parameters {self:?}")));
        }
        Ok(())
    }
}

/// `4^{s+1}σ/3`, the level below which every noise singular value lies.
pub fn detection_threshold(s: usize, sigma: f64) -> f64 {
    noise_frobenius_bound(s, sigma)
}

/// Outcome of thresholding at one half order.
#[derive(Clone, Debug, PartialEq)]
pub struct FixedOrderDetection {
    pub s: usize,
    pub stride: usize,
    pub threshold: f64,
    pub singular_values: Vec<f64>,
    pub count: usize,
}

fn detect_translated(x: &FourierGrid, params: &DetectionParams, s: usize) -> Result<FixedOrderDetection> {
    if s == 0 {
        return Err(Error::InvalidArgument("half order s must be at least 1".into()));
    }
    let stride = stride_for(x.cutoff(), s);
    if stride == 0 {
        return Err(Error::OutOfRange { needed: 2 * s, cutoff: x.cutoff() });
    }
    let dec = decompose(&hankel(&combine_plus(x, s, stride)?))?;
    let singular_values = dec.singular_values().to_vec();
    let threshold = if params.noise_level == 0.0 {
        params.zero_noise_floor * singular_values[0]
    } else {
        params.threshold_scale * detection_threshold(s, params.noise_level)
    };
    let count = singular_values.iter().filter(|&&v| v > 0.0 && v >= threshold).count();
    Ok(FixedOrderDetection { s, stride, threshold, singular_values, count })
}

/// Number of singular values of `H(s)` at or above the threshold, with the
/// combination taken at stride `⌊Ω/2s⌋` after translating by `params.translation`.
pub fn detect_count_fixed_s(grid: &FourierGrid, params: &DetectionParams, s: usize) -> Result<FixedOrderDetection> {
    params.validate()?;
    detect_translated(&translate(grid, params.translation), params, s)
}

/// Result of the sweep over `s = 2..=⌊(Ω−1)/2⌋`.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepDetection {
    pub count: usize,
    /// Half order at which `count` was first reached.
    pub best_s: usize,
    pub visited: Vec<FixedOrderDetection>,
}

/// Runs [`detect_count_fixed_s`] for increasing `s`, keeps the largest count
/// and stops once `s ≥ best_s + patience`.
pub fn detect_count_sweep(grid: &FourierGrid, params: &DetectionParams) -> Result<SweepDetection> {
    params.validate()?;
    let cutoff = grid.cutoff();
    if cutoff < 5 {
        return Err(Error::InvalidArgument(alloc::format!(
            "sweep needs a cutoff of at least 5, got {cutoff}"
        )));
    }
    let x = translate(grid, params.translation);
    let mut count = 0;
    let mut best_s = 2;
    let mut visited = Vec::new();
    for s in 2..=(cutoff - 1) / 2 {
        let step = detect_translated(&x, params, s)?;
        if step.count > count {
            count = step.count;
            best_s = s;
        }
        visited.push(step);
        if s >= best_s + params.patience {
            break;
        }
    }
    Ok(SweepDetection { count, best_s, visited })
}
