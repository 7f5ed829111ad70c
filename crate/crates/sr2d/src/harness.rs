//! Monte-Carlo phase-transition experiments for number detection and
//! location recovery, and the boundary slope fit.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sr2d_core::detect::{detect_count_sweep, DetectionParams};
use sr2d_core::model::{
    add_noise, forward_measure, l1_distance, l2_distance, min_pairwise, NoiseSpec, Region, Source,
    SourceConfiguration,
};
use sr2d_core::music::TestGrid;
use sr2d_core::recover::{recover_sources, RecoveryOptions};
use sr2d_core::theory::limits::resolution_limit_thresholds;
use sr2d_core::{Complex64, Point};

use crate::io::RegionSpec;

/// Which experiment a batch runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Number,
    Location,
}

/// Rejection attempts before an instance is skipped.
pub const MAX_ATTEMPTS: usize = 100_000;

/// Trials per batch at full scale.
pub const FULL_SCALE_TRIALS: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub n_true: usize,
    pub omega: usize,
    pub region: RegionSpec,
    pub translation: Point,
    pub trials: usize,
    pub srf_log10_range: [f64; 2],
    pub inv_sigma_log10_range: [f64; 2],
    pub seed: u64,
    /// MUSIC test grid step for location experiments.
    pub test_grid_step: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n_true: 3,
            omega: 10,
            region: RegionSpec::default(),
            translation: [0.0, FRAC_PI_2],
            trials: 2000,
            srf_log10_range: [-0.3, 1.0],
            inv_sigma_log10_range: [0.0, 12.0],
            seed: 0,
            test_grid_step: 0.005,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self, mode: Mode) -> Result<(), String> {
        let [a, b] = self.srf_log10_range;
        let [c, d] = self.inv_sigma_log10_range;
        if !(a <= b) || !(c <= d) || !a.is_finite() || !b.is_finite() || !c.is_finite() || !d.is_finite() {
            return Err("sampling ranges must be finite and ordered".into());
        }
        if self.trials == 0 {
            return Err("need at least one trial".into());
        }
        if self.n_true == 0 {
            return Err("need at least one source".into());
        }
        let r = self.region;
        if !(r.lower[0] < r.upper[0] && r.lower[1] < r.upper[1]) {
            return Err("region must have positive area".into());
        }
        match mode {
            Mode::Number if self.omega < 5 => Err("number experiments need omega >= 5".into()),
            Mode::Location if self.omega < 2 * self.n_true + 1 => {
                Err(format!("location experiments need omega >= {}", 2 * self.n_true + 1))
            }
            Mode::Location if !(self.test_grid_step > 0.0) => Err("test grid step must be positive".into()),
            _ => Ok(()),
        }
    }
}

/// One sampled experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub sources: SourceConfiguration,
    pub d_min: f64,
    pub sigma: f64,
    pub noise_seed: u64,
}

/// Outcome of one trial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial_id: u64,
    pub n_true: usize,
    pub d_min: f64,
    pub sigma: f64,
    pub srf: f64,
    pub snr: f64,
    pub n_detected: Option<usize>,
    pub success: bool,
    pub max_location_error: Option<f64>,
    pub seed: u64,
}

impl TrialRecord {
    pub fn log_srf(&self) -> f64 {
        self.srf.log10()
    }

    pub fn log_inv_sigma(&self) -> f64 {
        -self.sigma.log10()
    }
}

/// `SRF = π / (D_min Ω)`.
pub fn super_resolution_factor(d_min: f64, omega: usize) -> f64 {
    PI / (d_min * omega as f64)
}

/// Seed of trial `trial_id` in a batch seeded with `batch_seed`.
pub fn trial_seed(batch_seed: u64, trial_id: u64) -> u64 {
    let mut x = batch_seed ^ trial_id.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

fn uniform_point(rng: &mut ChaCha8Rng, r: &Region) -> Point {
    [rng.gen_range(r.lower[0]..=r.upper[0]), rng.gen_range(r.lower[1]..=r.upper[1])]
}

/// Point at ℓ1 distance `radius` from `p` in a uniformly random direction.
fn l1_neighbour(rng: &mut ChaCha8Rng, p: Point, radius: f64) -> Point {
    let t: f64 = rng.gen();
    let sx = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let sy = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    [p[0] + sx * t * radius, p[1] + sy * (1.0 - t) * radius]
}

/// `n` locations in `region` whose smallest pairwise ℓ1 distance lies in
/// `[d_min, 1.1 d_min]`, or `None` after [`MAX_ATTEMPTS`] rejections.
///
/// Candidates form a cluster: each new point is placed at a distance drawn
/// from the target window around a random earlier point.
pub fn sample_locations(rng: &mut ChaCha8Rng, n: usize, d_min: f64, region: &Region) -> Option<Vec<Point>> {
    if n == 1 {
        return Some(vec![uniform_point(rng, region)]);
    }
    'attempt: for _ in 0..MAX_ATTEMPTS {
        let mut points = vec![uniform_point(rng, region)];
        while points.len() < n {
            let anchor = points[rng.gen_range(0..points.len())];
            let gap = rng.gen_range(d_min..=1.1 * d_min);
            let next = l1_neighbour(rng, anchor, gap);
            if !region.contains(next) {
                continue 'attempt;
            }
            points.push(next);
        }
        let sep = min_pairwise(&points, l1_distance);
        if sep >= d_min && sep <= 1.1 * d_min {
            points.shuffle(rng);
            return Some(points);
        }
    }
    None
}

/// Draws `(D_min, σ, locations, amplitudes)` for one trial.
pub fn sample_instance(config: &ExperimentConfig, rng: &mut ChaCha8Rng) -> Option<Instance> {
    let [a, b] = config.srf_log10_range;
    let srf = 10f64.powf(rng.gen_range(a..=b));
    let d_min = PI / (srf * config.omega as f64);
    let [c, d] = config.inv_sigma_log10_range;
    let sigma = 10f64.powf(-rng.gen_range(c..=d));
    let region: Region = config.region.into();
    let locations = sample_locations(rng, config.n_true, d_min, &region)?;
    let sources = locations
        .into_iter()
        .map(|p| Source::new(p, Complex64::from_polar(rng.gen_range(1.0..=2.0), rng.gen_range(0.0..TAU))))
        .collect();
    let sources = SourceConfiguration::new(sources, region).ok()?;
    Some(Instance { sources, d_min, sigma, noise_seed: rng.gen() })
}

/// Per-source nearest recovered ℓ2 distance `e_j` and the success flag
/// `e_j < min_{p≠j} ‖y_p − y_j‖₂ / 3` for every `j`.
pub fn location_success(truth: &[Point], recovered: &[Point]) -> (bool, f64) {
    let mut ok = true;
    let mut worst: f64 = 0.0;
    for (j, &y) in truth.iter().enumerate() {
        let e = recovered.iter().map(|&r| l2_distance(r, y)).fold(f64::INFINITY, f64::min);
        let nn = truth
            .iter()
            .enumerate()
            .filter(|&(p, _)| p != j)
            .map(|(_, &q)| l2_distance(q, y))
            .fold(f64::INFINITY, f64::min);
        worst = worst.max(e);
        ok &= e < nn / 3.0;
    }
    (ok, worst)
}

fn run_trial(config: &ExperimentConfig, mode: Mode, options: &RecoveryOptions, trial_id: u64) -> Option<TrialRecord> {
    let seed = trial_seed(config.seed, trial_id);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inst = sample_instance(config, &mut rng)?;
    let clean = forward_measure(&inst.sources, config.omega);
    let noisy = add_noise(&clean, &NoiseSpec::new(inst.sigma, inst.noise_seed).ok()?);
    let mut record = TrialRecord {
        trial_id,
        n_true: config.n_true,
        d_min: inst.d_min,
        sigma: inst.sigma,
        srf: super_resolution_factor(inst.d_min, config.omega),
        snr: inst.sources.min_amplitude() / inst.sigma,
        n_detected: None,
        success: false,
        max_location_error: None,
        seed,
    };
    match mode {
        Mode::Number => {
            let params = DetectionParams::new(inst.sigma).with_translation(config.translation);
            if let Ok(sweep) = detect_count_sweep(&noisy, &params) {
                record.n_detected = Some(sweep.count);
                record.success = sweep.count == config.n_true;
            }
        }
        Mode::Location => {
            if let Ok(rec) = recover_sources(&noisy, config.n_true, config.translation, options) {
                let (ok, err) = location_success(&inst.sources.locations(), &rec.locations);
                record.success = ok;
                record.max_location_error = Some(err);
            }
        }
    }
    Some(record)
}

/// Records in trial order plus the ids of skipped trials.
#[derive(Clone, Debug, PartialEq)]
pub struct Batch {
    pub records: Vec<TrialRecord>,
    pub skipped: Vec<u64>,
}

/// Runs every trial of `config` on the rayon pool. Results do not depend on
/// the number of threads.
pub fn run_phase_transition(config: &ExperimentConfig, mode: Mode) -> Result<Batch, String> {
    config.validate(mode)?;
    let grid = TestGrid::new(2.0, config.test_grid_step).map_err(|e| e.to_string())?;
    let options = RecoveryOptions::new(grid);
    let outcomes: Vec<(u64, Option<TrialRecord>)> = (0..config.trials as u64)
        .into_par_iter()
        .map(|id| (id, run_trial(config, mode, &options, id)))
        .collect();
    let mut batch = Batch { records: Vec::with_capacity(outcomes.len()), skipped: Vec::new() };
    for (id, outcome) in outcomes {
        match outcome {
            Some(r) => batch.records.push(r),
            None => batch.skipped.push(id),
        }
    }
    Ok(batch)
}

pub fn run_number_phase_transition(config: &ExperimentConfig) -> Result<Batch, String> {
    run_phase_transition(config, Mode::Number)
}

pub fn run_location_phase_transition(config: &ExperimentConfig) -> Result<Batch, String> {
    run_phase_transition(config, Mode::Location)
}

/// Separation above which the problem is provably solvable for this trial:
/// the number threshold or the location threshold. `None` for one source.
pub fn theory_separation(record: &TrialRecord, mode: Mode, omega: usize) -> Option<f64> {
    let m_min = record.snr * record.sigma;
    let limits = resolution_limit_thresholds(record.n_true, omega as f64, record.sigma, m_min).ok()?;
    Some(match mode {
        Mode::Number => limits.number_threshold,
        Mode::Location => limits.location_threshold,
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BatchSummary {
    pub trials: usize,
    pub successes: usize,
    pub skipped: usize,
    /// Trials whose separation exceeds the theoretical threshold.
    pub above_threshold: usize,
    pub above_threshold_failures: usize,
}

impl BatchSummary {
    pub fn of(batch: &Batch, mode: Mode, omega: usize) -> Self {
        let mut s = Self { trials: batch.records.len(), skipped: batch.skipped.len(), ..Self::default() };
        for r in &batch.records {
            s.successes += r.success as usize;
            if theory_separation(r, mode, omega).is_some_and(|t| r.d_min >= t) {
                s.above_threshold += 1;
                s.above_threshold_failures += !r.success as usize;
            }
        }
        s
    }

    pub fn success_rate(&self) -> f64 {
        self.successes as f64 / self.trials.max(1) as f64
    }
}

/// Line `log₁₀(1/σ) = slope · log₁₀(SRF) + intercept` through per-bin boundaries.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryFit {
    pub slope: f64,
    pub intercept: f64,
    /// `(bin centre, boundary)` pairs used in the fit.
    pub points: Vec<(f64, f64)>,
}

/// Number of equal-width `log₁₀(SRF)` bins.
pub const FIT_BINS: usize = 20;
/// Fewest informative bins for a fit.
pub const MIN_FIT_BINS: usize = 5;

/// Bins `log₁₀(SRF)` into [`FIT_BINS`] bins. In each bin holding both
/// outcomes, the boundary is the largest `log₁₀(1/σ)` of a failed trial,
/// above which every trial of the bin succeeded. Bins whose top trial failed
/// are skipped. Fits a least-squares line through the boundaries.
pub fn fit_boundary_slope(records: &[TrialRecord]) -> Result<BoundaryFit, String> {
    if records.is_empty() {
        return Err("no records to fit".into());
    }
    let xs: Vec<f64> = records.iter().map(TrialRecord::log_srf).collect();
    let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(hi > lo) {
        return Err("records span a single SRF value".into());
    }
    let width = (hi - lo) / FIT_BINS as f64;
    let mut bins: Vec<Vec<(f64, bool)>> = vec![Vec::new(); FIT_BINS];
    for (r, &x) in records.iter().zip(&xs) {
        let k = (((x - lo) / width) as usize).min(FIT_BINS - 1);
        bins[k].push((r.log_inv_sigma(), r.success));
    }
    let mut points = Vec::new();
    for (k, bin) in bins.iter().enumerate() {
        let worst_failure = bin.iter().filter(|t| !t.1).map(|t| t.0).fold(f64::NEG_INFINITY, f64::max);
        let top_success = bin.iter().filter(|t| t.1).map(|t| t.0).fold(f64::NEG_INFINITY, f64::max);
        if worst_failure.is_finite() && top_success > worst_failure {
            points.push((lo + (k as f64 + 0.5) * width, worst_failure));
        }
    }
    if points.len() < MIN_FIT_BINS {
        return Err(format!(
            "only {} of {FIT_BINS} bins hold failures below successes, need {MIN_FIT_BINS}",
            points.len()
        ));
    }
    let (slope, intercept) = least_squares_line(&points);
    Ok(BoundaryFit { slope, intercept, points })
}

fn least_squares_line(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(slope: f64, intercept: f64, count: usize) -> Vec<TrialRecord> {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        (0..count as u64)
            .map(|id| {
                let x: f64 = rng.gen_range(-0.3..1.0);
                let y: f64 = rng.gen_range(0.0..12.0);
                TrialRecord {
                    trial_id: id,
                    n_true: 3,
                    d_min: PI / (10f64.powf(x) * 10.0),
                    sigma: 10f64.powf(-y),
                    srf: 10f64.powf(x),
                    snr: 10f64.powf(y),
                    n_detected: None,
                    success: y > slope * x + intercept,
                    max_location_error: None,
                    seed: id,
                }
            })
            .collect()
    }

    #[test]
    fn fit_recovers_generator_slope() {
        let fit = fit_boundary_slope(&synthetic(4.0, 2.0, 20_000)).unwrap();
        assert!((fit.slope - 4.0).abs() < 0.05, "{fit:?}");
    }

    #[test]
    fn fit_declines_without_failures() {
        let all_good: Vec<_> = synthetic(4.0, -10.0, 500);
        assert!(all_good.iter().all(|r| r.success));
        assert!(fit_boundary_slope(&all_good).is_err());
        assert!(fit_boundary_slope(&[]).is_err());
    }

    #[test]
    fn seeds_are_distinct() {
        let seeds: std::collections::HashSet<_> = (0..10_000).map(|i| trial_seed(42, i)).collect();
        assert_eq!(seeds.len(), 10_000);
        assert_ne!(trial_seed(1, 0), trial_seed(2, 0));
    }

    #[test]
    fn samples_respect_separation_window() {
        let cfg = ExperimentConfig { n_true: 4, ..ExperimentConfig::default() };
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..300 {
            let inst = sample_instance(&cfg, &mut rng).unwrap();
            let sep = inst.sources.min_separation();
            assert!(sep >= inst.d_min && sep <= 1.1 * inst.d_min);
            assert!(inst.sources.amplitudes().iter().all(|a| (1.0..=2.0).contains(&a.norm())));
        }
    }

    #[test]
    fn single_source_has_no_separation_constraint() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let p = sample_locations(&mut rng, 1, 100.0, &Region::default()).unwrap();
        assert_eq!(p.len(), 1);
        assert!(Region::default().contains(p[0]));
    }

    #[test]
    fn impossible_window_is_skipped() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let tiny = Region::new([0.0, 0.0], [0.1, 0.1]);
        assert!(sample_locations(&mut rng, 3, 1.0, &tiny).is_none());
    }

    #[test]
    fn success_criterion() {
        let truth = [[0.0, 0.0], [0.3, 0.0], [0.0, 0.9]];
        let (ok, err) = location_success(&truth, &[[0.09, 0.0], [0.3, 0.0], [0.0, 0.9]]);
        assert!(ok);
        assert!((err - 0.09).abs() < 1e-15);
        let (ok, _) = location_success(&truth, &[[0.15, 0.0], [0.3, 0.0], [0.0, 0.9]]);
        assert!(!ok);
        let (ok, _) = location_success(&truth, &[[0.0, 0.0], [0.0, 0.0], [0.0, 0.9]]);
        assert!(!ok);
    }

    #[test]
    fn invalid_configs() {
        let base = ExperimentConfig::default();
        assert!(ExperimentConfig { trials: 0, ..base.clone() }.validate(Mode::Number).is_err());
        assert!(ExperimentConfig { srf_log10_range: [1.0, 0.5], ..base.clone() }.validate(Mode::Number).is_err());
        assert!(ExperimentConfig { srf_log10_range: [1.0, 1.0], ..base.clone() }.validate(Mode::Number).is_ok());
        assert!(ExperimentConfig { omega: 4, ..base.clone() }.validate(Mode::Number).is_err());
        assert!(ExperimentConfig { n_true: 5, ..base.clone() }.validate(Mode::Location).is_err());
        assert!(base.validate(Mode::Location).is_ok());
    }
}
