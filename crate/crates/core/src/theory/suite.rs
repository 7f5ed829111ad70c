//! Seeded random instances for every check, grouped for batch verification.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::approx::{check_approx_stability, check_nonlinear_approx_lower_bound, check_projection_lower_bound};
use super::geometry::{check_distance_preservation, DistanceBranch};
use super::vandermonde::{
    check_eta_lower_bound, check_eta_stability, check_inverse_norm, check_singular_chain, check_volume_ratio,
};
use super::{eta, min_node_separation, vandermonde_matrix, BoundReport};
use crate::linalg::norm2;
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SuiteGroup {
    Geometry,
    Vandermonde,
    Approximation,
}

/// One randomized check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CheckKind {
    AngularDistance,
    TranslatedDistance,
    InverseNorm,
    SingularChain,
    VolumeRatio,
    EtaLowerBound,
    EtaStability,
    Projection,
    NonlinearApprox,
    ApproxStability,
}

impl CheckKind {
    pub const ALL: [CheckKind; 10] = [
        CheckKind::AngularDistance,
        CheckKind::TranslatedDistance,
        CheckKind::InverseNorm,
        CheckKind::SingularChain,
        CheckKind::VolumeRatio,
        CheckKind::EtaLowerBound,
        CheckKind::EtaStability,
        CheckKind::Projection,
        CheckKind::NonlinearApprox,
        CheckKind::ApproxStability,
    ];

    pub fn group(self) -> SuiteGroup {
        match self {
            Self::AngularDistance | Self::TranslatedDistance => SuiteGroup::Geometry,
            Self::InverseNorm | Self::SingularChain | Self::VolumeRatio | Self::EtaLowerBound | Self::EtaStability => {
                SuiteGroup::Vandermonde
            }
            Self::Projection | Self::NonlinearApprox | Self::ApproxStability => SuiteGroup::Approximation,
        }
    }

    /// Batch size used by the full verification run.
    pub fn default_instances(self) -> usize {
        match self {
            Self::AngularDistance | Self::TranslatedDistance => 100_000,
            Self::InverseNorm | Self::SingularChain | Self::VolumeRatio => 500,
            Self::EtaLowerBound | Self::Projection => 10_000,
            Self::EtaStability | Self::ApproxStability => 1_000,
            Self::NonlinearApprox => 100,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::AngularDistance => "angular_distance",
            Self::TranslatedDistance => "translated_distance",
            Self::InverseNorm => "inverse_norm",
            Self::SingularChain => "singular_chain",
            Self::VolumeRatio => "volume_ratio",
            Self::EtaLowerBound => "eta_lower_bound",
            Self::EtaStability => "eta_stability",
            Self::Projection => "projection",
            Self::NonlinearApprox => "nonlinear_approx",
            Self::ApproxStability => "approx_stability",
        }
    }

    /// Kinds belonging to `group`.
    pub fn in_group(group: SuiteGroup) -> impl Iterator<Item = CheckKind> {
        Self::ALL.into_iter().filter(move |k| k.group() == group)
    }
}

fn disk(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    Complex64::from_polar(radius * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..TAU))
}

fn spread_nodes(rng: &mut ChaCha8Rng, k: usize, radius: f64, sep: f64) -> Vec<Complex64> {
    loop {
        let nodes: Vec<_> = (0..k).map(|_| disk(rng, radius)).collect();
        if min_node_separation(&nodes) >= sep {
            return nodes;
        }
    }
}

fn amplitude(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(rng.gen_range(1.0..2.0), rng.gen_range(0.0..TAU))
}

fn angular_pair(rng: &mut ChaCha8Rng) -> [f64; 2] {
    let a = rng.gen_range(0.0..=PI / 3.0);
    [a, rng.gen_range(a + PI / 3.0..=2.0 * PI / 3.0)]
}

/// Random nodes with separation at least this are used by the conditioning
/// checks.
pub const NODE_SEPARATION: f64 = 0.05;

/// Draws one instance of `kind` from `seed` and evaluates it.
pub fn random_instance(kind: CheckKind, seed: u64) -> Result<BoundReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rng = &mut rng;
    match kind {
        CheckKind::AngularDistance => {
            Ok(check_distance_preservation(angular_pair(rng), angular_pair(rng), DistanceBranch::Angular))
        }
        CheckKind::TranslatedDistance => {
            let mut point = || [rng.gen_range(0.0..=PI / 2.0), rng.gen_range(PI / 2.0..=PI)];
            let p = point();
            Ok(check_distance_preservation(p, point(), DistanceBranch::Translated))
        }
        CheckKind::InverseNorm => {
            let k = rng.gen_range(2..=6);
            check_inverse_norm(&spread_nodes(rng, k, 2.0, NODE_SEPARATION))
        }
        CheckKind::SingularChain => {
            let k = rng.gen_range(1..=5);
            let s = rng.gen_range(k - 1..=10);
            check_singular_chain(&spread_nodes(rng, k, 2.0, NODE_SEPARATION), s)
        }
        CheckKind::VolumeRatio => {
            let k = rng.gen_range(1..=6);
            check_volume_ratio(&spread_nodes(rng, k, 2.0, NODE_SEPARATION))
        }
        CheckKind::EtaLowerBound => {
            let k = rng.gen_range(1..=5);
            let z = spread_nodes(rng, k + 1, 2.0, 1e-6);
            let zhat: Vec<_> = if rng.gen_bool(0.5) {
                (0..k).map(|_| disk(rng, 2.0)).collect()
            } else {
                (0..k).map(|j| (z[j] + z[j + 1]) / 2.0).collect()
            };
            check_eta_lower_bound(&z, &zhat)
        }
        CheckKind::EtaStability => {
            let k = rng.gen_range(1..=5);
            let z = spread_nodes(rng, k, 2.0, 0.2);
            let sep = min_node_separation(&z).min(2.0);
            let radius = sep * 10f64.powf(rng.gen_range(-6.0..-0.5));
            let mut zhat: Vec<_> = z.iter().map(|&w| w + disk(rng, radius)).collect();
            let shift = rng.gen_range(0..k);
            zhat.rotate_left(shift);
            let eps = eta(&z, &zhat).into_iter().fold(0.0, f64::max) * rng.gen_range(1.0001..2.0) + 1e-300;
            check_eta_stability(&z, &zhat, eps)
        }
        CheckKind::Projection => {
            let k = rng.gen_range(1..=4);
            let root3 = 3f64.sqrt();
            let zhat: Vec<_> = (0..k).map(|_| disk(rng, root3)).collect();
            check_projection_lower_bound(&zhat, disk(rng, root3))
        }
        CheckKind::NonlinearApprox => {
            let k = rng.gen_range(1..=2);
            let d = if rng.gen_bool(0.5) { 1.0 } else { 2.0 };
            let dhat = if rng.gen_bool(0.5) { d } else { 2.0 };
            let z = spread_nodes(rng, k + 1, d, 1e-3);
            let amps: Vec<_> = (0..=k).map(|_| amplitude(rng)).collect();
            check_nonlinear_approx_lower_bound(&z, &amps, d, dhat)
        }
        CheckKind::ApproxStability => {
            let k = rng.gen_range(1..=4);
            let z = spread_nodes(rng, k, 1.0, 1e-3);
            let a: Vec<_> = (0..k).map(|_| amplitude(rng)).collect();
            let scale = 10f64.powf(rng.gen_range(-8.0..0.0));
            let zhat: Vec<_> = z.iter().map(|&w| w + disk(rng, scale)).collect();
            let ahat: Vec<_> = a.iter().map(|&w| w + disk(rng, scale)).collect();
            let order = 2 * k - 1;
            let diff: Vec<Complex64> = vandermonde_matrix(order, &zhat)
                .matvec(&ahat)
                .into_iter()
                .zip(vandermonde_matrix(order, &z).matvec(&a))
                .map(|(x, y)| x - y)
                .collect();
            let sigma = norm2(&diff) * rng.gen_range(1.0001..1.5) + 1e-300;
            check_approx_stability(&z, &zhat, &a, &ahat, sigma)
        }
    }
}

/// Tally of a batch of reports.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BatchSummary {
    pub held: usize,
    pub violated: usize,
    pub not_applicable: usize,
    pub errors: usize,
}

impl BatchSummary {
    pub fn record(&mut self, report: &Result<BoundReport>) {
        use super::Verdict;
        match report {
            Ok(r) => match r.verdict {
                Verdict::Holds => self.held += 1,
                Verdict::Violated => self.violated += 1,
                Verdict::NotApplicable => self.not_applicable += 1,
            },
            Err(_) => self.errors += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.held + self.violated + self.not_applicable + self.errors
    }

    pub fn passed(&self) -> bool {
        self.violated == 0 && self.errors == 0
    }
}

/// Seed of instance `index` in a batch of `kind` drawn from `base`.
pub fn instance_seed(base: u64, kind: CheckKind, index: u64) -> u64 {
    let tag = CheckKind::ALL.iter().position(|&k| k == kind).unwrap_or(0) as u64;
    let mut x = base ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Runs `count` seeded instances of `kind` sequentially.
pub fn run_batch(kind: CheckKind, base_seed: u64, count: usize) -> (BatchSummary, Vec<BoundReport>) {
    let mut summary = BatchSummary::default();
    let mut failures = Vec::new();
    for i in 0..count as u64 {
        let report = random_instance(kind, instance_seed(base_seed, kind, i));
        summary.record(&report);
        if let Ok(r) = report {
            if !r.satisfied() {
                failures.push(r);
            }
        }
    }
    (summary, failures)
}
