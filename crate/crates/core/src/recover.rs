//! Location recovery: MUSIC on both combined sequences, root pairing and
//! conversion of paired roots back to 2-D locations.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::assign;
use crate::combine::{combine_minus, combine_plus};
use crate::linalg::{least_squares, CMatrix};
use crate::model::{translate, FourierGrid};
use crate::music::{music_image, locate_peaks, Peak, TestGrid};
use crate::{Error, Point, Result};

const DEGENERATE_MODULUS: f64 = 1e-12;

/// Matched `(d̂, ĝ)` roots and the total matching cost.
#[derive(Clone, Debug, PartialEq)]
pub struct PairedRoots {
    pub pairs: Vec<(Complex64, Complex64)>,
    pub matching_cost: f64,
}

/// `||d + g| − 2| + ||d − g| − 2|`, zero for roots of a single source.
pub fn pair_cost(d: Complex64, g: Complex64) -> f64 {
    ((d + g).norm() - 2.0).abs() + ((d - g).norm() - 2.0).abs()
}

/// Pairs each `d̂` with a distinct `ĝ` minimising the summed [`pair_cost`].
pub fn pair_match(d_roots: &[Complex64], g_roots: &[Complex64]) -> Result<PairedRoots> {
    if d_roots.len() != g_roots.len() {
        return Err(Error::InvalidArgument(alloc::format!(
            "cannot pair {} d-roots with {} g-roots",
            d_roots.len(),
            g_roots.len()
        )));
    }
    let costs: Vec<Vec<f64>> = d_roots
        .iter()
        .map(|&d| g_roots.iter().map(|&g| pair_cost(d, g)).collect())
        .collect();
    let a = assign::solve(&costs);
    let pairs = a.rows_to_cols.iter().enumerate().map(|(i, &j)| (d_roots[i], g_roots[j])).collect();
    Ok(PairedRoots { pairs, matching_cost: a.cost })
}

/// Argument of `z` in `[−π/2, 3π/2)`.
fn argument(z: Complex64) -> f64 {
    let a = z.arg();
    if a < -FRAC_PI_2 {
        a + TAU
    } else {
        a
    }
}

/// Unit-circle projections of `(d̂ ± ĝ)/2` give `e^{ix̂₁}` and `e^{ix̂₂}`;
/// returns `x̂ − v` for each pair.
///
/// Angles are read in `[−π/2, 3π/2)`, which is unambiguous for translated
/// locations in `[0, π]²` with a margin of `π/2` on both sides.
pub fn roots_to_locations(pairs: &PairedRoots, v: Point) -> Result<Vec<Point>> {
    pairs
        .pairs
        .iter()
        .enumerate()
        .map(|(index, &(d, g))| {
            let first = (d + g) / 2.0;
            let second = (d - g) / 2.0;
            if first.norm() < DEGENERATE_MODULUS || second.norm() < DEGENERATE_MODULUS {
                return Err(Error::DegeneratePair { index });
            }
            Ok([argument(first) - v[0], argument(second) - v[1]])
        })
        .collect()
}

/// Knobs for [`recover_sources`].
#[derive(Clone, Debug, PartialEq)]
pub struct RecoveryOptions {
    pub test_grid: TestGrid,
    /// Minimum distance between accepted MUSIC peaks in the `d`-plane.
    pub min_separation: f64,
    pub estimate_amplitudes: bool,
}

impl RecoveryOptions {
    pub fn new(test_grid: TestGrid) -> Self {
        let min_separation = 2.0 * test_grid.step();
        Self { test_grid, min_separation, estimate_amplitudes: false }
    }
}

impl Default for RecoveryOptions {
    /// Disk of radius 2 at step `0.005`, peaks at least `0.01` apart.
    fn default() -> Self {
        Self::new(TestGrid::default_disk())
    }
}

/// Least-squares amplitude fit.
#[derive(Clone, Debug, PartialEq)]
pub struct AmplitudeFit {
    pub amplitudes: Vec<Complex64>,
    pub residual_norm: f64,
    /// `‖A⁺‖₂`; amplitude errors are at most this times the data error norm.
    pub pseudo_inverse_norm: f64,
}

/// Everything recovered plus the intermediate roots.
#[derive(Clone, Debug, PartialEq)]
pub struct RecoveryResult {
    pub locations: Vec<Point>,
    pub amplitudes: Option<AmplitudeFit>,
    pub d_peaks: Vec<Peak>,
    pub g_peaks: Vec<Peak>,
    pub paired: PairedRoots,
}

/// Full pipeline at `s = ⌊Ω/2⌋`: translate, combine both ways, MUSIC each,
/// pair, convert.
pub fn recover_sources(grid: &FourierGrid, n: usize, v: Point, options: &RecoveryOptions) -> Result<RecoveryResult> {
    let cutoff = grid.cutoff();
    if n == 0 {
        return Err(Error::InvalidArgument("source number must be positive".into()));
    }
    if cutoff < 2 * n + 1 {
        return Err(Error::InvalidArgument(alloc::format!(
            "cutoff {cutoff} is too small for {n} sources (need at least {})",
            2 * n + 1
        )));
    }
    let s = cutoff / 2;
    let x = translate(grid, v);
    let d_image = music_image(&combine_plus(&x, s, 1)?, n, &options.test_grid)?;
    let d_peaks = locate_peaks(&d_image, n, options.min_separation)?;
    drop(d_image);
    let g_image = music_image(&combine_minus(&x, s)?, n, &options.test_grid)?;
    let g_peaks = locate_peaks(&g_image, n, options.min_separation)?;
    drop(g_image);
    let d_roots: Vec<Complex64> = d_peaks.iter().map(|p| p.location).collect();
    let g_roots: Vec<Complex64> = g_peaks.iter().map(|p| p.location).collect();
    let paired = pair_match(&d_roots, &g_roots)?;
    let locations = roots_to_locations(&paired, v)?;
    let amplitudes = if options.estimate_amplitudes {
        Some(estimate_amplitudes(grid, &locations)?)
    } else {
        None
    };
    Ok(RecoveryResult { locations, amplitudes, d_peaks, g_peaks, paired })
}

/// Columns `e^{i y_j·ω}` over the lattice, row-major in `ω`.
pub fn measurement_matrix(cutoff: usize, locations: &[Point]) -> CMatrix {
    let side = cutoff + 1;
    CMatrix::from_fn(side * side, locations.len(), |k, j| {
        let (w1, w2) = ((k / side) as f64, (k % side) as f64);
        Complex64::from_polar(1.0, locations[j][0] * w1 + locations[j][1] * w2)
    })
}

/// Fits amplitudes at known locations by least squares.
pub fn estimate_amplitudes(grid: &FourierGrid, locations: &[Point]) -> Result<AmplitudeFit> {
    if locations.is_empty() {
        return Err(Error::InvalidArgument("no locations to fit".into()));
    }
    let a = measurement_matrix(grid.cutoff(), locations);
    let ls = least_squares(&a, grid.values(), 1e-12)?;
    Ok(AmplitudeFit {
        amplitudes: ls.solution,
        residual_norm: ls.residual_norm,
        pseudo_inverse_norm: ls.pseudo_inverse_norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{add_noise, forward_measure, l1_distance, NoiseSpec, Source, SourceConfiguration};
    use alloc::vec;
    use core::f64::consts::PI;
    use proptest::prelude::*;

    fn roots(x: Point) -> (Complex64, Complex64) {
        let a = Complex64::from_polar(1.0, x[0]);
        let b = Complex64::from_polar(1.0, x[1]);
        (a + b, a - b)
    }

    fn config(points: &[Point]) -> SourceConfiguration {
        SourceConfiguration::in_default_region(
            points
                .iter()
                .enumerate()
                .map(|(j, &p)| Source::new(p, Complex64::from_polar(1.0 + 0.2 * j as f64, j as f64)))
                .collect(),
        )
        .unwrap()
    }

    fn coarse() -> RecoveryOptions {
        RecoveryOptions::new(TestGrid::new(2.0, 0.02).unwrap())
    }

    #[test]
    fn exact_roots_cost_nothing() {
        let (d, g) = roots([0.4, 2.2]);
        assert!(pair_cost(d, g) < 1e-15);
        let single = pair_match(&[d], &[g]).unwrap();
        assert_eq!(single.pairs, vec![(d, g)]);
    }

    #[test]
    fn pairing_recovers_shuffled_roots() {
        let xs = [[0.1, 1.7], [0.9, 2.5], [1.4, 1.9]];
        let r: Vec<_> = xs.iter().map(|&x| roots(x)).collect();
        let d: Vec<_> = r.iter().map(|p| p.0).collect();
        let g = vec![r[2].1, r[0].1, r[1].1];
        let paired = pair_match(&d, &g).unwrap();
        assert!(paired.matching_cost < 1e-14);
        for (k, &(dd, gg)) in paired.pairs.iter().enumerate() {
            assert_eq!((dd, gg), r[k]);
        }
        assert!(pair_match(&d, &g[..2]).is_err());
    }

    #[test]
    fn exact_inversion_examples() {
        let (d, g) = roots([PI / 4.0, 3.0 * PI / 4.0]);
        let p = PairedRoots { pairs: vec![(d, g)], matching_cost: 0.0 };
        let loc = roots_to_locations(&p, [0.0, 0.0]).unwrap()[0];
        assert!((loc[0] - PI / 4.0).abs() < 1e-14 && (loc[1] - 3.0 * PI / 4.0).abs() < 1e-14);
        let y = [0.3, 1.2];
        let (d, g) = roots([y[0], y[1] + PI / 2.0]);
        let p = PairedRoots { pairs: vec![(d, g)], matching_cost: 0.0 };
        let loc = roots_to_locations(&p, [0.0, PI / 2.0]).unwrap()[0];
        assert!(l1_distance(loc, y) < 1e-14);
    }

    #[test]
    fn perturbed_roots_stay_close() {
        let x = [0.7, 2.1];
        let (d, g) = roots(x);
        for k in 0..16 {
            let eps = Complex64::from_polar(1e-6, k as f64 * PI / 8.0);
            let p = PairedRoots { pairs: vec![(d + eps, g + eps)], matching_cost: 0.0 };
            assert!(l1_distance(roots_to_locations(&p, [0.0, 0.0]).unwrap()[0], x) < 1e-5);
        }
    }

    #[test]
    fn degenerate_pairs_are_reported() {
        let p = PairedRoots {
            pairs: vec![(Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0))],
            matching_cost: 0.0,
        };
        assert!(matches!(roots_to_locations(&p, [0.0, 0.0]), Err(Error::DegeneratePair { index: 0 })));
    }

    #[test]
    fn branch_handles_angles_just_below_zero() {
        let x = [-0.01, 1.6];
        let (d, g) = roots(x);
        let p = PairedRoots { pairs: vec![(d, g)], matching_cost: 0.0 };
        assert!(l1_distance(roots_to_locations(&p, [0.0, 0.0]).unwrap()[0], x) < 1e-14);
    }

    #[test]
    fn noiseless_single_source() {
        let cfg = config(&[[0.3, 0.9]]);
        let grid = forward_measure(&cfg, 10);
        let r = recover_sources(&grid, 1, [0.0, PI / 2.0], &RecoveryOptions::default()).unwrap();
        assert!(l1_distance(r.locations[0], [0.3, 0.9]) < 0.01);
    }

    #[test]
    fn noiseless_two_sources() {
        let pts = [[0.3, 0.4], [0.8, 0.7]];
        let grid = forward_measure(&config(&pts), 10);
        let r = recover_sources(&grid, 2, [0.0, PI / 2.0], &coarse()).unwrap();
        for p in pts {
            assert!(r.locations.iter().any(|&q| l1_distance(p, q) < 0.02));
        }
    }

    #[test]
    fn relabelling_sources_does_not_change_output() {
        let a = [[0.2, 1.1], [1.0, 0.3], [0.9, 1.3]];
        let b = [a[2], a[0], a[1]];
        let amps = |pts: &[Point]| -> SourceConfiguration {
            SourceConfiguration::in_default_region(
                pts.iter().map(|&p| Source::new(p, Complex64::new(1.0 + p[0], p[1]))).collect(),
            )
            .unwrap()
        };
        let ga = forward_measure(&amps(&a), 10);
        let gb = forward_measure(&amps(&b), 10);
        let ra = recover_sources(&ga, 3, [0.0, PI / 2.0], &coarse()).unwrap();
        let rb = recover_sources(&gb, 3, [0.0, PI / 2.0], &coarse()).unwrap();
        let mut la = ra.locations.clone();
        let mut lb = rb.locations.clone();
        la.sort_by(|x, y| x.partial_cmp(y).unwrap());
        lb.sort_by(|x, y| x.partial_cmp(y).unwrap());
        for (x, y) in la.iter().zip(&lb) {
            assert!(l1_distance(*x, *y) < 1e-9);
        }
    }

    #[test]
    fn preconditions() {
        let grid = FourierGrid::zeros(10, 0.0).unwrap();
        assert!(recover_sources(&grid, 0, [0.0, 0.0], &coarse()).is_err());
        assert!(recover_sources(&grid, 5, [0.0, 0.0], &coarse()).is_err());
    }

    #[test]
    fn amplitude_fit_recovers_truth() {
        let cfg = config(&[[0.2, 0.3], [1.1, 0.9], [0.5, 1.4]]);
        let grid = forward_measure(&cfg, 10);
        let fit = estimate_amplitudes(&grid, &cfg.locations()).unwrap();
        for (got, want) in fit.amplitudes.iter().zip(cfg.amplitudes()) {
            assert!((got - want).norm() < 1e-10);
        }
        assert!(fit.residual_norm < 1e-10);
    }

    #[test]
    fn constant_grid_amplitude() {
        let c = Complex64::new(0.4, -2.0);
        let grid = FourierGrid::new(4, vec![c; 25], 0.0).unwrap();
        let fit = estimate_amplitudes(&grid, &[[0.0, 0.0]]).unwrap();
        assert!((fit.amplitudes[0] - c).norm() < 1e-14);
    }

    #[test]
    fn coincident_locations_are_rank_deficient() {
        let grid = FourierGrid::zeros(4, 0.0).unwrap();
        assert!(matches!(
            estimate_amplitudes(&grid, &[[0.3, 0.3], [0.3, 0.3]]),
            Err(Error::Linalg(crate::LinalgError::RankDeficient { .. }))
        ));
    }

    #[test]
    fn amplitude_error_within_conditioning_bound() {
        let cfg = config(&[[0.2, 0.3], [0.5, 0.4]]);
        let clean = forward_measure(&cfg, 10);
        for seed in 0..20 {
            let noisy = add_noise(&clean, &NoiseSpec::new(1e-3, seed).unwrap());
            let fit = estimate_amplitudes(&noisy, &cfg.locations()).unwrap();
            let data_err = crate::linalg::norm2(
                &noisy.values().iter().zip(clean.values()).map(|(a, b)| a - b).collect::<Vec<_>>(),
            );
            let amp_err = crate::linalg::norm2(
                &fit.amplitudes.iter().zip(cfg.amplitudes()).map(|(a, b)| a - b).collect::<Vec<_>>(),
            );
            assert!(amp_err <= fit.pseudo_inverse_norm * data_err * (1.0 + 1e-9));
            // σ·√((Ω+1)²) bounds the data error norm
            assert!(amp_err <= fit.pseudo_inverse_norm * 1e-3 * 11.0);
        }
    }

    proptest! {
        #[test]
        fn exact_root_identity(x1 in 0.0..PI, x2 in 0.0..PI) {
            prop_assume!((x1 - x2).abs() > 1e-6 && x1 + x2 > 1e-6 && x1 + x2 < 2.0 * PI - 1e-6);
            let (d, g) = roots([x1, x2]);
            let p = PairedRoots { pairs: vec![(d, g)], matching_cost: 0.0 };
            let loc = roots_to_locations(&p, [0.0, 0.0]).unwrap()[0];
            prop_assert!(l1_distance(loc, [x1, x2]) < 1e-13);
        }
    }
}
