use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sr2d_core::combine::{combine_minus, combine_plus, stride_for};
use sr2d_core::detect::{detect_count_fixed_s, detect_count_sweep, DetectionParams};
use sr2d_core::model::{add_noise, forward_measure, l1_distance, translate, NoiseSpec, Region, Source, SourceConfiguration};
use sr2d_core::recover::{recover_sources, RecoveryOptions};
use sr2d_core::spectral::{decompose, hankel, signal_singular_value_lower_bound};
use sr2d_core::Complex64;

fn random_config(rng: &mut ChaCha8Rng, n: usize, min_sep: f64, region: Region) -> SourceConfiguration {
    loop {
        let sources: Vec<Source> = (0..n)
            .map(|_| {
                let p = [
                    rng.gen_range(region.lower[0]..region.upper[0]),
                    rng.gen_range(region.lower[1]..region.upper[1]),
                ];
                Source::new(p, Complex64::from_polar(rng.gen_range(1.0..2.0), rng.gen_range(0.0..TAU)))
            })
            .collect();
        if let Ok(cfg) = SourceConfiguration::new(sources, region) {
            if cfg.len() < 2 || cfg.min_separation() >= min_sep {
                return cfg;
            }
        }
    }
}

#[test]
fn combined_values_equal_power_sums_at_every_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let n = rng.gen_range(1..=4);
        let cfg = random_config(&mut rng, n, 0.0, Region::new([0.0, 0.0], [PI, PI]));
        let x = forward_measure(&cfg, 16);
        let mass: f64 = cfg.amplitudes().iter().map(|a| a.norm()).sum();
        for s in 1..=8 {
            let r = stride_for(16, s);
            let plus = combine_plus(&x, s, r).unwrap();
            let minus = combine_minus(&x, s).unwrap();
            for t in 0..=2 * s {
                let (mut p, mut m) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
                for src in cfg.sources() {
                    let a = Complex64::from_polar(1.0, src.location[0]);
                    let b = Complex64::from_polar(1.0, src.location[1]);
                    let ar = Complex64::from_polar(1.0, r as f64 * src.location[0]);
                    let br = Complex64::from_polar(1.0, r as f64 * src.location[1]);
                    p += src.amplitude * (ar + br).powu(t as u32);
                    m += src.amplitude * (a - b).powu(t as u32);
                }
                let tol = 1e-12 * mass * 2f64.powi(t as i32);
                assert!((plus.values()[t] - p).norm() <= tol);
                assert!((minus.values()[t] - m).norm() <= tol);
            }
        }
    }
}

#[test]
fn noiseless_recovery_of_separated_sources() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let options = RecoveryOptions::default();
    for n in 1..=3 {
        for _ in 0..3 {
            let cfg = random_config(&mut rng, n, 0.6, Region::new([0.0, 0.0], [FRAC_PI_2, FRAC_PI_2]));
            let x = forward_measure(&cfg, 10);
            let rec = recover_sources(&x, n, [0.0, FRAC_PI_2], &options).unwrap();
            for y in cfg.locations() {
                let e = rec.locations.iter().map(|&r| l1_distance(r, y)).fold(f64::INFINITY, f64::min);
                assert!(e < 0.02, "{y:?} missed by {e}: {:?}", rec.locations);
            }
        }
    }
}

#[test]
fn detection_counts_separated_sources_through_noise() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for n in 1..=3 {
        let cfg = random_config(&mut rng, n, 0.5, Region::new([0.0, 0.0], [FRAC_PI_2, FRAC_PI_2]));
        let sigma = 1e-9;
        let x = add_noise(&forward_measure(&cfg, 10), &NoiseSpec::new(sigma, 3).unwrap());
        assert_eq!(detect_count_sweep(&x, &DetectionParams::new(sigma)).unwrap().count, n);
    }
}

#[test]
fn signal_singular_value_exceeds_its_lower_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..40 {
        let n = rng.gen_range(1..=3);
        let s = n;
        let cutoff = 2 * s * rng.gen_range(1..=3);
        let half = s as f64 * PI / (6.0 * cutoff as f64);
        let cfg = random_config(&mut rng, n, 0.0, Region::new([-half, -half], [half, half]));
        let v = [0.0, s as f64 * PI / cutoff as f64];
        let x = translate(&forward_measure(&cfg, cutoff), v);
        let dec = decompose(&hankel(&combine_plus(&x, s, stride_for(cutoff, s)).unwrap())).unwrap();
        let d_min = if n == 1 { 1.0 } else { cfg.min_separation() };
        let bound = signal_singular_value_lower_bound(n, cutoff, s, d_min, cfg.min_amplitude());
        assert!(dec.singular_values()[n - 1] >= bound * (1.0 - 1e-9), "{:?} < {bound}", dec.singular_values());
    }
}

#[test]
fn sound_threshold_never_overcounts() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..100 {
        let n = rng.gen_range(1..=3);
        let cfg = random_config(&mut rng, n, 0.0, Region::new([0.0, 0.0], [FRAC_PI_2, FRAC_PI_2]));
        let sigma = 10f64.powf(rng.gen_range(-8.0..-1.0));
        let x = add_noise(&forward_measure(&cfg, 10), &NoiseSpec::new(sigma, rng.gen()).unwrap());
        for s in n..=4 {
            assert!(detect_count_fixed_s(&x, &DetectionParams::new(sigma), s).unwrap().count <= n);
        }
    }
}
