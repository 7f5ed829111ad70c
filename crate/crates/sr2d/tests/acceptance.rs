//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sr2d::harness::{fit_boundary_slope, run_phase_transition, BatchSummary, ExperimentConfig, Mode};
use sr2d_core::assign;
use sr2d_core::combine::{combine_minus, combine_plus, stride_for};
use sr2d_core::detect::{detect_count_fixed_s, detection_threshold, DetectionParams};
use sr2d_core::model::{add_noise, forward_measure, l1_distance, translate, NoiseSpec, Region, Source, SourceConfiguration};
use sr2d_core::recover::{recover_sources, RecoveryOptions};
use sr2d_core::spectral::{decompose, hankel, signal_singular_value_lower_bound};
use sr2d_core::theory::limits::detection_noise_ceiling;
use sr2d_core::theory::suite::{run_batch, CheckKind, SuiteGroup};
use sr2d_core::Complex64;

const SEED: u64 = 1;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn random_sources(rng: &mut ChaCha8Rng, n: usize, min_sep: f64, region: Region) -> SourceConfiguration {
    loop {
        let sources = (0..n)
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

fn slope_criterion(mode: Mode, bands: [(usize, f64, f64); 2]) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (n, lo, hi) in bands {
        let cfg = ExperimentConfig { n_true: n, trials: 2000, seed: SEED, ..ExperimentConfig::default() };
        let batch = match run_phase_transition(&cfg, mode) {
            Ok(b) => b,
            Err(e) => return outcome(false, e),
        };
        let summary = BatchSummary::of(&batch, mode, cfg.omega);
        match fit_boundary_slope(&batch.records) {
            Ok(fit) => {
                let inside = fit.slope >= lo && fit.slope <= hi;
                ok &= inside && summary.above_threshold_failures == 0;
                parts.push(format!(
                    "n={n} slope {:.3} in [{lo}, {hi}]: {inside}, success {:.1}%, above-threshold failures {}/{}",
                    fit.slope,
                    100.0 * summary.success_rate(),
                    summary.above_threshold_failures,
                    summary.above_threshold
                ));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("n={n} fit failed: {e}"));
            }
        }
    }
    outcome(ok, parts.join("; "))
}

fn threshold_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 3);
    let region = Region::new([0.0, 0.0], [FRAC_PI_2, FRAC_PI_2]);
    let mut violations = 0;
    let mut checked = 0;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=4);
        let s = rng.gen_range(n..=4);
        let cfg = random_sources(&mut rng, n, 0.0, region);
        let sigma = 10f64.powf(rng.gen_range(-8.0..=-1.0));
        let grid = add_noise(&forward_measure(&cfg, 10), &NoiseSpec::new(sigma, rng.gen()).unwrap());
        let d = detect_count_fixed_s(&grid, &DetectionParams::new(sigma), s).unwrap();
        let bound = detection_threshold(s, sigma);
        for &v in &d.singular_values[n..] {
            checked += 1;
            violations += (v >= bound) as usize;
        }
    }
    outcome(violations == 0, format!("{violations} of {checked} trailing singular values at or above 4^(s+1)σ/3"))
}

fn detection_guarantee() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 4);
    let mut failures = 0;
    let (mut lo, mut hi) = (f64::INFINITY, 0f64);
    for _ in 0..500 {
        let n = rng.gen_range(2..=3);
        let s = n;
        let cutoff = 2 * s * rng.gen_range(1..=3);
        let half = s as f64 * PI / (6.0 * cutoff as f64);
        let cfg = random_sources(&mut rng, n, 0.2 * half, Region::new([-half, -half], [half, half]));
        let ceiling = detection_noise_ceiling(n, s, cutoff as f64, cfg.min_separation(), cfg.min_amplitude()).unwrap();
        let sigma = ceiling * rng.gen_range(0.01..0.99);
        lo = lo.min(sigma);
        hi = hi.max(sigma);
        let grid = add_noise(&forward_measure(&cfg, cutoff), &NoiseSpec::new(sigma, rng.gen()).unwrap());
        let params = DetectionParams::new(sigma).with_translation([0.0, s as f64 * PI / cutoff as f64]);
        failures += (detect_count_fixed_s(&grid, &params, s).unwrap().count != n) as usize;
    }
    outcome(failures == 0, format!("{failures} of 500 instances miscounted, σ in [{lo:.1e}, {hi:.1e}]"))
}

fn singular_value_lower_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 5);
    let mut violations = 0;
    for _ in 0..200 {
        let n = rng.gen_range(2..=4);
        let s = rng.gen_range(n..=n + 1);
        let cutoff = 2 * s * rng.gen_range(1..=2);
        let half = s as f64 * PI / (6.0 * cutoff as f64);
        let cfg = random_sources(&mut rng, n, 0.1 * half, Region::new([-half, -half], [half, half]));
        let x = translate(&forward_measure(&cfg, cutoff), [0.0, s as f64 * PI / cutoff as f64]);
        let dec = decompose(&hankel(&combine_plus(&x, s, stride_for(cutoff, s)).unwrap())).unwrap();
        let bound = signal_singular_value_lower_bound(n, cutoff, s, cfg.min_separation(), cfg.min_amplitude());
        violations += (dec.singular_values()[n - 1] < bound) as usize;
    }
    outcome(violations == 0, format!("{violations} of 200 configurations below the bound"))
}

fn binomial_identity_worst() -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let n = rng.gen_range(1..=4);
        let cfg = random_sources(&mut rng, n, 0.0, Region::new([0.0, 0.0], [PI, PI]));
        let x = forward_measure(&cfg, 12);
        let mass: f64 = cfg.amplitudes().iter().map(|a| a.norm()).sum();
        let s = rng.gen_range(1..=6);
        let r = stride_for(12, s);
        let plus = combine_plus(&x, s, r).unwrap();
        let minus = combine_minus(&x, s).unwrap();
        for t in 0..=2 * s {
            let mut p = Complex64::new(0.0, 0.0);
            let mut m = Complex64::new(0.0, 0.0);
            for src in cfg.sources() {
                let [a, b] = src.location;
                let rf = r as f64;
                p += src.amplitude * (Complex64::from_polar(1.0, rf * a) + Complex64::from_polar(1.0, rf * b)).powu(t as u32);
                m += src.amplitude * (Complex64::from_polar(1.0, a) - Complex64::from_polar(1.0, b)).powu(t as u32);
            }
            let scale = mass * 2f64.powi(t as i32);
            worst = worst.max((plus.values()[t] - p).norm() / scale).max((minus.values()[t] - m).norm() / scale);
        }
    }
    worst
}

fn suite_group(groups: &[SuiteGroup]) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for kind in CheckKind::ALL.into_iter().filter(|k| groups.contains(&k.group())) {
        let (summary, failures) = run_batch(kind, SEED, kind.default_instances());
        ok &= summary.passed();
        parts.push(format!(
            "{} {}/{} held ({} n/a, {} violated, {} errors)",
            kind.name(),
            summary.held,
            summary.total(),
            summary.not_applicable,
            summary.violated,
            summary.errors
        ));
        if let Some(f) = failures.first() {
            parts.push(format!("first violation: {}", f.instance));
        }
    }
    outcome(ok, parts.join("; "))
}

fn geometry() -> Outcome {
    let suite = suite_group(&[SuiteGroup::Geometry]);
    let worst = binomial_identity_worst();
    let ok = suite.passed && worst <= 1e-12;
    outcome(ok, format!("{}; binomial identity worst relative error {worst:.2e}", suite.detail))
}

fn noiseless_end_to_end() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 8);
    let region = Region::new([0.0, 0.0], [FRAC_PI_2, FRAC_PI_2]);
    let options = RecoveryOptions::default();
    let mut hits = 0;
    for _ in 0..100 {
        let n = rng.gen_range(1..=4);
        let cfg = random_sources(&mut rng, n, 0.5, region);
        let grid = forward_measure(&cfg, 10);
        let Ok(rec) = recover_sources(&grid, n, [0.0, FRAC_PI_2], &options) else { continue };
        let all = cfg.locations().iter().all(|&y| {
            rec.locations.iter().map(|&r| l1_distance(r, y)).fold(f64::INFINITY, f64::min) <= 0.02
        });
        hits += all as usize;
    }
    outcome(hits >= 99, format!("{hits}/100 trials recovered every source within 0.02"))
}

fn exhaustive_minimum(costs: &[Vec<f64>]) -> f64 {
    fn go(costs: &[Vec<f64>], row: usize, used: &mut [bool], acc: f64, best: &mut f64) {
        if row == costs.len() {
            *best = best.min(acc);
            return;
        }
        for j in 0..costs.len() {
            if !used[j] {
                used[j] = true;
                go(costs, row + 1, used, acc + costs[row][j], best);
                used[j] = false;
            }
        }
    }
    let mut best = f64::INFINITY;
    go(costs, 0, &mut vec![false; costs.len()], 0.0, &mut best);
    best
}

fn pairing_optimality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    let mut mismatches = 0;
    for i in 0..1000 {
        let n = 1 + i % 7;
        let integer = i % 2 == 0;
        let costs: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| if integer { rng.gen_range(0..5) as f64 } else { rng.gen_range(0.0..4.0) })
                    .collect()
            })
            .collect();
        let a = assign::solve(&costs);
        let brute = exhaustive_minimum(&costs);
        let exact = if integer { a.cost == brute } else { (a.cost - brute).abs() <= 1e-12 * brute.max(1.0) };
        mismatches += !exact as usize;
    }
    outcome(mismatches == 0, format!("{mismatches} of 1000 instances differ from the exhaustive minimum"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 number-detection slope", || slope_criterion(Mode::Number, [(3, 3.3, 4.7), (4, 5.0, 7.0)])),
        ("2 location-recovery slope", || slope_criterion(Mode::Location, [(3, 4.2, 5.8), (4, 5.8, 8.2)])),
        ("3 threshold soundness", threshold_soundness),
        ("4 detection guarantee", detection_guarantee),
        ("5 signal singular value bound", singular_value_lower_bound),
        ("6 geometry suite", geometry),
        ("7 vandermonde and approximation suites", || {
            suite_group(&[SuiteGroup::Vandermonde, SuiteGroup::Approximation])
        }),
        ("8 noiseless end-to-end recovery", noiseless_end_to_end),
        ("9 pairing optimality", pairing_optimality),
    ];
    let mut all = true;
    for (name, run) in criteria {
        let start = Instant::now();
        let o = run();
        all &= o.passed;
        println!(
            "{} criterion {name} ({:.1}s): {}",
            if o.passed { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            o.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
