//! Lower bounds and stability for approximating a sum of Vandermonde vectors
//! by a shorter one.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::{describe, eta, max_modulus, min_node_separation, phi, vandermonde_matrix, BoundReport, Relation};
use crate::linalg::{least_squares, norm2};
use crate::{Error, Result};

/// Condition number above which a projection instance is skipped.
pub const MAX_CONDITION: f64 = 1e12;

/// `min_a ‖A a − φ_k(x)‖₂ ≥ |Π(x − ẑ_j)| / (1 + d̂)^k` with `A = (φ_k(ẑ_j))`
/// and `d̂ = max |ẑ_j|`.
pub fn check_projection_lower_bound(zhat: &[Complex64], x: Complex64) -> Result<BoundReport> {
    let k = zhat.len();
    if k == 0 {
        return Err(Error::InvalidArgument("need at least one node".into()));
    }
    let instance = describe(&[("zhat", zhat), ("x", &[x])]);
    if k >= 2 && min_node_separation(zhat) == 0.0 {
        return Err(Error::IllPosed("coincident nodes".into()));
    }
    let target = phi(k, x);
    let fit = match least_squares(&vandermonde_matrix(k, zhat), &target, 1.0 / MAX_CONDITION) {
        Ok(fit) => fit,
        Err(crate::LinalgError::RankDeficient { .. }) => {
            return Ok(BoundReport::not_applicable("projection_lower_bound", instance))
        }
        Err(e) => return Err(e.into()),
    };
    let dhat = max_modulus(zhat);
    let product: f64 = zhat.iter().map(|&z| (x - z).norm()).product();
    let rhs = product / (1.0 + dhat).powi(k as i32);
    Ok(BoundReport::evaluate("projection_lower_bound", fit.residual_norm, rhs, Relation::AtLeast, instance)
        .with_detail("condition_number", fit.condition_number))
}

/// Distance from `b` to the span of `cols`, by twice-iterated modified
/// Gram–Schmidt. Columns that are numerically dependent on earlier ones are
/// dropped.
pub fn residual_to_span(cols: &[Vec<Complex64>], b: &[Complex64]) -> f64 {
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(cols.len());
    let project_out = |v: &mut Vec<Complex64>, basis: &[Vec<Complex64>]| {
        for _ in 0..2 {
            for q in basis {
                let c: Complex64 = q.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= c * qi;
                }
            }
        }
    };
    for col in cols {
        let mut v = col.clone();
        let before = norm2(&v);
        project_out(&mut v, &basis);
        let after = norm2(&v);
        if after > 1e-12 * before && after > 0.0 {
            v.iter_mut().for_each(|x| *x /= after);
            basis.push(v);
        }
    }
    let mut r = b.to_vec();
    project_out(&mut r, &basis);
    norm2(&r)
}

/// `min_â ‖Â â − A a‖₂` with `Â = (φ_{2k}(ẑ_j))`, the target `A a` given.
fn fit_residual(order: usize, zhat: &[Complex64], target: &[Complex64]) -> f64 {
    let cols: Vec<_> = zhat.iter().map(|&z| phi(order, z)).collect();
    residual_to_span(&cols, target)
}

/// Lattice points of step `h` inside the closed disk of `radius` about `centre`,
/// clipped to the disk of `limit` about the origin.
fn disk_points(centre: Complex64, radius: f64, h: f64, limit: f64) -> Vec<Complex64> {
    let m = (radius / h).floor() as i64;
    let mut out = Vec::new();
    for i in -m..=m {
        for j in -m..=m {
            let p = centre + Complex64::new(i as f64 * h, j as f64 * h);
            if (p - centre).norm() <= radius + 1e-12 && p.norm() <= limit {
                out.push(p);
            }
        }
    }
    out
}

/// Searched minimum of `‖Â â − A a‖₂` over `k` estimate nodes in the disk of
/// radius `dhat`.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeSearch {
    pub minimum: f64,
    pub argmin: Vec<Complex64>,
    pub evaluations: usize,
}

/// Coarse step of the first search pass.
pub const COARSE_STEP: f64 = 0.1;
/// Step of the local refinement pass.
pub const FINE_STEP: f64 = 0.02;
/// Coarse candidates refined in the second pass.
pub const REFINED_CANDIDATES: usize = 20;

/// Grid search over unordered `k`-tuples (`k ≤ 2`) of estimate nodes:
/// a full pass at [`COARSE_STEP`], then a [`FINE_STEP`] pass in a
/// `COARSE_STEP` neighbourhood of the best [`REFINED_CANDIDATES`] tuples.
pub fn search_estimate_nodes(order: usize, k: usize, dhat: f64, target: &[Complex64]) -> NodeSearch {
    assert!((1..=2).contains(&k), "node search supports one or two estimates");
    let coarse = disk_points(Complex64::new(0.0, 0.0), dhat, COARSE_STEP, dhat);
    let mut evaluations = 0;
    let mut scored: Vec<(f64, Vec<Complex64>)> = Vec::new();
    let eval = |tuple: Vec<Complex64>, evaluations: &mut usize| {
        *evaluations += 1;
        (fit_residual(order, &tuple, target), tuple)
    };
    if k == 1 {
        for &p in &coarse {
            scored.push(eval(vec![p], &mut evaluations));
        }
    } else {
        for i in 0..coarse.len() {
            for j in i + 1..coarse.len() {
                scored.push(eval(vec![coarse[i], coarse[j]], &mut evaluations));
            }
        }
    }
    scored.sort_by(|a, b| a.0.total_cmp(&b.0));
    scored.truncate(REFINED_CANDIDATES);
    let mut best = scored[0].clone();
    for (_, tuple) in &scored {
        let local: Vec<Vec<Complex64>> =
            tuple.iter().map(|&c| disk_points(c, COARSE_STEP, FINE_STEP, dhat)).collect();
        if k == 1 {
            for &p in &local[0] {
                let cand = eval(vec![p], &mut evaluations);
                if cand.0 < best.0 {
                    best = cand;
                }
            }
        } else {
            for &p in &local[0] {
                for &q in &local[1] {
                    if p == q {
                        continue;
                    }
                    let cand = eval(vec![p, q], &mut evaluations);
                    if cand.0 < best.0 {
                        best = cand;
                    }
                }
            }
        }
    }
    NodeSearch { minimum: best.0, argmin: best.1, evaluations }
}

/// Largest `k` accepted by [`check_nonlinear_approx_lower_bound`].
pub const MAX_SEARCH_ESTIMATES: usize = 2;

/// `k+1` sources cannot be fitted by `k` nodes within the disk of radius
/// `dhat` to better than `m_min d_min^{2k} / (2^k (1+d)^k (1+d̂)^k)`,
/// all vectors of length `2k+1`.
///
/// The left side is the searched minimum, an upper estimate of the true one.
pub fn check_nonlinear_approx_lower_bound(
    z: &[Complex64],
    amps: &[Complex64],
    d: f64,
    dhat: f64,
) -> Result<BoundReport> {
    if z.len() < 2 || z.len() != amps.len() || z.len() - 1 > MAX_SEARCH_ESTIMATES {
        return Err(Error::InvalidArgument(alloc::format!(
            "need 2..={} nodes with one amplitude each",
            MAX_SEARCH_ESTIMATES + 1
        )));
    }
    let k = z.len() - 1;
    let instance = alloc::format!("d={d:.17e};dhat={dhat:.17e};{}", describe(&[("z", z), ("amps", amps)]));
    if max_modulus(z) > d || !(dhat > 0.0) {
        return Ok(BoundReport::not_applicable("nonlinear_approx_lower_bound", instance));
    }
    let sep = min_node_separation(z);
    if sep == 0.0 {
        return Err(Error::IllPosed("coincident nodes".into()));
    }
    let target = vandermonde_matrix(2 * k, z).matvec(amps);
    let search = search_estimate_nodes(2 * k, k, dhat, &target);
    let m_min = amps.iter().map(|a| a.norm()).fold(f64::INFINITY, f64::min);
    let rhs = m_min * sep.powi(2 * k as i32) / (2f64.powi(k as i32) * ((1.0 + d) * (1.0 + dhat)).powi(k as i32));
    Ok(BoundReport::evaluate("nonlinear_approx_lower_bound", search.minimum, rhs, Relation::AtLeast, instance)
        .with_detail("evaluations", search.evaluations as f64))
}

/// If `‖Â â − A a‖₂ < σ` with vectors of length `2k` and all nodes within
/// the disk of radius `d`, then
/// `‖η(z, ẑ)‖∞ < (1+d)^{2k−1} / d_min^{k−1} · σ / m_min`.
///
/// `d` is taken as the largest node modulus.
pub fn check_approx_stability(
    z: &[Complex64],
    zhat: &[Complex64],
    amps: &[Complex64],
    amps_hat: &[Complex64],
    sigma: f64,
) -> Result<BoundReport> {
    let k = z.len();
    if k == 0 || zhat.len() != k || amps.len() != k || amps_hat.len() != k {
        return Err(Error::InvalidArgument("need equally many nodes and amplitudes".into()));
    }
    let instance = alloc::format!(
        "sigma={sigma:.17e};{}",
        describe(&[("z", z), ("zhat", zhat), ("amps", amps), ("amps_hat", amps_hat)])
    );
    let order = 2 * k - 1;
    let diff: Vec<Complex64> = vandermonde_matrix(order, zhat)
        .matvec(amps_hat)
        .into_iter()
        .zip(vandermonde_matrix(order, z).matvec(amps))
        .map(|(a, b)| a - b)
        .collect();
    let residual = norm2(&diff);
    if !(residual < sigma) {
        return Ok(BoundReport::not_applicable("approx_stability", instance));
    }
    let sep = if k == 1 { 1.0 } else { min_node_separation(z) };
    if sep == 0.0 {
        return Err(Error::IllPosed("coincident nodes".into()));
    }
    let d = max_modulus(z).max(max_modulus(zhat));
    let m_min = amps.iter().map(|a| a.norm()).fold(f64::INFINITY, f64::min);
    let lhs = eta(z, zhat).into_iter().fold(0.0, f64::max);
    let rhs = (1.0 + d).powi(order as i32) / sep.powi(k as i32 - 1) * sigma / m_min;
    Ok(BoundReport::evaluate("approx_stability", lhs, rhs, Relation::AtMost, instance)
        .with_detail("residual", residual))
}
