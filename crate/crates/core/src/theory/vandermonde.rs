//! Conditioning of Vandermonde matrices and products of node distances.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::{describe, eta, max_modulus, min_node_separation, vandermonde_matrix, BoundReport, Relation};
use crate::linalg::{inverse, svd};
use crate::{Error, Result};

/// Node sets closer than this are rejected as numerically coincident.
pub const MIN_NODE_SEPARATION: f64 = 1e-8;

fn require_distinct(nodes: &[Complex64]) -> Result<f64> {
    let sep = min_node_separation(nodes);
    if nodes.len() >= 2 && sep < MIN_NODE_SEPARATION {
        return Err(Error::IllPosed(alloc::format!("nodes are {sep:e} apart")));
    }
    Ok(sep)
}

/// `max_i Π_{p≠i} (1 + |d_p|) / |d_i − d_p|`, bounding `‖V⁻¹‖∞` for the
/// square Vandermonde matrix on `nodes`.
pub fn inverse_norm_bound(nodes: &[Complex64]) -> f64 {
    (0..nodes.len())
        .map(|i| {
            (0..nodes.len())
                .filter(|&p| p != i)
                .map(|p| (1.0 + nodes[p].norm()) / (nodes[i] - nodes[p]).norm())
                .product::<f64>()
        })
        .fold(0.0, f64::max)
}

/// `‖V⁻¹‖∞` against the node-wise product bound and its uniform
/// `((1+d)/d_min)^{k−1}` relaxation.
pub fn check_inverse_norm(nodes: &[Complex64]) -> Result<BoundReport> {
    let k = nodes.len();
    if k < 2 {
        return Err(Error::InvalidArgument("need at least two nodes".into()));
    }
    let sep = require_distinct(nodes)?;
    let d = max_modulus(nodes);
    let actual = inverse(&vandermonde_matrix(k - 1, nodes))?.norm_inf();
    let product_bound = inverse_norm_bound(nodes);
    let uniform_bound = ((1.0 + d) / sep).powi(k as i32 - 1);
    let report = BoundReport::evaluate(
        "inverse_norm",
        actual,
        product_bound,
        Relation::AtMost,
        describe(&[("nodes", nodes)]),
    )
    .with_detail("uniform_bound", uniform_bound)
    .with_detail("min_separation", sep);
    let ok = super::holds(actual, uniform_bound, Relation::AtMost)
        && super::holds(product_bound, uniform_bound, Relation::AtMost);
    Ok(report.require(ok))
}

/// `1/(√k‖V⁻¹‖∞) ≤ 1/‖V⁻¹‖₂ ≤ σ_min(V_{k−1}) ≤ σ_min(V_s)`.
///
/// The headline pair is the last link.
pub fn check_singular_chain(nodes: &[Complex64], s: usize) -> Result<BoundReport> {
    let k = nodes.len();
    if k == 0 || s + 1 < k {
        return Err(Error::InvalidArgument(alloc::format!("need 1 <= k <= s + 1, got k = {k}, s = {s}")));
    }
    require_distinct(nodes)?;
    let square = vandermonde_matrix(k - 1, nodes);
    let inv = inverse(&square)?;
    let from_inf = 1.0 / ((k as f64).sqrt() * inv.norm_inf());
    let from_two = 1.0 / inv.norm_2()?;
    let sigma_square = *svd(&square)?.singular_values.last().expect("k >= 1");
    let sigma_tall = *svd(&vandermonde_matrix(s, nodes))?.singular_values.last().expect("k >= 1");
    let ok = super::holds(from_inf, from_two, Relation::AtMost)
        && super::holds(from_two, sigma_square, Relation::AtMost);
    let instance = alloc::format!("s={s};{}", describe(&[("nodes", nodes)]));
    Ok(BoundReport::evaluate("singular_chain", sigma_square, sigma_tall, Relation::AtMost, instance)
        .with_detail("inf_norm_bound", from_inf)
        .with_detail("two_norm_bound", from_two)
        .require(ok))
}

/// Elementary symmetric polynomials `e_0 .. e_k` of the nodes.
pub fn elementary_symmetric(nodes: &[Complex64]) -> Vec<Complex64> {
    let mut e = vec![Complex64::new(0.0, 0.0); nodes.len() + 1];
    e[0] = Complex64::new(1.0, 0.0);
    for (m, &z) in nodes.iter().enumerate() {
        for j in (1..=m + 1).rev() {
            let prev = e[j - 1];
            e[j] += z * prev;
        }
    }
    e
}

/// `√(det(V_k* V_k) / det(V_{k−1}* V_{k−1}))` as a ratio of singular value
/// products.
pub fn volume_ratio(nodes: &[Complex64]) -> Result<f64> {
    let k = nodes.len();
    let tall = svd(&vandermonde_matrix(k, nodes))?.singular_values;
    let square = svd(&vandermonde_matrix(k - 1, nodes))?.singular_values;
    Ok(tall.iter().zip(&square).map(|(a, b)| a / b).product())
}

/// Volume ratio against `√Σ|e_j|²` (relative agreement `1e−8`) and the
/// `(1+d)^k` upper bound.
pub fn check_volume_ratio(nodes: &[Complex64]) -> Result<BoundReport> {
    let k = nodes.len();
    if k == 0 {
        return Err(Error::InvalidArgument("need at least one node".into()));
    }
    require_distinct(nodes)?;
    let ratio = volume_ratio(nodes)?;
    let symmetric = elementary_symmetric(nodes).iter().map(|e| e.norm_sqr()).sum::<f64>().sqrt();
    let d = max_modulus(nodes);
    let bound = (1.0 + d).powi(k as i32);
    let rel = (ratio - symmetric).abs() / symmetric;
    Ok(BoundReport::evaluate("volume_ratio", ratio, bound, Relation::AtMost, describe(&[("nodes", nodes)]))
        .with_detail("symmetric_polynomial_ratio", symmetric)
        .with_detail("relative_disagreement", rel)
        .require(rel <= 1e-8))
}

/// `‖η(z, ẑ)‖∞ ≥ (d_min/2)^k` for `k+1` nodes against `k` estimates.
pub fn check_eta_lower_bound(z: &[Complex64], zhat: &[Complex64]) -> Result<BoundReport> {
    let k = zhat.len();
    if z.len() != k + 1 {
        return Err(Error::InvalidArgument(alloc::format!("need {} nodes for {k} estimates", k + 1)));
    }
    let sep = require_distinct(z)?;
    let lhs = eta(z, zhat).into_iter().fold(0.0, f64::max);
    let rhs = (sep / 2.0).powi(k as i32);
    Ok(BoundReport::evaluate("eta_lower_bound", lhs, rhs, Relation::AtLeast, describe(&[("z", z), ("zhat", zhat)])))
}

/// Every permutation `p` with `|ẑ_j − z_{p(j)}| < radius` for all `j`.
pub fn close_reorderings(z: &[Complex64], zhat: &[Complex64], radius: f64) -> Vec<Vec<usize>> {
    let k = z.len();
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..k).collect();
    let mut c = vec![0usize; k];
    let fits = |p: &[usize]| p.iter().enumerate().all(|(j, &q)| (zhat[j] - z[q]).norm() < radius);
    if fits(&perm) {
        out.push(perm.clone());
    }
    let mut i = 0;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            if fits(&perm) {
                out.push(perm.clone());
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Largest number of nodes accepted by [`check_eta_stability`].
pub const MAX_REORDER_NODES: usize = 7;

/// When `‖η(z, ẑ)‖∞ < eps` and `d_min ≥ 2 eps^{1/k}`, exactly one reordering
/// puts every estimate within `d_min/2` of its node, and then each error is at
/// most `(2/d_min)^{k−1} eps`.
///
/// The headline pair is the largest error against that bound.
pub fn check_eta_stability(z: &[Complex64], zhat: &[Complex64], eps: f64) -> Result<BoundReport> {
    let k = z.len();
    if k == 0 || zhat.len() != k || k > MAX_REORDER_NODES {
        return Err(Error::InvalidArgument(alloc::format!(
            "need 1..={MAX_REORDER_NODES} nodes and as many estimates"
        )));
    }
    let instance = alloc::format!("eps={eps:.17e};{}", describe(&[("z", z), ("zhat", zhat)]));
    let sep = if k == 1 { f64::INFINITY } else { require_distinct(z)? };
    let eta_max = eta(z, zhat).into_iter().fold(0.0, f64::max);
    if !(eps > 0.0) || !(eta_max < eps) || sep < 2.0 * eps.powf(1.0 / k as f64) {
        return Ok(BoundReport::not_applicable("eta_stability", instance));
    }
    let matches = close_reorderings(z, zhat, sep / 2.0);
    let (error, unique) = match matches.as_slice() {
        [p] => (p.iter().enumerate().map(|(j, &q)| (zhat[j] - z[q]).norm()).fold(0.0, f64::max), true),
        _ => (f64::INFINITY, false),
    };
    let bound = if k == 1 { eps } else { (2.0 / sep).powi(k as i32 - 1) * eps };
    Ok(BoundReport::evaluate("eta_stability", error, bound, Relation::AtMost, instance)
        .with_detail("eta_max", eta_max)
        .with_detail("close_reorderings", matches.len() as f64)
        .require(unique))
}
