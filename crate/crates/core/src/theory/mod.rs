//! Numerical checks of the inequalities behind the algorithms: distance
//! preservation of the coordinate combination, Vandermonde conditioning,
//! products of node distances and nonlinear approximation bounds.
//!
//! Every `check_*` function evaluates one inequality on a concrete instance
//! and returns a [`BoundReport`]. Instances that miss the hypotheses are
//! reported as [`Verdict::NotApplicable`], never as violations.

use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::CMatrix;

pub mod approx;
pub mod geometry;
pub mod limits;
pub mod suite;
pub mod vandermonde;

pub use approx::{check_approx_stability, check_nonlinear_approx_lower_bound, check_projection_lower_bound};
pub use geometry::{check_distance_preservation, DistanceBranch};
pub use limits::{resolution_limit_thresholds, ResolutionLimits};
pub use vandermonde::{
    check_eta_lower_bound, check_eta_stability, check_inverse_norm, check_singular_chain, check_volume_ratio,
};

/// Relative slack granted to floating-point evaluation of both sides.
pub const TOLERANCE: f64 = 1e-12;

/// Direction of the checked inequality.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    /// `lhs ≤ rhs`.
    AtMost,
    /// `lhs ≥ rhs`.
    AtLeast,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Violated,
    NotApplicable,
}

/// One evaluated inequality.
///
/// When a check covers several linked inequalities, `lhs`/`rhs` carry the
/// headline link and `verdict` requires every link to hold; the other values
/// are listed in `details`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub relation: Relation,
    pub verdict: Verdict,
    pub details: Vec<(&'static str, f64)>,
    pub instance: String,
}

impl BoundReport {
    /// `true` unless the inequality was evaluated and failed.
    pub fn satisfied(&self) -> bool {
        self.verdict != Verdict::Violated
    }

    pub fn is_applicable(&self) -> bool {
        self.verdict != Verdict::NotApplicable
    }

    /// `rhs − lhs` for [`Relation::AtMost`], `lhs − rhs` otherwise.
    pub fn slack(&self) -> f64 {
        match self.relation {
            Relation::AtMost => self.rhs - self.lhs,
            Relation::AtLeast => self.lhs - self.rhs,
        }
    }

    pub fn detail(&self, key: &str) -> Option<f64> {
        self.details.iter().find(|(k, _)| *k == key).map(|(_, v)| *v)
    }

    pub(crate) fn not_applicable(name: &'static str, instance: String) -> Self {
        Self {
            name,
            lhs: f64::NAN,
            rhs: f64::NAN,
            relation: Relation::AtMost,
            verdict: Verdict::NotApplicable,
            details: Vec::new(),
            instance,
        }
    }

    pub(crate) fn evaluate(name: &'static str, lhs: f64, rhs: f64, relation: Relation, instance: String) -> Self {
        let verdict = if holds(lhs, rhs, relation) { Verdict::Holds } else { Verdict::Violated };
        Self { name, lhs, rhs, relation, verdict, details: Vec::new(), instance }
    }

    pub(crate) fn with_detail(mut self, key: &'static str, value: f64) -> Self {
        self.details.push((key, value));
        self
    }

    /// Downgrades to `Violated` when `ok` is false.
    pub(crate) fn require(mut self, ok: bool) -> Self {
        if !ok && self.verdict == Verdict::Holds {
            self.verdict = Verdict::Violated;
        }
        self
    }
}

/// `lhs ⋚ rhs` up to [`TOLERANCE`] relative to the larger magnitude.
pub fn holds(lhs: f64, rhs: f64, relation: Relation) -> bool {
    if lhs.is_nan() || rhs.is_nan() {
        return false;
    }
    let slack = match relation {
        Relation::AtMost => rhs - lhs,
        Relation::AtLeast => lhs - rhs,
    };
    slack >= -TOLERANCE * 1f64.max(lhs.abs()).max(rhs.abs())
}

/// `(1, ω, …, ω^s)`.
pub fn phi(s: usize, omega: Complex64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(s + 1);
    let mut p = Complex64::new(1.0, 0.0);
    for _ in 0..=s {
        out.push(p);
        p *= omega;
    }
    out
}

/// `(s+1) × k` matrix with columns `phi(s, nodes[j])`.
pub fn vandermonde_matrix(s: usize, nodes: &[Complex64]) -> CMatrix {
    let cols: Vec<Vec<Complex64>> = nodes.iter().map(|&d| phi(s, d)).collect();
    if cols.is_empty() {
        return CMatrix::zeros(s + 1, 0);
    }
    CMatrix::from_columns(&cols)
}

/// `η_j = Π_l |z_j − ẑ_l|` for every `j`.
pub fn eta(z: &[Complex64], zhat: &[Complex64]) -> Vec<f64> {
    z.iter().map(|&zj| zhat.iter().map(|&w| (zj - w).norm()).product()).collect()
}

/// Smallest pairwise distance between nodes (`+∞` for fewer than two).
pub fn min_node_separation(nodes: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for p in 0..nodes.len() {
        for q in p + 1..nodes.len() {
            best = best.min((nodes[p] - nodes[q]).norm());
        }
    }
    best
}

/// Largest node modulus (0 for none).
pub fn max_modulus(nodes: &[Complex64]) -> f64 {
    nodes.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub(crate) fn describe(groups: &[(&str, &[Complex64])]) -> String {
    use core::fmt::Write;
    let mut s = String::new();
    for (g, (name, values)) in groups.iter().enumerate() {
        if g > 0 {
            s.push(';');
        }
        let _ = write!(s, "{name}=");
        for (k, z) in values.iter().enumerate() {
            if k > 0 {
                s.push(' ');
            }
            let _ = write!(s, "{:.17e}{:+.17e}i", z.re, z.im);
        }
    }
    s
}
