//! Separation preserved by `(x₁, x₂) ↦ e^{ix₁} + e^{ix₂}`.

use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::{BoundReport, Relation};
use crate::Point;

/// Which hypothesis set and lower bound to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistanceBranch {
    /// Angles in `[0, 2π/3]²` with second minus first in `[π/3, 2π/3]`;
    /// bound `(3/2π)‖Δ‖₁`.
    Angular,
    /// Translated locations in `[0, π/2] × [π/2, π]`; bound `(2/π²)‖Δ‖₁²`.
    Translated,
}

impl DistanceBranch {
    pub fn admits(self, p: Point) -> bool {
        match self {
            Self::Angular => {
                let gap = p[1] - p[0];
                (0.0..=2.0 * PI / 3.0).contains(&p[0])
                    && (0.0..=2.0 * PI / 3.0).contains(&p[1])
                    && (PI / 3.0..=2.0 * PI / 3.0).contains(&gap)
            }
            Self::Translated => (0.0..=PI / 2.0).contains(&p[0]) && (PI / 2.0..=PI).contains(&p[1]),
        }
    }

    fn name(self) -> &'static str {
        match self {
            Self::Angular => "distance_preservation_angular",
            Self::Translated => "distance_preservation_translated",
        }
    }
}

/// `e^{ip₁} + e^{ip₂}`.
pub fn combined_coordinate(p: Point) -> Complex64 {
    Complex64::from_polar(1.0, p[0]) + Complex64::from_polar(1.0, p[1])
}

/// `|c(p) − c(q)| ≥ bound(‖p − q‖₁)` for the chosen branch.
pub fn check_distance_preservation(p: Point, q: Point, branch: DistanceBranch) -> BoundReport {
    let instance = alloc::format!("{branch:?};p=({:.17e},{:.17e});q=({:.17e},{:.17e})", p[0], p[1], q[0], q[1]);
    if !branch.admits(p) || !branch.admits(q) {
        return BoundReport::not_applicable(branch.name(), instance);
    }
    let delta = (p[0] - q[0]).abs() + (p[1] - q[1]).abs();
    let lhs = (combined_coordinate(p) - combined_coordinate(q)).norm();
    let rhs = match branch {
        DistanceBranch::Angular => 3.0 / (2.0 * PI) * delta,
        DistanceBranch::Translated => 2.0 / (PI * PI) * delta * delta,
    };
    BoundReport::evaluate(branch.name(), lhs, rhs, Relation::AtLeast, instance).with_detail("l1_distance", delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::Verdict;
    use proptest::prelude::*;

    #[test]
    fn identical_points_give_zero_sides() {
        for (p, b) in [([0.2, 1.5], DistanceBranch::Angular), ([0.4, 2.0], DistanceBranch::Translated)] {
            let r = check_distance_preservation(p, p, b);
            assert_eq!(r.lhs, 0.0);
            assert_eq!(r.rhs, 0.0);
            assert_eq!(r.verdict, Verdict::Holds);
        }
    }

    #[test]
    fn angular_example() {
        let r = check_distance_preservation([0.0, PI / 2.0], [PI / 6.0, 2.0 * PI / 3.0], DistanceBranch::Angular);
        let direct = (Complex64::new(1.0, 1.0)
            - Complex64::new((PI / 6.0).cos() + (2.0 * PI / 3.0).cos(), (PI / 6.0).sin() + (2.0 * PI / 3.0).sin()))
        .norm();
        assert!((r.lhs - direct).abs() < 1e-15);
        assert!((r.lhs - 0.732).abs() < 1e-3);
        assert!((r.rhs - 0.5).abs() < 1e-15);
        assert!(r.satisfied());
    }

    #[test]
    fn outside_hypotheses_is_not_applicable() {
        let r = check_distance_preservation([0.0, 0.1], [0.0, 1.5], DistanceBranch::Angular);
        assert_eq!(r.verdict, Verdict::NotApplicable);
        let r = check_distance_preservation([0.0, 0.1], [0.0, 2.0], DistanceBranch::Translated);
        assert_eq!(r.verdict, Verdict::NotApplicable);
        assert!(r.satisfied());
    }

    proptest! {
        #[test]
        fn angular_branch_holds(a in 0.0..PI / 3.0, u in 0.0..1.0f64, b in 0.0..PI / 3.0, w in 0.0..1.0f64) {
            let p = [a, a + PI / 3.0 + u * (PI / 3.0 - a)];
            let q = [b, b + PI / 3.0 + w * (PI / 3.0 - b)];
            let r = check_distance_preservation(p, q, DistanceBranch::Angular);
            prop_assert_eq!(r.verdict, Verdict::Holds, "{:?}", r);
        }

        #[test]
        fn translated_branch_holds(a in 0.0..PI / 2.0, b in PI / 2.0..PI, c in 0.0..PI / 2.0, d in PI / 2.0..PI) {
            let r = check_distance_preservation([a, b], [c, d], DistanceBranch::Translated);
            prop_assert_eq!(r.verdict, Verdict::Holds, "{:?}", r);
        }
    }
}
