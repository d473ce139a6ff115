//! Two-user multiple-access power minimization with an eavesdropping leakage
//! cap: minimize the first transmit power subject to a total-throughput floor
//! and a limit on the information leaked to per-user eavesdroppers.
//!
//! The classic instance (direct gains 10, eavesdropper gains 1/2 and 1,
//! throughput floor log2(61), power caps 5) has its optimum at
//! `p = (4.00665, 1.99335)`. With the leakage budget raised to 9 the
//! boundary curves touch the power cap in the single isolated feasible point
//! `(1, 5)`, which an essential-optimality solver must never return.

use crate::problem::{CaseTag, ConstraintPair, ConvexSet, RatioPair, StructuredProblem};
use crate::term::{AffineExpr, Term};

/// Leakage budget of the classic instance (linear scale).
pub const CLASSIC_LEAKAGE_BUDGET: f64 = 8.99;

/// Budget for which the optimum degenerates to the isolated point `(1, 5)`.
pub const ISOLATED_LEAKAGE_BUDGET: f64 = 9.0;

const DIRECT_GAIN: f64 = 10.0;
const EAVESDROP_GAIN_1: f64 = 0.5;
const EAVESDROP_GAIN_2: f64 = 1.0;
const POWER_CAP: f64 = 5.0;
const QOS_FLOOR_LINEAR: f64 = 61.0;

/// Builds the problem for a given leakage budget with the classic throughput
/// floor. Returns the problem and a safe initial threshold (the objective is
/// `-p_0`, bounded below by the negated power cap).
pub fn power_min_problem(leakage_budget: f64) -> (StructuredProblem, f64) {
    power_min_with_qos(leakage_budget, QOS_FLOOR_LINEAR.log2())
}

/// Same network with an explicit throughput floor (base-2 log scale).
pub fn power_min_with_qos(leakage_budget: f64, qos_floor: f64) -> (StructuredProblem, f64) {
    let n = 2;
    // Throughput floor: qos - log2(1 + 10 p0 + 10 p1) <= 0.
    let qos = ConstraintPair {
        g_plus: Term::constant(n, qos_floor),
        g_minus: Term::log2(AffineExpr { c: vec![DIRECT_GAIN, DIRECT_GAIN], d: 1.0 }),
    };
    // Leakage cap: log2(1 + g1 p0) + log2(1 + g2 p1) - log2(budget) <= 0.
    let leak = ConstraintPair {
        g_plus: Term::log2(AffineExpr { c: vec![EAVESDROP_GAIN_1, 0.0], d: 1.0 })
            .add(&Term::log2(AffineExpr { c: vec![0.0, EAVESDROP_GAIN_2], d: 1.0 }))
            .add_constant(-leakage_budget.log2()),
        g_minus: Term::zero(n),
    };
    let problem = StructuredProblem {
        n_global: 2,
        n_nonglobal: 0,
        objective: vec![RatioPair {
            num: Term::affine(vec![-1.0, 0.0], 0.0),
            den: Term::constant(n, 1.0),
        }],
        constraints: vec![qos, leak],
        gminus_signature: vec![1, 1],
        case: CaseTag::B,
        fx_signature: Some(vec![1, 1]),
        domain: ConvexSet::bounds_only(vec![0.0, 0.0], vec![POWER_CAP, POWER_CAP]),
    };
    (problem, -POWER_CAP)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classic_instance_validates_as_separable() {
        let (p, _) = power_min_problem(CLASSIC_LEAKAGE_BUDGET);
        let rep = p.validate();
        assert!(rep.is_ok(), "{rep}");
    }

    #[test]
    fn constraint_arithmetic_at_known_points() {
        let (p, _) = power_min_problem(CLASSIC_LEAKAGE_BUDGET);
        // At the optimum both constraints are active (residuals ~ 0).
        let r = p.max_residual(&[4.00665, 1.99335]).unwrap();
        assert!(r.abs() < 1e-4, "residual {r}");
        // Interior feasible point.
        assert!(p.max_residual(&[4.1, 1.92]).unwrap() < 0.0);
        // Throughput floor violated at (0.9, 5).
        assert!(p.constraint_residual(0, &[0.9, 5.0]).unwrap() > 0.0);
    }

    #[test]
    fn isolated_budget_has_the_touching_point() {
        let (p, _) = power_min_problem(ISOLATED_LEAKAGE_BUDGET);
        // (1, 5) is feasible but isolated: both curves and the cap meet.
        let r = p.max_residual(&[1.0, 5.0]).unwrap();
        assert!(r.abs() < 1e-12, "residual {r}");
        // Tiny horizontal perturbations leave the feasible set.
        for dp in [1e-3, -1e-3] {
            let worst = p.max_residual(&[1.0 + dp, 5.0]).unwrap();
            assert!(worst > 0.0);
        }
    }
}
