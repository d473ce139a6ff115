//! Linear-fractional programming via the Charnes-Cooper transform.

use crate::term::AffineExpr;

use super::simplex::{dot, solve_lp, LinearProgram, LpDomain};
use super::{SubSolution, SubStatus};

/// Maximizes `(num.c · v + num.d) / (den.c · v + den.d)` over the domain.
/// The denominator must be positive on the domain.
///
/// Substituting `w = v * s`, `s = 1 / (den · v + den.d)` turns the ratio into
/// the linear objective `num.c · w + num.d * s` with the normalization row
/// `den.c · w + den.d * s = 1`, bounds scaled by `s`, and `s >= 0`.
pub fn solve_linear_fractional(
    num: &AffineExpr,
    den: &AffineExpr,
    domain: &LpDomain,
) -> SubSolution {
    let n = domain.n();
    debug_assert_eq!(num.c.len(), n);
    debug_assert_eq!(den.c.len(), n);

    // Columns: w_0..w_{n-1}, s.
    let mut a_ub: Vec<(Vec<f64>, f64)> = Vec::new();
    for (a, b) in &domain.a_ub {
        let mut row = a.clone();
        row.push(-b);
        a_ub.push((row, 0.0));
    }
    let mut a_eq: Vec<(Vec<f64>, f64)> = Vec::new();
    for (a, b) in &domain.a_eq {
        let mut row = a.clone();
        row.push(-b);
        a_eq.push((row, 0.0));
    }
    for (j, &(lo, hi)) in domain.bounds.iter().enumerate() {
        if lo.is_finite() {
            // lo * s - w_j <= 0
            let mut row = vec![0.0; n + 1];
            row[j] = -1.0;
            row[n] = lo;
            a_ub.push((row, 0.0));
        }
        if hi.is_finite() {
            // w_j - hi * s <= 0
            let mut row = vec![0.0; n + 1];
            row[j] = 1.0;
            row[n] = -hi;
            a_ub.push((row, 0.0));
        }
    }
    // Normalization den · w + den.d * s = 1.
    let mut norm = den.c.clone();
    norm.push(den.d);
    a_eq.push((norm, 1.0));

    let mut cost: Vec<f64> = num.c.iter().map(|c| -c).collect();
    cost.push(-num.d);
    let mut bounds = vec![(f64::NEG_INFINITY, f64::INFINITY); n];
    bounds.push((0.0, f64::INFINITY));

    let lp = LinearProgram { cost, domain: LpDomain { a_ub, a_eq, bounds } };
    let sol = solve_lp(&lp, 1e-10);
    if !sol.is_optimal() {
        // An unbounded transformed program corresponds to an unbounded ratio
        // only over unbounded domains; report as-is.
        return SubSolution::failed(sol.status);
    }
    let s = sol.point[n];
    if s <= 1e-12 {
        return SubSolution::failed(SubStatus::NumericalFailure);
    }
    let point: Vec<f64> = sol.point[..n].iter().map(|w| w / s).collect();
    let value = (dot(&num.c, &point) + num.d) / (dot(&den.c, &point) + den.d);
    SubSolution {
        status: SubStatus::Optimal,
        value,
        duality_gap: sol.duality_gap,
        primal_residual: domain.residual(&point).max(0.0),
        point,
        iterations: sol.iterations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_denominator_reduces_to_lp() {
        // max (r0 + r1) / 1 over r0 <= 1, r1 <= 1  ->  2
        let domain = LpDomain {
            a_ub: vec![(vec![1.0, 0.0], 1.0), (vec![0.0, 1.0], 1.0)],
            a_eq: vec![],
            bounds: vec![(0.0, f64::INFINITY); 2],
        };
        let num = AffineExpr { c: vec![1.0, 1.0], d: 0.0 };
        let den = AffineExpr { c: vec![0.0, 0.0], d: 1.0 };
        let sol = solve_linear_fractional(&num, &den, &domain);
        assert!(sol.is_optimal());
        assert!((sol.value - 2.0).abs() < 1e-8);
    }

    #[test]
    fn monotone_ratio() {
        // max x / (x + 1) over x in [0, 3]  ->  0.75 at x = 3
        let domain = LpDomain { a_ub: vec![], a_eq: vec![], bounds: vec![(0.0, 3.0)] };
        let num = AffineExpr { c: vec![1.0], d: 0.0 };
        let den = AffineExpr { c: vec![1.0], d: 1.0 };
        let sol = solve_linear_fractional(&num, &den, &domain);
        assert!(sol.is_optimal());
        assert!((sol.value - 0.75).abs() < 1e-8);
        assert!((sol.point[0] - 3.0).abs() < 1e-7);
    }

    #[test]
    fn constant_denominator_consistency_with_lp() {
        // For a constant denominator the result is the LP optimum divided by
        // the constant, within 1e-8 relative.
        let domain = LpDomain {
            a_ub: vec![(vec![1.0, 2.0], 4.0), (vec![3.0, 1.0], 6.0)],
            a_eq: vec![],
            bounds: vec![(0.0, f64::INFINITY); 2],
        };
        let num = AffineExpr { c: vec![2.0, 3.0], d: 0.0 };
        let den_const = 2.5;
        let den = AffineExpr { c: vec![0.0, 0.0], d: den_const };
        let frac = solve_linear_fractional(&num, &den, &domain);
        let lp = LinearProgram { cost: vec![-2.0, -3.0], domain: domain.clone() };
        let lp_sol = solve_lp(&lp, 1e-10);
        assert!(frac.is_optimal() && lp_sol.is_optimal());
        let expect = -lp_sol.value / den_const;
        assert!(
            (frac.value - expect).abs() <= 1e-8 * expect.abs().max(1.0),
            "{} vs {}",
            frac.value,
            expect
        );
    }
}
