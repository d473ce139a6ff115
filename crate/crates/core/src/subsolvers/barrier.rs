//! Log-barrier interior-point method for smooth convex programs assembled
//! from the term grammar.
//!
//! The program minimizes the pointwise maximum of convex terms subject to
//! convex term constraints, linear equalities and variable bounds. Internally
//! the objective is lifted to an epigraph variable, a phase-1 pass finds a
//! strictly feasible start, and Newton centering runs with the barrier
//! parameter multiplied by 10 per outer iteration.

use nalgebra::{DMatrix, DVector};

use crate::term::Term;

use super::{SubSolution, SubStatus, simplex::{solve_lp, LinearProgram, LpDomain}};

#[derive(Debug, Clone)]
pub struct SmoothConvexProgram {
    pub n: usize,
    /// Objective: minimize the pointwise maximum of these convex terms.
    pub objective_terms: Vec<Term>,
    /// Convex constraints `term <= 0`.
    pub constraints: Vec<Term>,
    /// Rows `a · v = b`.
    pub equalities: Vec<(Vec<f64>, f64)>,
    /// Per-variable bounds; entries may be infinite.
    pub bounds: Vec<(f64, f64)>,
}

impl SmoothConvexProgram {
    /// Largest violation of constraints, bounds and equalities at `v`.
    pub fn residual(&self, v: &[f64]) -> f64 {
        let mut r: f64 = 0.0;
        for t in &self.constraints {
            r = r.max(t.eval_extended(v));
        }
        for (a, b) in &self.equalities {
            r = r.max((a.iter().zip(v).map(|(x, y)| x * y).sum::<f64>() - b).abs());
        }
        for (j, &(lo, hi)) in self.bounds.iter().enumerate() {
            if lo.is_finite() {
                r = r.max(lo - v[j]);
            }
            if hi.is_finite() {
                r = r.max(v[j] - hi);
            }
        }
        r
    }

    fn structurally_convex(&self) -> bool {
        self.objective_terms.iter().all(Term::is_convex)
            && self.constraints.iter().all(Term::is_convex)
    }
}

const MU_FACTOR: f64 = 10.0;
const MAX_NEWTON_PER_CENTER: usize = 120;
const ARMIJO: f64 = 0.25;

/// Barrier merit value and gradient at `(v, t)` for barrier parameter `tau`:
/// `tau * t - sum ln(-c_k)` over the internal inequality set. Returns `None`
/// outside the strictly feasible domain. Exposed for gradient validation.
pub fn barrier_merit(
    prog: &SmoothConvexProgram,
    v: &[f64],
    t: f64,
    tau: f64,
) -> Option<(f64, Vec<f64>)> {
    let ineqs = assemble_ineqs(prog);
    let mut z = v.to_vec();
    z.push(t);
    let nz = z.len();
    let mut val = tau * t;
    let mut grad = vec![0.0; nz];
    grad[nz - 1] = tau;
    for c in &ineqs {
        let cv = c.eval_extended(&z);
        if cv >= 0.0 {
            return None;
        }
        val -= (-cv).ln();
        // d/dz [-ln(-c)] = grad(c) / (-c)
        c.add_grad(&z, 1.0 / (-cv), &mut grad);
    }
    Some((val, grad))
}

/// All inequality rows over `(v, t)`: epigraph rows, constraints, bounds.
fn assemble_ineqs(prog: &SmoothConvexProgram) -> Vec<Term> {
    let n = prog.n;
    let nz = n + 1;
    let extend = |t: &Term| -> Term {
        let mut out = Term::zero(nz);
        out.affine.c[..n].copy_from_slice(&t.affine.c);
        out.affine.d = t.affine.d;
        for atom in &t.logs {
            let mut arg = crate::term::AffineExpr::constant(nz, atom.arg.d);
            arg.c[..n].copy_from_slice(&atom.arg.c);
            out.logs.push(crate::term::LogAtom { weight: atom.weight, arg });
        }
        out
    };
    let mut ineqs = Vec::new();
    for f in &prog.objective_terms {
        let mut row = extend(f);
        row.affine.c[n] -= 1.0;
        ineqs.push(row);
    }
    for g in &prog.constraints {
        ineqs.push(extend(g));
    }
    for (j, &(lo, hi)) in prog.bounds.iter().enumerate() {
        if lo.is_finite() {
            let mut c = vec![0.0; nz];
            c[j] = -1.0;
            ineqs.push(Term::affine(c, lo));
        }
        if hi.is_finite() {
            let mut c = vec![0.0; nz];
            c[j] = 1.0;
            ineqs.push(Term::affine(c, -hi));
        }
    }
    ineqs
}

/// Finds a point satisfying the equalities with every log argument strictly
/// positive, or reports infeasibility of the domain.
fn initial_point(prog: &SmoothConvexProgram) -> Result<Vec<f64>, SubStatus> {
    let n = prog.n;
    let mut v = vec![0.0; n];
    for (j, &(lo, hi)) in prog.bounds.iter().enumerate() {
        v[j] = match (lo.is_finite(), hi.is_finite()) {
            (true, true) => 0.5 * (lo + hi),
            (true, false) => lo + 1.0,
            (false, true) => hi - 1.0,
            (false, false) => 0.0,
        };
    }
    let log_args: Vec<&crate::term::AffineExpr> = prog
        .objective_terms
        .iter()
        .chain(&prog.constraints)
        .flat_map(|t| t.logs.iter().map(|a| &a.arg))
        .collect();
    let args_ok = |v: &[f64]| log_args.iter().all(|a| a.eval(v) > 1e-12);
    if prog.equalities.is_empty() && args_ok(&v) {
        return Ok(v);
    }
    // Repair with an LP: maximize the smallest log argument subject to the
    // equalities and bounds.
    let mut a_ub = Vec::new();
    for arg in &log_args {
        let mut row = arg.c.iter().map(|c| -c).collect::<Vec<_>>();
        row.push(1.0);
        a_ub.push((row, arg.d));
    }
    let mut a_eq = Vec::new();
    for (a, b) in &prog.equalities {
        let mut row = a.clone();
        row.push(0.0);
        a_eq.push((row, *b));
    }
    let mut bounds = prog.bounds.clone();
    bounds.push((f64::NEG_INFINITY, 1.0));
    let mut cost = vec![0.0; n + 1];
    cost[n] = -1.0;
    let lp = LinearProgram { cost, domain: LpDomain { a_ub, a_eq, bounds } };
    let sol = solve_lp(&lp, 1e-10);
    if !sol.is_optimal() {
        return Err(SubStatus::Infeasible);
    }
    let delta = sol.point[n];
    if !log_args.is_empty() && delta <= 1e-10 {
        return Err(SubStatus::Infeasible);
    }
    Ok(sol.point[..n].to_vec())
}

struct Newton {
    iterations: usize,
}

impl Newton {
    /// Centers `min tau * cost(z) - sum ln(-c_k(z))` s.t. `A z = b` starting
    /// from a strictly feasible `z`. Returns false on a line-search stall or
    /// numerical breakdown. `early_stop` aborts the descent as soon as the
    /// iterate satisfies it; phase 1 uses it to leave the (possibly
    /// unbounded) slack minimization the moment strict feasibility holds.
    #[allow(clippy::too_many_arguments)]
    fn center(
        &mut self,
        z: &mut Vec<f64>,
        ineqs: &[Term],
        eq: &[(Vec<f64>, f64)],
        cost: &[f64],
        tau: f64,
        tol: f64,
        early_stop: Option<&dyn Fn(&[f64]) -> bool>,
    ) -> bool {
        let nz = z.len();
        let neq = eq.len();
        let merit = |z: &[f64]| -> f64 {
            let mut val = tau * cost.iter().zip(z).map(|(c, x)| c * x).sum::<f64>();
            for c in ineqs {
                let cv = c.eval_extended(z);
                if cv >= 0.0 {
                    return f64::INFINITY;
                }
                val -= (-cv).ln();
            }
            val
        };
        for _ in 0..MAX_NEWTON_PER_CENTER {
            if let Some(stop) = early_stop {
                if stop(z) {
                    return true;
                }
            }
            if z.iter().any(|x| x.abs() > 1e12) {
                return false;
            }
            self.iterations += 1;
            let mut grad: Vec<f64> = cost.iter().map(|c| c * tau).collect();
            let mut hess = vec![0.0; nz * nz];
            for c in ineqs {
                let cv = c.eval_extended(z);
                if !(cv < 0.0) || cv < -1e300 {
                    return false;
                }
                let inv = 1.0 / (-cv);
                c.add_grad(z, inv, &mut grad);
                // grad(c) grad(c)^T / c^2
                let mut gc = vec![0.0; nz];
                c.add_grad(z, 1.0, &mut gc);
                for (j, &gj) in gc.iter().enumerate() {
                    if gj == 0.0 {
                        continue;
                    }
                    for (i, &gi) in gc.iter().enumerate() {
                        if gi != 0.0 {
                            hess[j * nz + i] += gi * gj * inv * inv;
                        }
                    }
                }
                // hess(c) / (-c)
                c.add_hess(z, inv, &mut hess);
            }
            if grad.iter().any(|g| !g.is_finite()) {
                return false;
            }

            // KKT solve (with ridge fallback on failure).
            let dim = nz + neq;
            let mut kkt = DMatrix::<f64>::zeros(dim, dim);
            for j in 0..nz {
                for i in 0..nz {
                    kkt[(i, j)] = hess[j * nz + i];
                }
            }
            for (r, (a, _)) in eq.iter().enumerate() {
                for (j, &aj) in a.iter().enumerate() {
                    kkt[(nz + r, j)] = aj;
                    kkt[(j, nz + r)] = aj;
                }
            }
            let mut rhs = DVector::<f64>::zeros(dim);
            for j in 0..nz {
                rhs[j] = -grad[j];
            }
            // Equality residual is zero along the iteration (feasible start).
            let mut step = None;
            let mut ridge = 0.0;
            for _ in 0..6 {
                let mut m = kkt.clone();
                for j in 0..nz {
                    m[(j, j)] += ridge;
                }
                if let Some(sol) = m.lu().solve(&rhs) {
                    if sol.iter().all(|v| v.is_finite()) {
                        step = Some(sol);
                        break;
                    }
                }
                ridge = if ridge == 0.0 { 1e-10 } else { ridge * 100.0 };
            }
            let Some(step) = step else { return false };
            let dz: Vec<f64> = (0..nz).map(|j| step[j]).collect();
            if dz.iter().any(|d| !d.is_finite()) {
                return false;
            }
            let decrement = -dz.iter().zip(&grad).map(|(d, g)| d * g).sum::<f64>();
            if decrement <= 2.0 * tol {
                return true;
            }

            let m0 = merit(z);
            let slope = -decrement;
            let mut alpha = 1.0;
            let mut accepted = false;
            while alpha > 1e-14 {
                let trial: Vec<f64> =
                    z.iter().zip(&dz).map(|(x, d)| x + alpha * d).collect();
                if merit(&trial) <= m0 + ARMIJO * alpha * slope {
                    *z = trial;
                    accepted = true;
                    break;
                }
                alpha *= 0.5;
            }
            if !accepted {
                return false;
            }
        }
        true
    }
}

/// Solves the convex program with a log-barrier method to tolerance `tol`.
pub fn solve_convex(prog: &SmoothConvexProgram, tol: f64) -> SubSolution {
    debug_assert!(prog.structurally_convex(), "non-convex term passed to solve_convex");
    if !prog.structurally_convex() {
        return SubSolution::failed(SubStatus::NumericalFailure);
    }
    let n = prog.n;
    let tol = tol.max(1e-12);

    let v0 = match initial_point(prog) {
        Ok(v) => v,
        Err(status) => return SubSolution::failed(status),
    };

    let mut newton = Newton { iterations: 0 };

    // Phase 1 over v: find a strictly feasible point. With purely affine
    // constraints (the common case; logs live in the objective terms) this is
    // a bounded margin-maximization LP. Otherwise: minimize the slack s with
    // g_k(v) <= s by barrier centering, leaving as soon as s goes negative.
    let phase1 = phase1_ineqs(prog);
    let mut s0 = f64::NEG_INFINITY;
    for c in &phase1 {
        s0 = s0.max(c.eval_extended(&v0));
    }
    let mut v = v0;
    if !s0.is_finite() {
        return SubSolution::failed(SubStatus::NumericalFailure);
    }
    if s0 >= -1e-9 && phase1.iter().all(Term::is_affine) {
        let margin = n as f64; // keep the margin LP bounded
        let mut a_ub: Vec<(Vec<f64>, f64)> = Vec::new();
        for c in &phase1 {
            let mut row = c.affine.c.clone();
            row.push(1.0);
            a_ub.push((row, -c.affine.d));
        }
        let mut cost = vec![0.0; n + 1];
        cost[n] = -1.0;
        let mut bounds = prog.bounds.clone();
        bounds.push((0.0, margin));
        let lp = LinearProgram {
            cost,
            domain: LpDomain { a_ub, a_eq: prog.equalities.clone(), bounds },
        };
        let sol = solve_lp(&lp, 1e-10);
        if !sol.is_optimal() {
            return SubSolution::failed(SubStatus::Infeasible);
        }
        if sol.point[n] <= 1e-9 {
            return SubSolution::failed(SubStatus::Infeasible);
        }
        v = sol.point[..n].to_vec();
    } else if s0 >= -1e-9 {
        // (v, s) system: rows c_k(v) - s <= 0.
        let nz = n + 1;
        let rows: Vec<Term> = phase1
            .iter()
            .map(|c| {
                let mut row = extend_term(c, nz);
                row.affine.c[n] -= 1.0;
                row
            })
            .collect();
        let eq: Vec<(Vec<f64>, f64)> = prog
            .equalities
            .iter()
            .map(|(a, b)| {
                let mut row = a.clone();
                row.push(0.0);
                (row, *b)
            })
            .collect();
        let mut cost = vec![0.0; nz];
        cost[n] = 1.0;
        let mut z = v.clone();
        z.push(s0 + 1.0);
        let mut tau = 1.0;
        let mut feasible = false;
        // Leave as soon as the slack is strictly negative: the slack
        // minimization itself may be unbounded over unbounded domains.
        let strictly_feasible = |z: &[f64]| z[n] < -1e-9;
        for _ in 0..40 {
            let ok = newton.center(
                &mut z,
                &rows,
                &eq,
                &cost,
                tau,
                1e-9,
                Some(&strictly_feasible),
            );
            if strictly_feasible(&z) {
                feasible = true;
                break;
            }
            if !ok {
                break;
            }
            if (rows.len() as f64) / tau < tol.min(1e-9) {
                break;
            }
            tau *= MU_FACTOR;
        }
        if !feasible {
            // Converged with non-negative slack: no strict interior point.
            if z[n] > -1e-9 {
                return SubSolution::failed(SubStatus::Infeasible);
            }
            return SubSolution::failed(SubStatus::NumericalFailure);
        }
        v = z[..n].to_vec();
    }

    // Phase 2 over (v, t).
    let ineqs = assemble_ineqs(prog);
    let m_total = ineqs.len();
    let eq: Vec<(Vec<f64>, f64)> = prog
        .equalities
        .iter()
        .map(|(a, b)| {
            let mut row = a.clone();
            row.push(0.0);
            (row, *b)
        })
        .collect();
    let nz = n + 1;
    let mut t0 = f64::NEG_INFINITY;
    for f in &prog.objective_terms {
        t0 = t0.max(f.eval_extended(&v));
    }
    if !t0.is_finite() {
        return SubSolution::failed(SubStatus::NumericalFailure);
    }
    let mut z = v;
    z.push(t0 + 1.0);
    let mut cost = vec![0.0; nz];
    cost[nz - 1] = 1.0;

    let mut tau = 1.0;
    let mut stalled = false;
    loop {
        if !newton.center(&mut z, &ineqs, &eq, &cost, tau, 1e-10, None) {
            stalled = true;
            break;
        }
        if (m_total as f64) / tau <= tol {
            break;
        }
        if tau > 1e18 {
            break;
        }
        tau *= MU_FACTOR;
    }
    let gap = (m_total as f64) / tau;
    if stalled && gap > tol * 100.0 {
        return SubSolution::failed(SubStatus::NumericalFailure);
    }

    let vstar = z[..n].to_vec();
    let mut value = f64::NEG_INFINITY;
    for f in &prog.objective_terms {
        value = value.max(f.eval_extended(&vstar));
    }
    let residual = prog.residual(&vstar).max(0.0);
    if !value.is_finite() || residual > (tol * 1e3).max(1e-6) {
        return SubSolution::failed(SubStatus::NumericalFailure);
    }
    SubSolution {
        status: SubStatus::Optimal,
        value,
        duality_gap: gap,
        primal_residual: residual,
        point: vstar,
        iterations: newton.iterations,
    }
}

fn extend_term(t: &Term, nz: usize) -> Term {
    let mut out = Term::zero(nz);
    let n = t.len();
    out.affine.c[..n].copy_from_slice(&t.affine.c);
    out.affine.d = t.affine.d;
    for atom in &t.logs {
        let mut arg = crate::term::AffineExpr::constant(nz, atom.arg.d);
        arg.c[..n].copy_from_slice(&atom.arg.c);
        out.logs.push(crate::term::LogAtom { weight: atom.weight, arg });
    }
    out
}

/// Inequalities over `v` alone used by phase 1: constraints plus bounds.
fn phase1_ineqs(prog: &SmoothConvexProgram) -> Vec<Term> {
    let n = prog.n;
    let mut out = prog.constraints.clone();
    for (j, &(lo, hi)) in prog.bounds.iter().enumerate() {
        if lo.is_finite() {
            let mut c = vec![0.0; n];
            c[j] = -1.0;
            out.push(Term::affine(c, lo));
        }
        if hi.is_finite() {
            let mut c = vec![0.0; n];
            c[j] = 1.0;
            out.push(Term::affine(c, -hi));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::AffineExpr;

    #[test]
    fn monotone_single_variable() {
        // min t s.t. -log2(1 + x) <= t, 0 <= x <= 1  ->  t = -1 at x = 1.
        let prog = SmoothConvexProgram {
            n: 1,
            objective_terms: vec![Term::log2(AffineExpr { c: vec![1.0], d: 1.0 }).scale(-1.0)],
            constraints: vec![],
            equalities: vec![],
            bounds: vec![(0.0, 1.0)],
        };
        let sol = solve_convex(&prog, 1e-8);
        assert!(sol.is_optimal());
        assert!((sol.value + 1.0).abs() < 1e-6, "value {}", sol.value);
        assert!((sol.point[0] - 1.0).abs() < 1e-4);
    }

    #[test]
    fn infeasible_affine_constraints() {
        // x <= -1 with x >= 0.
        let prog = SmoothConvexProgram {
            n: 1,
            objective_terms: vec![Term::affine(vec![1.0], 0.0)],
            constraints: vec![Term::affine(vec![1.0], 1.0)], // x + 1 <= 0
            equalities: vec![],
            bounds: vec![(0.0, f64::INFINITY)],
        };
        assert_eq!(solve_convex(&prog, 1e-8).status, SubStatus::Infeasible);
    }

    #[test]
    fn quadraticless_minimax() {
        // min max(x0 - 1, -x0 - 1) over [-2, 2]: optimum -1 at x0 = 0.
        let prog = SmoothConvexProgram {
            n: 1,
            objective_terms: vec![
                Term::affine(vec![1.0], -1.0),
                Term::affine(vec![-1.0], -1.0),
            ],
            constraints: vec![],
            equalities: vec![],
            bounds: vec![(-2.0, 2.0)],
        };
        let sol = solve_convex(&prog, 1e-8);
        assert!(sol.is_optimal());
        assert!((sol.value + 1.0).abs() < 1e-6);
        assert!(sol.point[0].abs() < 1e-4);
    }

    #[test]
    fn equality_constrained() {
        // min -log2(1+x0) - log2(1+x1) s.t. x0 + x1 = 1, x >= 0.
        // Symmetric optimum at x0 = x1 = 0.5, value -2 log2(1.5).
        let prog = SmoothConvexProgram {
            n: 2,
            objective_terms: vec![Term::log2(AffineExpr { c: vec![1.0, 0.0], d: 1.0 })
                .scale(-1.0)
                .add(&Term::log2(AffineExpr { c: vec![0.0, 1.0], d: 1.0 }).scale(-1.0))],
            constraints: vec![],
            equalities: vec![(vec![1.0, 1.0], 1.0)],
            bounds: vec![(0.0, f64::INFINITY); 2],
        };
        let sol = solve_convex(&prog, 1e-8);
        assert!(sol.is_optimal());
        let expect = -2.0 * 1.5f64.log2();
        assert!((sol.value - expect).abs() < 1e-6, "value {}", sol.value);
        assert!((sol.point[0] - 0.5).abs() < 1e-4);
    }

    #[test]
    fn log_constraint_active() {
        // min x0 s.t. 1 - log2(1 + x0) <= 0, x0 in [0, 10]: need x0 >= 1.
        let prog = SmoothConvexProgram {
            n: 1,
            objective_terms: vec![Term::affine(vec![1.0], 0.0)],
            constraints: vec![Term::log2(AffineExpr { c: vec![1.0], d: 1.0 })
                .scale(-1.0)
                .add_constant(1.0)],
            equalities: vec![],
            bounds: vec![(0.0, 10.0)],
        };
        let sol = solve_convex(&prog, 1e-8);
        assert!(sol.is_optimal());
        assert!((sol.point[0] - 1.0).abs() < 1e-4, "point {:?}", sol.point);
    }

    #[test]
    fn merit_gradient_matches_finite_differences() {
        let prog = SmoothConvexProgram {
            n: 2,
            objective_terms: vec![Term::affine(vec![1.0, 0.5], 0.0)],
            constraints: vec![Term::log2(AffineExpr { c: vec![1.0, 1.0], d: 1.0 })
                .scale(-1.0)
                .add_constant(0.5)],
            equalities: vec![],
            bounds: vec![(0.0, 3.0), (0.0, 3.0)],
        };
        let v = [1.5, 1.0];
        let t = 5.0;
        let tau = 3.0;
        let (_, grad) = barrier_merit(&prog, &v, t, tau).unwrap();
        let h = 1e-6;
        for j in 0..2 {
            let mut vp = v;
            let mut vm = v;
            vp[j] += h;
            vm[j] -= h;
            let (fp, _) = barrier_merit(&prog, &vp, t, tau).unwrap();
            let (fm, _) = barrier_merit(&prog, &vm, t, tau).unwrap();
            let fd = (fp - fm) / (2.0 * h);
            assert!((grad[j] - fd).abs() <= 1e-4 * (1.0 + fd.abs()), "{} vs {}", grad[j], fd);
        }
        let (fp, _) = barrier_merit(&prog, &v, t + h, tau).unwrap();
        let (fm, _) = barrier_merit(&prog, &v, t - h, tau).unwrap();
        let fd = (fp - fm) / (2.0 * h);
        assert!((grad[2] - fd).abs() <= 1e-4 * (1.0 + fd.abs()));
    }
}
