//! Assembly of the search subproblems: box bounds, feasibility checks at a
//! fixed global point, and incumbent improvement over the non-global
//! variables.

use crate::boxes::{common_maximizer, common_minimizer, BoxRegion};
use crate::config::SolverConfig;
use crate::error::Error;
use crate::problem::{CaseTag, StructuredProblem};
use crate::subsolvers::{
    solve_convex, solve_linear_fractional, solve_lp, LinearProgram, LpDomain,
    SmoothConvexProgram, SubStatus,
};
use crate::term::{AffineExpr, Term};

/// Result of bounding one box: a lower bound on the dual objective (largest
/// relaxed constraint residual) over the box intersected with the
/// current-threshold feasible set.
#[derive(Debug, Clone)]
pub struct BoundResult {
    /// `+inf` when the bounding subproblem is infeasible (no point in the box
    /// can reach the current threshold).
    pub beta: f64,
    /// Point attaining the bound: the corner minimizer in the separable case,
    /// the solver's global part otherwise.
    pub witness_x: Vec<f64>,
    /// Non-global part of the bounding solution, when one exists.
    pub witness_xi: Option<Vec<f64>>,
    /// Set when the inner solver failed; the box must not be discarded.
    pub failed: bool,
}

#[derive(Debug, Default)]
pub(crate) struct Counters {
    pub subproblems: u64,
}

/// Terms of a separable problem split at the global boundary.
pub(crate) struct SeparableParts {
    pub gplus_x: Vec<Term>,
    pub gplus_xi: Vec<Term>,
    pub num_x: Vec<Term>,
    pub num_xi: Vec<Term>,
    pub den_x: Vec<Term>,
    pub den_xi: Vec<Term>,
}

pub(crate) fn split_separable(p: &StructuredProblem) -> Result<SeparableParts, Error> {
    let ng = p.n_global;
    let split = |t: &Term| {
        t.split_at(ng).ok_or_else(|| Error::Validation("non-separable term".into()))
    };
    let mut parts = SeparableParts {
        gplus_x: Vec::new(),
        gplus_xi: Vec::new(),
        num_x: Vec::new(),
        num_xi: Vec::new(),
        den_x: Vec::new(),
        den_xi: Vec::new(),
    };
    for c in &p.constraints {
        let (x, xi) = split(&c.g_plus)?;
        parts.gplus_x.push(x);
        parts.gplus_xi.push(xi);
    }
    for pair in &p.objective {
        let (x, xi) = split(&pair.num)?;
        parts.num_x.push(x);
        parts.num_xi.push(xi);
        let (x, xi) = split(&pair.den)?;
        parts.den_x.push(x);
        parts.den_xi.push(xi);
    }
    Ok(parts)
}

/// Re-indexes a term supported on `n_global..n` onto `0..n_nonglobal`.
fn project_xi(t: &Term, ng: usize, nxi: usize) -> Term {
    debug_assert!(t.supported_within(ng..ng + nxi));
    let mut out = Term::zero(nxi);
    out.affine.c.copy_from_slice(&t.affine.c[ng..]);
    out.affine.d = t.affine.d;
    for atom in &t.logs {
        out.logs.push(crate::term::LogAtom {
            weight: atom.weight,
            arg: AffineExpr { c: atom.arg.c[ng..].to_vec(), d: atom.arg.d },
        });
    }
    out
}

/// The non-global section of the domain at a fixed global point: linear rows
/// with the global part substituted, plus the non-global bounds. Returns
/// `None` when a global-only row is violated at `x`.
fn xi_domain_at(p: &StructuredProblem, x: &[f64], tol: f64) -> Option<LpDomain> {
    let ng = p.n_global;
    let nxi = p.n_nonglobal;
    let mut a_ub = Vec::new();
    for row in &p.domain.linear {
        let shift: f64 = row.a[..ng].iter().zip(x).map(|(a, xj)| a * xj).sum();
        let coef: Vec<f64> = row.a[ng..].to_vec();
        if coef.iter().all(|&a| a == 0.0) {
            if shift > row.b + tol {
                return None;
            }
        } else {
            a_ub.push((coef, row.b - shift));
        }
    }
    let bounds = p.domain.lower[ng..]
        .iter()
        .zip(&p.domain.upper[ng..])
        .map(|(&l, &u)| (l, u))
        .collect::<Vec<_>>();
    debug_assert_eq!(bounds.len(), nxi);
    Some(LpDomain { a_ub, a_eq: Vec::new(), bounds })
}

fn pad_global(x: &[f64], n: usize) -> Vec<f64> {
    let mut v = x.to_vec();
    v.resize(n, 0.0);
    v
}

/// Computes the lower bound for one box at threshold `gamma`.
///
/// Separable case: the corner minimizer of the global parts is substituted
/// and the remaining subproblem over the non-global variables is solved (as a
/// linear program when no log atoms remain). Joint-convex case: the full
/// relaxed min-max program is solved with the barrier method. In both cases
/// the relaxation replaces `g_minus` by its value at the corner maximizer,
/// which keeps the bound tight on degenerate boxes.
pub fn bound(
    p: &StructuredProblem,
    boxr: &BoxRegion,
    gamma: f64,
    cfg: &SolverConfig,
) -> Result<BoundResult, Error> {
    let mut counters = Counters::default();
    match p.case {
        CaseTag::B => {
            let parts = split_separable(p)?;
            Ok(bound_case_b(p, &parts, boxr, gamma, cfg, &mut counters))
        }
        CaseTag::A => Ok(bound_case_a(p, boxr, gamma, cfg, &mut counters)),
    }
}

pub(crate) fn bound_case_b(
    p: &StructuredProblem,
    parts: &SeparableParts,
    boxr: &BoxRegion,
    gamma: f64,
    cfg: &SolverConfig,
    counters: &mut Counters,
) -> BoundResult {
    let ng = p.n_global;
    let nxi = p.n_nonglobal;
    let n = p.n();
    let fx = p.fx_signature.as_ref().expect("validated separable problem");
    let x_min = common_minimizer(fx, boxr);
    let x_max = common_maximizer(&p.gminus_signature, boxr);
    let x_min_pad = pad_global(&x_min, n);
    let x_max_pad = pad_global(&x_max, n);

    let fail = |x: &[f64]| BoundResult {
        beta: f64::NAN,
        witness_x: x.to_vec(),
        witness_xi: None,
        failed: true,
    };

    // Objective rows over xi: g_plus_xi_i + [g_plus_x_i(x_min) - g_minus_i(x_max)].
    let mut rows = Vec::with_capacity(p.constraints.len());
    for (i, c) in p.constraints.iter().enumerate() {
        let gx = match parts.gplus_x[i].eval(&x_min_pad) {
            Ok(v) => v,
            Err(_) => return fail(&x_min),
        };
        let gm = match c.g_minus.eval(&x_max_pad) {
            Ok(v) => v,
            Err(_) => return fail(&x_min),
        };
        rows.push(project_xi(&parts.gplus_xi[i], ng, nxi).add_constant(gx - gm));
    }
    // Threshold rows: gamma * den_xi - num_xi + [gamma * den_x - num_x](x_min) <= 0.
    let mut threshold_rows = Vec::with_capacity(p.objective.len());
    for j in 0..p.objective.len() {
        let cx = match (parts.den_x[j].eval(&x_min_pad), parts.num_x[j].eval(&x_min_pad)) {
            (Ok(d), Ok(nm)) => gamma * d - nm,
            _ => return fail(&x_min),
        };
        let row = project_xi(&parts.den_xi[j], ng, nxi)
            .scale(gamma)
            .add(&project_xi(&parts.num_xi[j], ng, nxi).scale(-1.0))
            .add_constant(cx);
        threshold_rows.push(row);
    }
    let Some(xi_dom) = xi_domain_at(p, &x_min, cfg.lp_tol) else {
        return BoundResult {
            beta: f64::INFINITY,
            witness_x: x_min,
            witness_xi: None,
            failed: false,
        };
    };

    let all_affine =
        rows.iter().all(Term::is_affine) && threshold_rows.iter().all(Term::is_affine);
    counters.subproblems += 1;
    if all_affine {
        // LP over (xi, t): minimize t with each row <= t.
        let nv = nxi + 1;
        let mut a_ub: Vec<(Vec<f64>, f64)> = Vec::new();
        for r in &rows {
            let mut coef = r.affine.c.clone();
            coef.push(-1.0);
            a_ub.push((coef, -r.affine.d));
        }
        for r in &threshold_rows {
            let mut coef = r.affine.c.clone();
            coef.push(0.0);
            a_ub.push((coef, -r.affine.d));
        }
        for (a, b) in &xi_dom.a_ub {
            let mut coef = a.clone();
            coef.push(0.0);
            a_ub.push((coef, *b));
        }
        let mut bounds = xi_dom.bounds.clone();
        bounds.push((f64::NEG_INFINITY, f64::INFINITY));
        let mut cost = vec![0.0; nv];
        cost[nxi] = 1.0;
        let lp = LinearProgram { cost, domain: LpDomain { a_ub, a_eq: Vec::new(), bounds } };
        let sol = solve_lp(&lp, cfg.lp_tol);
        match sol.status {
            SubStatus::Optimal => BoundResult {
                beta: sol.value,
                witness_x: x_min,
                witness_xi: Some(sol.point[..nxi].to_vec()),
                failed: false,
            },
            SubStatus::Infeasible => BoundResult {
                beta: f64::INFINITY,
                witness_x: x_min,
                witness_xi: None,
                failed: false,
            },
            SubStatus::Unbounded => BoundResult {
                beta: f64::NEG_INFINITY,
                witness_x: x_min,
                witness_xi: None,
                failed: false,
            },
            SubStatus::NumericalFailure => fail(&x_min),
        }
    } else {
        let mut constraints = threshold_rows;
        for (a, b) in &xi_dom.a_ub {
            constraints.push(Term::affine(a.clone(), -b));
        }
        let prog = SmoothConvexProgram {
            n: nxi,
            objective_terms: rows,
            constraints,
            equalities: Vec::new(),
            bounds: xi_dom.bounds,
        };
        let sol = solve_convex(&prog, cfg.nlp_tol);
        match sol.status {
            SubStatus::Optimal => BoundResult {
                beta: sol.value,
                witness_x: x_min,
                witness_xi: Some(sol.point),
                failed: false,
            },
            SubStatus::Infeasible => BoundResult {
                beta: f64::INFINITY,
                witness_x: x_min,
                witness_xi: None,
                failed: false,
            },
            _ => fail(&x_min),
        }
    }
}

pub(crate) fn bound_case_a(
    p: &StructuredProblem,
    boxr: &BoxRegion,
    gamma: f64,
    cfg: &SolverConfig,
    counters: &mut Counters,
) -> BoundResult {
    let ng = p.n_global;
    let n = p.n();
    let x_max = common_maximizer(&p.gminus_signature, boxr);
    let x_max_pad = pad_global(&x_max, n);

    let center: Vec<f64> =
        (0..ng).map(|j| 0.5 * (boxr.lower[j] + boxr.upper[j])).collect();
    let fail = BoundResult {
        beta: f64::NAN,
        witness_x: center,
        witness_xi: None,
        failed: true,
    };

    let mut objective_terms = Vec::with_capacity(p.constraints.len());
    for c in &p.constraints {
        let gm = match c.g_minus.eval(&x_max_pad) {
            Ok(v) => v,
            Err(_) => return fail,
        };
        objective_terms.push(c.g_plus.add_constant(-gm));
    }
    let mut constraints = Vec::new();
    for pair in &p.objective {
        constraints.push(pair.den.scale(gamma).add(&pair.num.scale(-1.0)));
    }
    for row in &p.domain.linear {
        constraints.push(Term::affine(row.a.clone(), -row.b));
    }
    let mut bounds: Vec<(f64, f64)> = Vec::with_capacity(n);
    for j in 0..ng {
        bounds.push((boxr.lower[j], boxr.upper[j]));
    }
    for j in ng..n {
        bounds.push((p.domain.lower[j], p.domain.upper[j]));
    }

    let prog = SmoothConvexProgram {
        n,
        objective_terms,
        constraints,
        equalities: Vec::new(),
        bounds,
    };
    counters.subproblems += 1;
    let sol = solve_convex(&prog, cfg.nlp_tol);
    match sol.status {
        SubStatus::Optimal => BoundResult {
            beta: sol.value,
            witness_x: sol.point[..ng].to_vec(),
            witness_xi: Some(sol.point[ng..].to_vec()),
            failed: false,
        },
        SubStatus::Infeasible => BoundResult {
            beta: f64::INFINITY,
            witness_x: common_minimizer(&p.gminus_signature, boxr),
            witness_xi: None,
            failed: false,
        },
        _ => fail,
    }
}

/// Residual terms `g_plus_i(x, .) - g_minus_i(x)` over the non-global
/// variables at a fixed global point.
fn residual_terms_at(p: &StructuredProblem, x: &[f64]) -> Option<Vec<Term>> {
    let ng = p.n_global;
    let nxi = p.n_nonglobal;
    let n = p.n();
    let x_pad = pad_global(x, n);
    let mut terms = Vec::with_capacity(p.constraints.len());
    for c in &p.constraints {
        let sub = c.g_plus.substitute_prefix(x).ok()?;
        let gm = c.g_minus.eval(&x_pad).ok()?;
        terms.push(project_xi(&sub, ng, nxi).add_constant(-gm));
    }
    Some(terms)
}

/// Searches `C_x` for a point satisfying every constraint within `feas_tol`.
/// Returns the point and the attained worst residual; absence of a point is
/// a regular outcome, and solver failures conservatively map to `None`.
pub(crate) fn feasibility_at(
    p: &StructuredProblem,
    x: &[f64],
    cfg: &SolverConfig,
    counters: &mut Counters,
) -> Option<(Vec<f64>, f64)> {
    let nxi = p.n_nonglobal;
    let terms = residual_terms_at(p, x)?;
    let xi_dom = xi_domain_at(p, x, cfg.lp_tol)?;

    if nxi == 0 {
        let worst = terms
            .iter()
            .map(|t| t.affine.d)
            .fold(f64::NEG_INFINITY, f64::max);
        return if worst <= cfg.feas_tol { Some((Vec::new(), worst)) } else { None };
    }

    counters.subproblems += 1;
    let (point, worst) = if terms.iter().all(Term::is_affine) {
        // LP over (xi, s): minimize s with residual rows relaxed by s.
        let nv = nxi + 1;
        let mut a_ub: Vec<(Vec<f64>, f64)> = Vec::new();
        for t in &terms {
            let mut coef = t.affine.c.clone();
            coef.push(-1.0);
            a_ub.push((coef, -t.affine.d));
        }
        for (a, b) in &xi_dom.a_ub {
            let mut coef = a.clone();
            coef.push(0.0);
            a_ub.push((coef, *b));
        }
        let mut bounds = xi_dom.bounds.clone();
        bounds.push((-1.0, f64::INFINITY));
        let mut cost = vec![0.0; nv];
        cost[nxi] = 1.0;
        let lp = LinearProgram { cost, domain: LpDomain { a_ub, a_eq: Vec::new(), bounds } };
        let sol = solve_lp(&lp, cfg.lp_tol);
        if !sol.is_optimal() {
            return None;
        }
        (sol.point[..nxi].to_vec(), sol.value)
    } else {
        let constraints: Vec<Term> = xi_dom
            .a_ub
            .iter()
            .map(|(a, b)| Term::affine(a.clone(), -b))
            .collect();
        let prog = SmoothConvexProgram {
            n: nxi,
            objective_terms: terms.clone(),
            constraints,
            equalities: Vec::new(),
            bounds: xi_dom.bounds.clone(),
        };
        let sol = solve_convex(&prog, cfg.nlp_tol);
        if !sol.is_optimal() {
            return None;
        }
        (sol.point, sol.value)
    };

    if worst > cfg.feas_tol {
        return None;
    }
    // Verify by strict evaluation before trusting the subsolver.
    let mut full = x.to_vec();
    full.extend_from_slice(&point);
    match p.max_residual(&full) {
        Ok(r) if r <= cfg.feas_tol => Some((point, r.max(worst))),
        _ => None,
    }
}

/// Spec-level entry point: feasibility check at a global point.
pub fn check_feasibility(
    p: &StructuredProblem,
    x: &[f64],
    cfg: &SolverConfig,
) -> Option<Vec<f64>> {
    let mut counters = Counters::default();
    feasibility_at(p, x, cfg, &mut counters).map(|(xi, _)| xi)
}

/// Best objective value over the feasible non-global section at `x`.
///
/// Dispatch: a plain LP when the denominator is constant at fixed `x` and
/// everything else is affine, a smooth concave maximization when the
/// numerator carries log terms, the Charnes-Cooper transform for a genuine
/// linear ratio, and a max-min epigraph LP for several ratios with constant
/// denominators. When none applies, the feasibility witness is evaluated
/// directly (a valid, if conservative, incumbent candidate).
pub(crate) fn improve_value_at(
    p: &StructuredProblem,
    x: &[f64],
    xi_hint: &[f64],
    slack: f64,
    cfg: &SolverConfig,
    counters: &mut Counters,
) -> Option<(f64, Vec<f64>)> {
    let nxi = p.n_nonglobal;
    let n = p.n();
    let x_pad = pad_global(x, n);

    let eval_hint = |counters: &mut Counters| -> Option<(f64, Vec<f64>)> {
        let _ = counters;
        let mut full = x.to_vec();
        full.extend_from_slice(xi_hint);
        p.objective_value(&full).ok().map(|v| (v, xi_hint.to_vec()))
    };

    if nxi == 0 {
        return p.objective_value(&x_pad).ok().map(|v| (v, Vec::new()));
    }

    let terms = residual_terms_at(p, x)?;
    let xi_dom = xi_domain_at(p, x, cfg.lp_tol)?;
    let relax = slack.max(0.0) + cfg.lp_tol;
    let rows_affine = terms.iter().all(Term::is_affine);

    // Substituted objective parts over xi.
    let mut nums = Vec::new();
    let mut dens = Vec::new();
    for pair in &p.objective {
        let num = project_xi(&pair.num.substitute_prefix(x).ok()?, p.n_global, nxi);
        let den = project_xi(&pair.den.substitute_prefix(x).ok()?, p.n_global, nxi);
        dens.push(den);
        nums.push(num);
    }
    let dens_constant = dens.iter().all(|d| d.is_affine() && d.affine.is_constant());
    let nums_affine = nums.iter().all(Term::is_affine);

    // Hard residual rows (relaxed by the measured feasibility slack so the
    // section stays nonempty under subsolver noise).
    let hard_rows = |extra_col: bool| -> Vec<(Vec<f64>, f64)> {
        let mut out = Vec::new();
        for t in &terms {
            let mut coef = t.affine.c.clone();
            if extra_col {
                coef.push(0.0);
            }
            out.push((coef, -t.affine.d + relax));
        }
        for (a, b) in &xi_dom.a_ub {
            let mut coef = a.clone();
            if extra_col {
                coef.push(0.0);
            }
            out.push((coef, *b));
        }
        out
    };

    if p.objective.len() == 1 {
        let num = &nums[0];
        let den = &dens[0];
        if dens_constant {
            let d0 = den.affine.d;
            if d0 <= 0.0 {
                return None;
            }
            if nums_affine && rows_affine {
                counters.subproblems += 1;
                let cost: Vec<f64> = num.affine.c.iter().map(|c| -c).collect();
                let lp = LinearProgram {
                    cost,
                    domain: LpDomain {
                        a_ub: hard_rows(false),
                        a_eq: Vec::new(),
                        bounds: xi_dom.bounds.clone(),
                    },
                };
                let sol = solve_lp(&lp, cfg.lp_tol);
                if !sol.is_optimal() {
                    return eval_hint(counters);
                }
                let value = (-sol.value + num.affine.d) / d0;
                return Some((value, sol.point));
            }
            // Concave numerator: minimize -num over the section.
            counters.subproblems += 1;
            let mut constraints: Vec<Term> =
                terms.iter().map(|t| t.add_constant(-relax)).collect();
            for (a, b) in &xi_dom.a_ub {
                constraints.push(Term::affine(a.clone(), -b));
            }
            let prog = SmoothConvexProgram {
                n: nxi,
                objective_terms: vec![num.scale(-1.0)],
                constraints,
                equalities: Vec::new(),
                bounds: xi_dom.bounds.clone(),
            };
            let sol = solve_convex(&prog, cfg.nlp_tol);
            if !sol.is_optimal() {
                return eval_hint(counters);
            }
            return Some((-sol.value / d0, sol.point));
        }
        if nums_affine && rows_affine {
            counters.subproblems += 1;
            let domain = LpDomain {
                a_ub: hard_rows(false),
                a_eq: Vec::new(),
                bounds: xi_dom.bounds.clone(),
            };
            let sol = solve_linear_fractional(&num.affine, &den.affine, &domain);
            if sol.is_optimal() {
                return Some((sol.value, sol.point));
            }
            return eval_hint(counters);
        }
        return eval_hint(counters);
    }

    // Several ratio pairs: max-min over the section.
    if dens_constant && nums_affine && rows_affine {
        if dens.iter().any(|d| d.affine.d <= 0.0) {
            return None;
        }
        counters.subproblems += 1;
        let nv = nxi + 1;
        let mut a_ub = hard_rows(true);
        for (num, den) in nums.iter().zip(&dens) {
            // t * den - num <= 0
            let mut coef: Vec<f64> = num.affine.c.iter().map(|c| -c).collect();
            coef.push(den.affine.d);
            a_ub.push((coef, num.affine.d));
        }
        let mut bounds = xi_dom.bounds.clone();
        bounds.push((f64::NEG_INFINITY, f64::INFINITY));
        let mut cost = vec![0.0; nv];
        cost[nxi] = -1.0;
        let lp = LinearProgram { cost, domain: LpDomain { a_ub, a_eq: Vec::new(), bounds } };
        let sol = solve_lp(&lp, cfg.lp_tol);
        if !sol.is_optimal() {
            return eval_hint(counters);
        }
        return Some((sol.point[nxi], sol.point[..nxi].to_vec()));
    }
    eval_hint(counters)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library::leakage;
    use crate::problem::{ConstraintPair, ConvexSet, RatioPair};

    fn cfg() -> SolverConfig {
        SolverConfig::default()
    }

    #[test]
    fn bound_on_initial_box_is_nonpositive_with_witnesses_inside() {
        // Feasible problem: the dual optimum over the whole box cannot exceed 0.
        let (p, _) = leakage::power_min_problem(leakage::CLASSIC_LEAKAGE_BUDGET);
        let boxr = BoxRegion::new(vec![0.0, 0.0], vec![5.0, 5.0]).unwrap();
        let r = bound(&p, &boxr, 0.0, &cfg()).unwrap();
        assert!(!r.failed);
        assert!(r.beta <= 0.0, "beta {}", r.beta);
        assert!(boxr.contains(&r.witness_x, 1e-12));
    }

    #[test]
    fn bound_on_violating_box_is_positive() {
        // Low-power boxes violate the throughput floor: residual at the
        // relaxed corner is log2(61) - log2(1 + 20) > 0.
        let (p, _) = leakage::power_min_problem(leakage::CLASSIC_LEAKAGE_BUDGET);
        let boxr = BoxRegion::new(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
        let r = bound(&p, &boxr, -10.0, &cfg()).unwrap();
        let expect = 61f64.log2() - 21f64.log2();
        assert!((r.beta - expect).abs() < 1e-9, "beta {} expect {}", r.beta, expect);
        assert!(r.beta > 0.0);
    }

    #[test]
    fn bound_tight_on_degenerate_box() {
        let (p, _) = leakage::power_min_problem(leakage::CLASSIC_LEAKAGE_BUDGET);
        let x = vec![4.2, 1.9];
        let boxr = BoxRegion::new(x.clone(), x.clone()).unwrap();
        let r = bound(&p, &boxr, -10.0, &cfg()).unwrap();
        // With both corners equal, the bound equals the exact dual value.
        let exact = p.max_residual(&x).unwrap();
        assert!((r.beta - exact).abs() < 1e-10, "beta {} exact {}", r.beta, exact);
    }

    #[test]
    fn feasibility_at_known_points() {
        let (p, _) = leakage::power_min_problem(leakage::CLASSIC_LEAKAGE_BUDGET);
        let mut cfg = cfg();
        cfg.feas_tol = 1e-4;
        // The reported optimum satisfies both constraints to ~1e-5.
        assert!(check_feasibility(&p, &[4.00665, 1.99335], &cfg).is_some());
        // Throughput floor violated: 1 + 10 * 5.9 = 60 < 61.
        assert!(check_feasibility(&p, &[0.9, 5.0], &cfg).is_none());
    }

    #[test]
    fn improve_value_handles_pure_global_problems() {
        let (p, _) = leakage::power_min_problem(leakage::CLASSIC_LEAKAGE_BUDGET);
        let mut counters = Counters::default();
        let (v, xi) =
            improve_value_at(&p, &[4.5, 1.7], &[], 0.0, &cfg(), &mut counters).unwrap();
        assert!(xi.is_empty());
        assert!((v + 4.5).abs() < 1e-12);
    }

    #[test]
    fn improve_value_maximizes_ratio_over_section() {
        // One global (fixed), one non-global; maximize xi / (xi + 1) with
        // xi <= x0 via a constraint pair.
        use crate::term::Term;
        let n = 2;
        let p = StructuredProblem {
            n_global: 1,
            n_nonglobal: 1,
            objective: vec![RatioPair {
                num: Term::affine(vec![0.0, 1.0], 0.0),
                den: Term::affine(vec![0.0, 1.0], 1.0),
            }],
            constraints: vec![ConstraintPair {
                // xi - x0 <= 0
                g_plus: Term::affine(vec![-1.0, 1.0], 0.0),
                g_minus: Term::zero(n),
            }],
            gminus_signature: vec![1],
            case: CaseTag::B,
            fx_signature: Some(vec![-1]),
            domain: ConvexSet::bounds_only(vec![0.0, 0.0], vec![3.0, 10.0]),
        };
        assert!(p.validate().is_ok(), "{}", p.validate());
        let mut counters = Counters::default();
        let (v, xi) =
            improve_value_at(&p, &[3.0], &[0.0], 0.0, &cfg(), &mut counters).unwrap();
        assert!((v - 0.75).abs() < 1e-7, "value {v}");
        assert!((xi[0] - 3.0).abs() < 1e-6);
    }
}
