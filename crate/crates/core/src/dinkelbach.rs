//! Dinkelbach outer iteration for single-ratio objectives, using the
//! branch-and-bound engine as the global inner solver.
//!
//! The direct engine handles ratios natively; this baseline exists to
//! reproduce the cost comparison: each outer iteration solves a full global
//! auxiliary problem `max f_plus - lambda * f_minus`, and convergence is
//! only guaranteed when the inner solves are accurate, so the inner
//! precision is tightened as the iteration proceeds.

use crate::config::{Incumbent, SolveStatus, SolverConfig};
use crate::engine::solve;
use crate::error::Error;
use crate::problem::{RatioPair, StructuredProblem};
use crate::term::Term;

#[derive(Debug, Clone)]
pub struct DinkelbachConfig {
    /// Stop once `|max(f_plus - lambda f_minus)| <= lambda_tol`.
    pub lambda_tol: f64,
    pub max_outer: usize,
    /// Starting ratio parameter; zero is valid for non-negative numerators.
    pub lambda0: f64,
    /// Inner solver configuration; `eta` is overridden per iteration,
    /// starting at `lambda_tol / 10` and halving.
    pub inner: SolverConfig,
    /// Explicit threshold for the auxiliary problems when the automatic
    /// interval bound is unbounded.
    pub inner_gamma0: Option<f64>,
}

impl Default for DinkelbachConfig {
    fn default() -> Self {
        DinkelbachConfig {
            lambda_tol: 1e-4,
            max_outer: 60,
            lambda0: 0.0,
            inner: SolverConfig::default(),
            inner_gamma0: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct DinkelbachOutcome {
    pub status: SolveStatus,
    /// Final ratio value (the last lambda iterate).
    pub value: Option<f64>,
    pub incumbent: Option<Incumbent>,
    pub outer_iterations: usize,
    /// Nodes expanded across every inner solve.
    pub total_nodes: u64,
    pub total_subproblems: u64,
    /// `(lambda_t, F(lambda_t))` per outer iteration.
    pub history: Vec<(f64, f64)>,
}

/// Solves a single-ratio problem by the classical parametric iteration.
pub fn dinkelbach_solve(
    p: &StructuredProblem,
    cfg: &DinkelbachConfig,
) -> Result<DinkelbachOutcome, Error> {
    if p.objective.len() != 1 {
        return Err(Error::Validation(
            "the parametric baseline requires a single ratio pair".into(),
        ));
    }
    let num = p.objective[0].num.clone();
    let den = p.objective[0].den.clone();
    let n = p.n();

    let mut lambda = cfg.lambda0;
    let mut total_nodes = 0;
    let mut total_subproblems = 0;
    let mut history = Vec::new();

    for it in 0..cfg.max_outer {
        let aux_obj = num.add(&den.scale(-lambda));
        let gamma0 = match cfg.inner_gamma0 {
            Some(g) => g,
            None => {
                let lb = aux_obj.lower_bound(&p.domain.lower, &p.domain.upper);
                if !lb.is_finite() {
                    return Err(Error::Gamma0(
                        "auxiliary objective is unbounded below over the domain bounds; \
                         set an explicit inner threshold"
                            .into(),
                    ));
                }
                lb
            }
        };
        let aux = StructuredProblem {
            objective: vec![RatioPair { num: aux_obj, den: Term::constant(n, 1.0) }],
            ..p.clone()
        };
        let eta = (cfg.lambda_tol / 10.0) / (1u64 << it.min(40)) as f64;
        let inner_cfg = SolverConfig {
            eta: eta.max(1e-9),
            gamma0,
            ..cfg.inner.clone()
        };
        let out = solve(&aux, &inner_cfg)?;
        total_nodes += out.nodes_expanded;
        total_subproblems += out.subproblems_solved;
        match out.status {
            SolveStatus::EssentialOptimal => {}
            SolveStatus::EssentialInfeasible => {
                return Ok(DinkelbachOutcome {
                    status: SolveStatus::EssentialInfeasible,
                    value: None,
                    incumbent: None,
                    outer_iterations: it + 1,
                    total_nodes,
                    total_subproblems,
                    history,
                })
            }
            SolveStatus::NodeBudgetExceeded => {
                return Err(Error::Subsolver(
                    "inner node budget exceeded during the parametric iteration".into(),
                ))
            }
        }
        let incumbent = out.incumbent.expect("optimal outcome has an incumbent");
        let f_value = out.objective_value.expect("optimal outcome has a value");
        history.push((lambda, f_value));

        let full = incumbent.full_point();
        let num_v = num.eval(&full)?;
        let den_v = den.eval(&full)?;
        if den_v <= 0.0 {
            return Err(Error::NonPositiveDenominator { value: den_v });
        }
        let ratio = num_v / den_v;

        if f_value.abs() <= cfg.lambda_tol {
            return Ok(DinkelbachOutcome {
                status: SolveStatus::EssentialOptimal,
                value: Some(ratio),
                incumbent: Some(Incumbent { value: ratio, ..incumbent }),
                outer_iterations: it + 1,
                total_nodes,
                total_subproblems,
                history,
            });
        }
        lambda = ratio;
    }
    Err(Error::MaxOuterIterations(cfg.max_outer))
}
