//! Best-first branch-and-bound over the global variables.
//!
//! Each cycle bounds the pending boxes, discards those that certifiably
//! contain no point beating the incumbent threshold with `epsilon` slack,
//! pops the box with the smallest bound, probes its witness for feasibility,
//! possibly improves the incumbent (raising the threshold by `eta`), and
//! bisects adaptively between the bounding witness and the relaxation corner.
//! The active set is carried across incumbent updates; bounds only grow as
//! the threshold rises, so no box is ever discarded prematurely.

use std::collections::BinaryHeap;
use std::time::Instant;

use serde::Serialize;

use crate::boxes::{common_maximizer, BoxRegion};
use crate::config::{Incumbent, SolveOutcome, SolveStatus, SolverConfig};
use crate::error::Error;
use crate::problem::{CaseTag, StructuredProblem};
use crate::subproblems::{
    bound_case_a, bound_case_b, feasibility_at, improve_value_at, split_separable, BoundResult,
    Counters, SeparableParts,
};
use crate::subsolvers::{solve_lp, LinearProgram, LpDomain, SubStatus};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TraceAction {
    Retain,
    Delete,
    IncumbentUpdate,
}

/// One record per examined box, emitted when tracing is enabled.
#[derive(Debug, Clone, Serialize)]
pub struct TraceEvent {
    pub k: u64,
    #[serde(rename = "box")]
    pub region: BoxRegion,
    pub beta: f64,
    pub action: TraceAction,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
}

pub trait TraceSink {
    fn record(&mut self, event: &TraceEvent);
}

/// Sink that drops every event.
pub struct NullTrace;

impl TraceSink for NullTrace {
    fn record(&mut self, _: &TraceEvent) {}
}

impl<F: FnMut(&TraceEvent)> TraceSink for F {
    fn record(&mut self, event: &TraceEvent) {
        self(event)
    }
}

/// Smallest box `[p, q]` containing the global section of the domain,
/// computed by one minimizing and one maximizing LP per global dimension.
pub fn initial_box(p: &StructuredProblem, cfg: &SolverConfig) -> Result<BoxRegion, Error> {
    let mut counters = Counters::default();
    initial_box_counted(p, cfg, &mut counters)
}

fn initial_box_counted(
    p: &StructuredProblem,
    cfg: &SolverConfig,
    counters: &mut Counters,
) -> Result<BoxRegion, Error> {
    let n = p.n();
    let domain = LpDomain {
        a_ub: p.domain.linear.iter().map(|r| (r.a.clone(), r.b)).collect(),
        a_eq: Vec::new(),
        bounds: p.domain.lower.iter().zip(&p.domain.upper).map(|(&l, &u)| (l, u)).collect(),
    };
    let mut lower = Vec::with_capacity(p.n_global);
    let mut upper = Vec::with_capacity(p.n_global);
    for j in 0..p.n_global {
        for minimize in [true, false] {
            let mut cost = vec![0.0; n];
            cost[j] = if minimize { 1.0 } else { -1.0 };
            let lp = LinearProgram { cost, domain: domain.clone() };
            counters.subproblems += 1;
            let sol = solve_lp(&lp, cfg.lp_tol);
            match sol.status {
                SubStatus::Optimal => {
                    if minimize {
                        lower.push(sol.value);
                    } else {
                        upper.push(-sol.value);
                    }
                }
                SubStatus::Unbounded => return Err(Error::UnboundedDomain { dim: j }),
                SubStatus::Infeasible => return Err(Error::EmptyDomain),
                SubStatus::NumericalFailure => {
                    return Err(Error::Subsolver(format!(
                        "initial box LP failed in dimension {j}"
                    )))
                }
            }
        }
    }
    BoxRegion::new(lower, upper)
}

struct QueueNode {
    beta: f64,
    seq: u64,
    region: BoxRegion,
    bound: BoundResult,
}

impl PartialEq for QueueNode {
    fn eq(&self, other: &Self) -> bool {
        self.beta == other.beta && self.seq == other.seq
    }
}
impl Eq for QueueNode {}
impl PartialOrd for QueueNode {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for QueueNode {
    // BinaryHeap is a max-heap; invert so the smallest bound pops first,
    // FIFO on ties.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        other
            .beta
            .total_cmp(&self.beta)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

enum CaseData {
    A,
    B(SeparableParts),
}

/// Solves the problem to essential `(epsilon, eta)`-optimality.
pub fn solve(p: &StructuredProblem, cfg: &SolverConfig) -> Result<SolveOutcome, Error> {
    solve_traced(p, cfg, &mut NullTrace)
}

pub fn solve_traced(
    p: &StructuredProblem,
    cfg: &SolverConfig,
    trace: &mut dyn TraceSink,
) -> Result<SolveOutcome, Error> {
    cfg.validate()?;
    let report = p.validate();
    if !report.is_ok() {
        return Err(Error::Validation(report.to_string()));
    }
    if p.constraints.is_empty() {
        return Err(Error::Validation("problem has no constraints".into()));
    }

    let start = Instant::now();
    let mut counters = Counters::default();
    let case_data = match p.case {
        CaseTag::B => CaseData::B(split_separable(p)?),
        CaseTag::A => CaseData::A,
    };
    let bound_box = |region: &BoxRegion,
                     gamma: f64,
                     relaxed: bool,
                     counters: &mut Counters|
     -> BoundResult {
        let mut local = cfg.clone();
        if relaxed {
            // Retry path for a numerically failed bound: rerun with softer
            // inner tolerances, which changes the barrier trajectory.
            local.nlp_tol *= 100.0;
            local.lp_tol *= 100.0;
        }
        match &case_data {
            CaseData::B(parts) => bound_case_b(p, parts, region, gamma, &local, counters),
            CaseData::A => bound_case_a(p, region, gamma, &local, counters),
        }
    };

    let root = initial_box_counted(p, cfg, &mut counters)?;
    let mut queue: BinaryHeap<QueueNode> = BinaryHeap::new();
    let mut pending: Vec<(BoxRegion, bool)> = vec![(root, false)];
    let mut gamma = cfg.gamma0;
    let mut incumbent: Option<Incumbent> = None;
    let mut nodes: u64 = 0;
    let mut seq: u64 = 0;

    let outcome = |status: SolveStatus,
                   incumbent: Option<Incumbent>,
                   gamma: f64,
                   nodes: u64,
                   counters: &Counters| SolveOutcome {
        status,
        objective_value: incumbent.as_ref().map(|i| i.value),
        incumbent,
        gamma,
        nodes_expanded: nodes,
        subproblems_solved: counters.subproblems,
        wall_time: start.elapsed(),
    };

    loop {
        // Bound every pending box; keep those that may still contain an
        // essentially feasible point beating the threshold.
        for (region, retried) in std::mem::take(&mut pending) {
            let result = bound_box(&region, gamma, retried, &mut counters);
            if result.failed {
                if retried {
                    return Err(Error::BoundingFailed { node: nodes });
                }
                pending.push((region, true));
                continue;
            }
            let retain = result.beta <= -cfg.epsilon;
            trace.record(&TraceEvent {
                k: nodes + 1,
                region: region.clone(),
                beta: result.beta,
                action: if retain { TraceAction::Retain } else { TraceAction::Delete },
                gamma: None,
            });
            if retain {
                seq += 1;
                queue.push(QueueNode { beta: result.beta, seq, region, bound: result });
            }
        }

        let Some(node) = queue.pop() else {
            let status = if incumbent.is_some() {
                SolveStatus::EssentialOptimal
            } else {
                debug_assert_eq!(gamma, cfg.gamma0);
                SolveStatus::EssentialInfeasible
            };
            return Ok(outcome(status, incumbent, gamma, nodes, &counters));
        };
        nodes += 1;
        if nodes > cfg.max_nodes {
            return Ok(outcome(
                SolveStatus::NodeBudgetExceeded,
                incumbent,
                gamma,
                nodes,
                &counters,
            ));
        }

        let region = node.region;
        let x_k = node.bound.witness_x.clone();
        let y_k = common_maximizer(&p.gminus_signature, &region);
        let degenerate = region.is_point();

        // Feasibility probe at the witness. On a degenerate box the bound is
        // exact, so its own non-global witness already certifies feasibility.
        let feas = if degenerate {
            let xi = node.bound.witness_xi.clone().unwrap_or_default();
            let mut full = x_k.clone();
            full.extend_from_slice(&xi);
            match p.max_residual(&full) {
                Ok(r) if r <= cfg.feas_tol => Some((xi, r)),
                _ => feasibility_at(p, &x_k, cfg, &mut counters),
            }
        } else {
            feasibility_at(p, &x_k, cfg, &mut counters)
        };

        let mut updated = false;
        if let Some((xi_w, slack)) = feas {
            if let Some((value, xi_star)) =
                improve_value_at(p, &x_k, &xi_w, slack, cfg, &mut counters)
            {
                let improves = incumbent.as_ref().map_or(true, |_| value > gamma - cfg.eta);
                if improves {
                    incumbent = Some(Incumbent { x: x_k.clone(), xi: xi_star, value });
                    gamma = value + cfg.eta;
                    updated = true;
                    trace.record(&TraceEvent {
                        k: nodes,
                        region: region.clone(),
                        beta: node.beta,
                        action: TraceAction::IncumbentUpdate,
                        gamma: Some(gamma),
                    });
                }
            }
        }

        if degenerate {
            // Nothing to bisect. Re-examine the point under the raised
            // threshold; without an update the point is exhausted.
            if updated {
                pending.push((region, false));
            }
            continue;
        }
        let (left, right) = region.bisect(&x_k, &y_k)?;
        pending.push((left, false));
        pending.push((right, false));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library::leakage;
    use crate::problem::{ConstraintPair, ConvexSet, RatioPair};
    use crate::term::Term;

    #[test]
    fn initial_box_from_simplex_domain() {
        // C = {x0 + x1 <= 1, x >= 0} -> [0, 1]^2
        let p = StructuredProblem {
            n_global: 2,
            n_nonglobal: 0,
            objective: vec![RatioPair {
                num: Term::affine(vec![1.0, 1.0], 0.0),
                den: Term::constant(2, 1.0),
            }],
            constraints: vec![ConstraintPair {
                g_plus: Term::affine(vec![1.0, 1.0], -1.0),
                g_minus: Term::zero(2),
            }],
            gminus_signature: vec![1, 1],
            case: CaseTag::B,
            fx_signature: Some(vec![1, 1]),
            domain: ConvexSet {
                lower: vec![0.0, 0.0],
                upper: vec![f64::INFINITY, f64::INFINITY],
                linear: vec![crate::problem::LinearIneq { a: vec![1.0, 1.0], b: 1.0 }],
            },
        };
        let b = initial_box(&p, &SolverConfig::default()).unwrap();
        assert_eq!(b.lower, vec![0.0, 0.0]);
        assert!((b.upper[0] - 1.0).abs() < 1e-9);
        assert!((b.upper[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn initial_box_unbounded_domain_is_an_error() {
        let p = StructuredProblem {
            n_global: 1,
            n_nonglobal: 0,
            objective: vec![RatioPair {
                num: Term::affine(vec![-1.0], 0.0),
                den: Term::constant(1, 1.0),
            }],
            constraints: vec![ConstraintPair {
                g_plus: Term::affine(vec![-1.0], 0.5),
                g_minus: Term::zero(1),
            }],
            gminus_signature: vec![1],
            case: CaseTag::B,
            fx_signature: Some(vec![1]),
            domain: ConvexSet::bounds_only(vec![0.0], vec![f64::INFINITY]),
        };
        assert!(matches!(
            initial_box(&p, &SolverConfig::default()),
            Err(Error::UnboundedDomain { dim: 0 })
        ));
    }

    #[test]
    fn power_minimization_reaches_reported_optimum() {
        let (p, gamma0) = leakage::power_min_problem(leakage::CLASSIC_LEAKAGE_BUDGET);
        let cfg = SolverConfig {
            epsilon: 1e-5,
            eta: 1e-3,
            gamma0,
            ..SolverConfig::default()
        };
        let out = solve(&p, &cfg).unwrap();
        assert_eq!(out.status, SolveStatus::EssentialOptimal);
        let inc = out.incumbent.expect("incumbent");
        assert!(
            (-inc.value - 4.00665).abs() <= 1e-3,
            "objective {} nodes {}",
            inc.value,
            out.nodes_expanded
        );
        assert!((inc.x[0] - 4.00665).abs() <= 1e-3, "x0 {}", inc.x[0]);
        assert!((inc.x[1] - 1.99335).abs() <= 1e-3, "x1 {}", inc.x[1]);
    }

    #[test]
    fn isolated_point_is_never_returned() {
        // With the larger leakage budget the boundary curves meet the power
        // cap at the isolated point (1, 5); the essential optimum is at
        // p0 = 4 and the isolated point must never be reported.
        let (p, gamma0) = leakage::power_min_problem(leakage::ISOLATED_LEAKAGE_BUDGET);
        let cfg = SolverConfig {
            epsilon: 1e-5,
            eta: 1e-3,
            gamma0,
            ..SolverConfig::default()
        };
        let out = solve(&p, &cfg).unwrap();
        assert_eq!(out.status, SolveStatus::EssentialOptimal);
        let inc = out.incumbent.expect("incumbent");
        assert!((inc.x[0] - 4.0).abs() <= 1e-2, "x0 {}", inc.x[0]);
        assert!((inc.x[0] - 1.0).abs() > 0.5, "returned the isolated point");
    }

    #[test]
    fn infeasible_problem_reports_essential_infeasibility() {
        // Raise the throughput floor beyond reach: max achievable is
        // log2(1 + 10 * 10) << log2(1e6).
        let (p, gamma0) = leakage::power_min_with_qos(
            leakage::CLASSIC_LEAKAGE_BUDGET,
            1_000_000f64.log2(),
        );
        let cfg = SolverConfig {
            epsilon: 1e-5,
            eta: 1e-3,
            gamma0,
            ..SolverConfig::default()
        };
        let out = solve(&p, &cfg).unwrap();
        assert_eq!(out.status, SolveStatus::EssentialInfeasible);
        assert!(out.incumbent.is_none());
        assert_eq!(out.gamma, gamma0);
    }

    #[test]
    fn node_budget_preserves_incumbent() {
        let (p, gamma0) = leakage::power_min_problem(leakage::CLASSIC_LEAKAGE_BUDGET);
        let cfg = SolverConfig {
            epsilon: 1e-5,
            eta: 1e-3,
            gamma0,
            max_nodes: 25,
            ..SolverConfig::default()
        };
        let out = solve(&p, &cfg).unwrap();
        assert_eq!(out.status, SolveStatus::NodeBudgetExceeded);
        if let Some(inc) = out.incumbent {
            let v = inc.full_point();
            assert!(p.is_feasible(&v, 1e-6), "budget incumbent must stay feasible");
        }
    }

    #[test]
    fn trace_records_every_examined_box() {
        let (p, gamma0) = leakage::power_min_problem(leakage::CLASSIC_LEAKAGE_BUDGET);
        let cfg = SolverConfig {
            epsilon: 1e-5,
            eta: 1e-2,
            gamma0,
            ..SolverConfig::default()
        };
        let mut events: Vec<TraceEvent> = Vec::new();
        let mut sink = |e: &TraceEvent| events.push(e.clone());
        let out = solve_traced(&p, &cfg, &mut sink).unwrap();
        assert_eq!(out.status, SolveStatus::EssentialOptimal);
        assert!(events.iter().any(|e| e.action == TraceAction::Retain));
        assert!(events.iter().any(|e| e.action == TraceAction::Delete));
        assert!(events.iter().any(|e| e.action == TraceAction::IncumbentUpdate));
        // Incumbent updates carry the raised threshold.
        for e in &events {
            if e.action == TraceAction::IncumbentUpdate {
                assert!(e.gamma.is_some());
            }
        }
    }
}
