//! Solver configuration and outcome types.

use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Which constraint decomposition the library builders emit for rate
/// constraints: `Tight` subtracts the full-interference log from `g_plus`
/// (decreasing global parts, tighter bounds), `Separable` keeps both logs
/// increasing (cheaper, typically linear, bounding subproblems).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Identification {
    #[default]
    Tight,
    Separable,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Essential-feasibility slack: a box is discarded once no point in it can
    /// satisfy every constraint with slack `epsilon`.
    pub epsilon: f64,
    /// Objective precision: the returned value is within `eta` of the best
    /// essentially feasible value.
    pub eta: f64,
    /// Initial incumbent threshold; must not exceed the objective value of any
    /// feasible point. Zero is valid whenever the numerator is non-negative.
    pub gamma0: f64,
    /// Node budget; the solve stops with the current incumbent when exceeded.
    pub max_nodes: u64,
    /// Feasibility tolerance for accepting incumbent points.
    pub feas_tol: f64,
    /// Simplex tolerance.
    pub lp_tol: f64,
    /// Barrier-solver tolerance.
    pub nlp_tol: f64,
    /// Constraint decomposition used by the problem-library builders.
    pub identification: Identification,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            epsilon: 1e-5,
            eta: 0.01,
            gamma0: 0.0,
            max_nodes: 10_000_000,
            feas_tol: 1e-6,
            lp_tol: 1e-9,
            nlp_tol: 1e-8,
            identification: Identification::Tight,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if !(self.epsilon > 0.0) {
            return Err(Error::Config("epsilon must be positive".into()));
        }
        if !(self.eta > 0.0) {
            return Err(Error::Config("eta must be positive".into()));
        }
        if !(self.feas_tol < self.epsilon) {
            return Err(Error::Config("feas_tol must be smaller than epsilon".into()));
        }
        if !(self.lp_tol > 0.0 && self.nlp_tol > 0.0) {
            return Err(Error::Config("solver tolerances must be positive".into()));
        }
        if self.max_nodes == 0 {
            return Err(Error::Config("max_nodes must be at least 1".into()));
        }
        Ok(())
    }
}

/// Best known nonisolated feasible point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Incumbent {
    pub x: Vec<f64>,
    pub xi: Vec<f64>,
    pub value: f64,
}

impl Incumbent {
    pub fn full_point(&self) -> Vec<f64> {
        let mut v = self.x.clone();
        v.extend_from_slice(&self.xi);
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveStatus {
    /// The incumbent is within `eta` of the best value attained with
    /// `epsilon` constraint slack.
    EssentialOptimal,
    /// No point satisfies every constraint with slack `epsilon`.
    EssentialInfeasible,
    /// Node budget exhausted; the incumbent, if any, is still feasible.
    NodeBudgetExceeded,
}

impl std::fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SolveStatus::EssentialOptimal => "essential-optimal",
            SolveStatus::EssentialInfeasible => "essential-infeasible",
            SolveStatus::NodeBudgetExceeded => "budget-exceeded",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    pub incumbent: Option<Incumbent>,
    pub objective_value: Option<f64>,
    /// Final incumbent threshold (best value plus `eta`, or `gamma0` when no
    /// incumbent was found).
    pub gamma: f64,
    pub nodes_expanded: u64,
    pub subproblems_solved: u64,
    pub wall_time: Duration,
}
