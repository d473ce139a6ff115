//! Inner solvers for the subproblems generated during the search: a two-phase
//! simplex for linear programs and a log-barrier interior-point method for
//! smooth convex programs from the term grammar.

pub mod barrier;
pub mod fractional;
pub mod simplex;

pub use barrier::{solve_convex, SmoothConvexProgram};
pub use fractional::solve_linear_fractional;
pub use simplex::{solve_lp, LinearProgram, LpDomain};

/// Termination status of an inner solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubStatus {
    Optimal,
    Infeasible,
    Unbounded,
    NumericalFailure,
}

/// Result of an inner solve. `point` and `value` are meaningful for
/// `Optimal`; `value` is the objective of the solved problem.
#[derive(Debug, Clone)]
pub struct SubSolution {
    pub status: SubStatus,
    pub point: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    /// |primal - dual| objective gap in the solver's internal standard form
    /// (simplex) or the final barrier duality-gap estimate.
    pub duality_gap: f64,
    /// Largest constraint violation of the returned point.
    pub primal_residual: f64,
}

impl SubSolution {
    pub(crate) fn failed(status: SubStatus) -> Self {
        SubSolution {
            status,
            point: Vec::new(),
            value: f64::NAN,
            iterations: 0,
            duality_gap: f64::NAN,
            primal_residual: f64::NAN,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == SubStatus::Optimal
    }
}
