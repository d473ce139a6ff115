//! Global optimization for resource-allocation problems whose non-convexity
//! is confined to a few variables.
//!
//! The solver runs a best-first branch-and-bound over the global variables
//! only. Instead of approximating the original maximization from outside, it
//! repeatedly asks a dual feasibility question: does a nonisolated feasible
//! point exist that beats the incumbent value by more than the precision
//! `eta`? Boxes whose bound shows that every point violates some constraint
//! by at least `epsilon` are discarded, which makes the procedure immune to
//! isolated or fragile feasible points. Fractional objectives are handled
//! directly by the same machinery, without an outer Dinkelbach loop.
//!
//! The crate ships the solver core, a library of interference-network
//! problem builders, a Dinkelbach baseline for comparison, and a benchmark
//! harness behind the `sitopt` command-line tool.

pub mod bench;
pub mod boxes;
pub mod config;
pub mod dinkelbach;
pub mod engine;
pub mod error;
pub mod library;
pub mod problem;
pub mod rng;
pub mod subproblems;
pub mod subsolvers;
pub mod term;

pub use boxes::{common_maximizer, common_minimizer, BoxRegion};
pub use config::{Identification, Incumbent, SolveOutcome, SolveStatus, SolverConfig};
pub use engine::{initial_box, solve, solve_traced, NullTrace, TraceAction, TraceEvent, TraceSink};
pub use error::Error;
pub use problem::{
    validate_problem, CaseTag, ConstraintPair, ConvexSet, LinearIneq, RatioPair,
    StructuredProblem, ValidationReport,
};
pub use subproblems::{bound, check_feasibility, BoundResult};
pub use term::{AffineExpr, Term, TermExpr};
