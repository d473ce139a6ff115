//! Builders that compile concrete resource-allocation problems into the
//! structured form the solver consumes.

pub mod gic;
pub mod interference;
pub mod leakage;
pub mod mwrc;

pub use gic::{build_gic, GicSpec};
pub use interference::{
    build_interference_problem, build_interference_problem_with_case, InterferenceNetwork,
    Objective, RateConstraint,
};
pub use mwrc::{
    build_mwrc_rs, build_mwrc_snd, default_rs_coefficients, solve_mwrc_snd, DecodeScheme,
    MwrcChannel, MwrcSweep, RsCoefficients,
};
