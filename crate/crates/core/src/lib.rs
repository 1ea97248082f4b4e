//! Stochastic minimax solvers for problems that are nonconvex in `x` and
//! strongly concave in `y`, under `(L0, L1)` generalized smoothness.
//!
//! The crate provides the NSGDA-M, NSGDA and SGDA solvers, closed-form
//! hyperparameter schedules, a distributionally robust logistic-regression
//! problem with an exact best response, a synthetic quartic problem, a LIBSVM
//! reader, and numerical oracles for testing all of the above.

pub mod constants;
pub mod data;
pub mod domain;
pub mod error;
pub mod linalg;
pub mod optimizers;
pub mod problem;
pub mod problems;
pub mod projections;
pub mod rng;
pub mod schedules;
pub mod verify;

pub use constants::{derive_constants, DerivedConstants, ProblemConstants};
pub use domain::{membership_check, DualDomain};
pub use error::{Error, Result};
pub use optimizers::{
    nsgda_m_run, nsgda_m_step, nsgda_run, run, sgda_run, Algorithm, EvalMode, HyperParams, NullRecorder, Recorder,
    RunConfig, RunOutput,
};
pub use problem::{IterateState, MinimaxProblem, RunRecord};
pub use projections::{brute_force_simplex_projection, project, ProjectionReport};
pub use schedules::{
    check_init, schedule, schedule_thm1, schedule_thm2, schedule_thm3, schedule_thm4, InitCheck, ScheduleRequest,
    ScheduleResult, ScheduleSource,
};
