//! Bidirectional RRT-type motion planning for hybrid systems.

// `!(a <= b)` is used on purpose so that NaN fails range checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod hybrid_time;
pub mod io;
pub mod planner;
pub mod simulation;
pub mod systems;

pub use error::{Error, Result};
pub use hybrid_time::{
    concatenate, reverse, validate_solution_pair, BoundaryInputPolicy, HybridSignal, HybridTime, HybridTimeDomain,
    Interval, Phase, SolutionPair, ValidationReport, ValidationTolerances,
};
pub use systems::{HybridSystem, JumpImage, MotionPlanningProblem};
