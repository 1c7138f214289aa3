//! Run configuration, run output files, and the drivers behind the command line.

mod config;
mod output;
mod run;

pub use config::{
    InputBand, OutputConfig, PlannerSection, PlanningSetup, ProblemConfig, RunConfig, SimulationConfig, SystemConfig,
    SystemName,
};
pub use output::{
    EdgeKind, EdgeRecord, PartialPlans, PhaseRecord, RunOutput, SolutionPairRecord, Timing, TreeRecord, Trees,
    VertexRecord,
};
pub use run::{median, run_benchmark, run_plan, validate_output, ModeSummary, RunRecord};
