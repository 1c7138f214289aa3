use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hybrid_time::{BoundaryInputPolicy, ValidationTolerances};
use crate::planner::{PlannerConfig, PlannerMode};
use crate::simulation::{FlowOptions, InputLibrary};
use crate::systems::{
    bouncing_ball, BouncingBallParams, BoxRegion, HybridSystem, MotionPlanningProblem, StateSet, UnsafeSet,
};

/// Example systems addressable from a run configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemName {
    #[default]
    BouncingBall,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemConfig {
    pub name: SystemName,
    pub gamma: f64,
    pub lambda: f64,
    pub u_max: f64,
    pub sampling_box: BoxRegion,
    pub position_tolerance: f64,
}

impl Default for SystemConfig {
    fn default() -> Self {
        let p = BouncingBallParams::default();
        Self {
            name: SystemName::BouncingBall,
            gamma: p.gamma,
            lambda: p.lambda,
            u_max: p.u_max,
            sampling_box: p.sampling_box,
            position_tolerance: p.position_tolerance,
        }
    }
}

/// Inputs at or below `lo`, or at or above `hi`, are unsafe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputBand {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProblemConfig {
    pub initial_state: Vec<f64>,
    pub final_state: Vec<f64>,
    /// Defaults to `(0, u_max)` for the bouncing ball.
    pub unsafe_input: Option<InputBand>,
}

impl Default for ProblemConfig {
    fn default() -> Self {
        Self {
            initial_state: vec![14.0, 0.0],
            final_state: vec![10.0, 0.0],
            unsafe_input: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlannerSection {
    pub mode: PlannerMode,
    pub p_n_fw: f64,
    pub p_n_bw: f64,
    pub max_iterations: usize,
    pub delta: f64,
    pub delta_jump_pos: f64,
    pub reconstruction_enabled: bool,
    pub seed: u64,
    pub root_samples: usize,
    pub boundary_policy: BoundaryInputPolicy,
}

impl Default for PlannerSection {
    fn default() -> Self {
        let d = PlannerConfig::default();
        Self {
            mode: d.mode,
            p_n_fw: d.p_n_fw,
            p_n_bw: d.p_n_bw,
            max_iterations: d.max_iterations,
            delta: d.delta,
            delta_jump_pos: d.delta_jump_pos,
            reconstruction_enabled: d.reconstruction_enabled,
            seed: 0,
            root_samples: d.root_samples,
            boundary_policy: d.boundary_policy,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulationConfig {
    pub step_size: f64,
    pub max_flow_duration: f64,
    pub event_tolerance: f64,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        let f = FlowOptions::default();
        Self {
            step_size: f.step,
            max_flow_duration: 2.0,
            event_tolerance: f.event_tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
    pub dump_trees: bool,
}

/// A complete run description, read from JSON.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub system: SystemConfig,
    pub problem: ProblemConfig,
    pub planner: PlannerSection,
    pub simulation: SimulationConfig,
    pub validation: ValidationTolerances,
    pub output: OutputConfig,
}

/// Everything the planner needs, built from a [`RunConfig`].
#[derive(Clone)]
pub struct PlanningSetup {
    pub problem: MotionPlanningProblem,
    pub backward: Arc<dyn HybridSystem>,
    pub fw_library: InputLibrary,
    pub bw_library: InputLibrary,
    pub planner: PlannerConfig,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::ConfigInvalid(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::ConfigInvalid(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn planner_config(&self) -> PlannerConfig {
        let p = &self.planner;
        PlannerConfig {
            mode: p.mode,
            p_n_fw: p.p_n_fw,
            p_n_bw: p.p_n_bw,
            max_iterations: p.max_iterations,
            delta: p.delta,
            delta_jump_pos: p.delta_jump_pos,
            reconstruction_enabled: p.reconstruction_enabled,
            root_samples: p.root_samples,
            flow: FlowOptions {
                step: self.simulation.step_size,
                event_tolerance: self.simulation.event_tolerance,
                stop_at_jump_set: false,
            },
            boundary_policy: p.boundary_policy,
            validation: self.validation.clone(),
            constraints: Default::default(),
        }
    }

    pub fn setup(&self) -> Result<PlanningSetup> {
        let s = &self.system;
        let params = BouncingBallParams {
            gamma: s.gamma,
            lambda: s.lambda,
            u_max: s.u_max,
            sampling_box: s.sampling_box.clone(),
            position_tolerance: s.position_tolerance,
        };
        let (mut problem, backward) = bouncing_ball(params).map_err(|e| Error::ConfigInvalid(e.to_string()))?;
        let n = problem.system.state_dim();
        let m = problem.system.input_dim();
        for (name, x) in [
            ("initial_state", &self.problem.initial_state),
            ("final_state", &self.problem.final_state),
        ] {
            if x.len() != n || x.iter().any(|v| !v.is_finite()) {
                return Err(Error::ConfigInvalid(format!("{name} must hold {n} finite numbers")));
            }
        }
        problem.initial = StateSet::Point(self.problem.initial_state.clone());
        problem.target = StateSet::Point(self.problem.final_state.clone());
        if let Some(band) = &self.problem.unsafe_input {
            if band.lo.len() != m || band.hi.len() != m {
                return Err(Error::ConfigInvalid(format!(
                    "unsafe_input bounds must hold {m} numbers"
                )));
            }
            problem.unsafe_set = UnsafeSet::InputOutside {
                lo: band.lo.clone(),
                hi: band.hi.clone(),
            };
        }
        let inputs = BoxRegion::new(vec![0.0; m], vec![s.u_max; m]).map_err(|e| Error::ConfigInvalid(e.to_string()))?;
        let library = InputLibrary::new(inputs.clone(), self.simulation.max_flow_duration, inputs)
            .map_err(|e| Error::ConfigInvalid(e.to_string()))?;
        let planner = self.planner_config();
        planner.check()?;
        Ok(PlanningSetup {
            problem,
            backward,
            fw_library: library.clone(),
            bw_library: library,
            planner,
        })
    }
}
