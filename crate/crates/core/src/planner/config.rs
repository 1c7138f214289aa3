use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hybrid_time::{BoundaryInputPolicy, ValidationTolerances};
use crate::simulation::FlowOptions;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PlannerMode {
    /// Forward tree only.
    #[serde(rename = "hyrrt")]
    HyRrt,
    /// Forward and backward trees, connected by matching flow states.
    #[serde(rename = "bi_hyrrt")]
    BiHyRrt,
    /// As `BiHyRrt`, additionally connecting the trees with a solved jump.
    #[serde(rename = "hyrrt_connect")]
    HyRrtConnect,
}

impl PlannerMode {
    pub const ALL: [PlannerMode; 3] = [PlannerMode::HyRrt, PlannerMode::BiHyRrt, PlannerMode::HyRrtConnect];

    pub fn as_str(self) -> &'static str {
        match self {
            PlannerMode::HyRrt => "hyrrt",
            PlannerMode::BiHyRrt => "bi_hyrrt",
            PlannerMode::HyRrtConnect => "hyrrt_connect",
        }
    }

    pub fn is_bidirectional(self) -> bool {
        self != PlannerMode::HyRrt
    }
}

impl fmt::Display for PlannerMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for PlannerMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PlannerMode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::ConfigInvalid(format!("unknown planner mode `{s}`")))
    }
}

/// A state predicate restricting which vertices the nearest-neighbor query may return.
pub type StatePredicate = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;

/// Optional overrides of the nearest-neighbor constraint sets. Unset entries
/// fall back to the closure of `C'` (flow draws) and `D'` (jump draws) of the
/// tree's own system.
#[derive(Clone, Default)]
pub struct ConstraintSets {
    pub flow_fw: Option<StatePredicate>,
    pub jump_fw: Option<StatePredicate>,
    pub flow_bw: Option<StatePredicate>,
    pub jump_bw: Option<StatePredicate>,
}

impl fmt::Debug for ConstraintSets {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConstraintSets")
            .field("flow_fw", &self.flow_fw.is_some())
            .field("jump_fw", &self.jump_fw.is_some())
            .field("flow_bw", &self.flow_bw.is_some())
            .field("jump_bw", &self.jump_bw.is_some())
            .finish()
    }
}

#[derive(Debug, Clone)]
pub struct PlannerConfig {
    pub mode: PlannerMode,
    /// Probability of drawing a flow target (and of flowing when both are
    /// possible) in the forward tree.
    pub p_n_fw: f64,
    pub p_n_bw: f64,
    pub max_iterations: usize,
    /// Matching tolerance for connecting the trees during flow.
    pub delta: f64,
    /// Residual allowed when connecting the trees with a solved jump.
    pub delta_jump_pos: f64,
    pub reconstruction_enabled: bool,
    /// Samples drawn from each of `X0` and `Xf` to seed the trees.
    pub root_samples: usize,
    pub flow: FlowOptions,
    pub boundary_policy: BoundaryInputPolicy,
    /// Base tolerances for validating assembled plans.
    pub validation: ValidationTolerances,
    pub constraints: ConstraintSets,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        Self {
            mode: PlannerMode::HyRrtConnect,
            p_n_fw: 0.5,
            p_n_bw: 0.5,
            max_iterations: 2000,
            delta: 0.2,
            delta_jump_pos: 1e-9,
            reconstruction_enabled: true,
            root_samples: 1,
            flow: FlowOptions::default(),
            boundary_policy: BoundaryInputPolicy::CopyNearest,
            validation: ValidationTolerances::default(),
            constraints: ConstraintSets::default(),
        }
    }
}

impl PlannerConfig {
    pub fn check(&self) -> Result<()> {
        for (name, p) in [("p_n_fw", self.p_n_fw), ("p_n_bw", self.p_n_bw)] {
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::ConfigInvalid(format!("{name} must lie in (0, 1), got {p}")));
            }
        }
        if !(self.delta >= 0.0 && self.delta.is_finite()) {
            return Err(Error::ConfigInvalid(format!(
                "delta must be nonnegative, got {}",
                self.delta
            )));
        }
        if !(self.delta_jump_pos >= 0.0) {
            return Err(Error::ConfigInvalid("delta_jump_pos must be nonnegative".into()));
        }
        if self.root_samples == 0 {
            return Err(Error::ConfigInvalid("root_samples must be at least 1".into()));
        }
        if !(self.flow.step > 0.0 && self.flow.event_tolerance >= 0.0) {
            return Err(Error::ConfigInvalid("step size must be positive".into()));
        }
        Ok(())
    }
}
