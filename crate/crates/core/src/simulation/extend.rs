use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hybrid_time::SolutionPair;
use crate::simulation::integrate::{integrate_flow, FlowOptions};
use crate::systems::{BoxRegion, HybridSystem, UnsafeSet};

/// Inputs available to the planner: constant flow inputs held for a random
/// duration, and jump inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputLibrary {
    pub flow_inputs: BoxRegion,
    /// Flow durations are drawn from `(0, max_flow_duration]`.
    pub max_flow_duration: f64,
    pub jump_inputs: BoxRegion,
    /// Draws of a jump input before giving up on a jump extension.
    pub jump_retries: usize,
}

impl InputLibrary {
    pub fn new(flow_inputs: BoxRegion, max_flow_duration: f64, jump_inputs: BoxRegion) -> Result<Self> {
        if !(max_flow_duration > 0.0 && max_flow_duration.is_finite()) {
            return Err(Error::ParameterOutOfRange(format!(
                "maximum flow duration must be positive, got {max_flow_duration}"
            )));
        }
        Ok(Self {
            flow_inputs,
            max_flow_duration,
            jump_inputs,
            jump_retries: 16,
        })
    }

    pub fn sample_flow_duration(&self, rng: &mut dyn RngCore) -> f64 {
        self.max_flow_duration - rng.gen_range(0.0..self.max_flow_duration)
    }
}

/// Draw one successor of `g(x, u)`.
pub fn apply_jump<S: HybridSystem + ?Sized>(
    system: &S,
    x: &[f64],
    u: &[f64],
    rng: &mut dyn RngCore,
) -> Result<Vec<f64>> {
    let margin = system.jump_margin(x, u);
    if margin > 0.0 {
        return Err(Error::NotInJumpSet { margin });
    }
    system.jump_map(x, u).choose(rng).ok_or(Error::NotInJumpSet { margin })
}

/// A solution pair grown from a tree vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct Extension {
    pub state: Vec<f64>,
    pub pair: SolutionPair,
}

/// Simulate one random extension from `x`: a flow when `x` is only in the
/// closure of `C'`, a jump when only in `D'`, and a flow with probability
/// `p_flow` when in both. Returns `None` for trivial pairs and for pairs that
/// touch the unsafe set.
pub fn new_state<S: HybridSystem + ?Sized>(
    system: &S,
    x: &[f64],
    library: &InputLibrary,
    unsafe_set: &UnsafeSet,
    p_flow: f64,
    flow: &FlowOptions,
    rng: &mut dyn RngCore,
) -> Option<Extension> {
    let in_c = system.in_flow_states(x);
    let in_d = system.in_jump_states(x);
    let flows = match (in_c, in_d) {
        (false, false) => return None,
        (true, false) => true,
        (false, true) => false,
        (true, true) => rng.gen::<f64>() < p_flow,
    };
    let pair = if flows {
        let u = library.flow_inputs.sample(rng);
        let duration = library.sample_flow_duration(rng);
        integrate_flow(system, x, &u, duration, flow).ok()?.0
    } else {
        let mut found = None;
        for _ in 0..library.jump_retries {
            let u = library.jump_inputs.sample(rng);
            if system.in_jump_set(x, &u) {
                let next = system.jump_map(x, &u).choose(rng)?;
                found = Some(SolutionPair::single_jump(x, &u, &next));
                break;
            }
        }
        found?
    };
    if pair.is_trivial() || pair.sample_pairs().any(|(x, u)| unsafe_set.contains(x, u)) {
        return None;
    }
    Some(Extension {
        state: pair.final_state().to_vec(),
        pair,
    })
}
