use rand::RngCore;

use super::{HybridSystem, JumpImage, LipschitzConstants};

/// The inverse image of a forward jump map restricted to its jump set:
/// `preimage(x, u) = { z : x = g(z, u), (z, u) in D }`.
///
/// The generic backward construction cannot invert an arbitrary `g`, so every
/// system that wants a backward counterpart supplies this hook.
pub trait JumpPreimage: Send + Sync {
    fn preimage(&self, x: &[f64], u: &[f64]) -> JumpImage;

    /// Signed margin of `{ (x, u) : preimage(x, u) is nonempty }`.
    fn margin(&self, x: &[f64], u: &[f64]) -> f64;

    /// Membership of `x` in the state projection of the backward jump set.
    fn contains_state(&self, x: &[f64]) -> bool;

    fn sample_state(&self, rng: &mut dyn RngCore) -> Vec<f64>;

    /// `(K_x, K_u)` of the preimage map, when known.
    fn lipschitz(&self) -> Option<(f64, f64)> {
        None
    }
}

/// `H_bw`: same flow set, negated flow map, jump map replaced by the preimage
/// of `g`, jump set where that preimage is nonempty.
#[derive(Debug, Clone)]
pub struct BackwardSystem<S, P> {
    forward: S,
    preimage: P,
    name: String,
}

impl<S: HybridSystem, P: JumpPreimage> BackwardSystem<S, P> {
    pub fn forward(&self) -> &S {
        &self.forward
    }

    pub fn preimage(&self) -> &P {
        &self.preimage
    }
}

pub fn backward_system<S: HybridSystem, P: JumpPreimage>(forward: S, preimage: P) -> BackwardSystem<S, P> {
    let name = format!("{}_backward", forward.name());
    BackwardSystem {
        forward,
        preimage,
        name,
    }
}

impl<S: HybridSystem, P: JumpPreimage> HybridSystem for BackwardSystem<S, P> {
    fn name(&self) -> &str {
        &self.name
    }

    fn state_dim(&self) -> usize {
        self.forward.state_dim()
    }

    fn input_dim(&self) -> usize {
        self.forward.input_dim()
    }

    fn flow_map(&self, x: &[f64], u: &[f64], dx: &mut [f64]) {
        self.forward.flow_map(x, u, dx);
        for v in dx.iter_mut() {
            *v = -*v;
        }
    }

    fn jump_map(&self, x: &[f64], u: &[f64]) -> JumpImage {
        self.preimage.preimage(x, u)
    }

    fn flow_margin(&self, x: &[f64], u: &[f64]) -> f64 {
        self.forward.flow_margin(x, u)
    }

    fn jump_margin(&self, x: &[f64], u: &[f64]) -> f64 {
        self.preimage.margin(x, u)
    }

    fn in_flow_states(&self, x: &[f64]) -> bool {
        self.forward.in_flow_states(x)
    }

    fn in_jump_states(&self, x: &[f64]) -> bool {
        self.preimage.contains_state(x)
    }

    fn sample_flow_state(&self, rng: &mut dyn RngCore) -> Vec<f64> {
        self.forward.sample_flow_state(rng)
    }

    fn sample_jump_state(&self, rng: &mut dyn RngCore) -> Vec<f64> {
        self.preimage.sample_state(rng)
    }

    fn lipschitz(&self) -> Option<LipschitzConstants> {
        let fw = self.forward.lipschitz()?;
        let (jump_state, jump_input) = self.preimage.lipschitz().unwrap_or((f64::INFINITY, f64::INFINITY));
        Some(LipschitzConstants {
            flow_state: fw.flow_state,
            flow_input: fw.flow_input,
            jump_state,
            jump_input,
        })
    }
}
