use rand::{Rng, RngCore};

use super::backward::{backward_system, BackwardSystem, JumpPreimage};
use super::{HybridSystem, JumpImage, LipschitzConstants};
use crate::error::{Error, Result};

/// Scalar purely discrete system: no flow, jumps everywhere, `g(x, u) = k x + u`.
#[derive(Debug, Clone)]
pub struct DiscreteChain {
    gain: f64,
    max_jumps: usize,
    half_width: f64,
}

impl DiscreteChain {
    pub fn gain(&self) -> f64 {
        self.gain
    }

    /// Longest chain the fixture is meant to be driven through.
    pub fn max_jumps(&self) -> usize {
        self.max_jumps
    }
}

impl HybridSystem for DiscreteChain {
    fn name(&self) -> &str {
        "discrete_chain"
    }

    fn state_dim(&self) -> usize {
        1
    }

    fn input_dim(&self) -> usize {
        1
    }

    fn flow_map(&self, _x: &[f64], _u: &[f64], dx: &mut [f64]) {
        dx[0] = 0.0;
    }

    fn jump_map(&self, x: &[f64], u: &[f64]) -> JumpImage {
        JumpImage::single(vec![self.gain * x[0] + u[0]])
    }

    fn flow_margin(&self, _x: &[f64], _u: &[f64]) -> f64 {
        1.0
    }

    fn jump_margin(&self, _x: &[f64], _u: &[f64]) -> f64 {
        -1.0
    }

    fn in_flow_states(&self, _x: &[f64]) -> bool {
        false
    }

    fn in_jump_states(&self, _x: &[f64]) -> bool {
        true
    }

    fn sample_flow_state(&self, rng: &mut dyn RngCore) -> Vec<f64> {
        self.sample_jump_state(rng)
    }

    fn sample_jump_state(&self, rng: &mut dyn RngCore) -> Vec<f64> {
        vec![rng.gen_range(-self.half_width..=self.half_width)]
    }

    fn solve_jump_input(&self, from: &[f64], to: &[f64]) -> Vec<Vec<f64>> {
        vec![vec![to[0] - self.gain * from[0]]]
    }

    fn lipschitz(&self) -> Option<LipschitzConstants> {
        Some(LipschitzConstants {
            flow_state: 0.0,
            flow_input: 0.0,
            jump_state: self.gain,
            jump_input: 1.0,
        })
    }
}

/// `g_bw(x, u) = (x - u) / k`, defined everywhere.
#[derive(Debug, Clone)]
pub struct DiscreteChainPreimage {
    gain: f64,
    half_width: f64,
}

impl JumpPreimage for DiscreteChainPreimage {
    fn preimage(&self, x: &[f64], u: &[f64]) -> JumpImage {
        JumpImage::single(vec![(x[0] - u[0]) / self.gain])
    }

    fn margin(&self, _x: &[f64], _u: &[f64]) -> f64 {
        -1.0
    }

    fn contains_state(&self, _x: &[f64]) -> bool {
        true
    }

    fn sample_state(&self, rng: &mut dyn RngCore) -> Vec<f64> {
        vec![rng.gen_range(-self.half_width..=self.half_width)]
    }

    fn lipschitz(&self) -> Option<(f64, f64)> {
        Some((1.0 / self.gain, 1.0 / self.gain))
    }
}

/// The chain with gain `k > 0` and its backward counterpart. States are
/// sampled from `[-10, 10]`.
pub fn discrete_chain(
    gain: f64,
    max_jumps: usize,
) -> Result<(DiscreteChain, BackwardSystem<DiscreteChain, DiscreteChainPreimage>)> {
    if !(gain > 0.0 && gain.is_finite()) {
        return Err(Error::ParameterOutOfRange(format!("gain must be positive, got {gain}")));
    }
    let half_width = 10.0;
    let fw = DiscreteChain {
        gain,
        max_jumps,
        half_width,
    };
    let bw = backward_system(fw.clone(), DiscreteChainPreimage { gain, half_width });
    Ok((fw, bw))
}
