//! Hybrid systems `(C, f, D, g)` with inputs, the backward-in-time
//! construction, and the example systems used by the planner.

mod backward;
mod bouncing_ball;
mod discrete_chain;
pub mod region;

pub use backward::{backward_system, BackwardSystem, JumpPreimage};
pub use bouncing_ball::{
    bouncing_ball, bouncing_ball_lambda_zero, BouncingBall, BouncingBallParams, BouncingBallPreimage,
    LambdaZeroPreimage,
};
pub use discrete_chain::{discrete_chain, DiscreteChain, DiscreteChainPreimage};
pub use region::{distance, BoxRegion, StateSet, UnsafeSet};

use std::sync::Arc;

use rand::{Rng, RngCore};

/// The image of a (possibly set-valued) jump map.
#[derive(Debug, Clone, PartialEq)]
pub enum JumpImage {
    /// Finitely many successors; single-valued maps return one element.
    Finite(Vec<Vec<f64>>),
    /// A bounded box of successors standing in for a continuum.
    Continuum(BoxRegion),
}

impl JumpImage {
    pub fn single(x: Vec<f64>) -> Self {
        JumpImage::Finite(vec![x])
    }

    pub fn empty() -> Self {
        JumpImage::Finite(Vec::new())
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, JumpImage::Finite(v) if v.is_empty())
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.distance(x).is_some_and(|d| d <= tol)
    }

    /// Distance from `x` to the image, `None` when empty.
    pub fn distance(&self, x: &[f64]) -> Option<f64> {
        match self {
            JumpImage::Finite(v) => v.iter().map(|z| distance(x, z)).min_by(|a, b| a.total_cmp(b)),
            JumpImage::Continuum(b) => Some(b.distance(x)),
        }
    }

    /// The element closest to `reference`.
    pub fn nearest(&self, reference: &[f64]) -> Option<Vec<f64>> {
        match self {
            JumpImage::Finite(v) => v
                .iter()
                .min_by(|a, b| distance(a, reference).total_cmp(&distance(b, reference)))
                .cloned(),
            JumpImage::Continuum(b) => Some(b.clamp(reference)),
        }
    }

    /// Uniform choice among finite successors, or a uniform draw from the box.
    pub fn choose(&self, rng: &mut dyn RngCore) -> Option<Vec<f64>> {
        match self {
            JumpImage::Finite(v) if v.is_empty() => None,
            JumpImage::Finite(v) => Some(v[rng.gen_range(0..v.len())].clone()),
            JumpImage::Continuum(b) => Some(b.sample(rng)),
        }
    }
}

/// Lipschitz-type constants of the flow and jump maps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LipschitzConstants {
    pub flow_state: f64,
    pub flow_input: f64,
    pub jump_state: f64,
    pub jump_input: f64,
}

/// A hybrid system with inputs:
///
/// ```text
///   x' = f(x, u)    (x, u) in C
///   x+ in g(x, u)   (x, u) in D
/// ```
///
/// Sets are described by signed margins (nonpositive inside) so that
/// crossings can be located numerically. The state projections `C'` and `D'`
/// carry bounded samplers for the planner.
pub trait HybridSystem: Send + Sync {
    fn name(&self) -> &str;

    fn state_dim(&self) -> usize;

    fn input_dim(&self) -> usize;

    /// Writes `f(x, u)` into `dx`.
    fn flow_map(&self, x: &[f64], u: &[f64], dx: &mut [f64]);

    /// `g(x, u)`, defined on all of `R^n x R^m`.
    fn jump_map(&self, x: &[f64], u: &[f64]) -> JumpImage;

    /// Signed margin of `C`: `<= 0` inside.
    fn flow_margin(&self, x: &[f64], u: &[f64]) -> f64;

    /// Signed margin of `D`: `<= 0` inside.
    fn jump_margin(&self, x: &[f64], u: &[f64]) -> f64;

    fn in_flow_set(&self, x: &[f64], u: &[f64]) -> bool {
        self.flow_margin(x, u) <= 0.0
    }

    fn in_jump_set(&self, x: &[f64], u: &[f64]) -> bool {
        self.jump_margin(x, u) <= 0.0
    }

    /// Membership in the closure of `C'`.
    fn in_flow_states(&self, x: &[f64]) -> bool;

    /// Membership in `D'`.
    fn in_jump_states(&self, x: &[f64]) -> bool;

    /// Bounded uniform sampler for the closure of `C'`.
    fn sample_flow_state(&self, rng: &mut dyn RngCore) -> Vec<f64>;

    /// Bounded uniform sampler for `D'`.
    fn sample_jump_state(&self, rng: &mut dyn RngCore) -> Vec<f64>;

    /// Inputs `u*` with `to = g(from, u*)` and `(from, u*)` in `D`.
    fn solve_jump_input(&self, _from: &[f64], _to: &[f64]) -> Vec<Vec<f64>> {
        Vec::new()
    }

    fn lipschitz(&self) -> Option<LipschitzConstants> {
        None
    }

    fn flow(&self, x: &[f64], u: &[f64]) -> Vec<f64> {
        let mut dx = vec![0.0; x.len()];
        self.flow_map(x, u, &mut dx);
        dx
    }
}

impl<S: HybridSystem + ?Sized> HybridSystem for Arc<S> {
    fn name(&self) -> &str {
        (**self).name()
    }
    fn state_dim(&self) -> usize {
        (**self).state_dim()
    }
    fn input_dim(&self) -> usize {
        (**self).input_dim()
    }
    fn flow_map(&self, x: &[f64], u: &[f64], dx: &mut [f64]) {
        (**self).flow_map(x, u, dx)
    }
    fn jump_map(&self, x: &[f64], u: &[f64]) -> JumpImage {
        (**self).jump_map(x, u)
    }
    fn flow_margin(&self, x: &[f64], u: &[f64]) -> f64 {
        (**self).flow_margin(x, u)
    }
    fn jump_margin(&self, x: &[f64], u: &[f64]) -> f64 {
        (**self).jump_margin(x, u)
    }
    fn in_flow_set(&self, x: &[f64], u: &[f64]) -> bool {
        (**self).in_flow_set(x, u)
    }
    fn in_jump_set(&self, x: &[f64], u: &[f64]) -> bool {
        (**self).in_jump_set(x, u)
    }
    fn in_flow_states(&self, x: &[f64]) -> bool {
        (**self).in_flow_states(x)
    }
    fn in_jump_states(&self, x: &[f64]) -> bool {
        (**self).in_jump_states(x)
    }
    fn sample_flow_state(&self, rng: &mut dyn RngCore) -> Vec<f64> {
        (**self).sample_flow_state(rng)
    }
    fn sample_jump_state(&self, rng: &mut dyn RngCore) -> Vec<f64> {
        (**self).sample_jump_state(rng)
    }
    fn solve_jump_input(&self, from: &[f64], to: &[f64]) -> Vec<Vec<f64>> {
        (**self).solve_jump_input(from, to)
    }
    fn lipschitz(&self) -> Option<LipschitzConstants> {
        (**self).lipschitz()
    }
}

/// A motion planning problem `(X0, Xf, Xu, H)`.
#[derive(Clone)]
pub struct MotionPlanningProblem {
    pub system: Arc<dyn HybridSystem>,
    pub initial: StateSet,
    pub target: StateSet,
    pub unsafe_set: UnsafeSet,
}

impl std::fmt::Debug for MotionPlanningProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MotionPlanningProblem")
            .field("system", &self.system.name())
            .field("initial", &self.initial)
            .field("target", &self.target)
            .field("unsafe_set", &self.unsafe_set)
            .finish()
    }
}
