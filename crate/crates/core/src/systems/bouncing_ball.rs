use std::sync::Arc;

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use super::backward::{backward_system, JumpPreimage};
use super::region::{BoxRegion, StateSet, UnsafeSet};
use super::{HybridSystem, JumpImage, LipschitzConstants, MotionPlanningProblem};
use crate::error::{Error, Result};

/// Physical and numerical parameters of the actuated bouncing ball.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BouncingBallParams {
    /// Gravitational acceleration.
    pub gamma: f64,
    /// Restitution coefficient.
    pub lambda: f64,
    /// Upper end of the admissible input band `(0, u_max)`.
    pub u_max: f64,
    /// Bounded region used to sample states, over `(x1, x2)`.
    pub sampling_box: BoxRegion,
    /// How far from the ground `x1 = 0` a state still counts as touching it.
    pub position_tolerance: f64,
}

impl Default for BouncingBallParams {
    fn default() -> Self {
        Self {
            gamma: 9.81,
            lambda: 0.8,
            u_max: 5.0,
            sampling_box: BoxRegion {
                lo: vec![0.0, -18.0],
                hi: vec![16.0, 18.0],
            },
            position_tolerance: 1e-6,
        }
    }
}

impl BouncingBallParams {
    fn check(&self, allow_zero_lambda: bool) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::ParameterOutOfRange(format!(
                "gamma must be positive, got {}",
                self.gamma
            )));
        }
        let lambda_ok = if allow_zero_lambda {
            (0.0..=1.0).contains(&self.lambda)
        } else {
            self.lambda > 0.0 && self.lambda <= 1.0
        };
        if !lambda_ok {
            return Err(Error::ParameterOutOfRange(format!(
                "lambda must lie in (0, 1], got {}",
                self.lambda
            )));
        }
        if !(self.u_max > 0.0 && self.u_max.is_finite()) {
            return Err(Error::ParameterOutOfRange(format!(
                "u_max must be positive, got {}",
                self.u_max
            )));
        }
        if self.sampling_box.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                actual: self.sampling_box.dim(),
            });
        }
        BoxRegion::new(self.sampling_box.lo.clone(), self.sampling_box.hi.clone())?;
        if !(self.position_tolerance >= 0.0) {
            return Err(Error::ParameterOutOfRange(
                "position_tolerance must be nonnegative".into(),
            ));
        }
        Ok(())
    }
}

/// Ball of height `x1` and velocity `x2`, bounced off the ground with an
/// impulsive input `u`:
///
/// ```text
///   f(x, u) = (x2, -gamma)                 C = { x1 >= 0 }
///   g(x, u) = (x1, -lambda * x2 + u)       D = { x1 = 0, x2 <= 0, u >= 0 }
/// ```
#[derive(Debug, Clone)]
pub struct BouncingBall {
    params: BouncingBallParams,
}

impl BouncingBall {
    pub fn new(params: BouncingBallParams) -> Result<Self> {
        params.check(true)?;
        Ok(Self { params })
    }

    pub fn params(&self) -> &BouncingBallParams {
        &self.params
    }

    fn sample_ground(&self, rng: &mut dyn RngCore, lo: f64, hi: f64) -> Vec<f64> {
        let v = if lo < hi { rng.gen_range(lo..=hi) } else { lo };
        vec![0.0, v]
    }
}

impl HybridSystem for BouncingBall {
    fn name(&self) -> &str {
        "bouncing_ball"
    }

    fn state_dim(&self) -> usize {
        2
    }

    fn input_dim(&self) -> usize {
        1
    }

    fn flow_map(&self, x: &[f64], _u: &[f64], dx: &mut [f64]) {
        dx[0] = x[1];
        dx[1] = -self.params.gamma;
    }

    fn jump_map(&self, x: &[f64], u: &[f64]) -> JumpImage {
        JumpImage::single(vec![x[0], -self.params.lambda * x[1] + u[0]])
    }

    fn flow_margin(&self, x: &[f64], _u: &[f64]) -> f64 {
        -x[0]
    }

    fn jump_margin(&self, x: &[f64], u: &[f64]) -> f64 {
        (x[0].abs() - self.params.position_tolerance).max(x[1]).max(-u[0])
    }

    fn in_flow_states(&self, x: &[f64]) -> bool {
        x[0] >= 0.0
    }

    fn in_jump_states(&self, x: &[f64]) -> bool {
        x[0].abs() <= self.params.position_tolerance && x[1] <= 0.0
    }

    fn sample_flow_state(&self, rng: &mut dyn RngCore) -> Vec<f64> {
        self.params.sampling_box.sample(rng)
    }

    fn sample_jump_state(&self, rng: &mut dyn RngCore) -> Vec<f64> {
        let b = &self.params.sampling_box;
        self.sample_ground(rng, b.lo[1], b.hi[1].min(0.0))
    }

    fn solve_jump_input(&self, from: &[f64], to: &[f64]) -> Vec<Vec<f64>> {
        let u = to[1] + self.params.lambda * from[1];
        if from[0].abs() <= self.params.position_tolerance && from[1] <= 0.0 && u >= 0.0 {
            vec![vec![u]]
        } else {
            Vec::new()
        }
    }

    fn lipschitz(&self) -> Option<LipschitzConstants> {
        Some(LipschitzConstants {
            flow_state: 1.0,
            flow_input: 0.0,
            jump_state: self.params.lambda.max(1.0),
            jump_input: 1.0,
        })
    }
}

/// Backward jump map of the ball for `lambda > 0`:
/// `g_bw(x, u) = (x1, (u - x2) / lambda)` on `{ x1 = 0, x2 >= u, u >= 0 }`.
#[derive(Debug, Clone)]
pub struct BouncingBallPreimage {
    params: BouncingBallParams,
}

impl JumpPreimage for BouncingBallPreimage {
    fn preimage(&self, x: &[f64], u: &[f64]) -> JumpImage {
        if self.margin(x, u) > 0.0 {
            return JumpImage::empty();
        }
        JumpImage::single(vec![x[0], (u[0] - x[1]) / self.params.lambda])
    }

    fn margin(&self, x: &[f64], u: &[f64]) -> f64 {
        (x[0].abs() - self.params.position_tolerance)
            .max(u[0] - x[1])
            .max(-u[0])
    }

    fn contains_state(&self, x: &[f64]) -> bool {
        x[0].abs() <= self.params.position_tolerance && x[1] >= 0.0
    }

    fn sample_state(&self, rng: &mut dyn RngCore) -> Vec<f64> {
        let b = &self.params.sampling_box;
        let (lo, hi) = (b.lo[1].max(0.0), b.hi[1]);
        let v = if lo < hi { rng.gen_range(lo..=hi) } else { lo };
        vec![0.0, v]
    }

    fn lipschitz(&self) -> Option<(f64, f64)> {
        let l = self.params.lambda;
        Some(((1.0 / l).max(1.0), 1.0 / l))
    }
}

/// Backward jump map of the ball for `lambda = 0`, where `g` forgets the
/// pre-impact velocity: `g_bw(x, u) = {x1} x R_{<=0}` on `{ x1 = 0, x2 = u >= 0 }`.
///
/// The unbounded velocity half-line is represented by `[velocity_floor, 0]`.
#[derive(Debug, Clone)]
pub struct LambdaZeroPreimage {
    params: BouncingBallParams,
    velocity_floor: f64,
}

impl LambdaZeroPreimage {
    pub fn velocity_floor(&self) -> f64 {
        self.velocity_floor
    }
}

impl JumpPreimage for LambdaZeroPreimage {
    fn preimage(&self, x: &[f64], u: &[f64]) -> JumpImage {
        if self.margin(x, u) > 0.0 {
            return JumpImage::empty();
        }
        JumpImage::Continuum(BoxRegion {
            lo: vec![x[0], self.velocity_floor],
            hi: vec![x[0], 0.0],
        })
    }

    fn margin(&self, x: &[f64], u: &[f64]) -> f64 {
        let tol = self.params.position_tolerance;
        (x[0].abs() - tol).max((x[1] - u[0]).abs() - tol).max(-u[0])
    }

    fn contains_state(&self, x: &[f64]) -> bool {
        x[0].abs() <= self.params.position_tolerance && x[1] >= 0.0
    }

    fn sample_state(&self, rng: &mut dyn RngCore) -> Vec<f64> {
        let b = &self.params.sampling_box;
        let (lo, hi) = (b.lo[1].max(0.0), b.hi[1]);
        let v = if lo < hi { rng.gen_range(lo..=hi) } else { lo };
        vec![0.0, v]
    }
}

/// The ball problem with `X0 = {(14, 0)}`, `Xf = {(10, 0)}` and
/// `Xu = { u <= 0 or u >= u_max }`, plus its backward system.
pub fn bouncing_ball(params: BouncingBallParams) -> Result<(MotionPlanningProblem, Arc<dyn HybridSystem>)> {
    params.check(false)?;
    let forward = BouncingBall::new(params.clone())?;
    let backward = backward_system(forward.clone(), BouncingBallPreimage { params: params.clone() });
    let problem = MotionPlanningProblem {
        system: Arc::new(forward),
        initial: StateSet::Point(vec![14.0, 0.0]),
        target: StateSet::Point(vec![10.0, 0.0]),
        unsafe_set: UnsafeSet::InputOutside {
            lo: vec![0.0],
            hi: vec![params.u_max],
        },
    };
    Ok((problem, Arc::new(backward)))
}

/// Backward system of the ball with `lambda = 0`. Successor velocities of the
/// set-valued backward jump are drawn from `[velocity_floor, 0]`.
pub fn bouncing_ball_lambda_zero(
    gamma: f64,
    velocity_floor: f64,
) -> Result<super::BackwardSystem<BouncingBall, LambdaZeroPreimage>> {
    if !(velocity_floor <= 0.0 && velocity_floor.is_finite()) {
        return Err(Error::ParameterOutOfRange(format!(
            "velocity floor must be finite and nonpositive, got {velocity_floor}"
        )));
    }
    let params = BouncingBallParams {
        gamma,
        lambda: 0.0,
        ..BouncingBallParams::default()
    };
    let forward = BouncingBall::new(params.clone())?;
    Ok(backward_system(forward, LambdaZeroPreimage { params, velocity_floor }))
}
