use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hybrid_time::{HybridSignal, Phase, SolutionPair};
use crate::systems::HybridSystem;

/// Fixed-step integration settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FlowOptions {
    /// RK4 step size in seconds.
    pub step: f64,
    /// Bisection stops once the located state is within this margin of the set boundary.
    pub event_tolerance: f64,
    /// Stop as soon as the state enters the jump set.
    pub stop_at_jump_set: bool,
}

impl Default for FlowOptions {
    fn default() -> Self {
        Self {
            step: 1e-3,
            event_tolerance: 1e-9,
            stop_at_jump_set: false,
        }
    }
}

/// Why [`integrate_flow`] stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlowEvent {
    DurationReached,
    ExitedFlowSet,
    EnteredJumpSet,
}

/// One classical Runge-Kutta step with constant input.
pub fn rk4_step<S: HybridSystem + ?Sized>(system: &S, x: &[f64], u: &[f64], h: f64) -> Vec<f64> {
    let n = x.len();
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    system.flow_map(x, u, &mut k1);
    for i in 0..n {
        tmp[i] = x[i] + 0.5 * h * k1[i];
    }
    system.flow_map(&tmp, u, &mut k2);
    for i in 0..n {
        tmp[i] = x[i] + 0.5 * h * k2[i];
    }
    system.flow_map(&tmp, u, &mut k3);
    for i in 0..n {
        tmp[i] = x[i] + h * k3[i];
    }
    system.flow_map(&tmp, u, &mut k4);
    (0..n)
        .map(|i| x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect()
}

/// Bisect the step length in `(0, h]` for the last state satisfying `inside`
/// (`margin <= 0`), stopping once that state's margin is within `tol` of zero.
fn locate<F>(step: impl Fn(f64) -> Vec<f64>, margin: F, x_lo: &[f64], h: f64, tol: f64) -> (f64, Vec<f64>)
where
    F: Fn(&[f64]) -> f64,
{
    let (mut lo, mut hi) = (0.0, h);
    let mut x_best = x_lo.to_vec();
    let mut m_best = margin(x_lo);
    while m_best < -tol && hi - lo > f64::EPSILON * h.max(1e-300) {
        let mid = 0.5 * (lo + hi);
        let x_mid = step(mid);
        let m = margin(&x_mid);
        if m <= 0.0 {
            lo = mid;
            x_best = x_mid;
            m_best = m;
        } else {
            hi = mid;
        }
    }
    (lo, x_best)
}

/// Bisect for the earliest step length in `(0, h]` whose state satisfies
/// `margin <= 0`, given that the full step `x_h` does.
fn first_inside<F>(step: impl Fn(f64) -> Vec<f64>, margin: F, h: f64, x_h: Vec<f64>) -> (f64, Vec<f64>)
where
    F: Fn(&[f64]) -> f64,
{
    let (mut lo, mut hi) = (0.0, h);
    let mut x_best = x_h;
    while hi - lo > 4.0 * f64::EPSILON * h {
        let mid = 0.5 * (lo + hi);
        let x_mid = step(mid);
        if margin(&x_mid) <= 0.0 {
            hi = mid;
            x_best = x_mid;
        } else {
            lo = mid;
        }
    }
    (hi, x_best)
}

/// Integrate `x' = f(x, u)` with constant `u` from `x0` for at most
/// `max_duration` seconds while `(x, u)` stays in `C`.
///
/// Sample times are `k * step` with the last one truncated to the duration or
/// to the located exit from `C`. The exit state is kept inside `C` within
/// `event_tolerance` of its boundary. Phases of positive length carry at least
/// three samples.
pub fn integrate_flow<S: HybridSystem + ?Sized>(
    system: &S,
    x0: &[f64],
    u: &[f64],
    max_duration: f64,
    opts: &FlowOptions,
) -> Result<(SolutionPair, FlowEvent)> {
    if x0.len() != system.state_dim() {
        return Err(Error::DimensionMismatch {
            expected: system.state_dim(),
            actual: x0.len(),
        });
    }
    if !(max_duration > 0.0 && max_duration.is_finite()) {
        return Err(Error::ParameterOutOfRange(format!(
            "flow duration must be positive, got {max_duration}"
        )));
    }
    if !(opts.step > 0.0) {
        return Err(Error::ParameterOutOfRange(format!(
            "step size must be positive, got {}",
            opts.step
        )));
    }
    let margin0 = system.flow_margin(x0, u);
    if margin0 > 0.0 {
        return Err(Error::InitialStateOutsideFlowSet { margin: margin0 });
    }

    let flow_margin = |x: &[f64]| system.flow_margin(x, u);
    let watch_jumps = opts.stop_at_jump_set && system.jump_margin(x0, u) > 0.0;

    let mut times = vec![0.0];
    let mut states = x0.to_vec();
    let mut x = x0.to_vec();
    let mut t = 0.0;
    let mut k = 0usize;
    let mut event = FlowEvent::DurationReached;
    while t < max_duration {
        let t_next = ((k + 1) as f64 * opts.step).min(max_duration);
        let h = t_next - t;
        let x_next = rk4_step(system, &x, u, h);
        let exits = flow_margin(&x_next) > 0.0;
        let enters = watch_jumps && system.jump_margin(&x_next, u) <= 0.0;
        if exits || enters {
            let (s, x_stop) = if enters {
                let (s_in, x_in) = first_inside(
                    |s| rk4_step(system, &x, u, s),
                    |x| system.jump_margin(x, u),
                    h,
                    x_next.clone(),
                );
                if flow_margin(&x_in) > 0.0 {
                    locate(|s| rk4_step(system, &x, u, s), flow_margin, &x, h, opts.event_tolerance)
                } else {
                    (s_in, x_in)
                }
            } else {
                locate(|s| rk4_step(system, &x, u, s), flow_margin, &x, h, opts.event_tolerance)
            };
            if s > 0.0 {
                times.push(t + s);
                states.extend_from_slice(&x_stop);
            }
            event = if watch_jumps && system.jump_margin(&x_stop, u) <= 0.0 {
                FlowEvent::EnteredJumpSet
            } else {
                FlowEvent::ExitedFlowSet
            };
            break;
        }
        times.push(t_next);
        states.extend_from_slice(&x_next);
        x = x_next;
        t = t_next;
        k += 1;
    }

    if times.len() == 2 {
        // a midpoint keeps an interior sample on every flow phase
        let mid = 0.5 * times[1];
        let x_mid = rk4_step(system, x0, u, mid);
        let end = states.split_off(x0.len());
        states.extend_from_slice(&x_mid);
        states.extend_from_slice(&end);
        times.insert(1, mid);
    }

    let inputs: Vec<f64> = times.iter().flat_map(|_| u.iter().copied()).collect();
    let pair = SolutionPair::new(
        HybridSignal::new(x0.len(), vec![Phase::new(times.clone(), states)])?,
        HybridSignal::new(u.len(), vec![Phase::new(times, inputs)])?,
    )?;
    Ok((pair, event))
}
