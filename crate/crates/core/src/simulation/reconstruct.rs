use crate::error::{Error, Result};
use crate::hybrid_time::{HybridSignal, HybridTime, HybridTimeDomain, Interval, Phase, SolutionPair};
use crate::simulation::integrate::rk4_step;
use crate::systems::HybridSystem;

/// Where the time-triggered reconstruction system jumps and where it flows,
/// read off a hybrid time domain.
#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionTemplate {
    /// `(t, j)` such that `(t, j + 1)` is also in the domain.
    pub jump_instants: Vec<HybridTime>,
    /// Intervals of the domain with nonempty interior.
    pub flow_spans: Vec<Interval>,
}

impl ReconstructionTemplate {
    pub fn from_domain(domain: &HybridTimeDomain) -> Self {
        let jump_instants = (0..domain.jumps())
            .map(|j| HybridTime::new(domain.interval(j).t_end, j))
            .collect();
        let flow_spans = domain.intervals().filter(Interval::has_interior).collect();
        Self {
            jump_instants,
            flow_spans,
        }
    }

    pub fn is_jump_instant(&self, t: f64, j: usize) -> bool {
        self.jump_instants.iter().any(|h| h.j == j && h.t == t)
    }
}

/// Re-simulate `reversed_input` forward from `start` on the time-triggered
/// system: flow with `f` over every flow span and apply `g` at every jump
/// instant of the input's domain, without checking `C` or `D`.
///
/// The arc is produced on the input's own sample grid. Inside a phase the
/// segment `[t_i, t_{i+1}]` uses the input at `t_{i+1}` unless that sample is
/// the last of the phase, mirroring how reversal shifts the input of the
/// integrated segments by one sample. Set-valued jumps pick the successor
/// nearest to `reference` (when given) at the post-jump instant.
pub fn reconstruct<S: HybridSystem + ?Sized>(
    system: &S,
    start: &[f64],
    reversed_input: &HybridSignal,
    reference: Option<&HybridSignal>,
) -> Result<SolutionPair> {
    let n = system.state_dim();
    let m = system.input_dim();
    if start.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: start.len(),
        });
    }
    if reversed_input.dim() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            actual: reversed_input.dim(),
        });
    }
    let mut phases: Vec<Phase> = Vec::with_capacity(reversed_input.phases().len());
    let mut x = start.to_vec();
    for (j, pu) in reversed_input.phases().iter().enumerate() {
        if j > 0 {
            let prev_u = &reversed_input.phases()[j - 1];
            let u = prev_u.value(prev_u.len() - 1, m);
            let image = system.jump_map(&x, u);
            let anchor = reference.map(|r| r.value(j, 0)).unwrap_or(&x);
            x = match &image {
                crate::systems::JumpImage::Finite(v) if v.len() == 1 => v[0].clone(),
                _ => image.nearest(anchor).ok_or(Error::JumpMapUndefined {
                    t: pu.start_time(),
                    j: j - 1,
                })?,
            };
        }
        let len = pu.len();
        let mut phase = Phase::single(pu.time(0), &x);
        for i in 0..len - 1 {
            let h = pu.time(i + 1) - pu.time(i);
            let k = if i + 1 < len - 1 { i + 1 } else { i };
            x = rk4_step(system, &x, pu.value(k, m), h);
            phase.push(pu.time(i + 1), &x);
        }
        phases.push(phase);
    }
    SolutionPair::new(HybridSignal::new(n, phases)?, reversed_input.clone())
}

/// `exp(K_x^f T + J ln K_x^g) * delta`: how far a reconstruction started
/// `delta` away from the backward plan can end from it.
pub fn reconstruction_error_bound(kx_flow: f64, kx_jump: f64, t: f64, jumps: usize, delta: f64) -> Result<f64> {
    if !(kx_flow >= 0.0 && kx_jump > 0.0 && t >= 0.0 && delta >= 0.0) {
        return Err(Error::ParameterOutOfRange(format!(
            "bound needs K_x^f >= 0, K_x^g > 0, T >= 0, delta >= 0 (got {kx_flow}, {kx_jump}, {t}, {delta})"
        )));
    }
    if delta == 0.0 {
        return Ok(0.0);
    }
    Ok((kx_flow * t + jumps as f64 * kx_jump.ln()).exp() * delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hybrid_time::{reverse, BoundaryInputPolicy};
    use crate::simulation::integrate::{integrate_flow, FlowOptions};
    use crate::systems::{bouncing_ball, discrete_chain, distance, BouncingBallParams};
    use approx::assert_abs_diff_eq;

    #[test]
    fn bound_arithmetic() {
        assert_abs_diff_eq!(
            reconstruction_error_bound(1.0, 1.0, 1.0, 0, 0.2).unwrap(),
            std::f64::consts::E * 0.2,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            reconstruction_error_bound(1.0, 2.0, 0.0, 3, 0.1).unwrap(),
            0.8,
            epsilon = 1e-15
        );
        assert_eq!(reconstruction_error_bound(7.0, 3.0, 2.0, 4, 0.0).unwrap(), 0.0);
        assert!(reconstruction_error_bound(1.0, 0.0, 1.0, 1, 0.1).is_err());
    }

    #[test]
    fn template_of_a_mixed_domain() {
        let d = HybridTimeDomain::from_boundaries(vec![0.0, 1.0, 1.0, 2.0]).unwrap();
        let tpl = ReconstructionTemplate::from_domain(&d);
        assert_eq!(
            tpl.jump_instants,
            vec![HybridTime::new(1.0, 0), HybridTime::new(1.0, 1)]
        );
        assert_eq!(tpl.flow_spans.len(), 2);
        assert!(tpl.is_jump_instant(1.0, 1));
        assert!(!tpl.is_jump_instant(2.0, 2));
    }

    fn backward_drop() -> (SolutionPair, std::sync::Arc<dyn HybridSystem>) {
        let (p, bw) = bouncing_ball(BouncingBallParams::default()).unwrap();
        // backward flow from the ground rises to the apex
        let (psi_bw, _) = integrate_flow(bw.as_ref(), &[0.0, -12.0], &[2.0], 1.0, &FlowOptions::default()).unwrap();
        (reverse(&psi_bw, BoundaryInputPolicy::CopyNearest), p.system)
    }

    #[test]
    fn zero_offset_reproduces_the_reversed_arc() {
        let (rev, fw) = backward_drop();
        let sim = reconstruct(fw.as_ref(), rev.initial_state(), rev.input(), None).unwrap();
        assert_eq!(sim.domain(), rev.domain());
        for ((_, _, a), (_, _, b)) in sim.arc().samples().zip(rev.arc().samples()) {
            assert!(distance(a, b) < 1e-9);
        }
    }

    #[test]
    fn ballistic_offset_is_preserved() {
        let (rev, fw) = backward_drop();
        let x0 = rev.initial_state();
        let start = [x0[0] + 0.05, x0[1]];
        let sim = reconstruct(fw.as_ref(), &start, rev.input(), None).unwrap();
        let end = sim.final_state();
        let target = rev.final_state();
        assert_abs_diff_eq!(end[0] - target[0], 0.05, epsilon = 1e-9);
        assert_abs_diff_eq!(end[1] - target[1], 0.0, epsilon = 1e-9);
    }

    #[test]
    fn chain_offset_doubles_per_jump() {
        let (fw, _) = discrete_chain(2.0, 3).unwrap();
        let phases = (0..4).map(|_| Phase::single(0.0, &[0.0])).collect();
        let input = HybridSignal::new(1, phases).unwrap();
        let a = reconstruct(&fw, &[1.0], &input, None).unwrap();
        let b = reconstruct(&fw, &[1.1], &input, None).unwrap();
        assert_abs_diff_eq!(b.final_state()[0] - a.final_state()[0], 0.8, epsilon = 1e-12);
    }
}
