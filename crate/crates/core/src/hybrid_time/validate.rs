//! Residual-based check that a sampled pair is a solution pair of a system.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hybrid_time::signal::SolutionPair;
use crate::systems::HybridSystem;

/// Tolerances for [`validate_solution_pair`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ValidationTolerances {
    /// Allowed positive margin of `C` at flow samples and of `D` at jumps.
    pub set_margin: f64,
    /// Allowed distance between a post-jump sample and `g(pre-jump sample)`.
    pub jump_residual: f64,
    /// Gain `c` of the per-segment flow tolerance `c * h`. `None` uses
    /// `10 * max |f|` over the phase.
    pub flow_residual_gain: Option<f64>,
    /// Largest state discontinuity that may be accepted as a seam.
    pub seam_gap: f64,
    /// How many seams may be accepted.
    pub max_seams: usize,
}

impl Default for ValidationTolerances {
    fn default() -> Self {
        Self {
            set_margin: 1e-9,
            jump_residual: 1e-9,
            flow_residual_gain: None,
            seam_gap: 0.0,
            max_seams: 0,
        }
    }
}

impl ValidationTolerances {
    /// Same tolerances, additionally accepting one discontinuity of size `gap`.
    pub fn with_seam(mut self, gap: f64) -> Self {
        self.seam_gap = gap;
        self.max_seams = 1;
        self
    }
}

/// Why a sample failed validation.
#[derive(Debug, Clone, PartialEq)]
pub enum ValidationFailure {
    InitialPoint {
        margin_flow: f64,
        margin_jump: f64,
    },
    OutsideFlowSet {
        j: usize,
        i: usize,
        margin: f64,
    },
    FlowResidual {
        j: usize,
        i: usize,
        residual: f64,
        tolerance: f64,
    },
    OutsideJumpSet {
        j: usize,
        margin: f64,
    },
    JumpResidual {
        j: usize,
        residual: f64,
    },
    JumpMapEmpty {
        j: usize,
    },
}

impl fmt::Display for ValidationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationFailure::InitialPoint {
                margin_flow,
                margin_jump,
            } => write!(
                f,
                "initial point outside closure(C) and D (margins {margin_flow:.3e}, {margin_jump:.3e})"
            ),
            ValidationFailure::OutsideFlowSet { j, i, margin } => {
                write!(f, "phase {j} sample {i} outside C by {margin:.3e}")
            }
            ValidationFailure::FlowResidual {
                j,
                i,
                residual,
                tolerance,
            } => write!(
                f,
                "phase {j} segment {i} flow residual {residual:.3e} exceeds {tolerance:.3e}"
            ),
            ValidationFailure::OutsideJumpSet { j, margin } => {
                write!(f, "jump {j} starts outside D by {margin:.3e}")
            }
            ValidationFailure::JumpResidual { j, residual } => {
                write!(f, "jump {j} lands {residual:.3e} away from g")
            }
            ValidationFailure::JumpMapEmpty { j } => write!(f, "jump map is empty at jump {j}"),
        }
    }
}

/// A discontinuity accepted under `seam_gap`: either inside a flow phase or
/// at the landing point of a jump.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Seam {
    pub j: usize,
    pub t: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub valid: bool,
    pub worst_flow_residual: f64,
    pub worst_set_violation: f64,
    pub jump_residuals: Vec<f64>,
    pub failures: Vec<ValidationFailure>,
    pub seams: Vec<Seam>,
}

impl ValidationReport {
    pub fn max_seam_gap(&self) -> f64 {
        self.seams.iter().map(|s| s.gap).fold(0.0, f64::max)
    }

    pub fn worst_jump_residual(&self) -> f64 {
        self.jump_residuals.iter().copied().fold(0.0, f64::max)
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Check `psi` against the flow and jump conditions of `system`.
///
/// Flow segments between consecutive samples are checked with a trapezoidal
/// secant residual `|dx/h - (f(x_i, u) + f(x_{i+1}, u)) / 2|`, taking the
/// better of the two endpoint inputs since the input may switch at a sample.
/// Interior samples of every phase with positive length must lie in `C`,
/// every jump must start in `D` and land on `g`.
pub fn validate_solution_pair<S: HybridSystem + ?Sized>(
    psi: &SolutionPair,
    system: &S,
    tol: &ValidationTolerances,
) -> Result<ValidationReport> {
    if psi.state_dim() != system.state_dim() {
        return Err(Error::DimensionMismatch {
            expected: system.state_dim(),
            actual: psi.state_dim(),
        });
    }
    if psi.input_dim() != system.input_dim() {
        return Err(Error::DimensionMismatch {
            expected: system.input_dim(),
            actual: psi.input_dim(),
        });
    }
    let n = psi.state_dim();
    let m = psi.input_dim();
    let mut failures = Vec::new();
    let mut seams = Vec::new();
    let mut worst_flow = 0.0_f64;
    let mut worst_set = 0.0_f64;
    let mut jump_residuals = Vec::new();

    let x0 = psi.initial_state();
    let u0 = psi.initial_input();
    let (mc, md) = (system.flow_margin(x0, u0), system.jump_margin(x0, u0));
    if mc.min(md) > tol.set_margin {
        worst_set = worst_set.max(mc.min(md));
        failures.push(ValidationFailure::InitialPoint {
            margin_flow: mc,
            margin_jump: md,
        });
    }

    let arc_phases = psi.arc().phases();
    let input_phases = psi.input().phases();
    let mut fa = vec![0.0; n];
    let mut fb = vec![0.0; n];
    for (j, (pa, pu)) in arc_phases.iter().zip(input_phases).enumerate() {
        let len = pa.len();
        if len > 1 {
            let gain = tol.flow_residual_gain.unwrap_or_else(|| {
                10.0 * (0..len)
                    .map(|i| norm(&system.flow(pa.value(i, n), pu.value(i, m))))
                    .fold(0.0, f64::max)
            });
            let scale = (0..len).map(|i| norm(pa.value(i, n))).fold(1.0, f64::max);
            // rounding of stored samples, amplified by 1/h
            let rounding = 64.0 * f64::EPSILON * scale;
            for i in 1..len - 1 {
                let margin = system.flow_margin(pa.value(i, n), pu.value(i, m));
                if margin > 0.0 {
                    worst_set = worst_set.max(margin);
                }
                if margin > tol.set_margin {
                    failures.push(ValidationFailure::OutsideFlowSet { j, i, margin });
                }
            }
            for i in 0..len - 1 {
                let h = pa.time(i + 1) - pa.time(i);
                let (xa, xb) = (pa.value(i, n), pa.value(i + 1, n));
                let mut best = f64::INFINITY;
                for u in [pu.value(i, m), pu.value(i + 1, m)] {
                    system.flow_map(xa, u, &mut fa);
                    system.flow_map(xb, u, &mut fb);
                    let miss: Vec<f64> = (0..n).map(|k| (xb[k] - xa[k]) - 0.5 * h * (fa[k] + fb[k])).collect();
                    best = best.min(norm(&miss));
                }
                let residual = best / h;
                let tolerance = gain * h + rounding / h;
                if residual <= tolerance {
                    worst_flow = worst_flow.max(residual);
                } else if best <= tol.seam_gap && seams.len() < tol.max_seams {
                    seams.push(Seam {
                        j,
                        t: pa.time(i + 1),
                        gap: best,
                    });
                } else {
                    worst_flow = worst_flow.max(residual);
                    failures.push(ValidationFailure::FlowResidual {
                        j,
                        i,
                        residual,
                        tolerance,
                    });
                }
            }
        }
        if j + 1 < arc_phases.len() {
            let x = pa.value(len - 1, n);
            let u = pu.value(len - 1, m);
            let margin = system.jump_margin(x, u);
            if margin > 0.0 {
                worst_set = worst_set.max(margin);
            }
            if margin > tol.set_margin {
                failures.push(ValidationFailure::OutsideJumpSet { j, margin });
            }
            let next = arc_phases[j + 1].value(0, n);
            match system.jump_map(x, u).distance(next) {
                Some(r) => {
                    jump_residuals.push(r);
                    if r > tol.jump_residual {
                        if r <= tol.seam_gap && seams.len() < tol.max_seams {
                            seams.push(Seam {
                                j: j + 1,
                                t: pa.end_time(),
                                gap: r,
                            });
                        } else {
                            failures.push(ValidationFailure::JumpResidual { j, residual: r });
                        }
                    }
                }
                None => {
                    jump_residuals.push(f64::INFINITY);
                    failures.push(ValidationFailure::JumpMapEmpty { j });
                }
            }
        }
    }

    Ok(ValidationReport {
        valid: failures.is_empty(),
        worst_flow_residual: worst_flow,
        worst_set_violation: worst_set,
        jump_residuals,
        failures,
        seams,
    })
}
