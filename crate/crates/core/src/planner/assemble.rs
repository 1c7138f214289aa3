use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hybrid_time::{
    concatenate, reverse, validate_solution_pair, HybridTime, SolutionPair, ValidationReport, ValidationTolerances,
};
use crate::planner::check::{Connection, Scenario};
use crate::planner::config::PlannerConfig;
use crate::planner::tree::SearchTree;
use crate::simulation::{reconstruct, reconstruction_error_bound};
use crate::systems::{distance, MotionPlanningProblem};

/// How a returned plan was put together.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub scenario: Scenario,
    /// Vertex ids from the forward root to the connecting vertex.
    pub fw_path: Vec<usize>,
    /// Vertex ids from the backward root to the connecting vertex.
    pub bw_path: Vec<usize>,
    pub u_star: Option<Vec<f64>>,
    pub reconstruction_applied: bool,
    /// Distance from the plan's final state to `Xf`.
    pub endpoint_error: f64,
    /// Distance between the two connected vertices.
    pub match_distance: f64,
    /// Largest discontinuity left in the returned plan.
    pub seam_gap: f64,
    /// `max dom` of the reversed backward part, when there is one.
    pub backward_horizon: Option<HybridTime>,
    /// Deviation bound used for a reconstructed backward part.
    pub error_bound: Option<f64>,
}

/// The plan together with its validation report.
#[derive(Debug, Clone, PartialEq)]
pub struct AssembledPlan {
    pub plan: SolutionPair,
    pub provenance: Provenance,
    pub report: ValidationReport,
}

fn invalid(report: &ValidationReport) -> Error {
    let reasons: Vec<String> = report.failures.iter().take(3).map(ToString::to_string).collect();
    Error::AssembledPlanInvalid(format!("{} failure(s): {}", report.failures.len(), reasons.join("; ")))
}

/// Validation tolerances for a plan closed by `scenario`: jump matches allow
/// the jump residual of the connection, flow matches without reconstruction
/// allow one seam of size `delta`, and reconstructed plans may leave `C` and
/// `D` by up to `error_bound`.
pub fn plan_tolerances(
    config: &PlannerConfig,
    scenario: Scenario,
    reconstruction_applied: bool,
    error_bound: Option<f64>,
) -> ValidationTolerances {
    let mut tol = config.validation.clone();
    match scenario {
        Scenario::S2 => tol.jump_residual = tol.jump_residual.max(config.delta_jump_pos),
        Scenario::S1 if reconstruction_applied => {
            if let Some(b) = error_bound.filter(|b| b.is_finite()) {
                tol.set_margin = tol.set_margin.max(b);
            }
        }
        Scenario::S1 => tol = tol.with_seam(config.delta + 1e-9),
        Scenario::ForwardOnly => {}
    }
    tol
}

/// Build the forward-time motion plan for `connection` and validate it
/// against the forward system.
///
/// Flow matches give `psi_fw | reverse(psi_bw)`, or `psi_fw | psi_sim` when
/// the reversed backward part is re-simulated from the forward endpoint.
/// Jump matches insert the solved jump between the two parts.
pub fn assemble_plan(
    fw: &SearchTree,
    bw: &SearchTree,
    connection: &Connection,
    problem: &MotionPlanningProblem,
    config: &PlannerConfig,
) -> Result<AssembledPlan> {
    let system = problem.system.as_ref();
    let m = system.input_dim();
    let v = connection.fw_vertex;
    let x_fw = fw.state(v);
    let psi_fw = fw.path_pair(v);
    let mut reconstruction_applied = false;
    let mut error_bound = None;
    let mut backward_horizon = None;
    let mut match_distance = 0.0;

    let plan = match (connection.scenario, connection.bw_vertex) {
        (Scenario::ForwardOnly, _) | (_, None) => {
            match_distance = problem.target.distance(x_fw);
            psi_fw.unwrap_or_else(|| SolutionPair::point(x_fw, &vec![0.0; m]))
        }
        (scenario, Some(w)) => {
            let x_bw = bw.state(w);
            let tail_input = connection
                .u_star
                .clone()
                .or_else(|| psi_fw.as_ref().map(|p| p.final_input().to_vec()))
                .unwrap_or_else(|| vec![0.0; m]);
            let rev = match bw.path_pair(w) {
                Some(p) => reverse(&p, config.boundary_policy),
                None => SolutionPair::point(x_bw, &tail_input),
            };
            backward_horizon = Some(rev.end());
            if scenario == Scenario::S2 {
                let u = connection
                    .u_star
                    .as_ref()
                    .ok_or_else(|| Error::AssembledPlanInvalid("jump match without an input".into()))?;
                let jump = SolutionPair::single_jump(x_fw, u, x_bw);
                let head = match &psi_fw {
                    Some(f) => concatenate(f, &jump)?,
                    None => jump,
                };
                concatenate(&head, &rev)?
            } else {
                match_distance = distance(x_fw, x_bw);
                if config.reconstruction_enabled {
                    let sim = reconstruct(system, x_fw, rev.input(), Some(rev.arc()))?;
                    reconstruction_applied = true;
                    let end = rev.end();
                    let bound = match system.lipschitz() {
                        Some(k) => {
                            reconstruction_error_bound(k.flow_state, k.jump_state, end.t, end.j, match_distance)?
                        }
                        None => f64::INFINITY,
                    };
                    error_bound = Some(bound);
                    match &psi_fw {
                        Some(f) => concatenate(f, &sim)?,
                        None => sim,
                    }
                } else {
                    match &psi_fw {
                        Some(f) => concatenate(f, &rev)?,
                        None => rev.with_initial_state(x_fw),
                    }
                }
            }
        }
    };

    let tol = plan_tolerances(config, connection.scenario, reconstruction_applied, error_bound);
    let report = validate_solution_pair(&plan, system, &tol)?;
    if !report.valid {
        return Err(invalid(&report));
    }
    if !problem.initial.contains(plan.initial_state()) {
        return Err(Error::AssembledPlanInvalid(
            "plan does not start in the initial set".into(),
        ));
    }
    if plan.sample_pairs().any(|(x, u)| problem.unsafe_set.contains(x, u)) {
        return Err(Error::AssembledPlanInvalid("plan visits the unsafe set".into()));
    }
    let provenance = Provenance {
        scenario: connection.scenario,
        fw_path: fw.path_to(v),
        bw_path: connection.bw_vertex.map(|w| bw.path_to(w)).unwrap_or_default(),
        u_star: connection.u_star.clone(),
        reconstruction_applied,
        endpoint_error: problem.target.distance(plan.final_state()),
        match_distance,
        seam_gap: report.max_seam_gap(),
        backward_horizon,
        error_bound,
    };
    Ok(AssembledPlan {
        plan,
        provenance,
        report,
    })
}
