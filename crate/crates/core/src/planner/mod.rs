//! Forward and backward search trees grown in an interleaved loop, connected
//! either during flow or through a solved jump.

mod assemble;
mod check;
mod config;
mod tree;

pub use assemble::{assemble_plan, plan_tolerances, AssembledPlan, Provenance};
pub use check::{solution_check, Connection, Scenario};
pub use config::{ConstraintSets, PlannerConfig, PlannerMode, StatePredicate};
pub use tree::{Direction, Edge, SearchTree, Vertex};

use std::time::{Duration, Instant};

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::hybrid_time::SolutionPair;
use crate::simulation::{new_state, FlowOptions, InputLibrary};
use crate::systems::{HybridSystem, MotionPlanningProblem, UnsafeSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlanStatus {
    Found,
    Failure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PlanStats {
    pub iterations: usize,
    pub vertices_fw: usize,
    pub vertices_bw: usize,
    /// Connections found whose assembled plan failed validation.
    pub rejected_connections: usize,
}

impl PlanStats {
    pub fn vertices(&self) -> usize {
        self.vertices_fw + self.vertices_bw
    }
}

#[derive(Debug, Clone)]
pub struct PlanResult {
    pub status: PlanStatus,
    pub plan: Option<SolutionPair>,
    pub provenance: Option<Provenance>,
    pub stats: PlanStats,
    pub wall_time: Duration,
    pub fw_tree: SearchTree,
    pub bw_tree: SearchTree,
}

impl PlanResult {
    pub fn is_found(&self) -> bool {
        self.status == PlanStatus::Found
    }
}

/// Which of a system's bounded samplers to draw from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleRegion {
    FlowStates,
    JumpStates,
}

pub fn random_state<S: HybridSystem + ?Sized>(system: &S, region: SampleRegion, rng: &mut dyn RngCore) -> Vec<f64> {
    match region {
        SampleRegion::FlowStates => system.sample_flow_state(rng),
        SampleRegion::JumpStates => system.sample_jump_state(rng),
    }
}

/// Nearest vertex of `tree` to `x` among those satisfying `allowed`.
pub fn nearest_neighbor(x: &[f64], tree: &SearchTree, allowed: &dyn Fn(&[f64]) -> bool) -> Option<usize> {
    tree.nearest(x, allowed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtendOutcome {
    Advanced(usize),
    Trapped,
}

/// Everything `extend` needs about the tree's side of the problem.
pub struct Grower<'a> {
    pub system: &'a dyn HybridSystem,
    pub library: &'a InputLibrary,
    pub unsafe_set: &'a UnsafeSet,
    pub p_n: f64,
    pub flow: &'a FlowOptions,
}

/// Grow `tree` from the vertex nearest to `x_rand` among those satisfying
/// `allowed`.
pub fn extend(
    tree: &mut SearchTree,
    x_rand: &[f64],
    grower: &Grower<'_>,
    allowed: &dyn Fn(&[f64]) -> bool,
    rng: &mut dyn RngCore,
) -> ExtendOutcome {
    let Some(v) = tree.nearest(x_rand, allowed) else {
        return ExtendOutcome::Trapped;
    };
    let x = tree.state(v).to_vec();
    match new_state(
        grower.system,
        &x,
        grower.library,
        grower.unsafe_set,
        grower.p_n,
        grower.flow,
        rng,
    ) {
        Some(ext) => ExtendOutcome::Advanced(tree.add_vertex(v, ext.pair)),
        None => ExtendOutcome::Trapped,
    }
}

fn grow_once(
    tree: &mut SearchTree,
    grower: &Grower<'_>,
    flow_constraint: Option<&StatePredicate>,
    jump_constraint: Option<&StatePredicate>,
    rng: &mut dyn RngCore,
) -> ExtendOutcome {
    let system = grower.system;
    if rng.gen::<f64>() <= grower.p_n {
        let x_rand = random_state(system, SampleRegion::FlowStates, rng);
        match flow_constraint {
            Some(c) => extend(tree, &x_rand, grower, &|x| c(x), rng),
            None => extend(tree, &x_rand, grower, &|x| system.in_flow_states(x), rng),
        }
    } else {
        let x_rand = random_state(system, SampleRegion::JumpStates, rng);
        match jump_constraint {
            Some(c) => extend(tree, &x_rand, grower, &|x| c(x), rng),
            None => extend(tree, &x_rand, grower, &|x| system.in_jump_states(x), rng),
        }
    }
}

/// Run the planner for at most `config.max_iterations` iterations, each
/// extending the forward tree and then (in bidirectional modes) the backward
/// tree, and checking for a connection after every successful extension.
///
/// In forward-only mode `backward` and the backward library are not used.
pub fn hyrrt_connect(
    problem: &MotionPlanningProblem,
    backward: &dyn HybridSystem,
    libraries: (&InputLibrary, &InputLibrary),
    config: &PlannerConfig,
    rng: &mut dyn RngCore,
) -> Result<PlanResult> {
    config.check()?;
    let started = Instant::now();
    let bidirectional = config.mode.is_bidirectional();
    let mut fw = SearchTree::new(Direction::Forward);
    let mut bw = SearchTree::new(Direction::Backward);
    for _ in 0..config.root_samples {
        fw.add_root(problem.initial.sample(rng));
    }
    if bidirectional {
        for _ in 0..config.root_samples {
            bw.add_root(problem.target.sample(rng));
        }
    }
    let fw_grower = Grower {
        system: problem.system.as_ref(),
        library: libraries.0,
        unsafe_set: &problem.unsafe_set,
        p_n: config.p_n_fw,
        flow: &config.flow,
    };
    let bw_grower = Grower {
        system: backward,
        library: libraries.1,
        unsafe_set: &problem.unsafe_set,
        p_n: config.p_n_bw,
        flow: &config.flow,
    };
    let mut stats = PlanStats::default();
    let c = &config.constraints;

    let finish = |status, found: Option<AssembledPlan>, stats: PlanStats, fw: SearchTree, bw: SearchTree| {
        let (plan, provenance) = match found {
            Some(a) => (Some(a.plan), Some(a.provenance)),
            None => (None, None),
        };
        PlanResult {
            status,
            plan,
            provenance,
            stats: PlanStats {
                vertices_fw: fw.len(),
                vertices_bw: bw.len(),
                ..stats
            },
            wall_time: started.elapsed(),
            fw_tree: fw,
            bw_tree: bw,
        }
    };

    for k in 0..config.max_iterations {
        stats.iterations = k + 1;
        if let ExtendOutcome::Advanced(v) = grow_once(&mut fw, &fw_grower, c.flow_fw.as_ref(), c.jump_fw.as_ref(), rng)
        {
            if let Some(found) = try_connect(&fw, &bw, v, Direction::Forward, problem, backward, config, &mut stats) {
                return Ok(finish(PlanStatus::Found, Some(found), stats, fw, bw));
            }
        }
        if bidirectional {
            if let ExtendOutcome::Advanced(v) =
                grow_once(&mut bw, &bw_grower, c.flow_bw.as_ref(), c.jump_bw.as_ref(), rng)
            {
                if let Some(found) =
                    try_connect(&fw, &bw, v, Direction::Backward, problem, backward, config, &mut stats)
                {
                    return Ok(finish(PlanStatus::Found, Some(found), stats, fw, bw));
                }
            }
        }
    }
    Ok(finish(PlanStatus::Failure, None, stats, fw, bw))
}

#[allow(clippy::too_many_arguments)]
fn try_connect(
    fw: &SearchTree,
    bw: &SearchTree,
    v: usize,
    dir: Direction,
    problem: &MotionPlanningProblem,
    backward: &dyn HybridSystem,
    config: &PlannerConfig,
    stats: &mut PlanStats,
) -> Option<AssembledPlan> {
    let connection = solution_check(fw, bw, v, dir, problem, backward, config)?;
    match assemble_plan(fw, bw, &connection, problem, config) {
        Ok(a) => Some(a),
        Err(_) => {
            stats.rejected_connections += 1;
            None
        }
    }
}
