use serde::{Deserialize, Serialize};

use crate::planner::config::{PlannerConfig, PlannerMode};
use crate::planner::tree::{Direction, SearchTree};
use crate::systems::{distance, HybridSystem, MotionPlanningProblem};

/// How a plan was closed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    /// The trees meet during flow within the matching tolerance.
    S1,
    /// The trees are joined by a jump with a solved input.
    S2,
    /// A forward vertex reached the final set on its own.
    ForwardOnly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Connection {
    pub scenario: Scenario,
    pub fw_vertex: usize,
    /// `None` for forward-only plans.
    pub bw_vertex: Option<usize>,
    pub u_star: Option<Vec<f64>>,
}

/// Root in `root_set`, and every junction between two purely continuous
/// edges lies in the flow set.
fn path_ok(tree: &SearchTree, leaf: usize, root_ok: impl Fn(&[f64]) -> bool, system: &dyn HybridSystem) -> bool {
    let path = tree.path_to(leaf);
    if !root_ok(tree.state(path[0])) {
        return false;
    }
    tree.path_edges(leaf).windows(2).all(|w| {
        !(w[0].pair.is_purely_continuous() && w[1].pair.is_purely_continuous())
            || system.in_flow_set(w[1].pair.initial_state(), w[1].pair.initial_input())
    })
}

/// Look for a connection involving the vertex `new_vertex` just added to the
/// tree growing in direction `grown`, scanning every vertex of the other tree.
pub fn solution_check(
    fw: &SearchTree,
    bw: &SearchTree,
    new_vertex: usize,
    grown: Direction,
    problem: &MotionPlanningProblem,
    backward: &dyn HybridSystem,
    config: &PlannerConfig,
) -> Option<Connection> {
    let system = problem.system.as_ref();
    if config.mode == PlannerMode::HyRrt {
        if grown != Direction::Forward || problem.target.distance(fw.state(new_vertex)) > config.delta {
            return None;
        }
        return path_ok(fw, new_vertex, |x| problem.initial.contains(x), system).then_some(Connection {
            scenario: Scenario::ForwardOnly,
            fw_vertex: new_vertex,
            bw_vertex: None,
            u_star: None,
        });
    }

    let candidates: Box<dyn Iterator<Item = (usize, usize)>> = match grown {
        Direction::Forward => Box::new((0..bw.len()).map(move |w| (new_vertex, w))),
        Direction::Backward => Box::new((0..fw.len()).map(move |v| (v, new_vertex))),
    };
    let fw_ok = |v: usize| path_ok(fw, v, |x| problem.initial.contains(x), system);
    let bw_ok = |w: usize| path_ok(bw, w, |x| problem.target.contains(x), backward);

    for (v, w) in candidates {
        let (x_fw, x_bw) = (fw.state(v), bw.state(w));
        if distance(x_fw, x_bw) <= config.delta {
            let terminal_ok = match (fw.incoming_edge(v), bw.incoming_edge(w)) {
                (Some(ef), Some(eb)) if ef.pair.is_purely_continuous() && eb.pair.is_purely_continuous() => {
                    system.in_flow_set(x_bw, eb.pair.final_input())
                }
                _ => true,
            };
            if terminal_ok && fw_ok(v) && bw_ok(w) {
                return Some(Connection {
                    scenario: Scenario::S1,
                    fw_vertex: v,
                    bw_vertex: Some(w),
                    u_star: None,
                });
            }
        }
        if config.mode == PlannerMode::HyRrtConnect {
            for u in system.solve_jump_input(x_fw, x_bw) {
                let lands = system
                    .jump_map(x_fw, &u)
                    .distance(x_bw)
                    .is_some_and(|r| r <= config.delta_jump_pos);
                if lands
                    && system.in_jump_set(x_fw, &u)
                    && !problem.unsafe_set.contains(x_fw, &u)
                    && fw_ok(v)
                    && bw_ok(w)
                {
                    return Some(Connection {
                        scenario: Scenario::S2,
                        fw_vertex: v,
                        bw_vertex: Some(w),
                        u_star: Some(u),
                    });
                }
            }
        }
    }
    None
}
