use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hybrid_time::{HybridSignal, Interval, Phase, SolutionPair};
use crate::planner::{Direction, PlanResult, PlanStats, PlanStatus, PlannerMode, Provenance, SearchTree};

/// Samples of one phase. Each row is `[t, x_1..x_n, u_1..u_m]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseRecord {
    pub j: usize,
    pub rows: Vec<Vec<f64>>,
}

/// File form of a [`SolutionPair`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionPairRecord {
    pub state_dim: usize,
    pub input_dim: usize,
    pub domain: Vec<Interval>,
    pub phases: Vec<PhaseRecord>,
}

impl From<&SolutionPair> for SolutionPairRecord {
    fn from(pair: &SolutionPair) -> Self {
        let (n, m) = (pair.state_dim(), pair.input_dim());
        let phases = pair
            .arc()
            .phases()
            .iter()
            .zip(pair.input().phases())
            .enumerate()
            .map(|(j, (xp, up))| PhaseRecord {
                j,
                rows: (0..xp.len())
                    .map(|i| {
                        let mut row = Vec::with_capacity(1 + n + m);
                        row.push(xp.time(i));
                        row.extend_from_slice(xp.value(i, n));
                        row.extend_from_slice(up.value(i, m));
                        row
                    })
                    .collect(),
            })
            .collect();
        Self {
            state_dim: n,
            input_dim: m,
            domain: pair.domain().intervals().collect(),
            phases,
        }
    }
}

impl SolutionPairRecord {
    pub fn to_pair(&self) -> Result<SolutionPair> {
        let (n, m) = (self.state_dim, self.input_dim);
        if self.phases.len() != self.domain.len() {
            return Err(Error::Format(format!(
                "{} domain intervals but {} phases",
                self.domain.len(),
                self.phases.len()
            )));
        }
        let mut arc = Vec::with_capacity(self.phases.len());
        let mut input = Vec::with_capacity(self.phases.len());
        for (j, (p, iv)) in self.phases.iter().zip(&self.domain).enumerate() {
            if p.j != j || iv.j != j {
                return Err(Error::Format(format!("phase {j} is out of order")));
            }
            let (Some(first), Some(last)) = (p.rows.first(), p.rows.last()) else {
                return Err(Error::Format(format!("phase {j} has no rows")));
            };
            if first[0] != iv.t_start || last[0] != iv.t_end {
                return Err(Error::Format(format!(
                    "phase {j} rows span [{}, {}] but the domain says [{}, {}]",
                    first[0], last[0], iv.t_start, iv.t_end
                )));
            }
            let mut times = Vec::with_capacity(p.rows.len());
            let mut xs = Vec::with_capacity(p.rows.len() * n);
            let mut us = Vec::with_capacity(p.rows.len() * m);
            for row in &p.rows {
                if row.len() != 1 + n + m {
                    return Err(Error::Format(format!(
                        "row in phase {j} has {} entries, expected {}",
                        row.len(),
                        1 + n + m
                    )));
                }
                times.push(row[0]);
                xs.extend_from_slice(&row[1..1 + n]);
                us.extend_from_slice(&row[1 + n..]);
            }
            arc.push(Phase::new(times.clone(), xs));
            input.push(Phase::new(times, us));
        }
        let fmt = |e: Error| Error::Format(e.to_string());
        SolutionPair::new(
            HybridSignal::new(n, arc).map_err(fmt)?,
            HybridSignal::new(m, input).map_err(fmt)?,
        )
        .map_err(fmt)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    Flow,
    Jump,
    /// Both flows and jumps, or a single sample.
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub id: usize,
    pub state: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub from: usize,
    pub to: usize,
    pub kind: EdgeKind,
    pub from_state: Vec<f64>,
    pub to_state: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeRecord {
    pub direction: Direction,
    pub roots: Vec<usize>,
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<EdgeRecord>,
}

impl From<&SearchTree> for TreeRecord {
    fn from(tree: &SearchTree) -> Self {
        let edges = tree
            .edges()
            .iter()
            .map(|e| {
                let kind = if e.pair.is_purely_continuous() {
                    EdgeKind::Flow
                } else if e.pair.arc().phases().iter().all(|p| p.len() == 1) && e.pair.end().j > 0 {
                    EdgeKind::Jump
                } else {
                    EdgeKind::Mixed
                };
                EdgeRecord {
                    from: e.from,
                    to: e.to,
                    kind,
                    from_state: tree.state(e.from).to_vec(),
                    to_state: tree.state(e.to).to_vec(),
                }
            })
            .collect();
        Self {
            direction: tree.direction(),
            roots: tree.roots().to_vec(),
            vertices: tree
                .vertices()
                .iter()
                .map(|v| VertexRecord {
                    id: v.id,
                    state: v.state.clone(),
                })
                .collect(),
            edges,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trees {
    pub forward: TreeRecord,
    pub backward: TreeRecord,
}

/// The two partial plans a connection joined, each in its own tree's time
/// direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartialPlans {
    pub forward: Option<SolutionPairRecord>,
    pub backward: Option<SolutionPairRecord>,
}

/// Wall-clock measurements. Kept apart from everything else so that two runs
/// with the same seed can be compared byte for byte once this is cleared.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Timing {
    pub wall_time_s: f64,
}

/// Everything written by one planning run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunOutput {
    pub status: PlanStatus,
    pub mode: PlannerMode,
    pub seed: u64,
    pub plan: Option<SolutionPairRecord>,
    pub provenance: Option<Provenance>,
    pub partial_plans: Option<PartialPlans>,
    pub stats: PlanStats,
    pub timing: Timing,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trees: Option<Trees>,
}

impl RunOutput {
    pub fn from_result(result: &PlanResult, mode: PlannerMode, seed: u64, dump_trees: bool) -> Self {
        let partial_plans = result.provenance.as_ref().map(|p| {
            let leaf = |path: &[usize]| path.last().copied();
            PartialPlans {
                forward: leaf(&p.fw_path)
                    .and_then(|v| result.fw_tree.path_pair(v))
                    .map(|pair| SolutionPairRecord::from(&pair)),
                backward: leaf(&p.bw_path)
                    .and_then(|w| result.bw_tree.path_pair(w))
                    .map(|pair| SolutionPairRecord::from(&pair)),
            }
        });
        Self {
            status: result.status,
            mode,
            seed,
            plan: result.plan.as_ref().map(SolutionPairRecord::from),
            provenance: result.provenance.clone(),
            partial_plans,
            stats: result.stats,
            timing: Timing {
                wall_time_s: result.wall_time.as_secs_f64(),
            },
            trees: dump_trees.then(|| Trees {
                forward: TreeRecord::from(&result.fw_tree),
                backward: TreeRecord::from(&result.bw_tree),
            }),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Format(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("run output serializes")
    }

    /// JSON with the timing section zeroed.
    pub fn deterministic_json(&self) -> String {
        Self {
            timing: Timing::default(),
            ..self.clone()
        }
        .to_json()
    }

    pub fn plan_pair(&self) -> Result<Option<SolutionPair>> {
        self.plan.as_ref().map(SolutionPairRecord::to_pair).transpose()
    }
}
