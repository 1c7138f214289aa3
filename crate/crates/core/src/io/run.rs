use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hybrid_time::{validate_solution_pair, ValidationReport};
use crate::io::config::RunConfig;
use crate::io::output::RunOutput;
use crate::planner::{hyrrt_connect, plan_tolerances, PlanResult, PlannerMode};

/// Run one seeded planning attempt as described by `config`.
pub fn run_plan(config: &RunConfig) -> Result<(PlanResult, RunOutput)> {
    let setup = config.setup()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.planner.seed);
    let result = hyrrt_connect(
        &setup.problem,
        setup.backward.as_ref(),
        (&setup.fw_library, &setup.bw_library),
        &setup.planner,
        &mut rng,
    )?;
    let output = RunOutput::from_result(
        &result,
        setup.planner.mode,
        config.planner.seed,
        config.output.dump_trees,
    );
    Ok((result, output))
}

/// Outcome of one benchmark run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub seed: u64,
    pub found: bool,
    pub vertices: usize,
    pub wall_time_s: f64,
}

/// Aggregates over the runs of one mode. Vertex and time statistics cover
/// every run, found or not.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSummary {
    pub mode: PlannerMode,
    pub runs: usize,
    pub success_rate: f64,
    pub time_mean_s: f64,
    pub time_median_s: f64,
    pub vertices_mean: f64,
    pub vertices_median: f64,
    /// Sample standard deviations; absent for a single run.
    pub time_std_s: Option<f64>,
    pub vertices_std: Option<f64>,
    pub records: Vec<RunRecord>,
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

pub fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}

fn std_dev(v: &[f64]) -> f64 {
    let m = mean(v);
    (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64).sqrt()
}

impl ModeSummary {
    pub fn from_records(mode: PlannerMode, records: Vec<RunRecord>) -> Self {
        let runs = records.len();
        let times: Vec<f64> = records.iter().map(|r| r.wall_time_s).collect();
        let verts: Vec<f64> = records.iter().map(|r| r.vertices as f64).collect();
        let multi = runs > 1;
        Self {
            mode,
            runs,
            success_rate: records.iter().filter(|r| r.found).count() as f64 / runs as f64,
            time_mean_s: mean(&times),
            time_median_s: median(&times),
            vertices_mean: mean(&verts),
            vertices_median: median(&verts),
            time_std_s: multi.then(|| std_dev(&times)),
            vertices_std: multi.then(|| std_dev(&verts)),
            records,
        }
    }
}

/// Run `runs` attempts per mode with seeds `base + 0, base + 1, ...`, where
/// `base` is the configured seed.
pub fn run_benchmark(config: &RunConfig, runs: usize, modes: &[PlannerMode]) -> Result<Vec<ModeSummary>> {
    if runs == 0 {
        return Err(Error::ConfigInvalid("runs must be at least 1".into()));
    }
    if modes.is_empty() {
        return Err(Error::ConfigInvalid("no planner modes selected".into()));
    }
    config.setup()?;
    let base = config.planner.seed;
    modes
        .iter()
        .map(|&mode| {
            let records = (0..runs as u64)
                .map(|i| {
                    let mut c = config.clone();
                    c.planner.mode = mode;
                    c.planner.seed = base.wrapping_add(i);
                    c.output.dump_trees = false;
                    let (result, _) = run_plan(&c)?;
                    Ok(RunRecord {
                        seed: c.planner.seed,
                        found: result.is_found(),
                        vertices: result.stats.vertices(),
                        wall_time_s: result.wall_time.as_secs_f64(),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(ModeSummary::from_records(mode, records))
        })
        .collect()
}

/// Re-validate the plan stored in `output` against the system of `config`,
/// with the tolerances the planner used for that kind of connection.
pub fn validate_output(output: &RunOutput, config: &RunConfig) -> Result<ValidationReport> {
    let plan = output
        .plan_pair()?
        .ok_or_else(|| Error::Format("run output holds no plan".into()))?;
    let setup = config.setup()?;
    let tol = match &output.provenance {
        Some(p) => plan_tolerances(&setup.planner, p.scenario, p.reconstruction_applied, p.error_bound),
        None => setup.planner.validation.clone(),
    };
    validate_solution_pair(&plan, setup.problem.system.as_ref(), &tol)
}
