//! End-to-end acceptance checks. Runs as a plain binary so that every check
//! prints its verdict line even when `cargo test` captures output; exits
//! nonzero if any check fails.

use std::process::ExitCode;
use std::time::Instant;

use hyrrt_core::hybrid_time::{
    concatenate, reverse, validate_solution_pair, BoundaryInputPolicy, Interval, SolutionPair, ValidationTolerances,
};
use hyrrt_core::io::{run_benchmark, run_plan, validate_output, RunConfig};
use hyrrt_core::planner::PlannerMode;
use hyrrt_core::simulation::{
    apply_jump, integrate_flow, new_state, reconstruct, reconstruction_error_bound, FlowEvent, FlowOptions,
    InputLibrary,
};
use hyrrt_core::systems::{
    bouncing_ball, bouncing_ball_lambda_zero, discrete_chain, distance, BouncingBallParams, BoxRegion, HybridSystem,
    JumpImage, UnsafeSet,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEEDS: u64 = 20;

struct Verdict {
    pass: bool,
    detail: String,
}

type Check = (&'static str, fn() -> Verdict);

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn exact_connection_config() -> RunConfig {
    let mut c = RunConfig::default();
    c.problem.initial_state = vec![14.0, 0.0];
    c.problem.final_state = vec![0.0, -16.58];
    c.system.gamma = 9.81;
    c.system.lambda = 0.8;
    c.planner.delta = 0.02;
    c.planner.reconstruction_enabled = false;
    c
}

fn tolerance_run_config() -> RunConfig {
    let mut c = RunConfig::default();
    c.problem.initial_state = vec![14.0, 0.0];
    c.problem.final_state = vec![10.0, 0.0];
    c.problem.unsafe_input = Some(hyrrt_core::io::InputBand {
        lo: vec![0.0],
        hi: vec![5.0],
    });
    c.planner.delta = 0.2;
    c.planner.max_iterations = 2000;
    c
}

fn exact_connection() -> Verdict {
    let base = exact_connection_config();
    let (mut found, mut bad, mut worst_seam, mut slowest) = (0, Vec::new(), 0.0f64, 0.0f64);
    for seed in 0..SEEDS {
        let mut c = base.clone();
        c.planner.seed = seed;
        let (result, out) = run_plan(&c).expect("planner runs");
        slowest = slowest.max(out.timing.wall_time_s);
        if !result.is_found() {
            continue;
        }
        found += 1;
        let report = validate_output(&out, &c).expect("plan parses");
        worst_seam = worst_seam.max(report.max_seam_gap());
        if !report.valid || report.max_seam_gap() > 0.02 {
            bad.push(seed);
        }
    }
    verdict(
        found >= 18 && bad.is_empty(),
        format!("found {found}/{SEEDS}, invalid or wide seams at seeds {bad:?}, worst seam {worst_seam:.4}, slowest run {slowest:.3}s"),
    )
}

fn tolerance_run() -> Verdict {
    let base = tolerance_run_config();
    let mut found_connect = 0;
    let (mut reconstructed, mut violations, mut invalid) = (0, Vec::new(), Vec::new());
    let mut worst_ratio = 0.0f64;
    for mode in [PlannerMode::HyRrtConnect, PlannerMode::BiHyRrt] {
        for seed in 0..SEEDS {
            let mut c = base.clone();
            c.planner.mode = mode;
            c.planner.seed = seed;
            let (result, out) = run_plan(&c).expect("planner runs");
            if !result.is_found() {
                continue;
            }
            if mode == PlannerMode::HyRrtConnect {
                found_connect += 1;
            }
            if !validate_output(&out, &c).expect("plan parses").valid {
                invalid.push((mode.as_str(), seed));
            }
            let p = out.provenance.as_ref().expect("found runs carry provenance");
            if p.reconstruction_applied {
                reconstructed += 1;
                let h = p.backward_horizon.expect("reconstructed plans have a backward part");
                let bound = reconstruction_error_bound(1.0, 1.0, h.t, h.j, 0.2).unwrap();
                worst_ratio = worst_ratio.max(p.endpoint_error / bound);
                if p.endpoint_error > bound {
                    violations.push((mode.as_str(), seed));
                }
            }
        }
    }
    verdict(
        found_connect >= 16 && reconstructed > 0 && violations.is_empty() && invalid.is_empty(),
        format!(
            "hyrrt_connect found {found_connect}/{SEEDS}; {reconstructed} reconstructed plans checked, \
             worst error/bound {worst_ratio:.3}, bound violations {violations:?}, invalid {invalid:?}"
        ),
    )
}

fn vertex_ordering() -> Verdict {
    let started = Instant::now();
    let summaries = run_benchmark(&tolerance_run_config(), SEEDS as usize, &PlannerMode::ALL).expect("benchmark runs");
    let median = |m: PlannerMode| summaries.iter().find(|s| s.mode == m).unwrap().vertices_median;
    let (h, b, c) = (
        median(PlannerMode::HyRrt),
        median(PlannerMode::BiHyRrt),
        median(PlannerMode::HyRrtConnect),
    );
    verdict(
        c < b && b < h && c <= 0.7 * h,
        format!(
            "median vertices hyrrt {h}, bi_hyrrt {b}, hyrrt_connect {c}; total {:.1}s",
            started.elapsed().as_secs_f64()
        ),
    )
}

fn ball_library() -> InputLibrary {
    let u = BoxRegion::new(vec![0.0], vec![5.0]).unwrap();
    InputLibrary::new(u.clone(), 2.0, u).unwrap()
}

/// Chain of 1 to 4 random extensions of `system` from a random state.
fn random_pair(system: &dyn HybridSystem, start: Option<&[f64]>, rng: &mut ChaCha8Rng) -> SolutionPair {
    let library = ball_library();
    let flow = FlowOptions::default();
    loop {
        let mut x = match start {
            Some(s) => s.to_vec(),
            None if rng.gen_bool(0.5) => system.sample_flow_state(rng),
            None => system.sample_jump_state(rng),
        };
        let steps = rng.gen_range(1..=4);
        let mut pair: Option<SolutionPair> = None;
        for _ in 0..steps {
            let Some(ext) = new_state(system, &x, &library, &UnsafeSet::Empty, 0.5, &flow, rng) else {
                break;
            };
            x = ext.state;
            pair = Some(match pair {
                Some(p) => concatenate(&p, &ext.pair).unwrap(),
                None => ext.pair,
            });
        }
        if let Some(p) = pair {
            return p;
        }
    }
}

fn reversal() -> Verdict {
    let (problem, backward) = bouncing_ball(BouncingBallParams::default()).unwrap();
    let forward = problem.system;
    let tol = ValidationTolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut failures, mut worst_jump, mut worst_flow, mut jumps) = (0, 0.0f64, 0.0f64, 0);
    for (source, target) in [
        (forward.as_ref(), backward.as_ref()),
        (backward.as_ref(), forward.as_ref()),
    ] {
        for _ in 0..200 {
            let psi = random_pair(source, None, &mut rng);
            jumps += psi.end().j;
            let rev = reverse(&psi, BoundaryInputPolicy::CopyNearest);
            let report = validate_solution_pair(&rev, target, &tol).unwrap();
            worst_jump = worst_jump.max(report.worst_jump_residual());
            worst_flow = worst_flow.max(report.worst_flow_residual);
            if !report.valid || report.worst_jump_residual() > 1e-12 {
                failures += 1;
            }
        }
    }
    verdict(
        failures == 0,
        format!("400 pairs ({jumps} jumps), {failures} failures, worst jump residual {worst_jump:.1e}, worst flow residual {worst_flow:.1e}"),
    )
}

/// Union of the domain of `a` and the domain of `b` shifted by `max dom a`,
/// one interval per jump count.
fn domain_union(a: &[Interval], b: &[Interval]) -> Vec<Interval> {
    let end = a.last().unwrap();
    let shifted = b.iter().map(|iv| Interval {
        j: iv.j + end.j,
        t_start: iv.t_start + end.t_end,
        t_end: iv.t_end + end.t_end,
    });
    let all: Vec<Interval> = a.iter().copied().chain(shifted).collect();
    let jmax = all.iter().map(|iv| iv.j).max().unwrap();
    (0..=jmax)
        .map(|j| {
            let same: Vec<&Interval> = all.iter().filter(|iv| iv.j == j).collect();
            Interval {
                j,
                t_start: same.iter().map(|iv| iv.t_start).fold(f64::INFINITY, f64::min),
                t_end: same.iter().map(|iv| iv.t_end).fold(f64::NEG_INFINITY, f64::max),
            }
        })
        .collect()
}

fn concatenation() -> Verdict {
    let (problem, _) = bouncing_ball(BouncingBallParams::default()).unwrap();
    let system = problem.system.as_ref();
    let tol = ValidationTolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut invalid, mut domain_mismatch) = (0, 0);
    for _ in 0..200 {
        let a = random_pair(system, None, &mut rng);
        let b = random_pair(system, Some(a.final_state()), &mut rng);
        let ab = concatenate(&a, &b).unwrap();
        if !validate_solution_pair(&ab, system, &tol).unwrap().valid {
            invalid += 1;
        }
        let expected = domain_union(
            &a.domain().intervals().collect::<Vec<_>>(),
            &b.domain().intervals().collect::<Vec<_>>(),
        );
        if ab.domain().intervals().collect::<Vec<_>>() != expected {
            domain_mismatch += 1;
        }
    }
    verdict(
        invalid == 0 && domain_mismatch == 0,
        format!("200 pairs, {invalid} invalid concatenations, {domain_mismatch} domain mismatches"),
    )
}

fn unit_vector(rng: &mut ChaCha8Rng) -> [f64; 2] {
    let a = rng.gen_range(0.0..std::f64::consts::TAU);
    [a.cos(), a.sin()]
}

fn flow_reconstruction_bound() -> Verdict {
    let (problem, backward) = bouncing_ball(BouncingBallParams::default()).unwrap();
    let forward = problem.system.as_ref();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut trials, mut violations, mut worst) = (0, 0, 0.0f64);
    while trials < 100 {
        let end = [rng.gen_range(2.0..15.0), rng.gen_range(-10.0..10.0)];
        let u = [rng.gen_range(0.0..5.0)];
        let duration = rng.gen_range(0.01..2.0);
        let (psi_bw, _) = integrate_flow(backward.as_ref(), &end, &u, duration, &FlowOptions::default()).unwrap();
        if psi_bw.is_trivial() {
            continue;
        }
        trials += 1;
        let rev = reverse(&psi_bw, BoundaryInputPolicy::CopyNearest);
        let delta = rng.gen_range(1e-3..=1.0);
        let dir = unit_vector(&mut rng);
        let x0 = rev.initial_state();
        let start = [x0[0] + delta * dir[0], x0[1] + delta * dir[1]];
        let sim = reconstruct(forward, &start, rev.input(), Some(rev.arc())).unwrap();
        let deviation = distance(sim.final_state(), rev.final_state());
        let bound = rev.end().t.exp() * delta;
        worst = worst.max(deviation / bound);
        if deviation > bound {
            violations += 1;
        }
    }
    verdict(
        violations == 0,
        format!("{trials} trials, {violations} violations, worst deviation/bound {worst:.3}"),
    )
}

fn chain_doubling() -> Verdict {
    let (forward, backward) = discrete_chain(2.0, 6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    let mut lines = Vec::new();
    for jumps in 1..=6usize {
        let mut x = backward.sample_jump_state(&mut rng);
        let mut psi: Option<SolutionPair> = None;
        for _ in 0..jumps {
            let u = [rng.gen_range(-1.0..1.0)];
            let next = apply_jump(&backward, &x, &u, &mut rng).unwrap();
            let step = SolutionPair::single_jump(&x, &u, &next);
            psi = Some(match psi {
                Some(p) => concatenate(&p, &step).unwrap(),
                None => step,
            });
            x = next;
        }
        let rev = reverse(&psi.unwrap(), BoundaryInputPolicy::CopyNearest);
        let x0 = rev.initial_state();
        let nominal = rng.gen_range(0.05..1.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let start = [x0[0] + nominal];
        let delta = (start[0] - x0[0]).abs();
        let sim = reconstruct(&forward, &start, rev.input(), Some(rev.arc())).unwrap();
        let deviation = distance(sim.final_state(), rev.final_state());
        let expected = 2f64.powi(jumps as i32) * delta;
        let rel = (deviation - expected).abs() / expected;
        worst = worst.max(rel);
        lines.push(format!("J={jumps}:{rel:.1e}"));
    }
    verdict(worst <= 1e-12, format!("relative errors {}", lines.join(" ")))
}

/// Probe the backward jump map of `backward` against the forward system:
/// every preimage maps forward onto the probed state from inside `D`, the
/// probe lies in the backward jump set exactly when its preimage is nonempty,
/// and the state a probe was generated from is among its preimages.
fn probe_preimages(
    forward: &dyn HybridSystem,
    backward: &dyn HybridSystem,
    inputs: &BoxRegion,
    rng: &mut ChaCha8Rng,
) -> (usize, f64) {
    let mut failures = 0;
    let mut worst = 0.0f64;
    for i in 0..1000 {
        let u = inputs.sample(rng);
        let (x, origin) = if i % 2 == 0 {
            let z = forward.sample_jump_state(rng);
            if !forward.in_jump_set(&z, &u) {
                failures += 1;
                continue;
            }
            let x = forward.jump_map(&z, &u).choose(rng).unwrap();
            (x, Some(z))
        } else {
            (backward.sample_jump_state(rng), None)
        };
        let image = backward.jump_map(&x, &u);
        if backward.in_jump_set(&x, &u) == image.is_empty() {
            failures += 1;
            continue;
        }
        let candidates: Vec<Vec<f64>> = match &image {
            JumpImage::Finite(v) => v.clone(),
            JumpImage::Continuum(b) => {
                let mut v = vec![b.lo.clone(), b.hi.clone()];
                v.extend((0..3).map(|_| b.sample(rng)));
                v
            }
        };
        for z in &candidates {
            let r = forward.jump_map(z, &u).distance(&x).unwrap_or(f64::INFINITY);
            worst = worst.max(r);
            if r > 1e-12 || !forward.in_jump_set(z, &u) {
                failures += 1;
            }
        }
        if let Some(z) = origin {
            let r = image.distance(&z).unwrap_or(f64::INFINITY);
            worst = worst.max(r);
            if r > 1e-12 {
                failures += 1;
            }
        }
    }
    (failures, worst)
}

fn backward_soundness() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let ball_inputs = BoxRegion::new(vec![0.0], vec![5.0]).unwrap();
    let (problem, ball_bw) = bouncing_ball(BouncingBallParams::default()).unwrap();
    let zero_bw = bouncing_ball_lambda_zero(9.81, -18.0).unwrap();
    let (chain_fw, chain_bw) = discrete_chain(2.0, 6).unwrap();
    let chain_inputs = BoxRegion::new(vec![-1.0], vec![1.0]).unwrap();
    let results = [
        (
            "bouncing_ball",
            probe_preimages(problem.system.as_ref(), ball_bw.as_ref(), &ball_inputs, &mut rng),
        ),
        (
            "bouncing_ball_lambda0",
            probe_preimages(zero_bw.forward(), &zero_bw, &ball_inputs, &mut rng),
        ),
        (
            "discrete_chain",
            probe_preimages(&chain_fw, &chain_bw, &chain_inputs, &mut rng),
        ),
    ];
    let pass = results.iter().all(|(_, (f, _))| *f == 0);
    let detail = results
        .iter()
        .map(|(name, (f, w))| format!("{name}: {f} failures, worst {w:.1e}"))
        .collect::<Vec<_>>()
        .join("; ");
    verdict(pass, format!("1000 probes each; {detail}"))
}

fn integrator_oracle() -> Verdict {
    let (problem, _) = bouncing_ball(BouncingBallParams::default()).unwrap();
    let system = problem.system.as_ref();
    let opts = FlowOptions::default();
    let g = 9.81;
    let (psi, _) = integrate_flow(system, &[14.0, 0.0], &[0.0], 1.5, &opts).unwrap();
    let worst = psi
        .arc()
        .samples()
        .map(|(t, _, x)| distance(x, &[14.0 - 0.5 * g * t * t, -g * t]))
        .fold(0.0, f64::max);
    let (drop, event) = integrate_flow(system, &[14.0, 0.0], &[0.0], 3.0, &opts).unwrap();
    let t_star = (2.0 * 14.0 / g).sqrt();
    let event_err = (drop.end().t - t_star).abs();
    verdict(
        worst <= 1e-9 && event == FlowEvent::ExitedFlowSet && event_err <= 1e-8,
        format!("worst state error {worst:.1e}, impact time error {event_err:.1e} ({event:?})"),
    )
}

fn determinism() -> Verdict {
    let mut c = tolerance_run_config();
    c.planner.seed = 0;
    c.output.dump_trees = true;
    let (_, a) = run_plan(&c).unwrap();
    let (_, b) = run_plan(&c).unwrap();
    let same = a.deterministic_json() == b.deterministic_json();
    let scenario = a.provenance.as_ref().map(|p| p.scenario);
    verdict(
        same,
        format!(
            "status {:?}, scenario {:?}, {} bytes compared",
            a.status,
            scenario,
            a.deterministic_json().len()
        ),
    )
}

fn main() -> ExitCode {
    let checks: [Check; 10] = [
        ("exact connection", exact_connection),
        ("tolerance run with reconstruction", tolerance_run),
        ("vertex count ordering across modes", vertex_ordering),
        ("reversal validates against the counterpart system", reversal),
        ("concatenation validity and domain law", concatenation),
        ("flow reconstruction deviation bound", flow_reconstruction_bound),
        ("chain deviation doubles per jump", chain_doubling),
        ("backward jump map soundness", backward_soundness),
        ("integrator against closed form", integrator_oracle),
        ("seeded run determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let started = Instant::now();
        let v = check();
        if !v.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} {name}: {} [{:.1}s]",
            i + 1,
            if v.pass { "PASS" } else { "FAIL" },
            v.detail,
            started.elapsed().as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", checks.len() - failed, checks.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
