use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hyrrt_bench::{ball_config, random_forest};
use hyrrt_core::io::run_plan;
use hyrrt_core::planner::{nearest_neighbor, PlannerMode};
use hyrrt_core::simulation::{integrate_flow, FlowOptions};
use hyrrt_core::systems::{bouncing_ball, BouncingBallParams};

fn planning(c: &mut Criterion) {
    let mut group = c.benchmark_group("plan");
    group.sample_size(10);
    for mode in PlannerMode::ALL {
        let config = ball_config(mode, 0);
        group.bench_with_input(BenchmarkId::from_parameter(mode), &config, |b, config| {
            b.iter(|| run_plan(black_box(config)).unwrap())
        });
    }
    group.finish();
}

fn nearest(c: &mut Criterion) {
    let mut group = c.benchmark_group("nearest_neighbor");
    for n in [100, 1000, 10000] {
        let tree = random_forest(n, 1);
        group.bench_with_input(BenchmarkId::from_parameter(n), &tree, |b, tree| {
            b.iter(|| nearest_neighbor(black_box(&[7.0, 1.5]), tree, &|x| x[0] >= 0.0))
        });
    }
    group.finish();
}

fn flow(c: &mut Criterion) {
    let (problem, _) = bouncing_ball(BouncingBallParams::default()).unwrap();
    let system = problem.system;
    let opts = FlowOptions::default();
    c.bench_function("integrate_flow_to_impact", |b| {
        b.iter(|| integrate_flow(system.as_ref(), black_box(&[14.0, 0.0]), &[0.0], 3.0, &opts).unwrap())
    });
}

criterion_group!(benches, planning, nearest, flow);
criterion_main!(benches);
