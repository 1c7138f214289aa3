//! Fixtures shared by the planner benchmarks.

use hyrrt_core::io::RunConfig;
use hyrrt_core::planner::{Direction, PlannerMode, SearchTree};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The ball problem from `(14, 0)` to `(10, 0)` with matching tolerance 0.2.
pub fn ball_config(mode: PlannerMode, seed: u64) -> RunConfig {
    let mut c = RunConfig::default();
    c.planner.mode = mode;
    c.planner.seed = seed;
    c.planner.delta = 0.2;
    c
}

/// A forest of `n` roots drawn uniformly from the ball's sampling box.
pub fn random_forest(n: usize, seed: u64) -> SearchTree {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tree = SearchTree::new(Direction::Forward);
    for _ in 0..n {
        tree.add_root(vec![rng.gen_range(0.0..16.0), rng.gen_range(-18.0..18.0)]);
    }
    tree
}
