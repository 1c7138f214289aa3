use hyrrt_core::hybrid_time::{concatenate, prescribed_input_mask, reverse, BoundaryInputPolicy};
use hyrrt_core::planner::{nearest_neighbor, Direction, SearchTree};
use hyrrt_core::simulation::{new_state, FlowOptions, InputLibrary};
use hyrrt_core::systems::{bouncing_ball, distance, BouncingBallParams, BoxRegion, UnsafeSet};
use hyrrt_core::{HybridSignal, HybridTimeDomain, Interval, Phase, SolutionPair};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Phase shapes: for each phase, the positive time steps between its samples.
fn shapes() -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(1e-3..1.0f64, 0..5), 1..5)
}

fn pair_from(shape: &[Vec<f64>], seed: u64) -> SolutionPair {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = 0.0;
    let (mut arc, mut input) = (Vec::new(), Vec::new());
    for steps in shape {
        let mut times = vec![t];
        for h in steps {
            t += h;
            times.push(t);
        }
        let xs = (0..times.len() * 2).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let us = (0..times.len()).map(|_| rng.gen_range(-10.0..10.0)).collect();
        arc.push(Phase::new(times.clone(), xs));
        input.push(Phase::new(times, us));
    }
    SolutionPair::new(HybridSignal::new(2, arc).unwrap(), HybridSignal::new(1, input).unwrap()).unwrap()
}

fn intervals(p: &SolutionPair) -> Vec<Interval> {
    p.domain().intervals().collect()
}

fn is_well_formed(p: &SolutionPair) -> bool {
    SolutionPair::new(p.arc().clone(), p.input().clone()).is_ok()
}

proptest! {
    #[test]
    fn domains_chain_their_intervals(steps in prop::collection::vec(0.0..2.0f64, 1..8)) {
        let mut b = vec![0.0];
        for s in &steps {
            b.push(b.last().unwrap() + s);
        }
        let d = HybridTimeDomain::from_boundaries(b.clone()).unwrap();
        let iv: Vec<Interval> = d.intervals().collect();
        prop_assert_eq!(iv.len(), steps.len());
        for w in iv.windows(2) {
            prop_assert_eq!(w[0].t_end, w[1].t_start);
            prop_assert_eq!(w[0].j + 1, w[1].j);
        }
        prop_assert_eq!(d.end().t, *b.last().unwrap());
        prop_assert_eq!(d.end().j, steps.len() - 1);
        prop_assert_eq!(HybridTimeDomain::from_intervals(&iv).unwrap(), d);
    }

    #[test]
    fn operations_stay_within_compact_pairs(s1 in shapes(), s2 in shapes(), seed in any::<u64>()) {
        let a = pair_from(&s1, seed);
        let b = pair_from(&s2, seed ^ 1);
        let ab = concatenate(&a, &b).unwrap();
        prop_assert!(is_well_formed(&ab));
        prop_assert_eq!(ab.end().j, a.end().j + b.end().j);
        for policy in [BoundaryInputPolicy::CopyNearest, BoundaryInputPolicy::Zero] {
            let r = reverse(&ab, policy);
            prop_assert!(is_well_formed(&r));
            prop_assert_eq!(r.end().j, ab.end().j);
        }
    }

    #[test]
    fn double_reversal_restores_the_pair(shape in shapes(), seed in any::<u64>()) {
        let p = pair_from(&shape, seed);
        let rr = reverse(&reverse(&p, BoundaryInputPolicy::CopyNearest), BoundaryInputPolicy::CopyNearest);
        prop_assert_eq!(rr.domain().jumps(), p.domain().jumps());
        let lengths: Vec<usize> = p.arc().phases().iter().map(|ph| ph.len()).collect();
        let mask = prescribed_input_mask(&lengths);
        let scale = p.end().t.max(1.0);
        for (j, (a, b)) in p.arc().phases().iter().zip(rr.arc().phases()).enumerate() {
            prop_assert_eq!(a.len(), b.len());
            prop_assert_eq!(a.raw_values(), b.raw_values());
            for (ta, tb) in a.times().iter().zip(b.times()) {
                prop_assert!((ta - tb).abs() <= 4.0 * f64::EPSILON * scale);
            }
            let (ua, ub) = (&p.input().phases()[j], &rr.input().phases()[j]);
            for (i, prescribed) in mask[j].iter().enumerate() {
                if *prescribed {
                    prop_assert_eq!(ua.value(i, 1), ub.value(i, 1));
                }
            }
        }
    }

    #[test]
    fn concatenation_shifts_the_second_domain(s1 in shapes(), s2 in shapes(), seed in any::<u64>()) {
        let a = pair_from(&s1, seed);
        let b = pair_from(&s2, seed.wrapping_add(7));
        let ab = concatenate(&a, &b).unwrap();
        let end = a.end();
        let (ia, ib, iab) = (intervals(&a), intervals(&b), intervals(&ab));
        prop_assert_eq!(iab.len(), ia.len() + ib.len() - 1);
        for (k, iv) in iab.iter().enumerate() {
            let from_a = ia.get(k);
            let from_b = k.checked_sub(end.j).and_then(|i| ib.get(i));
            let start = from_a.map_or(f64::INFINITY, |x| x.t_start).min(from_b.map_or(f64::INFINITY, |x| x.t_start + end.t));
            let stop = from_a.map_or(f64::NEG_INFINITY, |x| x.t_end).max(from_b.map_or(f64::NEG_INFINITY, |x| x.t_end + end.t));
            prop_assert_eq!(iv.t_start, start);
            prop_assert_eq!(iv.t_end, stop);
        }
        // the seam value comes from the second pair
        prop_assert_eq!(ab.arc().value(end.j, a.arc().phase(end.j).len() - 1), b.initial_state());
        prop_assert_eq!(ab.final_state(), b.final_state());
        let point = SolutionPair::point(a.initial_state(), a.initial_input());
        prop_assert_eq!(&concatenate(&point, &a).unwrap(), &a);
    }

    #[test]
    fn nearest_neighbor_matches_exhaustive_search(
        states in prop::collection::vec((-10.0..10.0f64, -10.0..10.0f64), 1..60),
        query in (-10.0..10.0f64, -10.0..10.0f64),
        threshold in -12.0..8.0f64,
    ) {
        let mut tree = SearchTree::new(Direction::Forward);
        for (a, b) in &states {
            tree.add_root(vec![*a, *b]);
        }
        let q = [query.0, query.1];
        let allowed = |x: &[f64]| x[0] >= threshold;
        let mut expected: Option<(usize, f64)> = None;
        for (id, (a, b)) in states.iter().enumerate() {
            if *a < threshold {
                continue;
            }
            let d = ((a - q[0]).powi(2) + (b - q[1]).powi(2)).sqrt();
            if expected.is_none_or(|(_, best)| d < best) {
                expected = Some((id, d));
            }
        }
        let got = nearest_neighbor(&q, &tree, &allowed);
        prop_assert_eq!(got, expected.map(|(id, _)| id));
        if let Some(id) = got {
            prop_assert!((distance(tree.state(id), &q) - expected.unwrap().1).abs() <= 1e-12);
        }
    }

    #[test]
    fn new_state_never_touches_the_unsafe_set(
        x in (0.0..16.0f64, -18.0..18.0f64),
        on_ground in any::<bool>(),
        seed in any::<u64>(),
        p_flow in 0.05..0.95f64,
    ) {
        let (problem, _) = bouncing_ball(BouncingBallParams::default()).unwrap();
        let system = problem.system.as_ref();
        let x = if on_ground { vec![0.0, -x.1.abs()] } else { vec![x.0, x.1] };
        let library = InputLibrary::new(
            BoxRegion::new(vec![0.0], vec![5.0]).unwrap(),
            2.0,
            BoxRegion::new(vec![0.0], vec![5.0]).unwrap(),
        )
        .unwrap();
        let unsafe_set = UnsafeSet::InputOutside { lo: vec![1.0], hi: vec![4.0] };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if let Some(ext) = new_state(system, &x, &library, &unsafe_set, p_flow, &FlowOptions::default(), &mut rng) {
            prop_assert_eq!(ext.pair.initial_state(), x.as_slice());
            prop_assert_eq!(ext.pair.final_state(), ext.state.as_slice());
            prop_assert!(!ext.pair.is_trivial());
            prop_assert!(ext.pair.sample_pairs().all(|(s, u)| !unsafe_set.contains(s, u)));
        }
    }
}
