mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;
use sideobs::graph::{
    effective_independence_number, gen_random_uniform, independence_number,
    maximum_independent_set, threshold, ObservationGraph, DEFAULT_NODE_BUDGET,
};

fn weights(n: usize) -> impl Strategy<Value = ObservationGraph> {
    // coarse grid of values so that ties between weights are common
    prop::collection::vec(0u8..=10, n * n)
        .prop_map(move |w| ObservationGraph::from_fn(n, |i, j| w[i * n + j] as f64 / 10.0).unwrap())
}

fn sized_graph(max_n: usize) -> impl Strategy<Value = ObservationGraph> {
    (1..=max_n).prop_flat_map(weights)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn threshold_is_monotone(g in sized_graph(12), a in 0.01f64..=1.0, b in 0.01f64..=1.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let g_lo = threshold(&g, lo).unwrap();
        let g_hi = threshold(&g, hi).unwrap();
        prop_assert!(g_hi.is_subgraph_of(&g_lo));
        prop_assert!(independence_number(&g_hi).unwrap() >= independence_number(&g_lo).unwrap());
    }

    #[test]
    fn threshold_keeps_exactly_heavy_arcs(g in sized_graph(10), eps in 0.01f64..=1.0) {
        let b = threshold(&g, eps).unwrap();
        let mut got: Vec<_> = b.arcs().collect();
        got.sort();
        prop_assert_eq!(got, arcs_at(&g, eps));
    }

    #[test]
    fn mis_matches_enumeration(n in 1usize..=16, density in 0.0f64..=1.0, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let arcs = random_arcs(n, density, &mut rng);
        let g = digraph(n, &arcs);
        let expected = brute_independence_number(n, &arcs);
        prop_assert_eq!(independence_number(&g).unwrap(), expected);
        let set = maximum_independent_set(&g, DEFAULT_NODE_BUDGET).unwrap();
        prop_assert_eq!(set.len(), expected);
        prop_assert!(g.is_independent(&set));
    }

    #[test]
    fn alpha_star_matches_brute_force(g in sized_graph(8)) {
        let r = effective_independence_number(&g).unwrap();
        let (ratio, eps) = brute_alpha_star(&g);
        prop_assert!((r.alpha_star - ratio).abs() <= 1e-9 * ratio);
        prop_assert_eq!(r.epsilon_star, eps);
    }

    #[test]
    fn alpha_star_lies_between_one_and_n(g in sized_graph(14)) {
        let r = effective_independence_number(&g).unwrap();
        prop_assert!(r.alpha_star >= 1.0 - 1e-12);
        prop_assert!(r.alpha_star <= g.n() as f64 + 1e-12);
    }

    #[test]
    fn binary_alpha_star_is_the_independence_number(
        n in 1usize..=16, density in 0.0f64..=1.0, seed in any::<u64>()
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let arcs = random_arcs(n, density, &mut rng);
        let g = ObservationGraph::from_fn(n, |i, j| if arcs.contains(&(i, j)) { 1.0 } else { 0.0 }).unwrap();
        let r = effective_independence_number(&g).unwrap();
        prop_assert_eq!(r.alpha_star, brute_independence_number(n, &arcs) as f64);
        prop_assert_eq!(r.epsilon_star, 1.0);
    }

    #[test]
    fn weight_floor_bounds_alpha_star(n in 2usize..=14, c in 0.05f64..=1.0, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = gen_random_uniform(n, c, 1.0, &mut rng).unwrap();
        let r = effective_independence_number(&g).unwrap();
        prop_assert!(r.alpha_star <= 1.0 / (c * c) + 1e-9);
    }

    #[test]
    fn constant_diagonal_scales_the_bound(
        n in 1usize..=8, c in 0.1f64..=1.0, density in 0.0f64..=1.0, seed in any::<u64>()
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let arcs = random_arcs(n, density, &mut rng);
        let mut w = vec![0.0; n * n];
        for i in 0..n {
            w[i * n + i] = c;
        }
        for &(i, j) in &arcs {
            w[i * n + j] = c;
        }
        let g = ObservationGraph::with_constant_diagonal(n, w).unwrap();
        let r = effective_independence_number(&g).unwrap();
        let alpha = brute_independence_number(n, &arcs) as f64;
        prop_assert!((r.alpha_star - alpha / (c * c)).abs() <= 1e-9 * r.alpha_star);
        prop_assert_eq!(r.epsilon_star, c);
    }

    #[test]
    fn random_graphs_are_deterministic(n in 1usize..=12, seed in any::<u64>()) {
        let a = gen_random_uniform(n, 0.0, 1.0, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let b = gen_random_uniform(n, 0.0, 1.0, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn json_round_trip(g in sized_graph(6)) {
        let back = ObservationGraph::from_json_str(&g.to_json_string().unwrap()).unwrap();
        prop_assert_eq!(back, g);
    }
}

#[test]
fn bandit_and_full_information_extremes() {
    for n in 1..=20 {
        let id = effective_independence_number(&ObservationGraph::identity(n)).unwrap();
        assert_eq!(id.alpha_star, n as f64);
        let full = effective_independence_number(&ObservationGraph::complete(n)).unwrap();
        assert_eq!(full.alpha_star, 1.0);
    }
}

#[test]
fn rejects_bad_matrices() {
    assert!(ObservationGraph::new(2, vec![1.0, 0.5, 0.5]).is_err());
    assert!(ObservationGraph::new(2, vec![1.0, 1.5, 0.5, 1.0]).is_err());
    assert!(ObservationGraph::new(2, vec![0.9, 0.5, 0.5, 1.0]).is_err());
    assert!(ObservationGraph::from_json_str(r#"{"n":1,"weights":[1.0],"extra":0}"#).is_err());
    let g = ObservationGraph::identity(3);
    assert!(threshold(&g, 0.0).is_err());
    assert!(threshold(&g, 1.5).is_err());
}
