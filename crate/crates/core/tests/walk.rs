mod common;

use common::{biased_transition_matrix, pearson, power_iteration, visit_counts};
use netcast::generators::{generate_ba, generate_er, generate_ws};
use netcast::{
    predicted_stationary, seeded_rng, simulate, transition_probs, Dynamics, Graph, Start, WalkKind,
    WalkState, Walker,
};
use proptest::prelude::*;

fn giant_er(n: usize, k: f64, seed: u64) -> Graph {
    generate_er(n, k, &mut seeded_rng(seed))
        .unwrap()
        .largest_connected_component()
        .unwrap()
}

#[test]
fn k3_frequencies_are_uniform() {
    let k3 = Graph::from_edges(3, false, [(0, 1), (1, 2), (0, 2)]).unwrap();
    let seq = simulate(
        &k3,
        WalkKind::<f64>::rw(),
        1_000_000,
        Start::Node(0),
        seeded_rng(1),
    )
    .unwrap();
    for c in visit_counts(&seq, 3) {
        assert!((c / seq.len() as f64 - 1.0 / 3.0).abs() < 0.002);
    }
}

#[test]
fn rw_frequencies_follow_degree() {
    let g = giant_er(1000, 8.0, 2);
    let seq = simulate(
        &g,
        WalkKind::<f64>::rw(),
        1_000_000,
        Start::Uniform,
        seeded_rng(3),
    )
    .unwrap();
    let k: Vec<f64> = g.total_degrees().into_iter().map(|d| d as f64).collect();
    let r = pearson(&visit_counts(&seq, g.node_count()), &k);
    assert!(r > 0.99, "{r}");
}

#[test]
fn degree_biased_prediction_matches_power_iteration() {
    for seed in 0..20u64 {
        let n = 20 + (seed as usize * 4);
        let g = giant_er(n, 5.0, 100 + seed);
        for (alpha, kind) in [(1.0, WalkKind::rwd()), (-1.0, WalkKind::rwid())] {
            let oracle = power_iteration(&biased_transition_matrix(&g, alpha));
            let pred = predicted_stationary(&g, &kind).unwrap();
            let err = oracle
                .iter()
                .zip(&pred)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            assert!(err < 1e-8, "seed {seed} alpha {alpha}: {err}");
        }
    }
}

#[test]
fn rwd_long_run_matches_prediction() {
    let g = giant_er(200, 8.0, 7);
    let kind = WalkKind::<f64>::rwd();
    let seq = simulate(&g, kind, 10_000_000, Start::Uniform, seeded_rng(8)).unwrap();
    let total = seq.len() as f64;
    let pred = predicted_stationary(&g, &kind).unwrap();
    let l1: f64 = visit_counts(&seq, g.node_count())
        .iter()
        .zip(&pred)
        .map(|(c, p)| (c / total - p).abs())
        .sum();
    assert!(l1 < 0.02, "{l1}");
}

#[test]
fn regular_graphs_predict_uniform() {
    let g = generate_ws(49, 0.0, &mut seeded_rng(0)).unwrap();
    for d in Dynamics::ALL {
        let p = predicted_stationary(&g, &WalkKind::<f64>::of(d)).unwrap();
        assert!(p.iter().all(|&x| (x - 1.0 / 49.0).abs() < 1e-15), "{d}");
    }
}

#[test]
fn prediction_requires_connectivity() {
    let g = Graph::from_edges(4, false, [(0, 1), (2, 3)]).unwrap();
    assert!(predicted_stationary(&g, &WalkKind::<f64>::rw()).is_err());
}

#[test]
fn directed_prediction_is_out_degree() {
    let g = Graph::from_edges(3, true, [(0, 1), (1, 2), (2, 0), (0, 2), (2, 1), (1, 0)]).unwrap();
    let p = predicted_stationary(&g, &WalkKind::<f64>::rwd()).unwrap();
    assert!(p.iter().all(|&x| (x - 1.0 / 3.0).abs() < 1e-15));
    let cyc = Graph::from_edges(4, true, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
    let p = predicted_stationary(&cyc, &WalkKind::<f64>::rw()).unwrap();
    assert_eq!(p, vec![0.4, 0.2, 0.2, 0.2]);
}

#[test]
fn alpha_zero_is_rw_and_gamma_one_tsaw_is_rw() {
    let g = generate_ba(120, 3, &mut seeded_rng(4)).unwrap();
    let rw = WalkKind::<f64>::rw();
    let flat_bias = WalkKind::degree_biased(0.0);
    let flat_tsaw = WalkKind::tsaw(1.0);
    let mut tsaw_state = WalkState::new(&g, &flat_tsaw, Start::Node(0), seeded_rng(5)).unwrap();
    for _ in 0..500 {
        let here = WalkState::new(&g, &rw, Start::Node(tsaw_state.current), seeded_rng(0)).unwrap();
        let expected = transition_probs(&g, &here, &rw).unwrap();
        assert_eq!(transition_probs(&g, &here, &flat_bias).unwrap(), expected);
        assert_eq!(
            transition_probs(&g, &tsaw_state, &flat_tsaw).unwrap(),
            expected
        );
        netcast::walk::step(&g, &mut tsaw_state, &flat_tsaw).unwrap();
    }
}

#[test]
fn tsaw_counters_sum_to_steps() {
    let cycle = Graph::from_edges(10, false, (0..10).map(|i| (i, (i + 1) % 10))).unwrap();
    let kind = WalkKind::<f64>::tsaw(2.0);
    let mut st = WalkState::new(&cycle, &kind, Start::Node(0), seeded_rng(1)).unwrap();
    for _ in 0..10 {
        netcast::walk::step(&cycle, &mut st, &kind).unwrap();
    }
    assert_eq!(st.edge_visits.iter().sum::<u64>(), 10);
    assert_eq!(st.step_index, 10);
}

#[test]
fn f32_and_f64_walks_agree_on_rw() {
    let g = giant_er(100, 6.0, 9);
    let a = simulate(
        &g,
        WalkKind::<f64>::rw(),
        1000,
        Start::Uniform,
        seeded_rng(1),
    )
    .unwrap();
    let b = simulate(
        &g,
        WalkKind::<f32>::rw(),
        1000,
        Start::Uniform,
        seeded_rng(1),
    )
    .unwrap();
    assert_eq!(a.len(), b.len());
    let p32 = predicted_stationary(&g, &WalkKind::<f32>::rwd()).unwrap();
    let p64 = predicted_stationary(&g, &WalkKind::<f64>::rwd()).unwrap();
    for (x, y) in p32.iter().zip(&p64) {
        assert!((*x as f64 - y).abs() < 1e-6);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn transition_probs_are_distributions(seed in any::<u64>(), d in 0usize..4, gamma in 0.5f64..4.0) {
        let g = giant_er(60, 4.0, seed);
        let kind = WalkKind { gamma, ..WalkKind::<f64>::of(Dynamics::ALL[d]) };
        let mut walker = Walker::new(&g, kind, Start::Uniform, seeded_rng(seed)).unwrap();
        for _ in 0..200 {
            let p = walker.transition_probs().unwrap();
            prop_assert_eq!(p.len(), g.out_degree(walker.current()));
            prop_assert!(p.iter().all(|&x| x >= 0.0));
            prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            walker.step().unwrap();
        }
    }

    #[test]
    fn walks_follow_edges(seed in any::<u64>(), d in 0usize..4, directed in any::<bool>()) {
        let mut g = giant_er(80, 5.0, seed);
        if directed {
            g = g.to_directed(0.6, &mut seeded_rng(seed)).unwrap()
                .largest_strongly_connected_component().unwrap();
            prop_assume!(g.node_count() > 1);
        }
        let kind = WalkKind::<f64>::of(Dynamics::ALL[d]);
        let seq = simulate(&g, kind, 500, Start::Uniform, seeded_rng(seed ^ 1)).unwrap();
        prop_assert_eq!(seq.len(), 501);
        for w in seq.windows(2) {
            prop_assert!(g.edge_between(w[0], w[1]).is_some());
        }
        let again = simulate(&g, kind, 500, Start::Uniform, seeded_rng(seed ^ 1)).unwrap();
        prop_assert_eq!(seq, again);
    }
}
