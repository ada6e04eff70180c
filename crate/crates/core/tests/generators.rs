use std::collections::BTreeSet;

use netcast::generators::{
    generate_ba, generate_er, generate_ere, generate_geo, generate_kn, generate_wax, generate_ws,
    knitted, moore_torus_edges, random_points, waxman_graph,
};
use netcast::{seeded_rng, ModelKind, ModelSpec};

const REPS: u64 = 30;

#[test]
fn er_mean_degree_concentrates() {
    // 2E/n with E ~ Binomial(n(n-1)/2, 8/(n-1)) has sd about 0.126.
    let mut mean = 0.0;
    for seed in 0..REPS {
        let g = generate_er(1000, 8.0, &mut seeded_rng(seed)).unwrap();
        assert!(
            (g.mean_degree() - 8.0).abs() < 0.5,
            "seed {seed}: {}",
            g.mean_degree()
        );
        mean += g.mean_degree() / REPS as f64;
    }
    assert!((mean - 8.0).abs() < 0.3, "{mean}");
}

#[test]
fn er_extremes() {
    let full = generate_er(20, 19.0, &mut seeded_rng(0)).unwrap();
    assert_eq!(full.edge_count(), 190);
    let empty = generate_er(20, 0.0, &mut seeded_rng(0)).unwrap();
    assert_eq!(empty.edge_count(), 0);
}

#[test]
fn ba_edge_count_and_tail() {
    let mut heavy = 0;
    for seed in 0..REPS {
        let g = generate_ba(1000, 4, &mut seeded_rng(seed)).unwrap();
        // 5-clique plus 4 edges per later node.
        assert_eq!(g.edge_count(), 10 + 995 * 4);
        assert!((7.8..=8.0).contains(&g.mean_degree()));
        let k = g.total_degrees();
        assert!(k.iter().all(|&d| d >= 4));
        if *k.iter().max().unwrap() as f64 > 5.0 * g.mean_degree() {
            heavy += 1;
        }
    }
    assert!(heavy >= 28, "{heavy} of {REPS}");
}

#[test]
fn ws_rewiring_counts() {
    let lattice: BTreeSet<(usize, usize)> = moore_torus_edges(31)
        .into_iter()
        .map(|(u, v)| (u.min(v), u.max(v)))
        .collect();
    assert_eq!(lattice.len(), 4 * 961);
    let flat = generate_ws(961, 0.0, &mut seeded_rng(0)).unwrap();
    assert!(flat.total_degrees().iter().all(|&d| d == 8));
    assert_eq!(flat.edge_count(), 4 * 961);

    let mut total = 0;
    for seed in 0..REPS {
        let g = generate_ws(961, 0.01, &mut seeded_rng(seed)).unwrap();
        assert_eq!(g.edge_count(), 4 * 961);
        let moved = g.edges().iter().filter(|e| !lattice.contains(e)).count();
        assert!((20..=60).contains(&moved), "seed {seed}: {moved}");
        total += moved;
    }
    // Binomial(3844, 0.01) has mean 38.4; allow a few standard errors.
    let mean = total as f64 / REPS as f64;
    assert!((mean - 38.4).abs() < 4.0, "{mean}");
    assert!(generate_ws(1000, 0.01, &mut seeded_rng(0)).is_err());
}

#[test]
fn geographic_calibration() {
    for seed in 0..10 {
        let geo = generate_geo(1000, 8.0, &mut seeded_rng(seed)).unwrap();
        assert!(
            (geo.mean_degree() - 8.0).abs() <= 0.16,
            "GEO {}",
            geo.mean_degree()
        );
        assert!(geo.is_connected());
        let wax = generate_wax(1000, 8.0, &mut seeded_rng(seed)).unwrap();
        assert!(
            (wax.mean_degree() - 8.0).abs() <= 0.16,
            "WAX {}",
            wax.mean_degree()
        );
        assert!(wax.is_connected());
    }
}

#[test]
fn waxman_without_distance_decay_is_er() {
    // With d0 far larger than any distance every pair joins with
    // probability beta, exactly like G(n, beta).
    let n = 500;
    let beta = 8.0 / (n - 1) as f64;
    let (mut wax, mut er) = (0.0, 0.0);
    for seed in 0..REPS {
        let mut rng = seeded_rng(seed);
        let pts = random_points(n, &mut rng);
        wax += waxman_graph(&pts, beta, 1e12, &mut rng).mean_degree();
        er += generate_er(n, 8.0, &mut rng).unwrap().mean_degree();
    }
    assert!((wax - er).abs() / er < 0.05, "{wax} vs {er}");
    let pts = random_points(30, &mut seeded_rng(1));
    let complete = waxman_graph(&pts, 1.0, 1e12, &mut seeded_rng(2));
    assert_eq!(complete.edge_count(), 30 * 29 / 2);
}

#[test]
fn knitted_threads() {
    let path = knitted(50, 1, &mut seeded_rng(4)).unwrap();
    assert_eq!(path.edge_count(), 49);
    let (ki, ko) = (path.in_degrees(), path.out_degrees());
    assert_eq!(ki.iter().filter(|&&d| d == 0).count(), 1);
    assert_eq!(ko.iter().filter(|&&d| d == 0).count(), 1);
    assert_eq!((0..50).filter(|&u| ki[u] == 1 && ko[u] == 1).count(), 48);

    let mut mean = 0.0;
    for seed in 0..REPS {
        let g = generate_kn(1000, 8.0, &mut seeded_rng(seed)).unwrap();
        let (ki, ko) = (g.in_degrees(), g.out_degrees());
        let unbalanced = (0..1000).filter(|&u| ki[u] != ko[u]).count();
        // Thread endpoints, plus two nodes per merged duplicate arc.
        let merged = 4 * 999 - g.edge_count();
        assert!(unbalanced <= 8 + 2 * merged, "{unbalanced}");
        mean += g.mean_degree();
    }
    // 4 * 999 arcs minus about 8 expected duplicate collisions.
    mean /= REPS as f64;
    assert!((7.95..=8.0).contains(&mean), "{mean}");
    assert!(generate_kn(1000, 7.0, &mut seeded_rng(0)).is_err());
}

#[test]
fn ere_balance_and_reciprocity() {
    let mut mean = 0.0;
    for seed in 0..REPS {
        let g = generate_ere(1000, 8.0, &mut seeded_rng(seed)).unwrap();
        assert_eq!(g.in_degrees(), g.out_degrees());
        assert_eq!(g.reciprocity().unwrap(), 0.0);
        assert!((g.mean_degree() - 8.0).abs() < 0.5, "{}", g.mean_degree());
        assert!(g.edges().iter().all(|&(u, v)| u != v));
        mean += g.mean_degree() / REPS as f64;
    }
    assert!((mean - 8.0).abs() < 0.3, "{mean}");
}

#[test]
fn specs_generate_deterministically() {
    for kind in [
        ModelKind::Er,
        ModelKind::Ba,
        ModelKind::Ws,
        ModelKind::Wax,
        ModelKind::Geo,
        ModelKind::Kn,
        ModelKind::Ere,
    ] {
        let spec = ModelSpec::new(kind, 400, 8.0);
        let a = spec
            .prepare(kind.is_directed(), &mut seeded_rng(11))
            .unwrap();
        let b = spec
            .prepare(kind.is_directed(), &mut seeded_rng(11))
            .unwrap();
        assert_eq!(a.edges(), b.edges(), "{kind:?}");
        assert_eq!(a.labels(), b.labels());
        if a.is_directed() {
            assert_eq!(a.strongly_connected_components().len(), 1);
        } else {
            assert!(a.is_connected());
        }
    }
}

#[test]
fn directed_pipeline_keeps_most_nodes() {
    let spec = ModelSpec::new(ModelKind::Er, 1000, 8.0);
    let g = spec.prepare(true, &mut seeded_rng(5)).unwrap();
    assert!(g.is_directed());
    assert!(g.node_count() > 950, "{}", g.node_count());
    let r = g.reciprocity().unwrap();
    assert!((r - 0.75).abs() < 0.03, "{r}");
}
