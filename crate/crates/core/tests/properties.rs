use proptest::prelude::*;

use liftwalk::coherence::{
    avg_ipr, log_coherence, mixed_density, purity, relative_entropy_coherence, spectral_coherence,
    CoherenceOptions, LcDivisor, TraceMode,
};
use liftwalk::ctqw::{return_series, series_stats, KrylovOptions};
use liftwalk::graph::{
    connected_components, hl2_lift, hl2_tower, make_complete, make_cycle, make_erdos_renyi, make_petersen,
    make_random_regular, serialize_graph, Graph,
};
use liftwalk::spectral::{
    eigenvalues, full_spectrum, multiset_deviation, predict_lift_spectrum, top_k_eigenpairs, EigenOptions,
    DEFAULT_DENSE_CUTOFF,
};
use liftwalk::structural::{trace_a4, triangle_count};

fn regular_bases() -> Vec<Graph> {
    let mut v = vec![
        make_complete(4),
        make_complete(5),
        make_cycle(5).unwrap(),
        make_cycle(6).unwrap(),
        make_petersen(),
    ];
    v.extend((0..5).map(|s| make_random_regular(16 + 2 * s as usize, 3 + (s % 2) as usize, s).unwrap()));
    v
}

#[test]
fn lift_rule_over_regular_bases() {
    for g in regular_bases() {
        let d = g.regular_degree().unwrap();
        let pred = predict_lift_spectrum(&eigenvalues(&g, DEFAULT_DENSE_CUTOFF).unwrap(), d, g.n(), g.m()).unwrap();
        let lift = hl2_lift(&g).unwrap().graph;
        assert_eq!(lift.regular_degree(), Some(2 * d - 2));
        let built = eigenvalues(&lift, DEFAULT_DENSE_CUTOFF).unwrap();
        assert!(multiset_deviation(&pred, &built).unwrap() <= 1e-8);
        assert!(*built.last().unwrap() >= -2.0 - 1e-8);
    }
}

#[test]
fn lanczos_top_k_matches_dense_on_tower_levels() {
    let lanczos = EigenOptions {
        force_lanczos: true,
        ..EigenOptions::default()
    };
    let tower = hl2_tower(&make_random_regular(20, 3, 4).unwrap(), 2, 10_000).unwrap();
    for g in &tower.graphs {
        let a = top_k_eigenpairs(g, 5, &EigenOptions::default()).unwrap();
        let b = top_k_eigenpairs(g, 5, &lanczos).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x - y).abs() <= 1e-7, "{:?} vs {:?}", a.values, b.values);
        }
        let mut av = vec![0.0; g.n()];
        for (lambda, v) in b.values.iter().zip(&b.vectors) {
            g.mul_vec(v, &mut av);
            let res: f64 = av.iter().zip(v).map(|(p, q)| (p - lambda * q).powi(2)).sum::<f64>().sqrt();
            assert!(res <= 1e-8 * g.max_degree() as f64);
        }
    }
}

#[test]
fn coherence_agrees_between_solvers() {
    let g = &hl2_tower(&make_random_regular(20, 3, 1).unwrap(), 2, 10_000).unwrap().graphs[2];
    let dense = spectral_coherence(g, &CoherenceOptions::default()).unwrap();
    let mut opts = CoherenceOptions::default();
    opts.eigen.dense_cutoff = 100;
    let lanczos = spectral_coherence(g, &opts).unwrap();
    assert!((dense.purity - lanczos.purity).abs() < 1e-10);
    if !dense.basis_sensitive {
        assert!((dense.avg_ipr - lanczos.avg_ipr).abs() < 1e-8);
        assert!((dense.rel_entropy_bits - lanczos.rel_entropy_bits).abs() < 1e-8);
    }
}

#[test]
fn k4_full_basis_is_incoherent() {
    let rho = mixed_density(&make_complete(4), 4, TraceMode::Paper, &EigenOptions::default()).unwrap();
    assert!((purity(&rho) - 0.25).abs() < 1e-12);
    assert!(relative_entropy_coherence(&rho).unwrap() <= 1e-9);
}

#[test]
fn long_time_return_exceeds_uniform() {
    for seed in 0..3 {
        let g = make_random_regular(20, 3, seed).unwrap();
        let s = return_series(&g, 0, 120.0, 2400, &KrylovOptions::default()).unwrap();
        assert!(series_stats(&s, 1.0).mean > 1.0 / 20.0);
    }
}

#[test]
fn exact_revivals_on_k4_lifts() {
    let tower = hl2_tower(&make_complete(4), 3, 10_000).unwrap();
    for g in &tower.graphs[1..] {
        let s = return_series(g, 3, std::f64::consts::PI, 2, &KrylovOptions::default()).unwrap();
        assert!((s.p_return[1] - 1.0).abs() < 1e-6);
    }
}

#[test]
fn structural_trends_on_sparse_towers() {
    for seed in 1..=3 {
        let tower = hl2_tower(&make_erdos_renyi(20, 0.12, seed).unwrap(), 3, 100_000).unwrap();
        let per_vertex = |f: &dyn Fn(&Graph) -> f64| -> Vec<f64> {
            tower.graphs.iter().map(|g| f(g) / g.n() as f64).collect()
        };
        let tr = per_vertex(&|g| trace_a4(g) as f64);
        let tri = per_vertex(&|g| triangle_count(g) as f64);
        assert!(tr.windows(2).all(|w| w[1] > w[0]), "{tr:?}");
        assert!(tri.windows(2).all(|w| w[1] > w[0]), "{tri:?}");
    }
}

fn arb_graph() -> impl Strategy<Value = Graph> {
    (2usize..24, 0.05f64..0.8, any::<u64>()).prop_map(|(n, p, seed)| make_erdos_renyi(n, p, seed).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lift_sizes_and_degrees(g in arb_graph()) {
        prop_assume!(g.m() > 0);
        let lift = hl2_lift(&g).unwrap();
        prop_assert_eq!(lift.graph.n(), 2 * g.m());
        for (i, e) in lift.origin.iter().enumerate() {
            prop_assert_eq!(lift.graph.degree(i), g.degree(e.tail()) + g.degree(e.head()) - 2);
        }
    }

    #[test]
    fn lift_components_follow_bipartiteness(g in arb_graph()) {
        prop_assume!(g.m() > 0 && connected_components(&g).count == 1);
        let parts = connected_components(&hl2_lift(&g).unwrap().graph).count;
        let bip = liftwalk::graph::is_bipartite(&g).is_bipartite();
        prop_assert_eq!(parts, if bip { 2 } else { 1 });
    }

    #[test]
    fn generators_are_deterministic(n in 5usize..40, p in 0.0f64..1.0, seed in any::<u64>()) {
        let a = serialize_graph(&make_erdos_renyi(n, p, seed).unwrap());
        let b = serialize_graph(&make_erdos_renyi(n, p, seed).unwrap());
        prop_assert_eq!(a, b);
    }

    #[test]
    fn walk_counts_bound_edges(g in arb_graph()) {
        prop_assert!(trace_a4(&g) >= 2 * g.m() as u128);
        // Tr(A³) = 6 × triangles.
        let sys = full_spectrum(&g).unwrap();
        let tr3: f64 = sys.values.iter().map(|x| x.powi(3)).sum();
        prop_assert!((tr3 - 6.0 * triangle_count(&g) as f64).abs() < 1e-6);
    }

    #[test]
    fn coherence_invariants(g in arb_graph(), k in 1usize..8) {
        let opts = EigenOptions::default();
        let sys = top_k_eigenpairs(&g, k, &opts).unwrap();
        let n = g.n() as f64;
        let ipr = avg_ipr(&sys);
        prop_assert!(ipr >= 1.0 / n - 1e-12 && ipr <= 1.0 + 1e-12);
        let rho = mixed_density(&g, k, TraceMode::Paper, &opts).unwrap();
        let used = sys.k() as f64;
        prop_assert!((purity(&rho) - used / (k * k) as f64).abs() < 1e-10);
        prop_assert!(relative_entropy_coherence(&rho).unwrap() >= -1e-9);
        let lc = log_coherence(&sys, k, 1e-6, LcDivisor::Used);
        let full = sys.vectors.iter().all(|v| v.iter().all(|x| x.abs() > 1e-6));
        prop_assert!(lc <= n.log2() + 1e-12);
        prop_assert_eq!(full, (lc - n.log2()).abs() < 1e-12);
    }
}
