mod common;

use cutcert::certificates::{approx_fcc_mc, approx_mc_fcc};
use cutcert::graph::{laplacian, laplacian_adjoint, EdgeWeights, Shore};
use cutcert::instances::{
    exp_support_probe, generate, hamming_witnesses, integrality_ratios, k3_small_edge, k3_small_edge_decomposition,
    kn_optimal, simplex_shore, support_beta, support_witness, support_witness_maps, ExactPair, GraphKind,
};
use cutcert::linalg::{sym_eigen, SymMatrix};
use cutcert::oracles::{fcc_exact, mc_exact};
use cutcert::par::Execution;
use cutcert::rng::RngStream;
use cutcert::rounding::{approx_fcc, edge_marginal};
use rand::Rng;

fn assert_exact(p: &ExactPair) {
    let check = p.witnesses().check(&p.graph, &p.w, &p.z, 1e-9).unwrap();
    assert!(check.all(), "{check:?}");
    let wz = p.w.dot(p.z.values());
    let inner = laplacian(&p.graph, &p.w).unwrap().scale(0.25).inner(&p.y);
    assert!((p.rho * p.mu - wz).abs() < 1e-9, "{} vs {wz}", p.rho * p.mu);
    assert!((inner - wz).abs() < 1e-9);
}

#[test]
fn complete_graph_witnesses() {
    for n in 2..=16 {
        let k = kn_optimal(n).unwrap();
        assert_exact(&k);
        for v in laplacian_adjoint(&k.graph, &k.y).unwrap() {
            assert!((0.25 * v - 1.0).abs() < 1e-12);
        }
    }
    let k3 = kn_optimal(3).unwrap();
    assert!((k3.mu - 4.0 / 3.0).abs() < 1e-15);
    assert!((k3.w.dot(k3.z.values()) - 4.0 / 3.0).abs() < 1e-15);
    assert_eq!(kn_optimal(2).unwrap().mu, 1.0);
    assert!(kn_optimal(1).is_err());
}

#[test]
fn small_edge_witnesses() {
    for eps in [0.01, 0.25, 0.5, 1.0, 1.5, 1.99] {
        let a = k3_small_edge(eps).unwrap();
        assert_exact(&a);
        assert!((a.w.dot(a.z.values()) - a.mu).abs() <= 1e-12);
        // rank-two decomposition
        let [(c1, v), (c2, u)] = k3_small_edge_decomposition(eps);
        assert!(c1 >= 0.0 && c2 >= 0.0);
        let rebuilt = SymMatrix::from_fn(3, |i, j| c1 * v[i] * v[j] + c2 * u[i] * u[j]);
        assert!(rebuilt.max_abs_diff(&a.y.scale((4.0 - eps) / 4.0)) < 1e-12);
        let (vals, _) = sym_eigen(&a.y).unwrap();
        assert!(vals[0] > -1e-12);
    }
    let one = k3_small_edge(1.0).unwrap();
    let k3 = kn_optimal(3).unwrap();
    assert!(one.y.max_abs_diff(&k3.y) < 1e-15);
    assert!((one.mu - 4.0 / 3.0).abs() < 1e-15);
    let half = k3_small_edge(0.5).unwrap();
    assert!((half.mu - 8.0 / 7.0).abs() < 1e-15);
    assert!((half.y.get(1, 2) / half.mu - 0.125).abs() < 1e-15);
    assert!((edge_marginal(&half.y, half.mu, 1, 2) - 0.125f64.acos() / std::f64::consts::PI).abs() < 1e-12);
    assert!(k3_small_edge(0.0).is_err() && k3_small_edge(2.0).is_err());
}

#[test]
fn hamming_witnesses_are_exact_pairing() {
    let h = hamming_witnesses(3, 2).unwrap();
    assert_exact(&h);
    assert_eq!(h.rho, 8.0);
    assert!(h.x.iter().all(|&v| v == 1.0));
    assert_eq!(h.mu, 1.5);
    for &(i, j) in h.graph.edges() {
        assert!((h.y.get(i, j) / h.mu + 1.0 / 3.0).abs() < 1e-15);
    }
    assert_eq!(mc_exact(&h.graph, &h.w).unwrap().value, 8.0);
    assert!((fcc_exact(&h.graph, &h.z).unwrap().value - 1.5).abs() < 1e-9);
    let h42 = hamming_witnesses(4, 2);
    assert!(h42.is_err(), "a < 2b is required");
    assert!(hamming_witnesses(3, 1).is_err());
    assert_exact(&hamming_witnesses(6, 4).unwrap());
}

#[test]
fn support_probe_sees_every_proper_shore() {
    let census = exp_support_probe(Execution::default(), 4, 100_000, &RngStream::new(1)).unwrap();
    assert!(census.missing().is_empty(), "{:?}", census.missing());
    assert_eq!(census.observed.len(), 14);
}

#[test]
fn constructive_support_witnesses() {
    for n in 3..=7 {
        for mask in 1..(1u64 << n) - 1 {
            let s = Shore::from_mask(mask);
            assert!(support_witness_maps(n, &s).unwrap(), "n={n} S={s:?}");
        }
    }
    assert!(support_witness(4, &Shore::empty()).is_err());
    assert!(support_witness(4, &Shore::full(4)).is_err());
}

#[test]
fn witness_ranges_suffice() {
    // any g with g_s ∈ (1, β_S), g_t ∈ (−β_S, −1) selects S
    let mut r = common::rng(6);
    for n in 3..=8usize {
        for _ in 0..200 {
            let mask = r.gen_range(1..(1u64 << n) - 1);
            let s = Shore::from_mask(mask);
            let b = support_beta(n, s.len()).min(50.0);
            let g: Vec<f64> = (0..n)
                .map(|i| {
                    let m = r.gen_range(1.0..b);
                    if s.contains(i) { m } else { -m }
                })
                .collect();
            assert_eq!(simplex_shore(&g), s);
        }
    }
}

#[test]
fn integrality_ratios_match_on_edge_transitive_graphs() {
    let c5 = generate(GraphKind::Cycle(5)).unwrap();
    let one = EdgeWeights::ones(&c5);
    let r = integrality_ratios(&c5, &one, &one, 1e-9).unwrap();
    assert!((r.mc_over_gw - 0.8845).abs() < 1e-3);
    assert!((r.mc_over_gw - r.polar_over_fcc).abs() < 1e-3);

    let k3 = generate(GraphKind::Complete(3)).unwrap();
    let one = EdgeWeights::ones(&k3);
    let r = integrality_ratios(&k3, &one, &one, 1e-9).unwrap();
    assert!((r.mc_over_gw - 8.0 / 9.0).abs() < 1e-6);

    let h = hamming_witnesses(3, 2).unwrap();
    let r = integrality_ratios(&h.graph, &h.w, &h.z, 1e-9).unwrap();
    assert!((r.mc_over_gw - 1.0).abs() < 1e-3 && (r.polar_over_fcc - 1.0).abs() < 1e-3);
}

#[test]
fn conversion_inequality_for_weight_side_pairs() {
    let mut r = common::rng(12);
    for _ in 0..5 {
        let g = common::random_graph(&mut r, 6, 0.6);
        let w = common::random_weights(&mut r, &g);
        let (z, _) = approx_mc_fcc(&g, &w, 0.5, &RngStream::new(r.gen())).unwrap();
        let ratios = integrality_ratios(&g, &w, &z, 1e-9).unwrap();
        assert!(ratios.polar_over_fcc <= ratios.mc_over_gw + 1e-4, "{ratios:?}");
    }
}

#[test]
fn complete_graph_covers_need_log_support() {
    for n in [3usize, 4, 5, 8] {
        let g = generate(GraphKind::Complete(n)).unwrap();
        let z = EdgeWeights::ones(&g);
        let need = (n as f64).log2().ceil() as usize;
        let (y, rep) = approx_fcc(&g, &z, 0.5, &RngStream::new(n as u64)).unwrap();
        if rep.cover_check.feasible {
            assert!(y.support_size() >= need);
        }
        let (_, out) = approx_fcc_mc(&g, &z, 0.5, &RngStream::new(n as u64)).unwrap();
        assert!(out.certificate.cover.support_size() >= need);
        let exact = fcc_exact(&g, &z).unwrap();
        assert!(exact.cover.support_size() >= need);
    }
}
