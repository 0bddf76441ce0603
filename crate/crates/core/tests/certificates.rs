mod common;

use common::{complete, cycle};
use cutcert::certificates::{
    approx_fcc_mc, approx_mc_fcc, certify, check_beta_pairing, verify_certificate, Alg2Constants, BetaCertificate,
    DEFAULT_VERIFY_TOL,
};
use cutcert::graph::{cut_weight, EdgeWeights, FractionalCutCover, Graph, Shore};
use cutcert::instances::{generate, hamming_witnesses, k3_small_edge, kn_optimal, GraphKind};
use cutcert::oracles::{fcc_exact, mc_exact};
use cutcert::rng::RngStream;
use cutcert::sdp::solve_gw;
use rand::Rng;

fn k3_exact_certificate() -> (Graph, EdgeWeights, BetaCertificate) {
    let g = complete(3);
    let w = EdgeWeights::ones(&g);
    let cert = BetaCertificate {
        beta: 0.85,
        rho: 2.25,
        mu: 4.0 / 3.0,
        shore: Shore::from_vertices([0]),
        cover: (0..3).map(|i| (Shore::from_vertices([i]), 0.5)).collect(),
        x: vec![0.75; 3],
        w: None,
        z: None,
    };
    (g, w, cert)
}

#[test]
fn hand_checked_triangle_certificate() {
    let (g, w, cert) = k3_exact_certificate();
    let r = verify_certificate(&g, &w, &w, &cert, DEFAULT_VERIFY_TOL);
    assert!(r.pass(), "{r:?}");
}

#[test]
fn tampered_cover_names_violated_edge() {
    let (g, w, mut cert) = k3_exact_certificate();
    cert.cover.remove(&Shore::from_vertices([2]));
    let r = verify_certificate(&g, &w, &w, &cert, DEFAULT_VERIFY_TOL);
    assert!(r.items[0].pass && r.items[1].pass && r.items[3].pass);
    assert!(!r.items[2].pass);
    let (i, j) = r.cover_check.worst_edge.unwrap();
    assert!(i == 2 || j == 2);
    assert!(r.items[2].detail.contains(&format!("edge {i} {j}")));
}

#[test]
fn tampered_items_fail_individually() {
    let (g, w, cert) = k3_exact_certificate();
    let mut c = cert.clone();
    c.mu = 1.0;
    assert!(!verify_certificate(&g, &w, &w, &c, DEFAULT_VERIFY_TOL).items[0].pass);
    let mut c = cert.clone();
    c.shore = Shore::empty();
    assert!(!verify_certificate(&g, &w, &w, &c, DEFAULT_VERIFY_TOL).items[1].pass);
    let mut c = cert.clone();
    c.x = vec![0.0; 3];
    let r = verify_certificate(&g, &w, &w, &c, DEFAULT_VERIFY_TOL);
    assert!(!r.items[3].pass && r.items[0].pass);
    let mut c = cert.clone();
    c.x = vec![1.0, 0.75, 0.5];
    assert!(!verify_certificate(&g, &w, &w, &c, DEFAULT_VERIFY_TOL).items[3].pass);
    let mut c = cert;
    c.shore = Shore::from_vertices([7]);
    assert!(!verify_certificate(&g, &w, &w, &c, DEFAULT_VERIFY_TOL).items[1].pass);
}

#[test]
fn zero_pair_certificate() {
    let g = complete(3);
    let zero = EdgeWeights::zeros(&g);
    let cert = BetaCertificate::zero(0.7, 3);
    assert!(verify_certificate(&g, &zero, &zero, &cert, DEFAULT_VERIFY_TOL).pass());
    // mixed zeros are never certified
    let ones = EdgeWeights::ones(&g);
    assert!(!verify_certificate(&g, &zero, &ones, &cert, DEFAULT_VERIFY_TOL).items[0].pass);
}

#[test]
fn constants_identity_random_beta() {
    let mut r = common::rng(4);
    for _ in 0..100 {
        let beta = r.gen_range(1e-3..0.878);
        let k = Alg2Constants::new(beta).unwrap();
        assert!(((1.0 - k.gamma) * (1.0 - k.sigma) * (1.0 - k.eps) - (1.0 - k.tau)).abs() < 1e-12);
    }
}

#[test]
fn certify_small_edge_collapses_to_triangle() {
    let a = k3_small_edge(1.0).unwrap();
    for (v, e) in a.w.values().iter().zip([4.0 / 9.0; 3]) {
        assert!((v - e).abs() < 1e-15);
    }
    let k = Alg2Constants::new(0.5).unwrap();
    let out = certify(&a.graph, &a.w, &a.z, &a.witnesses(), 0.5, &RngStream::new(3)).unwrap();
    assert!((out.certificate.rho - 1.0 / (1.0 - k.eps)).abs() < 1e-15);
    assert!((out.certificate.rho * out.certificate.mu - a.w.dot(a.z.values())).abs() < 1e-12);
    assert!(out.certificate.cover.support_size() <= k.samples(3));
    assert!(verify_certificate(&a.graph, &a.w, &a.z, &out.certificate, DEFAULT_VERIFY_TOL).pass());
}

#[test]
fn certify_hamming_finds_max_cut() {
    let h = hamming_witnesses(3, 2).unwrap();
    let out = certify(&h.graph, &h.w, &h.z, &h.witnesses(), 0.8, &RngStream::new(1)).unwrap();
    assert_eq!(cut_weight(&h.graph, h.w.values(), &out.certificate.shore), 8.0);
    let r = verify_certificate(&h.graph, &h.w, &h.z, &out.certificate, DEFAULT_VERIFY_TOL);
    assert!(r.pass(), "{r:?}");
}

#[test]
fn certify_rejects_zero_inputs() {
    let k = kn_optimal(3).unwrap();
    let zero = EdgeWeights::zeros(&k.graph);
    assert!(certify(&k.graph, &zero, &k.z, &k.witnesses(), 0.5, &RngStream::new(0)).is_err());
}

#[test]
fn from_weights_on_cycle() {
    let g = cycle(5);
    let w = EdgeWeights::ones(&g);
    let (z, out) = approx_mc_fcc(&g, &w, 0.5, &RngStream::new(7)).unwrap();
    let c = &out.certificate;
    assert!(!z.is_zero());
    assert!(verify_certificate(&g, &w, &z, c, DEFAULT_VERIFY_TOL).pass());
    let mc = mc_exact(&g, &w).unwrap().value;
    let cut = cut_weight(&g, w.values(), &c.shore);
    assert!(c.rho >= mc - 1e-9 && mc >= cut && cut >= 0.5 * c.rho);
    assert_eq!(c.z.as_deref(), Some(z.values()));
}

#[test]
fn from_weights_product_is_near_tight() {
    let k = Alg2Constants::new(0.5).unwrap();
    let g = complete(4);
    let w = EdgeWeights::ones(&g);
    let sol = solve_gw(&g, &w, 0.0, k.sigma).unwrap();
    let (z, out) = approx_mc_fcc(&g, &w, 0.5, &RngStream::new(2)).unwrap();
    let rho_bar = out.certificate.rho * (1.0 - k.eps);
    assert!(w.dot(z.values()) >= (1.0 - k.sigma) * rho_bar - 1e-9);
    assert!(w.dot(z.values()) <= rho_bar + 1e-6);
    assert!(sol.rho > 0.0);
}

#[test]
fn from_demands_on_complete() {
    let g = complete(5);
    let z = EdgeWeights::ones(&g);
    let (w, out) = approx_fcc_mc(&g, &z, 0.5, &RngStream::new(11)).unwrap();
    let c = &out.certificate;
    assert!(!w.is_zero());
    assert!(verify_certificate(&g, &w, &z, c, DEFAULT_VERIFY_TOL).pass());
    let fcc = fcc_exact(&g, &z).unwrap().value;
    assert!(c.cover.total_weight() <= fcc / 0.5 + 1e-6);
}

#[test]
fn from_demands_covers_small_edge() {
    let a = k3_small_edge(0.25).unwrap();
    let mut pass = 0;
    for seed in 0..30 {
        let (_, out) = approx_fcc_mc(&a.graph, &a.z, 0.4, &RngStream::new(seed)).unwrap();
        let w = EdgeWeights::new(&a.graph, out.certificate.w.clone().unwrap()).unwrap();
        let r = verify_certificate(&a.graph, &w, &a.z, &out.certificate, DEFAULT_VERIFY_TOL);
        let cover = cutcert::graph::cover_vector(&a.graph, &out.certificate.cover);
        assert!(cover[2] >= 0.25 - 1e-9, "small edge uncovered: {}", cover[2]);
        pass += r.pass() as usize;
    }
    assert!(pass >= 27, "{pass}/30");
}

#[test]
fn pairing_examples() {
    let g = complete(3);
    let one = EdgeWeights::ones(&g);
    let p = check_beta_pairing(&g, &one, &one, 0.85).unwrap();
    assert!(p.holds);
    let zero = EdgeWeights::zeros(&g);
    let p = check_beta_pairing(&g, &zero, &zero, 0.3).unwrap();
    assert!(p.holds && p.rho == 0.0 && p.mu == 0.0);
    // mc·fcc = ⟨w,z⟩ on K_3, so unit pairs are exact pairings at any β
    assert!(check_beta_pairing(&g, &one, &one, 0.999).unwrap().holds);
    let lop = EdgeWeights::new(&g, vec![1.0, 0.0, 0.0]).unwrap();
    let other = EdgeWeights::new(&g, vec![0.0, 0.0, 1.0]).unwrap();
    assert!(!check_beta_pairing(&g, &lop, &other, 0.1).unwrap().holds);
}

#[test]
fn passing_certificates_are_pairings() {
    let mut r = common::rng(21);
    let mut runs = 0;
    while runs < 50 {
        let g = common::random_graph(&mut r, 6, 0.6);
        let seed = r.gen();
        let (w, z, out) = if runs % 2 == 0 {
            let w = common::random_weights(&mut r, &g);
            let (z, out) = approx_mc_fcc(&g, &w, 0.5, &RngStream::new(seed)).unwrap();
            (w, z, out)
        } else {
            let z = common::random_weights(&mut r, &g);
            let (w, out) = approx_fcc_mc(&g, &z, 0.5, &RngStream::new(seed)).unwrap();
            (w, z, out)
        };
        runs += 1;
        if verify_certificate(&g, &w, &z, &out.certificate, DEFAULT_VERIFY_TOL).pass() {
            assert!(check_beta_pairing(&g, &w, &z, 0.5).unwrap().holds);
        }
    }
}

#[test]
fn success_rate_on_larger_graphs() {
    let mut r = common::rng(8);
    let mut failures = 0;
    let graphs: Vec<Graph> = vec![
        complete(8),
        cycle(9),
        generate(GraphKind::HammingExact { a: 3, b: 2 }).unwrap(),
        common::random_graph(&mut r, 10, 0.4),
    ];
    for run in 0..100 {
        let g = &graphs[run % graphs.len()];
        let v = common::random_weights(&mut r, g);
        let rng = RngStream::new(run as u64);
        let (w, z, out) = if run % 2 == 0 {
            let (z, out) = approx_mc_fcc(g, &v, 0.5, &rng).unwrap();
            (v, z, out)
        } else {
            let (w, out) = approx_fcc_mc(g, &v, 0.5, &rng).unwrap();
            (w, v, out)
        };
        let k = Alg2Constants::new(0.5).unwrap();
        assert!(out.certificate.cover.support_size() <= k.samples(g.n()));
        failures += !verify_certificate(g, &w, &z, &out.certificate, DEFAULT_VERIFY_TOL).pass() as usize;
    }
    assert!(failures <= 10, "{failures} failures");
}

#[test]
fn certificate_text_survives_verification() {
    let g = complete(4);
    let z = EdgeWeights::ones(&g);
    let (w, out) = approx_fcc_mc(&g, &z, 0.7, &RngStream::new(5)).unwrap();
    let back = BetaCertificate::from_text(&out.certificate.to_text()).unwrap();
    assert_eq!(back, out.certificate);
    let a = verify_certificate(&g, &w, &z, &out.certificate, DEFAULT_VERIFY_TOL);
    let b = verify_certificate(&g, &w, &z, &back, DEFAULT_VERIFY_TOL);
    assert_eq!(a, b);
    let mut empty = back;
    empty.cover = FractionalCutCover::new();
    assert!(!verify_certificate(&g, &w, &z, &empty, DEFAULT_VERIFY_TOL).pass());
}
