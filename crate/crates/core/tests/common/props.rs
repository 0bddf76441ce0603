//! Invariant suites shared by the proptest target and the acceptance run.

use cutcert::certificates::Alg2Constants;
use cutcert::graph::{laplacian, laplacian_adjoint, EdgeWeights, Graph};
use cutcert::linalg::{extreme_eigs, ldlt_psd, SymMatrix};
use cutcert::par::Execution;
use cutcert::rng::RngStream;
use cutcert::rounding::repeated_sampling_with;
use cutcert::sdp::{solve_gw, solve_gw_polar};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random graph plus two positive weightings, derived from a seed so that
/// shrinking works on `(n, seed)`.
#[derive(Debug, Clone)]
pub struct Instance {
    pub g: Graph,
    pub w: EdgeWeights,
    pub z: EdgeWeights,
    pub seed: u64,
}

pub fn instance(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Instance> {
    (n, any::<u64>()).prop_map(|(n, seed)| {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let g = super::random_graph(&mut r, n, 0.6);
        let w = super::random_weights(&mut r, &g);
        let z = super::random_weights(&mut r, &g);
        Instance { g, w, z, seed }
    })
}

fn random_sym(r: &mut ChaCha8Rng, n: usize) -> SymMatrix {
    SymMatrix::from_fn(n, |_, _| r.gen_range(-1.0..1.0))
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

pub fn adjoint_identity(inst: Instance) -> Result<(), TestCaseError> {
    let mut r = ChaCha8Rng::seed_from_u64(inst.seed ^ 0xa5);
    let y = random_sym(&mut r, inst.g.n());
    let lhs = laplacian(&inst.g, &inst.w).unwrap().inner(&y);
    let rhs = inst.w.dot(&laplacian_adjoint(&inst.g, &y).unwrap());
    prop_assert!(close(lhs, rhs, 1e-12), "{lhs} vs {rhs}");
    Ok(())
}

pub fn laplacian_monotone(inst: Instance) -> Result<(), TestCaseError> {
    let bigger = EdgeWeights::new(&inst.g, inst.w.values().iter().zip(inst.z.values()).map(|(a, b)| a + b).collect())
        .unwrap();
    let lw = laplacian(&inst.g, &inst.w).unwrap();
    let lb = laplacian(&inst.g, &bigger).unwrap();
    prop_assert!(ldlt_psd(&(&lb - &lw), 1e-10).is_ok());
    let (_, top_w) = extreme_eigs(&lw).unwrap();
    let (_, top_b) = extreme_eigs(&lb).unwrap();
    prop_assert!(top_b >= top_w - 1e-10);
    Ok(())
}

/// `⟨w, z⟩ ≤ GW(w)·GW^polar(z)` for any pair, and
/// `(1 − σ)ρμ ≤ ⟨w, z⟩` when `z = ¼L*(Y)` comes from the optimal `Y` of
/// `GW(w)` (so `μ ≤ 1`).
pub fn gauge_sandwich(inst: Instance) -> Result<(), TestCaseError> {
    let sigma = 1e-6;
    let gw = solve_gw(&inst.g, &inst.w, 0.0, sigma).unwrap();
    let polar = solve_gw_polar(&inst.g, &inst.z, 0.0, sigma).unwrap();
    let wz = inst.w.dot(inst.z.values());
    prop_assert!(wz <= gw.rho * polar.mu * (1.0 + 1e-9), "{wz} > {} * {}", gw.rho, polar.mu);

    let lz = laplacian_adjoint(&inst.g, &gw.y).unwrap();
    let zt = EdgeWeights::from_clamped(&inst.g, lz.iter().map(|v| 0.25 * v).collect(), 1e-9).unwrap();
    let wzt = inst.w.dot(zt.values());
    prop_assert!(wzt >= (1.0 - sigma) * gw.rho - 1e-9, "{wzt} < (1-σ){}", gw.rho);
    prop_assert!(wzt <= gw.rho * (1.0 + 1e-9));
    Ok(())
}

pub fn constants_identity(beta: f64) -> Result<(), TestCaseError> {
    let k = Alg2Constants::new(beta).unwrap();
    let lhs = (1.0 - k.gamma) * (1.0 - k.sigma) * (1.0 - k.eps);
    prop_assert!((lhs - (1.0 - k.tau)).abs() <= 1e-12);
    Ok(())
}

/// `x ≤ 1 − y ⇒ arccos x ≥ √(2y)`.
pub fn arccos_bound((y, t): (f64, f64)) -> Result<(), TestCaseError> {
    let x = -1.0 + t * (2.0 - y);
    prop_assert!(x.acos() >= (2.0 * y).sqrt() - 1e-12, "x={x} y={y}");
    Ok(())
}

pub fn seed_reproducible((inst, seed): (Instance, u64)) -> Result<(), TestCaseError> {
    let n = inst.g.n();
    let mut r = ChaCha8Rng::seed_from_u64(inst.seed);
    let mut y = SymMatrix::zeros(n);
    // Gram of random vectors, rescaled to a unit diagonal
    let vs: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| r.gen_range(-1.0..1.0)).collect()).collect();
    for i in 0..n {
        for j in 0..=i {
            let d: f64 = vs[i].iter().zip(&vs[j]).map(|(a, b)| a * b).sum();
            y.set(i, j, d);
        }
    }
    let d = y.diag();
    let y = SymMatrix::from_fn(n, |i, j| y.get(i, j) / (d[i] * d[j]).sqrt());
    let rng = RngStream::new(seed);
    let a = repeated_sampling_with(Execution::Sequential, &y, 1.0, 257, 0.3, &rng).unwrap();
    let b = repeated_sampling_with(Execution::Parallel, &y, 1.0, 257, 0.3, &rng).unwrap();
    let c = repeated_sampling_with(Execution::Sequential, &y, 1.0, 257, 0.3, &RngStream::new(seed)).unwrap();
    prop_assert_eq!(&a.draws, &b.draws);
    prop_assert_eq!(&a.draws, &c.draws);
    prop_assert_eq!(&a.cover, &b.cover);
    Ok(())
}

pub fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    let rng = TestRng::deterministic_rng(config.rng_algorithm);
    TestRunner::new_with_rng(config, rng)
}

/// Runs every suite, returning `(name, outcome)` pairs.
pub fn run_all(cases: u32) -> Vec<(&'static str, Result<(), String>)> {
    fn go<S: Strategy>(
        cases: u32,
        s: S,
        f: impl Fn(S::Value) -> Result<(), TestCaseError>,
    ) -> Result<(), String> {
        runner(cases).run(&s, f).map_err(|e| e.to_string())
    }
    vec![
        ("adjoint identity", go(cases, instance(2..=9), adjoint_identity)),
        ("laplacian monotonicity", go(cases, instance(2..=9), laplacian_monotone)),
        ("gauge sandwich", go(cases, instance(3..=6), gauge_sandwich)),
        ("constants identity", go(cases, 1e-4..0.8785, constants_identity)),
        ("arccos bound", go(cases, (0.0..=1.0f64, 0.0..=1.0f64), arccos_bound)),
        ("seed reproducibility", go(cases, (instance(2..=9), any::<u64>()), seed_reproducible)),
    ]
}
