//! Named instances with closed-form optimal witnesses, and probes for the
//! sampling phenomena they exhibit.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::certificates::Witnesses;
use crate::error::{Error, Result};
use crate::graph::{EdgeWeights, Graph, Shore};
use crate::linalg::SymMatrix;
use crate::oracles::{fcc_exact, mc_exact};
use crate::par::{map_range, Execution};
use crate::rng::RngStream;
use crate::rounding::ShoreSampler;
use crate::sdp::{solve_gw, solve_gw_polar};

/// Largest cube dimension accepted by the Hamming generators.
pub const HAMMING_MAX_DIM: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    Complete(usize),
    Cycle(usize),
    Path(usize),
    /// Binary strings of length `a`, adjacent at Hamming distance exactly `b`.
    HammingExact { a: usize, b: usize },
    /// Adjacent at Hamming distance at least `b`.
    Hamming { a: usize, b: usize },
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GraphKind::Complete(n) => write!(f, "complete {n}"),
            GraphKind::Cycle(n) => write!(f, "cycle {n}"),
            GraphKind::Path(n) => write!(f, "path {n}"),
            GraphKind::HammingExact { a, b } => write!(f, "hamming-exact {a} {b}"),
            GraphKind::Hamming { a, b } => write!(f, "hamming {a} {b}"),
        }
    }
}

impl FromStr for GraphKind {
    type Err = Error;

    /// Accepts the `Display` form, e.g. `"cycle 5"` or `"hamming-exact 3 2"`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split_whitespace().collect();
        let num = |k: usize| -> Result<usize> {
            parts
                .get(k)
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::InvalidParameter(format!("graph kind {s:?}: expected integer argument {k}")))
        };
        let arity = |want: usize| -> Result<()> {
            if parts.len() == want + 1 {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("graph kind {s:?}: expected {want} arguments")))
            }
        };
        match parts.first().copied() {
            Some("complete") => arity(1).and(Ok(GraphKind::Complete(num(1)?))),
            Some("cycle") => arity(1).and(Ok(GraphKind::Cycle(num(1)?))),
            Some("path") => arity(1).and(Ok(GraphKind::Path(num(1)?))),
            Some("hamming-exact") => arity(2).and(Ok(GraphKind::HammingExact { a: num(1)?, b: num(2)? })),
            Some("hamming") => arity(2).and(Ok(GraphKind::Hamming { a: num(1)?, b: num(2)? })),
            _ => Err(Error::InvalidParameter(format!(
                "unknown graph kind {s:?} (complete, cycle, path, hamming-exact, hamming)"
            ))),
        }
    }
}

fn hamming_graph(a: usize, b: usize, exact: bool) -> Result<Graph> {
    if !(1 <= b && b <= a) {
        return Err(Error::InvalidParameter(format!("Hamming graph needs 1 <= b <= a, got a={a}, b={b}")));
    }
    if a > HAMMING_MAX_DIM {
        return Err(Error::TooLarge { n: 1 << a, limit: 1 << HAMMING_MAX_DIM });
    }
    let n = 1usize << a;
    let adjacent = |d: u32| if exact { d as usize == b } else { d as usize >= b };
    Graph::from_edges(
        n,
        (0..n).flat_map(|i| (i + 1..n).filter(move |&j| adjacent((i ^ j).count_ones())).map(move |j| (i, j))),
    )
}

/// Vertices are `0..n`; Hamming vertices are the integer values of their
/// binary strings, with bit `k` as coordinate `k`.
pub fn generate(kind: GraphKind) -> Result<Graph> {
    match kind {
        GraphKind::Complete(n) => Graph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))),
        GraphKind::Cycle(n) => {
            if n < 3 {
                return Err(Error::InvalidParameter(format!("cycle needs n >= 3, got {n}")));
            }
            Graph::from_edges(n, (0..n).map(|i| (i.min((i + 1) % n), i.max((i + 1) % n))))
        }
        GraphKind::Path(n) => {
            if n < 2 {
                return Err(Error::InvalidParameter(format!("path needs n >= 2, got {n}")));
            }
            Graph::from_edges(n, (0..n - 1).map(|i| (i, i + 1)))
        }
        GraphKind::HammingExact { a, b } => hamming_graph(a, b, true),
        GraphKind::Hamming { a, b } => hamming_graph(a, b, false),
    }
}

/// An instance `(G, w, z)` together with witnesses `(ρ, x)` and `(μ, Y)`
/// that meet with zero gap: `ρμ = ⟨w, z⟩ = ⟨¼L(w), Y⟩`.
#[derive(Debug, Clone)]
pub struct ExactPair {
    pub graph: Graph,
    pub w: EdgeWeights,
    pub z: EdgeWeights,
    pub rho: f64,
    pub x: Vec<f64>,
    pub mu: f64,
    pub y: SymMatrix,
}

impl ExactPair {
    pub fn witnesses(&self) -> Witnesses {
        Witnesses { eps: 0.0, sigma: 0.0, rho_bar: self.rho, x: self.x.clone(), mu_bar: self.mu, y: self.y.clone() }
    }
}

/// `K_n` at unit demands: `μ̄ = 2 − 2/n`, `Ȳ = 2I − (2/n)J`, dual weights
/// `w̄ = (4/n²)1` and `x̄ = (1/n)1`.
pub fn kn_optimal(n: usize) -> Result<ExactPair> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("K_n needs n >= 2, got {n}")));
    }
    let graph = generate(GraphKind::Complete(n))?;
    let nf = n as f64;
    let w = EdgeWeights::constant(&graph, 4.0 / (nf * nf))?;
    let z = EdgeWeights::ones(&graph);
    let y = SymMatrix::from_fn(n, |i, j| if i == j { 2.0 - 2.0 / nf } else { -2.0 / nf });
    Ok(ExactPair { graph, w, z, rho: 1.0, x: vec![1.0 / nf; n], mu: 2.0 - 2.0 / nf, y })
}

/// Triangle with one light edge: demands `z = e01 + e02 + ε·e12` and the
/// matching optimal weights. Edge order is `(0,1), (0,2), (1,2)`.
pub fn k3_small_edge(eps: f64) -> Result<ExactPair> {
    if !(eps > 0.0 && eps < 2.0) {
        return Err(Error::InvalidParameter(format!("edge demand must lie in (0, 2), got {eps}")));
    }
    let graph = Graph::from_edges(3, [(0, 1), (0, 2), (1, 2)])?;
    let scale_b = 4.0 / ((4.0 - eps) * (4.0 - eps));
    let w = EdgeWeights::new(&graph, vec![(2.0 - eps) * scale_b, (2.0 - eps) * scale_b, scale_b])?;
    let z = EdgeWeights::new(&graph, vec![1.0, 1.0, eps])?;
    let x = vec![(2.0 - eps) / (4.0 - eps), 1.0 / (4.0 - eps), 1.0 / (4.0 - eps)];
    let mu = 4.0 / (4.0 - eps);
    let a = eps / 2.0 - 1.0;
    let c = 1.0 - 2.0 * eps + eps * eps / 2.0;
    let y = SymMatrix::from_rows(&[vec![mu, mu * a, mu * a], vec![mu * a, mu, mu * c], vec![mu * a, mu * c, mu]])?;
    Ok(ExactPair { graph, w, z, rho: 1.0, x, mu, y })
}

/// The two terms of `(4 − ε)/4 · Ȳ = vvᵀ + (ε − ε²/4) uuᵀ` for
/// [`k3_small_edge`], returned as `[(1, v), (ε − ε²/4, u)]`.
pub fn k3_small_edge_decomposition(eps: f64) -> [(f64, [f64; 3]); 2] {
    [(1.0, [1.0, eps / 2.0 - 1.0, eps / 2.0 - 1.0]), (eps - eps * eps / 4.0, [0.0, 1.0, -1.0])]
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Unit weights and demands on the exact Hamming graph with
/// `ρ = (b/a)|E|`, `x = ½C(a−1, b−1)1`, `μ = a/b`, `Y = (1/b)UᵀU` where
/// column `s` of `U` is `2s − 1` read bitwise.
pub fn hamming_witnesses(a: usize, b: usize) -> Result<ExactPair> {
    if b == 0 || !b.is_multiple_of(2) || !(b <= a && a < 2 * b) {
        return Err(Error::InvalidParameter(format!("need b even and b <= a < 2b, got a={a}, b={b}")));
    }
    let graph = generate(GraphKind::HammingExact { a, b })?;
    let n = graph.n();
    let (af, bf) = (a as f64, b as f64);
    let sign = |s: usize, k: usize| if (s >> k) & 1 == 1 { 1.0 } else { -1.0 };
    let y = SymMatrix::from_fn(n, |s, t| (0..a).map(|k| sign(s, k) * sign(t, k)).sum::<f64>() / bf);
    Ok(ExactPair {
        w: EdgeWeights::ones(&graph),
        z: EdgeWeights::ones(&graph),
        rho: bf / af * graph.m() as f64,
        x: vec![0.5 * binomial(a - 1, b - 1); n],
        mu: af / bf,
        y,
        graph,
    })
}

/// Shores drawn from `2I − (2/n)J`.
#[derive(Debug, Clone)]
pub struct SupportCensus {
    pub n: usize,
    pub draws: u64,
    pub observed: BTreeSet<Shore>,
}

impl SupportCensus {
    /// Nonempty proper shores never drawn.
    pub fn missing(&self) -> Vec<Shore> {
        let full = (1u64 << self.n) - 1;
        (1..full).map(Shore::from_mask).filter(|s| !self.observed.contains(s)).collect()
    }
}

fn simplex_gram(n: usize) -> SymMatrix {
    let nf = n as f64;
    SymMatrix::from_fn(n, |i, j| if i == j { 2.0 - 2.0 / nf } else { -2.0 / nf })
}

pub fn exp_support_probe(exec: Execution, n: usize, draws: u64, rng: &RngStream) -> Result<SupportCensus> {
    if !(3..=20).contains(&n) {
        return Err(Error::InvalidParameter(format!("support probe needs 3 <= n <= 20, got {n}")));
    }
    let sampler = ShoreSampler::new(&simplex_gram(n))?;
    let shores = map_range(exec, 0, draws, |k| sampler.draw(rng, k));
    Ok(SupportCensus { n, draws, observed: shores.into_iter().collect() })
}

/// `min{(2n − |S| − 1)/(|S| − 1), (n + |S| − 1)/(n − |S| − 1)}`, with a
/// vanishing denominator read as `+∞`.
pub fn support_beta(n: usize, k: usize) -> f64 {
    let ratio = |num: usize, den: usize| if den == 0 { f64::INFINITY } else { num as f64 / den as f64 };
    ratio(2 * n - k - 1, k - 1).min(ratio(n + k - 1, n - k - 1))
}

/// Shore selected by `g` under `2I − (2/n)J`: vertices with
/// `(n − 1)g_i ≥ Σ_{v≠i} g_v`.
pub fn simplex_shore(g: &[f64]) -> Shore {
    let total: f64 = g.iter().sum();
    let n = g.len() as f64;
    Shore::from_vertices((0..g.len()).filter(|&i| (n - 1.0) * g[i] >= total - g[i]))
}

/// A Gaussian vector that the sampler for `2I − (2/n)J` maps to `s`:
/// `g_i = c` on `s` and `−c` off it, with `c = (1 + min(β_S, 3))/2`.
pub fn support_witness(n: usize, s: &Shore) -> Result<Vec<f64>> {
    let k = s.len();
    if k == 0 || k >= n || s.span() > n {
        return Err(Error::InvalidParameter("shore must be nonempty and proper".into()));
    }
    let c = (1.0 + support_beta(n, k).min(3.0)) / 2.0;
    Ok((0..n).map(|i| if s.contains(i) { c } else { -c }).collect())
}

/// Checks [`support_witness`] through the actual sampler.
pub fn support_witness_maps(n: usize, s: &Shore) -> Result<bool> {
    let g = support_witness(n, s)?;
    let sampler = ShoreSampler::new(&simplex_gram(n))?;
    Ok(sampler.shore_for(&g) == *s && simplex_shore(&g) == *s)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralityRatios {
    pub mc: f64,
    pub gw: f64,
    pub fcc: f64,
    pub gw_polar: f64,
    /// `mc(w)/GW(w)`.
    pub mc_over_gw: f64,
    /// `GW^polar(z)/fcc(z)`.
    pub polar_over_fcc: f64,
}

/// Both integrality ratios from exact oracles and solves to relative
/// accuracy `sigma`.
pub fn integrality_ratios(g: &Graph, w: &EdgeWeights, z: &EdgeWeights, sigma: f64) -> Result<IntegralityRatios> {
    let mc = mc_exact(g, w)?.value;
    let fcc = fcc_exact(g, z)?.value;
    let gw = solve_gw(g, w, 0.0, sigma)?.rho;
    let gw_polar = solve_gw_polar(g, z, 0.0, sigma)?.mu;
    Ok(IntegralityRatios { mc, gw, fcc, gw_polar, mc_over_gw: mc / gw, polar_over_fcc: gw_polar / fcc })
}
