//! Random-hyperplane rounding and the sampled fractional cut cover.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::graph::{check_cover, cut_weight, CoverCheck, EdgeWeights, FractionalCutCover, Graph, Shore};
use crate::linalg::{psd_sqrt, SymMatrix};
use crate::par::{fold_chunks, map_range, Execution};
use crate::rng::RngStream;
use crate::sdp::solve_gw_polar;

/// `α_GW = min_{0<θ≤π} (2/π) θ/(1 − cos θ)` and its minimizer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaGw {
    pub value: f64,
    pub theta: f64,
}

/// `(2/π) θ/(1 − cos θ)`.
pub fn gw_ratio(theta: f64) -> f64 {
    2.0 / PI * theta / (1.0 - theta.cos())
}

pub fn alpha_gw() -> AlphaGw {
    static CELL: OnceLock<AlphaGw> = OnceLock::new();
    *CELL.get_or_init(|| {
        // f′ has the sign of 1 − cos θ − θ sin θ: negative then positive.
        let h = |t: f64| 1.0 - t.cos() - t * t.sin();
        let (mut lo, mut hi) = (1e-3, PI);
        while hi - lo > 1e-13 {
            let mid = 0.5 * (lo + hi);
            if h(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let theta = 0.5 * (lo + hi);
        AlphaGw { value: gw_ratio(theta), theta }
    })
}

/// Parameters of the sampled cover for a target factor `β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Alg1Constants {
    pub beta: f64,
    /// `1 − β/α_GW`.
    pub tau: f64,
    /// `σ = ε = γ = τ/3`.
    pub sigma: f64,
    pub eps: f64,
    pub gamma: f64,
    /// `81 √(2π) / τ^{5/2}`.
    pub c: f64,
}

impl Alg1Constants {
    pub fn new(beta: f64) -> Result<Self> {
        let alpha = alpha_gw().value;
        if !(beta > 0.0 && beta < alpha) {
            return Err(Error::InvalidParameter(format!("beta must lie in (0, {alpha:.6}), got {beta}")));
        }
        let tau = 1.0 - beta / alpha;
        let third = tau / 3.0;
        Ok(Self {
            beta,
            tau,
            sigma: third,
            eps: third,
            gamma: third,
            c: 81.0 * 2f64.sqrt() * PI / tau.powf(2.5),
        })
    }

    /// `T(n) = ⌈C ln n⌉`, at least 1.
    pub fn samples(&self, n: usize) -> usize {
        sample_count(self.c, n)
    }
}

pub(crate) fn sample_count(c: f64, n: usize) -> usize {
    ((c * (n as f64).ln()).ceil() as usize).max(1)
}

/// Draws shores `{i : (Y^{1/2} g)_i ≥ 0}` from a fixed matrix.
#[derive(Debug, Clone)]
pub struct ShoreSampler {
    n: usize,
    /// Row-major `Y^{1/2}`.
    root: Vec<f64>,
}

impl ShoreSampler {
    pub fn new(y: &SymMatrix) -> Result<Self> {
        let b = psd_sqrt(y)?;
        let n = y.n();
        let mut root = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                root.push(b.get(i, j));
            }
        }
        Ok(Self { n, root })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Shore for an explicit Gaussian vector.
    pub fn shore_for(&self, g: &[f64]) -> Shore {
        assert_eq!(g.len(), self.n);
        let mut s = Shore::empty();
        for i in 0..self.n {
            let row = &self.root[i * self.n..(i + 1) * self.n];
            let v: f64 = row.iter().zip(g).map(|(a, b)| a * b).sum();
            if v >= 0.0 {
                s.insert(i);
            }
        }
        s
    }

    /// Shore for draw number `index` of `rng`.
    pub fn draw(&self, rng: &RngStream, index: u64) -> Shore {
        let mut g = vec![0.0; self.n];
        rng.gaussian(index).fill(&mut g);
        self.shore_for(&g)
    }
}

/// One random-hyperplane shore from `Y` using draw `index`.
pub fn sample_shore(y: &SymMatrix, rng: &RngStream, index: u64) -> Result<Shore> {
    Ok(ShoreSampler::new(y)?.draw(rng, index))
}

/// `P(ij ∈ δ(S)) = arccos(Y_ij/μ)/π`.
pub fn edge_marginal(y: &SymMatrix, mu: f64, i: usize, j: usize) -> f64 {
    (y.get(i, j) / mu).clamp(-1.0, 1.0).acos() / PI
}

/// Outcome of `T` independent draws.
#[derive(Debug, Clone)]
pub struct RepeatedSample {
    /// Shores in draw order.
    pub draws: Vec<Shore>,
    /// `μ/((1−γ)α_GW) · (1/T) Σ_t e_{S_t}`.
    pub cover: FractionalCutCover,
}

impl RepeatedSample {
    /// Distinct shores `F`.
    pub fn support(&self) -> impl Iterator<Item = &Shore> {
        self.cover.iter().map(|(s, _)| s)
    }
}

pub fn repeated_sampling(y: &SymMatrix, mu: f64, t: usize, gamma: f64, rng: &RngStream) -> Result<RepeatedSample> {
    repeated_sampling_with(Execution::default(), y, mu, t, gamma, rng)
}

pub fn repeated_sampling_with(
    exec: Execution,
    y: &SymMatrix,
    mu: f64,
    t: usize,
    gamma: f64,
    rng: &RngStream,
) -> Result<RepeatedSample> {
    if t == 0 {
        return Err(Error::InvalidParameter("sample count must be at least 1".into()));
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::InvalidParameter(format!("gamma must lie in (0, 1), got {gamma}")));
    }
    if !(mu > 0.0) {
        return Err(Error::InvalidParameter(format!("mu must be positive, got {mu}")));
    }
    let sampler = ShoreSampler::new(y)?;
    let draws = map_range(exec, 0, t as u64, |k| sampler.draw(rng, k));
    let mut counts = std::collections::HashMap::<&Shore, usize>::new();
    for s in &draws {
        *counts.entry(s).or_insert(0) += 1;
    }
    let unit = mu / ((1.0 - gamma) * alpha_gw().value);
    let cover = counts
        .into_iter()
        .map(|(s, c)| (s.clone(), unit * c as f64 / t as f64))
        .collect();
    Ok(RepeatedSample { draws, cover })
}

/// Mean of `⟨w, χ^{δ(S)}⟩` over draws `0..draws`.
pub fn mean_cut_weight(exec: Execution, g: &Graph, w: &EdgeWeights, y: &SymMatrix, draws: u64, rng: &RngStream) -> Result<f64> {
    if !w.belongs_to(g) || y.n() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.m(), got: w.len() });
    }
    if draws == 0 {
        return Err(Error::InvalidParameter("need at least one draw".into()));
    }
    let sampler = ShoreSampler::new(y)?;
    let total = fold_chunks(
        exec,
        0,
        draws,
        0.0,
        |acc, k| acc + cut_weight(g, w.values(), &sampler.draw(rng, k)),
        |a, b| a + b,
    );
    Ok(total / draws as f64)
}

#[derive(Debug, Clone)]
pub struct ApproxFccReport {
    pub constants: Alg1Constants,
    pub samples: usize,
    /// Solver value `μ` for the thickened demands.
    pub polar_value: f64,
    /// Solver dual bound `⟨ẑ, w⟩ ≤ GW^polar(G, ẑ)`.
    pub polar_lower_bound: f64,
    /// `⟨1, y⟩`.
    pub value: f64,
    pub support: usize,
    pub cover_check: CoverCheck,
}

pub fn approx_fcc(g: &Graph, z: &EdgeWeights, beta: f64, rng: &RngStream) -> Result<(FractionalCutCover, ApproxFccReport)> {
    approx_fcc_with(Execution::default(), g, z, beta, rng)
}

/// Sampled fractional cut cover with `⟨1,y⟩ ≤ GW^polar(G,z)/β`; feasible
/// with probability at least `1 − 1/n`.
pub fn approx_fcc_with(
    exec: Execution,
    g: &Graph,
    z: &EdgeWeights,
    beta: f64,
    rng: &RngStream,
) -> Result<(FractionalCutCover, ApproxFccReport)> {
    let k = Alg1Constants::new(beta)?;
    if !z.belongs_to(g) {
        return Err(Error::DimensionMismatch { expected: g.m(), got: z.len() });
    }
    let samples = k.samples(g.n());
    if z.is_zero() {
        let cover = FractionalCutCover::new();
        let cover_check = check_cover(g, z, &cover, 0.0);
        return Ok((
            cover,
            ApproxFccReport {
                constants: k,
                samples: 0,
                polar_value: 0.0,
                polar_lower_bound: 0.0,
                value: 0.0,
                support: 0,
                cover_check,
            },
        ));
    }
    let floor = 0.5 * k.eps * z.norm_inf();
    let thick = EdgeWeights::new(g, z.values().iter().map(|&v| v.max(floor)).collect())?;
    let sol = solve_gw_polar(g, &thick, 0.0, k.sigma)?;
    let sample = repeated_sampling_with(exec, &sol.y, sol.mu, samples, k.gamma, rng)?;
    let cover = sample.cover;
    let cover_check = check_cover(g, z, &cover, 1e-9 * (1.0 + z.norm_inf()));
    let report = ApproxFccReport {
        constants: k,
        samples,
        polar_value: sol.mu,
        polar_lower_bound: sol.lower_bound,
        value: cover.total_weight(),
        support: cover.support_size(),
        cover_check,
    };
    Ok((cover, report))
}

/// One step of [`IncrementalTracker`].
#[derive(Debug, Clone, PartialEq)]
pub struct TrackerStep {
    pub t: usize,
    pub shore: Shore,
    /// `min{ν : ν Σ_S (ŷ_t)_S χ^{δ(S)} ≥ z}`; infinite until every demanded
    /// edge has been cut.
    pub mu: f64,
}

/// Draws shores one at a time and tracks the scale needed for the empirical
/// distribution `ŷ_t` to cover `z`.
#[derive(Debug, Clone)]
pub struct IncrementalTracker<'a> {
    g: &'a Graph,
    z: &'a EdgeWeights,
    sampler: ShoreSampler,
    rng: RngStream,
    hits: Vec<u64>,
    counts: std::collections::BTreeMap<Shore, u64>,
    t: usize,
}

impl<'a> IncrementalTracker<'a> {
    pub fn new(g: &'a Graph, z: &'a EdgeWeights, y: &SymMatrix, rng: RngStream) -> Result<Self> {
        if !z.belongs_to(g) {
            return Err(Error::DimensionMismatch { expected: g.m(), got: z.len() });
        }
        Ok(Self {
            g,
            z,
            sampler: ShoreSampler::new(y)?,
            rng,
            hits: vec![0; g.m()],
            counts: Default::default(),
            t: 0,
        })
    }

    /// Scale after the current number of draws (`∞` at `t = 0` for `z ≠ 0`).
    pub fn current_mu(&self) -> f64 {
        let mut mu = 0.0_f64;
        for (h, &z) in self.hits.iter().zip(self.z.values()) {
            if z > 0.0 {
                if *h == 0 {
                    return f64::INFINITY;
                }
                mu = mu.max(z * self.t as f64 / *h as f64);
            }
        }
        mu
    }

    /// Empirical distribution `ŷ_t`.
    pub fn distribution(&self) -> FractionalCutCover {
        self.counts
            .iter()
            .map(|(s, &c)| (s.clone(), c as f64 / self.t as f64))
            .collect()
    }
}

impl Iterator for IncrementalTracker<'_> {
    type Item = TrackerStep;

    fn next(&mut self) -> Option<TrackerStep> {
        let shore = self.sampler.draw(&self.rng, self.t as u64);
        self.t += 1;
        for (k, &(i, j)) in self.g.edges().iter().enumerate() {
            if shore.contains(i) != shore.contains(j) {
                self.hits[k] += 1;
            }
        }
        *self.counts.entry(shore.clone()).or_insert(0) += 1;
        Some(TrackerStep { t: self.t, shore, mu: self.current_mu() })
    }
}
