//! β-certificates for max-cut / fractional-cut-cover weight pairs, their
//! construction from SDP witnesses, and an independent verifier.
//!
//! A β-certificate for `(w, z)` is `(ρ, μ, S, y, x)` with
//!
//! 1. `ρμ = ⟨w, z⟩`,
//! 2. `⟨w, χ^{δ(S)}⟩ ≥ βρ`,
//! 3. `y` covers `z` and `⟨1, y⟩ ≤ μ/β`,
//! 4. `⟨1, x⟩ ≤ ρ` and `Diag(x) ⪰ ¼L(w)`.
//!
//! Items 2 and 4 bracket `mc(w)` in `[βρ, ρ]`; items 1 and 3 bracket
//! `fcc(z)` in `[μ, μ/β]`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{
    check_cover, cut_weight, laplacian, laplacian_adjoint, CoverCheck, EdgeWeights, FractionalCutCover, Graph, Shore,
};
use crate::linalg::{ldlt_psd, SymMatrix};
use crate::oracles::{fcc_exact, mc_exact};
use crate::par::Execution;
use crate::rng::RngStream;
use crate::rounding::{alpha_gw, repeated_sampling_with, sample_count};
use crate::sdp::{solve_gw, solve_gw_polar};

pub const DEFAULT_VERIFY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct BetaCertificate {
    pub beta: f64,
    pub rho: f64,
    pub mu: f64,
    pub shore: Shore,
    pub cover: FractionalCutCover,
    pub x: Vec<f64>,
    /// Weights the certificate was issued for, when they are not part of
    /// the input graph file.
    pub w: Option<Vec<f64>>,
    /// Demands the certificate was issued for, likewise.
    pub z: Option<Vec<f64>>,
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn parse_floats(line: usize, s: &str) -> Result<Vec<f64>> {
    s.split_whitespace()
        .map(|t| {
            t.parse::<f64>().map_err(|_| Error::Parse { line, msg: format!("bad number {t:?}") })
        })
        .collect()
}

fn parse_shore(line: usize, s: &str) -> Result<Shore> {
    let vs = s
        .split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|_| Error::Parse { line, msg: format!("bad vertex {t:?}") }))
        .collect::<Result<Vec<_>>>()?;
    Ok(Shore::from_vertices(vs))
}

impl BetaCertificate {
    /// Zero-pair certificate: `ρ = μ = 0`, empty shore and cover, `x = 0`.
    pub fn zero(beta: f64, n: usize) -> Self {
        Self {
            beta,
            rho: 0.0,
            mu: 0.0,
            shore: Shore::empty(),
            cover: FractionalCutCover::new(),
            x: vec![0.0; n],
            w: None,
            z: None,
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "beta: {}", self.beta);
        let _ = writeln!(s, "rho: {}", self.rho);
        let _ = writeln!(s, "mu: {}", self.mu);
        let _ = writeln!(s, "shore: {}", self.shore);
        let _ = writeln!(s, "x: {}", join(&self.x));
        for (shore, weight) in self.cover.iter() {
            let _ = writeln!(s, "cover: {shore} : {weight}");
        }
        if let Some(w) = &self.w {
            let _ = writeln!(s, "w: {}", join(w));
        }
        if let Some(z) = &self.z {
            let _ = writeln!(s, "z: {}", join(z));
        }
        // `shore: ` for the empty shore carries a trailing space; strip it.
        s.lines().map(|l| l.trim_end().to_string() + "\n").collect()
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut beta = None;
        let mut rho = None;
        let mut mu = None;
        let mut shore = None;
        let mut x = None;
        let mut w = None;
        let mut z = None;
        let mut cover = FractionalCutCover::new();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let l = raw.trim();
            if l.is_empty() || l.starts_with('#') {
                continue;
            }
            let (key, val) = l
                .split_once(':')
                .ok_or_else(|| Error::Parse { line, msg: "expected `key: value`".into() })?;
            let val = val.trim();
            let scalar = |v: &str| -> Result<f64> {
                let f = parse_floats(line, v)?;
                match f.as_slice() {
                    [a] => Ok(*a),
                    _ => Err(Error::Parse { line, msg: "expected one number".into() }),
                }
            };
            match key.trim() {
                "beta" => beta = Some(scalar(val)?),
                "rho" => rho = Some(scalar(val)?),
                "mu" => mu = Some(scalar(val)?),
                "shore" => shore = Some(parse_shore(line, val)?),
                "x" => x = Some(parse_floats(line, val)?),
                "w" => w = Some(parse_floats(line, val)?),
                "z" => z = Some(parse_floats(line, val)?),
                "cover" => {
                    let (vs, weight) = val
                        .rsplit_once(':')
                        .ok_or_else(|| Error::Parse { line, msg: "expected `cover: vertices : weight`".into() })?;
                    let weight = scalar(weight)?;
                    if !(weight >= 0.0) {
                        return Err(Error::Parse { line, msg: "cover weight must be nonnegative".into() });
                    }
                    cover.add(parse_shore(line, vs)?, weight);
                }
                other => return Err(Error::Parse { line, msg: format!("unknown key {other:?}") }),
            }
        }
        let missing = |name: &str| Error::Parse { line: text.lines().count().max(1), msg: format!("missing `{name}`") };
        Ok(Self {
            beta: beta.ok_or_else(|| missing("beta"))?,
            rho: rho.ok_or_else(|| missing("rho"))?,
            mu: mu.ok_or_else(|| missing("mu"))?,
            shore: shore.ok_or_else(|| missing("shore"))?,
            x: x.ok_or_else(|| missing("x"))?,
            cover,
            w,
            z,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ItemResult {
    pub pass: bool,
    pub detail: String,
}

impl ItemResult {
    fn new(pass: bool, detail: String) -> Self {
        Self { pass, detail }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    /// Items 1–4 in order.
    pub items: [ItemResult; 4],
    pub cover_check: CoverCheck,
}

impl VerifyReport {
    pub fn pass(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }
}

/// Checks the four certificate items using only `(G, w, z, cert)`.
/// Tolerances scale with `1 + max(‖w‖∞, ‖z‖∞, ρ, μ)`.
pub fn verify_certificate(g: &Graph, w: &EdgeWeights, z: &EdgeWeights, cert: &BetaCertificate, tol: f64) -> VerifyReport {
    let scale = 1.0 + w.norm_inf().max(z.norm_inf()).max(cert.rho.abs()).max(cert.mu.abs());
    let t = tol * scale;
    let beta = cert.beta;
    let wz = w.dot(z.values());
    let finite = cert.rho.is_finite() && cert.mu.is_finite() && cert.rho >= 0.0 && cert.mu >= 0.0;

    let both_zero = w.is_zero() && z.is_zero();
    let item1 = if !finite {
        ItemResult::new(false, "rho and mu must be finite and nonnegative".into())
    } else if w.is_zero() != z.is_zero() {
        ItemResult::new(false, "exactly one of w, z is zero".into())
    } else if both_zero != (cert.rho == 0.0 && cert.mu == 0.0) {
        ItemResult::new(false, "rho = mu = 0 must hold exactly when w = z = 0".into())
    } else {
        let d = (cert.rho * cert.mu - wz).abs();
        ItemResult::new(d <= t, format!("|rho*mu - <w,z>| = {d:e}"))
    };

    let shore_ok = cert.shore.span() <= g.n();
    let cut = if shore_ok { cut_weight(g, w.values(), &cert.shore) } else { f64::NAN };
    let item2 = ItemResult::new(
        shore_ok && cut >= beta * cert.rho - t,
        if shore_ok {
            format!("cut weight {cut} vs beta*rho {}", beta * cert.rho)
        } else {
            "shore names a vertex outside the graph".into()
        },
    );

    let cover_ok = cert.cover.iter().all(|(s, _)| s.span() <= g.n());
    let cover_check = check_cover(g, z, &cert.cover, t);
    let total = cert.cover.total_weight();
    let bound = if beta > 0.0 { cert.mu / beta } else { f64::INFINITY };
    let item3 = if !cover_ok {
        ItemResult::new(false, "cover names a vertex outside the graph".into())
    } else if !cover_check.feasible {
        let (i, j) = cover_check.worst_edge.unwrap_or((0, 0));
        ItemResult::new(false, format!("edge {i} {j} under-covered by {:e}", -cover_check.worst_slack))
    } else {
        ItemResult::new(total <= bound + t, format!("<1,y> = {total} vs mu/beta = {bound}"))
    };

    let item4 = if cert.x.len() != g.n() || !cert.x.iter().all(|v| v.is_finite()) {
        ItemResult::new(false, format!("x must have {} finite entries", g.n()))
    } else {
        let sx: f64 = cert.x.iter().sum();
        if sx > cert.rho + t {
            ItemResult::new(false, format!("<1,x> = {sx} exceeds rho = {}", cert.rho))
        } else {
            let mut m = laplacian(g, w).expect("weights match graph").scale(-0.25);
            for (i, xi) in cert.x.iter().enumerate() {
                m.add_to(i, i, *xi);
            }
            match ldlt_psd(&m, tol) {
                Ok(_) => ItemResult::new(true, format!("<1,x> = {sx}; Diag(x) - L(w)/4 is PSD")),
                Err(Error::NotPsd { value, .. }) => {
                    ItemResult::new(false, format!("Diag(x) - L(w)/4 not PSD (witness value {value:e})"))
                }
                Err(e) => ItemResult::new(false, format!("PSD check failed: {e}")),
            }
        }
    };

    VerifyReport { items: [item1, item2, item3, item4], cover_check }
}

/// SDP points witnessing approximate optimality of a weight pair.
#[derive(Debug, Clone)]
pub struct Witnesses {
    pub eps: f64,
    pub sigma: f64,
    pub rho_bar: f64,
    pub x: Vec<f64>,
    pub mu_bar: f64,
    /// `diag Y = μ̄1`.
    pub y: SymMatrix,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessCheck {
    /// `Diag(x) − ¼L(w) ⪰ −tol`.
    pub dual_psd: bool,
    /// `ρ̄ ≥ (1−ε)⟨1,x⟩ + (ε/2)⟨1,w⟩ − tol`.
    pub dual_budget: bool,
    /// `Y − εμ̄I ⪰ −tol`.
    pub primal_psd: bool,
    /// `diag Y = μ̄1` within tol.
    pub primal_diag: bool,
    /// `¼L*(Y) ≥ z − tol`.
    pub primal_cover: bool,
    /// `⟨w, z⟩ ≥ (1−σ)ρ̄μ̄ − tol`.
    pub product: bool,
}

impl WitnessCheck {
    pub fn all(&self) -> bool {
        self.dual_psd && self.dual_budget && self.primal_psd && self.primal_diag && self.primal_cover && self.product
    }
}

impl Witnesses {
    pub fn check(&self, g: &Graph, w: &EdgeWeights, z: &EdgeWeights, tol: f64) -> Result<WitnessCheck> {
        let n = g.n();
        if self.x.len() != n || self.y.n() != n {
            return Err(Error::DimensionMismatch { expected: n, got: self.x.len() });
        }
        let mut d = laplacian(g, w)?.scale(-0.25);
        for (i, xi) in self.x.iter().enumerate() {
            d.add_to(i, i, *xi);
        }
        let mut p = self.y.clone();
        for i in 0..n {
            p.add_to(i, i, -self.eps * self.mu_bar);
        }
        let lz = laplacian_adjoint(g, &self.y)?;
        let sx: f64 = self.x.iter().sum();
        Ok(WitnessCheck {
            dual_psd: ldlt_psd(&d, tol).is_ok(),
            dual_budget: self.rho_bar >= (1.0 - self.eps) * sx + 0.5 * self.eps * w.norm_1() - tol,
            primal_psd: ldlt_psd(&p, tol).is_ok(),
            primal_diag: self.y.diag().iter().all(|v| (v - self.mu_bar).abs() <= tol),
            primal_cover: lz.iter().zip(z.values()).all(|(a, b)| 0.25 * a >= b - tol),
            product: w.dot(z.values()) >= (1.0 - self.sigma) * self.rho_bar * self.mu_bar - tol,
        })
    }
}

/// Parameters of certificate sampling for a target factor `β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Alg2Constants {
    pub beta: f64,
    /// `1 − β/α_GW`.
    pub tau: f64,
    /// `2τ/3`.
    pub sigma: f64,
    /// `τ/(3(3 − 2τ))`.
    pub eps: f64,
    /// `2τ/(9 − 7τ)`.
    pub gamma: f64,
    /// `2187π / (2 α_GW² τ³)`.
    pub c: f64,
}

impl Alg2Constants {
    pub fn new(beta: f64) -> Result<Self> {
        let alpha = alpha_gw().value;
        if !(beta > 0.0 && beta < alpha) {
            return Err(Error::InvalidParameter(format!("beta must lie in (0, {alpha:.6}), got {beta}")));
        }
        let tau = 1.0 - beta / alpha;
        Ok(Self {
            beta,
            tau,
            sigma: 2.0 * tau / 3.0,
            eps: tau / (3.0 * (3.0 - 2.0 * tau)),
            gamma: 2.0 * tau / (9.0 - 7.0 * tau),
            c: 2187.0 * std::f64::consts::PI / (2.0 * alpha * alpha * tau.powi(3)),
        })
    }

    /// `T(n) = ⌈C ln n⌉`, at least 1.
    pub fn samples(&self, n: usize) -> usize {
        sample_count(self.c, n)
    }
}

/// Output of [`certify`]: the certificate plus whether its sampled cover
/// actually covers `z` (the only randomized failure mode checked here).
#[derive(Debug, Clone)]
pub struct Certified {
    pub certificate: BetaCertificate,
    pub cover_check: CoverCheck,
    pub samples: usize,
}

pub fn certify(
    g: &Graph,
    w: &EdgeWeights,
    z: &EdgeWeights,
    witnesses: &Witnesses,
    beta: f64,
    rng: &RngStream,
) -> Result<Certified> {
    certify_with(Execution::default(), g, w, z, witnesses, beta, rng)
}

pub fn certify_with(
    exec: Execution,
    g: &Graph,
    w: &EdgeWeights,
    z: &EdgeWeights,
    witnesses: &Witnesses,
    beta: f64,
    rng: &RngStream,
) -> Result<Certified> {
    let k = Alg2Constants::new(beta)?;
    if !w.belongs_to(g) || !z.belongs_to(g) {
        return Err(Error::DimensionMismatch { expected: g.m(), got: w.len().min(z.len()) });
    }
    if w.is_zero() || z.is_zero() {
        return Err(Error::ZeroWeights);
    }
    let rho = witnesses.rho_bar / (1.0 - k.eps);
    let mu = w.dot(z.values()) / rho;
    let samples = k.samples(g.n());
    let sample = repeated_sampling_with(exec, &witnesses.y, witnesses.mu_bar, samples, k.gamma, rng)?;
    let mut best: Option<(f64, &Shore)> = None;
    for (s, _) in sample.cover.iter() {
        let c = cut_weight(g, w.values(), s);
        // cover keys iterate in lexicographic order, so `>` keeps the first maximizer
        if best.is_none_or(|(b, _)| c > b) {
            best = Some((c, s));
        }
    }
    let shore = best.map(|(_, s)| s.clone()).unwrap_or_default();
    let cover_check = check_cover(g, z, &sample.cover, 1e-9 * (1.0 + z.norm_inf()));
    let certificate = BetaCertificate {
        beta,
        rho,
        mu,
        shore,
        cover: sample.cover,
        x: witnesses.x.clone(),
        w: None,
        z: None,
    };
    Ok(Certified { certificate, cover_check, samples })
}

/// From weights `w`: builds demands `z` and a β-certificate for `(w, z)`.
pub fn approx_mc_fcc(g: &Graph, w: &EdgeWeights, beta: f64, rng: &RngStream) -> Result<(EdgeWeights, Certified)> {
    approx_mc_fcc_with(Execution::default(), g, w, beta, rng)
}

pub fn approx_mc_fcc_with(
    exec: Execution,
    g: &Graph,
    w: &EdgeWeights,
    beta: f64,
    rng: &RngStream,
) -> Result<(EdgeWeights, Certified)> {
    let k = Alg2Constants::new(beta)?;
    if w.is_zero() {
        return Err(Error::ZeroWeights);
    }
    let sol = solve_gw(g, w, 0.0, k.sigma)?;
    let n = g.n();
    let mut y = sol.y.scale(1.0 - k.eps);
    for i in 0..n {
        y.set(i, i, 1.0);
    }
    let lz = laplacian_adjoint(g, &y)?;
    let z = EdgeWeights::from_clamped(g, lz.iter().map(|v| 0.25 * v).collect(), 1e-12)?;
    let rho_bar = (1.0 - k.eps) * sol.x.iter().sum::<f64>() + 0.5 * k.eps * w.norm_1();
    let witnesses = Witnesses { eps: k.eps, sigma: k.sigma, rho_bar, x: sol.x, mu_bar: 1.0, y };
    let mut out = certify_with(exec, g, w, &z, &witnesses, beta, rng)?;
    out.certificate.z = Some(z.values().to_vec());
    Ok((z, out))
}

/// From demands `z`: builds weights `w` and a β-certificate for `(w, z)`.
pub fn approx_fcc_mc(g: &Graph, z: &EdgeWeights, beta: f64, rng: &RngStream) -> Result<(EdgeWeights, Certified)> {
    approx_fcc_mc_with(Execution::default(), g, z, beta, rng)
}

pub fn approx_fcc_mc_with(
    exec: Execution,
    g: &Graph,
    z: &EdgeWeights,
    beta: f64,
    rng: &RngStream,
) -> Result<(EdgeWeights, Certified)> {
    let k = Alg2Constants::new(beta)?;
    if z.is_zero() {
        return Err(Error::ZeroWeights);
    }
    let sol = solve_gw_polar(g, z, k.eps, k.sigma)?;
    let w = sol.w.clone();
    if w.is_zero() {
        return Err(Error::NumericalBreakdown { reason: "solver returned zero dual weights".into(), best: None });
    }
    let witnesses = Witnesses { eps: k.eps, sigma: k.sigma, rho_bar: 1.0, x: sol.x, mu_bar: sol.mu, y: sol.y };
    let mut out = certify_with(exec, g, &w, z, &witnesses, beta, rng)?;
    out.certificate.w = Some(w.values().to_vec());
    Ok((w, out))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairingCheck {
    pub holds: bool,
    pub mc: f64,
    pub fcc: f64,
    /// Feasible `(ρ, μ)` when `holds`.
    pub rho: f64,
    pub mu: f64,
}

/// Decides with exact oracles whether `(w, z)` is a β-pairing: some
/// `ρ, μ ≥ 0` with `βρ ≤ mc(w) ≤ ρ`, `μ ≤ fcc(z) ≤ μ/β`, `ρμ = ⟨w, z⟩`, and
/// `ρ = μ = 0` exactly when `w = z = 0`.
pub fn check_beta_pairing(g: &Graph, w: &EdgeWeights, z: &EdgeWeights, beta: f64) -> Result<PairingCheck> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::InvalidParameter(format!("beta must lie in (0, 1], got {beta}")));
    }
    let mc = mc_exact(g, w)?.value;
    let fcc = fcc_exact(g, z)?.value;
    let p = w.dot(z.values());
    let tol = 1e-9 * (1.0 + mc * fcc);
    let (holds, rho, mu) = match (w.is_zero(), z.is_zero()) {
        (true, true) => (true, 0.0, 0.0),
        (true, false) => (true, 0.0, fcc),
        (false, true) => (true, mc, 0.0),
        // ρ ∈ [mc, mc/β], μ ∈ [β·fcc, fcc] and ⟨w,z⟩ ≤ mc·fcc, so ρ = mc works
        // whenever any choice does.
        (false, false) => (p > 0.0 && p >= beta * mc * fcc - tol, mc, p / mc),
    };
    Ok(PairingCheck { holds, mc, fcc, rho, mu })
}
