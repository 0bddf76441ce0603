//! The four Goemans–Williamson SDP families cast as [`ConicProgram`]s.
//!
//! Gauge side (`GW_POLAR`, `GW_EPS_POLAR`), with `z̄ = z/‖z‖∞`:
//!
//! ```text
//! min  N μ   s.t.  Y − εμI ⪰ 0,  ¼L*(Y) ≥ z̄,  μ1 − diag Y = 0,  μ ≥ 0
//! ```
//!
//! whose dual is `max ⟨z̄, w⟩` s.t. `S + ¼L(w) − Diag(x) = 0`, `S ⪰ 0`,
//! `w ≥ 0`, `⟨1, x⟩ − ε tr S ≤ N`.
//!
//! Value side (`GW`, `GW_EPS`), with `w̄ = w/‖w‖∞`:
//!
//! ```text
//! min  N ρ   s.t.  Diag(x) − ¼L(w̄) ⪰ 0,  ρ − (1−ε)⟨1,x⟩ − (ε/2)⟨1,w̄⟩ ≥ 0
//! ```
//!
//! whose dual is `max ⟨¼L(w̄), Y⟩ + (ε/2)θ‖w̄‖₁` s.t. `diag Y = (1−ε)θ1`,
//! `0 ≤ θ ≤ N`, `Y ⪰ 0`; the elliptope point is `Y/θ + εI`.

use nalgebra::{DMatrix, DVector};

use super::{ipm_solve_with, smat, svec, svec_index, tri, ConeDims, ConicProgram, IpmOptions, PrimalDualPoint, SolveReport};
use crate::error::{Error, Result};
use crate::graph::{laplacian_of, EdgeWeights, Graph};
use crate::linalg::{extreme_eigs, SymMatrix};

/// Smallest relative gap reduction requested from the solver. The
/// theoretical `(σ/8)^√N` underflows what double precision can resolve.
pub const DELTA_FLOOR: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    Gw,
    GwPolar,
    GwEps,
    GwEpsPolar,
}

impl ProblemKind {
    pub fn is_polar(self) -> bool {
        matches!(self, ProblemKind::GwPolar | ProblemKind::GwEpsPolar)
    }

    fn effective_eps(self, eps: f64) -> f64 {
        match self {
            ProblemKind::Gw | ProblemKind::GwPolar => 0.0,
            _ => eps,
        }
    }
}

fn check_inputs(kind: ProblemKind, g: &Graph, v: &EdgeWeights, eps: f64) -> Result<f64> {
    if !v.belongs_to(g) {
        return Err(Error::DimensionMismatch { expected: g.m(), got: v.len() });
    }
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::InvalidParameter(format!("eps must lie in [0, 1), got {eps}")));
    }
    if g.n() == 0 {
        return Err(Error::InvalidGraph("graph has no vertices".into()));
    }
    let scale = v.norm_inf();
    if scale == 0.0 {
        if kind.is_polar() {
            return Err(Error::ZeroWeights);
        }
        return Ok(1.0);
    }
    Ok(scale)
}

/// Builds the scaled conic program for `kind`. For polar kinds `v` is the
/// demand vector `z`, otherwise the weight vector `w`.
pub fn build_problem(kind: ProblemKind, g: &Graph, v: &EdgeWeights, eps: f64) -> Result<ConicProgram> {
    let scale = check_inputs(kind, g, v, eps)?;
    let eps = kind.effective_eps(eps);
    let normalized: Vec<f64> = v.values().iter().map(|x| x / scale).collect();
    if kind.is_polar() {
        polar_program(g, &normalized, eps)
    } else {
        value_program(g, &normalized, eps)
    }
}

fn polar_program(g: &Graph, z: &[f64], eps: f64) -> Result<ConicProgram> {
    let n = g.n();
    let m = g.m();
    let t = tri(n);
    let k = ConeDims::new(0, 1, t);
    let l = ConeDims::new(n, m, n);
    let big_n = (n + m + 1) as f64;
    let mut a = DMatrix::zeros(l.dim(), k.dim());
    let lp = t;
    let eq = t + m;
    for i in 0..n {
        a[(svec_index(i, i), 0)] = -eps;
        a[(eq + i, 0)] = 1.0;
    }
    let off = -std::f64::consts::SQRT_2 / 4.0;
    for kk in 0..n {
        for ll in 0..=kk {
            let col = 1 + svec_index(kk, ll);
            a[(svec_index(kk, ll), col)] = 1.0;
            if kk == ll {
                a[(eq + kk, col)] = -1.0;
            }
        }
    }
    for (e, &(i, j)) in g.edges().iter().enumerate() {
        a[(lp + e, 1 + svec_index(i, i))] = 0.25;
        a[(lp + e, 1 + svec_index(j, j))] = 0.25;
        a[(lp + e, 1 + svec_index(i, j))] = off;
    }
    let mut b = DVector::zeros(l.dim());
    for (e, &ze) in z.iter().enumerate() {
        b[lp + e] = ze;
    }
    let mut c = DVector::zeros(k.dim());
    c[0] = big_n;
    ConicProgram::new(k, l, a, b, c)
}

fn value_program(g: &Graph, w: &[f64], eps: f64) -> Result<ConicProgram> {
    let n = g.n();
    let t = tri(n);
    let k = ConeDims::new(0, 1, n);
    let l = ConeDims::new(n, 1, 0);
    let big_n = (n + 2) as f64;
    let mut a = DMatrix::zeros(l.dim(), k.dim());
    a[(t, 0)] = 1.0;
    for i in 0..n {
        a[(svec_index(i, i), 1 + i)] = 1.0;
        a[(t, 1 + i)] = -(1.0 - eps);
    }
    let lq = laplacian_of(g, w)?.scale(0.25);
    let mut b = DVector::zeros(l.dim());
    b.rows_mut(0, t).copy_from_slice(&svec(&lq));
    b[t] = 0.5 * eps * w.iter().sum::<f64>();
    let mut c = DVector::zeros(k.dim());
    c[0] = big_n;
    ConicProgram::new(k, l, a, b, c)
}

/// Strictly feasible starting pair for [`build_problem`]'s program.
pub fn slater_points(kind: ProblemKind, g: &Graph, v: &EdgeWeights, eps: f64) -> Result<PrimalDualPoint> {
    let p = build_problem(kind, g, v, eps)?;
    let eps = kind.effective_eps(eps);
    let n = g.n();
    let t = tri(n);
    let (x, y) = if kind.is_polar() {
        let mut x = DVector::zeros(p.k.dim());
        x[0] = 4.0;
        x.rows_mut(1, t).copy_from_slice(&svec(&SymMatrix::scaled_identity(n, 4.0)));
        let deg = g.degrees();
        let mut s = g.adjacency().scale(0.25);
        for (i, d) in deg.iter().enumerate() {
            s.add_to(i, i, 1.0 + 0.25 * *d as f64);
        }
        let mut y = DVector::zeros(p.l.dim());
        y.rows_mut(0, t).copy_from_slice(&svec(&s));
        for e in 0..g.m() {
            y[t + e] = 1.0;
        }
        for (i, d) in deg.iter().enumerate() {
            y[t + g.m() + i] = 0.5 * *d as f64 + 1.0;
        }
        (x, y)
    } else {
        let lq = smat(&p.b.as_slice()[..t], n);
        let (_, lmax) = extreme_eigs(&lq)?;
        let xi = lmax.max(0.0) + 1.0;
        let mut x = DVector::zeros(p.k.dim());
        x[0] = n as f64 * xi + 1.0;
        for i in 0..n {
            x[1 + i] = xi;
        }
        let mut y = DVector::zeros(p.l.dim());
        y.rows_mut(0, t).copy_from_slice(&svec(&SymMatrix::scaled_identity(n, 1.0 - eps)));
        y[t] = 1.0;
        (x, y)
    };
    Ok(p.point(x, y))
}

/// Near-optimal gauge-side solution: `(μ, Y)` primal, `(w, x)` dual.
#[derive(Debug, Clone)]
pub struct PolarSolution {
    pub eps: f64,
    pub mu: f64,
    /// `diag Y = μ1`, `Y ⪰ εμI`, `¼L*(Y) ≥ z`.
    pub y: SymMatrix,
    /// `¼L(w) ⪯ Diag(x)`, `(1−ε)⟨1,x⟩ + (ε/2)⟨1,w⟩ ≤ 1`.
    pub w: EdgeWeights,
    pub x: Vec<f64>,
    /// `⟨z, w⟩`, a lower bound on the optimum.
    pub lower_bound: f64,
    pub report: SolveReport,
}

/// Near-optimal value-side solution: `(ρ, x)` with
/// `ρ ≥ (1−ε)⟨1,x⟩ + (ε/2)‖w‖₁`, `Diag(x) ⪰ ¼L(w)`, and an elliptope point
/// `Y ⪰ εI`, `diag Y = 1`.
#[derive(Debug, Clone)]
pub struct GwSolution {
    pub eps: f64,
    pub rho: f64,
    pub x: Vec<f64>,
    pub y: SymMatrix,
    /// `⟨¼L(w), Y⟩`, a lower bound on the optimum.
    pub lower_bound: f64,
    pub report: SolveReport,
}

#[derive(Debug, Clone)]
pub enum NearOptimal {
    Polar(PolarSolution),
    Gw(GwSolution),
}

/// Solves `kind` to additive accuracy `σ‖v‖∞`.
pub fn solve_near_optimal(kind: ProblemKind, g: &Graph, v: &EdgeWeights, eps: f64, sigma: f64) -> Result<NearOptimal> {
    if !(sigma > 0.0 && sigma < 2.0 / 3.0) {
        return Err(Error::InvalidParameter(format!("sigma must lie in (0, 2/3), got {sigma}")));
    }
    let scale = check_inputs(kind, g, v, eps)?;
    let p = build_problem(kind, g, v, eps)?;
    let start = slater_points(kind, g, v, eps)?;
    let big_n = p.barrier_degree() as f64;
    let delta = (sigma / 8.0).powf(big_n.sqrt()).max(DELTA_FLOOR);
    let opts = IpmOptions {
        max_iterations: Some((24.0 * big_n * (8.0 / sigma).ln()).ceil() as usize),
        ..IpmOptions::default()
    };
    let report = match ipm_solve_with(&p, &start, delta, &opts) {
        Ok(r) => r,
        // Accept a stalled iterate only if it already meets the additive target.
        Err(Error::MaxIterations(best)) if best.final_gap <= sigma * big_n => *best,
        Err(Error::NumericalBreakdown { best: Some(best), .. }) if best.final_gap <= sigma * big_n => *best,
        Err(e) => return Err(e),
    };
    let eps = kind.effective_eps(eps);
    let n = g.n();
    let t = tri(n);
    let pt = &report.point;
    if kind.is_polar() {
        let mu = scale * pt.x[0];
        let mut y = smat(&pt.x.as_slice()[1..1 + t], n).scale(scale);
        for i in 0..n {
            y.set(i, i, mu);
        }
        let w_vals: Vec<f64> = pt.y.as_slice()[t..t + g.m()].iter().map(|w| (w / big_n).max(0.0)).collect();
        let x: Vec<f64> = pt.y.as_slice()[t + g.m()..].iter().map(|x| x / big_n).collect();
        let w = EdgeWeights::new(g, w_vals)?;
        let lower_bound = w.dot(v.values());
        Ok(NearOptimal::Polar(PolarSolution { eps, mu, y, w, x, lower_bound, report }))
    } else {
        let rho = scale * pt.x[0];
        let x: Vec<f64> = pt.x.as_slice()[1..].iter().map(|x| scale * x).collect();
        let theta = pt.y[t];
        let mut y = smat(&pt.y.as_slice()[..t], n).scale(1.0 / theta);
        // off-diagonals of Y/θ + εI; diag(Y/θ) = 1 − ε
        for i in 0..n {
            y.set(i, i, 1.0);
        }
        let lower_bound = laplacian_of(g, v.values())?.scale(0.25).inner(&y);
        Ok(NearOptimal::Gw(GwSolution { eps, rho, x, y, lower_bound, report }))
    }
}

/// Gauge-side shorthand: `GW^polar` (`eps = 0`) or `GW_ε^polar`.
pub fn solve_gw_polar(g: &Graph, z: &EdgeWeights, eps: f64, sigma: f64) -> Result<PolarSolution> {
    let kind = if eps == 0.0 { ProblemKind::GwPolar } else { ProblemKind::GwEpsPolar };
    match solve_near_optimal(kind, g, z, eps, sigma)? {
        NearOptimal::Polar(s) => Ok(s),
        NearOptimal::Gw(_) => unreachable!(),
    }
}

/// Value-side shorthand: `GW` (`eps = 0`) or `GW_ε`.
pub fn solve_gw(g: &Graph, w: &EdgeWeights, eps: f64, sigma: f64) -> Result<GwSolution> {
    let kind = if eps == 0.0 { ProblemKind::Gw } else { ProblemKind::GwEps };
    match solve_near_optimal(kind, g, w, eps, sigma)? {
        NearOptimal::Gw(s) => Ok(s),
        NearOptimal::Polar(_) => unreachable!(),
    }
}
