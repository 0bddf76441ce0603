//! Conic programs over `PSD ⊕ R₊ ⊕ R` and a feasible-start primal-dual
//! path-following interior-point method.
//!
//! Primal: minimize `⟨c, x⟩` s.t. `A(x) − b ∈ L*`, `x ∈ K`.
//! Dual: maximize `⟨b, y⟩` s.t. `y ∈ L`, `c − A*(y) ∈ K*`.
//!
//! Both `K = PSD(n1) ⊕ R₊^{n2} ⊕ R^{n3}` and `L = PSD(m1) ⊕ R₊^{m2} ⊕ R^{m3}`.
//! Matrix blocks are vectorized with `svec` (off-diagonals scaled by √2) so
//! every inner product is a plain dot product and `A*` is `Aᵀ`.

mod families;

pub use families::{
    build_problem, slater_points, solve_gw, solve_gw_polar, solve_near_optimal, GwSolution,
    NearOptimal, PolarSolution, ProblemKind, DELTA_FLOOR,
};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{log_det_pd, spectral_map, sym_eigen, SymMatrix};

const SQRT2: f64 = std::f64::consts::SQRT_2;

#[inline]
pub(crate) fn tri(n: usize) -> usize {
    n * (n + 1) / 2
}

#[inline]
pub(crate) fn svec_index(i: usize, j: usize) -> usize {
    let (r, c) = if i >= j { (i, j) } else { (j, i) };
    r * (r + 1) / 2 + c
}

#[inline]
fn svec_scale(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        SQRT2
    }
}

pub fn svec(m: &SymMatrix) -> Vec<f64> {
    let n = m.n();
    let mut v = Vec::with_capacity(tri(n));
    for i in 0..n {
        for j in 0..=i {
            v.push(svec_scale(i, j) * m.get(i, j));
        }
    }
    v
}

pub fn smat(v: &[f64], n: usize) -> SymMatrix {
    assert_eq!(v.len(), tri(n));
    SymMatrix::from_fn(n, |i, j| v[svec_index(i, j)] / svec_scale(i, j))
}

/// Orders of the three blocks of a cone `PSD(psd) ⊕ R₊^{nonneg} ⊕ R^{free}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConeDims {
    pub psd: usize,
    pub nonneg: usize,
    pub free: usize,
}

impl ConeDims {
    pub fn new(psd: usize, nonneg: usize, free: usize) -> Self {
        Self { psd, nonneg, free }
    }

    /// Length of the vectorized space.
    pub fn dim(&self) -> usize {
        tri(self.psd) + self.nonneg + self.free
    }

    /// Coordinates belonging to PSD and nonnegative blocks.
    pub fn cone_dim(&self) -> usize {
        tri(self.psd) + self.nonneg
    }

    /// Barrier degree: `psd + nonneg`.
    pub fn degree(&self) -> usize {
        self.psd + self.nonneg
    }

    fn psd_block(&self, v: &[f64]) -> SymMatrix {
        smat(&v[..tri(self.psd)], self.psd)
    }

    fn nonneg_block<'a>(&self, v: &'a [f64]) -> &'a [f64] {
        &v[tri(self.psd)..self.cone_dim()]
    }

    fn free_block<'a>(&self, v: &'a [f64]) -> &'a [f64] {
        &v[self.cone_dim()..]
    }
}

#[derive(Debug, Clone)]
pub struct ConicProgram {
    /// Variable cone `K`.
    pub k: ConeDims,
    /// Constraint cone `L`.
    pub l: ConeDims,
    /// `L.dim() × K.dim()`.
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
    pub c: DVector<f64>,
}

impl ConicProgram {
    pub fn new(k: ConeDims, l: ConeDims, a: DMatrix<f64>, b: DVector<f64>, c: DVector<f64>) -> Result<Self> {
        if a.nrows() != l.dim() || b.len() != l.dim() {
            return Err(Error::DimensionMismatch {
                expected: l.dim(),
                got: if a.nrows() != l.dim() { a.nrows() } else { b.len() },
            });
        }
        if a.ncols() != k.dim() || c.len() != k.dim() {
            return Err(Error::DimensionMismatch {
                expected: k.dim(),
                got: if a.ncols() != k.dim() { a.ncols() } else { c.len() },
            });
        }
        let p = Self { k, l, a, b, c };
        if p.barrier_degree() == 0 {
            return Err(Error::InvalidParameter("program has no conic blocks (N = 0)".into()));
        }
        Ok(p)
    }

    /// `N = n1 + n2 + m1 + m2`.
    pub fn barrier_degree(&self) -> usize {
        self.k.degree() + self.l.degree()
    }

    pub fn point(&self, x: DVector<f64>, y: DVector<f64>) -> PrimalDualPoint {
        let u = &self.a * &x - &self.b;
        let v = &self.c - self.a.tr_mul(&y);
        PrimalDualPoint { x, y, u, v }
    }

    fn equality_residuals(&self, pt: &PrimalDualPoint) -> (f64, f64) {
        let p = self.l.free_block(pt.u.as_slice()).iter().fold(0.0_f64, |m, r| m.max(r.abs()));
        let d = self.k.free_block(pt.v.as_slice()).iter().fold(0.0_f64, |m, r| m.max(r.abs()));
        let bs = 1.0 + self.b.amax();
        let cs = 1.0 + self.c.amax();
        (p / bs, d / cs)
    }
}

/// Primal `x`, dual `y`, and their slacks `u = A(x) − b`, `v = c − A*(y)`.
#[derive(Debug, Clone)]
pub struct PrimalDualPoint {
    pub x: DVector<f64>,
    pub y: DVector<f64>,
    pub u: DVector<f64>,
    pub v: DVector<f64>,
}

impl PrimalDualPoint {
    pub fn primal_objective(&self, p: &ConicProgram) -> f64 {
        p.c.dot(&self.x)
    }

    pub fn dual_objective(&self, p: &ConicProgram) -> f64 {
        p.b.dot(&self.y)
    }

    /// `⟨x ⊕ u, v ⊕ y⟩` over the conic blocks.
    pub fn gap(&self, p: &ConicProgram) -> f64 {
        let kc = p.k.cone_dim();
        let lc = p.l.cone_dim();
        let a: f64 = (0..kc).map(|i| self.x[i] * self.v[i]).sum();
        let b: f64 = (0..lc).map(|i| self.u[i] * self.y[i]).sum();
        a + b
    }

    /// Smallest eigenvalue / entry over all cone blocks of `x, u, v, y`.
    pub fn min_cone_value(&self, p: &ConicProgram) -> f64 {
        let mut m = f64::INFINITY;
        for (dims, vecs) in [(p.k, [&self.x, &self.v]), (p.l, [&self.u, &self.y])] {
            for v in vecs {
                if dims.psd > 0 {
                    let (vals, _) = sym_eigen(&dims.psd_block(v.as_slice())).expect("finite iterate");
                    m = m.min(vals[0]);
                }
                for &e in dims.nonneg_block(v.as_slice()) {
                    m = m.min(e);
                }
            }
        }
        m
    }
}

/// Potential `N ln(gap/N) − ln(det X1 det V1 det Y1 det U1 Πx2 Πv2 Πy2 Πu2)`.
pub fn psi(p: &ConicProgram, pt: &PrimalDualPoint) -> Result<f64> {
    let n = p.barrier_degree() as f64;
    let gap = pt.gap(p);
    if !(gap > 0.0) {
        return Err(Error::NotInterior(format!("duality gap {gap:e} is not positive")));
    }
    let mut log_det = 0.0;
    for (dims, vecs, names) in [
        (p.k, [&pt.x, &pt.v], ["X1", "V1"]),
        (p.l, [&pt.u, &pt.y], ["U1", "Y1"]),
    ] {
        for (v, name) in vecs.iter().zip(names) {
            log_det += log_det_pd(&dims.psd_block(v.as_slice()))
                .ok_or_else(|| Error::NotInterior(format!("{name} is not positive definite")))?;
            for &e in dims.nonneg_block(v.as_slice()) {
                if !(e > 0.0) {
                    return Err(Error::NotInterior(format!("nonnegative block entry {e:e}")));
                }
                log_det += e.ln();
            }
        }
    }
    Ok(n * (gap / n).ln() - log_det)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    /// `gap ≤ δ · gap₀`.
    Converged,
    IterationLimit,
    Stalled,
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub point: PrimalDualPoint,
    pub status: SolveStatus,
    pub iterations: usize,
    pub initial_gap: f64,
    pub final_gap: f64,
    pub psi_start: f64,
    pub delta: f64,
    /// `24 √N ln(1/δ)`.
    pub iteration_bound: f64,
    /// Whether `ψ(start) ≤ √N ln(1/δ)` held.
    pub psi_precondition: bool,
    /// Gap after each iteration, starting with the initial gap.
    pub gap_history: Vec<f64>,
    /// Largest relative equality residual seen across all iterates.
    pub max_equality_residual: f64,
    /// Smallest cone eigenvalue/entry seen across all iterates.
    pub min_cone_value: f64,
}

impl SolveReport {
    /// `key: value` lines for command-line output.
    pub fn to_key_values(&self) -> Vec<(String, String)> {
        vec![
            ("status".into(), format!("{:?}", self.status)),
            ("iterations".into(), self.iterations.to_string()),
            ("iteration_bound".into(), format!("{:.1}", self.iteration_bound)),
            ("initial_gap".into(), format!("{:e}", self.initial_gap)),
            ("final_gap".into(), format!("{:e}", self.final_gap)),
            ("psi_start".into(), format!("{}", self.psi_start)),
            ("psi_precondition".into(), self.psi_precondition.to_string()),
        ]
    }
}

#[derive(Debug, Clone)]
pub struct IpmOptions {
    /// Defaults to `max(⌈24 √N ln(1/δ)⌉, 1)`.
    pub max_iterations: Option<usize>,
    /// Fraction of the step to the cone boundary.
    pub step_fraction: f64,
    /// Tolerance for the strict-feasibility check of the starting point.
    pub start_tol: f64,
}

impl Default for IpmOptions {
    fn default() -> Self {
        Self {
            max_iterations: None,
            step_fraction: 0.95,
            start_tol: 1e-9,
        }
    }
}

pub fn ipm_solve(p: &ConicProgram, start: &PrimalDualPoint, delta: f64) -> Result<SolveReport> {
    ipm_solve_with(p, start, delta, &IpmOptions::default())
}

/// Runs the interior-point method from a strictly feasible `start` until the
/// gap drops to `δ` times its initial value.
pub fn ipm_solve_with(p: &ConicProgram, start: &PrimalDualPoint, delta: f64, opts: &IpmOptions) -> Result<SolveReport> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidParameter(format!("delta must lie in (0, 1], got {delta}")));
    }
    let start = p.point(start.x.clone(), start.y.clone());
    let (rp, rd) = p.equality_residuals(&start);
    if rp > opts.start_tol || rd > opts.start_tol {
        return Err(Error::NotInterior(format!(
            "start violates equality rows (primal {rp:e}, dual {rd:e})"
        )));
    }
    let psi_start = psi(p, &start)?;
    let n = p.barrier_degree() as f64;
    let bound = 24.0 * n.sqrt() * (1.0 / delta).ln();
    let max_iter = opts.max_iterations.unwrap_or((bound.ceil() as usize).max(1));
    let gap0 = start.gap(p);
    let target = delta * gap0;

    let mut report = SolveReport {
        min_cone_value: start.min_cone_value(p),
        point: start,
        status: SolveStatus::Converged,
        iterations: 0,
        initial_gap: gap0,
        final_gap: gap0,
        psi_start,
        delta,
        iteration_bound: bound,
        psi_precondition: psi_start <= n.sqrt() * (1.0 / delta).ln(),
        gap_history: vec![gap0],
        max_equality_residual: rp.max(rd),
    };
    if gap0 <= target {
        return Ok(report);
    }

    let mut ws = Workspace::new(p);
    while report.final_gap > target {
        if report.iterations >= max_iter {
            report.status = SolveStatus::IterationLimit;
            return Err(Error::MaxIterations(Box::new(report)));
        }
        let next = match ws.step(p, &report.point, opts.step_fraction) {
            Ok(pt) => pt,
            Err(reason) => {
                report.status = SolveStatus::Stalled;
                return Err(Error::NumericalBreakdown {
                    reason,
                    best: Some(Box::new(report)),
                });
            }
        };
        let gap = next.gap(p);
        let (rp, rd) = p.equality_residuals(&next);
        report.max_equality_residual = report.max_equality_residual.max(rp.max(rd));
        report.min_cone_value = report.min_cone_value.min(next.min_cone_value(p));
        report.iterations += 1;
        report.gap_history.push(gap);
        report.point = next;
        report.final_gap = gap;
    }
    Ok(report)
}

/// Cached index bookkeeping for Newton systems.
struct Workspace {
    /// Columns of `A` acting on conic variables (`X1`, `x2`).
    a_cone: DMatrix<f64>,
    /// Columns of `A` acting on free variables (`x3`).
    a_free: DMatrix<f64>,
}

/// NT scaling for one complementarity pair `(s, t)`: `W t W = s`.
enum Scaling {
    Psd { s: SymMatrix, t_inv: SymMatrix, h: DMatrix<f64> },
    Lp { s: Vec<f64>, t: Vec<f64> },
}

impl Scaling {
    fn psd(s: SymMatrix, t: SymMatrix) -> std::result::Result<Self, String> {
        if s.n() == 0 {
            return Ok(Scaling::Psd { s, t_inv: t, h: DMatrix::zeros(0, 0) });
        }
        let (sv, sq) = sym_eigen(&s).map_err(|e| e.to_string())?;
        if sv[0] <= 0.0 {
            return Err("iterate left the PSD cone".into());
        }
        let s_half = spectral_map(&sv, &sq, f64::sqrt);
        let s_half_d = s_half.to_dmatrix();
        let m = SymMatrix::from_dmatrix(&(&s_half_d * t.to_dmatrix() * &s_half_d));
        let (mv, mq) = sym_eigen(&m).map_err(|e| e.to_string())?;
        if mv[0] <= 0.0 {
            return Err("dual iterate left the PSD cone".into());
        }
        let m_inv_half = spectral_map(&mv, &mq, |l| 1.0 / l.sqrt()).to_dmatrix();
        let w = SymMatrix::from_dmatrix(&(&s_half_d * m_inv_half * &s_half_d));
        let (tv, tq) = sym_eigen(&t).map_err(|e| e.to_string())?;
        let t_inv = spectral_map(&tv, &tq, |l| 1.0 / l);
        Ok(Scaling::Psd { s, t_inv, h: skron(&w) })
    }

    /// Right-hand side `σμ t⁻¹ − s` in vectorized form.
    fn rhs(&self, sigma_mu: f64) -> Vec<f64> {
        match self {
            Scaling::Psd { s, t_inv, .. } => svec(&(&t_inv.scale(sigma_mu) - s)),
            Scaling::Lp { s, t } => s.iter().zip(t).map(|(s, t)| sigma_mu / t - s).collect(),
        }
    }
}

/// Matrix of `Δ ↦ W Δ W` in `svec` coordinates.
fn skron(w: &SymMatrix) -> DMatrix<f64> {
    let n = w.n();
    let t = tri(n);
    let mut h = DMatrix::zeros(t, t);
    for k in 0..n {
        for l in 0..=k {
            let col = svec_index(k, l);
            for i in 0..n {
                for j in 0..=i {
                    let v = if k == l {
                        w.get(i, k) * w.get(k, j)
                    } else {
                        (w.get(i, k) * w.get(l, j) + w.get(i, l) * w.get(k, j)) / SQRT2
                    };
                    h[(svec_index(i, j), col)] = svec_scale(i, j) * v;
                }
            }
        }
    }
    h
}

/// Largest `α` with `s + α ds` in the cone (`∞` if unbounded).
fn max_step_psd(s: &SymMatrix, ds: &SymMatrix) -> std::result::Result<f64, String> {
    if s.n() == 0 {
        return Ok(f64::INFINITY);
    }
    let chol = nalgebra::Cholesky::new(s.to_dmatrix()).ok_or("iterate not positive definite")?;
    let l = chol.l();
    let linv = l.clone().try_inverse().ok_or("singular Cholesky factor")?;
    let m = SymMatrix::from_dmatrix(&(&linv * ds.to_dmatrix() * linv.transpose()));
    let (vals, _) = sym_eigen(&m).map_err(|e| e.to_string())?;
    Ok(if vals[0] < 0.0 { -1.0 / vals[0] } else { f64::INFINITY })
}

fn max_step_lp(s: &[f64], ds: &[f64]) -> f64 {
    s.iter()
        .zip(ds)
        .filter(|(_, d)| **d < 0.0)
        .map(|(s, d)| -s / d)
        .fold(f64::INFINITY, f64::min)
}

impl Workspace {
    fn new(p: &ConicProgram) -> Self {
        let kc = p.k.cone_dim();
        Self {
            a_cone: p.a.columns(0, kc).into_owned(),
            a_free: p.a.columns(kc, p.k.free).into_owned(),
        }
    }

    fn scalings(p: &ConicProgram, pt: &PrimalDualPoint) -> std::result::Result<[(Scaling, Scaling); 2], String> {
        // (x-side pairs with v), (u-side pairs with y)
        let kx = (
            Scaling::psd(p.k.psd_block(pt.x.as_slice()), p.k.psd_block(pt.v.as_slice()))?,
            Scaling::Lp {
                s: p.k.nonneg_block(pt.x.as_slice()).to_vec(),
                t: p.k.nonneg_block(pt.v.as_slice()).to_vec(),
            },
        );
        let lu = (
            Scaling::psd(p.l.psd_block(pt.u.as_slice()), p.l.psd_block(pt.y.as_slice()))?,
            Scaling::Lp {
                s: p.l.nonneg_block(pt.u.as_slice()).to_vec(),
                t: p.l.nonneg_block(pt.y.as_slice()).to_vec(),
            },
        );
        Ok([kx, lu])
    }

    /// Block-diagonal scaling operator over a cone's conic coordinates.
    fn operator(dims: ConeDims, pair: &(Scaling, Scaling)) -> DMatrix<f64> {
        let t = tri(dims.psd);
        let mut h = DMatrix::zeros(dims.cone_dim(), dims.cone_dim());
        if let Scaling::Psd { h: hp, .. } = &pair.0 {
            h.view_mut((0, 0), (t, t)).copy_from(hp);
        }
        if let Scaling::Lp { s, t: tt } = &pair.1 {
            for (k, (s, tt)) in s.iter().zip(tt).enumerate() {
                h[(t + k, t + k)] = s / tt;
            }
        }
        h
    }

    fn rhs(pair: &(Scaling, Scaling), sigma_mu: f64) -> Vec<f64> {
        let mut r = pair.0.rhs(sigma_mu);
        r.extend(pair.1.rhs(sigma_mu));
        r
    }

    /// Solves the linearized system for centering parameter `σμ`. Returns
    /// `(Δx, Δy)`.
    fn direction(
        &self,
        p: &ConicProgram,
        pt: &PrimalDualPoint,
        hx: &DMatrix<f64>,
        hu: &DMatrix<f64>,
        pairs: &[(Scaling, Scaling); 2],
        sigma_mu: f64,
        lu: &nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    ) -> (DVector<f64>, DVector<f64>) {
        let kc = p.k.cone_dim();
        let lc = p.l.cone_dim();
        let ydim = p.l.dim();
        let rx = DVector::from_vec(Self::rhs(&pairs[0], sigma_mu));
        let ru = Self::rhs(&pairs[1], sigma_mu);

        let arx = &self.a_cone * &rx;
        let mut rhs = DVector::zeros(ydim + p.k.free);
        for i in 0..lc {
            rhs[i] = ru[i] - arx[i];
        }
        // equality rows: re-project onto b
        for i in lc..ydim {
            rhs[i] = -pt.u[i] - arx[i];
        }
        // free columns: re-project onto c
        for k in 0..p.k.free {
            rhs[ydim + k] = pt.v[kc + k];
        }
        let sol = lu.solve(&rhs).unwrap_or_else(|| DVector::zeros(ydim + p.k.free));
        let dy = sol.rows(0, ydim).into_owned();
        let dxf = sol.rows(ydim, p.k.free).into_owned();
        let dxc = rx + hx * self.a_cone.tr_mul(&dy);
        let mut dx = DVector::zeros(p.k.dim());
        dx.rows_mut(0, kc).copy_from(&dxc);
        dx.rows_mut(kc, p.k.free).copy_from(&dxf);
        let _ = hu;
        (dx, dy)
    }

    fn max_step(p: &ConicProgram, pt: &PrimalDualPoint, dx: &DVector<f64>, dy: &DVector<f64>) -> std::result::Result<f64, String> {
        let du = &p.a * dx;
        let dv = -p.a.tr_mul(dy);
        let mut alpha = f64::INFINITY;
        for (dims, pairs) in [(p.k, [(&pt.x, dx), (&pt.v, &dv)]), (p.l, [(&pt.u, &du), (&pt.y, dy)])] {
            for (s, ds) in pairs {
                if dims.psd > 0 {
                    alpha = alpha.min(max_step_psd(&dims.psd_block(s.as_slice()), &dims.psd_block(ds.as_slice()))?);
                }
                alpha = alpha.min(max_step_lp(dims.nonneg_block(s.as_slice()), dims.nonneg_block(ds.as_slice())));
            }
        }
        Ok(alpha)
    }

    fn step(&mut self, p: &ConicProgram, pt: &PrimalDualPoint, fraction: f64) -> std::result::Result<PrimalDualPoint, String> {
        let pairs = Self::scalings(p, pt)?;
        let hx = Self::operator(p.k, &pairs[0]);
        let hu = Self::operator(p.l, &pairs[1]);
        let ydim = p.l.dim();
        let lc = p.l.cone_dim();
        let nf = p.k.free;

        let mut kkt = DMatrix::zeros(ydim + nf, ydim + nf);
        let m = &self.a_cone * &hx * self.a_cone.transpose();
        kkt.view_mut((0, 0), (ydim, ydim)).copy_from(&m);
        {
            let mut blk = kkt.view_mut((0, 0), (lc, lc));
            blk += &hu;
        }
        kkt.view_mut((0, ydim), (ydim, nf)).copy_from(&self.a_free);
        kkt.view_mut((ydim, 0), (nf, ydim)).copy_from(&self.a_free.transpose());
        let lu = kkt.lu();
        if !lu.is_invertible() {
            return Err("singular Newton system".into());
        }

        let n = p.barrier_degree() as f64;
        let gap = pt.gap(p);
        let mu = gap / n;

        // predictor
        let (dx, dy) = self.direction(p, pt, &hx, &hu, &pairs, 0.0, &lu);
        if !dx.iter().chain(dy.iter()).all(|v| v.is_finite()) {
            return Err("non-finite Newton direction".into());
        }
        let a_aff = Self::max_step(p, pt, &dx, &dy)?.min(1.0);
        let sigma = (1.0 - a_aff).powi(3).clamp(0.0, 1.0);

        // corrector with centering
        let (dx, dy) = self.direction(p, pt, &hx, &hu, &pairs, sigma * mu, &lu);
        if !dx.iter().chain(dy.iter()).all(|v| v.is_finite()) {
            return Err("non-finite Newton direction".into());
        }
        let alpha = (fraction * Self::max_step(p, pt, &dx, &dy)?).min(1.0);
        if !(alpha > 1e-14) {
            return Err(format!("step length collapsed ({alpha:e})"));
        }
        let x = &pt.x + alpha * dx;
        let y = &pt.y + alpha * dy;
        Ok(p.point(x, y))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn svec_roundtrip_and_inner_product() {
        let a = SymMatrix::from_fn(3, |i, j| (i * 3 + j) as f64 - 2.5);
        let b = SymMatrix::from_fn(3, |i, j| 1.0 / (1 + i + j) as f64);
        let (va, vb) = (svec(&a), svec(&b));
        assert!(smat(&va, 3).max_abs_diff(&a) < 1e-15);
        let d: f64 = va.iter().zip(&vb).map(|(x, y)| x * y).sum();
        assert!((d - a.inner(&b)).abs() < 1e-12);
    }

    #[test]
    fn skron_matches_congruence() {
        let w = SymMatrix::from_fn(3, |i, j| if i == j { 2.0 + i as f64 } else { 0.3 * (i + j) as f64 });
        let d = SymMatrix::from_fn(3, |i, j| (i as f64) - 0.7 * j as f64);
        let h = skron(&w);
        let got = smat((&h * DVector::from_vec(svec(&d))).as_slice(), 3);
        let wd = w.to_dmatrix();
        let want = SymMatrix::from_dmatrix(&(&wd * d.to_dmatrix() * &wd));
        assert!(got.max_abs_diff(&want) < 1e-12);
    }

    /// minimize x s.t. x ≥ 1, x ≥ 0, as `K = R₊`, `L = R₊`.
    fn toy_lp() -> ConicProgram {
        ConicProgram::new(
            ConeDims::new(0, 1, 0),
            ConeDims::new(0, 1, 0),
            DMatrix::from_element(1, 1, 1.0),
            DVector::from_element(1, 1.0),
            DVector::from_element(1, 1.0),
        )
        .unwrap()
    }

    #[test]
    fn psi_toy_lp_formula() {
        let p = toy_lp();
        // x = 2 → u = 1; y = 0.5 → v = 0.5
        let pt = p.point(DVector::from_element(1, 2.0), DVector::from_element(1, 0.5));
        let gap = 2.0 * 0.5 + 1.0 * 0.5;
        assert!((pt.gap(&p) - gap).abs() < 1e-15);
        let want = 2.0 * (gap / 2.0f64).ln() - (2.0f64 * 0.5 * 1.0 * 0.5).ln();
        assert!((psi(&p, &pt).unwrap() - want).abs() < 1e-14);
    }

    #[test]
    fn psi_zero_at_perfect_center() {
        // x = 1, v = 1, u = 1, y = 1: minimize 2x s.t. x − 0 ≥ 1·... use b = 0
        let p = ConicProgram::new(
            ConeDims::new(0, 1, 0),
            ConeDims::new(0, 1, 0),
            DMatrix::from_element(1, 1, 1.0),
            DVector::from_element(1, 0.0),
            DVector::from_element(1, 2.0),
        )
        .unwrap();
        let pt = p.point(DVector::from_element(1, 1.0), DVector::from_element(1, 1.0));
        assert!((pt.gap(&p) - 2.0).abs() < 1e-15);
        assert!(psi(&p, &pt).unwrap().abs() < 1e-14);
    }

    #[test]
    fn psi_rejects_boundary_points() {
        let p = toy_lp();
        let pt = p.point(DVector::from_element(1, 1.0), DVector::from_element(1, 0.5));
        assert!(matches!(psi(&p, &pt), Err(Error::NotInterior(_))));
    }

    #[test]
    fn toy_lp_converges() {
        let p = toy_lp();
        let start = p.point(DVector::from_element(1, 2.0), DVector::from_element(1, 0.5));
        let r = ipm_solve(&p, &start, 1e-8).unwrap();
        assert_eq!(r.status, SolveStatus::Converged);
        assert!((r.point.x[0] - 1.0).abs() < 1e-7);
        assert!((r.point.y[0] - 1.0).abs() < 1e-7);
    }

    #[test]
    fn delta_one_returns_start() {
        let p = toy_lp();
        let start = p.point(DVector::from_element(1, 2.0), DVector::from_element(1, 0.5));
        let r = ipm_solve(&p, &start, 1.0).unwrap();
        assert_eq!(r.iterations, 0);
        assert_eq!(r.point.x, start.x);
    }

    #[test]
    fn rejects_bad_delta_and_infeasible_start() {
        let p = toy_lp();
        let start = p.point(DVector::from_element(1, 2.0), DVector::from_element(1, 0.5));
        assert!(ipm_solve(&p, &start, 0.0).is_err());
        assert!(ipm_solve(&p, &start, 1.5).is_err());
        let bad = p.point(DVector::from_element(1, 0.5), DVector::from_element(1, 0.5));
        assert!(ipm_solve(&p, &bad, 0.1).is_err());
    }

    #[test]
    fn dimension_checks() {
        let r = ConicProgram::new(
            ConeDims::new(0, 1, 0),
            ConeDims::new(0, 2, 0),
            DMatrix::from_element(1, 1, 1.0),
            DVector::from_element(1, 1.0),
            DVector::from_element(1, 1.0),
        );
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
        let r = ConicProgram::new(
            ConeDims::new(0, 0, 1),
            ConeDims::new(0, 0, 1),
            DMatrix::from_element(1, 1, 1.0),
            DVector::from_element(1, 1.0),
            DVector::from_element(1, 1.0),
        );
        assert!(r.is_err());
    }
}
