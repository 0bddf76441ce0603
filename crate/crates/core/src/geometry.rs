//! Hypersphere representations: vertex maps onto a sphere centred at the
//! origin, read through their Gram matrices.

use crate::error::{Error, Result};
use crate::graph::{EdgeWeights, Graph};
use crate::linalg::{psd_sqrt, SymMatrix};

/// `n` points with a common norm.
#[derive(Debug, Clone, PartialEq)]
pub struct HypersphereRepresentation {
    vectors: Vec<Vec<f64>>,
    radius: f64,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

impl HypersphereRepresentation {
    /// Rejects point sets whose norms differ by more than `1e-8(1 + r)`.
    pub fn new(vectors: Vec<Vec<f64>>) -> Result<Self> {
        let d = vectors.first().map_or(0, Vec::len);
        if vectors.iter().any(|v| v.len() != d) {
            return Err(Error::InvalidParameter("vectors must share one dimension".into()));
        }
        if vectors.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norms: Vec<f64> = vectors.iter().map(|v| norm(v)).collect();
        let radius = norms.iter().sum::<f64>() / norms.len().max(1) as f64;
        if let Some((i, r)) = norms.iter().enumerate().find(|(_, r)| (*r - radius).abs() > 1e-8 * (1.0 + radius)) {
            return Err(Error::InvalidParameter(format!(
                "vector {i} has norm {r}, expected common radius {radius}"
            )));
        }
        Ok(Self { vectors, radius })
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn n(&self) -> usize {
        self.vectors.len()
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            vectors: self.vectors.iter().map(|v| v.iter().map(|x| c * x).collect()).collect(),
            radius: c.abs() * self.radius,
        }
    }

    /// `¼ Σ_ij w_ij ‖u_i − u_j‖²`.
    pub fn stretch(&self, g: &Graph, w: &EdgeWeights) -> f64 {
        g.edges()
            .iter()
            .zip(w.values())
            .map(|(&(i, j), wk)| 0.25 * wk * dist2(&self.vectors[i], &self.vectors[j]))
            .sum()
    }
}

/// Gram matrix and squared radius.
pub fn gram_of(rep: &HypersphereRepresentation) -> (SymMatrix, f64) {
    let v = &rep.vectors;
    let y = SymMatrix::from_fn(rep.n(), |i, j| v[i].iter().zip(&v[j]).map(|(a, b)| a * b).sum());
    (y, rep.radius * rep.radius)
}

/// Rows of `Y^{1/2}`.
pub fn rep_from_gram(y: &SymMatrix, mu: f64) -> Result<HypersphereRepresentation> {
    let n = y.n();
    if let Some(i) = (0..n).find(|&i| (y.get(i, i) - mu).abs() > 1e-8 * (1.0 + mu.abs())) {
        return Err(Error::InvalidParameter(format!("diagonal entry {i} is {}, expected {mu}", y.get(i, i))));
    }
    let root = psd_sqrt(y)?;
    let vectors: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| root.get(i, j)).collect()).collect();
    Ok(HypersphereRepresentation { vectors, radius: mu.max(0.0).sqrt() })
}

/// Demand side of a max-cut representation.
#[derive(Debug, Clone)]
pub struct FccRepresentation {
    /// `z_ij = ¼‖u_i − u_j‖²`.
    pub z: EdgeWeights,
    /// Smallest `ρ` with `ρ·¼‖u_i − u_j‖² ≥ z_ij` on every edge.
    pub mu: f64,
    /// `√μ · u`.
    pub v: HypersphereRepresentation,
}

/// Maps a unit-radius representation that attains `gw_value` for `(G, w)`
/// to a fractional-cut-cover representation. Optimality is checked to
/// `10·tol` relative.
pub fn mc_rep_to_fcc_rep(
    g: &Graph,
    w: &EdgeWeights,
    u: &HypersphereRepresentation,
    gw_value: f64,
    tol: f64,
) -> Result<FccRepresentation> {
    if u.n() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), got: u.n() });
    }
    if (u.radius - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidParameter(format!("representation radius {} is not 1", u.radius)));
    }
    let s = u.stretch(g, w);
    if (s - gw_value).abs() > 10.0 * tol * (1.0 + gw_value.abs()) {
        return Err(Error::InvalidParameter(format!("representation value {s} is not the optimum {gw_value}")));
    }
    let d: Vec<f64> = g.edges().iter().map(|&(i, j)| 0.25 * dist2(&u.vectors[i], &u.vectors[j])).collect();
    let z = EdgeWeights::new(g, d.clone())?;
    // z equals the edge lengths, so every positive ratio is 1
    let mu: f64 = if d.iter().any(|&x| x > 0.0) { 1.0 } else { 0.0 };
    let v = u.scaled(mu.sqrt());
    Ok(FccRepresentation { z, mu, v })
}

#[derive(Debug, Clone)]
pub struct McRepresentation {
    /// `v / radius(v)`.
    pub u: HypersphereRepresentation,
    /// `¼ Σ w_ij ‖u_i − u_j‖²`; 1 for an optimal pair.
    pub stretch: f64,
}

/// Normalizes a fractional-cut-cover representation against the dual
/// weights `w` of the same solve.
pub fn fcc_rep_to_mc_rep(g: &Graph, z: &EdgeWeights, v: &HypersphereRepresentation, w: &EdgeWeights) -> Result<McRepresentation> {
    if v.n() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), got: v.n() });
    }
    if !z.belongs_to(g) || !w.belongs_to(g) {
        return Err(Error::DimensionMismatch { expected: g.m(), got: z.len().min(w.len()) });
    }
    if !(v.radius > 0.0) {
        return Err(Error::InvalidParameter("representation has radius 0".into()));
    }
    let u = v.scaled(1.0 / v.radius);
    let stretch = u.stretch(g, w);
    Ok(McRepresentation { u, stretch })
}

/// `(μ, Y) = (2(1 − 1/t), μ·Gram(f))` for a vector `t`-coloring `f`: unit
/// vectors with `(t − 1)⟨f_i, f_j⟩ ≤ −1` on edges.
pub fn coloring_embed(g: &Graph, f: &[Vec<f64>], t: f64) -> Result<(f64, SymMatrix)> {
    if !(t > 1.0) {
        return Err(Error::InvalidParameter(format!("t must exceed 1, got {t}")));
    }
    if f.len() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), got: f.len() });
    }
    if let Some(i) = (0..f.len()).find(|&i| (norm(&f[i]) - 1.0).abs() > 1e-9) {
        return Err(Error::InvalidParameter(format!("f({i}) is not a unit vector")));
    }
    let rep = HypersphereRepresentation::new(f.to_vec())?;
    let (gram, _) = gram_of(&rep);
    for &(i, j) in g.edges() {
        let value = (t - 1.0) * gram.get(i, j);
        if value > -1.0 + 1e-9 {
            return Err(Error::InvalidColoring { t, i, j, value });
        }
    }
    let mu = 2.0 * (1.0 - 1.0 / t);
    let y = gram.scale(mu);
    let lz = crate::graph::laplacian_adjoint(g, &y)?;
    debug_assert!(lz.iter().all(|v| 0.25 * v >= 1.0 - 1e-9));
    Ok((mu, y))
}

/// `χ_vec` from the polar value at unit demands: `μ = 2(1 − 1/χ_vec)`.
pub fn vector_chromatic_number(polar_value: f64) -> f64 {
    2.0 / (2.0 - polar_value)
}
