//! Dense symmetric linear algebra over the vertex set.
//!
//! [`SymMatrix`] stores the lower triangle only. PSD certification is a
//! square-root-free LDLᵀ without pivoting followed by a residual check;
//! eigenvalue work goes through `nalgebra`'s symmetric eigensolver.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Relative threshold below which a negative eigenvalue is clamped to zero
/// by [`psd_sqrt`].
pub const PSD_CLAMP_REL: f64 = 1e-6;

#[derive(Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

#[inline]
fn packed(i: usize, j: usize) -> usize {
    let (r, c) = if i >= j { (i, j) } else { (j, i) };
    r * (r + 1) / 2 + c
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * (n + 1) / 2],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scaled_identity(n, 1.0)
    }

    pub fn scaled_identity(n: usize, c: f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, c);
        }
        m
    }

    /// The all-ones matrix `J`.
    pub fn ones(n: usize) -> Self {
        Self {
            n,
            data: vec![1.0; n * (n + 1) / 2],
        }
    }

    pub fn from_diag(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    /// Builds a matrix from `f(i, j)` evaluated on the lower triangle.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            for j in 0..=i {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    /// Builds from full rows; fails unless the rows are square and symmetric
    /// to 1e-12 relative.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        for r in rows {
            if r.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: r.len(),
                });
            }
        }
        for i in 0..n {
            for j in 0..i {
                let (a, b) = (rows[i][j], rows[j][i]);
                if (a - b).abs() > 1e-12 * (1.0 + a.abs().max(b.abs())) {
                    return Err(Error::InvalidParameter(format!(
                        "matrix not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Self::from_fn(n, |i, j| rows[i][j]))
    }

    /// Symmetrizes `(M + Mᵀ)/2`.
    pub fn from_dmatrix(m: &DMatrix<f64>) -> Self {
        assert_eq!(m.nrows(), m.ncols());
        Self::from_fn(m.nrows(), |i, j| 0.5 * (m[(i, j)] + m[(j, i)]))
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[packed(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[packed(i, j)] = v;
    }

    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, v: f64) {
        self.data[packed(i, j)] += v;
    }

    /// Packed lower triangle, row-major.
    pub fn packed_data(&self) -> &[f64] {
        &self.data
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|v| c * v).collect(),
        }
    }

    /// Trace inner product `⟨A, B⟩ = tr(AᵀB)`.
    pub fn inner(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n);
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..i {
                s += 2.0 * self.get(i, j) * other.get(i, j);
            }
            s += self.get(i, i) * other.get(i, i);
        }
        s
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            for j in 0..i {
                let a = self.get(i, j);
                y[i] += a * x[j];
                y[j] += a * x[i];
            }
            y[i] += self.get(i, i) * x[i];
        }
        y
    }

    /// `xᵀ M x`.
    pub fn quad_form(&self, x: &[f64]) -> f64 {
        self.matvec(x).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n);
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(self.n, other.n, "SymMatrix dimension mismatch");
        Self {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        }
    }
}

impl fmt::Debug for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SymMatrix({}x{}) [", self.n, self.n)?;
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| format!("{:.6}", self.get(i, j))).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Add for &SymMatrix {
    type Output = SymMatrix;
    fn add(self, rhs: &SymMatrix) -> SymMatrix {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &SymMatrix {
    type Output = SymMatrix;
    fn sub(self, rhs: &SymMatrix) -> SymMatrix {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul<&SymMatrix> for f64 {
    type Output = SymMatrix;
    fn mul(self, rhs: &SymMatrix) -> SymMatrix {
        rhs.scale(self)
    }
}

/// `P M Pᵀ = L D Lᵀ` with `L` unit lower triangular and `P` the symmetric
/// pivoting permutation.
#[derive(Debug, Clone)]
pub struct LdltFactorization {
    /// Full `n × n` unit lower-triangular factor.
    pub l: DMatrix<f64>,
    pub d: Vec<f64>,
    /// Row `k` of the factor belongs to vertex `perm[k]` of `M`.
    pub perm: Vec<usize>,
    /// Absolute pivot tolerance that was applied (`tol · scale`).
    pub pivot_tol: f64,
    /// `‖Pᵀ L D Lᵀ P − M‖_max`.
    pub residual: f64,
}

impl LdltFactorization {
    pub fn reconstruct(&self) -> SymMatrix {
        let n = self.d.len();
        let mut out = SymMatrix::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                let v = (0..=j).map(|k| self.l[(i, k)] * self.d[k] * self.l[(j, k)]).sum();
                out.set(self.perm[i], self.perm[j], v);
            }
        }
        out
    }
}

fn normalize_witness(mut v: Vec<f64>) -> Vec<f64> {
    let m = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if m > 0.0 {
        let first = v.iter().copied().find(|x| x.abs() > 1e-12 * m).unwrap_or(1.0);
        let s = first.signum() / m;
        v.iter_mut().for_each(|x| *x *= s);
    }
    v
}

/// Certifies `M ⪰ −tol·scale` by LDLᵀ with symmetric diagonal pivoting,
/// `scale = 1 + ‖M‖_max`.
///
/// Elimination stops once every remaining diagonal entry is at most
/// `tol·scale`. The leftover Schur complement `R` must then satisfy
/// `λ_min(R) ≥ −tol·scale`; otherwise its bottom eigenvector, pulled back
/// through `L⁻ᵀ`, is returned as the witness (`vᵀMv = v_Rᵀ R v_R`).
pub fn ldlt_psd(m: &SymMatrix, tol: f64) -> Result<LdltFactorization> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = m.n();
    let scale = 1.0 + m.max_abs();
    let pivot_tol = tol * scale;
    let mut a = m.to_dmatrix();
    let mut l = DMatrix::<f64>::identity(n, n);
    let mut d = vec![0.0; n];
    let mut perm: Vec<usize> = (0..n).collect();

    let mut rank = n;
    for k in 0..n {
        let p = (k..n).fold(k, |best, i| if a[(i, i)] > a[(best, best)] { i } else { best });
        if a[(p, p)] <= pivot_tol {
            rank = k;
            break;
        }
        if p != k {
            a.swap_rows(k, p);
            a.swap_columns(k, p);
            perm.swap(k, p);
            for j in 0..k {
                l.swap((k, j), (p, j));
            }
        }
        let dk = a[(k, k)];
        d[k] = dk;
        for i in (k + 1)..n {
            l[(i, k)] = a[(i, k)] / dk;
        }
        for j in (k + 1)..n {
            let ljk = a[(j, k)];
            for i in j..n {
                let v = a[(i, j)] - l[(i, k)] * ljk;
                a[(i, j)] = v;
                a[(j, i)] = v;
            }
        }
    }

    if rank < n {
        let r = n - rank;
        let rest = SymMatrix::from_fn(r, |i, j| a[(rank + i, rank + j)]);
        let (vals, vecs) = sym_eigen(&rest)?;
        if vals[0] < -pivot_tol {
            // x = L⁻ᵀ [0; v_R], back substitution on the permuted order
            let mut x = vec![0.0; n];
            for i in 0..r {
                x[rank + i] = vecs[(i, 0)];
            }
            for i in (0..rank).rev() {
                x[i] = -((i + 1)..n).map(|q| l[(q, i)] * x[q]).sum::<f64>();
            }
            let mut v = vec![0.0; n];
            for (k, &orig) in perm.iter().enumerate() {
                v[orig] = x[k];
            }
            let v = normalize_witness(v);
            let value = m.quad_form(&v);
            return Err(Error::NotPsd { witness: v, value });
        }
    }

    let mut fact = LdltFactorization {
        l,
        d,
        perm,
        pivot_tol,
        residual: 0.0,
    };
    fact.residual = fact.reconstruct().max_abs_diff(m);
    if fact.residual > (1e-8_f64).max(4.0 * tol) * scale {
        return Err(Error::NumericalBreakdown {
            reason: format!("LDLt residual {:e} exceeds tolerance", fact.residual),
            best: None,
        });
    }
    Ok(fact)
}

/// Full symmetric eigendecomposition; eigenvalues ascending with matching
/// eigenvector columns.
pub fn sym_eigen(m: &SymMatrix) -> Result<(Vec<f64>, DMatrix<f64>)> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    if m.n() == 0 {
        return Ok((Vec::new(), DMatrix::zeros(0, 0)));
    }
    let eig = SymmetricEigen::new(m.to_dmatrix());
    let mut order: Vec<usize> = (0..m.n()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(m.n(), m.n(), |i, c| eig.eigenvectors[(i, order[c])]);
    Ok((values, vectors))
}

pub fn extreme_eigs(m: &SymMatrix) -> Result<(f64, f64)> {
    if m.n() == 0 {
        return Ok((0.0, 0.0));
    }
    let (vals, _) = sym_eigen(m)?;
    Ok((vals[0], vals[vals.len() - 1]))
}

/// Rebuilds `V f(Λ) Vᵀ`.
pub fn spectral_map(vals: &[f64], vecs: &DMatrix<f64>, f: impl Fn(f64) -> f64) -> SymMatrix {
    let n = vals.len();
    let fv: Vec<f64> = vals.iter().map(|&l| f(l)).collect();
    SymMatrix::from_fn(n, |i, j| (0..n).map(|k| vecs[(i, k)] * fv[k] * vecs[(j, k)]).sum())
}

/// Unique PSD square root. Eigenvalues down to `−1e-6·‖Y‖_max` are clamped.
pub fn psd_sqrt(y: &SymMatrix) -> Result<SymMatrix> {
    let (vals, vecs) = sym_eigen(y)?;
    let floor = -PSD_CLAMP_REL * y.max_abs();
    if let Some(k) = vals.iter().position(|&l| l < floor) {
        let v = normalize_witness(vecs.column(k).iter().copied().collect());
        let value = y.quad_form(&v);
        return Err(Error::NotPsd { witness: v, value });
    }
    // eigenvalues at rounding level are zeros of the exact matrix
    let noise = 64.0 * f64::EPSILON * vals.iter().fold(0.0_f64, |m, l| m.max(l.abs()));
    Ok(spectral_map(&vals, &vecs, |l| if l <= noise { 0.0 } else { l.sqrt() }))
}

/// `ln det M` for positive definite `M`, `None` otherwise.
pub fn log_det_pd(m: &SymMatrix) -> Option<f64> {
    if m.n() == 0 {
        return Some(0.0);
    }
    let chol = nalgebra::Cholesky::new(m.to_dmatrix())?;
    let l = chol.l_dirty();
    let mut s = 0.0;
    for i in 0..m.n() {
        let d = l[(i, i)];
        if !(d > 0.0) {
            return None;
        }
        s += 2.0 * d.ln();
    }
    Some(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3_laplacian() -> SymMatrix {
        SymMatrix::from_rows(&[
            vec![2.0, -1.0, -1.0],
            vec![-1.0, 2.0, -1.0],
            vec![-1.0, -1.0, 2.0],
        ])
        .unwrap()
    }

    #[test]
    fn ldlt_identity() {
        let f = ldlt_psd(&SymMatrix::identity(4), 1e-12).unwrap();
        assert_eq!(f.d, vec![1.0; 4]);
    }

    #[test]
    fn ldlt_k3_laplacian_pivots() {
        let f = ldlt_psd(&k3_laplacian(), 1e-12).unwrap();
        assert!((f.d[0] - 2.0).abs() < 1e-14);
        assert!((f.d[1] - 1.5).abs() < 1e-14);
        assert!(f.d[2].abs() < 1e-14);
        assert!(f.residual < 1e-12);
    }

    #[test]
    fn ldlt_indefinite_witness() {
        let m = SymMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        match ldlt_psd(&m, 1e-12) {
            Err(Error::NotPsd { witness, value }) => {
                assert_eq!(witness.len(), 2);
                assert!((witness[0] - 1.0).abs() < 1e-12);
                assert!((witness[1] + 1.0).abs() < 1e-12);
                assert!((value + 2.0).abs() < 1e-12);
            }
            other => panic!("expected NotPsd, got {other:?}"),
        }
    }

    #[test]
    fn ldlt_negative_pivot_witness() {
        let m = SymMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        match ldlt_psd(&m, 1e-12) {
            Err(Error::NotPsd { witness, value }) => {
                assert!(value < 0.0);
                assert!((m.quad_form(&witness) - value).abs() < 1e-12);
            }
            other => panic!("expected NotPsd, got {other:?}"),
        }
    }

    #[test]
    fn ldlt_rejects_nan() {
        let mut m = SymMatrix::identity(2);
        m.set(1, 0, f64::NAN);
        assert!(matches!(ldlt_psd(&m, 1e-9), Err(Error::NonFinite)));
    }

    #[test]
    fn sqrt_of_scaled_identity() {
        let b = psd_sqrt(&SymMatrix::scaled_identity(3, 4.0)).unwrap();
        assert!(b.max_abs_diff(&SymMatrix::scaled_identity(3, 2.0)) < 1e-12);
    }

    #[test]
    fn sqrt_of_rank_one_projector() {
        let v = [0.6, 0.0, 0.8];
        let p = SymMatrix::from_fn(3, |i, j| v[i] * v[j]);
        let b = psd_sqrt(&p).unwrap();
        assert!(b.max_abs_diff(&p) < 1e-10);
    }

    #[test]
    fn sqrt_of_kn_optimum_spectrum() {
        let y = &SymMatrix::scaled_identity(3, 2.0) - &SymMatrix::ones(3).scale(2.0 / 3.0);
        let b = psd_sqrt(&y).unwrap();
        let (vals, _) = sym_eigen(&b).unwrap();
        let s2 = 2f64.sqrt();
        assert!(vals[0].abs() < 1e-8);
        assert!((vals[1] - s2).abs() < 1e-12 && (vals[2] - s2).abs() < 1e-12);
    }

    #[test]
    fn sqrt_rejects_indefinite() {
        let m = SymMatrix::from_diag(&[1.0, -0.5]);
        assert!(matches!(psd_sqrt(&m), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn extreme_eigs_examples() {
        let (lo, hi) = extreme_eigs(&k3_laplacian()).unwrap();
        assert!(lo.abs() < 1e-12 && (hi - 3.0).abs() < 1e-12);
        let (lo, hi) = extreme_eigs(&SymMatrix::from_diag(&[1.0, 5.0, -2.0])).unwrap();
        assert_eq!((lo, hi), (-2.0, 5.0));
    }

    #[test]
    fn log_det_matches_product_of_diagonal() {
        let m = SymMatrix::from_diag(&[2.0, 3.0, 0.5]);
        assert!((log_det_pd(&m).unwrap() - 3f64.ln()).abs() < 1e-14);
        assert!(log_det_pd(&SymMatrix::from_diag(&[1.0, 0.0])).is_none());
    }

    #[test]
    fn inner_is_trace_product() {
        let a = k3_laplacian();
        let b = SymMatrix::ones(3);
        let dense = a.to_dmatrix().transpose() * b.to_dmatrix();
        assert!((a.inner(&b) - dense.trace()).abs() < 1e-12);
    }
}
