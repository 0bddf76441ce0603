//! Exact maximum cut and fractional cut-covering number for small graphs.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::graph::{cut_weight_mask, dot, EdgeWeights, FractionalCutCover, Graph, Shore};
use crate::par::{fold_chunks, Execution};

pub const MC_EXACT_MAX_N: usize = 26;
pub const FCC_EXACT_MAX_N: usize = 12;

const PIVOT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct McResult {
    pub value: f64,
    /// Maximizing shore containing vertex 0, lexicographically first.
    pub shore: Shore,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FccResult {
    pub value: f64,
    /// Optimal basic cover; support at most `m`.
    pub cover: FractionalCutCover,
    /// Optimal dual: `w ≥ 0`, `mc(G, w) ≤ 1`, `⟨z, w⟩ = value`.
    pub dual: Vec<f64>,
}

/// Whether the member list of `a` precedes that of `b`.
fn lex_less(a: u64, b: u64) -> bool {
    if a == b {
        return false;
    }
    let k = (a ^ b).trailing_zeros();
    let above = |m: u64| k < 63 && (m >> (k + 1)) != 0;
    if (a >> k) & 1 == 1 {
        above(b)
    } else {
        !above(a)
    }
}

/// Shores containing vertex 0, as masks, in enumeration order.
fn shore_mask(k: u64) -> u64 {
    1 | (k << 1)
}

pub fn mc_exact(g: &Graph, w: &EdgeWeights) -> Result<McResult> {
    mc_exact_with(Execution::default(), g, w)
}

/// Enumerates the `2^{n−1}` shores containing vertex 0.
pub fn mc_exact_with(exec: Execution, g: &Graph, w: &EdgeWeights) -> Result<McResult> {
    let n = g.n();
    if n > MC_EXACT_MAX_N {
        return Err(Error::TooLarge { n, limit: MC_EXACT_MAX_N });
    }
    if !w.belongs_to(g) {
        return Err(Error::DimensionMismatch { expected: g.m(), got: w.len() });
    }
    if n == 0 {
        return Ok(McResult { value: 0.0, shore: Shore::empty() });
    }
    let better = |a: (f64, u64), b: (f64, u64)| -> (f64, u64) {
        if b.0 > a.0 || (b.0 == a.0 && lex_less(b.1, a.1)) {
            b
        } else {
            a
        }
    };
    let count = 1u64 << (n - 1);
    let first = (cut_weight_mask(g, w.values(), shore_mask(0)), shore_mask(0));
    let (value, mask) = fold_chunks(
        exec,
        0,
        count,
        first,
        |acc, k| {
            let m = shore_mask(k);
            better(acc, (cut_weight_mask(g, w.values(), m), m))
        },
        better,
    );
    Ok(McResult { value, shore: Shore::from_mask(mask) })
}

/// Solves `min ⟨1,y⟩ s.t. Σ_S y_S χ^{δ(S)} ≥ z, y ≥ 0` over shores containing
/// vertex 0.
pub fn fcc_exact(g: &Graph, z: &EdgeWeights) -> Result<FccResult> {
    let n = g.n();
    if n > FCC_EXACT_MAX_N {
        return Err(Error::TooLarge { n, limit: FCC_EXACT_MAX_N });
    }
    if !z.belongs_to(g) {
        return Err(Error::DimensionMismatch { expected: g.m(), got: z.len() });
    }
    let m = g.m();
    if m == 0 || z.is_zero() {
        return Ok(FccResult { value: 0.0, cover: FractionalCutCover::new(), dual: vec![0.0; m] });
    }
    let masks: Vec<u64> = (0..(1u64 << (n - 1)))
        .map(shore_mask)
        .filter(|&s| g.edges().iter().any(|&(i, j)| ((s >> i) ^ (s >> j)) & 1 == 1))
        .collect();
    let lp = CoverLp { g, masks: &masks, z: z.values() };
    let (x, basis, dual) = lp.solve()?;
    let mut cover = FractionalCutCover::new();
    let mut value = 0.0;
    for (r, &var) in basis.iter().enumerate() {
        if let Var::Shore(k) = lp.var(var) {
            if x[r] > PIVOT_TOL {
                cover.add(Shore::from_mask(masks[k]), x[r]);
                value += x[r];
            }
        }
    }
    let dual: Vec<f64> = dual.iter().map(|&d| d.max(0.0)).collect();
    Ok(FccResult { value, cover, dual })
}

struct Factored {
    lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    lu_t: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
}

enum Var {
    Artificial(usize),
    Surplus(usize),
    Shore(usize),
}

/// Column layout: artificials `0..m`, surplus `m..2m`, shores after.
struct CoverLp<'a> {
    g: &'a Graph,
    masks: &'a [u64],
    z: &'a [f64],
}

impl CoverLp<'_> {
    fn m(&self) -> usize {
        self.g.m()
    }

    fn var(&self, j: usize) -> Var {
        let m = self.m();
        if j < m {
            Var::Artificial(j)
        } else if j < 2 * m {
            Var::Surplus(j - m)
        } else {
            Var::Shore(j - 2 * m)
        }
    }

    fn column(&self, j: usize) -> DVector<f64> {
        let m = self.m();
        match self.var(j) {
            Var::Artificial(e) => DVector::from_fn(m, |r, _| if r == e { 1.0 } else { 0.0 }),
            Var::Surplus(e) => DVector::from_fn(m, |r, _| if r == e { -1.0 } else { 0.0 }),
            Var::Shore(k) => {
                let s = self.masks[k];
                DVector::from_iterator(
                    m,
                    self.g.edges().iter().map(|&(i, j)| (((s >> i) ^ (s >> j)) & 1) as f64),
                )
            }
        }
    }

    fn cost(&self, j: usize, phase_one: bool) -> f64 {
        match (self.var(j), phase_one) {
            (Var::Artificial(_), true) => 1.0,
            (Var::Shore(_), false) => 1.0,
            _ => 0.0,
        }
    }

    fn num_vars(&self) -> usize {
        2 * self.m() + self.masks.len()
    }

    /// Two-phase revised simplex with Bland's rule. Returns basic values,
    /// basis, and the final simplex multipliers.
    fn solve(&self) -> Result<(DVector<f64>, Vec<usize>, Vec<f64>)> {
        let m = self.m();
        let z = DVector::from_column_slice(self.z);
        let mut basis: Vec<usize> = (0..m).collect();
        for phase_one in [true, false] {
            self.run_phase(&mut basis, &z, phase_one)?;
            if phase_one {
                let (x, _) = self.basic_solution(&basis, &z)?;
                let infeas: f64 = basis
                    .iter()
                    .zip(x.iter())
                    .filter(|(&j, _)| matches!(self.var(j), Var::Artificial(_)))
                    .map(|(_, v)| *v)
                    .sum();
                if infeas > 1e-7 * (1.0 + z.amax()) {
                    return Err(Error::Lp(format!("covering LP infeasible (residual {infeas:e})")));
                }
            }
        }
        let (x, lu) = self.basic_solution(&basis, &z)?;
        let cb = DVector::from_iterator(m, basis.iter().map(|&j| self.cost(j, false)));
        let pi = lu.lu_t.solve(&cb).ok_or_else(|| Error::Lp("singular basis".into()))?;
        Ok((x, basis, pi.iter().copied().collect()))
    }

    fn basic_solution(
        &self,
        basis: &[usize],
        z: &DVector<f64>,
    ) -> Result<(DVector<f64>, Factored)> {
        let m = self.m();
        let mut bm = DMatrix::zeros(m, m);
        for (c, &j) in basis.iter().enumerate() {
            bm.set_column(c, &self.column(j));
        }
        let f = Factored { lu: bm.clone().lu(), lu_t: bm.transpose().lu() };
        let x = f.lu.solve(z).ok_or_else(|| Error::Lp("singular basis".into()))?;
        Ok((x, f))
    }

    fn run_phase(&self, basis: &mut [usize], z: &DVector<f64>, phase_one: bool) -> Result<()> {
        let m = self.m();
        let max_iter = 50 * (self.num_vars() + m) + 1000;
        for _ in 0..max_iter {
            let (x, lu) = self.basic_solution(basis, z)?;
            let cb = DVector::from_iterator(m, basis.iter().map(|&j| self.cost(j, phase_one)));
            let pi = lu.lu_t.solve(&cb).ok_or_else(|| Error::Lp("singular basis".into()))?;

            // Bland: first improving column by index.
            let in_basis = |j: usize| basis.contains(&j);
            let entering = (0..self.num_vars()).find(|&j| {
                if in_basis(j) || (!phase_one && matches!(self.var(j), Var::Artificial(_))) {
                    return false;
                }
                let reduced = self.cost(j, phase_one) - pi.dot(&self.column(j));
                reduced < -PIVOT_TOL
            });
            let Some(q) = entering else {
                return Ok(());
            };
            let d = lu.lu.solve(&self.column(q)).ok_or_else(|| Error::Lp("singular basis".into()))?;

            // Ratio test; ties go to the smallest basic index. In phase two a
            // basic artificial at level zero blocks any nonzero direction.
            let mut leave: Option<(f64, usize, usize)> = None;
            for r in 0..m {
                let ratio = if !phase_one && matches!(self.var(basis[r]), Var::Artificial(_)) && d[r].abs() > PIVOT_TOL {
                    0.0
                } else if d[r] > PIVOT_TOL {
                    x[r].max(0.0) / d[r]
                } else {
                    continue;
                };
                let cand = (ratio, basis[r], r);
                leave = match leave {
                    None => Some(cand),
                    Some(best) if ratio < best.0 - 1e-12 || (ratio <= best.0 + 1e-12 && cand.1 < best.1) => Some(cand),
                    keep => keep,
                };
            }
            let Some((_, _, r)) = leave else {
                return Err(Error::Lp("covering LP unbounded".into()));
            };
            basis[r] = q;
        }
        Err(Error::Lp("simplex iteration limit reached".into()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolarIdentityReport {
    pub mc: f64,
    pub fcc: f64,
    /// `⟨w, z⟩`.
    pub inner: f64,
    /// `⟨w, z⟩ ≤ mc(w)·fcc(z) + 1e-6`.
    pub product_bound_holds: bool,
    /// `⟨z, w'⟩` for the LP dual `w'`.
    pub dual_value: f64,
    /// `mc(w')`; at most 1 for a feasible dual.
    pub dual_mc: f64,
    /// `|fcc(z) − ⟨z, w'⟩| ≤ 1e-6` and `mc(w') ≤ 1 + 1e-6`.
    pub duality_holds: bool,
}

impl PolarIdentityReport {
    pub fn holds(&self) -> bool {
        self.product_bound_holds && self.duality_holds
    }
}

pub fn polar_identity_check(g: &Graph, w: &EdgeWeights, z: &EdgeWeights) -> Result<PolarIdentityReport> {
    let mc = mc_exact(g, w)?.value;
    let f = fcc_exact(g, z)?;
    let inner = w.dot(z.values());
    let dual_w = EdgeWeights::from_clamped(g, f.dual.clone(), 1e-9)?;
    let dual_mc = mc_exact(g, &dual_w)?.value;
    let dual_value = dot(z.values(), &f.dual);
    Ok(PolarIdentityReport {
        mc,
        fcc: f.value,
        inner,
        product_bound_holds: inner <= mc * f.value + 1e-6,
        dual_value,
        dual_mc,
        duality_holds: (f.value - dual_value).abs() <= 1e-6 && dual_mc <= 1.0 + 1e-6,
    })
}
