//! Graphs, edge-indexed vectors, shores, fractional cut covers, and the
//! Laplacian operator pair `L_G` / `L_G^*`.
//!
//! Edges are kept in strictly lexicographic order; an edge's position in
//! that list is its index in every edge vector in the crate.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;

/// Absolute per-edge feasibility tolerance used when none is supplied.
pub const DEFAULT_FEAS_TOL: f64 = 1e-9;

/// Simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Edges must already be canonical: `i < j < n`, strictly increasing.
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        for (k, &(i, j)) in edges.iter().enumerate() {
            if i >= j {
                return Err(Error::InvalidGraph(format!(
                    "edge {k} = ({i}, {j}) does not satisfy i < j"
                )));
            }
            if j >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge {k} = ({i}, {j}) out of range for n = {n}"
                )));
            }
            if k > 0 && edges[k - 1] >= (i, j) {
                return Err(Error::InvalidGraph(format!(
                    "edge {k} = ({i}, {j}) breaks strict lexicographic order"
                )));
            }
        }
        Ok(Self { n, edges })
    }

    /// Orients, sorts, and rejects loops and duplicate pairs.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut es: Vec<(usize, usize)> = edges
            .into_iter()
            .map(|(a, b)| if a <= b { (a, b) } else { (b, a) })
            .collect();
        if let Some(&(i, _)) = es.iter().find(|(a, b)| a == b) {
            return Err(Error::InvalidGraph(format!("loop at vertex {i}")));
        }
        es.sort_unstable();
        if let Some(w) = es.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!(
                "duplicate edge ({}, {})",
                w[0].0, w[0].1
            )));
        }
        Self::new(n, es)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_index(&self, i: usize, j: usize) -> Option<usize> {
        let key = if i < j { (i, j) } else { (j, i) };
        self.edges.binary_search(&key).ok()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(i, j) in &self.edges {
            d[i] += 1;
            d[j] += 1;
        }
        d
    }

    pub fn adjacency(&self) -> SymMatrix {
        let mut a = SymMatrix::zeros(self.n);
        for &(i, j) in &self.edges {
            a.set(i, j, 1.0);
        }
        a
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.m() {
            return Err(Error::DimensionMismatch {
                expected: self.m(),
                got: len,
            });
        }
        Ok(())
    }
}

/// Nonnegative per-edge vector: max-cut weights `w` or covering demands `z`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeWeights {
    n: usize,
    values: Vec<f64>,
}

impl EdgeWeights {
    pub fn new(g: &Graph, values: Vec<f64>) -> Result<Self> {
        g.check_len(values.len())?;
        if let Some(k) = values.iter().position(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidWeights(format!(
                "entry {k} = {} is not a finite nonnegative number",
                values[k]
            )));
        }
        Ok(Self { n: g.n(), values })
    }

    pub fn constant(g: &Graph, c: f64) -> Result<Self> {
        Self::new(g, vec![c; g.m()])
    }

    pub fn ones(g: &Graph) -> Self {
        Self {
            n: g.n(),
            values: vec![1.0; g.m()],
        }
    }

    pub fn zeros(g: &Graph) -> Self {
        Self {
            n: g.n(),
            values: vec![0.0; g.m()],
        }
    }

    /// Wraps a possibly slightly negative vector, clamping entries `≥ −tol`
    /// to zero. Used for vectors produced by numerical routines.
    pub fn from_clamped(g: &Graph, values: Vec<f64>, tol: f64) -> Result<Self> {
        let values = values
            .into_iter()
            .map(|v| if v < 0.0 && v >= -tol { 0.0 } else { v })
            .collect();
        Self::new(g, values)
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn norm_inf(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(*v))
    }

    pub fn norm_1(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn dot(&self, other: &[f64]) -> f64 {
        dot(&self.values, other)
    }

    pub fn scale(&self, c: f64) -> Self {
        assert!(c >= 0.0);
        Self {
            n: self.n,
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn belongs_to(&self, g: &Graph) -> bool {
        self.n == g.n() && self.values.len() == g.m()
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Vertex subset, stored as a bitset without trailing zero words.
///
/// Ordering is lexicographic on the sorted member list, so `{0} < {0, 1} < {1}`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Shore {
    words: Vec<u64>,
}

impl Shore {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_mask(mask: u64) -> Self {
        let mut s = Self { words: vec![mask] };
        s.trim();
        s
    }

    pub fn from_vertices(vs: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty();
        for v in vs {
            s.insert(v);
        }
        s
    }

    /// `{ i : bits[i] }`.
    pub fn from_bools(bits: &[bool]) -> Self {
        Self::from_vertices(bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i))
    }

    pub fn full(n: usize) -> Self {
        Self::from_vertices(0..n)
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn insert(&mut self, v: usize) {
        let w = v / 64;
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        self.words[w] |= 1u64 << (v % 64);
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.words
            .get(v / 64)
            .is_some_and(|w| (w >> (v % 64)) & 1 == 1)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let t = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(k * 64 + t)
            })
        })
    }

    pub fn complement(&self, n: usize) -> Self {
        Self::from_vertices((0..n).filter(|&v| !self.contains(v)))
    }

    /// Largest member index + 1 (0 for the empty shore).
    pub fn span(&self) -> usize {
        self.members().last().map_or(0, |v| v + 1)
    }

    /// Low 64 bits, for graphs with `n ≤ 64`.
    pub fn mask(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }
}

impl Ord for Shore {
    fn cmp(&self, other: &Self) -> Ordering {
        self.members().cmp(other.members())
    }
}

impl PartialOrd for Shore {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Shore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.members()).finish()
    }
}

impl fmt::Display for Shore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.members().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Sparse nonnegative weighting of shores. `S` and `V∖S` are distinct keys.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FractionalCutCover {
    entries: BTreeMap<Shore, f64>,
}

impl FractionalCutCover {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `weight` to the shore's entry. Nonpositive weights are ignored.
    pub fn add(&mut self, shore: Shore, weight: f64) {
        if weight > 0.0 {
            *self.entries.entry(shore).or_insert(0.0) += weight;
        }
    }

    pub fn get(&self, shore: &Shore) -> f64 {
        self.entries.get(shore).copied().unwrap_or(0.0)
    }

    pub fn remove(&mut self, shore: &Shore) -> Option<f64> {
        self.entries.remove(shore)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Shore, f64)> {
        self.entries.iter().map(|(s, w)| (s, *w))
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `⟨1, y⟩`.
    pub fn total_weight(&self) -> f64 {
        self.entries.values().sum()
    }

    pub fn scaled(&self, c: f64) -> Self {
        let mut out = Self::new();
        for (s, w) in self.iter() {
            out.add(s.clone(), w * c);
        }
        out
    }
}

impl FromIterator<(Shore, f64)> for FractionalCutCover {
    fn from_iter<I: IntoIterator<Item = (Shore, f64)>>(iter: I) -> Self {
        let mut y = Self::new();
        for (s, w) in iter {
            y.add(s, w);
        }
        y
    }
}

/// `Σ_{ij∈E} w_ij (e_i − e_j)(e_i − e_j)ᵀ` for any real edge vector.
pub fn laplacian_of(g: &Graph, w: &[f64]) -> Result<SymMatrix> {
    g.check_len(w.len())?;
    let mut l = SymMatrix::zeros(g.n());
    for (&(i, j), &wij) in g.edges().iter().zip(w) {
        l.add_to(i, i, wij);
        l.add_to(j, j, wij);
        l.add_to(i, j, -wij);
    }
    Ok(l)
}

pub fn laplacian(g: &Graph, w: &EdgeWeights) -> Result<SymMatrix> {
    laplacian_of(g, w.values())
}

/// `(L_G^*(Y))_ij = Y_ii + Y_jj − 2 Y_ij`.
pub fn laplacian_adjoint(g: &Graph, y: &SymMatrix) -> Result<Vec<f64>> {
    if y.n() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            got: y.n(),
        });
    }
    Ok(g.edges()
        .iter()
        .map(|&(i, j)| y.get(i, i) + y.get(j, j) - 2.0 * y.get(i, j))
        .collect())
}

/// Indicator vector `χ^{δ(S)}`.
pub fn cut_indicator(g: &Graph, s: &Shore) -> Vec<f64> {
    g.edges()
        .iter()
        .map(|&(i, j)| if s.contains(i) != s.contains(j) { 1.0 } else { 0.0 })
        .collect()
}

/// `⟨w, χ^{δ(S)}⟩`.
pub fn cut_weight(g: &Graph, w: &[f64], s: &Shore) -> f64 {
    assert_eq!(w.len(), g.m());
    g.edges()
        .iter()
        .zip(w)
        .filter(|(&(i, j), _)| s.contains(i) != s.contains(j))
        .map(|(_, &x)| x)
        .sum()
}

/// Same as [`cut_weight`] for a shore given as a bitmask (`n ≤ 64`).
#[inline]
pub fn cut_weight_mask(g: &Graph, w: &[f64], mask: u64) -> f64 {
    let mut s = 0.0;
    for (&(i, j), &x) in g.edges().iter().zip(w) {
        if ((mask >> i) ^ (mask >> j)) & 1 == 1 {
            s += x;
        }
    }
    s
}

/// `Σ_S y_S χ^{δ(S)}`.
pub fn cover_vector(g: &Graph, y: &FractionalCutCover) -> Vec<f64> {
    let mut out = vec![0.0; g.m()];
    for (s, ys) in y.iter() {
        for (k, &(i, j)) in g.edges().iter().enumerate() {
            if s.contains(i) != s.contains(j) {
                out[k] += ys;
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverCheck {
    pub feasible: bool,
    /// Edge with the smallest slack `cover_e − z_e`, if `m > 0`.
    pub worst_edge: Option<(usize, usize)>,
    pub worst_slack: f64,
}

/// Tests `cover_vector(y) ≥ z − tol·1`.
pub fn check_cover(g: &Graph, z: &EdgeWeights, y: &FractionalCutCover, tol: f64) -> CoverCheck {
    let cover = cover_vector(g, y);
    let mut worst: Option<(usize, f64)> = None;
    for (k, (c, zk)) in cover.iter().zip(z.values()).enumerate() {
        let slack = c - zk;
        if worst.is_none_or(|(_, s)| slack < s) {
            worst = Some((k, slack));
        }
    }
    match worst {
        None => CoverCheck {
            feasible: true,
            worst_edge: None,
            worst_slack: f64::INFINITY,
        },
        Some((k, slack)) => CoverCheck {
            feasible: slack >= -tol,
            worst_edge: Some(g.edges()[k]),
            worst_slack: slack,
        },
    }
}

/// Contents of a graph file: the graph, its `w` column, and the optional
/// second (`z`) column.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphFile {
    pub graph: Graph,
    pub w: EdgeWeights,
    pub z: Option<EdgeWeights>,
}

impl GraphFile {
    /// The demand vector: the `z` column when present, else the `w` column.
    pub fn demands(&self) -> &EdgeWeights {
        self.z.as_ref().unwrap_or(&self.w)
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Parses `n m` followed by `m` lines `i j w [z]`.
pub fn parse_graph_file(text: &str) -> Result<GraphFile> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let hdr: Vec<&str> = header.split_whitespace().collect();
    if hdr.len() != 2 {
        return Err(parse_err(hl, "header must be \"n m\""));
    }
    let n: usize = hdr[0].parse().map_err(|_| parse_err(hl, "bad vertex count"))?;
    let m: usize = hdr[1].parse().map_err(|_| parse_err(hl, "bad edge count"))?;

    let mut edges = Vec::with_capacity(m);
    let mut w = Vec::with_capacity(m);
    let mut z: Vec<f64> = Vec::new();
    let mut columns = None;
    for _ in 0..m {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| parse_err(text.lines().count() + 1, "missing edge lines"))?;
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 3 && f.len() != 4 {
            return Err(parse_err(ln, "edge line must be \"i j w\" or \"i j w z\""));
        }
        if *columns.get_or_insert(f.len()) != f.len() {
            return Err(parse_err(ln, "inconsistent number of weight columns"));
        }
        let i: usize = f[0].parse().map_err(|_| parse_err(ln, "bad vertex index"))?;
        let j: usize = f[1].parse().map_err(|_| parse_err(ln, "bad vertex index"))?;
        if i >= j || j >= n {
            return Err(parse_err(ln, format!("edge ({i}, {j}) must satisfy i < j < n")));
        }
        if edges.last().is_some_and(|&prev| prev >= (i, j)) {
            return Err(parse_err(ln, "edges must be strictly sorted"));
        }
        let parse_w = |s: &str| -> Result<f64> {
            let v: f64 = s.parse().map_err(|_| parse_err(ln, format!("bad weight {s:?}")))?;
            if !v.is_finite() || v < 0.0 {
                return Err(parse_err(ln, format!("weight {s} must be finite and nonnegative")));
            }
            Ok(v)
        };
        edges.push((i, j));
        w.push(parse_w(f[2])?);
        if f.len() == 4 {
            z.push(parse_w(f[3])?);
        }
    }
    if let Some((ln, _)) = lines.next() {
        return Err(parse_err(ln, "trailing content after edge list"));
    }
    let graph = Graph::new(n, edges)?;
    let w = EdgeWeights::new(&graph, w)?;
    let z = if columns == Some(4) {
        Some(EdgeWeights::new(&graph, z)?)
    } else {
        None
    };
    Ok(GraphFile { graph, w, z })
}

pub fn format_graph_file(g: &Graph, w: &EdgeWeights, z: Option<&EdgeWeights>) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    for (k, &(i, j)) in g.edges().iter().enumerate() {
        match z {
            Some(z) => out.push_str(&format!("{i} {j} {} {}\n", w.values()[k], z.values()[k])),
            None => out.push_str(&format!("{i} {j} {}\n", w.values()[k])),
        }
    }
    out
}
