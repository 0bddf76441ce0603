#![allow(dead_code)]

pub mod props;

use cutcert::graph::{EdgeWeights, Graph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn complete(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))).unwrap()
}

pub fn cycle(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Erdős–Rényi graph with at least one edge.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    loop {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen::<f64>() < p {
                    edges.push((i, j));
                }
            }
        }
        if !edges.is_empty() {
            return Graph::from_edges(n, edges).unwrap();
        }
    }
}

pub fn random_weights(rng: &mut ChaCha8Rng, g: &Graph) -> EdgeWeights {
    EdgeWeights::new(g, (0..g.m()).map(|_| rng.gen_range(0.1..2.0)).collect()).unwrap()
}

/// Triangle with demands `e01 + e02 + t·e12`.
pub fn small_edge_triangle(t: f64) -> (Graph, EdgeWeights) {
    let g = Graph::from_edges(3, [(0, 1), (0, 2), (1, 2)]).unwrap();
    let z = EdgeWeights::new(&g, vec![1.0, 1.0, t]).unwrap();
    (g, z)
}
