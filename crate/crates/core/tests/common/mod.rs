#![allow(dead_code)]

use mcis_core::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const EDGE_PROBABILITIES: [f64; 3] = [0.2, 0.5, 0.8];

#[derive(Clone, Debug)]
pub struct Instance {
    pub id: usize,
    pub g: Graph,
    pub h: Graph,
    pub directed: bool,
    pub loops: bool,
    pub p: f64,
}

pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64, directed: bool, loops: bool) -> Graph {
    let mut g = Graph::new(n, directed);
    for a in 0..n {
        if loops && rng.random_bool(0.3) {
            g.add_edge(a, a).unwrap();
        }
        for b in 0..n {
            if a != b && (directed || a < b) && rng.random_bool(p) {
                g.add_edge(a, b).unwrap();
            }
        }
    }
    g
}

/// Random pairs with each side of order `min_n..=max_n`, cycling through
/// undirected/directed × loop-free/looped and the three edge densities.
pub fn corpus(count: usize, min_n: usize, max_n: usize, seed: u64) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|id| {
            let directed = id % 2 == 1;
            let loops = id % 4 >= 2;
            let p = EDGE_PROBABILITIES[(id / 4) % 3];
            let ng = rng.random_range(min_n..=max_n);
            let nh = rng.random_range(min_n..=max_n);
            let g = random_graph(&mut rng, ng, p, directed, loops);
            let h = random_graph(&mut rng, nh, p, directed, loops);
            Instance { id, g, h, directed, loops, p }
        })
        .collect()
}

pub fn undirected(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Graph {
    Graph::from_edges(n, false, edges).unwrap()
}

pub fn complete(n: usize) -> Graph {
    undirected(n, (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))))
}

pub fn star(leaves: usize) -> Graph {
    undirected(leaves + 1, (1..=leaves).map(|l| (0, l)))
}

pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    undirected(a + b, (0..a).flat_map(|x| (a..a + b).map(move |y| (x, y))))
}

/// Disjoint union of cliques of the given sizes.
pub fn clique_union(sizes: &[usize]) -> Graph {
    let mut edges = Vec::new();
    let mut base = 0;
    for &s in sizes {
        for a in base..base + s {
            for b in a + 1..base + s {
                edges.push((a, b));
            }
        }
        base += s;
    }
    undirected(base, edges)
}
