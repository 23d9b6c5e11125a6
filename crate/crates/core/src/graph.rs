//! Graph storage, induced subgraphs and mapping verification.

use alloc::vec;
use alloc::vec::Vec;

use crate::bitset;
use crate::Error;

/// The value assigned to a variable vertex: a vertex of the value graph, or
/// `Unmatched` (⊥) when the variable is deliberately left out.
///
/// The derived order puts `Unmatched` after every vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Vertex(usize),
    Unmatched,
}

impl Value {
    pub fn vertex(self) -> Option<usize> {
        match self {
            Value::Vertex(u) => Some(u),
            Value::Unmatched => None,
        }
    }
}

/// A simple graph on vertices `0..n`, optionally directed, optionally with
/// self-loops.
///
/// Adjacency lives in bitset rows; self-loops are kept in a separate flag and
/// never appear in a row. Undirected graphs keep symmetric rows and no
/// separate in-rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    directed: bool,
    words: usize,
    out_rows: Vec<u64>,
    in_rows: Vec<u64>,
    loops: Vec<bool>,
    degree: Vec<usize>,
}

impl Graph {
    /// Edgeless graph of order `n`.
    pub fn new(n: usize, directed: bool) -> Self {
        let words = bitset::words_for(n);
        Graph {
            n,
            directed,
            words,
            out_rows: vec![0; n * words],
            in_rows: if directed { vec![0; n * words] } else { Vec::new() },
            loops: vec![false; n],
            degree: vec![0; n],
        }
    }

    pub fn from_edges(
        n: usize,
        directed: bool,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, Error> {
        let mut g = Graph::new(n, directed);
        for (a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    /// Adds `a -> b` (or `{a, b}`). `a == b` sets the loop flag. Repeated
    /// edges collapse.
    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<(), Error> {
        for vertex in [a, b] {
            if vertex >= self.n {
                return Err(Error::VertexOutOfRange { vertex, order: self.n });
            }
        }
        if a == b {
            self.loops[a] = true;
            return Ok(());
        }
        let w = self.words;
        if bitset::set(&mut self.out_rows[a * w..(a + 1) * w], b) {
            self.degree[a] += 1;
            self.degree[b] += 1;
        }
        if self.directed {
            bitset::set(&mut self.in_rows[b * w..(b + 1) * w], a);
        } else {
            bitset::set(&mut self.out_rows[b * w..(b + 1) * w], a);
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn has_loop(&self, v: usize) -> bool {
        self.loops[v]
    }

    pub fn has_loops(&self) -> bool {
        self.loops.iter().any(|&l| l)
    }

    /// Edge test for `a -> b`; for `a == b` this is the loop flag.
    #[inline]
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        if a == b {
            self.loops[a]
        } else {
            bitset::get(self.out_row(a), b)
        }
    }

    /// Number of distinct neighbours, counting in- and out-edges separately
    /// for digraphs. Loops do not count.
    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.degree[v]
    }

    #[inline]
    pub(crate) fn out_row(&self, v: usize) -> &[u64] {
        &self.out_rows[v * self.words..(v + 1) * self.words]
    }

    #[inline]
    pub(crate) fn in_row(&self, v: usize) -> &[u64] {
        if self.directed {
            &self.in_rows[v * self.words..(v + 1) * self.words]
        } else {
            self.out_row(v)
        }
    }

    pub fn out_neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        bitset::ones(self.out_row(v))
    }

    pub fn in_neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        bitset::ones(self.in_row(v))
    }

    /// Every edge once, in ascending `(a, b)` order: `a < b` for undirected
    /// graphs, all arcs for digraphs, loops as `(v, v)`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |a| {
            let lower = if self.directed { 0 } else { a };
            (lower..self.n)
                .filter(move |&b| self.has_edge(a, b))
                .map(move |b| (a, b))
        })
    }

    pub fn edge_count(&self) -> usize {
        let arcs: usize = (0..self.n).map(|v| bitset::count(self.out_row(v))).sum();
        let loops = self.loops.iter().filter(|&&l| l).count();
        if self.directed {
            arcs + loops
        } else {
            arcs / 2 + loops
        }
    }

    /// The subgraph induced by `vertices`, relabelled `0..k` by ascending
    /// original index. Duplicates in `vertices` are ignored.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<Graph, Error> {
        let mut keep: Vec<usize> = vertices.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if let Some(&vertex) = keep.iter().find(|&&v| v >= self.n) {
            return Err(Error::VertexOutOfRange { vertex, order: self.n });
        }
        let mut sub = Graph::new(keep.len(), self.directed);
        for (i, &a) in keep.iter().enumerate() {
            for (j, &b) in keep.iter().enumerate() {
                if (self.directed || i <= j) && self.has_edge(a, b) {
                    sub.add_edge(i, j)?;
                }
            }
        }
        Ok(sub)
    }
}

/// Partial solution: `(variable, value)` pairs in branching order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VertexMapping {
    pairs: Vec<(usize, Value)>,
}

impl VertexMapping {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, v: usize, value: Value) {
        self.pairs.push((v, value));
    }

    pub fn pop(&mut self) -> Option<(usize, Value)> {
        self.pairs.pop()
    }

    pub fn pairs(&self) -> &[(usize, Value)] {
        &self.pairs
    }

    /// Pairs with a real value, in branching order.
    pub fn matched(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs
            .iter()
            .filter_map(|&(v, val)| val.vertex().map(|u| (v, u)))
    }

    /// Number of pairs with a real value.
    pub fn size(&self) -> usize {
        self.matched().count()
    }

    pub fn without_unmatched(&self) -> VertexMapping {
        self.matched().map(|(v, u)| (v, Value::Vertex(u))).collect()
    }

    /// Each variable at most once, each real value at most once.
    pub fn is_well_formed(&self) -> bool {
        let mut vars: Vec<usize> = self.pairs.iter().map(|p| p.0).collect();
        let mut vals: Vec<usize> = self.matched().map(|p| p.1).collect();
        let (nv, nu) = (vars.len(), vals.len());
        vars.sort_unstable();
        vars.dedup();
        vals.sort_unstable();
        vals.dedup();
        vars.len() == nv && vals.len() == nu
    }
}

impl FromIterator<(usize, Value)> for VertexMapping {
    fn from_iter<I: IntoIterator<Item = (usize, Value)>>(iter: I) -> Self {
        VertexMapping { pairs: iter.into_iter().collect() }
    }
}

impl FromIterator<(usize, usize)> for VertexMapping {
    fn from_iter<I: IntoIterator<Item = (usize, usize)>>(iter: I) -> Self {
        iter.into_iter().map(|(v, u)| (v, Value::Vertex(u))).collect()
    }
}

/// True iff the matched pairs of `m` induce isomorphic subgraphs: every
/// ordered pair of mapped variables (including a variable with itself, for
/// loops) has the same adjacency as its image.
pub fn is_isomorphism(g: &Graph, h: &Graph, m: &VertexMapping) -> bool {
    if g.is_directed() != h.is_directed() {
        return false;
    }
    let pairs: Vec<(usize, usize)> = m.matched().collect();
    if pairs.iter().any(|&(v, u)| v >= g.order() || u >= h.order()) {
        return false;
    }
    pairs.iter().enumerate().all(|(i, &(v1, u1))| {
        let rest = if g.is_directed() { &pairs[..] } else { &pairs[i..] };
        rest.iter()
            .all(|&(v2, u2)| g.has_edge(v1, v2) == h.has_edge(u1, u2))
    })
}
