//! Exhaustive MCIS for small graphs, used as ground truth in tests.
//!
//! Subsets of `V(G)` are tried from the largest size down; for each subset
//! every injection into `V(H)` is enumerated. The first size with a valid
//! injection is the optimum, and all witnesses of that size are collected.

use alloc::vec::Vec;

use crate::graph::{Graph, VertexMapping};
use crate::Error;

/// Largest order the oracle accepts for either graph.
pub const ORACLE_MAX_ORDER: usize = 10;

const DEFAULT_WITNESS_CAP: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub size: usize,
    /// Maximum mappings with pairs sorted by `G` vertex, in enumeration order.
    pub witnesses: Vec<VertexMapping>,
    /// More witnesses existed than the cap allowed.
    pub truncated: bool,
}

/// Brute-force optimum with up to 4096 witnesses.
pub fn brute_force_mcis(g: &Graph, h: &Graph) -> Result<OracleResult, Error> {
    brute_force_mcis_capped(g, h, DEFAULT_WITNESS_CAP)
}

pub fn brute_force_mcis_capped(g: &Graph, h: &Graph, cap: usize) -> Result<OracleResult, Error> {
    for order in [g.order(), h.order()] {
        if order > ORACLE_MAX_ORDER {
            return Err(Error::OracleTooLarge { order, limit: ORACLE_MAX_ORDER });
        }
    }
    if g.is_directed() != h.is_directed() {
        return Err(Error::DirectednessMismatch);
    }
    let mut enumerator = Enumerator {
        g,
        h,
        subset: Vec::new(),
        image: Vec::new(),
        used: [false; ORACLE_MAX_ORDER],
        witnesses: Vec::new(),
        cap,
        truncated: false,
    };
    for size in (0..=g.order().min(h.order())).rev() {
        enumerator.subsets(0, size);
        if !enumerator.witnesses.is_empty() {
            return Ok(OracleResult {
                size,
                witnesses: enumerator.witnesses,
                truncated: enumerator.truncated,
            });
        }
    }
    unreachable!("the empty mapping is always a witness")
}

struct Enumerator<'a> {
    g: &'a Graph,
    h: &'a Graph,
    subset: Vec<usize>,
    image: Vec<usize>,
    used: [bool; ORACLE_MAX_ORDER],
    witnesses: Vec<VertexMapping>,
    cap: usize,
    truncated: bool,
}

impl Enumerator<'_> {
    fn subsets(&mut self, from: usize, size: usize) {
        if self.subset.len() == size {
            self.injections();
            return;
        }
        let needed = size - self.subset.len();
        for v in from..=self.g.order() - needed {
            self.subset.push(v);
            self.subsets(v + 1, size);
            self.subset.pop();
        }
    }

    fn injections(&mut self) {
        let i = self.image.len();
        if i == self.subset.len() {
            if self.witnesses.len() < self.cap {
                let m = self.subset.iter().copied().zip(self.image.iter().copied()).collect();
                self.witnesses.push(m);
            } else {
                self.truncated = true;
            }
            return;
        }
        let v = self.subset[i];
        for u in 0..self.h.order() {
            if self.used[u] || !self.consistent(v, u) {
                continue;
            }
            self.used[u] = true;
            self.image.push(u);
            self.injections();
            self.image.pop();
            self.used[u] = false;
        }
    }

    fn consistent(&self, v: usize, u: usize) -> bool {
        let (g, h) = (self.g, self.h);
        g.has_edge(v, v) == h.has_edge(u, u)
            && self.subset.iter().zip(&self.image).all(|(&w, &x)| {
                g.has_edge(v, w) == h.has_edge(u, x) && g.has_edge(w, v) == h.has_edge(x, u)
            })
    }
}
