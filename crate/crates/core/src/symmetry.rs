//! Modular symmetry classes.
//!
//! Two vertices are modular symmetric when they have the same negative
//! (open) neighbourhood or the same positive (closed) neighbourhood. A
//! self-loop is encoded as the sentinel [`LOOP_SENTINEL`] in the
//! neighbourhood; in digraphs a neighbourhood is an `(in, out)` pair and a
//! loop marks both sides. Under these encodings `u ≡ v` holds exactly when
//! swapping `u` and `v` is an automorphism.
//!
//! Detection hashes every vertex's two neighbourhoods (one pass over the
//! adjacency rows, O(n²) overall) and groups vertices by hash. Vertices in the
//! same bucket are compared exactly before they are merged, so a hash
//! collision can never produce a wrong class.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::hash::Hasher;

use rustc_hash::FxHasher;

use crate::graph::Graph;

/// Stand-in neighbour marking a self-loop; larger than every vertex id.
pub const LOOP_SENTINEL: usize = usize::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    Negative,
    Positive,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum NeighborSets {
    Undirected(Vec<usize>),
    Directed { incoming: Vec<usize>, outgoing: Vec<usize> },
}

/// Canonical neighbourhood of one vertex: strictly ascending ids, with
/// [`LOOP_SENTINEL`] last when the vertex has a loop.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NeighborhoodKey {
    pub polarity: Polarity,
    pub sets: NeighborSets,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassKind {
    Negative,
    Positive,
    Singleton,
}

/// Vertex → class map with O(1) symmetry queries.
///
/// Class ids are dense and numbered by smallest member, so
/// `class_of(v) <= v` for every vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryClasses {
    class_id: Vec<usize>,
    members: Vec<Vec<usize>>,
    kinds: Vec<ClassKind>,
}

impl SymmetryClasses {
    /// Every vertex in its own class.
    pub fn trivial(n: usize) -> Self {
        SymmetryClasses {
            class_id: (0..n).collect(),
            members: (0..n).map(|v| vec![v]).collect(),
            kinds: vec![ClassKind::Singleton; n],
        }
    }

    /// Builds classes from arbitrary labels: vertices with equal labels share
    /// a class. Nontrivial classes are tagged negative; the solver only looks
    /// at membership.
    pub fn from_class_ids(labels: &[usize]) -> Self {
        let mut class_id = vec![0; labels.len()];
        let mut members: Vec<Vec<usize>> = Vec::new();
        let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
        for (v, &label) in labels.iter().enumerate() {
            let c = *seen.entry(label).or_insert_with(|| {
                members.push(Vec::new());
                members.len() - 1
            });
            class_id[v] = c;
            members[c].push(v);
        }
        let kinds = members
            .iter()
            .map(|m| if m.len() > 1 { ClassKind::Negative } else { ClassKind::Singleton })
            .collect();
        SymmetryClasses { class_id, members, kinds }
    }

    pub fn order(&self) -> usize {
        self.class_id.len()
    }

    #[inline]
    pub fn class_of(&self, v: usize) -> usize {
        self.class_id[v]
    }

    pub fn class_ids(&self) -> &[usize] {
        &self.class_id
    }

    pub fn class_count(&self) -> usize {
        self.members.len()
    }

    /// Sorted members of class `c`.
    pub fn members(&self, c: usize) -> &[usize] {
        &self.members[c]
    }

    pub fn kind(&self, c: usize) -> ClassKind {
        self.kinds[c]
    }

    /// Classes with at least two members, as `(kind, members)`.
    pub fn nontrivial(&self) -> impl Iterator<Item = (ClassKind, &[usize])> + '_ {
        self.members
            .iter()
            .zip(&self.kinds)
            .filter(|(m, _)| m.len() > 1)
            .map(|(m, &k)| (k, m.as_slice()))
    }

    /// Number of vertices that belong to a nontrivial class.
    pub fn symmetric_vertex_count(&self) -> usize {
        self.nontrivial().map(|(_, m)| m.len()).sum()
    }

    #[inline]
    pub fn are_symmetric(&self, u: usize, v: usize) -> bool {
        u != v && self.class_id[u] == self.class_id[v]
    }
}

/// `u ≡ v` for distinct vertices; a vertex is never reported symmetric to
/// itself.
#[inline]
pub fn are_symmetric(classes: &SymmetryClasses, u: usize, v: usize) -> bool {
    classes.are_symmetric(u, v)
}

fn sorted_with(members: impl Iterator<Item = usize>, extra: Option<usize>, looped: bool) -> Vec<usize> {
    let mut out: Vec<usize> = members.collect();
    if let Some(v) = extra {
        let at = out.partition_point(|&x| x < v);
        out.insert(at, v);
    }
    if looped {
        out.push(LOOP_SENTINEL);
    }
    out
}

fn neighborhood(g: &Graph, v: usize, polarity: Polarity) -> NeighborhoodKey {
    let looped = g.has_loop(v);
    let extra = (polarity == Polarity::Positive).then_some(v);
    let sets = if g.is_directed() {
        NeighborSets::Directed {
            incoming: sorted_with(g.in_neighbors(v), extra, looped),
            outgoing: sorted_with(g.out_neighbors(v), extra, looped),
        }
    } else {
        NeighborSets::Undirected(sorted_with(g.out_neighbors(v), extra, looped))
    };
    NeighborhoodKey { polarity, sets }
}

/// `N⁻(v)`: neighbours of `v`, plus the loop sentinel if `v` has a loop.
/// Digraphs give `(In(v), Out(v))`.
pub fn negative_neighborhood(g: &Graph, v: usize) -> NeighborhoodKey {
    neighborhood(g, v, Polarity::Negative)
}

/// `N⁺(v) = N⁻(v) ∪ {v}` (into both sides for digraphs).
pub fn positive_neighborhood(g: &Graph, v: usize) -> NeighborhoodKey {
    neighborhood(g, v, Polarity::Positive)
}

fn hash_row(hasher: &mut FxHasher, row: &[u64], extra: Option<usize>, looped: bool) {
    let mut pending = extra;
    for x in crate::bitset::ones(row) {
        if let Some(e) = pending.filter(|&e| e < x) {
            hasher.write_usize(e);
            pending = None;
        }
        hasher.write_usize(x);
    }
    if let Some(e) = pending {
        hasher.write_usize(e);
    }
    if looped {
        hasher.write_usize(LOOP_SENTINEL);
    }
}

/// Hash of the canonical key, computed straight from the adjacency rows.
/// Equal keys hash equally; the polarity tag keeps the two key spaces apart.
fn key_hash(g: &Graph, v: usize, polarity: Polarity) -> u64 {
    let mut hasher = FxHasher::default();
    hasher.write_u8(polarity as u8);
    let extra = (polarity == Polarity::Positive).then_some(v);
    let looped = g.has_loop(v);
    hash_row(&mut hasher, g.out_row(v), extra, looped);
    if g.is_directed() {
        hasher.write_u8(0xff);
        hash_row(&mut hasher, g.in_row(v), extra, looped);
    }
    hasher.finish()
}

fn rows_equal(a_row: &[u64], a_self: Option<usize>, b_row: &[u64], b_self: Option<usize>) -> bool {
    let with = |word: u64, wi: usize, extra: Option<usize>| match extra {
        Some(x) if x / 64 == wi => word | 1 << (x % 64),
        _ => word,
    };
    a_row
        .iter()
        .zip(b_row)
        .enumerate()
        .all(|(wi, (&a, &b))| with(a, wi, a_self) == with(b, wi, b_self))
}

fn keys_equal(g: &Graph, a: usize, b: usize, polarity: Polarity) -> bool {
    if g.has_loop(a) != g.has_loop(b) {
        return false;
    }
    let (sa, sb) = match polarity {
        Polarity::Negative => (None, None),
        Polarity::Positive => (Some(a), Some(b)),
    };
    rows_equal(g.out_row(a), sa, g.out_row(b), sb)
        && (!g.is_directed() || rows_equal(g.in_row(a), sa, g.in_row(b), sb))
}

/// For every vertex, the smallest vertex sharing its `polarity` key.
fn group_by_key(g: &Graph, polarity: Polarity) -> Vec<usize> {
    group_by_hash(g, polarity, key_hash)
}

fn group_by_hash(g: &Graph, polarity: Polarity, hash: impl Fn(&Graph, usize, Polarity) -> u64) -> Vec<usize> {
    let mut buckets: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    (0..g.order())
        .map(|v| {
            let bucket = buckets.entry(hash(g, v, polarity)).or_default();
            match bucket.iter().find(|&&r| keys_equal(g, r, v, polarity)) {
                Some(&r) => r,
                None => {
                    bucket.push(v);
                    v
                }
            }
        })
        .collect()
}

/// Groups the vertices of `g` into modular symmetry classes.
pub fn compute_symmetry_classes(g: &Graph) -> SymmetryClasses {
    let n = g.order();
    let neg = group_by_key(g, Polarity::Negative);
    let pos = group_by_key(g, Polarity::Positive);
    let mut neg_size = vec![0usize; n];
    let mut pos_size = vec![0usize; n];
    for v in 0..n {
        neg_size[neg[v]] += 1;
        pos_size[pos[v]] += 1;
    }

    const UNSET: usize = usize::MAX;
    let mut class_id = vec![UNSET; n];
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut kinds = Vec::new();
    // Which class a group representative opened, per polarity.
    let mut neg_class = vec![UNSET; n];
    let mut pos_class = vec![UNSET; n];
    for v in 0..n {
        let negative = neg_size[neg[v]] > 1;
        let positive = pos_size[pos[v]] > 1;
        debug_assert!(!(negative && positive), "vertex {v} in both symmetry kinds");
        let (slot, kind) = if negative {
            (&mut neg_class[neg[v]], ClassKind::Negative)
        } else if positive {
            (&mut pos_class[pos[v]], ClassKind::Positive)
        } else {
            class_id[v] = members.len();
            members.push(vec![v]);
            kinds.push(ClassKind::Singleton);
            continue;
        };
        if *slot == UNSET {
            *slot = members.len();
            members.push(Vec::new());
            kinds.push(kind);
        }
        class_id[v] = *slot;
        members[*slot].push(v);
    }
    SymmetryClasses { class_id, members, kinds }
}

/// True iff the transposition `(u v)` maps every arc (and loop) of `g` onto
/// an arc of `g`. Checks all ordered vertex pairs; for `u == v` the identity
/// is trivially an automorphism.
pub fn verify_swap_automorphism(g: &Graph, u: usize, v: usize) -> bool {
    let swap = |x: usize| {
        if x == u {
            v
        } else if x == v {
            u
        } else {
            x
        }
    };
    let n = g.order();
    (0..n).all(|a| (0..n).all(|b| g.has_edge(a, b) == g.has_edge(swap(a), swap(b))))
}
