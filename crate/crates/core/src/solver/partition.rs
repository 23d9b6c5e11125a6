//! Bidomain partitions.
//!
//! The search keeps all unmatched vertices in two flat arrays, one per graph;
//! a bidomain is a pair of slices into them. Refinement permutes vertices in
//! place inside a slice, so a child partition reuses the parent's arrays and
//! backtracking needs no restore step: the parent only relies on each slice
//! holding the same *set* of vertices.

use alloc::vec::Vec;

use crate::graph::{Graph, Value, VertexMapping};
use crate::symmetry::SymmetryClasses;

/// Owned bidomain `⟨V_l, U_l⟩`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Bidomain {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl Bidomain {
    pub fn new(left: impl Into<Vec<usize>>, right: impl Into<Vec<usize>>) -> Self {
        Bidomain { left: left.into(), right: right.into() }
    }

    fn sorted(mut self) -> Self {
        self.left.sort_unstable();
        self.right.sort_unstable();
        self
    }
}

/// Owned partition, used at the public boundary and by tests. The search
/// itself works on [`Slice`]s.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Partition {
    pub bidomains: Vec<Bidomain>,
}

impl Partition {
    pub fn new(bidomains: Vec<Bidomain>) -> Self {
        Partition { bidomains }
    }

    /// The root partition. Vertices only match vertices with the same loop
    /// flag, so looped and loop-free vertices start in separate bidomains;
    /// without loops this is the single bidomain `⟨V(G), V(H)⟩`.
    pub fn initial(g: &Graph, h: &Graph) -> Self {
        let side = |graph: &Graph, looped: bool| -> Vec<usize> {
            (0..graph.order()).filter(|&v| graph.has_loop(v) == looped).collect()
        };
        let bidomains = [false, true]
            .into_iter()
            .map(|looped| Bidomain::new(side(g, looped), side(h, looped)))
            .filter(|bd| !bd.left.is_empty() && !bd.right.is_empty())
            .collect();
        Partition { bidomains }
    }

    pub fn is_empty(&self) -> bool {
        self.bidomains.is_empty()
    }
}

/// `⟨V_l, U_l⟩` as slices `left[l..l+left_len]`, `right[r..r+right_len]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Slice {
    pub l: usize,
    pub r: usize,
    pub left_len: usize,
    pub right_len: usize,
}

impl Slice {
    #[inline]
    pub fn max_len(&self) -> usize {
        self.left_len.max(self.right_len)
    }

    #[inline]
    pub fn bound(&self) -> usize {
        self.left_len.min(self.right_len)
    }
}

/// Flat layout of an owned partition.
pub(crate) fn flatten(p: &Partition) -> (Vec<usize>, Vec<usize>, Vec<Slice>) {
    let (mut left, mut right, mut slices) = (Vec::new(), Vec::new(), Vec::new());
    for bd in &p.bidomains {
        slices.push(Slice { l: left.len(), r: right.len(), left_len: bd.left.len(), right_len: bd.right.len() });
        left.extend_from_slice(&bd.left);
        right.extend_from_slice(&bd.right);
    }
    (left, right, slices)
}

pub(crate) fn unflatten(left: &[usize], right: &[usize], slices: &[Slice]) -> Partition {
    let bidomains = slices
        .iter()
        .map(|s| Bidomain::new(&left[s.l..s.l + s.left_len], &right[s.r..s.r + s.right_len]).sorted())
        .collect();
    Partition { bidomains }
}

/// Moves the elements satisfying `pred` to the front of `items`, returning
/// their count.
#[inline]
fn split_front(items: &mut [usize], mut pred: impl FnMut(usize) -> bool) -> usize {
    let mut front = 0;
    for j in 0..items.len() {
        if pred(items[j]) {
            items.swap(front, j);
            front += 1;
        }
    }
    front
}

/// Splits every bidomain of `domains` by adjacency to the new pair `(v, u)`
/// and appends the children with two non-empty sides to `out`.
///
/// Undirected graphs split two ways (adjacent / not adjacent). Digraphs split
/// four ways on `(v→x, x→v)` against `(u→y, y→u)`. `v` and `u` must already
/// be outside every slice.
#[allow(clippy::too_many_arguments)]
pub(crate) fn refine_into(
    domains: &[Slice],
    left: &mut [usize],
    right: &mut [usize],
    g: &Graph,
    h: &Graph,
    v: usize,
    u: usize,
    out: &mut Vec<Slice>,
) {
    for old in domains {
        let ls = &mut left[old.l..old.l + old.left_len];
        let rs = &mut right[old.r..old.r + old.right_len];
        let l_out = split_front(ls, |x| g.has_edge(v, x));
        let r_out = split_front(rs, |y| h.has_edge(u, y));
        if !g.is_directed() {
            push_pair(out, old, (l_out, old.left_len - l_out), (r_out, old.right_len - r_out));
            continue;
        }
        let l_out_in = split_front(&mut ls[..l_out], |x| g.has_edge(x, v));
        let l_in = split_front(&mut ls[l_out..], |x| g.has_edge(x, v));
        let r_out_in = split_front(&mut rs[..r_out], |y| h.has_edge(y, u));
        let r_in = split_front(&mut rs[r_out..], |y| h.has_edge(y, u));
        let l_parts = [l_out_in, l_out - l_out_in, l_in, old.left_len - l_out - l_in];
        let r_parts = [r_out_in, r_out - r_out_in, r_in, old.right_len - r_out - r_in];
        let (mut l_at, mut r_at) = (old.l, old.r);
        for (&ll, &rl) in l_parts.iter().zip(&r_parts) {
            if ll > 0 && rl > 0 {
                out.push(Slice { l: l_at, r: r_at, left_len: ll, right_len: rl });
            }
            l_at += ll;
            r_at += rl;
        }
    }
}

#[inline]
fn push_pair(out: &mut Vec<Slice>, old: &Slice, (l_adj, l_non): (usize, usize), (r_adj, r_non): (usize, usize)) {
    if l_adj > 0 && r_adj > 0 {
        out.push(Slice { l: old.l, r: old.r, left_len: l_adj, right_len: r_adj });
    }
    if l_non > 0 && r_non > 0 {
        out.push(Slice { l: old.l + l_adj, r: old.r + r_adj, left_len: l_non, right_len: r_non });
    }
}

/// `|M| + Σ min(|V_l|, |U_l|)`, counting only matched pairs of `m`.
pub fn upper_bound(m: &VertexMapping, p: &Partition) -> usize {
    m.size() + p.bidomains.iter().map(|bd| bd.left.len().min(bd.right.len())).sum::<usize>()
}

/// Index of the bidomain with the smallest `max(|V_l|, |U_l|)`; the first
/// such bidomain wins ties. `None` for an empty partition.
pub fn select_bidomain(p: &Partition) -> Option<usize> {
    let lens: Vec<usize> = p.bidomains.iter().map(|bd| bd.left.len().max(bd.right.len())).collect();
    first_min(lens.into_iter())
}

#[inline]
pub(crate) fn first_min(values: impl Iterator<Item = usize>) -> Option<usize> {
    let mut best: Option<(usize, usize)> = None;
    for (i, x) in values.enumerate() {
        if best.is_none_or(|(_, b)| x < b) {
            best = Some((i, x));
        }
    }
    best.map(|(i, _)| i)
}

/// Highest-degree vertex of `V_l`, lowest id on ties.
pub fn select_vertex(bd: &Bidomain, g: &Graph) -> Option<usize> {
    pick_vertex(&bd.left, g)
}

#[inline]
pub(crate) fn pick_vertex(candidates: &[usize], g: &Graph) -> Option<usize> {
    candidates
        .iter()
        .copied()
        .min_by_key(|&v| (core::cmp::Reverse(g.degree(v)), v))
}

/// The fixed total order `<_H` on values: degree descending, then symmetry
/// class, then vertex id, with ⊥ after every vertex. Values are branched on in
/// this order, and both symmetry rules compare values with it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueOrder {
    rank: Vec<usize>,
}

impl ValueOrder {
    pub fn new(h: &Graph, classes_h: &SymmetryClasses) -> Self {
        let mut order: Vec<usize> = (0..h.order()).collect();
        order.sort_unstable_by_key(|&u| value_key(h, classes_h, u));
        Self::from_sequence(&order)
    }

    /// Plain ascending vertex ids.
    pub fn by_id(n: usize) -> Self {
        ValueOrder { rank: (0..n).collect() }
    }

    /// `sequence[i]` is the `i`-th smallest vertex.
    pub fn from_sequence(sequence: &[usize]) -> Self {
        let mut rank = alloc::vec![0; sequence.len()];
        for (i, &u) in sequence.iter().enumerate() {
            rank[u] = i;
        }
        ValueOrder { rank }
    }

    /// Position of a value; ⊥ maps to `usize::MAX`.
    #[inline]
    pub fn rank(&self, value: Value) -> usize {
        match value {
            Value::Vertex(u) => self.rank[u],
            Value::Unmatched => usize::MAX,
        }
    }

    #[inline]
    pub(crate) fn vertex_rank(&self, u: usize) -> usize {
        self.rank[u]
    }

    #[inline]
    pub fn less(&self, a: Value, b: Value) -> bool {
        self.rank(a) < self.rank(b)
    }
}

#[inline]
fn value_key(h: &Graph, classes_h: &SymmetryClasses, u: usize) -> (core::cmp::Reverse<usize>, usize, usize) {
    (core::cmp::Reverse(h.degree(u)), classes_h.class_of(u), u)
}

/// `U_l` in branching order (degree descending, class id, vertex id). The
/// same order is used whichever pruning rules are enabled.
pub fn order_values(bd: &Bidomain, h: &Graph, classes_h: &SymmetryClasses) -> Vec<usize> {
    let mut values = bd.right.clone();
    values.sort_unstable_by_key(|&u| value_key(h, classes_h, u));
    values
}

/// Splits every bidomain of `p` by adjacency to the new pair `(v, u)`,
/// dropping children with an empty side. `v` and `u` must already have been
/// removed from `p`.
pub fn refine_partition(p: &Partition, v: usize, u: usize, g: &Graph, h: &Graph) -> Partition {
    let (mut left, mut right, slices) = flatten(p);
    let mut out = Vec::new();
    refine_into(&slices, &mut left, &mut right, g, h, v, u, &mut out);
    unflatten(&left, &right, &out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetry::compute_symmetry_classes;
    use alloc::vec;

    fn sized(l: usize, r: usize) -> Bidomain {
        Bidomain::new((0..l).collect::<Vec<_>>(), (0..r).collect::<Vec<_>>())
    }

    fn path3() -> Graph {
        Graph::from_edges(3, false, [(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn bound_examples() {
        let m = VertexMapping::new();
        assert_eq!(upper_bound(&m, &Partition::new(vec![sized(10, 10)])), 10);
        assert_eq!(upper_bound(&m, &Partition::default()), 0);

        // Two matched pairs, ⟨{1},{b,c}⟩ and ⟨{4,5,7,9},{f,h,i}⟩ with
        // a..j numbered 0..9.
        let m: VertexMapping = [(0, 0), (3, 3)].into_iter().collect();
        let p = Partition::new(vec![Bidomain::new([1], [1, 2]), Bidomain::new([4, 5, 7, 9], [5, 7, 8])]);
        assert_eq!(upper_bound(&m, &p), 6);

        let mut with_bottom = m.clone();
        with_bottom.push(6, Value::Unmatched);
        assert_eq!(upper_bound(&with_bottom, &p), 6);
    }

    #[test]
    fn bidomain_selection() {
        assert_eq!(select_bidomain(&Partition::new(vec![sized(3, 5), sized(2, 2)])), Some(1));
        assert_eq!(select_bidomain(&Partition::new(vec![sized(1, 1), sized(1, 1)])), Some(0));
        assert_eq!(select_bidomain(&Partition::new(vec![sized(4, 2)])), Some(0));
        assert_eq!(select_bidomain(&Partition::default()), None);
    }

    #[test]
    fn vertex_selection() {
        let g = path3();
        assert_eq!(select_vertex(&Bidomain::new([0, 1], []), &g), Some(1));
        assert_eq!(select_vertex(&Bidomain::new([2, 0], []), &g), Some(0));
        let big = Graph::new(6, false);
        assert_eq!(select_vertex(&Bidomain::new([5], []), &big), Some(5));
    }

    #[test]
    fn value_ordering() {
        let flat = Graph::new(4, false);
        let classes = SymmetryClasses::trivial(4);
        assert_eq!(order_values(&Bidomain::new([], [3, 1, 2, 0]), &flat, &classes), vec![0, 1, 2, 3]);
        assert_eq!(order_values(&Bidomain::new([], [2]), &flat, &classes), vec![2]);

        // Star with centre 3: the centre first, then the leaf class in id order.
        let star = Graph::from_edges(4, false, [(3, 0), (3, 1), (3, 2)]).unwrap();
        let classes = compute_symmetry_classes(&star);
        assert_eq!(order_values(&Bidomain::new([], [2, 0, 3, 1]), &star, &classes), vec![3, 0, 1, 2]);
        let order = ValueOrder::new(&star, &classes);
        assert_eq!((0..4).map(|u| order.rank(Value::Vertex(u))).collect::<Vec<_>>(), vec![1, 2, 3, 0]);
        assert!(order.less(Value::Vertex(3), Value::Vertex(0)));
        assert!(order.less(Value::Vertex(2), Value::Unmatched));
    }

    #[test]
    fn refine_splits_by_adjacency() {
        // G: 0 adjacent to 1 and 2; H: 0 adjacent to 1 only.
        let g = Graph::from_edges(4, false, [(0, 1), (0, 2)]).unwrap();
        let h = Graph::from_edges(4, false, [(0, 1)]).unwrap();
        let p = Partition::new(vec![Bidomain::new([1, 2, 3], [1, 2, 3])]);
        let refined = refine_partition(&p, 0, 0, &g, &h);
        assert_eq!(
            refined,
            Partition::new(vec![Bidomain::new([1, 2], [1]), Bidomain::new([3], [2, 3])])
        );
    }

    #[test]
    fn refine_drops_one_sided_children() {
        // Everything in V_l is adjacent to v, nothing in U_l to u.
        let g = Graph::from_edges(3, false, [(0, 1), (0, 2)]).unwrap();
        let h = Graph::new(3, false);
        let p = Partition::new(vec![Bidomain::new([1, 2], [1, 2])]);
        assert!(refine_partition(&p, 0, 0, &g, &h).is_empty());
        assert!(refine_partition(&Partition::default(), 0, 0, &g, &h).is_empty());
    }

    #[test]
    fn directed_refine_is_four_way() {
        // v=0: 0→1, 2→0, 0↔3, 4 unrelated. u=0 in H mirrors it with ids shuffled.
        let g = Graph::from_edges(5, true, [(0, 1), (2, 0), (0, 3), (3, 0)]).unwrap();
        let h = Graph::from_edges(5, true, [(0, 4), (3, 0), (0, 2), (2, 0)]).unwrap();
        let p = Partition::new(vec![Bidomain::new([1, 2, 3, 4], [1, 2, 3, 4])]);
        let mut got = refine_partition(&p, 0, 0, &g, &h).bidomains;
        got.sort_by_key(|bd| bd.left.clone());
        assert_eq!(
            got,
            vec![
                Bidomain::new([1], [4]),
                Bidomain::new([2], [3]),
                Bidomain::new([3], [2]),
                Bidomain::new([4], [1]),
            ]
        );
    }

    #[test]
    fn initial_partition_separates_loops() {
        let g = Graph::from_edges(3, false, [(1, 1)]).unwrap();
        let h = Graph::from_edges(2, false, [(0, 1)]).unwrap();
        let p = Partition::initial(&g, &h);
        assert_eq!(p, Partition::new(vec![Bidomain::new([0, 2], [0, 1])]));
        let p = Partition::initial(&g, &g);
        assert_eq!(p.bidomains.len(), 2);
    }

    #[test]
    fn first_min_prefers_lowest_index() {
        assert_eq!(first_min([3usize, 1, 1, 2].into_iter()), Some(1));
        assert_eq!(first_min(core::iter::empty()), None);
    }
}
