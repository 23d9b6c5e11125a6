use alloc::vec;
use alloc::vec::Vec;

use super::partition::{first_min, flatten, pick_vertex, refine_into, Bidomain, Partition, Slice, ValueOrder};
use super::{Clock, NodeView, SearchObserver, SearchStats, Solution, SolverConfig};
use crate::graph::{Graph, Value, VertexMapping};
use crate::symmetry::SymmetryClasses;

/// Variable rule: assigning `value` to `v` is pruned when an earlier pair
/// `(v', u')` of `m` has `v' ≡ v` and `value <_H u'`.
pub fn var_sym_prunable(
    m: &VertexMapping,
    v: usize,
    value: Value,
    classes_g: &SymmetryClasses,
    order: &ValueOrder,
) -> bool {
    m.pairs()
        .iter()
        .any(|&(w, assigned)| classes_g.are_symmetric(w, v) && order.less(value, assigned))
}

/// Value rule: `u` is pruned when a symmetric `u' <_H u` is still available in
/// the same bidomain.
pub fn val_sym_prunable(bd: &Bidomain, u: usize, classes_h: &SymmetryClasses, order: &ValueOrder) -> bool {
    bd.right
        .iter()
        .any(|&w| classes_h.are_symmetric(w, u) && order.less(Value::Vertex(w), Value::Vertex(u)))
}

pub(crate) struct Search<'a, C, O> {
    g: &'a Graph,
    h: &'a Graph,
    classes_g: &'a SymmetryClasses,
    classes_h: &'a SymmetryClasses,
    config: &'a SolverConfig,
    clock: &'a C,
    observer: &'a mut O,
    order: ValueOrder,
    left: Vec<usize>,
    right: Vec<usize>,
    current: Vec<(usize, Value)>,
    matched: usize,
    incumbent: Vec<(usize, usize)>,
    /// Per variable class, the largest value rank given to any member on the
    /// current path. The variable rule fires when a new value ranks below it.
    class_max: Vec<Option<usize>>,
    saved_max: Vec<Option<usize>>,
    stats: SearchStats,
    stopped: bool,
    domain_pool: Vec<Vec<Slice>>,
    value_pool: Vec<Vec<usize>>,
}

impl<'a, C: Clock, O: SearchObserver> Search<'a, C, O> {
    pub(crate) fn new(
        g: &'a Graph,
        h: &'a Graph,
        classes_g: &'a SymmetryClasses,
        classes_h: &'a SymmetryClasses,
        config: &'a SolverConfig,
        clock: &'a C,
        observer: &'a mut O,
    ) -> Self {
        Search {
            g,
            h,
            classes_g,
            classes_h,
            config,
            clock,
            observer,
            order: ValueOrder::new(h, classes_h),
            left: Vec::new(),
            right: Vec::new(),
            current: Vec::with_capacity(g.order()),
            matched: 0,
            incumbent: Vec::new(),
            class_max: vec![None; classes_g.class_count()],
            saved_max: Vec::with_capacity(g.order()),
            stats: SearchStats::default(),
            stopped: false,
            domain_pool: Vec::new(),
            value_pool: Vec::new(),
        }
    }

    pub(crate) fn run(mut self) -> Solution {
        let (left, right, mut domains) = flatten(&Partition::initial(self.g, self.h));
        self.left = left;
        self.right = right;
        self.search(&mut domains);
        let mut stats = self.stats;
        stats.completed = !self.stopped;
        stats.incumbent_size = self.incumbent.len();
        stats.wall_time = self.clock.elapsed();
        Solution { mapping: self.incumbent.into_iter().collect(), stats }
    }

    fn out_of_time(&mut self) -> bool {
        if !self.stopped && self.stats.branches.is_multiple_of(self.config.branch_check_interval) {
            if let Some(limit) = self.config.timeout {
                self.stopped = self.clock.elapsed() >= limit;
            }
        }
        self.stopped
    }

    fn push(&mut self, v: usize, value: Value) {
        let c = self.classes_g.class_of(v);
        self.saved_max.push(self.class_max[c]);
        self.class_max[c] = self.class_max[c].max(Some(self.order.rank(value)));
        self.current.push((v, value));
        if value != Value::Unmatched {
            self.matched += 1;
        }
    }

    fn pop(&mut self) {
        let (v, value) = self.current.pop().expect("pop on empty mapping");
        let c = self.classes_g.class_of(v);
        self.class_max[c] = self.saved_max.pop().expect("unbalanced class_max stack");
        if value != Value::Unmatched {
            self.matched -= 1;
        }
    }

    fn search(&mut self, domains: &mut Vec<Slice>) {
        self.stats.branches += 1;
        if self.out_of_time() {
            return;
        }
        if self.matched > self.incumbent.len() {
            self.incumbent = self
                .current
                .iter()
                .filter_map(|&(v, val)| val.vertex().map(|u| (v, u)))
                .collect();
            self.stats.time_to_best = self.clock.elapsed();
            self.stats.branches_to_best = self.stats.branches;
        }
        let bound = self.matched + domains.iter().map(Slice::bound).sum::<usize>();
        self.observer.enter(&NodeView {
            mapping: &self.current,
            upper_bound: bound,
            incumbent_size: self.incumbent.len(),
            left: &self.left,
            right: &self.right,
            slices: domains,
        });
        if self.config.bound_pruning && bound <= self.incumbent.len() {
            self.stats.bound_prunes += 1;
        } else {
            self.branch(domains);
        }
        self.observer.leave();
    }

    fn branch(&mut self, domains: &mut Vec<Slice>) {
        let Some(bd_idx) = first_min(domains.iter().map(Slice::max_len)) else {
            return;
        };
        let bd = domains[bd_idx];
        let left_slice = &mut self.left[bd.l..bd.l + bd.left_len];
        let v = pick_vertex(left_slice, self.g).expect("bidomains are never empty");
        let at = left_slice.iter().position(|&x| x == v).unwrap();
        left_slice.swap(at, bd.left_len - 1);
        domains[bd_idx].left_len -= 1;

        let mut values = self.value_pool.pop().unwrap_or_default();
        values.clear();
        values.extend_from_slice(&self.right[bd.r..bd.r + bd.right_len]);
        let order = &self.order;
        values.sort_unstable_by_key(|&u| order.vertex_rank(u));

        // The value being tried sits in the last position of the slice,
        // outside the shortened bidomain the children are refined from.
        let last = bd.r + bd.right_len - 1;
        domains[bd_idx].right_len -= 1;
        let class_max = self.class_max[self.classes_g.class_of(v)];
        for i in 0..values.len() {
            if self.stopped {
                break;
            }
            let u = values[i];
            let var_hit = class_max.is_some_and(|m| self.order.vertex_rank(u) < m);
            // Symmetric values are contiguous in branching order, so a smaller
            // symmetric value exists iff the predecessor is in the same class.
            let val_hit = i > 0 && self.classes_h.class_of(values[i - 1]) == self.classes_h.class_of(u);
            self.observer.branch(v, Value::Vertex(u), var_hit, val_hit);
            if var_hit && self.config.var_sym {
                self.stats.var_sym_prunes += 1;
                continue;
            }
            if val_hit && self.config.val_sym {
                self.stats.val_sym_prunes += 1;
                continue;
            }
            let at = self.right[bd.r..=last].iter().position(|&y| y == u).unwrap();
            self.right.swap(bd.r + at, last);

            let mut child = self.domain_pool.pop().unwrap_or_default();
            child.clear();
            refine_into(domains, &mut self.left, &mut self.right, self.g, self.h, v, u, &mut child);
            self.push(v, Value::Vertex(u));
            self.search(&mut child);
            self.pop();
            self.domain_pool.push(child);
        }
        self.value_pool.push(values);
        domains[bd_idx].right_len += 1;
        if self.stopped {
            return;
        }

        if domains[bd_idx].left_len == 0 {
            domains.remove(bd_idx);
        }
        self.observer.branch(v, Value::Unmatched, false, false);
        self.push(v, Value::Unmatched);
        self.search(domains);
        self.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{order_values, solve_with, NoClock, NoopObserver};
    use crate::symmetry::compute_symmetry_classes;
    use crate::{is_isomorphism, Error};

    fn undirected(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, false, edges.iter().copied()).unwrap()
    }

    fn complete(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        undirected(n, &edges)
    }

    fn star(leaves: usize) -> Graph {
        let edges: Vec<_> = (1..=leaves).map(|l| (0, l)).collect();
        undirected(leaves + 1, &edges)
    }

    fn run(g: &Graph, h: &Graph, config: SolverConfig) -> Solution {
        solve_with(g, h, &config, &NoClock, &mut NoopObserver).unwrap()
    }

    fn all_configs() -> [SolverConfig; 4] {
        [SolverConfig::none(), SolverConfig::var_only(), SolverConfig::val_only(), SolverConfig::dual()]
    }

    /// Classes where `members` form one class and everything else is alone.
    fn classes_with(n: usize, members: &[usize]) -> SymmetryClasses {
        let ids: Vec<usize> = (0..n).map(|v| if members.contains(&v) { members[0] } else { v }).collect();
        SymmetryClasses::from_class_ids(&ids)
    }

    #[test]
    fn var_rule_examples() {
        // G vertices 7 and 9 symmetric; H vertex f numbered 5.
        let classes = classes_with(10, &[7, 9]);
        let order = ValueOrder::by_id(10);
        let mut m = VertexMapping::new();
        m.push(0, Value::Vertex(1));
        m.push(2, Value::Vertex(2));
        m.push(7, Value::Unmatched);
        assert!(var_sym_prunable(&m, 9, Value::Vertex(5), &classes, &order));

        let mut m = VertexMapping::new();
        m.push(0, Value::Vertex(1));
        m.push(2, Value::Vertex(2));
        m.push(7, Value::Vertex(5));
        assert!(!var_sym_prunable(&m, 9, Value::Unmatched, &classes, &order));
        assert!(var_sym_prunable(&m, 9, Value::Vertex(4), &classes, &order));
        assert!(!var_sym_prunable(&m, 9, Value::Vertex(6), &classes, &order));

        assert!(!var_sym_prunable(&VertexMapping::new(), 9, Value::Vertex(0), &classes, &order));

        // Under a degree-first order, value 6 can precede value 5.
        let order = ValueOrder::from_sequence(&[6, 5, 0, 1, 2, 3, 4, 7, 8, 9]);
        assert!(var_sym_prunable(&m, 9, Value::Vertex(6), &classes, &order));
        assert!(!var_sym_prunable(&m, 9, Value::Vertex(4), &classes, &order));
    }

    #[test]
    fn val_rule_examples() {
        // d=3, e=4 symmetric in H.
        let classes = classes_with(10, &[3, 4]);
        let order = ValueOrder::by_id(10);
        let bd = Bidomain::new([6], [3, 4, 5]);
        assert!(val_sym_prunable(&bd, 4, &classes, &order));
        assert!(!val_sym_prunable(&bd, 3, &classes, &order));
        assert!(!val_sym_prunable(&Bidomain::new([6], [4]), 4, &classes, &order));
    }

    #[test]
    fn fast_value_check_agrees_with_scan() {
        let h = undirected(7, &[(0, 1), (0, 2), (0, 3), (4, 5), (4, 6), (5, 6), (0, 4)]);
        let classes = compute_symmetry_classes(&h);
        let value_order = ValueOrder::new(&h, &classes);
        for mask in 1u32..(1 << 7) {
            let right: Vec<usize> = (0..7).filter(|&u| mask >> u & 1 == 1).collect();
            let bd = Bidomain::new([], right);
            let order = order_values(&bd, &h, &classes);
            for (i, &u) in order.iter().enumerate() {
                let fast = i > 0 && classes.class_of(order[i - 1]) == classes.class_of(u);
                assert_eq!(fast, val_sym_prunable(&bd, u, &classes, &value_order), "mask {mask:b} u {u}");
            }
        }
    }

    #[test]
    fn identical_complete_graphs() {
        for config in all_configs() {
            let sol = run(&complete(3), &complete(3), config);
            assert_eq!(sol.stats.incumbent_size, 3);
            assert!(sol.stats.completed);
            assert!(is_isomorphism(&complete(3), &complete(3), &sol.mapping));
        }
    }

    #[test]
    fn path_into_triangle() {
        // Every induced 3-vertex subgraph of K3 is a triangle, P3 is not; any
        // edge of P3 maps onto an edge of K3.
        let p3 = undirected(3, &[(0, 1), (1, 2)]);
        for config in all_configs() {
            let sol = run(&p3, &complete(3), config);
            assert_eq!(sol.stats.incumbent_size, 2);
            assert!(is_isomorphism(&p3, &complete(3), &sol.mapping));
        }
    }

    #[test]
    fn single_vertices() {
        let one = Graph::new(1, false);
        let sol = run(&one, &one, SolverConfig::dual());
        assert_eq!(sol.stats.incumbent_size, 1);
        assert!(sol.stats.branches >= 1);
        assert_eq!(sol.stats.branches_to_best, 2);
    }

    #[test]
    fn symmetric_stars_prune() {
        let dual = run(&star(3), &star(3), SolverConfig::dual());
        let none = run(&star(3), &star(3), SolverConfig::none());
        assert_eq!(dual.stats.incumbent_size, 4);
        assert_eq!(none.stats.incumbent_size, 4);
        assert!(dual.stats.branches < none.stats.branches);
        assert!(dual.stats.var_sym_prunes + dual.stats.val_sym_prunes > 0);
        assert_eq!(none.stats.var_sym_prunes + none.stats.val_sym_prunes, 0);
    }

    #[test]
    fn disabled_rules_never_count() {
        let var = run(&star(4), &star(5), SolverConfig::var_only());
        assert_eq!(var.stats.val_sym_prunes, 0);
        let val = run(&star(4), &star(5), SolverConfig::val_only());
        assert_eq!(val.stats.var_sym_prunes, 0);
    }

    #[test]
    fn loops_only_match_loops() {
        let looped = Graph::from_edges(2, false, [(0, 0), (1, 1)]).unwrap();
        let plain = Graph::new(3, false);
        for config in all_configs() {
            assert_eq!(run(&looped, &plain, config).stats.incumbent_size, 0);
        }
        let mixed = Graph::from_edges(3, false, [(0, 0)]).unwrap();
        assert_eq!(run(&looped, &mixed, SolverConfig::dual()).stats.incumbent_size, 1);
    }

    #[test]
    fn directed_orientation_matters() {
        let arc = Graph::from_edges(2, true, [(0, 1)]).unwrap();
        let back = Graph::from_edges(2, true, [(0, 1), (1, 0)]).unwrap();
        for config in all_configs() {
            assert_eq!(run(&arc, &back, config.clone()).stats.incumbent_size, 1);
            assert_eq!(run(&arc, &arc, config).stats.incumbent_size, 2);
        }
    }

    #[test]
    fn input_errors() {
        let u = Graph::new(2, false);
        let d = Graph::new(2, true);
        let config = SolverConfig::dual();
        assert_eq!(solve_with(&u, &d, &config, &NoClock, &mut NoopObserver), Err(Error::DirectednessMismatch));
        assert_eq!(
            solve_with(&Graph::new(0, false), &u, &config, &NoClock, &mut NoopObserver),
            Err(Error::EmptyGraph)
        );
    }

    struct Ticking(core::cell::Cell<u64>);

    impl Clock for Ticking {
        fn elapsed(&self) -> core::time::Duration {
            let t = self.0.get() + 1;
            self.0.set(t);
            core::time::Duration::from_millis(t)
        }
    }

    #[test]
    fn timeout_keeps_best_so_far() {
        let g = Graph::new(12, false);
        let config = SolverConfig { branch_check_interval: 1, ..SolverConfig::none() }
            .with_timeout(core::time::Duration::from_millis(5));
        let clock = Ticking(Default::default());
        let sol = solve_with(&g, &g, &config, &clock, &mut NoopObserver).unwrap();
        assert!(!sol.stats.completed);
        assert!(sol.stats.branches < 10);
        assert_eq!(sol.mapping.size(), sol.stats.incumbent_size);
        assert!(is_isomorphism(&g, &g, &sol.mapping));
    }
}
