//! Branch-and-bound search for a maximum common induced subgraph.

mod partition;
mod search;

use core::time::Duration;

pub use partition::{
    order_values, refine_partition, select_bidomain, select_vertex, upper_bound, Bidomain,
    Partition, ValueOrder,
};
pub use search::{val_sym_prunable, var_sym_prunable};

use crate::graph::{Graph, Value, VertexMapping};
use crate::symmetry::{compute_symmetry_classes, SymmetryClasses};
use crate::Error;

/// Which pruning rules run, and when to give up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    /// Prune assignments that conflict with an earlier symmetric variable.
    pub var_sym: bool,
    /// Branch only on the first member of each value symmetry class.
    pub val_sym: bool,
    /// Wall-clock budget measured by the [`Clock`] passed to the search.
    pub timeout: Option<Duration>,
    /// Search entries between clock reads. Must be at least 1.
    pub branch_check_interval: u64,
    /// Bound pruning is always on in normal use; switching it off enumerates
    /// the full search tree, which only diagnostics want.
    pub bound_pruning: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig::dual()
    }
}

impl SolverConfig {
    pub const DEFAULT_CHECK_INTERVAL: u64 = 1024;

    fn with_rules(var_sym: bool, val_sym: bool) -> Self {
        SolverConfig {
            var_sym,
            val_sym,
            timeout: None,
            branch_check_interval: Self::DEFAULT_CHECK_INTERVAL,
            bound_pruning: true,
        }
    }

    /// Both symmetry rules.
    pub fn dual() -> Self {
        Self::with_rules(true, true)
    }

    /// Plain bidomain branch and bound.
    pub fn none() -> Self {
        Self::with_rules(false, false)
    }

    pub fn var_only() -> Self {
        Self::with_rules(true, false)
    }

    pub fn val_only() -> Self {
        Self::with_rules(false, true)
    }

    /// Parses `dual`, `none`, `var` or `val`.
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "dual" => Some(Self::dual()),
            "none" => Some(Self::none()),
            "var" => Some(Self::var_only()),
            "val" => Some(Self::val_only()),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match (self.var_sym, self.val_sym) {
            (true, true) => "dual",
            (false, false) => "none",
            (true, false) => "var",
            (false, true) => "val",
        }
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = Some(timeout);
        self
    }
}

/// Elapsed time since the solve started.
pub trait Clock {
    fn elapsed(&self) -> Duration;
}

/// A clock that never advances: timeouts never fire and all reported times
/// are zero.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoClock;

impl Clock for NoClock {
    fn elapsed(&self) -> Duration {
        Duration::ZERO
    }
}

#[cfg(feature = "std")]
#[derive(Clone, Copy, Debug)]
pub struct InstantClock(std::time::Instant);

#[cfg(feature = "std")]
impl InstantClock {
    pub fn start() -> Self {
        InstantClock(std::time::Instant::now())
    }
}

#[cfg(feature = "std")]
impl Clock for InstantClock {
    fn elapsed(&self) -> Duration {
        self.0.elapsed()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Entries into the recursive search, including the root and the
    /// `(v, ⊥)` branches.
    pub branches: u64,
    pub bound_prunes: u64,
    pub var_sym_prunes: u64,
    pub val_sym_prunes: u64,
    pub incumbent_size: usize,
    pub time_to_best: Duration,
    pub branches_to_best: u64,
    /// False when the search stopped on timeout.
    pub completed: bool,
    /// Time spent computing both symmetry class maps.
    pub symmetry_time: Duration,
    /// Total time, symmetry detection included.
    pub wall_time: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    /// Matched pairs of the best mapping, in the order they were branched on.
    pub mapping: VertexMapping,
    pub stats: SearchStats,
}

/// Read-only view of a search node, handed to [`SearchObserver::enter`].
pub struct NodeView<'a> {
    pub mapping: &'a [(usize, Value)],
    pub upper_bound: usize,
    pub incumbent_size: usize,
    pub(crate) left: &'a [usize],
    pub(crate) right: &'a [usize],
    pub(crate) slices: &'a [partition::Slice],
}

impl NodeView<'_> {
    pub fn depth(&self) -> usize {
        self.mapping.len()
    }

    /// Matched pairs only.
    pub fn matched(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.mapping.iter().filter_map(|&(v, val)| val.vertex().map(|u| (v, u)))
    }

    pub fn bidomains(&self) -> impl Iterator<Item = (&[usize], &[usize])> + '_ {
        self.slices
            .iter()
            .map(|s| (&self.left[s.l..s.l + s.left_len], &self.right[s.r..s.r + s.right_len]))
    }

    pub fn partition(&self) -> Partition {
        partition::unflatten(self.left, self.right, self.slices)
    }
}

/// Hooks into the search, for tracing and diagnostics.
///
/// `enter`/`leave` bracket every search node. `branch` fires for every value
/// considered at a node, just before the child is entered or skipped, with
/// the verdicts of both symmetry rules whether or not they are enabled. The
/// `(v, ⊥)` branch is reported with both verdicts `false`.
pub trait SearchObserver {
    fn enter(&mut self, _node: &NodeView<'_>) {}
    fn leave(&mut self) {}
    fn branch(&mut self, _v: usize, _value: Value, _var_hit: bool, _val_hit: bool) {}
}

#[derive(Clone, Copy, Debug, Default)]
pub struct NoopObserver;

impl SearchObserver for NoopObserver {}

/// Solves with both symmetry class maps computed here. With the `std` feature
/// times are wall-clock; without it no clock is available and `timeout` is
/// ignored.
pub fn solve(g: &Graph, h: &Graph, config: &SolverConfig) -> Result<Solution, Error> {
    #[cfg(feature = "std")]
    let clock = InstantClock::start();
    #[cfg(not(feature = "std"))]
    let clock = NoClock;
    solve_with(g, h, config, &clock, &mut NoopObserver)
}

/// [`solve`] with an explicit clock and observer. Symmetry detection runs
/// after the clock has started, so it counts towards the timeout.
pub fn solve_with<C: Clock, O: SearchObserver>(
    g: &Graph,
    h: &Graph,
    config: &SolverConfig,
    clock: &C,
    observer: &mut O,
) -> Result<Solution, Error> {
    if g.is_directed() != h.is_directed() {
        return Err(Error::DirectednessMismatch);
    }
    if g.order() == 0 || h.order() == 0 {
        return Err(Error::EmptyGraph);
    }
    let start = clock.elapsed();
    let classes_g = compute_symmetry_classes(g);
    let classes_h = compute_symmetry_classes(h);
    let symmetry_time = clock.elapsed().saturating_sub(start);
    let mut solution = solve_with_classes(g, h, &classes_g, &classes_h, config, clock, observer);
    solution.stats.symmetry_time = symmetry_time;
    solution.stats.wall_time = clock.elapsed().saturating_sub(start);
    Ok(solution)
}

/// Runs the search with precomputed class maps. `SymmetryClasses::trivial`
/// turns a rule off just as the config flag does.
pub fn solve_with_classes<C: Clock, O: SearchObserver>(
    g: &Graph,
    h: &Graph,
    classes_g: &SymmetryClasses,
    classes_h: &SymmetryClasses,
    config: &SolverConfig,
    clock: &C,
    observer: &mut O,
) -> Solution {
    assert!(config.branch_check_interval >= 1, "branch_check_interval must be at least 1");
    search::Search::new(g, h, classes_g, classes_h, config, clock, observer).run()
}
