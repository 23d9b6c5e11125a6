//! Exact maximum common induced subgraph (MCIS) search.
//!
//! The solver is a bidomain branch-and-bound in the McSplit family, extended
//! with two symmetry-breaking rules driven by *modular symmetry*: two vertices
//! are interchangeable when they share the same open neighbourhood (negative
//! symmetry) or the same closed neighbourhood (positive symmetry). Symmetric
//! vertices in the first graph (variables) and in the second graph (values)
//! are pruned independently, and the two rules stay complete when combined.
//!
//! The crate is `no_std` with `alloc`. The default `std` feature only adds
//! [`InstantClock`] for wall-clock timeouts.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(rust_2018_idioms)]

extern crate alloc;

mod bitset;
pub mod error;
pub mod graph;
pub mod oracle;
pub mod solver;
pub mod symmetry;

pub use error::Error;
pub use graph::{is_isomorphism, Graph, Value, VertexMapping};
pub use oracle::{brute_force_mcis, brute_force_mcis_capped, OracleResult, ORACLE_MAX_ORDER};
#[cfg(feature = "std")]
pub use solver::InstantClock;
pub use solver::{
    solve, solve_with, Clock, NoClock, NodeView, NoopObserver, SearchObserver, SearchStats,
    Solution, SolverConfig, ValueOrder,
};
pub use symmetry::{
    are_symmetric, compute_symmetry_classes, negative_neighborhood, positive_neighborhood,
    verify_swap_automorphism, ClassKind, NeighborhoodKey, SymmetryClasses,
};
