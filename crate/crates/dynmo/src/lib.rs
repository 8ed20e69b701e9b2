//! Irreversible threshold-based spread of influence on edge-weighted graphs
//! and integer multigraphs.
//!
//! The crate provides:
//!
//! - exact-arithmetic instances ([`WeightedInstance`], [`MultiInstance`])
//!   and the synchronous activation process ([`cascade`]);
//! - exact reductions: common-denominator scaling to multigraphs, the
//!   unit-weight gadget graph, and tree-decomposition transforms
//!   ([`reduction`], [`treedec`]);
//! - constructive seed-set algorithms and bounds: the strict-majority
//!   half construction, the random-permutation construction and its exact
//!   expected size, vertex-cover seeding, exact solvers for weighted trees
//!   and for 1-in-peelable digraphs, and a brute-force oracle ([`solvers`]);
//! - an interbank default-contagion model that maps exactly onto directed
//!   weighted activation ([`contagion`]);
//! - JSON/edge-list serialization and deterministic generators backing the
//!   CLI and the verification harness ([`io`], [`generate`], [`harness`]).
//!
//! Everything is exact: weights, thresholds and capitals are rationals,
//! comparisons have no epsilons, and floats appear only on request at
//! presentation time.

pub mod cascade;
pub mod contagion;
pub mod error;
pub mod exec;
pub mod graph;
pub mod generate;
pub mod harness;
pub mod io;
pub mod rational;
pub mod reduction;
pub mod solvers;
pub mod treedec;

pub use cascade::{activate, is_dynamic_monopoly, ActivationTrace, CascadeGraph};
pub use error::{Error, Result};
pub use graph::{Edge, MultiInstance, WeightedInstance};
pub use rational::Rational;
