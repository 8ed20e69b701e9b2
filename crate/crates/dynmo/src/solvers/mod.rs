//! Seed-set construction: bounds, constructive algorithms, exact solvers
//! for special families, and the brute-force oracle.

pub mod brute;
pub mod cover;
pub mod family;
pub mod majority;
pub mod random;
pub mod tree;

pub use brute::{brute_force_min_dynmo, DEFAULT_BRUTE_LIMIT};
pub use cover::{vertex_cover_monopoly, vertex_cover_monopoly_multi, CoverMode};
pub use family::{family_f_order, solve_family_f};
pub use majority::{half_monopoly, ordering_split, strict_majority_thresholds, OrderingFunction};
pub use random::{
    expected_bound, monopoly_from_order, randomized_monopoly, randomized_monopoly_sizes,
    DEFAULT_NEIGHBOR_LIMIT,
};
pub use tree::solve_tree;

use crate::cascade::{self, ActivationTrace, CascadeGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    BruteForce,
    Majority,
    Random,
    VertexCover,
    FamilyF,
    Tree,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::BruteForce => "brute-force",
            Method::Majority => "majority",
            Method::Random => "random",
            Method::VertexCover => "vertex-cover",
            Method::FamilyF => "family-f",
            Method::Tree => "tree",
        }
    }
}

/// A solver result: the seed set, whether the size is a certified minimum,
/// and the activation trace of the seed on the solved instance.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub monopoly: Vec<usize>,
    pub certified_minimum: bool,
    pub method: Method,
    pub trace: ActivationTrace,
    pub rng_seed: u64,
}

impl SolveReport {
    pub fn size(&self) -> usize {
        self.monopoly.len()
    }
}

/// Wrap a solver output, re-running the cascade to confirm it actually is a
/// dynamic monopoly. A failure here is a solver defect, never a value.
pub(crate) fn verified_report<G: CascadeGraph>(
    g: &G,
    mut monopoly: Vec<usize>,
    method: Method,
    certified_minimum: bool,
    rng_seed: u64,
) -> SolveReport {
    monopoly.sort_unstable();
    monopoly.dedup();
    let trace = cascade::activate(g, &monopoly).expect("solver emitted an invalid vertex id");
    assert!(
        trace.is_complete(),
        "solver defect: {} result {:?} is not a dynamic monopoly",
        method.as_str(),
        monopoly
    );
    SolveReport {
        monopoly,
        certified_minimum,
        method,
        trace,
        rng_seed,
    }
}
