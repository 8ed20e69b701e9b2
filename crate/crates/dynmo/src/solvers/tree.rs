//! Exact minimum seed sets on edge-weighted forests by leaf peeling.
//!
//! For a leaf `v` with neighbor `u` and edge weight `w`:
//! - `tau(v) > w`: `v` can never be activated from outside, so it is
//!   forced into the seed set and its influence lowers `tau(u)`;
//! - `0 < tau(v) <= w`: some minimum seed set avoids `v` (swap `v` for
//!   `u`), and since `v` then activates only after `u`, its upward
//!   influence never matters — remove `v`, thresholds unchanged;
//! - `tau(v) = 0`: `v` self-activates and its influence lowers `tau(u)`.
//!
//! Isolated remainders with positive thresholds are forced. Linear in the
//! size of the forest.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::WeightedInstance;
use crate::rational::Rational;
use crate::solvers::{verified_report, Method, SolveReport};

pub fn solve_tree(inst: &WeightedInstance) -> Result<SolveReport> {
    if inst.directed() {
        return Err(Error::Unsupported(
            "tree solver requires an undirected instance".into(),
        ));
    }
    let n = inst.n();
    let mut deg: Vec<usize> = (0..n).map(|v| inst.out_arcs(v).count()).collect();
    let mut tau: Vec<Rational> = inst.thresholds().to_vec();
    let mut alive = vec![true; n];
    let mut done = vec![false; n];
    let mut forced = Vec::new();

    let mut queue: VecDeque<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
    while let Some(v) = queue.pop_front() {
        if done[v] {
            continue;
        }
        done[v] = true;
        alive[v] = false;
        if deg[v] == 0 {
            if !tau[v].is_zero() {
                forced.push(v);
            }
            continue;
        }
        let (u, w) = inst
            .out_arcs(v)
            .find(|&(u, _)| alive[u])
            .expect("degree-one vertex has a live neighbor");
        if tau[v].is_zero() {
            tau[u] = tau[u].saturating_sub(w);
        } else if &tau[v] > w {
            forced.push(v);
            tau[u] = tau[u].saturating_sub(w);
        }
        deg[u] -= 1;
        if deg[u] <= 1 {
            queue.push_back(u);
        }
    }
    if alive.iter().any(|&a| a) {
        return Err(Error::Precondition(
            "instance is not a forest (cycle detected)".into(),
        ));
    }
    Ok(verified_report(inst, forced, Method::Tree, true, 0))
}
