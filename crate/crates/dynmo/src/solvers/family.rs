//! Exact solver for 1-in-peelable digraphs: graphs whose vertices can be
//! ordered so that each one has in-degree at most one within its prefix.
//! Membership is hereditary under removing a vertex of in-degree <= 1, so
//! a greedy peel recognizes the family.
//!
//! The solver peels vertices of current in-degree <= 1 (or with a spent
//! threshold, which self-activate regardless of in-degree):
//! - in-degree 0 and `tau(v) > 0`: `v` can only be seeded — force it, and
//!   credit its out-arcs against the targets' thresholds;
//! - `tau(v) = 0`: `v` self-activates; same credit, nothing forced;
//! - in-neighbor `u` with `tau(v) > w(u->v)`: `v` can never be activated
//!   from outside — force it as above;
//! - in-neighbor `u` with `0 < tau(v) <= w(u->v)`: `v` activates exactly
//!   when `u` does, so `v` is contracted into `u`: every arc `v->x`
//!   becomes `u->x`, parallel arcs merging by weight addition. Plain
//!   deletion would discard `v`'s outgoing influence and inflate the
//!   optimum.
//!
//! Contraction never raises an in-degree, but the contracted graph can
//! still fall out of the family (all remaining in-degrees >= 2); the
//! solver then stops with a not-in-family error and the caller may fall
//! back to the brute-force oracle.
//!
//! Arcs live in a flat arena; out-lists hold arena ids and tolerate dead
//! entries, which are dropped the next time a list is drained. Per-vertex
//! in-lists stay exact. Each contraction moves only the surviving arcs of
//! the removed vertex, so total work stays near-linear on instances whose
//! contraction chains do not pile up.

use std::collections::{BinaryHeap, VecDeque};

use crate::error::{Error, Result};
use crate::graph::WeightedInstance;
use crate::rational::Rational;
use crate::solvers::{verified_report, Method, SolveReport};

/// Witness ordering for membership, or `None` when peeling stalls.
/// Deterministic: among peelable vertices the largest id is removed first,
/// and the witness is the removal order reversed.
pub fn family_f_order(inst: &WeightedInstance) -> Result<Option<Vec<usize>>> {
    if !inst.directed() {
        return Err(Error::Unsupported(
            "family-f requires a directed instance".into(),
        ));
    }
    let n = inst.n();
    let mut in_deg: Vec<usize> = (0..n).map(|v| inst.in_arcs(v).count()).collect();
    let mut alive = vec![true; n];
    let mut removed = Vec::with_capacity(n);
    let mut heap: BinaryHeap<usize> = (0..n).filter(|&v| in_deg[v] <= 1).collect();
    while let Some(v) = heap.pop() {
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        removed.push(v);
        for (t, _) in inst.out_arcs(v) {
            if alive[t] {
                in_deg[t] -= 1;
                if in_deg[t] <= 1 {
                    heap.push(t);
                }
            }
        }
    }
    if removed.len() == n {
        removed.reverse();
        Ok(Some(removed))
    } else {
        Ok(None)
    }
}

struct Arc {
    src: u32,
    dst: u32,
    weight: Rational,
    live: bool,
}

/// Working digraph for the peel. Arcs sit in a flat arena; rerouting a
/// contracted vertex's arcs changes only their source, so the static
/// per-target in-rows stay complete forever and liveness flags do the
/// bookkeeping. Out-rows are static too, with a small spill list for arcs
/// gained by contraction.
struct Peeler {
    arcs: Vec<Arc>,
    out_off: Vec<u32>,
    out_ids: Vec<u32>,
    out_extra: Vec<Vec<u32>>,
    in_off: Vec<u32>,
    in_ids: Vec<u32>,
    in_count: Vec<u32>,
    tau: Vec<Rational>,
    alive: Vec<bool>,
    queue: VecDeque<usize>,
    chosen: Vec<usize>,
    remaining: usize,
}

impl Peeler {
    fn new(inst: &WeightedInstance) -> Self {
        let n = inst.n();
        let m = inst.edges().len();
        let mut arcs = Vec::with_capacity(m);
        let mut out_off = vec![0u32; n + 1];
        let mut in_off = vec![0u32; n + 1];
        for e in inst.edges() {
            arcs.push(Arc {
                src: e.u as u32,
                dst: e.v as u32,
                weight: e.weight.clone(),
                live: true,
            });
            out_off[e.u + 1] += 1;
            in_off[e.v + 1] += 1;
        }
        for i in 0..n {
            out_off[i + 1] += out_off[i];
            in_off[i + 1] += in_off[i];
        }
        let mut out_ids = vec![0u32; m];
        let mut in_ids = vec![0u32; m];
        let mut out_slot = out_off.clone();
        let mut in_slot = in_off.clone();
        for (id, arc) in arcs.iter().enumerate() {
            out_ids[out_slot[arc.src as usize] as usize] = id as u32;
            out_slot[arc.src as usize] += 1;
            in_ids[in_slot[arc.dst as usize] as usize] = id as u32;
            in_slot[arc.dst as usize] += 1;
        }
        let in_count: Vec<u32> = (0..n).map(|v| in_off[v + 1] - in_off[v]).collect();
        let tau: Vec<Rational> = inst.thresholds().to_vec();
        let queue = (0..n)
            .filter(|&v| in_count[v] <= 1 || tau[v].is_zero())
            .collect();
        Peeler {
            arcs,
            out_off,
            out_ids,
            out_extra: vec![Vec::new(); n],
            in_off,
            in_ids,
            in_count,
            tau,
            alive: vec![true; n],
            queue,
            chosen: Vec::new(),
            remaining: n,
        }
    }

    fn eligible(&self, v: usize) -> bool {
        self.in_count[v] <= 1 || self.tau[v].is_zero()
    }

    fn wake(&mut self, v: usize) {
        if self.alive[v] && self.eligible(v) {
            self.queue.push_back(v);
        }
    }

    /// Live arc ids currently leaving `v`; consumes the spill list.
    fn take_out(&mut self, v: usize) -> Vec<u32> {
        let row = &self.out_ids[self.out_off[v] as usize..self.out_off[v + 1] as usize];
        let mut ids: Vec<u32> = row
            .iter()
            .copied()
            .filter(|&a| self.arcs[a as usize].live && self.arcs[a as usize].src == v as u32)
            .collect();
        ids.extend(
            std::mem::take(&mut self.out_extra[v])
                .into_iter()
                .filter(|&a| self.arcs[a as usize].live && self.arcs[a as usize].src == v as u32),
        );
        ids
    }

    /// The live arc entering `v` with source `u`, if any.
    fn live_in_arc_from(&self, x: usize, u: u32) -> Option<u32> {
        self.in_ids[self.in_off[x] as usize..self.in_off[x + 1] as usize]
            .iter()
            .copied()
            .find(|&b| self.arcs[b as usize].live && self.arcs[b as usize].src == u)
    }

    /// The single live in-arc of an in-degree-one vertex.
    fn sole_in_arc(&self, v: usize) -> u32 {
        self.in_ids[self.in_off[v] as usize..self.in_off[v + 1] as usize]
            .iter()
            .copied()
            .find(|&b| self.arcs[b as usize].live)
            .expect("in-degree one")
    }

    fn kill_in_arcs(&mut self, v: usize) {
        for i in self.in_off[v] as usize..self.in_off[v + 1] as usize {
            let a = self.in_ids[i] as usize;
            self.arcs[a].live = false;
        }
        self.in_count[v] = 0;
    }

    /// Remove a vertex that is active from the start (seeded or
    /// self-activating): its out-influence lowers every target threshold.
    fn remove_active(&mut self, v: usize) {
        self.alive[v] = false;
        self.remaining -= 1;
        self.kill_in_arcs(v);
        for a in self.take_out(v) {
            let arc = &mut self.arcs[a as usize];
            arc.live = false;
            let x = arc.dst as usize;
            let w = arc.weight.clone();
            if !self.alive[x] {
                continue;
            }
            self.in_count[x] -= 1;
            self.tau[x] = self.tau[x].saturating_sub(&w);
            self.wake(x);
        }
    }

    /// `v` activates exactly when its sole in-neighbor `u` does: reroute
    /// `v`'s out-arcs through `u`, merging parallels by weight addition and
    /// dropping the `v -> u` arc as a self-loop.
    fn contract(&mut self, v: usize, u: usize) {
        self.alive[v] = false;
        self.remaining -= 1;
        self.kill_in_arcs(v);
        for a in self.take_out(v) {
            let x = self.arcs[a as usize].dst as usize;
            if !self.alive[x] {
                self.arcs[a as usize].live = false;
                continue;
            }
            if x == u {
                // would become a self-loop
                self.arcs[a as usize].live = false;
                self.in_count[u] -= 1;
                self.wake(u);
                continue;
            }
            match self.live_in_arc_from(x, u as u32) {
                Some(b) => {
                    let w = self.arcs[a as usize].weight.clone();
                    self.arcs[a as usize].live = false;
                    self.arcs[b as usize].weight += &w;
                    // parallel arcs merged: x lost an in-neighbor
                    self.in_count[x] -= 1;
                    self.wake(x);
                }
                None => {
                    self.arcs[a as usize].src = u as u32;
                    self.out_extra[u].push(a);
                }
            }
        }
    }
}

/// Certified-minimum seed set for members of the 1-in-peelable family.
/// Returns [`Error::NotInFamily`] if peeling stalls (the input was outside
/// the family, or a contraction pushed it outside).
pub fn solve_family_f(inst: &WeightedInstance) -> Result<SolveReport> {
    if !inst.directed() {
        return Err(Error::Unsupported(
            "family-f requires a directed instance".into(),
        ));
    }
    let mut p = Peeler::new(inst);
    while let Some(v) = p.queue.pop_front() {
        if !p.alive[v] {
            continue;
        }
        if p.tau[v].is_zero() {
            p.remove_active(v);
        } else if p.in_count[v] == 0 {
            p.chosen.push(v);
            p.remove_active(v);
        } else {
            debug_assert_eq!(p.in_count[v], 1);
            let a = p.sole_in_arc(v) as usize;
            let u = p.arcs[a].src as usize;
            if p.tau[v] > p.arcs[a].weight {
                p.chosen.push(v);
                p.remove_active(v);
            } else {
                p.contract(v, u);
            }
        }
    }
    if p.remaining > 0 {
        return Err(Error::NotInFamily(format!(
            "peeling stalled with {} vertices left; contraction left the 1-in-peelable family",
            p.remaining
        )));
    }
    Ok(verified_report(inst, p.chosen, Method::FamilyF, true, 0))
}
