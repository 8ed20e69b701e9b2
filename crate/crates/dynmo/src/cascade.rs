//! The synchronous irreversible activation process.
//!
//! Starting from a seed set `D0`, every inactive vertex whose entering
//! influence from the currently active set meets its threshold activates in
//! the next phase, all updates applied simultaneously. Activation is
//! monotone, so the process reaches a fixpoint after at most `n` phases.
//! A seed whose fixpoint is the whole vertex set is a dynamic monopoly.

use crate::error::{Error, Result};
use crate::graph::{MultiInstance, WeightedInstance};
use crate::rational::Rational;

/// Instance kinds the activation engine runs on. `Load` is the exact
/// influence accumulator: rational for weighted instances, integer for
/// multigraphs.
pub trait CascadeGraph {
    type Load: Clone;

    fn vertex_count(&self) -> usize;
    fn zero_load(&self) -> Self::Load;
    /// Add `from`'s outgoing influence into `acc`, reporting each touched
    /// target. Targets flagged in `skip` are already active; their
    /// accumulators are never read again and the work is saved.
    fn accumulate_from(
        &self,
        from: usize,
        acc: &mut [Self::Load],
        skip: &[bool],
        on_touch: &mut dyn FnMut(usize),
    );
    /// Does an accumulated load meet `v`'s threshold (`load >= tau(v)`)?
    fn met(&self, v: usize, load: &Self::Load) -> bool;
    fn threshold_is_zero(&self, v: usize) -> bool;
    /// Does the influence entering `v` from vertices satisfying `active`
    /// meet `v`'s threshold?
    fn met_by_set(&self, v: usize, active: &dyn Fn(usize) -> bool) -> bool;
}

impl CascadeGraph for WeightedInstance {
    type Load = Rational;

    fn vertex_count(&self) -> usize {
        self.n()
    }

    fn zero_load(&self) -> Rational {
        Rational::zero()
    }

    fn accumulate_from(
        &self,
        from: usize,
        acc: &mut [Rational],
        skip: &[bool],
        on_touch: &mut dyn FnMut(usize),
    ) {
        for (t, w) in self.out_arcs(from) {
            if !skip[t] {
                acc[t] += w;
                on_touch(t);
            }
        }
    }

    fn met(&self, v: usize, load: &Rational) -> bool {
        load >= self.threshold(v)
    }

    fn threshold_is_zero(&self, v: usize) -> bool {
        self.threshold(v).is_zero()
    }

    fn met_by_set(&self, v: usize, active: &dyn Fn(usize) -> bool) -> bool {
        let tau = self.threshold(v);
        let mut sum = Rational::zero();
        if &sum >= tau {
            return true;
        }
        for (s, w) in self.in_arcs(v) {
            if active(s) {
                sum += w;
                if &sum >= tau {
                    return true;
                }
            }
        }
        false
    }
}

impl CascadeGraph for MultiInstance {
    type Load = u128;

    fn vertex_count(&self) -> usize {
        self.n()
    }

    fn zero_load(&self) -> u128 {
        0
    }

    fn accumulate_from(
        &self,
        from: usize,
        acc: &mut [u128],
        skip: &[bool],
        on_touch: &mut dyn FnMut(usize),
    ) {
        for (t, m) in self.out_arcs(from) {
            if !skip[t] {
                acc[t] += m as u128;
                on_touch(t);
            }
        }
    }

    fn met(&self, v: usize, load: &u128) -> bool {
        *load >= self.threshold(v) as u128
    }

    fn threshold_is_zero(&self, v: usize) -> bool {
        self.threshold(v) == 0
    }

    fn met_by_set(&self, v: usize, active: &dyn Fn(usize) -> bool) -> bool {
        let tau = self.threshold(v) as u128;
        let mut sum: u128 = 0;
        if sum >= tau {
            return true;
        }
        for (s, m) in self.in_arcs(v) {
            if active(s) {
                sum += m as u128;
                if sum >= tau {
                    return true;
                }
            }
        }
        false
    }
}

/// Full record of one activation run: the seed, the set of vertices newly
/// activated in each phase, and the fixpoint.
///
/// Phases are stored as per-phase deltas (total size `O(n)`); cumulative
/// phase sets are materialized on demand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActivationTrace {
    n: usize,
    deltas: Vec<Vec<usize>>,
    fixpoint: Vec<usize>,
}

impl ActivationTrace {
    /// Number of propagation rounds `t` (the trace holds `D0..Dt`).
    pub fn rounds(&self) -> usize {
        self.deltas.len() - 1
    }

    pub fn seed(&self) -> &[usize] {
        &self.deltas[0]
    }

    /// Vertices newly activated in each phase; entry 0 is the seed.
    pub fn newly_active(&self) -> &[Vec<usize>] {
        &self.deltas
    }

    /// Cumulative phase sets `D0 ⊆ D1 ⊆ … ⊆ Dt`, each sorted.
    pub fn phases(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::with_capacity(self.deltas.len());
        let mut current: Vec<usize> = Vec::new();
        for delta in &self.deltas {
            current.extend_from_slice(delta);
            current.sort_unstable();
            out.push(current.clone());
        }
        out
    }

    /// Final active set, sorted.
    pub fn fixpoint(&self) -> &[usize] {
        &self.fixpoint
    }

    pub fn is_complete(&self) -> bool {
        self.fixpoint.len() == self.n
    }

    /// Phase at which `v` became active (0 for seeds), or `None`.
    pub fn activation_round(&self, v: usize) -> Option<usize> {
        self.deltas.iter().position(|delta| delta.contains(&v))
    }
}

/// Run the activation process to its fixpoint.
pub fn activate<G: CascadeGraph>(g: &G, seed: &[usize]) -> Result<ActivationTrace> {
    let n = g.vertex_count();
    for &v in seed {
        if v >= n {
            return Err(Error::InvalidVertex { id: v, n });
        }
    }
    let mut seed: Vec<usize> = seed.to_vec();
    seed.sort_unstable();
    seed.dedup();

    let mut active = vec![false; n];
    let mut acc: Vec<G::Load> = (0..n).map(|_| g.zero_load()).collect();
    for &v in &seed {
        active[v] = true;
    }

    // Candidates for the next phase: vertices whose accumulator changed,
    // plus (in phase 1 only) zero-threshold vertices, which the empty sum
    // already satisfies.
    let mut touched: Vec<usize> = Vec::new();
    let mut is_touched = vec![false; n];
    for &v in &seed {
        g.accumulate_from(v, &mut acc, &active, &mut |t| {
            if !is_touched[t] {
                is_touched[t] = true;
                touched.push(t);
            }
        });
    }
    for v in 0..n {
        if !active[v] && !is_touched[v] && g.threshold_is_zero(v) {
            is_touched[v] = true;
            touched.push(v);
        }
    }

    let mut deltas = vec![seed];
    loop {
        let mut next: Vec<usize> = touched
            .iter()
            .copied()
            .filter(|&v| !active[v] && g.met(v, &acc[v]))
            .collect();
        for &v in &touched {
            is_touched[v] = false;
        }
        touched.clear();
        if next.is_empty() {
            break;
        }
        next.sort_unstable();
        for &v in &next {
            active[v] = true;
        }
        for &v in &next {
            g.accumulate_from(v, &mut acc, &active, &mut |t| {
                if !is_touched[t] {
                    is_touched[t] = true;
                    touched.push(t);
                }
            });
        }
        deltas.push(next);
    }

    let fixpoint: Vec<usize> = (0..n).filter(|&v| active[v]).collect();
    Ok(ActivationTrace { n, deltas, fixpoint })
}

/// True iff activation from `seed` reaches every vertex.
pub fn is_dynamic_monopoly<G: CascadeGraph>(g: &G, seed: &[usize]) -> Result<bool> {
    Ok(activate(g, seed)?.is_complete())
}

impl WeightedInstance {
    pub fn activate(&self, seed: &[usize]) -> Result<ActivationTrace> {
        activate(self, seed)
    }

    pub fn is_dynamic_monopoly(&self, seed: &[usize]) -> Result<bool> {
        is_dynamic_monopoly(self, seed)
    }
}

impl MultiInstance {
    pub fn activate(&self, seed: &[usize]) -> Result<ActivationTrace> {
        activate(self, seed)
    }

    pub fn is_dynamic_monopoly(&self, seed: &[usize]) -> Result<bool> {
        is_dynamic_monopoly(self, seed)
    }
}
