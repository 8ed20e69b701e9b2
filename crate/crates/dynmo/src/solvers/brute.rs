//! Exhaustive minimum search, the oracle every other solver is checked
//! against. Subsets are scanned in nondecreasing size with lexicographic
//! tie-break, so results are deterministic.

use crate::cascade::{self, CascadeGraph};
use crate::error::{Error, Result};
use crate::exec;
use crate::solvers::{verified_report, Method, SolveReport};

pub const DEFAULT_BRUTE_LIMIT: usize = 16;

/// All k-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k > n {
        return Vec::new();
    }
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut c: Vec<usize> = (0..k).collect();
    loop {
        out.push(c.clone());
        let mut i = k;
        while i > 0 && c[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        c[i - 1] += 1;
        for j in i..k {
            c[j] = c[j - 1] + 1;
        }
        let _ = c;
    }
    out
}

/// First (smallest, then lexicographically least) subset whose activation
/// covers the whole graph.
pub fn brute_force_min_dynmo<G>(g: &G, limit: usize) -> Result<SolveReport>
where
    G: CascadeGraph + Sync,
{
    let n = g.vertex_count();
    if n > limit {
        return Err(Error::Resource(format!(
            "brute force is limited to {limit} vertices, instance has {n}"
        )));
    }
    for k in 0..=n {
        let combos = combinations(n, k);
        let hit = exec::position_first(&combos, |seed| {
            cascade::is_dynamic_monopoly(g, seed).expect("enumerated seeds are valid")
        });
        if let Some(idx) = hit {
            return Ok(verified_report(g, combos[idx].clone(), Method::BruteForce, true, 0));
        }
    }
    unreachable!("the full vertex set is always a dynamic monopoly")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WeightedInstance;
    use crate::rational::Rational;

    fn ri(n: u64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(
            combinations(3, 2),
            vec![vec![0, 1], vec![0, 2], vec![1, 2]]
        );
        assert_eq!(combinations(2, 0), vec![Vec::<usize>::new()]);
        assert_eq!(combinations(2, 3), Vec::<Vec<usize>>::new());
    }

    #[test]
    fn triangle_with_majority_thresholds_needs_two() {
        let g = WeightedInstance::new(
            3,
            false,
            vec![(0, 1, ri(1)), (0, 2, ri(1)), (1, 2, ri(1))],
            vec![ri(2); 3],
        )
        .unwrap();
        let report = brute_force_min_dynmo(&g, DEFAULT_BRUTE_LIMIT).unwrap();
        assert_eq!(report.monopoly, vec![0, 1]);
        assert!(report.certified_minimum);
    }

    #[test]
    fn zero_thresholds_admit_the_empty_seed() {
        let g = WeightedInstance::new(3, false, vec![(0, 1, ri(1))], vec![ri(0); 3]).unwrap();
        let report = brute_force_min_dynmo(&g, DEFAULT_BRUTE_LIMIT).unwrap();
        assert!(report.monopoly.is_empty());
    }

    #[test]
    fn directed_arc_forces_the_source() {
        let g = WeightedInstance::new(2, true, vec![(0, 1, ri(1))], vec![ri(1), ri(1)]).unwrap();
        let report = brute_force_min_dynmo(&g, DEFAULT_BRUTE_LIMIT).unwrap();
        assert_eq!(report.monopoly, vec![0]);
    }

    #[test]
    fn limit_is_enforced() {
        let g = WeightedInstance::new(5, false, vec![], vec![ri(1); 5]).unwrap();
        assert!(matches!(
            brute_force_min_dynmo(&g, 4),
            Err(Error::Resource(_))
        ));
    }
}
