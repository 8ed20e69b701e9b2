//! The random-permutation construction and its exact expected size.
//!
//! Walk the vertices in a uniformly random order and seed every vertex
//! whose earlier neighbors cannot meet its threshold; the result is always
//! a dynamic monopoly. The expected seed count has a closed form: for each
//! vertex, the probability that the neighbors preceding it carry too little
//! multiplicity, summed over all vertices. On simple unit-weight graphs it
//! collapses to `sum_v min(tau(v), d(v)+1) / (d(v)+1)`.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cascade::CascadeGraph;
use crate::error::{Error, Result};
use crate::exec;
use crate::graph::WeightedInstance;
use crate::rational::Rational;
use crate::reduction::to_multigraph;
use crate::solvers::{verified_report, Method, SolveReport};

pub const DEFAULT_NEIGHBOR_LIMIT: usize = 20;

/// Seeds chosen by one fixed vertex order: every vertex whose
/// predecessor influence falls short of its threshold.
pub fn monopoly_from_order<G: CascadeGraph>(g: &G, order: &[usize]) -> Result<Vec<usize>> {
    let n = g.vertex_count();
    if order.len() != n {
        return Err(Error::Precondition(format!(
            "order has {} entries, instance has {n} vertices",
            order.len()
        )));
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        if v >= n {
            return Err(Error::InvalidVertex { id: v, n });
        }
        if pos[v] != usize::MAX {
            return Err(Error::Precondition(format!("order repeats vertex {v}")));
        }
        pos[v] = i;
    }
    let mut seeds = Vec::new();
    for v in 0..n {
        let before = |u: usize| pos[u] < pos[v];
        if !g.met_by_set(v, &before) {
            seeds.push(v);
        }
    }
    Ok(seeds)
}

fn permutation(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    order
}

/// Draw a uniform permutation from `rng_seed` and seed against it. Valid
/// for every seed.
pub fn randomized_monopoly<G: CascadeGraph>(g: &G, rng_seed: u64) -> Result<SolveReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let order = permutation(g.vertex_count(), &mut rng);
    let seeds = monopoly_from_order(g, &order)?;
    Ok(verified_report(g, seeds, Method::Random, false, rng_seed))
}

/// Seed-set sizes over `trials` independent permutations; trial `i` uses
/// the RNG stream `(root_seed, i)`, so results do not depend on scheduling.
pub fn randomized_monopoly_sizes<G>(g: &G, root_seed: u64, trials: usize) -> Vec<usize>
where
    G: CascadeGraph + Sync,
{
    exec::map_indexed(trials, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(root_seed);
        rng.set_stream(i as u64);
        let order = permutation(g.vertex_count(), &mut rng);
        monopoly_from_order(g, &order)
            .expect("generated permutations are valid")
            .len()
    })
}

fn factorial(k: usize) -> BigInt {
    let mut acc = BigInt::from(1u32);
    for i in 2..=k {
        acc *= BigInt::from(i);
    }
    acc
}

/// Exact expected size of the permutation construction:
/// `sum_v sum_{S subset of N(v), m(S) < l*tau(v)} |S|! (d-|S|)! / (d+1)!`
/// with `d = |N(v)|` (in-neighbors when directed). Exponential in the
/// largest neighborhood, hence the limit.
pub fn expected_bound(inst: &WeightedInstance, neighbor_limit: usize) -> Result<Rational> {
    let (multi, _) = to_multigraph(inst)?;
    let mut total: Ratio<BigInt> = Ratio::zero();
    for v in 0..multi.n() {
        let nbrs: Vec<u64> = multi.in_arcs(v).map(|(_, m)| m).collect();
        let d = nbrs.len();
        if d > neighbor_limit {
            return Err(Error::Resource(format!(
                "vertex {v} has {d} neighbors; the expected-size bound is limited to {neighbor_limit}"
            )));
        }
        let tau = multi.threshold(v) as u128;
        if tau == 0 {
            continue; // no subset has negative influence
        }
        let mut counts = vec![0u64; d + 1];
        let mut sums = vec![0u128; 1usize << d];
        for mask in 0..(1usize << d) {
            if mask > 0 {
                let low = mask.trailing_zeros() as usize;
                sums[mask] = sums[mask & (mask - 1)] + nbrs[low] as u128;
            }
            if sums[mask] < tau {
                counts[mask.count_ones() as usize] += 1;
            }
        }
        let denom = factorial(d + 1);
        for (s, &count) in counts.iter().enumerate() {
            if count == 0 {
                continue;
            }
            let numer = factorial(s) * factorial(d - s) * BigInt::from(count);
            total += Ratio::new(numer, denom.clone());
        }
    }
    Rational::from_ratio(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ri(n: u64) -> Rational {
        Rational::from_integer(n)
    }

    fn r(n: u64, d: u64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn triangle(tau: u64) -> WeightedInstance {
        WeightedInstance::new(
            3,
            false,
            vec![(0, 1, ri(1)), (0, 2, ri(1)), (1, 2, ri(1))],
            vec![ri(tau); 3],
        )
        .unwrap()
    }

    #[test]
    fn triangle_first_vertex_is_the_only_seed() {
        let g = triangle(1);
        assert_eq!(monopoly_from_order(&g, &[0, 1, 2]).unwrap(), vec![0]);
    }

    #[test]
    fn first_vertex_is_seeded_whenever_threshold_positive() {
        let g = triangle(1);
        for order in [[0, 1, 2], [1, 0, 2], [2, 1, 0]] {
            let seeds = monopoly_from_order(&g, &order).unwrap();
            assert!(seeds.contains(&order[0]));
        }
    }

    #[test]
    fn heavy_edge_seeds_only_the_earlier_endpoint() {
        let g = WeightedInstance::new(2, false, vec![(0, 1, ri(2))], vec![ri(2), ri(2)]).unwrap();
        assert_eq!(monopoly_from_order(&g, &[0, 1]).unwrap(), vec![0]);
        assert_eq!(monopoly_from_order(&g, &[1, 0]).unwrap(), vec![1]);
        assert!(g.is_dynamic_monopoly(&[0]).unwrap());
    }

    #[test]
    fn every_rng_seed_yields_a_verified_monopoly() {
        let g = WeightedInstance::new(
            4,
            true,
            vec![(0, 1, r(1, 2)), (1, 2, ri(1)), (3, 1, ri(1))],
            vec![r(1, 2), ri(1), ri(1), ri(0)],
        )
        .unwrap();
        for seed in 0..40 {
            let report = randomized_monopoly(&g, seed).unwrap();
            assert!(report.trace.is_complete());
            assert_eq!(report.rng_seed, seed);
        }
    }

    #[test]
    fn sizes_are_reproducible_and_order_independent() {
        let g = triangle(2);
        let a = randomized_monopoly_sizes(&g, 7, 100);
        let b = randomized_monopoly_sizes(&g, 7, 100);
        assert_eq!(a, b);
    }

    #[test]
    fn expected_bound_on_unit_triangle_is_one() {
        assert_eq!(expected_bound(&triangle(1), 20).unwrap(), ri(1));
    }

    #[test]
    fn expected_bound_counts_multiplicities() {
        // Single edge of weight 2, thresholds 2: only the empty prefix
        // qualifies on each side, giving 1/2 + 1/2.
        let g = WeightedInstance::new(2, false, vec![(0, 1, ri(2))], vec![ri(2), ri(2)]).unwrap();
        assert_eq!(expected_bound(&g, 20).unwrap(), ri(1));
    }

    #[test]
    fn zero_threshold_vertices_contribute_nothing() {
        let g = WeightedInstance::new(2, false, vec![(0, 1, ri(1))], vec![ri(0), ri(0)]).unwrap();
        assert_eq!(expected_bound(&g, 20).unwrap(), ri(0));
    }

    #[test]
    fn neighbor_limit_is_enforced() {
        let star: Vec<_> = (1..6).map(|v| (0, v, ri(1))).collect();
        let g = WeightedInstance::new(6, false, star, vec![ri(1); 6]).unwrap();
        assert!(matches!(expected_bound(&g, 4), Err(Error::Resource(_))));
        assert!(expected_bound(&g, 5).is_ok());
    }

    #[test]
    fn directed_bound_uses_in_neighbors() {
        // Arc into 1 only: vertex 0 is always seeded, vertex 1 seeded
        // unless its single in-neighbor precedes it: 1 + 1/2.
        let g = WeightedInstance::new(2, true, vec![(0, 1, ri(1))], vec![ri(1), ri(1)]).unwrap();
        assert_eq!(expected_bound(&g, 20).unwrap(), r(3, 2));
    }
}
