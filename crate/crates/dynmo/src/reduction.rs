//! Exact structural reductions.
//!
//! A rational-weighted instance scales by the common denominator `l` into an
//! integer multigraph with identical activation behaviour, phase by phase.
//! An undirected multigraph in turn unfolds into a simple unit-weight graph:
//! each bundle of `k` parallel edges becomes one direct edge plus `k - 1`
//! length-two paths through threshold-1 middle vertices. Seed sets keep
//! their monopoly status across both steps.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::graph::{MultiInstance, WeightedInstance};
use crate::rational::Rational;

/// Least common multiple of every edge-weight denominator and every
/// threshold denominator, so that `l*w(e)` and `l*tau(v)` are all integers.
/// An instance with only integer values yields 1.
pub fn common_scale(inst: &WeightedInstance) -> BigInt {
    let mut l = BigInt::one();
    for e in inst.edges() {
        l = l.lcm(&e.weight.denom_big());
    }
    for t in inst.thresholds() {
        l = l.lcm(&t.denom_big());
    }
    l
}

fn scale_to_u64(value: &Rational, l: &BigInt, what: &str) -> Result<u64> {
    let scaled = value
        .scaled_integer(l)
        .unwrap_or_else(|| unreachable!("common scale clears every denominator"));
    scaled
        .to_u64()
        .ok_or_else(|| Error::Resource(format!("scaled {what} {scaled} exceeds u64")))
}

/// Scale a weighted instance into the equivalent integer multigraph.
/// Vertices keep their ids; returns the multigraph and the scale `l`.
/// Multiplicities are `l*w(uv)`, thresholds `l*tau(v)`; zero-weight edges
/// carry no influence and are dropped.
pub fn to_multigraph(inst: &WeightedInstance) -> Result<(MultiInstance, u64)> {
    let l = common_scale(inst);
    let scale = l
        .to_u64()
        .ok_or_else(|| Error::Resource(format!("common scale {l} exceeds u64")))?;
    let mut mults = Vec::with_capacity(inst.edges().len());
    for e in inst.edges() {
        let m = scale_to_u64(&e.weight, &l, "weight")?;
        if m > 0 {
            mults.push((e.u, e.v, m));
        }
    }
    let mut taus = Vec::with_capacity(inst.n());
    for t in inst.thresholds() {
        taus.push(scale_to_u64(t, &l, "threshold")?);
    }
    let multi = MultiInstance::new(inst.n(), inst.directed(), mults, taus)?;
    Ok((multi, scale))
}

/// Correspondence between an instance and its unit-weight gadget graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetMap {
    /// The common scale `l` used to integerize weights.
    pub scale: u64,
    /// Original vertices keep ids `0..original_count` in the gadget.
    pub original_count: usize,
    /// Middle-vertex ids per original edge (key normalized `u < v`);
    /// an edge with `l*w = k` gets exactly `k - 1` middles.
    pub middles: BTreeMap<(usize, usize), Vec<usize>>,
}

/// Unfold an undirected instance into a simple unit-weight graph with the
/// same optimum seed-set size. Middle vertices are appended after the
/// original ids in sorted edge order.
pub fn gadget(inst: &WeightedInstance) -> Result<(WeightedInstance, GadgetMap)> {
    if inst.directed() {
        return Err(Error::Unsupported(
            "gadget construction requires an undirected instance".into(),
        ));
    }
    let l = common_scale(inst);
    let scale = l
        .to_u64()
        .ok_or_else(|| Error::Resource(format!("common scale {l} exceeds u64")))?;

    let n = inst.n();
    let one = Rational::one();
    let mut edges: Vec<(usize, usize, Rational)> = Vec::new();
    let mut middles = BTreeMap::new();
    let mut next_id = n;
    for e in inst.edges() {
        if e.weight.is_zero() {
            continue;
        }
        let k = scale_to_u64(&e.weight, &l, "weight")?;
        edges.push((e.u, e.v, one.clone()));
        let mut mids = Vec::new();
        for _ in 1..k {
            let mid = next_id;
            next_id += 1;
            edges.push((e.u, mid, one.clone()));
            edges.push((mid, e.v, one.clone()));
            mids.push(mid);
        }
        middles.insert((e.u, e.v), mids);
    }

    let mut thresholds = Vec::with_capacity(next_id);
    for t in inst.thresholds() {
        let scaled = t
            .scaled_integer(&l)
            .unwrap_or_else(|| unreachable!("common scale clears every denominator"));
        thresholds.push(Rational::from_ratio(num_rational::Ratio::from_integer(scaled))?);
    }
    thresholds.resize(next_id, Rational::one());

    let h = WeightedInstance::new(next_id, false, edges, thresholds)?;
    Ok((
        h,
        GadgetMap {
            scale,
            original_count: n,
            middles,
        },
    ))
}

/// Weighted-treewidth quantity `max(tw_g, max_e l*w(e))`, given a trusted
/// treewidth (or upper bound) `tw_g` for the unweighted shadow of the
/// instance. Edgeless instances return `tw_g`.
pub fn tw_weight(inst: &WeightedInstance, tw_g: usize) -> Result<usize> {
    let l = common_scale(inst);
    let mut best = tw_g;
    for e in inst.edges() {
        let k = scale_to_u64(&e.weight, &l, "weight")? as usize;
        best = best.max(k);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: u64, d: u64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn ri(n: u64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn common_scale_examples() {
        let g = WeightedInstance::new(
            3,
            false,
            vec![(0, 1, r(3, 2)), (1, 2, r(1, 3))],
            vec![ri(1); 3],
        )
        .unwrap();
        assert_eq!(common_scale(&g), BigInt::from(6));

        let g = WeightedInstance::new(2, false, vec![(0, 1, ri(4))], vec![ri(2); 2]).unwrap();
        assert_eq!(common_scale(&g), BigInt::from(1));

        let g = WeightedInstance::new(2, false, vec![(0, 1, r(1, 4))], vec![r(1, 6), ri(0)]).unwrap();
        assert_eq!(common_scale(&g), BigInt::from(12));
    }

    #[test]
    fn multigraph_of_single_fractional_edge() {
        let g = WeightedInstance::new(2, false, vec![(0, 1, r(3, 2))], vec![ri(1), ri(1)]).unwrap();
        let (m, scale) = to_multigraph(&g).unwrap();
        assert_eq!(scale, 2);
        assert_eq!(m.pairs(), &[(0, 1, 3)]);
        assert_eq!(m.thresholds(), &[2, 2]);
    }

    #[test]
    fn multigraph_of_directed_arc() {
        let g = WeightedInstance::new(2, true, vec![(0, 1, r(1, 3))], vec![ri(0), r(2, 3)]).unwrap();
        let (m, scale) = to_multigraph(&g).unwrap();
        assert_eq!(scale, 3);
        assert!(m.directed());
        assert_eq!(m.pairs(), &[(0, 1, 1)]);
        assert_eq!(m.threshold(1), 2);
    }

    #[test]
    fn integer_instance_maps_identically() {
        let g = WeightedInstance::new(
            3,
            false,
            vec![(0, 1, ri(1)), (1, 2, ri(1)), (0, 2, ri(1))],
            vec![ri(2); 3],
        )
        .unwrap();
        let (m, scale) = to_multigraph(&g).unwrap();
        assert_eq!(scale, 1);
        assert_eq!(m.pairs(), &[(0, 1, 1), (0, 2, 1), (1, 2, 1)]);
        assert_eq!(m.thresholds(), &[2, 2, 2]);
    }

    #[test]
    fn multigraph_roundtrip_recovers_weights() {
        let g = WeightedInstance::new(
            3,
            false,
            vec![(0, 1, r(3, 2)), (1, 2, r(5, 6))],
            vec![r(1, 2), ri(1), r(7, 3)],
        )
        .unwrap();
        let (m, scale) = to_multigraph(&g).unwrap();
        for &(u, v, mult) in m.pairs() {
            let back = Rational::new(mult, scale).unwrap();
            let orig = g
                .edges()
                .iter()
                .find(|e| (e.u, e.v) == (u, v))
                .map(|e| e.weight.clone())
                .unwrap();
            assert_eq!(back, orig);
        }
    }

    #[test]
    fn gadget_single_edge_three_halves() {
        let g = WeightedInstance::new(2, false, vec![(0, 1, r(3, 2))], vec![ri(1), ri(1)]).unwrap();
        let (h, map) = gadget(&g).unwrap();
        assert_eq!(h.n(), 4);
        assert_eq!(map.scale, 2);
        assert_eq!(map.middles[&(0, 1)], vec![2, 3]);
        assert_eq!(h.thresholds(), &[ri(2), ri(2), ri(1), ri(1)]);
        // u-v plus two u-m-v paths.
        let pairs: Vec<(usize, usize)> = h.edges().iter().map(|e| (e.u, e.v)).collect();
        assert_eq!(pairs, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]);
        for mid in [2, 3] {
            assert_eq!(h.out_arcs(mid).count(), 2);
        }
    }

    #[test]
    fn gadget_unit_edge_is_identity() {
        let g = WeightedInstance::new(2, false, vec![(0, 1, ri(1))], vec![ri(1), ri(1)]).unwrap();
        let (h, map) = gadget(&g).unwrap();
        assert_eq!(h.n(), 2);
        assert!(map.middles[&(0, 1)].is_empty());
        assert_eq!(h.thresholds(), &[ri(1), ri(1)]);
    }

    #[test]
    fn gadget_path_with_one_heavy_edge() {
        let g = WeightedInstance::new(
            3,
            false,
            vec![(0, 1, ri(2)), (1, 2, ri(1))],
            vec![ri(1), ri(2), ri(1)],
        )
        .unwrap();
        let (h, map) = gadget(&g).unwrap();
        assert_eq!(h.n(), 4);
        assert_eq!(map.middles[&(0, 1)], vec![3]);
        assert_eq!(map.middles[&(1, 2)], Vec::<usize>::new());
    }

    #[test]
    fn gadget_rejects_directed_input() {
        let g = WeightedInstance::new(2, true, vec![(0, 1, ri(1))], vec![ri(1); 2]).unwrap();
        assert!(matches!(gadget(&g), Err(Error::Unsupported(_))));
    }

    #[test]
    fn gadget_vertex_count_accounting() {
        let g = WeightedInstance::new(
            4,
            false,
            vec![(0, 1, r(3, 2)), (1, 2, r(1, 2)), (2, 3, ri(2)), (0, 3, ri(0))],
            vec![ri(1); 4],
        )
        .unwrap();
        let (h, map) = gadget(&g).unwrap();
        // l = 2: bundles 3, 1, 4 -> middles 2 + 0 + 3; zero edge dropped.
        let expected_mid: usize = map.middles.values().map(Vec::len).sum();
        assert_eq!(expected_mid, 5);
        assert_eq!(h.n(), 4 + 5);
    }

    #[test]
    fn tw_weight_examples() {
        let g = WeightedInstance::new(
            3,
            false,
            vec![(0, 1, r(3, 2)), (1, 2, r(1, 3))],
            vec![ri(0); 3],
        )
        .unwrap();
        assert_eq!(tw_weight(&g, 1).unwrap(), 9);

        let g = WeightedInstance::new(2, false, vec![(0, 1, ri(1))], vec![ri(0); 2]).unwrap();
        assert_eq!(tw_weight(&g, 4).unwrap(), 4);

        let g = WeightedInstance::new(2, false, vec![(0, 1, ri(5))], vec![ri(0); 2]).unwrap();
        assert_eq!(tw_weight(&g, 1).unwrap(), 5);

        let edgeless = WeightedInstance::new(3, false, vec![], vec![r(1, 2); 3]).unwrap();
        assert_eq!(tw_weight(&edgeless, 2).unwrap(), 2);
    }
}
