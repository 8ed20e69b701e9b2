//! Deterministic instance generators backing the verification harness, the
//! property tests and the bench CLI. Everything is driven by caller-owned
//! ChaCha streams, so corpora are reproducible byte for byte.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::contagion::BankingNetwork;
use crate::graph::{MultiInstance, WeightedInstance};
use crate::rational::Rational;
use crate::solvers::strict_majority_thresholds;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `(seed, stream)`; used to derive per-trial RNGs.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

pub fn random_rational(rng: &mut ChaCha8Rng, max_numer: u64, max_denom: u64) -> Rational {
    let q = rng.gen_range(1..=max_denom);
    let p = rng.gen_range(0..=max_numer);
    Rational::new(p, q).expect("positive denominator")
}

fn positive_rational(rng: &mut ChaCha8Rng, max_numer: u64, max_denom: u64) -> Rational {
    let q = rng.gen_range(1..=max_denom);
    let p = rng.gen_range(1..=max_numer);
    Rational::new(p, q).expect("positive denominator")
}

/// General random instance with weight and threshold denominators bounded
/// by `max_denom`. Thresholds land anywhere from zero to a little above
/// the entering weight, so cascades stop at all stages.
pub fn random_weighted(
    rng: &mut ChaCha8Rng,
    n: usize,
    edge_prob: f64,
    max_denom: u64,
    directed: bool,
) -> WeightedInstance {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u == v || (!directed && u > v) {
                continue;
            }
            if rng.gen_bool(edge_prob) {
                edges.push((u, v, random_rational(rng, 2 * max_denom, max_denom)));
            }
        }
    }
    let probe = WeightedInstance::new(n, directed, edges.clone(), vec![Rational::zero(); n])
        .expect("generated edges are valid");
    let thresholds = (0..n)
        .map(|v| {
            let incident = probe.incident_weight(v).expect("vertex in range");
            match rng.gen_range(0..10) {
                0 => Rational::zero(),
                1 => &incident + &positive_rational(rng, max_denom, max_denom),
                _ => {
                    // somewhere in (0, incident], quantized to max_denom
                    let q = rng.gen_range(1..=max_denom);
                    let p = rng.gen_range(1..=q);
                    &incident * &Rational::new(p, q).expect("positive denominator")
                }
            }
        })
        .collect();
    WeightedInstance::new(n, directed, edges, thresholds).expect("generated instance is valid")
}

/// Connected undirected multigraph (random spanning tree plus extras) with
/// strict-majority thresholds.
pub fn random_connected_multigraph(
    rng: &mut ChaCha8Rng,
    n: usize,
    max_mult: u64,
    extra_edges: usize,
) -> MultiInstance {
    let mut mults: std::collections::BTreeMap<(usize, usize), u64> = std::collections::BTreeMap::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        mults.insert((u, v), rng.gen_range(1..=max_mult));
    }
    for _ in 0..extra_edges {
        if n < 2 {
            break;
        }
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u == v {
            continue;
        }
        let key = (u.min(v), u.max(v));
        mults.entry(key).or_insert_with(|| rng.gen_range(1..=max_mult));
    }
    let entries: Vec<(usize, usize, u64)> = mults.into_iter().map(|((u, v), m)| (u, v, m)).collect();
    let bare = MultiInstance::new(n, false, entries.clone(), vec![0; n]).expect("valid multigraph");
    let taus = strict_majority_thresholds(&bare);
    let inst = MultiInstance::new(n, false, entries, taus).expect("valid multigraph");
    debug_assert!(crate::solvers::majority::is_connected(&inst) || n <= 1);
    inst
}

/// Random edge-weighted tree (or forest when `forest_gaps` is true) with a
/// mix of unreachable, reachable and self-activating thresholds.
pub fn random_tree_instance(rng: &mut ChaCha8Rng, n: usize, max_denom: u64) -> WeightedInstance {
    let mut edges = Vec::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        edges.push((u, v, positive_rational(rng, 2 * max_denom, max_denom)));
    }
    let probe = WeightedInstance::new(n, false, edges.clone(), vec![Rational::zero(); n])
        .expect("tree edges are valid");
    let thresholds = (0..n)
        .map(|v| {
            let incident = probe.incident_weight(v).expect("vertex in range");
            match rng.gen_range(0..10) {
                0 => Rational::zero(),
                1 | 2 => &incident + &positive_rational(rng, max_denom, max_denom),
                _ => {
                    let q = rng.gen_range(1..=max_denom);
                    let p = rng.gen_range(1..=q);
                    &incident * &Rational::new(p, q).expect("positive denominator")
                }
            }
        })
        .collect();
    WeightedInstance::new(n, false, edges, thresholds).expect("generated tree is valid")
}

/// Member of the 1-in-peelable family, built by un-peeling a random witness
/// order: each vertex gets at most one in-arc from its prefix, plus
/// arbitrary back-arcs into the prefix.
pub fn random_family_member(
    rng: &mut ChaCha8Rng,
    n: usize,
    in_prob: f64,
    back_prob: f64,
    max_denom: u64,
) -> WeightedInstance {
    let mut witness: Vec<usize> = (0..n).collect();
    witness.shuffle(rng);
    let mut edges = Vec::new();
    for i in 1..n {
        let v = witness[i];
        if rng.gen_bool(in_prob) {
            let u = witness[rng.gen_range(0..i)];
            edges.push((u, v, positive_rational(rng, 2 * max_denom, max_denom)));
        }
        for j in 0..i {
            if rng.gen_bool(back_prob) {
                let t = witness[j];
                edges.push((v, t, positive_rational(rng, 2 * max_denom, max_denom)));
            }
        }
    }
    finish_directed(rng, n, edges, max_denom)
}

/// Large family members that never stall: every vertex keeps global
/// in-degree at most one (random out-forest plus cycle-closing arcs into
/// tree roots), so contractions can never merge parallel arcs.
pub fn random_family_scaling_instance(rng: &mut ChaCha8Rng, n: usize) -> WeightedInstance {
    let mut edges = Vec::new();
    let mut has_parent = vec![false; n];
    for v in 1..n {
        if rng.gen_bool(0.9) {
            let u = rng.gen_range(0..v);
            edges.push((u, v, positive_rational(rng, 8, 4)));
            has_parent[v] = true;
        }
    }
    for r in 0..n {
        if !has_parent[r] && n > 1 && rng.gen_bool(0.5) {
            let mut x = rng.gen_range(0..n);
            if x == r {
                x = (x + 1) % n;
            }
            edges.push((x, r, positive_rational(rng, 8, 4)));
        }
    }
    finish_directed(rng, n, edges, 4)
}

fn finish_directed(
    rng: &mut ChaCha8Rng,
    n: usize,
    edges: Vec<(usize, usize, Rational)>,
    max_denom: u64,
) -> WeightedInstance {
    let probe = WeightedInstance::new(n, true, edges.clone(), vec![Rational::zero(); n])
        .expect("generated arcs are valid");
    let thresholds = (0..n)
        .map(|v| {
            let entering = probe.incident_weight(v).expect("vertex in range");
            match rng.gen_range(0..10) {
                0 => Rational::zero(),
                1 | 2 => &entering + &positive_rational(rng, max_denom, max_denom),
                _ if entering.is_zero() => positive_rational(rng, max_denom, max_denom),
                _ => {
                    let q = rng.gen_range(1..=max_denom);
                    let p = rng.gen_range(1..=q);
                    &entering * &Rational::new(p, q).expect("positive denominator")
                }
            }
        })
        .collect();
    WeightedInstance::new(n, true, edges, thresholds).expect("generated digraph is valid")
}

/// Simple graph: unit weights, integer thresholds in `0..=deg(v)+1`.
pub fn random_simple_graph(rng: &mut ChaCha8Rng, n: usize, edge_prob: f64) -> WeightedInstance {
    let one = Rational::one();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(edge_prob) {
                edges.push((u, v, one.clone()));
            }
        }
    }
    let probe = WeightedInstance::new(n, false, edges.clone(), vec![Rational::zero(); n])
        .expect("generated edges are valid");
    let thresholds = (0..n)
        .map(|v| {
            let deg = probe.out_arcs(v).count() as u64;
            Rational::from_integer(rng.gen_range(0..=deg + 1))
        })
        .collect();
    WeightedInstance::new(n, false, edges, thresholds).expect("generated graph is valid")
}

/// Undirected instance satisfying the vertex-cover precondition
/// `tau(v) <= incident_weight(v)` everywhere.
pub fn random_cover_instance(rng: &mut ChaCha8Rng, n: usize, max_denom: u64) -> WeightedInstance {
    let mut edges = Vec::new();
    // spanning tree keeps incident weights positive
    for v in 1..n {
        let u = rng.gen_range(0..v);
        edges.push((u, v, positive_rational(rng, 2 * max_denom, max_denom)));
    }
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(0.2) && !edges.iter().any(|&(a, b, _)| (a, b) == (u, v)) {
                edges.push((u, v, positive_rational(rng, 2 * max_denom, max_denom)));
            }
        }
    }
    let probe = WeightedInstance::new(n, false, edges.clone(), vec![Rational::zero(); n])
        .expect("generated edges are valid");
    let thresholds = (0..n)
        .map(|v| {
            let incident = probe.incident_weight(v).expect("vertex in range");
            let q = rng.gen_range(1..=max_denom);
            let p = rng.gen_range(0..=q);
            &incident * &Rational::new(p, q).expect("positive denominator")
        })
        .collect();
    WeightedInstance::new(n, false, edges, thresholds).expect("generated instance is valid")
}

/// Random banking network: some banks start insolvent, recoveries are
/// rational, exposures decimal-like.
pub fn random_banking_network(rng: &mut ChaCha8Rng, n: usize) -> BankingNetwork {
    let capital: Vec<Rational> = (0..n)
        .map(|_| {
            if rng.gen_bool(0.25) {
                Rational::zero()
            } else {
                random_rational(rng, 80, 10)
            }
        })
        .collect();
    let recovery: Vec<Rational> = (0..n)
        .map(|_| {
            let q = rng.gen_range(1..=10);
            let p = rng.gen_range(0..=q);
            Rational::new(p, q).expect("positive denominator")
        })
        .collect();
    let mut exposures = vec![vec![Rational::zero(); n]; n];
    for (i, row) in exposures.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            if i != j && rng.gen_bool(0.35) {
                *cell = random_rational(rng, 120, 10);
            }
        }
    }
    BankingNetwork::new(exposures, capital, recovery).expect("generated network is valid")
}
