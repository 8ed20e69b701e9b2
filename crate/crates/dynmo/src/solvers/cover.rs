//! Vertex-cover seeding. Any vertex cover of the positive-influence edges
//! is a dynamic monopoly provided no threshold exceeds the vertex's total
//! entering weight: every non-cover vertex sees its whole neighborhood
//! seeded. Exact covers come from a bitmask branch-and-bound (up to 32
//! vertices); beyond that, or on request, a maximal-matching
//! 2-approximation is used.

use crate::error::{Error, Result};
use crate::graph::{MultiInstance, WeightedInstance};
use crate::solvers::{verified_report, Method, SolveReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverMode {
    Exact,
    Greedy,
}

const EXACT_LIMIT: usize = 32;

/// Drop isolated vertices; resolve pendant vertices by taking their
/// unique neighbor.
fn eliminate(adj: &[u64], mut alive: u64, mut chosen: u64) -> (u64, u64) {
    loop {
        let mut changed = false;
        let mut rest = alive;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if alive & (1 << v) == 0 {
                continue;
            }
            let nb = adj[v] & alive;
            if nb == 0 {
                alive &= !(1 << v);
                changed = true;
            } else if nb.count_ones() == 1 {
                chosen |= nb;
                alive &= !(nb | (1 << v));
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    (alive, chosen)
}

fn greedy_matching_size(adj: &[u64], alive: u64) -> u32 {
    let mut avail = alive;
    let mut matched = 0;
    let mut scan = alive;
    while scan != 0 {
        let v = scan.trailing_zeros() as usize;
        scan &= scan - 1;
        if avail & (1 << v) == 0 {
            continue;
        }
        let nb = adj[v] & avail & !(1 << v);
        if nb != 0 {
            let u = nb.trailing_zeros();
            avail &= !((1 << v) | (1u64 << u));
            matched += 1;
        }
    }
    matched
}

fn branch(adj: &[u64], alive: u64, chosen: u64, best: &mut (u32, u64)) {
    let (alive, chosen) = eliminate(adj, alive, chosen);
    let size = chosen.count_ones();
    if alive == 0 {
        if size < best.0 {
            *best = (size, chosen);
        }
        return;
    }
    if size + greedy_matching_size(adj, alive) >= best.0 {
        return;
    }
    // Branch on a maximum-degree vertex: either it or its whole
    // neighborhood joins the cover.
    let mut pick = usize::MAX;
    let mut pick_deg = 0;
    let mut rest = alive;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let deg = (adj[v] & alive).count_ones();
        if deg > pick_deg {
            pick_deg = deg;
            pick = v;
        }
    }
    let vbit = 1u64 << pick;
    branch(adj, alive & !vbit, chosen | vbit, best);
    let nb = adj[pick] & alive & !vbit;
    branch(adj, alive & !(nb | vbit), chosen | nb, best);
}

fn exact_cover(n: usize, pairs: &[(usize, usize)]) -> Vec<usize> {
    let mut adj = vec![0u64; n];
    for &(u, v) in pairs {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    let alive = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut best = (n as u32 + 1, alive);
    branch(&adj, alive, 0, &mut best);
    (0..n).filter(|&v| best.1 & (1 << v) != 0).collect()
}

fn greedy_cover(n: usize, pairs: &[(usize, usize)]) -> Vec<usize> {
    let mut taken = vec![false; n];
    for &(u, v) in pairs {
        if !taken[u] && !taken[v] {
            taken[u] = true;
            taken[v] = true;
        }
    }
    (0..n).filter(|&v| taken[v]).collect()
}

fn cover_of(n: usize, pairs: &[(usize, usize)], mode: CoverMode) -> Vec<usize> {
    match mode {
        CoverMode::Exact if n <= EXACT_LIMIT => exact_cover(n, pairs),
        _ => greedy_cover(n, pairs),
    }
}

/// Seed a weighted undirected instance with a vertex cover of its
/// positive-weight edges. Requires `tau(v) <= incident_weight(v)` for
/// every vertex.
pub fn vertex_cover_monopoly(inst: &WeightedInstance, mode: CoverMode) -> Result<SolveReport> {
    if inst.directed() {
        return Err(Error::Unsupported(
            "vertex-cover seeding requires an undirected instance".into(),
        ));
    }
    for v in 0..inst.n() {
        let capacity = inst.incident_weight(v)?;
        if inst.threshold(v) > &capacity {
            return Err(Error::Precondition(format!(
                "vertex {v}: threshold {} exceeds its incident weight {capacity}",
                inst.threshold(v)
            )));
        }
    }
    let pairs: Vec<(usize, usize)> = inst
        .edges()
        .iter()
        .filter(|e| !e.weight.is_zero())
        .map(|e| (e.u, e.v))
        .collect();
    let cover = cover_of(inst.n(), &pairs, mode);
    Ok(verified_report(inst, cover, Method::VertexCover, false, 0))
}

/// Multigraph variant: requires `tau(v) <= d(v)`.
pub fn vertex_cover_monopoly_multi(inst: &MultiInstance, mode: CoverMode) -> Result<SolveReport> {
    if inst.directed() {
        return Err(Error::Unsupported(
            "vertex-cover seeding requires an undirected instance".into(),
        ));
    }
    for v in 0..inst.n() {
        let capacity = inst.multigraph_degree(v)?;
        if inst.threshold(v) > capacity {
            return Err(Error::Precondition(format!(
                "vertex {v}: threshold {} exceeds its degree {capacity}",
                inst.threshold(v)
            )));
        }
    }
    let pairs: Vec<(usize, usize)> = inst.pairs().iter().map(|&(u, v, _)| (u, v)).collect();
    let cover = cover_of(inst.n(), &pairs, mode);
    Ok(verified_report(inst, cover, Method::VertexCover, false, 0))
}

/// Exact minimum vertex cover size of the positive-weight shadow; greedy
/// upper bound above the branch-and-bound limit.
pub fn vertex_cover_size(inst: &WeightedInstance) -> usize {
    let pairs: Vec<(usize, usize)> = inst
        .edges()
        .iter()
        .filter(|e| !e.weight.is_zero())
        .map(|e| (e.u, e.v))
        .collect();
    cover_of(
        inst.n(),
        &pairs,
        if inst.n() <= EXACT_LIMIT { CoverMode::Exact } else { CoverMode::Greedy },
    )
    .len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rational;

    fn ri(n: u64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn star_cover_is_the_center() {
        let g = WeightedInstance::new(
            4,
            false,
            vec![(0, 1, ri(1)), (0, 2, ri(1)), (0, 3, ri(1))],
            vec![ri(3), ri(1), ri(1), ri(1)],
        )
        .unwrap();
        let report = vertex_cover_monopoly(&g, CoverMode::Exact).unwrap();
        assert_eq!(report.monopoly, vec![0]);
    }

    #[test]
    fn triangle_cover_has_two_vertices() {
        let g = WeightedInstance::new(
            3,
            false,
            vec![(0, 1, ri(1)), (0, 2, ri(1)), (1, 2, ri(1))],
            vec![ri(2); 3],
        )
        .unwrap();
        let report = vertex_cover_monopoly(&g, CoverMode::Exact).unwrap();
        assert_eq!(report.monopoly.len(), 2);
        assert!(g.is_dynamic_monopoly(&report.monopoly).unwrap());
    }

    #[test]
    fn single_edge_cover_is_one_endpoint() {
        let g = WeightedInstance::new(2, false, vec![(0, 1, ri(1))], vec![ri(1), ri(1)]).unwrap();
        let report = vertex_cover_monopoly(&g, CoverMode::Exact).unwrap();
        assert_eq!(report.monopoly.len(), 1);
    }

    #[test]
    fn precondition_names_the_offending_vertex() {
        let g = WeightedInstance::new(2, false, vec![(0, 1, ri(1))], vec![ri(1), ri(2)]).unwrap();
        match vertex_cover_monopoly(&g, CoverMode::Exact) {
            Err(Error::Precondition(msg)) => assert!(msg.contains("vertex 1"), "{msg}"),
            other => panic!("expected precondition error, got {other:?}"),
        }
    }

    #[test]
    fn directed_input_is_unsupported() {
        let g = WeightedInstance::new(2, true, vec![(0, 1, ri(1))], vec![ri(0), ri(1)]).unwrap();
        assert!(matches!(
            vertex_cover_monopoly(&g, CoverMode::Exact),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn greedy_mode_is_a_valid_monopoly_too() {
        let g = WeightedInstance::new(
            5,
            false,
            vec![(0, 1, ri(1)), (1, 2, ri(1)), (2, 3, ri(1)), (3, 4, ri(1))],
            vec![ri(1); 5],
        )
        .unwrap();
        let report = vertex_cover_monopoly(&g, CoverMode::Greedy).unwrap();
        assert!(g.is_dynamic_monopoly(&report.monopoly).unwrap());
        assert!(report.monopoly.len() <= 4); // 2-approximation of beta = 2
        assert!(!report.certified_minimum);
    }

    #[test]
    fn multi_variant_checks_degrees() {
        let m = MultiInstance::new(2, false, vec![(0, 1, 2)], vec![2, 3]).unwrap();
        assert!(matches!(
            vertex_cover_monopoly_multi(&m, CoverMode::Exact),
            Err(Error::Precondition(_))
        ));
        let ok = MultiInstance::new(2, false, vec![(0, 1, 2)], vec![2, 2]).unwrap();
        let report = vertex_cover_monopoly_multi(&ok, CoverMode::Exact).unwrap();
        assert_eq!(report.monopoly.len(), 1);
    }

    #[test]
    fn exact_cover_on_petersen_like_graph() {
        // C6: beta = 3.
        let edges = (0..6).map(|i| (i, (i + 1) % 6, ri(1))).collect();
        let g = WeightedInstance::new(6, false, edges, vec![ri(1); 6]).unwrap();
        assert_eq!(vertex_cover_size(&g), 3);
    }
}
