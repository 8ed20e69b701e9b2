//! Graph instances: simple edge-weighted graphs and integer multigraphs,
//! both with per-vertex activation thresholds.
//!
//! Vertices are dense ids `0..n`; string labels live at the I/O layer.
//! Instances are immutable after construction and safe to share across
//! threads; adjacency is precomputed once.

use crate::error::{Error, Result};
use crate::rational::Rational;

/// One edge (undirected, stored with `u < v`) or arc (`u -> v`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: Rational,
}

/// Compressed adjacency with inline weights; arc scans stay contiguous
/// even on large instances.
#[derive(Debug, Clone)]
struct Csr {
    offsets: Vec<u32>,
    arcs: Vec<(u32, Rational)>,
}

impl Csr {
    fn build(n: usize, arcs: &[(usize, usize, &Rational)]) -> Csr {
        let mut counts = vec![0u32; n + 1];
        for &(src, _, _) in arcs {
            counts[src + 1] += 1;
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let mut slots = counts.clone();
        let mut flat = vec![(0u32, Rational::zero()); arcs.len()];
        for &(src, dst, w) in arcs {
            flat[slots[src] as usize] = (dst as u32, w.clone());
            slots[src] += 1;
        }
        Csr {
            offsets: counts,
            arcs: flat,
        }
    }

    fn row(&self, v: usize) -> &[(u32, Rational)] {
        &self.arcs[self.offsets[v] as usize..self.offsets[v + 1] as usize]
    }
}

/// Edge-weighted instance: graph or digraph, rational weights `>= 0`,
/// rational thresholds `>= 0`, no loops, at most one edge per
/// (un)ordered pair.
#[derive(Debug, Clone)]
pub struct WeightedInstance {
    n: usize,
    directed: bool,
    edges: Vec<Edge>,
    thresholds: Vec<Rational>,
    out_csr: Csr,
    in_csr: Csr,
}

impl WeightedInstance {
    pub fn new(
        n: usize,
        directed: bool,
        edges: Vec<(usize, usize, Rational)>,
        thresholds: Vec<Rational>,
    ) -> Result<Self> {
        if thresholds.len() != n {
            return Err(Error::InvalidInstance(format!(
                "expected {n} thresholds, got {}",
                thresholds.len()
            )));
        }
        let mut normalized: Vec<Edge> = Vec::with_capacity(edges.len());
        for (u, v, weight) in edges {
            if u >= n {
                return Err(Error::InvalidVertex { id: u, n });
            }
            if v >= n {
                return Err(Error::InvalidVertex { id: v, n });
            }
            if u == v {
                return Err(Error::InvalidInstance(format!("loop at vertex {u}")));
            }
            let (u, v) = if !directed && u > v { (v, u) } else { (u, v) };
            normalized.push(Edge { u, v, weight });
        }
        normalized.sort_by(|a, b| (a.u, a.v).cmp(&(b.u, b.v)));
        for pair in normalized.windows(2) {
            if pair[0].u == pair[1].u && pair[0].v == pair[1].v {
                return Err(Error::InvalidInstance(format!(
                    "duplicate {} {}-{}",
                    if directed { "arc" } else { "edge" },
                    pair[0].u,
                    pair[0].v
                )));
            }
        }
        let mut out_arcs: Vec<(usize, usize, &Rational)> = Vec::new();
        let mut in_arcs: Vec<(usize, usize, &Rational)> = Vec::new();
        for e in &normalized {
            if directed {
                out_arcs.push((e.u, e.v, &e.weight));
                in_arcs.push((e.v, e.u, &e.weight));
            } else {
                out_arcs.push((e.u, e.v, &e.weight));
                out_arcs.push((e.v, e.u, &e.weight));
            }
        }
        let out_csr = Csr::build(n, &out_arcs);
        let in_csr = Csr::build(n, &in_arcs);
        drop(out_arcs);
        drop(in_arcs);
        Ok(WeightedInstance {
            n,
            directed,
            edges: normalized,
            thresholds,
            out_csr,
            in_csr,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn directed(&self) -> bool {
        self.directed
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn threshold(&self, v: usize) -> &Rational {
        &self.thresholds[v]
    }

    pub fn thresholds(&self) -> &[Rational] {
        &self.thresholds
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::InvalidVertex { id: v, n: self.n })
        }
    }

    /// Arcs that carry influence *from* `v`: incident edges when
    /// undirected, out-arcs when directed.
    pub fn out_arcs(&self, v: usize) -> impl Iterator<Item = (usize, &Rational)> {
        self.out_csr.row(v).iter().map(|(t, w)| (*t as usize, w))
    }

    /// Arcs that carry influence *into* `v`.
    pub fn in_arcs(&self, v: usize) -> impl Iterator<Item = (usize, &Rational)> {
        let csr = if self.directed { &self.in_csr } else { &self.out_csr };
        csr.row(v).iter().map(|(s, w)| (*s as usize, w))
    }

    /// Total weight incident to `v`: all incident edges when undirected,
    /// entering arcs when directed.
    pub fn incident_weight(&self, v: usize) -> Result<Rational> {
        self.check_vertex(v)?;
        let mut sum = Rational::zero();
        for (_, w) in self.in_arcs(v) {
            sum += w;
        }
        Ok(sum)
    }
}

/// Multigraph instance: integer edge multiplicities and integer thresholds.
/// Undirected multiplicities are stored once per unordered pair.
#[derive(Debug, Clone)]
pub struct MultiInstance {
    n: usize,
    directed: bool,
    pairs: Vec<(usize, usize, u64)>,
    thresholds: Vec<u64>,
    out_adj: Vec<Vec<(usize, u64)>>,
    in_adj: Vec<Vec<(usize, u64)>>,
}

impl MultiInstance {
    pub fn new(
        n: usize,
        directed: bool,
        multiplicities: Vec<(usize, usize, u64)>,
        thresholds: Vec<u64>,
    ) -> Result<Self> {
        if thresholds.len() != n {
            return Err(Error::InvalidInstance(format!(
                "expected {n} thresholds, got {}",
                thresholds.len()
            )));
        }
        let mut pairs: Vec<(usize, usize, u64)> = Vec::with_capacity(multiplicities.len());
        for (u, v, m) in multiplicities {
            if u >= n {
                return Err(Error::InvalidVertex { id: u, n });
            }
            if v >= n {
                return Err(Error::InvalidVertex { id: v, n });
            }
            if u == v {
                return Err(Error::InvalidInstance(format!("loop at vertex {u}")));
            }
            if m == 0 {
                continue;
            }
            let (u, v) = if !directed && u > v { (v, u) } else { (u, v) };
            pairs.push((u, v, m));
        }
        pairs.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        for pair in pairs.windows(2) {
            if pair[0].0 == pair[1].0 && pair[0].1 == pair[1].1 {
                return Err(Error::InvalidInstance(format!(
                    "duplicate multiplicity entry {}-{}",
                    pair[0].0, pair[0].1
                )));
            }
        }
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for &(u, v, m) in &pairs {
            if directed {
                out_adj[u].push((v, m));
                in_adj[v].push((u, m));
            } else {
                out_adj[u].push((v, m));
                out_adj[v].push((u, m));
            }
        }
        Ok(MultiInstance {
            n,
            directed,
            pairs,
            thresholds,
            out_adj,
            in_adj,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn directed(&self) -> bool {
        self.directed
    }

    /// Nonzero multiplicity entries, normalized and sorted.
    pub fn pairs(&self) -> &[(usize, usize, u64)] {
        &self.pairs
    }

    pub fn threshold(&self, v: usize) -> u64 {
        self.thresholds[v]
    }

    pub fn thresholds(&self) -> &[u64] {
        &self.thresholds
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::InvalidVertex { id: v, n: self.n })
        }
    }

    pub fn out_arcs(&self, v: usize) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.out_adj[v].iter().copied()
    }

    pub fn in_arcs(&self, v: usize) -> impl Iterator<Item = (usize, u64)> + '_ {
        let adj = if self.directed { &self.in_adj[v] } else { &self.out_adj[v] };
        adj.iter().copied()
    }

    /// Multigraph degree: total incident multiplicity when undirected,
    /// total entering multiplicity when directed.
    pub fn multigraph_degree(&self, v: usize) -> Result<u64> {
        self.check_vertex(v)?;
        Ok(self.in_arcs(v).map(|(_, m)| m).sum())
    }

    /// View the multigraph as an edge-weighted instance (multiplicities as
    /// integer weights). The activation semantics are identical.
    pub fn to_weighted(&self) -> WeightedInstance {
        let edges = self
            .pairs
            .iter()
            .map(|&(u, v, m)| (u, v, Rational::from_integer(m)))
            .collect();
        let thresholds = self.thresholds.iter().map(|&t| Rational::from_integer(t)).collect();
        WeightedInstance::new(self.n, self.directed, edges, thresholds)
            .expect("multigraph view is always a valid weighted instance")
    }
}
