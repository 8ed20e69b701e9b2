//! Tree decompositions: validation, the gadget-graph transform, a greedy
//! min-fill constructor, and a PACE-style text format.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::graph::WeightedInstance;
use crate::reduction::gadget;

/// Bag tree over the vertices of a graph. Conditions: bags cover every
/// vertex, bags containing any fixed vertex induce a subtree, and every
/// edge fits inside some bag. Width is the largest bag size minus one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    bags: Vec<Vec<usize>>,
    tree_edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn new(bags: Vec<Vec<usize>>, tree_edges: Vec<(usize, usize)>) -> Self {
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        TreeDecomposition { bags, tree_edges }
    }

    pub fn bags(&self) -> &[Vec<usize>] {
        &self.bags
    }

    pub fn tree_edges(&self) -> &[(usize, usize)] {
        &self.tree_edges
    }

    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    /// Structural check: bag indices in range and the bag graph is a tree.
    fn check_tree(&self) -> Result<()> {
        let k = self.bags.len();
        for &(a, b) in &self.tree_edges {
            if a >= k || b >= k {
                return Err(Error::InvalidInstance(format!(
                    "bag edge ({a}, {b}) out of range for {k} bags"
                )));
            }
            if a == b {
                return Err(Error::InvalidInstance(format!("bag self-edge at {a}")));
            }
        }
        if self.tree_edges.len() + 1 != k.max(1) {
            return Err(Error::InvalidInstance(format!(
                "{} bags with {} edges do not form a tree",
                k,
                self.tree_edges.len()
            )));
        }
        if k == 0 {
            return Ok(());
        }
        let mut adj = vec![Vec::new(); k];
        for &(a, b) in &self.tree_edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; k];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    queue.push_back(y);
                }
            }
        }
        if count != k {
            return Err(Error::InvalidInstance("bag graph is disconnected".into()));
        }
        Ok(())
    }

    /// Check the three decomposition conditions against a graph.
    /// Broken bag-tree structure is an error; condition failures return
    /// `Ok(false)`.
    pub fn validate(&self, inst: &WeightedInstance) -> Result<bool> {
        self.check_tree()?;
        let n = inst.n();
        for bag in &self.bags {
            for &v in bag {
                if v >= n {
                    return Err(Error::InvalidVertex { id: v, n });
                }
            }
        }

        // (1) every vertex is in some bag
        let mut covered = vec![false; n];
        for bag in &self.bags {
            for &v in bag {
                covered[v] = true;
            }
        }
        if covered.iter().any(|&c| !c) {
            return Ok(false);
        }

        // (3) every edge fits in some bag
        for e in inst.edges() {
            let inside = self
                .bags
                .iter()
                .any(|bag| bag.binary_search(&e.u).is_ok() && bag.binary_search(&e.v).is_ok());
            if !inside {
                return Ok(false);
            }
        }

        // (2) bags containing any vertex induce a connected subtree
        let k = self.bags.len();
        let mut adj = vec![Vec::new(); k];
        for &(a, b) in &self.tree_edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for v in 0..n {
            let holders: Vec<usize> = (0..k)
                .filter(|&i| self.bags[i].binary_search(&v).is_ok())
                .collect();
            if holders.len() <= 1 {
                continue;
            }
            let mut inside = vec![false; k];
            for &i in &holders {
                inside[i] = true;
            }
            let mut seen = vec![false; k];
            let mut queue = VecDeque::from([holders[0]]);
            seen[holders[0]] = true;
            let mut reached = 1;
            while let Some(x) = queue.pop_front() {
                for &y in &adj[x] {
                    if inside[y] && !seen[y] {
                        seen[y] = true;
                        reached += 1;
                        queue.push_back(y);
                    }
                }
            }
            if reached != holders.len() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Lift a decomposition of an instance to its gadget graph: for every
    /// edge that gains middle vertices, one new bag `{u, v, middles...}`
    /// hangs off a bag already containing `u` and `v`. The result is valid
    /// for the gadget and its width is at most
    /// `max(width(self), max_e l*w(e))`.
    pub fn transform(&self, inst: &WeightedInstance) -> Result<TreeDecomposition> {
        if !self.validate(inst)? {
            return Err(Error::Precondition(
                "tree decomposition is not valid for the instance".into(),
            ));
        }
        let (_, map) = gadget(inst)?;
        let mut bags = self.bags.clone();
        let mut tree_edges = self.tree_edges.clone();
        for (&(u, v), mids) in &map.middles {
            if mids.is_empty() {
                continue;
            }
            let host = (0..self.bags.len())
                .find(|&i| {
                    self.bags[i].binary_search(&u).is_ok() && self.bags[i].binary_search(&v).is_ok()
                })
                .expect("validated decomposition covers every edge");
            let mut bag = vec![u, v];
            bag.extend_from_slice(mids);
            bag.sort_unstable();
            bags.push(bag);
            tree_edges.push((host, bags.len() - 1));
        }
        Ok(TreeDecomposition { bags, tree_edges })
    }
}

/// Greedy min-fill elimination: a quick tree decomposition whose width is
/// only an upper bound on the true treewidth.
pub fn min_fill_decomposition(inst: &WeightedInstance) -> TreeDecomposition {
    let n = inst.n();
    if n == 0 {
        return TreeDecomposition::new(vec![vec![]], vec![]);
    }
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for e in inst.edges() {
        adj[e.u].insert(e.v);
        adj[e.v].insert(e.u);
    }

    let mut alive: BTreeSet<usize> = (0..n).collect();
    let mut bags: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut elim_pos = vec![usize::MAX; n];
    let mut elim_nbrs: Vec<Vec<usize>> = Vec::with_capacity(n);

    for step in 0..n {
        let mut best = usize::MAX;
        let mut best_fill = usize::MAX;
        for &v in &alive {
            let nbrs: Vec<usize> = adj[v].iter().copied().collect();
            let mut fill = 0;
            for (i, &a) in nbrs.iter().enumerate() {
                for &b in &nbrs[i + 1..] {
                    if !adj[a].contains(&b) {
                        fill += 1;
                    }
                }
            }
            if fill < best_fill {
                best_fill = fill;
                best = v;
            }
        }
        let v = best;
        alive.remove(&v);
        elim_pos[v] = step;
        let nbrs: Vec<usize> = adj[v].iter().copied().collect();
        let mut bag = nbrs.clone();
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
        elim_nbrs.push(nbrs.clone());
        for (i, &a) in nbrs.iter().enumerate() {
            adj[a].remove(&v);
            for &b in &nbrs[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
    }

    // Attach each bag to the bag of its earliest-eliminated residual
    // neighbor; chain component roots so the bag graph is one tree.
    let mut tree_edges = Vec::new();
    let mut roots = Vec::new();
    for step in 0..n {
        match elim_nbrs[step].iter().map(|&u| elim_pos[u]).min() {
            Some(parent_step) => tree_edges.push((step, parent_step)),
            None => roots.push(step),
        }
    }
    for pair in roots.windows(2) {
        tree_edges.push((pair[0], pair[1]));
    }
    TreeDecomposition::new(bags, tree_edges)
}

/// Render in the line-based format `s td <bags> <width+1> <n>`, one
/// `b <id> <vertices...>` line per bag and one `<id> <id>` line per tree
/// edge, all ids 1-based.
pub fn to_pace_string(td: &TreeDecomposition, n: usize) -> String {
    let mut out = String::new();
    let max_bag = td.bags().iter().map(Vec::len).max().unwrap_or(0);
    out.push_str(&format!("s td {} {} {}\n", td.bags().len(), max_bag, n));
    for (i, bag) in td.bags().iter().enumerate() {
        out.push_str(&format!("b {}", i + 1));
        for &v in bag {
            out.push_str(&format!(" {}", v + 1));
        }
        out.push('\n');
    }
    for &(a, b) in td.tree_edges() {
        out.push_str(&format!("{} {}\n", a + 1, b + 1));
    }
    out
}

/// Parse the PACE-style format produced by [`to_pace_string`]. Comment
/// lines starting with `c` are ignored. Returns the decomposition and the
/// declared vertex count.
pub fn from_pace_str(text: &str) -> Result<(TreeDecomposition, usize)> {
    let mut bags: Vec<Vec<usize>> = Vec::new();
    let mut tree_edges = Vec::new();
    let mut declared: Option<(usize, usize)> = None; // (#bags, n)

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let head = tokens.next().unwrap();
        let err = |msg: &str| Error::Parse(format!("line {}: {msg}", lineno + 1));
        match head {
            "s" => {
                if tokens.next() != Some("td") {
                    return Err(err("expected 's td <bags> <width+1> <n>'"));
                }
                let nums: Vec<usize> = tokens
                    .map(|t| t.parse().map_err(|_| err("bad number in header")))
                    .collect::<Result<_>>()?;
                if nums.len() != 3 {
                    return Err(err("expected 's td <bags> <width+1> <n>'"));
                }
                declared = Some((nums[0], nums[2]));
                bags = vec![Vec::new(); nums[0]];
            }
            "b" => {
                let (count, _) = declared.ok_or_else(|| err("bag line before header"))?;
                let id: usize = tokens
                    .next()
                    .ok_or_else(|| err("missing bag id"))?
                    .parse()
                    .map_err(|_| err("bad bag id"))?;
                if id == 0 || id > count {
                    return Err(err("bag id out of range"));
                }
                let mut bag = Vec::new();
                for t in tokens {
                    let v: usize = t.parse().map_err(|_| err("bad vertex id"))?;
                    if v == 0 {
                        return Err(err("vertex ids are 1-based"));
                    }
                    bag.push(v - 1);
                }
                bags[id - 1] = bag;
            }
            _ => {
                let (count, _) = declared.ok_or_else(|| err("edge line before header"))?;
                let a: usize = head.parse().map_err(|_| err("bad bag id"))?;
                let b: usize = tokens
                    .next()
                    .ok_or_else(|| err("missing second bag id"))?
                    .parse()
                    .map_err(|_| err("bad bag id"))?;
                if a == 0 || b == 0 || a > count || b > count {
                    return Err(err("bag id out of range"));
                }
                tree_edges.push((a - 1, b - 1));
            }
        }
    }
    let (_, n) = declared.ok_or_else(|| Error::Parse("missing 's td' header".into()))?;
    Ok((TreeDecomposition::new(bags, tree_edges), n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rational;

    fn ri(n: u64) -> Rational {
        Rational::from_integer(n)
    }

    fn r(n: u64, d: u64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn path3() -> WeightedInstance {
        WeightedInstance::new(
            3,
            false,
            vec![(0, 1, ri(1)), (1, 2, ri(1))],
            vec![ri(0); 3],
        )
        .unwrap()
    }

    #[test]
    fn valid_path_decomposition() {
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
        assert!(td.validate(&path3()).unwrap());
        assert_eq!(td.width(), 1);
    }

    #[test]
    fn uncovered_edge_fails() {
        let td = TreeDecomposition::new(vec![vec![0], vec![1, 2]], vec![(0, 1)]);
        assert!(!td.validate(&path3()).unwrap());
    }

    #[test]
    fn non_contiguous_vertex_fails_connectivity() {
        // a sits in the two end bags but not the middle one.
        let g = WeightedInstance::new(
            3,
            false,
            vec![(0, 1, ri(1)), (0, 2, ri(1)), (1, 2, ri(1))],
            vec![ri(0); 3],
        )
        .unwrap();
        let td = TreeDecomposition::new(
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
            vec![(0, 1), (1, 2)],
        );
        assert!(!td.validate(&g).unwrap());
    }

    #[test]
    fn non_tree_is_a_hard_error() {
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![]);
        assert!(td.validate(&path3()).is_err());
        let cyclic = TreeDecomposition::new(
            vec![vec![0], vec![1], vec![2]],
            vec![(0, 1), (1, 2), (2, 0)],
        );
        assert!(cyclic.validate(&path3()).is_err());
    }

    #[test]
    fn transform_adds_middle_bag() {
        let g = WeightedInstance::new(2, false, vec![(0, 1, r(3, 2))], vec![ri(1); 2]).unwrap();
        let td = TreeDecomposition::new(vec![vec![0, 1]], vec![]);
        let out = td.transform(&g).unwrap();
        assert_eq!(out.bags(), &[vec![0, 1], vec![0, 1, 2, 3]]);
        assert_eq!(out.tree_edges(), &[(0, 1)]);
        assert_eq!(out.width(), 3);
        let (h, _) = gadget(&g).unwrap();
        assert!(out.validate(&h).unwrap());
    }

    #[test]
    fn transform_is_identity_for_unit_bundles() {
        let g = path3();
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
        let out = td.transform(&g).unwrap();
        assert_eq!(out, td);
    }

    #[test]
    fn transform_path_with_heavy_edge() {
        let g = WeightedInstance::new(
            3,
            false,
            vec![(0, 1, ri(2)), (1, 2, ri(1))],
            vec![ri(1), ri(2), ri(1)],
        )
        .unwrap();
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
        let out = td.transform(&g).unwrap();
        assert_eq!(out.bags(), &[vec![0, 1], vec![1, 2], vec![0, 1, 3]]);
        assert_eq!(out.width(), 2);
        let (h, _) = gadget(&g).unwrap();
        assert!(out.validate(&h).unwrap());
    }

    #[test]
    fn min_fill_produces_valid_decomposition() {
        let g = WeightedInstance::new(
            5,
            false,
            vec![
                (0, 1, ri(1)),
                (1, 2, ri(1)),
                (2, 3, ri(1)),
                (3, 0, ri(1)),
                (2, 4, ri(1)),
            ],
            vec![ri(0); 5],
        )
        .unwrap();
        let td = min_fill_decomposition(&g);
        assert!(td.validate(&g).unwrap());
        // C4 plus a pendant: treewidth 2.
        assert_eq!(td.width(), 2);
    }

    #[test]
    fn min_fill_handles_disconnected_graphs() {
        let g = WeightedInstance::new(4, false, vec![(0, 1, ri(1))], vec![ri(0); 4]).unwrap();
        let td = min_fill_decomposition(&g);
        assert!(td.validate(&g).unwrap());
    }

    #[test]
    fn pace_roundtrip() {
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
        let text = to_pace_string(&td, 3);
        let (back, n) = from_pace_str(&text).unwrap();
        assert_eq!(back, td);
        assert_eq!(n, 3);
    }

    #[test]
    fn pace_rejects_garbage() {
        assert!(from_pace_str("b 1 2\n").is_err());
        assert!(from_pace_str("s td x y z\n").is_err());
        assert!(from_pace_str("").is_err());
    }
}
