//! Minimum-hop routing and edge-disjoint working/protection pairs.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::model::{Demand, Instance, Link, NodeId, Topology};

/// Simple paths explored per demand before candidate enumeration gives up.
const PATH_ENUMERATION_LIMIT: usize = 1 << 20;

/// A simple path stored as its node sequence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    nodes: Vec<NodeId>,
}

impl Path {
    /// Validates that `nodes` is a simple walk over links of `topology`.
    pub fn new(topology: &Topology, nodes: Vec<NodeId>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::Contract("a path needs at least one link".into()));
        }
        let mut seen = HashSet::new();
        for &n in &nodes {
            if !topology.contains(n) || !seen.insert(n) {
                return Err(Error::Contract(format!(
                    "node {n} is invalid or repeated in path"
                )));
            }
        }
        let path = Path { nodes };
        if let Some(l) = path.links().find(|&l| !topology.has_link(l)) {
            return Err(Error::Contract(format!("link {l} is not in the topology")));
        }
        Ok(path)
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn source(&self) -> NodeId {
        self.nodes[0]
    }

    pub fn dest(&self) -> NodeId {
        self.nodes[self.nodes.len() - 1]
    }

    pub fn hop_count(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn links(&self) -> impl Iterator<Item = Link> + '_ {
        self.nodes.windows(2).map(|w| Link::new(w[0], w[1]))
    }

    fn edge_set(&self) -> BTreeSet<(NodeId, NodeId)> {
        self.links().map(Link::edge).collect()
    }

    /// True when the two paths share no undirected edge.
    pub fn edge_disjoint(&self, other: &Path) -> bool {
        let mine = self.edge_set();
        other.links().all(|l| !mine.contains(&l.edge()))
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, n) in self.nodes.iter().enumerate() {
            if i > 0 {
                f.write_str("-")?;
            }
            write!(f, "{n}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathPair {
    pub demand: Demand,
    pub working: Path,
    pub protection: Path,
}

impl PathPair {
    pub fn total_hops(&self) -> usize {
        self.working.hop_count() + self.protection.hop_count()
    }

    /// Checks endpoints, disjointness and the working-is-shorter convention.
    pub fn validate(&self, topology: &Topology) -> Result<()> {
        for p in [&self.working, &self.protection] {
            Path::new(topology, p.nodes.clone())?;
            if p.source() != self.demand.source || p.dest() != self.demand.dest {
                return Err(Error::Contract(format!(
                    "path {p} does not serve demand {}",
                    self.demand
                )));
            }
        }
        if !self.working.edge_disjoint(&self.protection) {
            return Err(Error::Contract(format!(
                "working and protection of {} share an edge",
                self.demand
            )));
        }
        if self.working.hop_count() > self.protection.hop_count() {
            return Err(Error::Contract(format!(
                "working path of {} is longer than its protection",
                self.demand
            )));
        }
        Ok(())
    }
}

fn check_endpoints(topology: &Topology, s: NodeId, t: NodeId) -> Result<()> {
    for n in [s, t] {
        if !topology.contains(n) {
            return Err(Error::Instance(format!("node {n} is not in the topology")));
        }
    }
    if s == t {
        return Err(Error::Domain(format!("source and destination are both {s}")));
    }
    Ok(())
}

/// Lexicographically smallest minimum-hop path from `s` to `t`.
pub fn shortest_path(topology: &Topology, s: NodeId, t: NodeId) -> Result<Path> {
    check_endpoints(topology, s, t)?;
    let dist = topology.hop_distances_to(t);
    let Some(mut remaining) = dist[s.index()] else {
        return Err(Error::Unreachable { from: s, to: t });
    };
    let mut nodes = vec![s];
    let mut u = s;
    while remaining > 0 {
        remaining -= 1;
        u = *topology
            .neighbors(u)
            .iter()
            .find(|v| dist[v.index()] == Some(remaining))
            .expect("BFS layering guarantees a closer neighbour");
        nodes.push(u);
    }
    Ok(Path { nodes })
}

/// Two edge-disjoint `s`→`t` paths of minimum total hop count, shorter first.
///
/// Suurballe's algorithm: a shortest path, then a second shortest path on the
/// residual graph under reduced costs, then cancellation of opposing links.
pub fn suurballe(topology: &Topology, s: NodeId, t: NodeId) -> Result<(Path, Path)> {
    let first = shortest_path(topology, s, t)?;
    let from_s = topology.hop_distances_to(s);
    let on_first: HashSet<Link> = first.links().collect();

    // Reduced cost of traversing u→v in the residual graph, or None if absent.
    let reduced = |u: NodeId, v: NodeId| -> Option<usize> {
        let (du, dv) = (from_s[u.index()]?, from_s[v.index()]?);
        if on_first.contains(&Link::new(u, v)) {
            None
        } else if on_first.contains(&Link::new(v, u)) {
            // Residual reverse link of cost -1; zero after reduction since du = dv + 1.
            debug_assert_eq!(du, dv + 1);
            Some(0)
        } else {
            Some(1 + du - dv)
        }
    };

    let n = topology.node_count();
    let mut best = vec![usize::MAX; n];
    let mut prev: Vec<Option<NodeId>> = vec![None; n];
    let mut heap = BinaryHeap::new();
    best[s.index()] = 0;
    heap.push(Reverse((0usize, s)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if d > best[u.index()] {
            continue;
        }
        for &v in topology.neighbors(u) {
            if let Some(c) = reduced(u, v) {
                let nd = d + c;
                if nd < best[v.index()] {
                    best[v.index()] = nd;
                    prev[v.index()] = Some(u);
                    heap.push(Reverse((nd, v)));
                }
            }
        }
    }
    if prev[t.index()].is_none() {
        let cut = find_bridge(topology, &first).expect("no disjoint pair implies a bridge");
        return Err(Error::Survivability { from: s, to: t, cut });
    }
    let mut second = vec![t];
    let mut u = t;
    while u != s {
        u = prev[u.index()].expect("predecessor chain reaches the source");
        second.push(u);
    }
    second.reverse();

    // Union of both link sets, dropping links traversed in both directions.
    let second_links: HashSet<Link> = second
        .windows(2)
        .map(|w| Link::new(w[0], w[1]))
        .collect();
    let mut flow: BTreeSet<Link> = BTreeSet::new();
    for l in first.links() {
        if !second_links.contains(&l.reversed()) {
            flow.insert(l);
        }
    }
    for &l in &second_links {
        if !on_first.contains(&l.reversed()) {
            flow.insert(l);
        }
    }

    let mut walk = || {
        let mut nodes = vec![s];
        let mut u = s;
        while u != t {
            let next = flow
                .range(Link::new(u, NodeId::from_index(0))..)
                .next()
                .copied()
                .filter(|l| l.from == u)
                .expect("flow conservation");
            flow.remove(&next);
            u = next.to;
            nodes.push(u);
        }
        Path { nodes }
    };
    let a = walk();
    let b = walk();
    Ok(if (a.hop_count(), &a) <= (b.hop_count(), &b) {
        (a, b)
    } else {
        (b, a)
    })
}

/// First edge of `path` whose removal separates its endpoints.
pub fn find_bridge(topology: &Topology, path: &Path) -> Option<(NodeId, NodeId)> {
    let (s, t) = (path.source(), path.dest());
    path.links().map(Link::edge).find(|&(a, b)| {
        let mut seen = vec![false; topology.node_count()];
        let mut stack = vec![s];
        seen[s.index()] = true;
        while let Some(u) = stack.pop() {
            for &v in topology.neighbors(u) {
                let removed = (u == a && v == b) || (u == b && v == a);
                if !removed && !seen[v.index()] {
                    seen[v.index()] = true;
                    stack.push(v);
                }
            }
        }
        !seen[t.index()]
    })
}

/// Candidate pairs for one demand plus whether the list is exhaustive.
#[derive(Debug, Clone)]
pub(crate) struct Candidates {
    pub pairs: Vec<PathPair>,
    pub complete: bool,
}

/// All simple `s`→`t` paths of at most `max_len` hops, in lexicographic order.
fn bounded_paths(topology: &Topology, s: NodeId, t: NodeId, max_len: usize) -> Result<Vec<Path>> {
    let dist = topology.hop_distances_to(t);
    let mut out = Vec::new();
    let mut on_path = vec![false; topology.node_count()];
    let mut stack = vec![s];
    on_path[s.index()] = true;

    fn dfs(
        topology: &Topology,
        t: NodeId,
        max_len: usize,
        dist: &[Option<usize>],
        stack: &mut Vec<NodeId>,
        on_path: &mut [bool],
        out: &mut Vec<Path>,
    ) -> bool {
        let u = *stack.last().expect("non-empty");
        if u == t {
            out.push(Path {
                nodes: stack.clone(),
            });
            return out.len() <= PATH_ENUMERATION_LIMIT;
        }
        let hops = stack.len() - 1;
        for &v in topology.neighbors(u) {
            let reachable = dist[v.index()].is_some_and(|d| hops + 1 + d <= max_len);
            if on_path[v.index()] || !reachable {
                continue;
            }
            on_path[v.index()] = true;
            stack.push(v);
            let keep_going = dfs(topology, t, max_len, dist, stack, on_path, out);
            stack.pop();
            on_path[v.index()] = false;
            if !keep_going {
                return false;
            }
        }
        true
    }

    if !dfs(topology, t, max_len, &dist, &mut stack, &mut on_path, &mut out) {
        return Err(Error::Domain(format!(
            "more than {PATH_ENUMERATION_LIMIT} candidate paths from {s} to {t}"
        )));
    }
    Ok(out)
}

/// Up to `limit` minimum-total disjoint pairs in lexicographic (working, protection) order.
pub(crate) fn candidate_pairs(
    topology: &Topology,
    demand: Demand,
    limit: usize,
) -> Result<Candidates> {
    let (s, t) = (demand.source, demand.dest);
    let (a, b) = suurballe(topology, s, t)?;
    let total = a.hop_count() + b.hop_count();
    let h_min = shortest_path(topology, s, t)?.hop_count();
    let paths = bounded_paths(topology, s, t, total - h_min)?;

    let mut pairs = Vec::new();
    for w in &paths {
        let partner = total - w.hop_count();
        if partner < w.hop_count() {
            continue;
        }
        for p in &paths {
            if p.hop_count() != partner || (partner == w.hop_count() && p <= w) {
                continue;
            }
            if w.edge_disjoint(p) {
                pairs.push((w, p));
            }
        }
    }
    pairs.sort();
    let complete = pairs.len() <= limit;
    let pairs = pairs
        .into_iter()
        .take(limit)
        .map(|(w, p)| PathPair {
            demand,
            working: w.clone(),
            protection: p.clone(),
        })
        .collect();
    Ok(Candidates { pairs, complete })
}

/// Canonical minimum-total disjoint pair: the lexicographically first of all optimal pairs.
pub fn suurballe_pair(topology: &Topology, demand: Demand) -> Result<PathPair> {
    check_endpoints(topology, demand.source, demand.dest)?;
    let mut c = candidate_pairs(topology, demand, 1)?;
    Ok(c.pairs.remove(0))
}

/// Up to `k` distinct minimum-total disjoint pairs, canonical pair first.
pub fn disjoint_pair_candidates(
    topology: &Topology,
    demand: Demand,
    k: usize,
) -> Result<Vec<PathPair>> {
    if k == 0 {
        return Err(Error::Domain("candidate budget must be at least 1".into()));
    }
    check_endpoints(topology, demand.source, demand.dest)?;
    Ok(candidate_pairs(topology, demand, k)?.pairs)
}

/// Canonical pair for every demand, aligned with `instance.demands()`.
pub fn route_all(instance: &Instance) -> Result<Vec<PathPair>> {
    instance
        .demands()
        .iter()
        .map(|&d| suurballe_pair(instance.topology(), d))
        .collect()
}
