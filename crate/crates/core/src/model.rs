//! Topologies, demand sets and the line-oriented instance format.
//!
//! Nodes are numbered `1..=N`. Every physical edge `{u, v}` is stored once and
//! exposes the two directed links `(u, v)` and `(v, u)`.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::power::PowerParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(u32);

impl NodeId {
    pub fn new(id: u32) -> Option<Self> {
        (id >= 1).then_some(NodeId(id))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub(crate) fn index(self) -> usize {
        self.0 as usize - 1
    }

    pub(crate) fn from_index(index: usize) -> Self {
        NodeId(index as u32 + 1)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A directed link between two adjacent nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Link {
    pub from: NodeId,
    pub to: NodeId,
}

impl Link {
    pub fn new(from: NodeId, to: NodeId) -> Self {
        Link { from, to }
    }

    pub fn reversed(self) -> Self {
        Link {
            from: self.to,
            to: self.from,
        }
    }

    /// The undirected edge this link belongs to, smaller endpoint first.
    pub fn edge(self) -> (NodeId, NodeId) {
        if self.from < self.to {
            (self.from, self.to)
        } else {
            (self.to, self.from)
        }
    }
}

impl fmt::Display for Link {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.from, self.to)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    node_count: usize,
    adjacency: Vec<Vec<NodeId>>,
    edges: BTreeSet<(NodeId, NodeId)>,
}

impl Topology {
    /// A topology with `node_count` isolated nodes.
    pub fn empty(node_count: usize) -> Self {
        Topology {
            node_count,
            adjacency: vec![Vec::new(); node_count],
            edges: BTreeSet::new(),
        }
    }

    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        let mut topology = Topology::empty(node_count);
        for (u, v) in edges {
            topology.add_edge(u, v)?;
        }
        Ok(topology)
    }

    /// Adds the physical edge `{u, v}`. Self-loops, duplicates and
    /// out-of-range endpoints are rejected.
    pub fn add_edge(&mut self, u: u32, v: u32) -> Result<()> {
        let a = self.node(u)?;
        let b = self.node(v)?;
        if a == b {
            return Err(Error::Instance(format!("self-loop on node {a}")));
        }
        let key = if a < b { (a, b) } else { (b, a) };
        if !self.edges.insert(key) {
            return Err(Error::Instance(format!("duplicate edge {}-{}", key.0, key.1)));
        }
        for (x, y) in [(a, b), (b, a)] {
            let list = &mut self.adjacency[x.index()];
            let pos = list.binary_search(&y).unwrap_err();
            list.insert(pos, y);
        }
        Ok(())
    }

    /// Resolves a raw node number against this topology.
    pub fn node(&self, id: u32) -> Result<NodeId> {
        match NodeId::new(id) {
            Some(node) if (id as usize) <= self.node_count => Ok(node),
            _ => Err(Error::Instance(format!(
                "node {id} is outside 1..={}",
                self.node_count
            ))),
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        (0..self.node_count).map(NodeId::from_index)
    }

    pub fn contains(&self, node: NodeId) -> bool {
        node.index() < self.node_count
    }

    /// Neighbours of `node` in ascending order.
    pub fn neighbors(&self, node: NodeId) -> &[NodeId] {
        &self.adjacency[node.index()]
    }

    pub fn degree(&self, node: NodeId) -> usize {
        self.adjacency[node.index()].len()
    }

    /// Undirected edges, smaller endpoint first, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// All directed links; twice the number of edges.
    pub fn links(&self) -> impl Iterator<Item = Link> + '_ {
        self.edges
            .iter()
            .flat_map(|&(u, v)| [Link::new(u, v), Link::new(v, u)])
    }

    pub fn has_link(&self, link: Link) -> bool {
        self.contains(link.from)
            && self.contains(link.to)
            && self.edges.contains(&link.edge())
    }

    /// Hop distances from every node to `target` (`None` when unreachable).
    pub fn hop_distances_to(&self, target: NodeId) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.node_count];
        let mut queue = VecDeque::new();
        dist[target.index()] = Some(0);
        queue.push_back(target);
        while let Some(u) = queue.pop_front() {
            let d = dist[u.index()].unwrap_or(0);
            for &v in self.neighbors(u) {
                if dist[v.index()].is_none() {
                    dist[v.index()] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        if self.node_count == 0 {
            return true;
        }
        self.hop_distances_to(NodeId::from_index(0))
            .iter()
            .all(Option::is_some)
    }

    /// True when `self` contains every possible edge.
    pub fn is_full_mesh(&self) -> bool {
        let n = self.node_count;
        n >= 2 && self.edges.len() == n * (n - 1) / 2
    }

    /// True when `self` is the cycle `1-2-…-N-1`.
    pub fn is_ring(&self) -> bool {
        let n = self.node_count as u32;
        n >= 3
            && self.edges.len() == n as usize
            && (1..=n).all(|i| {
                let j = i % n + 1;
                self.edges.contains(&(NodeId(i.min(j)), NodeId(i.max(j))))
            })
    }
}

/// A directed traffic demand in Gbps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Demand {
    pub source: NodeId,
    pub dest: NodeId,
    pub volume: f64,
}

impl Demand {
    pub fn new(source: NodeId, dest: NodeId, volume: f64) -> Self {
        Demand {
            source,
            dest,
            volume,
        }
    }
}

impl fmt::Display for Demand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.source, self.dest)
    }
}

/// A topology, its demand list (order preserved) and the power parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    topology: Topology,
    demands: Vec<Demand>,
    params: PowerParams,
}

impl Instance {
    /// Validates endpoints, volumes and duplicate pairs. The topology must be connected.
    pub fn new(topology: Topology, demands: Vec<Demand>, params: PowerParams) -> Result<Self> {
        if !topology.is_connected() {
            return Err(Error::Instance("topology is not connected".into()));
        }
        let mut seen = HashSet::new();
        for d in &demands {
            check_demand(&topology, d)?;
            if !seen.insert((d.source, d.dest)) {
                return Err(Error::Instance(format!("duplicate demand {d}")));
            }
        }
        Ok(Instance {
            topology,
            demands,
            params,
        })
    }

    /// One demand of `volume` Gbps for every ordered node pair, sorted by (source, dest).
    pub fn all_pairs(topology: Topology, volume: f64, params: PowerParams) -> Result<Self> {
        let demands = all_pairs_demands(&topology, volume);
        Instance::new(topology, demands, params)
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn demands(&self) -> &[Demand] {
        &self.demands
    }

    pub fn params(&self) -> &PowerParams {
        &self.params
    }

    pub fn with_params(mut self, params: PowerParams) -> Self {
        self.params = params;
        self
    }

    /// Replaces every demand volume with `volume`.
    pub fn with_uniform_volume(&self, volume: f64) -> Result<Self> {
        let demands = self
            .demands
            .iter()
            .map(|d| Demand::new(d.source, d.dest, volume))
            .collect();
        Instance::new(self.topology.clone(), demands, self.params)
    }

    /// Replaces an empty demand list with all ordered pairs at `volume`.
    pub fn with_all_pairs_if_empty(self, volume: f64) -> Result<Self> {
        if !self.demands.is_empty() {
            return Ok(self);
        }
        Instance::all_pairs(self.topology, volume, self.params)
    }

    /// The common volume when all demands carry the same traffic.
    pub fn uniform_volume(&self) -> Option<f64> {
        let first = self.demands.first()?.volume;
        self.demands
            .iter()
            .all(|d| d.volume == first)
            .then_some(first)
    }

    /// True when the demand set is exactly the N(N-1) ordered pairs.
    pub fn is_all_pairs(&self) -> bool {
        let n = self.topology.node_count();
        self.demands.len() == n * n.saturating_sub(1)
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse_instance(text)
    }

    /// Serializes to the line format accepted by [`Instance::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("nodes {}\n", self.topology.node_count());
        for (u, v) in self.topology.edges() {
            out.push_str(&format!("edge {u} {v}\n"));
        }
        for d in &self.demands {
            out.push_str(&format!("demand {} {} {}\n", d.source, d.dest, d.volume));
        }
        let p = &self.params;
        out.push_str(&format!(
            "power {} {} {}\n",
            p.p_port, p.p_transponder, p.wavelength_capacity
        ));
        out
    }
}

fn check_demand(topology: &Topology, d: &Demand) -> Result<()> {
    if !topology.contains(d.source) || !topology.contains(d.dest) {
        return Err(Error::Instance(format!(
            "demand {d} references a node outside 1..={}",
            topology.node_count()
        )));
    }
    if d.source == d.dest {
        return Err(Error::Instance(format!("demand {d} has identical endpoints")));
    }
    if !(d.volume.is_finite() && d.volume >= 0.0) {
        return Err(Error::Instance(format!(
            "demand {d} has invalid volume {}",
            d.volume
        )));
    }
    Ok(())
}

fn all_pairs_demands(topology: &Topology, volume: f64) -> Vec<Demand> {
    let mut demands = Vec::new();
    for s in topology.nodes() {
        for t in topology.nodes() {
            if s != t {
                demands.push(Demand::new(s, t, volume));
            }
        }
    }
    demands
}

fn check_protectable_size(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::Instance(format!(
            "1+1 protection needs two disjoint paths, which requires at least 3 nodes (got {n})"
        )));
    }
    Ok(())
}

/// Full mesh on `n` nodes with all-pairs demands of `volume` Gbps.
pub fn generate_full_mesh(n: usize, volume: f64) -> Result<Instance> {
    check_protectable_size(n)?;
    let n32 = n as u32;
    let edges = (1..=n32).flat_map(|u| (u + 1..=n32).map(move |v| (u, v)));
    let topology = Topology::from_edges(n, edges)?;
    Instance::all_pairs(topology, volume, PowerParams::default())
}

/// Ring `1-2-…-n-1` with all-pairs demands of `volume` Gbps.
pub fn generate_ring(n: usize, volume: f64) -> Result<Instance> {
    check_protectable_size(n)?;
    let n32 = n as u32;
    let edges = (1..=n32).map(|i| (i, i % n32 + 1));
    let topology = Topology::from_edges(n, edges)?;
    Instance::all_pairs(topology, volume, PowerParams::default())
}

pub fn load_instance(text: &str) -> Result<Instance> {
    parse_instance(text)
}

fn parse_instance(text: &str) -> Result<Instance> {
    let mut topology: Option<(Topology, usize)> = None;
    let mut demands = Vec::new();
    let mut demand_lines = Vec::new();
    let mut params = PowerParams::default();
    let mut seen = HashSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let at = |message: String| Error::Parse { line, message };
        let mut words = content.split_whitespace();
        let directive = words.next().unwrap_or_default();
        let args: Vec<&str> = words.collect();

        let Some((topo, _)) = topology.as_mut() else {
            if directive != "nodes" {
                return Err(at(format!(
                    "expected `nodes <N>` before `{directive}`"
                )));
            }
            let [n] = expect_args::<1>(&args, line, "nodes <N>")?;
            let n: usize = parse_num(n, line)?;
            if n == 0 {
                return Err(at("node count must be positive".into()));
            }
            topology = Some((Topology::empty(n), line));
            continue;
        };

        match directive {
            "nodes" => return Err(at("`nodes` may appear only once".into())),
            "edge" => {
                let [u, v] = expect_args::<2>(&args, line, "edge <u> <v>")?;
                let (u, v) = (parse_num(u, line)?, parse_num(v, line)?);
                topo.add_edge(u, v).map_err(|e| at(strip(e)))?;
            }
            "demand" => {
                let [s, t, vol] = expect_args::<3>(&args, line, "demand <s> <t> <gbps>")?;
                let s = topo.node(parse_num(s, line)?).map_err(|e| at(strip(e)))?;
                let t = topo.node(parse_num(t, line)?).map_err(|e| at(strip(e)))?;
                let d = Demand::new(s, t, parse_num(vol, line)?);
                check_demand(topo, &d).map_err(|e| at(strip(e)))?;
                if !seen.insert((s, t)) {
                    return Err(at(format!("duplicate demand {d}")));
                }
                demands.push(d);
                demand_lines.push(line);
            }
            "power" => {
                let [pp, pt, b] =
                    expect_args::<3>(&args, line, "power <p_port> <p_transponder> <gbps>")?;
                params = PowerParams::new(
                    parse_num(pp, line)?,
                    parse_num(pt, line)?,
                    parse_num(b, line)?,
                )
                .map_err(|e| at(strip(e)))?;
            }
            other => return Err(at(format!("unknown directive `{other}`"))),
        }
    }

    let Some((topology, nodes_line)) = topology else {
        return Err(Error::Parse {
            line: text.lines().count().max(1),
            message: "missing `nodes <N>` directive".into(),
        });
    };
    if !topology.is_connected() {
        let dist = topology.hop_distances_to(NodeId::from_index(0));
        let stray = dist.iter().position(Option::is_none).map(NodeId::from_index);
        return Err(Error::Parse {
            line: nodes_line,
            message: format!(
                "graph is disconnected: node {} cannot reach node 1",
                stray.map_or(0, NodeId::get)
            ),
        });
    }
    Instance::new(topology, demands, params)
}

fn expect_args<const K: usize>(args: &[&str], line: usize, usage: &str) -> Result<[String; K]> {
    if args.len() != K {
        return Err(Error::Parse {
            line,
            message: format!("expected `{usage}`"),
        });
    }
    Ok(std::array::from_fn(|i| args[i].to_string()))
}

fn parse_num<T: std::str::FromStr>(word: impl AsRef<str>, line: usize) -> Result<T> {
    let word = word.as_ref();
    word.parse().map_err(|_| Error::Parse {
        line,
        message: format!("`{word}` is not a valid number"),
    })
}

fn strip(e: Error) -> String {
    match e {
        Error::Instance(m) | Error::Domain(m) => m,
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mesh_counts() {
        for (n, demands, links) in [(5, 20, 20), (3, 6, 6), (4, 12, 12)] {
            let inst = generate_full_mesh(n, 20.0).unwrap();
            assert_eq!(inst.demands().len(), demands);
            assert_eq!(inst.topology().links().count(), links);
            assert!(inst.topology().is_full_mesh());
        }
    }

    #[test]
    fn ring_counts() {
        for (n, demands, links) in [(5, 20, 10), (11, 110, 22), (4, 12, 8)] {
            let inst = generate_ring(n, 1.0).unwrap();
            assert_eq!(inst.demands().len(), demands);
            assert_eq!(inst.topology().links().count(), links);
            assert!(inst.topology().is_ring());
        }
    }

    #[test]
    fn generators_reject_small_sizes() {
        for n in 0..3 {
            let err = generate_full_mesh(n, 1.0).unwrap_err();
            assert!(err.to_string().contains("at least 3 nodes"));
            assert!(generate_ring(n, 1.0).is_err());
        }
    }

    #[test]
    fn regularity() {
        for n in 3..12 {
            let mesh = generate_full_mesh(n, 1.0).unwrap();
            let ring = generate_ring(n, 1.0).unwrap();
            for v in mesh.topology().nodes() {
                assert_eq!(mesh.topology().degree(v), n - 1);
                assert_eq!(ring.topology().degree(v), 2);
            }
        }
    }

    #[test]
    fn link_closure() {
        let inst = generate_ring(6, 1.0).unwrap();
        let topo = inst.topology();
        for l in topo.links() {
            assert!(topo.has_link(l.reversed()));
        }
    }

    #[test]
    fn minimal_file() {
        let text = "# triangle\nnodes 3\nedge 1 2\nedge 2 3\nedge 3 1\ndemand 1 2 40\n";
        let inst = load_instance(text).unwrap();
        assert_eq!(inst.topology().node_count(), 3);
        assert_eq!(inst.demands().len(), 1);
        assert_eq!(inst.demands()[0].volume, 40.0);
        assert_eq!(*inst.params(), PowerParams::default());
    }

    #[test]
    fn dangling_node_reports_line() {
        let text = "nodes 3\nedge 1 2\nedge 2 9\n";
        match load_instance(text) {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 3);
                assert!(message.contains('9'), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_errors() {
        let cases = [
            ("edge 1 2\n", 1),
            ("nodes 3\nnodes 3\n", 2),
            ("nodes 3\nedge 1 2\nedge 2 1\n", 3),
            ("nodes 3\nedge 1 1\n", 2),
            ("nodes 3\nlink 1 2\n", 2),
            ("nodes 3\nedge 1 2\nedge 2 3\ndemand 1 2 5\ndemand 1 2 6\n", 5),
            ("nodes 3\nedge 1 2\nedge 2 3\ndemand 1 2 -5\n", 4),
            ("nodes 3\nedge 1 2\n", 1),
            ("nodes 3\nedge 1 2\nedge 2 3\npower 1000 73\n", 4),
            ("nodes 3\nedge 1 2\nedge 2 3\npower 1000 73 0\n", 4),
            ("nodes x\n", 1),
        ];
        for (text, expected) in cases {
            match load_instance(text) {
                Err(Error::Parse { line, .. }) => assert_eq!(line, expected, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn eleven_node_example_topology() {
        let text = "\
nodes 11
edge 2 1
edge 2 4
edge 1 3
edge 3 6
edge 6 7
edge 7 11
edge 4 5
edge 5 11
edge 1 8
edge 8 9
edge 9 10
edge 10 11
demand 2 11 10
demand 3 11 10
";
        let inst = load_instance(text).unwrap();
        assert_eq!(inst.topology().node_count(), 11);
        assert_eq!(inst.topology().edge_count(), 12);
        assert_eq!(inst.demands()[0].source.get(), 2);
    }

    #[test]
    fn text_round_trip() {
        let inst = generate_ring(5, 12.5)
            .unwrap()
            .with_params(PowerParams::new(900.0, 60.5, 100.0).unwrap());
        let back = Instance::parse(&inst.to_text()).unwrap();
        assert_eq!(back, inst);
    }
}
