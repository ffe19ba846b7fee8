#![allow(dead_code)]

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use xorprot::model::{Demand, Instance, NodeId, Topology};
use xorprot::power::PowerParams;

/// Connected with no bridge, so every node pair has two edge-disjoint paths.
pub fn two_edge_connected(topo: &Topology) -> bool {
    if !topo.is_connected() {
        return false;
    }
    let edges: Vec<(u32, u32)> = topo.edges().map(|(u, v)| (u.get(), v.get())).collect();
    (0..edges.len()).all(|skip| {
        let rest = edges
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .map(|(_, &e)| e);
        Topology::from_edges(topo.node_count(), rest).unwrap().is_connected()
    })
}

/// G(n, p) samples, redrawn until two-edge-connected.
pub fn random_topology(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Topology {
    loop {
        let mut edges = Vec::new();
        for u in 1..=n as u32 {
            for v in u + 1..=n as u32 {
                if rng.random_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        let topo = Topology::from_edges(n, edges).unwrap();
        if two_edge_connected(&topo) {
            return topo;
        }
    }
}

/// All-pairs demands with integer volumes drawn from `10..=100`.
pub fn random_instance(rng: &mut ChaCha8Rng, n: usize) -> Instance {
    let topo = random_topology(rng, n, 0.5);
    let mut demands = Vec::new();
    for s in topo.nodes() {
        for t in topo.nodes() {
            if s != t {
                demands.push(Demand::new(s, t, rng.random_range(10..=100) as f64));
            }
        }
    }
    Instance::new(topo, demands, PowerParams::default()).unwrap()
}

/// The fixed corpus of random instances used by the property and acceptance suites.
pub fn random_corpus(count: usize, seed: u64) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(3..=6);
            random_instance(&mut rng, n)
        })
        .collect()
}

/// Every simple path from `s` to `t` as a node list.
pub fn simple_paths(topo: &Topology, s: NodeId, t: NodeId) -> Vec<Vec<NodeId>> {
    fn go(topo: &Topology, t: NodeId, path: &mut Vec<NodeId>, out: &mut Vec<Vec<NodeId>>) {
        let last = *path.last().unwrap();
        if last == t {
            out.push(path.clone());
            return;
        }
        for &next in topo.neighbors(last) {
            if !path.contains(&next) {
                path.push(next);
                go(topo, t, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(topo, t, &mut vec![s], &mut out);
    out
}

fn undirected_edges(path: &[NodeId]) -> Vec<(NodeId, NodeId)> {
    path.windows(2).map(|w| (w[0].min(w[1]), w[0].max(w[1]))).collect()
}

/// Minimum total hop count of two edge-disjoint `s`-`t` paths, by enumeration.
pub fn brute_disjoint_total(topo: &Topology, s: NodeId, t: NodeId) -> Option<usize> {
    let paths = simple_paths(topo, s, t);
    let mut best = None;
    for (i, a) in paths.iter().enumerate() {
        let ea = undirected_edges(a);
        for b in &paths[i + 1..] {
            if undirected_edges(b).iter().all(|e| !ea.contains(e)) {
                let total = a.len() + b.len() - 2;
                best = Some(best.map_or(total, |x: usize| x.min(total)));
            }
        }
    }
    best
}

/// Minimum hop count by breadth-first search.
pub fn bfs_hops(topo: &Topology, s: NodeId, t: NodeId) -> usize {
    let mut dist = vec![usize::MAX; topo.node_count() + 1];
    dist[s.get() as usize] = 0;
    let mut queue = std::collections::VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        for &v in topo.neighbors(u) {
            if dist[v.get() as usize] == usize::MAX {
                dist[v.get() as usize] = dist[u.get() as usize] + 1;
                queue.push_back(v);
            }
        }
    }
    dist[t.get() as usize]
}
