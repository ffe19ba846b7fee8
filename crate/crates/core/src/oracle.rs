//! Brute-force optimum over matchings and equal-cost re-routings.
//!
//! Every matching of every cluster is enumerated, each coded pair may use any
//! feasible path combination. The joint search additionally walks the cross
//! product of each demand's minimum-total disjoint pairs.

use crate::coding::{
    advance, clusters, routing_options, weight_units, CodedPair, CodingAssignment, Combo,
    Feasibility,
};
use crate::error::{Error, Result};
use crate::model::Instance;
use crate::power::{check_routing, eval_with_coding};
use crate::routing::{route_all, PathPair};

/// Matchings enumerated per cluster before refusing.
pub const MATCHING_GUARD: u128 = 1 << 20;
/// Largest cluster the enumeration accepts.
pub const CLUSTER_GUARD: usize = 20;
/// Largest node count accepted by [`optimal_joint`].
pub const JOINT_NODE_GUARD: usize = 7;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub best_power: f64,
    pub best_assignment: CodingAssignment,
    pub best_routing: Vec<PathPair>,
    /// Complete matchings evaluated.
    pub explored: u64,
    /// False when some demand had more equal-cost pairs than the candidate budget.
    pub exact: bool,
}

struct ClusterEdges {
    /// `adj[i]`: candidate pairs `(j, weight, pair)` with `j > i`, canonical order.
    adj: Vec<Vec<(usize, i64, CodedPair)>>,
}

impl ClusterEdges {
    fn build(
        instance: &Instance,
        members: &[usize],
        paths: &[&PathPair],
        combos: &[Combo],
    ) -> Result<Self> {
        let demands = instance.demands();
        let mut adj = vec![Vec::new(); members.len()];
        for i in 0..members.len() {
            for j in i + 1..members.len() {
                for combo in Combo::ALL.into_iter().filter(|c| combos.contains(c)) {
                    let (a, b) = (members[i], members[j]);
                    let (shared_links, benefit) = crate::coding::pair_benefit(
                        &demands[a],
                        &demands[b],
                        combo.first.select(paths[i]),
                        combo.second.select(paths[j]),
                        instance.params(),
                    )?;
                    if shared_links.is_empty() {
                        continue;
                    }
                    let w = weight_units(&demands[a], &demands[b], shared_links.len());
                    adj[i].push((
                        j,
                        w,
                        CodedPair {
                            d1: a,
                            d2: b,
                            combo,
                            shared_links,
                            benefit,
                        },
                    ));
                }
            }
        }
        Ok(ClusterEdges { adj })
    }

    fn count_matchings(&self) -> u128 {
        let n = self.adj.len();
        let mut count = vec![0u128; 1 << n];
        count[0] = 1;
        for mask in 1usize..(1 << n) {
            let i = mask.trailing_zeros() as usize;
            let rest = mask & !(1 << i);
            let mut c = count[rest];
            for &(j, _, _) in &self.adj[i] {
                if rest & (1 << j) != 0 {
                    c = c.saturating_add(count[rest & !(1 << j)]);
                }
            }
            count[mask] = c;
        }
        count[(1 << n) - 1]
    }

    /// Best matching by exhaustive enumeration: (weight, chosen edges, matchings visited).
    fn best(&self) -> (i64, Vec<&CodedPair>, u64) {
        struct Search<'a> {
            adj: &'a [Vec<(usize, i64, CodedPair)>],
            free: Vec<bool>,
            stack: Vec<&'a CodedPair>,
            weight: i64,
            best: Option<(i64, Vec<&'a CodedPair>)>,
            visited: u64,
        }
        impl<'a> Search<'a> {
            fn go(&mut self, from: usize) {
                let Some(i) = (from..self.free.len()).find(|&i| self.free[i]) else {
                    self.visited += 1;
                    if self.best.as_ref().map_or(true, |(w, _)| self.weight > *w) {
                        self.best = Some((self.weight, self.stack.clone()));
                    }
                    return;
                };
                self.free[i] = false;
                let adj = self.adj;
                for (j, w, pair) in &adj[i] {
                    if self.free[*j] {
                        self.free[*j] = false;
                        self.stack.push(pair);
                        self.weight += w;
                        self.go(i + 1);
                        self.weight -= w;
                        self.stack.pop();
                        self.free[*j] = true;
                    }
                }
                self.go(i + 1);
                self.free[i] = true;
            }
        }
        let mut search = Search {
            adj: &self.adj,
            free: vec![true; self.adj.len()],
            stack: Vec::new(),
            weight: 0,
            best: None,
            visited: 0,
        };
        search.go(0);
        let (w, pairs) = search.best.unwrap_or_default();
        (w, pairs, search.visited)
    }
}

fn guard_cluster(edges: &ClusterEdges) -> Result<()> {
    let count = edges.count_matchings();
    if count > MATCHING_GUARD {
        return Err(Error::OracleGuard(format!(
            "a cluster of {} demands has {count} matchings (limit {MATCHING_GUARD})",
            edges.adj.len()
        )));
    }
    Ok(())
}

fn guard_size(members: usize) -> Result<()> {
    if members > CLUSTER_GUARD {
        return Err(Error::OracleGuard(format!(
            "a cluster of {members} demands exceeds the enumeration limit of {CLUSTER_GUARD}"
        )));
    }
    Ok(())
}

fn finish(
    instance: &Instance,
    routing: Vec<PathPair>,
    mut pairs: Vec<CodedPair>,
    explored: u64,
    exact: bool,
) -> Result<OracleResult> {
    pairs.sort_by_key(|p| (instance.demands()[p.d1].dest, instance.demands()[p.d1].source));
    let assignment = CodingAssignment::new(pairs, Feasibility::SharedLink);
    let report = eval_with_coding(instance, &routing, &assignment)?;
    Ok(OracleResult {
        best_power: report.p_total,
        best_assignment: assignment,
        best_routing: routing,
        explored,
        exact,
    })
}

/// Optimal coding for a fixed routing, by enumeration of every matching.
pub fn optimal_matching(
    instance: &Instance,
    routing: &[PathPair],
    combos: &[Combo],
) -> Result<OracleResult> {
    check_routing(instance, routing)?;
    let mut pairs = Vec::new();
    let mut explored = 0;
    for cluster in clusters(instance) {
        guard_size(cluster.members.len())?;
        let paths: Vec<&PathPair> = cluster.members.iter().map(|&d| &routing[d]).collect();
        let edges = ClusterEdges::build(instance, &cluster.members, &paths, combos)?;
        guard_cluster(&edges)?;
        let (_, best, visited) = edges.best();
        explored += visited;
        pairs.extend(best.into_iter().cloned());
    }
    finish(instance, routing.to_vec(), pairs, explored, true)
}

/// Optimal joint choice of equal-cost disjoint pairs (up to `budget` per demand) and coding.
pub fn optimal_joint(instance: &Instance, budget: usize) -> Result<OracleResult> {
    let n = instance.topology().node_count();
    if n > JOINT_NODE_GUARD {
        return Err(Error::OracleGuard(format!(
            "joint search is limited to {JOINT_NODE_GUARD} nodes (got {n})"
        )));
    }
    if budget == 0 {
        return Err(Error::Domain("candidate budget must be at least 1".into()));
    }
    let routing = route_all(instance)?;
    let mut chosen = routing.clone();
    let mut pairs = Vec::new();
    let mut explored = 0;
    let mut exact = true;
    for cluster in clusters(instance) {
        guard_size(cluster.members.len())?;
        let mut options = Vec::with_capacity(cluster.members.len());
        for &d in &cluster.members {
            let (opts, complete) = routing_options(instance, &routing[d], budget)?;
            exact &= complete;
            options.push(opts);
        }
        let mut choice = vec![0; options.len()];
        let mut best: Option<(i64, Vec<CodedPair>, Vec<usize>)> = None;
        loop {
            let paths: Vec<&PathPair> = choice
                .iter()
                .zip(&options)
                .map(|(&c, o)| &o[c])
                .collect();
            let edges = ClusterEdges::build(instance, &cluster.members, &paths, &Combo::ALL)?;
            guard_cluster(&edges)?;
            let (w, found, visited) = edges.best();
            explored += visited;
            if best.as_ref().map_or(true, |(bw, _, _)| w > *bw) {
                best = Some((w, found.into_iter().cloned().collect(), choice.clone()));
            }
            if !advance(&mut choice, &options) {
                break;
            }
        }
        let (_, found, picked) = best.expect("at least one routing combination");
        for ((&d, &c), o) in cluster.members.iter().zip(&picked).zip(&options) {
            chosen[d] = o[c].clone();
        }
        pairs.extend(found);
    }
    finish(instance, chosen, pairs, explored, exact)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{generate_full_mesh, generate_ring, Topology};
    use crate::power::PowerParams;

    #[test]
    fn first_points() {
        let mesh = generate_full_mesh(5, 20.0).unwrap();
        let r = optimal_matching(&mesh, &route_all(&mesh).unwrap(), &Combo::ALL).unwrap();
        assert_eq!(r.best_power, 26825.0);
        assert!(r.exact);

        let ring = generate_ring(5, 20.0).unwrap();
        let r = optimal_matching(&ring, &route_all(&ring).unwrap(), &Combo::ALL).unwrap();
        assert_eq!(r.best_power, 37555.0);
    }

    #[test]
    fn joint_examples() {
        let savings = |inst: &Instance| {
            let r = optimal_joint(inst, 8).unwrap();
            let conv = crate::power::eval_conventional(inst, &r.best_routing).unwrap();
            100.0 * (conv - r.best_power) / conv
        };
        assert!((savings(&generate_full_mesh(5, 1.0).unwrap()) - 16.6667).abs() < 1e-4);
        assert!((savings(&generate_ring(7, 1.0).unwrap()) - 30.9524).abs() < 1e-4);
        assert!((savings(&generate_ring(3, 1.0).unwrap()) - 16.6667).abs() < 1e-4);
    }

    #[test]
    fn no_feasible_pairs() {
        let topo = Topology::from_edges(3, [(1, 2), (2, 3), (3, 1)]).unwrap();
        let d = crate::model::Demand::new(
            crate::model::NodeId::new(1).unwrap(),
            crate::model::NodeId::new(2).unwrap(),
            5.0,
        );
        let inst = Instance::new(topo, vec![d], PowerParams::default()).unwrap();
        let routing = route_all(&inst).unwrap();
        let r = optimal_matching(&inst, &routing, &Combo::ALL).unwrap();
        assert!(r.best_assignment.is_empty());
        assert_eq!(r.best_power, crate::power::eval_conventional(&inst, &routing).unwrap());
    }

    #[test]
    fn guards() {
        let mesh = generate_full_mesh(8, 1.0).unwrap();
        assert!(matches!(optimal_joint(&mesh, 8), Err(Error::OracleGuard(_))));
        let mesh = generate_full_mesh(22, 1.0).unwrap();
        let routing = route_all(&mesh).unwrap();
        assert!(matches!(
            optimal_matching(&mesh, &routing, &Combo::ALL),
            Err(Error::OracleGuard(_))
        ));
    }

    #[test]
    fn deterministic() {
        let ring = generate_ring(6, 2.0).unwrap();
        assert_eq!(optimal_joint(&ring, 4).unwrap(), optimal_joint(&ring, 4).unwrap());
    }
}
