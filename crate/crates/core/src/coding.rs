//! Pairing of same-destination demands whose paths can carry one XOR-coded signal.
//!
//! A coded pair `{d1, d2}` picks one path of each demand (`combo`) and shares a
//! wavelength on every directed link the two chosen paths have in common.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matching::max_weight_matching;
use crate::model::{Demand, Instance, Link, NodeId};
use crate::power::{check_routing, PowerParams};
use crate::routing::{candidate_pairs, Path, PathPair};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PathKind {
    Working,
    Protection,
}

impl PathKind {
    pub fn letter(self) -> char {
        match self {
            PathKind::Working => 'w',
            PathKind::Protection => 'p',
        }
    }

    pub fn select(self, pair: &PathPair) -> &Path {
        match self {
            PathKind::Working => &pair.working,
            PathKind::Protection => &pair.protection,
        }
    }

    fn other(self) -> Self {
        match self {
            PathKind::Working => PathKind::Protection,
            PathKind::Protection => PathKind::Working,
        }
    }
}

/// Which path of `d1` (`first`) is encoded with which path of `d2` (`second`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Combo {
    pub first: PathKind,
    pub second: PathKind,
}

impl Combo {
    pub const WW: Combo = Combo::new(PathKind::Working, PathKind::Working);
    pub const WP: Combo = Combo::new(PathKind::Working, PathKind::Protection);
    pub const PW: Combo = Combo::new(PathKind::Protection, PathKind::Working);
    pub const PP: Combo = Combo::new(PathKind::Protection, PathKind::Protection);

    /// All four combinations in tie-breaking preference order.
    pub const ALL: [Combo; 4] = [Combo::PP, Combo::WP, Combo::PW, Combo::WW];

    pub const fn new(first: PathKind, second: PathKind) -> Self {
        Combo { first, second }
    }

    fn rank(self) -> usize {
        Combo::ALL.iter().position(|&c| c == self).unwrap_or(0)
    }
}

impl fmt::Display for Combo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.first.letter(), self.second.letter())
    }
}

impl FromStr for Combo {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "").as_str() {
            "ww" => Ok(Combo::WW),
            "wp" => Ok(Combo::WP),
            "pw" => Ok(Combo::PW),
            "pp" => Ok(Combo::PP),
            _ => Err(Error::Usage(format!("unknown path combination `{s}`"))),
        }
    }
}

/// Rule deciding whether two same-destination demands may be coded together.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Feasibility {
    /// The encoded paths share at least one directed link.
    #[default]
    SharedLink,
    /// As `SharedLink`, and the two non-encoded paths are edge-disjoint.
    DisjointComplements,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CodedPair {
    /// Index into the instance's demand list; the demand with the smaller source.
    pub d1: usize,
    pub d2: usize,
    pub combo: Combo,
    /// Common directed links of the two encoded paths, sorted.
    pub shared_links: Vec<Link>,
    /// Watts saved: `k · min(V1, V2) · |shared_links|`.
    pub benefit: f64,
}

impl CodedPair {
    pub fn shared_hops(&self) -> usize {
        self.shared_links.len()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CodingAssignment {
    pairs: Vec<CodedPair>,
    feasibility: Feasibility,
}

impl CodingAssignment {
    pub fn new(pairs: Vec<CodedPair>, feasibility: Feasibility) -> Self {
        CodingAssignment { pairs, feasibility }
    }

    pub fn pairs(&self) -> &[CodedPair] {
        &self.pairs
    }

    pub fn feasibility(&self) -> Feasibility {
        self.feasibility
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn benefit(&self) -> f64 {
        self.pairs.iter().map(|p| p.benefit).sum()
    }

    pub fn total_shared_hops(&self) -> usize {
        self.pairs.iter().map(CodedPair::shared_hops).sum()
    }

    /// Shared hops of each demand's coded pair (0 when unmatched).
    pub fn shared_hops(&self, demand_count: usize) -> Vec<usize> {
        let mut hat = vec![0; demand_count];
        for p in &self.pairs {
            for d in [p.d1, p.d2] {
                if d < demand_count {
                    hat[d] = p.shared_hops();
                }
            }
        }
        hat
    }

    /// Checks every pair against `routing` and the single-partner rule.
    pub fn validate(&self, instance: &Instance, routing: &[PathPair]) -> Result<()> {
        check_routing(instance, routing)?;
        let demands = instance.demands();
        let mut used = vec![false; demands.len()];
        for p in &self.pairs {
            if p.d1 >= demands.len() || p.d2 >= demands.len() || p.d1 == p.d2 {
                return Err(Error::Contract(format!(
                    "coded pair ({}, {}) does not name two demands",
                    p.d1, p.d2
                )));
            }
            for d in [p.d1, p.d2] {
                if std::mem::replace(&mut used[d], true) {
                    return Err(Error::Contract(format!(
                        "demand {} is coded more than once",
                        demands[d]
                    )));
                }
            }
            let expected = evaluate_pair(
                instance.params(),
                (&demands[p.d1], &routing[p.d1]),
                (&demands[p.d2], &routing[p.d2]),
                p.combo,
                self.feasibility,
            )?
            .ok_or_else(|| {
                Error::Contract(format!(
                    "{} and {} are not encodable as {}",
                    demands[p.d1], demands[p.d2], p.combo
                ))
            })?;
            let subset = p.shared_links.windows(2).all(|w| w[0] < w[1])
                && p.shared_links.iter().all(|l| expected.0.contains(l));
            if p.shared_links.is_empty() || !subset {
                return Err(Error::Contract(format!(
                    "shared links of {} and {} do not match their paths",
                    demands[p.d1], demands[p.d2]
                )));
            }
            let benefit = benefit_watts(instance.params(), &demands[p.d1], &demands[p.d2], p.shared_hops());
            if (benefit - p.benefit).abs() > 1e-9 * benefit.abs().max(1.0) {
                return Err(Error::Contract(format!(
                    "benefit of {} and {} is {} W, expected {benefit} W",
                    demands[p.d1], demands[p.d2], p.benefit
                )));
            }
        }
        Ok(())
    }
}

fn benefit_watts(params: &PowerParams, a: &Demand, b: &Demand, shared: usize) -> f64 {
    params.watts(a.volume.min(b.volume) * shared as f64)
}

/// Integer matching weight proportional to the benefit (micro-Gbps·hops).
pub(crate) fn weight_units(a: &Demand, b: &Demand, shared: usize) -> i64 {
    (a.volume.min(b.volume) * shared as f64 * 1e6).round() as i64
}

fn common_links(a: &Path, b: &Path) -> Vec<Link> {
    let mut out: Vec<Link> = a.links().filter(|l| b.links().any(|m| m == *l)).collect();
    out.sort_unstable();
    out
}

/// Shared links and benefit of encoding `path1` of `d1` with `path2` of `d2`.
pub fn pair_benefit(
    d1: &Demand,
    d2: &Demand,
    path1: &Path,
    path2: &Path,
    params: &PowerParams,
) -> Result<(Vec<Link>, f64)> {
    if d1.dest != d2.dest {
        return Err(Error::Contract(format!(
            "{d1} and {d2} have different destinations and cannot be decoded together"
        )));
    }
    for (d, p) in [(d1, path1), (d2, path2)] {
        if p.source() != d.source || p.dest() != d.dest {
            return Err(Error::Contract(format!("path {p} does not serve {d}")));
        }
    }
    let shared = common_links(path1, path2);
    let benefit = benefit_watts(params, d1, d2, shared.len());
    Ok((shared, benefit))
}

/// Shared links of a candidate pair if it is feasible under `rule`.
fn evaluate_pair(
    params: &PowerParams,
    (d1, r1): (&Demand, &PathPair),
    (d2, r2): (&Demand, &PathPair),
    combo: Combo,
    rule: Feasibility,
) -> Result<Option<(Vec<Link>, f64)>> {
    if d1.source == d2.source {
        return Ok(None);
    }
    let (shared, benefit) = pair_benefit(
        d1,
        d2,
        combo.first.select(r1),
        combo.second.select(r2),
        params,
    )?;
    if shared.is_empty() {
        return Ok(None);
    }
    if rule == Feasibility::DisjointComplements {
        let c1 = combo.first.other().select(r1);
        let c2 = combo.second.other().select(r2);
        if !c1.edge_disjoint(c2) {
            return Ok(None);
        }
    }
    Ok(Some((shared, benefit)))
}

/// Demands sharing one destination, ordered by source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cluster {
    pub dest: NodeId,
    pub members: Vec<usize>,
}

/// Groups demand indices by destination; clusters ordered by destination.
pub fn clusters(instance: &Instance) -> Vec<Cluster> {
    let mut by_dest: BTreeMap<NodeId, Vec<usize>> = BTreeMap::new();
    for (i, d) in instance.demands().iter().enumerate() {
        by_dest.entry(d.dest).or_default().push(i);
    }
    by_dest
        .into_iter()
        .map(|(dest, mut members)| {
            members.sort_by_key(|&i| instance.demands()[i].source);
            Cluster { dest, members }
        })
        .collect()
}

/// Every feasible coded pair of an instance under a fixed routing.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodableGraph {
    clusters: Vec<Cluster>,
    edges: Vec<CodedPair>,
}

impl EncodableGraph {
    pub fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }

    /// Candidate pairs ordered by cluster, then `d1`, `d2` position, then combo preference.
    pub fn edges(&self) -> &[CodedPair] {
        &self.edges
    }

    pub fn edges_between(&self, a: usize, b: usize) -> impl Iterator<Item = &CodedPair> {
        self.edges
            .iter()
            .filter(move |e| (e.d1, e.d2) == (a, b) || (e.d1, e.d2) == (b, a))
    }
}

pub fn build_encodable_graph(
    instance: &Instance,
    routing: &[PathPair],
    combos: &[Combo],
) -> Result<EncodableGraph> {
    build_encodable_graph_with(instance, routing, combos, Feasibility::default())
}

pub fn build_encodable_graph_with(
    instance: &Instance,
    routing: &[PathPair],
    combos: &[Combo],
    rule: Feasibility,
) -> Result<EncodableGraph> {
    check_routing(instance, routing)?;
    let clusters = clusters(instance);
    let mut edges = Vec::new();
    let combos = ordered_combos(combos);
    for cluster in &clusters {
        let pairs: Vec<&PathPair> = cluster.members.iter().map(|&d| &routing[d]).collect();
        for_each_candidate(instance, &cluster.members, &pairs, &combos, rule, |e| {
            edges.push(e)
        })?;
    }
    Ok(EncodableGraph { clusters, edges })
}

fn ordered_combos(combos: &[Combo]) -> Vec<Combo> {
    let mut out: Vec<Combo> = Combo::ALL
        .into_iter()
        .filter(|c| combos.contains(c))
        .collect();
    out.dedup();
    out
}

fn for_each_candidate(
    instance: &Instance,
    members: &[usize],
    pairs: &[&PathPair],
    combos: &[Combo],
    rule: Feasibility,
    mut emit: impl FnMut(CodedPair),
) -> Result<()> {
    let demands = instance.demands();
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            let (a, b) = (members[i], members[j]);
            for &combo in combos {
                if let Some((shared_links, benefit)) = evaluate_pair(
                    instance.params(),
                    (&demands[a], pairs[i]),
                    (&demands[b], pairs[j]),
                    combo,
                    rule,
                )? {
                    emit(CodedPair {
                        d1: a,
                        d2: b,
                        combo,
                        shared_links,
                        benefit,
                    });
                }
            }
        }
    }
    Ok(())
}

/// Best coded pair for every member pair of one cluster, keyed by member positions.
pub(crate) struct ClusterTable {
    best: BTreeMap<(usize, usize), (i64, CodedPair)>,
    size: usize,
}

impl ClusterTable {
    pub(crate) fn build(
        instance: &Instance,
        members: &[usize],
        pairs: &[&PathPair],
        combos: &[Combo],
        rule: Feasibility,
    ) -> Result<Self> {
        let demands = instance.demands();
        let position: BTreeMap<usize, usize> =
            members.iter().enumerate().map(|(i, &d)| (d, i)).collect();
        let mut best: BTreeMap<(usize, usize), (i64, CodedPair)> = BTreeMap::new();
        let combos = ordered_combos(combos);
        for_each_candidate(instance, members, pairs, &combos, rule, |e| {
            let key = (position[&e.d1], position[&e.d2]);
            let w = weight_units(&demands[e.d1], &demands[e.d2], e.shared_hops());
            let better = match best.get(&key) {
                None => true,
                Some((bw, be)) => w > *bw || (w == *bw && e.combo.rank() < be.combo.rank()),
            };
            if better {
                best.insert(key, (w, e));
            }
        })?;
        Ok(ClusterTable {
            best,
            size: members.len(),
        })
    }

    pub(crate) fn weight(&self, i: usize, j: usize) -> Option<i64> {
        self.best.get(&(i, j)).map(|(w, _)| *w)
    }

    /// Maximum-weight matching of the cluster: total weight and chosen pairs.
    pub(crate) fn solve(&self) -> (i64, Vec<CodedPair>) {
        let matched = max_weight_matching(self.size, |i, j| self.weight(i, j));
        let mut total = 0;
        let mut out = Vec::with_capacity(matched.len());
        for (i, j) in matched {
            let (w, e) = &self.best[&(i, j)];
            total += w;
            out.push(e.clone());
        }
        (total, out)
    }
}

/// Maximum-benefit matching per cluster, restricted to `combos`.
pub fn select_pairs(
    instance: &Instance,
    routing: &[PathPair],
    combos: &[Combo],
    rule: Feasibility,
) -> Result<CodingAssignment> {
    check_routing(instance, routing)?;
    let mut pairs = Vec::new();
    for cluster in clusters(instance) {
        let paths: Vec<&PathPair> = cluster.members.iter().map(|&d| &routing[d]).collect();
        let table = ClusterTable::build(instance, &cluster.members, &paths, combos, rule)?;
        pairs.extend(table.solve().1);
    }
    Ok(CodingAssignment::new(pairs, rule))
}

/// Fixed-combination heuristic: `combo.first` applies to the demand with the smaller source.
pub fn select_pairs_fixed(
    instance: &Instance,
    routing: &[PathPair],
    combo: Combo,
) -> Result<CodingAssignment> {
    select_pairs(instance, routing, &[combo], Feasibility::default())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    /// Disjoint-pair candidates considered per demand, current routing included.
    pub budget: usize,
    /// Largest per-cluster product of choices searched exhaustively.
    pub exhaustive_limit: u64,
    pub combos: Vec<Combo>,
    pub feasibility: Feasibility,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            budget: 8,
            exhaustive_limit: 10_000,
            combos: Combo::ALL.to_vec(),
            feasibility: Feasibility::default(),
        }
    }
}

/// Result of the coding-aware search: a possibly re-routed instance and its pairing.
#[derive(Debug, Clone, PartialEq)]
pub struct OshSolution {
    pub routing: Vec<PathPair>,
    pub assignment: CodingAssignment,
}

pub fn select_pairs_osh(
    instance: &Instance,
    routing: &[PathPair],
    budget: usize,
) -> Result<OshSolution> {
    let config = SearchConfig {
        budget,
        ..SearchConfig::default()
    };
    select_pairs_osh_with(instance, routing, &config)
}

/// Alternatives for one demand: the current pair first, then other equal-cost pairs.
pub(crate) fn routing_options(
    instance: &Instance,
    current: &PathPair,
    budget: usize,
) -> Result<(Vec<PathPair>, bool)> {
    let found = candidate_pairs(instance.topology(), current.demand, budget)?;
    let mut options = vec![current.clone()];
    for c in found.pairs {
        if options.len() >= budget {
            break;
        }
        if c != *current && c.total_hops() == current.total_hops() {
            options.push(c);
        }
    }
    // With the current pair among the first `budget` candidates, `complete` means nothing was dropped.
    Ok((options, found.complete))
}

pub fn select_pairs_osh_with(
    instance: &Instance,
    routing: &[PathPair],
    config: &SearchConfig,
) -> Result<OshSolution> {
    if config.budget == 0 {
        return Err(Error::Domain("candidate budget must be at least 1".into()));
    }
    check_routing(instance, routing)?;
    let mut chosen = routing.to_vec();
    let mut pairs = Vec::new();
    for cluster in clusters(instance) {
        let mut options = Vec::with_capacity(cluster.members.len());
        for &d in &cluster.members {
            options.push(routing_options(instance, &routing[d], config.budget)?.0);
        }
        let evaluate = |choice: &[usize]| -> Result<(i64, Vec<CodedPair>)> {
            let paths: Vec<&PathPair> = choice
                .iter()
                .zip(&options)
                .map(|(&c, opts)| &opts[c])
                .collect();
            let table = ClusterTable::build(
                instance,
                &cluster.members,
                &paths,
                &config.combos,
                config.feasibility,
            )?;
            Ok(table.solve())
        };

        let product = options
            .iter()
            .try_fold(1u64, |acc, o| acc.checked_mul(o.len() as u64))
            .unwrap_or(u64::MAX);
        let mut choice = vec![0; options.len()];
        let mut best = evaluate(&choice)?;
        let mut best_choice = choice.clone();
        if product <= config.exhaustive_limit {
            while advance(&mut choice, &options) {
                let candidate = evaluate(&choice)?;
                if candidate.0 > best.0 {
                    best = candidate;
                    best_choice.clone_from(&choice);
                }
            }
        } else {
            let mut improved = true;
            while improved {
                improved = false;
                for i in 0..options.len() {
                    for c in 0..options[i].len() {
                        if c == best_choice[i] {
                            continue;
                        }
                        let mut trial = best_choice.clone();
                        trial[i] = c;
                        let candidate = evaluate(&trial)?;
                        if candidate.0 > best.0 {
                            best = candidate;
                            best_choice = trial;
                            improved = true;
                        }
                    }
                }
            }
        }
        for ((&d, &c), opts) in cluster.members.iter().zip(&best_choice).zip(&options) {
            chosen[d] = opts[c].clone();
        }
        pairs.extend(best.1);
    }
    Ok(OshSolution {
        routing: chosen,
        assignment: CodingAssignment::new(pairs, config.feasibility),
    })
}

/// Odometer step over mixed-radix choices; false after the last combination.
pub(crate) fn advance<T>(choice: &mut [usize], options: &[Vec<T>]) -> bool {
    for i in (0..choice.len()).rev() {
        choice[i] += 1;
        if choice[i] < options[i].len() {
            return true;
        }
        choice[i] = 0;
    }
    false
}
