//! Maximum-weight matching on small undirected graphs with integer weights.

use rustworkx_core::max_weight_matching::max_weight_matching as blossom;
use rustworkx_core::petgraph::graph::UnGraph;

/// Largest vertex count solved by subset dynamic programming.
pub(crate) const EXACT_DP_LIMIT: usize = 10;

/// Maximum-weight matching over vertices `0..n`.
///
/// `weight(i, j)` with `i < j` returns the edge weight, or `None` for a
/// non-edge. Non-positive edges are never matched. Returns the matched pairs
/// `(i, j)`, `i < j`, sorted. Up to [`EXACT_DP_LIMIT`] vertices ties resolve
/// toward matching the lowest vertex with its lowest partner.
#[allow(clippy::needless_range_loop)]
pub(crate) fn max_weight_matching<W>(n: usize, weight: W) -> Vec<(usize, usize)>
where
    W: Fn(usize, usize) -> Option<i64>,
{
    let mut w = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            if let Some(x) = weight(i, j).filter(|&x| x > 0) {
                w[i][j] = x;
                w[j][i] = x;
            }
        }
    }
    let mut pairs = if n <= EXACT_DP_LIMIT {
        subset_dp(n, &w)
    } else {
        general(n, &w)
    };
    pairs.sort_unstable();
    pairs
}

fn subset_dp(n: usize, w: &[Vec<i64>]) -> Vec<(usize, usize)> {
    let full = (1usize << n) - 1;
    // best[mask]: optimum over the vertex set `mask`; choice[mask]: partner of its lowest vertex.
    let mut best = vec![0i64; full + 1];
    let mut choice = vec![None; full + 1];
    for mask in 1..=full {
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut value = best[rest];
        let mut pick = None;
        let mut pair_best = i64::MIN;
        let mut pair_pick = None;
        for j in i + 1..n {
            if rest & (1 << j) != 0 && w[i][j] > 0 {
                let v = w[i][j] + best[rest & !(1 << j)];
                if v > pair_best {
                    pair_best = v;
                    pair_pick = Some(j);
                }
            }
        }
        if pair_pick.is_some() && pair_best >= value {
            value = pair_best;
            pick = pair_pick;
        }
        best[mask] = value;
        choice[mask] = pick;
    }
    let mut pairs = Vec::new();
    let mut mask = full;
    while mask != 0 {
        let i = mask.trailing_zeros() as usize;
        mask &= !(1 << i);
        if let Some(j) = choice[mask | (1 << i)] {
            pairs.push((i, j));
            mask &= !(1 << j);
        }
    }
    pairs
}

fn general(n: usize, w: &[Vec<i64>]) -> Vec<(usize, usize)> {
    let mut graph: UnGraph<(), i64> = UnGraph::with_capacity(n, n * n / 2);
    let nodes: Vec<_> = (0..n).map(|_| graph.add_node(())).collect();
    for i in 0..n {
        for j in i + 1..n {
            if w[i][j] > 0 {
                graph.add_edge(nodes[i], nodes[j], w[i][j]);
            }
        }
    }
    let matched: Result<_, std::convert::Infallible> =
        blossom(&graph, false, |e| Ok(i128::from(*e.weight())), false);
    matched
        .unwrap_or_default()
        .into_iter()
        .map(|(a, b)| (a.min(b), a.max(b)))
        .collect()
}
