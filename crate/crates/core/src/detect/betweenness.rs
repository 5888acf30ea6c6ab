use std::collections::VecDeque;

use rand::Rng;

use super::dendrogram::{best_modularity_cut, from_removal_order, Dendrogram};
use super::{check_input, DetectorParams};
use crate::error::Result;
use crate::graph::metrics::{brandes, EdgeScores};
use crate::graph::Graph;
use crate::partition::Partition;
use crate::rng::RngStream;

/// Relative tolerance under which two betweenness scores count as tied.
const TIE_TOLERANCE: f64 = 1e-9;

/// Girvan–Newman divisive detection: repeatedly remove the edge of highest
/// betweenness (ties drawn from `stream`), recomputing betweenness only on
/// the component that lost the edge. The removal order defines a dendrogram,
/// which is cut at maximum modularity.
pub fn detect_edge_betweenness(
    g: &Graph,
    params: &DetectorParams,
    stream: RngStream,
) -> Result<(Partition, Dendrogram)> {
    check_input(g, params)?;
    let n = g.node_count();
    let mut rng = stream.rng();
    let mut adj: Vec<Vec<usize>> = (0..n).map(|v| g.neighbors(v).to_vec()).collect();
    let mut scores = edge_scores(&adj, 0..n);
    let mut removed = Vec::with_capacity(g.edge_count());
    while !scores.is_empty() {
        let mut batch = Vec::new();
        for _ in 0..params.betweenness_batch {
            let Some(edge) = pick_max(&scores, &mut rng) else { break };
            scores.remove(&edge);
            batch.push(edge);
        }
        let mut dirty = Vec::new();
        for &(u, v) in &batch {
            adj[u].retain(|&w| w != v);
            adj[v].retain(|&w| w != u);
            removed.push((u, v));
            dirty.extend([u, v]);
        }
        let mut seen = vec![false; n];
        for start in dirty {
            if seen[start] {
                continue;
            }
            let component = component_of(&adj, start, &mut seen);
            for &x in &component {
                for &y in &adj[x] {
                    if x < y {
                        scores.remove(&(x, y));
                    }
                }
            }
            scores.extend(edge_scores(&adj, component));
        }
    }
    let d = from_removal_order(g, &removed);
    let p = best_modularity_cut(&d, g)?;
    Ok((p, d))
}

/// Edge betweenness (each unordered node pair counted once) from the given
/// sources, which must cover whole components.
pub(crate) fn edge_scores<I: IntoIterator<Item = usize>>(adj: &[Vec<usize>], sources: I) -> EdgeScores {
    brandes(adj.len(), |v| adj[v].as_slice(), sources, true).1
}

fn pick_max<R: Rng>(scores: &EdgeScores, rng: &mut R) -> Option<(usize, usize)> {
    let best = scores.values().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut tied: Vec<(usize, usize)> = scores
        .iter()
        .filter(|(_, &s)| s >= best - TIE_TOLERANCE * best.abs().max(1.0))
        .map(|(&e, _)| e)
        .collect();
    if tied.is_empty() {
        return None;
    }
    tied.sort_unstable();
    Some(tied[rng.gen_range(0..tied.len())])
}

fn component_of(adj: &[Vec<usize>], start: usize, seen: &mut [bool]) -> Vec<usize> {
    let mut out = vec![start];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                out.push(w);
                queue.push_back(w);
            }
        }
    }
    out
}
