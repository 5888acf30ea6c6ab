use std::collections::{BTreeSet, HashMap};

use super::dendrogram::{best_modularity_cut, Dendrogram, DendrogramBuilder};
use super::{check_input, DetectorParams};
use crate::error::Result;
use crate::graph::Graph;
use crate::partition::Partition;

/// Walktrap (Pons–Latapy): agglomerate adjacent communities by Ward's
/// criterion on random-walk distances, then cut at maximum modularity.
///
/// The profile of a community C is the mean of the t-step transition rows
/// P^t_{i·} over i ∈ C. The squared distance between profiles is
/// Σ_k (P_{C1 k} − P_{C2 k})² / d(k), and merging C1, C2 raises the mean
/// squared intra-community distance by |C1||C2| / (|C1|+|C2|) · r² / n.
/// The pair with the smallest increase merges first; ties go to the
/// lexicographically smallest pair of community ids.
pub fn detect_walktrap(g: &Graph, params: &DetectorParams) -> Result<(Partition, Dendrogram)> {
    check_input(g, params)?;
    let n = g.node_count();
    let inv_deg: Vec<f64> = (0..n)
        .map(|v| if g.deg(v) > 0 { 1.0 / g.deg(v) as f64 } else { 0.0 })
        .collect();
    let mut profile: Vec<Vec<f64>> = (0..n).map(|v| transition_row(g, v, params.walktrap_steps)).collect();
    let mut size = vec![1usize; n];
    // Community ids are node ids of their first member; `pairs` holds every
    // adjacent pair once as (cost bits, a, b) with a < b.
    let mut cost: Vec<HashMap<usize, f64>> = vec![HashMap::new(); n];
    let mut pairs = BTreeSet::new();
    let delta = |pa: &[f64], pb: &[f64], sa: usize, sb: usize| {
        let r2: f64 = pa
            .iter()
            .zip(pb)
            .zip(&inv_deg)
            .map(|((a, b), w)| (a - b) * (a - b) * w)
            .sum();
        (sa * sb) as f64 / (sa + sb) as f64 * r2 / n as f64
    };
    for (u, v) in g.edges() {
        let d = delta(&profile[u], &profile[v], 1, 1);
        cost[u].insert(v, d);
        cost[v].insert(u, d);
        pairs.insert((d.to_bits(), u, v));
    }
    let mut builder = DendrogramBuilder::new(g);
    while let Some((_, a, b)) = pairs.pop_first() {
        builder.join(a, b);
        // b merges into a
        let (sa, sb) = (size[a], size[b]);
        let pb = std::mem::take(&mut profile[b]);
        for (x, y) in profile[a].iter_mut().zip(&pb) {
            *x = (*x * sa as f64 + y * sb as f64) / (sa + sb) as f64;
        }
        size[a] += sb;
        let mut neighbours: Vec<usize> = cost[a].keys().chain(cost[b].keys()).copied().collect();
        neighbours.sort_unstable();
        neighbours.dedup();
        for c in [a, b] {
            for (&w, &d) in &std::mem::take(&mut cost[c]) {
                pairs.remove(&(d.to_bits(), c.min(w), c.max(w)));
                cost[w].remove(&c);
            }
        }
        for w in neighbours {
            if w == a || w == b {
                continue;
            }
            let d = delta(&profile[a], &profile[w], size[a], size[w]);
            cost[a].insert(w, d);
            cost[w].insert(a, d);
            pairs.insert((d.to_bits(), a.min(w), a.max(w)));
        }
    }
    let d = builder.finish();
    let p = best_modularity_cut(&d, g)?;
    Ok((p, d))
}

/// Row `v` of P^t, with P = D⁻¹A. An isolated node keeps its unit row.
pub(crate) fn transition_row(g: &Graph, v: usize, t: usize) -> Vec<f64> {
    let n = g.node_count();
    let mut row = vec![0.0; n];
    row[v] = 1.0;
    if g.deg(v) == 0 {
        return row;
    }
    let mut next = vec![0.0; n];
    for _ in 0..t {
        next.iter_mut().for_each(|x| *x = 0.0);
        for (k, &p) in row.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let share = p / g.deg(k) as f64;
            for &j in g.neighbors(k) {
                next[j] += share;
            }
        }
        std::mem::swap(&mut row, &mut next);
    }
    row
}
