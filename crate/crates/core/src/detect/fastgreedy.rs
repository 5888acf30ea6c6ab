use std::collections::HashMap;

use super::dendrogram::{best_modularity_cut, Dendrogram, DendrogramBuilder};
use super::{check_input, DetectorParams};
use crate::error::Result;
use crate::graph::Graph;
use crate::partition::Partition;

/// Greedy agglomeration (Clauset–Newman–Moore): starting from singletons,
/// repeatedly merge the pair of adjacent communities with the largest
/// modularity gain until no adjacent pair remains, then cut the dendrogram at
/// maximum modularity.
///
/// Gains are compared exactly in integer form, 2m·e_ij − d_i·d_j, where e_ij
/// counts edges between the communities and d is community volume. Ties go
/// to the lexicographically smallest pair of community representatives.
pub fn detect_fastgreedy(g: &Graph, params: &DetectorParams) -> Result<(Partition, Dendrogram)> {
    check_input(g, params)?;
    let n = g.node_count();
    let two_m = 2 * g.edge_count() as i64;
    let mut links: Vec<HashMap<usize, i64>> = (0..n)
        .map(|v| g.neighbors(v).iter().map(|&w| (w, 1)).collect())
        .collect();
    let mut volume: Vec<i64> = g.degrees().into_iter().map(|d| d as i64).collect();
    let mut builder = DendrogramBuilder::new(g);
    loop {
        let mut best: Option<(i64, usize, usize)> = None;
        for (i, row) in links.iter().enumerate() {
            for (&j, &e) in row {
                if j <= i {
                    continue;
                }
                let gain = two_m * e - volume[i] * volume[j];
                let better = match best {
                    None => true,
                    Some((bg, bi, bj)) => gain > bg || (gain == bg && (i, j) < (bi, bj)),
                };
                if better {
                    best = Some((gain, i, j));
                }
            }
        }
        let Some((_, keep, gone)) = best else { break };
        builder.join(keep, gone);
        let moved = std::mem::take(&mut links[gone]);
        for (w, e) in moved {
            if w == keep {
                continue;
            }
            *links[keep].entry(w).or_insert(0) += e;
            links[w].remove(&gone);
            *links[w].entry(keep).or_insert(0) += e;
        }
        links[keep].remove(&gone);
        volume[keep] += volume[gone];
    }
    let d = builder.finish();
    let p = best_modularity_cut(&d, g)?;
    Ok((p, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluate::modularity;
    use crate::graph::fixtures::*;

    #[test]
    fn g6_cut_at_two_communities() {
        let g = two_triangle_bridge();
        let (p, d) = detect_fastgreedy(&g, &DetectorParams::default()).unwrap();
        assert_eq!(p.canonical(), vec![vec![0, 1, 2], vec![3, 4, 5]]);
        assert!((modularity(&g, &p).unwrap() - 5.0 / 14.0).abs() < 1e-12);
        assert_eq!(d.merges().len(), 5);
    }

    #[test]
    fn disconnected_graph_stops_at_components() {
        let g = two_triangles();
        let (p, d) = detect_fastgreedy(&g, &DetectorParams::default()).unwrap();
        assert_eq!(d.merges().len(), 4);
        assert_eq!(p.canonical(), vec![vec![0, 1, 2], vec![3, 4, 5]]);
    }

    #[test]
    fn track_is_recomputable() {
        let g = cycle(9);
        let (_, d) = detect_fastgreedy(&g, &DetectorParams::default()).unwrap();
        assert_eq!(d.merges().len(), 8);
        for (level, &q) in d.modularity_track().iter().enumerate() {
            assert!((modularity(&g, &d.cut(level)).unwrap() - q).abs() < 1e-9);
        }
    }
}
