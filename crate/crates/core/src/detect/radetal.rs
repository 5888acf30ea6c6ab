use std::collections::BTreeSet;

use super::dendrogram::{best_modularity_cut, from_removal_order, Dendrogram};
use super::{check_input, DetectorParams};
use crate::error::Result;
use crate::graph::metrics::sorted_intersection_count;
use crate::graph::Graph;
use crate::partition::Partition;

/// Edge clustering coefficient C(u,v) = (z_uv + 1) / min(k_u − 1, k_v − 1),
/// where z_uv counts triangles through the edge. Defined as +∞ when an
/// endpoint has degree 1, so pendant edges are removed last.
pub fn edge_clustering(g: &Graph, u: usize, v: usize) -> f64 {
    clustering_value(g.neighbors(u), g.neighbors(v))
}

fn clustering_value(nu: &[usize], nv: &[usize]) -> f64 {
    let room = nu.len().min(nv.len()).saturating_sub(1);
    if room == 0 {
        return f64::INFINITY;
    }
    (sorted_intersection_count(nu, nv) + 1) as f64 / room as f64
}

/// Radicchi et al. divisive detection: repeatedly remove the edge with the
/// smallest edge clustering coefficient, updating only the edges whose
/// coefficient the removal changed, then cut the removal dendrogram at
/// maximum modularity. Ties go to the lexicographically smallest edge.
pub fn detect_radetal(g: &Graph, params: &DetectorParams) -> Result<(Partition, Dendrogram)> {
    check_input(g, params)?;
    let n = g.node_count();
    let mut adj: Vec<Vec<usize>> = (0..n).map(|v| g.neighbors(v).to_vec()).collect();
    // Non-negative floats (including +∞) order like their bit patterns.
    let key = |adj: &[Vec<usize>], u: usize, v: usize| (clustering_value(&adj[u], &adj[v]).to_bits(), u, v);
    let mut queue: BTreeSet<(u64, usize, usize)> = g.edges().map(|(u, v)| key(&adj, u, v)).collect();
    let mut removed = Vec::with_capacity(g.edge_count());
    while let Some((_, u, v)) = queue.pop_first() {
        // Every edge at u or v changes value: the degrees drop, and common
        // neighbours lose a triangle.
        let incident: Vec<(usize, usize)> = adj[u]
            .iter()
            .map(|&w| (u, w))
            .chain(adj[v].iter().map(|&w| (v, w)))
            .filter(|&(a, b)| !((a == u && b == v) || (a == v && b == u)))
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        for &(a, b) in &incident {
            queue.remove(&key(&adj, a, b));
        }
        adj[u].retain(|&w| w != v);
        adj[v].retain(|&w| w != u);
        for &(a, b) in &incident {
            queue.insert(key(&adj, a, b));
        }
        removed.push((u, v));
    }
    let d = from_removal_order(g, &removed);
    let p = best_modularity_cut(&d, g)?;
    Ok((p, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn g6_coefficients() {
        let g = two_triangle_bridge();
        assert_eq!(edge_clustering(&g, 2, 3), 0.5);
        for (u, v) in [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)] {
            assert_eq!(edge_clustering(&g, u, v), 2.0);
        }
        assert_eq!(edge_clustering(&star(4), 0, 1), f64::INFINITY);
    }

    #[test]
    fn g6_bridge_removed_first() {
        let g = two_triangle_bridge();
        let (p, d) = detect_radetal(&g, &DetectorParams::default()).unwrap();
        assert_eq!(p.canonical(), vec![vec![0, 1, 2], vec![3, 4, 5]]);
        assert_eq!(d.cut(d.merges().len() - 1).canonical(), vec![vec![0, 1, 2], vec![3, 4, 5]]);
    }

    #[test]
    fn infinite_values_keep_bit_order() {
        assert!(0.5f64.to_bits() < 2.0f64.to_bits());
        assert!(1e300f64.to_bits() < f64::INFINITY.to_bits());
    }
}
