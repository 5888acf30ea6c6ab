use crate::graph::Graph;

/// Undirected weighted multigraph with self-loops, used by the detectors that
/// aggregate communities into super-nodes.
///
/// `self_loop[i]` is the diagonal adjacency entry A_ii, so a super-node's
/// self-loop equals twice its internal edge count and strengths sum to 2m.
#[derive(Debug, Clone)]
pub(crate) struct WeightedGraph {
    pub adj: Vec<Vec<(usize, f64)>>,
    pub self_loop: Vec<f64>,
    pub strength: Vec<f64>,
    /// Number of original nodes inside each super-node.
    pub members: Vec<usize>,
    pub total: f64,
}

impl WeightedGraph {
    pub fn from_graph(g: &Graph) -> Self {
        let adj: Vec<Vec<(usize, f64)>> = (0..g.node_count())
            .map(|v| g.neighbors(v).iter().map(|&w| (w, 1.0)).collect())
            .collect();
        let n = adj.len();
        Self::build(adj, vec![0.0; n], vec![1; n])
    }

    fn build(adj: Vec<Vec<(usize, f64)>>, self_loop: Vec<f64>, members: Vec<usize>) -> Self {
        let strength: Vec<f64> = adj
            .iter()
            .zip(&self_loop)
            .map(|(row, s)| s + row.iter().map(|&(_, w)| w).sum::<f64>())
            .collect();
        let total = strength.iter().sum();
        Self {
            adj,
            self_loop,
            strength,
            members,
            total,
        }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    /// Quotient graph of `labels` (dense ids `0..k`).
    pub fn aggregate(&self, labels: &[usize], k: usize) -> Self {
        let mut self_loop = vec![0.0; k];
        let mut members = vec![0; k];
        let mut rows: Vec<std::collections::BTreeMap<usize, f64>> = vec![Default::default(); k];
        for (v, row) in self.adj.iter().enumerate() {
            let c = labels[v];
            self_loop[c] += self.self_loop[v];
            members[c] += self.members[v];
            for &(w, x) in row {
                let d = labels[w];
                if c == d {
                    self_loop[c] += x;
                } else {
                    *rows[c].entry(d).or_insert(0.0) += x;
                }
            }
        }
        let adj = rows.into_iter().map(|r| r.into_iter().collect()).collect();
        Self::build(adj, self_loop, members)
    }

    /// Newman modularity of `labels`; 0 for a graph without edges.
    #[cfg(test)]
    pub fn modularity(&self, labels: &[usize]) -> f64 {
        if self.total == 0.0 {
            return 0.0;
        }
        let k = labels.iter().max().map_or(0, |&c| c + 1);
        let mut inside = vec![0.0; k];
        let mut volume = vec![0.0; k];
        for (v, row) in self.adj.iter().enumerate() {
            let c = labels[v];
            volume[c] += self.strength[v];
            inside[c] += self.self_loop[v];
            inside[c] += row.iter().filter(|&&(w, _)| labels[w] == c).map(|&(_, x)| x).sum::<f64>();
        }
        inside
            .iter()
            .zip(&volume)
            .map(|(i, v)| i / self.total - (v / self.total).powi(2))
            .sum()
    }
}

/// Relabel to dense ids in order of first appearance; returns the count.
pub(crate) fn compact(labels: &mut [usize]) -> usize {
    let mut map = std::collections::HashMap::new();
    for l in labels.iter_mut() {
        let next = map.len();
        *l = *map.entry(*l).or_insert(next);
    }
    map.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluate::modularity;
    use crate::graph::fixtures::two_triangle_bridge;
    use crate::partition::Partition;

    #[test]
    fn aggregation_preserves_modularity() {
        let g = two_triangle_bridge();
        let w = WeightedGraph::from_graph(&g);
        let labels = [0, 0, 1, 1, 2, 2];
        let direct = modularity(&g, &Partition::from_labels(&labels)).unwrap();
        assert!((w.modularity(&labels) - direct).abs() < 1e-12);
        let agg = w.aggregate(&labels, 3);
        assert_eq!(agg.self_loop, vec![2.0, 2.0, 2.0]);
        assert_eq!(agg.total, w.total);
        assert!((agg.modularity(&[0, 1, 2]) - direct).abs() < 1e-12);
        assert_eq!(agg.members, vec![2, 2, 2]);
    }

    #[test]
    fn compact_relabels_by_first_appearance() {
        let mut l = vec![5, 2, 5, 9];
        assert_eq!(compact(&mut l), 3);
        assert_eq!(l, vec![0, 1, 0, 2]);
    }
}
