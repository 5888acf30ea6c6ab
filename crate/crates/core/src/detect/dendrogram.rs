use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;

/// One agglomeration step: clusters `a` and `b` become cluster `new`.
/// Leaves are `0..n`; merged clusters are numbered `n, n+1, ...`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Merge {
    pub a: usize,
    pub b: usize,
    pub new: usize,
}

/// Merge history over `n` leaves with the modularity of every prefix cut.
#[derive(Debug, Clone, PartialEq)]
pub struct Dendrogram {
    n: usize,
    merges: Vec<Merge>,
    /// `modularity[i]` is the modularity after the first `i` merges, so it
    /// has `merges.len() + 1` entries.
    modularity: Vec<f64>,
}

impl Dendrogram {
    pub fn leaf_count(&self) -> usize {
        self.n
    }

    pub fn merges(&self) -> &[Merge] {
        &self.merges
    }

    pub fn modularity_track(&self) -> &[f64] {
        &self.modularity
    }

    /// Partition after applying the first `level` merges.
    pub fn cut(&self, level: usize) -> Partition {
        let level = level.min(self.merges.len());
        let mut parent: Vec<usize> = (0..self.n + level).collect();
        for m in &self.merges[..level] {
            parent[m.a] = m.new;
            parent[m.b] = m.new;
        }
        let root = |mut x: usize| {
            while parent[x] != x {
                x = parent[x];
            }
            x
        };
        let labels: Vec<usize> = (0..self.n).map(root).collect();
        Partition::from_labels(&labels)
    }

    /// Level with the highest modularity; among ties (within 1e-12) the one
    /// with the fewest communities.
    pub fn best_level(&self) -> usize {
        let best = self.modularity.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        self.modularity
            .iter()
            .rposition(|&q| q >= best - 1e-12)
            .unwrap_or(0)
    }
}

/// Builds a [`Dendrogram`] by joining clusters named by any member node,
/// tracking modularity incrementally.
pub(crate) struct DendrogramBuilder<'g> {
    g: &'g Graph,
    parent: Vec<usize>,
    /// Cluster id currently held by each union-find root.
    cluster_id: Vec<usize>,
    /// Per root: edge counts to neighboring roots.
    links: Vec<HashMap<usize, usize>>,
    volume: Vec<usize>,
    merges: Vec<Merge>,
    modularity: Vec<f64>,
}

impl<'g> DendrogramBuilder<'g> {
    pub fn new(g: &'g Graph) -> Self {
        let n = g.node_count();
        let mut links = vec![HashMap::new(); n];
        for (u, v) in g.edges() {
            links[u].insert(v, 1);
            links[v].insert(u, 1);
        }
        let volume = g.degrees();
        let m = g.edge_count() as f64;
        let q0 = if m > 0.0 {
            -volume.iter().map(|&d| (d as f64 / (2.0 * m)).powi(2)).sum::<f64>()
        } else {
            0.0
        };
        Self {
            g,
            parent: (0..n).collect(),
            cluster_id: (0..n).collect(),
            links,
            volume,
            merges: Vec::new(),
            modularity: vec![q0],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Joins the clusters containing `u` and `v`; no-op if already joined.
    /// Returns the id of the new cluster.
    pub fn join(&mut self, u: usize, v: usize) -> Option<usize> {
        let (mut ru, mut rv) = (self.find(u), self.find(v));
        if ru == rv {
            return None;
        }
        let m = self.g.edge_count() as f64;
        let between = self.links[ru].get(&rv).copied().unwrap_or(0);
        let dq = if m > 0.0 {
            between as f64 / m - 2.0 * self.volume[ru] as f64 * self.volume[rv] as f64 / (4.0 * m * m)
        } else {
            0.0
        };
        let new = self.g.node_count() + self.merges.len();
        self.merges.push(Merge {
            a: self.cluster_id[ru],
            b: self.cluster_id[rv],
            new,
        });
        let q = self.modularity.last().unwrap() + dq;
        self.modularity.push(q);
        if self.links[ru].len() < self.links[rv].len() {
            std::mem::swap(&mut ru, &mut rv);
        }
        // rv merges into ru
        let moved = std::mem::take(&mut self.links[rv]);
        for (w, c) in moved {
            if w == ru {
                continue;
            }
            *self.links[ru].entry(w).or_insert(0) += c;
            let back = self.links[w].remove(&rv).unwrap_or(0);
            *self.links[w].entry(ru).or_insert(0) += back;
        }
        self.links[ru].remove(&rv);
        self.volume[ru] += self.volume[rv];
        self.parent[rv] = ru;
        self.cluster_id[ru] = new;
        Some(new)
    }

    pub fn finish(self) -> Dendrogram {
        Dendrogram {
            n: self.g.node_count(),
            merges: self.merges,
            modularity: self.modularity,
        }
    }
}

/// Dendrogram of a divisive run: replaying the edge removals backwards, every
/// re-insertion that reconnects two components is a merge.
pub(crate) fn from_removal_order(g: &Graph, removed: &[(usize, usize)]) -> Dendrogram {
    let mut b = DendrogramBuilder::new(g);
    for &(u, v) in removed.iter().rev() {
        b.join(u, v);
    }
    b.finish()
}

/// The prefix cut of `d` with maximum modularity; ties go to fewer
/// communities.
pub fn best_modularity_cut(d: &Dendrogram, g: &Graph) -> Result<Partition> {
    if d.leaf_count() != g.node_count() {
        return Err(Error::arg(format!(
            "dendrogram has {} leaves but the graph has {} nodes",
            d.leaf_count(),
            g.node_count()
        )));
    }
    Ok(d.cut(d.best_level()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluate::modularity;
    use crate::graph::fixtures::*;

    #[test]
    fn track_matches_direct_modularity() {
        let g = two_triangle_bridge();
        let order = [(0, 1), (1, 2), (4, 5), (3, 4), (2, 3)];
        let mut b = DendrogramBuilder::new(&g);
        for (u, v) in order {
            b.join(u, v);
        }
        let d = b.finish();
        assert_eq!(d.merges().len(), 5);
        for level in 0..=5 {
            let q = modularity(&g, &d.cut(level)).unwrap();
            assert!((q - d.modularity_track()[level]).abs() < 1e-12);
        }
        assert_eq!(d.best_level(), 4);
        let p = best_modularity_cut(&d, &g).unwrap();
        assert_eq!(p.canonical(), vec![vec![0, 1, 2], vec![3, 4, 5]]);
        assert!(best_modularity_cut(&d, &path(3)).is_err());
    }

    #[test]
    fn edgeless_graph_cuts_to_singletons() {
        let g = Graph::empty(4);
        let d = DendrogramBuilder::new(&g).finish();
        let p = best_modularity_cut(&d, &g).unwrap();
        assert_eq!(p, Partition::singletons(4));
        assert_eq!(d.modularity_track(), &[0.0]);
    }

    #[test]
    fn decreasing_track_cuts_at_first_level() {
        // Joining non-adjacent nodes only lowers modularity.
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let mut b = DendrogramBuilder::new(&g);
        b.join(0, 2);
        b.join(1, 3);
        let d = b.finish();
        assert!(d.modularity_track().windows(2).all(|w| w[1] < w[0]));
        assert_eq!(d.best_level(), 0);
    }

    #[test]
    fn removal_order_replay() {
        let g = two_triangle_bridge();
        let removed = [(2, 3), (0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)];
        let d = from_removal_order(&g, &removed);
        assert_eq!(d.merges().len(), 5);
        assert_eq!(d.cut(4).canonical(), vec![vec![0, 1, 2], vec![3, 4, 5]]);
    }
}
