//! Undirected simple graphs over dense node ids, plus the topological
//! measures computed on them.

mod io;
pub mod metrics;

pub use io::{read_edge_list, write_edge_list};
pub use metrics::{
    assortativity, bridges_and_cutpoints, centrality, centralization, connected_components,
    degree, local_clustering, shortest_distances, summary, transitivity, Centrality,
    GraphSummary, NodeMetricVector,
};

use crate::error::{Error, Result};

/// Immutable undirected simple graph. Node ids are `0..node_count`, each
/// adjacency list is sorted and free of duplicates and self-loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicate edges and
    /// out-of-range endpoints.
    pub fn from_edges(node_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); node_count];
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u >= node_count || v >= node_count {
                return Err(Error::arg(format!(
                    "edge {i} ({u}, {v}) out of range for {node_count} nodes"
                )));
            }
            if u == v {
                return Err(Error::arg(format!("edge {i} is a self-loop on node {u}")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for (u, list) in adjacency.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::arg(format!("duplicate edge ({u}, {})", w[0])));
            }
        }
        Ok(Self {
            adjacency,
            edge_count: edges.len(),
        })
    }

    /// Builds a graph from adjacency lists already known to be simple and
    /// symmetric. Lists are sorted here.
    pub(crate) fn from_adjacency_unchecked(mut adjacency: Vec<Vec<usize>>) -> Self {
        let mut total = 0;
        for list in adjacency.iter_mut() {
            list.sort_unstable();
            total += list.len();
        }
        debug_assert!(total % 2 == 0);
        Self {
            adjacency,
            edge_count: total / 2,
        }
    }

    pub fn empty(node_count: usize) -> Self {
        Self {
            adjacency: vec![Vec::new(); node_count],
            edge_count: 0,
        }
    }

    pub fn complete(node_count: usize) -> Self {
        let adjacency = (0..node_count)
            .map(|u| (0..node_count).filter(|&v| v != u).collect())
            .collect();
        Self::from_adjacency_unchecked(adjacency)
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Sorted neighbor ids of `v`. Panics if `v` is out of range.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    /// Degree of `v`. Panics if `v` is out of range; see
    /// [`metrics::degree`] for the checked form.
    pub fn deg(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Every edge once, as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Relabels node `v` as `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.node_count());
        let mut adjacency = vec![Vec::new(); self.node_count()];
        for (u, list) in self.adjacency.iter().enumerate() {
            adjacency[perm[u]] = list.iter().map(|&v| perm[v]).collect();
        }
        Self::from_adjacency_unchecked(adjacency)
    }

    /// The graph with edge `(u, v)` removed, if present.
    pub fn without_edge(&self, u: usize, v: usize) -> Self {
        let mut g = self.clone();
        if let Ok(i) = g.adjacency[u].binary_search(&v) {
            g.adjacency[u].remove(i);
            let j = g.adjacency[v].binary_search(&u).unwrap();
            g.adjacency[v].remove(j);
            g.edge_count -= 1;
        }
        g
    }

    /// Checks every structural invariant; used by tests and debug asserts.
    pub fn validate(&self) -> Result<()> {
        let n = self.node_count();
        let mut total = 0;
        for (u, list) in self.adjacency.iter().enumerate() {
            total += list.len();
            for w in list.windows(2) {
                if w[0] >= w[1] {
                    return Err(Error::arg(format!("adjacency of {u} not strictly sorted")));
                }
            }
            for &v in list {
                if v >= n || v == u {
                    return Err(Error::arg(format!("bad neighbor {v} of {u}")));
                }
                if !self.has_edge(v, u) {
                    return Err(Error::arg(format!("edge ({u}, {v}) not symmetric")));
                }
            }
        }
        if total != 2 * self.edge_count {
            return Err(Error::arg("edge count does not match degree sum"));
        }
        Ok(())
    }
}

/// Small named graphs used throughout the tests and docs.
pub mod fixtures {
    use super::Graph;

    /// Two triangles `{0,1,2}` and `{3,4,5}` joined by the bridge `2–3`.
    pub fn two_triangle_bridge() -> Graph {
        Graph::from_edges(6, &[(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (4, 5)]).unwrap()
    }

    pub fn two_triangles() -> Graph {
        Graph::from_edges(6, &[(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)]).unwrap()
    }

    /// Star with `n` nodes; node 0 is the center.
    pub fn star(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|v| (0, v)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    pub fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|v| (v, (v + 1) % n)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_self_loop_and_duplicates() {
        assert!(Graph::from_edges(3, &[(1, 1)]).is_err());
        assert!(Graph::from_edges(3, &[(0, 1), (1, 0)]).is_err());
        assert!(Graph::from_edges(2, &[(0, 2)]).is_err());
    }

    #[test]
    fn handshake_and_edges() {
        let g = fixtures::two_triangle_bridge();
        assert_eq!(g.edge_count(), 7);
        assert_eq!(g.degrees().iter().sum::<usize>(), 14);
        assert_eq!(g.edges().count(), 7);
        g.validate().unwrap();
        assert_eq!(Graph::complete(10).edge_count(), 45);
    }

    #[test]
    fn permute_preserves_structure() {
        let g = fixtures::two_triangle_bridge();
        let p = g.permute(&[5, 4, 3, 2, 1, 0]);
        p.validate().unwrap();
        assert!(p.has_edge(3, 2));
        assert!(p.has_edge(5, 4));
    }
}
