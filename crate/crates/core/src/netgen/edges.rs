use std::collections::HashMap;

use rand::Rng;

use crate::graph::Graph;

/// Editable simple graph supporting O(1) random-edge sampling, edge lookup
/// and degree-preserving swaps.
#[derive(Debug, Clone)]
pub(crate) struct EdgeStore {
    edges: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
    adjacency: Vec<Vec<usize>>,
}

fn key(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

impl EdgeStore {
    pub fn new(n: usize) -> Self {
        Self {
            edges: Vec::new(),
            index: HashMap::new(),
            adjacency: vec![Vec::new(); n],
        }
    }

    pub fn from_graph(g: &Graph) -> Self {
        let mut s = Self::new(g.node_count());
        for (u, v) in g.edges() {
            s.insert(u, v);
        }
        s
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.index.contains_key(&key(u, v))
    }

    /// Adds `(u, v)` unless it is a self-loop or already present.
    pub fn insert(&mut self, u: usize, v: usize) -> bool {
        if u == v || self.has_edge(u, v) {
            return false;
        }
        self.index.insert(key(u, v), self.edges.len());
        self.edges.push(key(u, v));
        self.adjacency[u].push(v);
        self.adjacency[v].push(u);
        true
    }

    pub fn remove(&mut self, u: usize, v: usize) -> bool {
        let Some(i) = self.index.remove(&key(u, v)) else {
            return false;
        };
        self.edges.swap_remove(i);
        if i < self.edges.len() {
            self.index.insert(self.edges[i], i);
        }
        for (a, b) in [(u, v), (v, u)] {
            let list = &mut self.adjacency[a];
            let pos = list.iter().position(|&x| x == b).unwrap();
            list.swap_remove(pos);
        }
        true
    }

    pub fn random_edge<R: Rng>(&self, rng: &mut R) -> (usize, usize) {
        self.edges[rng.gen_range(0..self.edges.len())]
    }

    /// Replaces edges `(a, b)` and `(c, d)` with `(a, d)` and `(c, b)` when
    /// the result stays simple. Returns whether the swap happened.
    pub fn swap(&mut self, (a, b): (usize, usize), (c, d): (usize, usize)) -> bool {
        if a == d || c == b || key(a, b) == key(c, d) || self.has_edge(a, d) || self.has_edge(c, b) {
            return false;
        }
        if key(a, d) == key(c, b) {
            return false;
        }
        self.remove(a, b);
        self.remove(c, d);
        self.insert(a, d);
        self.insert(c, b);
        true
    }

    pub fn to_graph(&self) -> Graph {
        Graph::from_adjacency_unchecked(self.adjacency.clone())
    }
}
