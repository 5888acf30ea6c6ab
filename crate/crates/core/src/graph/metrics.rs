//! Microscopic (per-node) and macroscopic (whole-graph) measures.

use std::collections::{HashMap, VecDeque};

use super::Graph;
use crate::error::{Error, Result};
use crate::partition::Partition;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Centrality {
    Degree,
    Closeness,
    Betweenness,
}

impl Centrality {
    pub const ALL: [Centrality; 3] = [Centrality::Degree, Centrality::Closeness, Centrality::Betweenness];
}

/// Which quantity a [`NodeMetricVector`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeMetric {
    Degree,
    LocalClustering,
    Closeness,
    Betweenness,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeMetricVector {
    pub metric: NodeMetric,
    pub values: Vec<f64>,
}

impl NodeMetricVector {
    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Whole-graph descriptors printed by `diagnose`.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphSummary {
    pub node_count: usize,
    pub edge_count: usize,
    pub density: f64,
    /// Mean over all connected ordered pairs of distinct nodes.
    pub mean_distance: f64,
    pub transitivity: f64,
    /// `None` when either endpoint degree has zero variance.
    pub assortativity: Option<f64>,
    pub degree_centralization: Option<f64>,
    pub closeness_centralization: Option<f64>,
    pub betweenness_centralization: Option<f64>,
    pub component_count: usize,
}

fn check_node(g: &Graph, v: usize) -> Result<()> {
    if v >= g.node_count() {
        return Err(Error::arg(format!(
            "node {v} out of range for {} nodes",
            g.node_count()
        )));
    }
    Ok(())
}

pub fn degree(g: &Graph, v: usize) -> Result<usize> {
    check_node(g, v)?;
    Ok(g.deg(v))
}

/// Fraction of neighbor pairs of `v` that are themselves linked; 0 when
/// `v` has fewer than two neighbors.
pub fn local_clustering(g: &Graph, v: usize) -> Result<f64> {
    check_node(g, v)?;
    Ok(clustering_unchecked(g, v))
}

fn clustering_unchecked(g: &Graph, v: usize) -> f64 {
    let nb = g.neighbors(v);
    let k = nb.len();
    if k < 2 {
        return 0.0;
    }
    let links: usize = nb
        .iter()
        .map(|&u| sorted_intersection_count(g.neighbors(u), nb))
        .sum::<usize>()
        / 2;
    links as f64 / (k * (k - 1) / 2) as f64
}

pub(crate) fn sorted_intersection_count(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Mean of the local clustering coefficients.
pub fn transitivity(g: &Graph) -> Result<f64> {
    let n = g.node_count();
    if n == 0 {
        return Err(Error::arg("transitivity of an empty graph"));
    }
    Ok((0..n).map(|v| clustering_unchecked(g, v)).sum::<f64>() / n as f64)
}

/// Hop distances from `source`; `None` marks unreachable nodes.
pub fn shortest_distances(g: &Graph, source: usize) -> Result<Vec<Option<usize>>> {
    check_node(g, source)?;
    Ok(bfs(g, source))
}

fn bfs(g: &Graph, source: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.node_count()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let d = dist[u].unwrap() + 1;
        for &w in g.neighbors(u) {
            if dist[w].is_none() {
                dist[w] = Some(d);
                queue.push_back(w);
            }
        }
    }
    dist
}

pub fn centrality(g: &Graph, kind: Centrality) -> Result<NodeMetricVector> {
    let n = g.node_count();
    if n == 0 {
        return Err(Error::arg("centrality of an empty graph"));
    }
    Ok(match kind {
        Centrality::Degree => NodeMetricVector {
            metric: NodeMetric::Degree,
            values: (0..n).map(|v| g.deg(v) as f64).collect(),
        },
        Centrality::Closeness => NodeMetricVector {
            metric: NodeMetric::Closeness,
            values: (0..n).map(|v| closeness_of(g, v)).collect(),
        },
        Centrality::Betweenness => NodeMetricVector {
            metric: NodeMetric::Betweenness,
            values: brandes(n, |v| g.neighbors(v), 0..n, false).0,
        },
    })
}

/// `(component_size - 1) / sum of distances` within the component of `v`;
/// 0 for isolated nodes.
fn closeness_of(g: &Graph, v: usize) -> f64 {
    let dist = bfs(g, v);
    let (reached, total) = dist
        .iter()
        .flatten()
        .fold((0usize, 0usize), |(r, t), &d| (r + 1, t + d));
    if total == 0 {
        0.0
    } else {
        (reached - 1) as f64 / total as f64
    }
}

/// Edge-score map keyed by `(min, max)` endpoint pair.
pub(crate) type EdgeScores = HashMap<(usize, usize), f64>;

/// Brandes' dependency accumulation from each of `sources`. Returns node
/// betweenness and, when `with_edges`, edge betweenness. Each unordered pair
/// is counted once; endpoints are excluded from node scores; ties among
/// shortest paths split fractionally.
pub(crate) fn brandes<'a, F, I>(n: usize, neighbors: F, sources: I, with_edges: bool) -> (Vec<f64>, EdgeScores)
where
    F: Fn(usize) -> &'a [usize],
    I: IntoIterator<Item = usize>,
{
    let mut node_bc = vec![0.0; n];
    let mut edge_bc: EdgeScores = HashMap::new();
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![usize::MAX; n];
    let mut delta = vec![0.0f64; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    for s in sources {
        order.clear();
        sigma.iter_mut().for_each(|x| *x = 0.0);
        dist.iter_mut().for_each(|x| *x = usize::MAX);
        delta.iter_mut().for_each(|x| *x = 0.0);
        sigma[s] = 1.0;
        dist[s] = 0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &w in neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[u] + 1 {
                    sigma[w] += sigma[u];
                }
            }
        }
        for &w in order.iter().rev() {
            for &u in neighbors(w) {
                if dist[u] != usize::MAX && dist[u] + 1 == dist[w] {
                    let c = sigma[u] / sigma[w] * (1.0 + delta[w]);
                    delta[u] += c;
                    if with_edges {
                        *edge_bc.entry((u.min(w), u.max(w))).or_insert(0.0) += c / 2.0;
                    }
                }
            }
            if w != s {
                node_bc[w] += delta[w] / 2.0;
            }
        }
    }
    (node_bc, edge_bc)
}

/// Freeman centralization: total shortfall from the maximum, divided by the
/// same total on the star graph of equal size.
pub fn centralization(g: &Graph, kind: Centrality) -> Result<f64> {
    let n = g.node_count();
    if n < 3 {
        return Err(Error::arg(format!("centralization needs at least 3 nodes, got {n}")));
    }
    let c = centrality(g, kind)?;
    let max = c.max();
    let total: f64 = c.values.iter().map(|&x| max - x).sum();
    let nf = n as f64;
    let denom = match kind {
        Centrality::Degree => (nf - 1.0) * (nf - 2.0),
        Centrality::Closeness => (nf - 1.0) * (nf - 2.0) / (2.0 * nf - 3.0),
        Centrality::Betweenness => (nf - 1.0) * (nf - 1.0) * (nf - 2.0) / 2.0,
    };
    Ok(total / denom)
}

/// Pearson correlation of the degrees at either end of each edge, with each
/// edge taken in both directions. `None` when the degree variance over edge
/// endpoints is zero (for example on regular graphs).
pub fn assortativity(g: &Graph) -> Result<Option<f64>> {
    let m = g.edge_count();
    if m == 0 {
        return Err(Error::arg("assortativity needs at least one edge"));
    }
    let (mut s_prod, mut s_sum, mut s_sq) = (0.0, 0.0, 0.0);
    for (u, v) in g.edges() {
        let (j, k) = (g.deg(u) as f64, g.deg(v) as f64);
        s_prod += j * k;
        s_sum += 0.5 * (j + k);
        s_sq += 0.5 * (j * j + k * k);
    }
    let mf = m as f64;
    let mean = s_sum / mf;
    let var = s_sq / mf - mean * mean;
    let cov = s_prod / mf - mean * mean;
    if var <= 1e-12 * s_sq / mf {
        return Ok(None);
    }
    Ok(Some((cov / var).clamp(-1.0, 1.0)))
}

/// Bridges (as `(u, v)` with `u < v`, sorted) and cut vertices (sorted).
pub fn bridges_and_cutpoints(g: &Graph) -> (Vec<(usize, usize)>, Vec<usize>) {
    let n = g.node_count();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut is_cut = vec![false; n];
    let mut bridges = Vec::new();
    let mut time = 0;
    // (node, parent, next neighbor index)
    let mut stack: Vec<(usize, usize, usize)> = Vec::new();
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        let mut root_children = 0;
        stack.push((root, usize::MAX, 0));
        while let Some(&mut (u, parent, ref mut next)) = stack.last_mut() {
            let nb = g.neighbors(u);
            if *next < nb.len() {
                let w = nb[*next];
                *next += 1;
                if w == parent {
                    continue;
                }
                if disc[w] == usize::MAX {
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    if u == root {
                        root_children += 1;
                    }
                    stack.push((w, u, 0));
                } else {
                    low[u] = low[u].min(disc[w]);
                }
            } else {
                stack.pop();
                if parent != usize::MAX {
                    low[parent] = low[parent].min(low[u]);
                    if low[u] > disc[parent] {
                        bridges.push((parent.min(u), parent.max(u)));
                    }
                    if parent != root && low[u] >= disc[parent] {
                        is_cut[parent] = true;
                    }
                }
            }
        }
        if root_children > 1 {
            is_cut[root] = true;
        }
    }
    bridges.sort_unstable();
    let cuts = (0..n).filter(|&v| is_cut[v]).collect();
    (bridges, cuts)
}

/// Component labels, numbered by smallest member.
pub fn connected_components(g: &Graph) -> Partition {
    let n = g.node_count();
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    let mut stack = Vec::new();
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        label[s] = next;
        stack.push(s);
        while let Some(u) = stack.pop() {
            for &w in g.neighbors(u) {
                if label[w] == usize::MAX {
                    label[w] = next;
                    stack.push(w);
                }
            }
        }
        next += 1;
    }
    Partition::from_labels(&label)
}

pub fn summary(g: &Graph) -> Result<GraphSummary> {
    let n = g.node_count();
    if n == 0 {
        return Err(Error::arg("summary of an empty graph"));
    }
    let m = g.edge_count();
    let density = if n >= 2 {
        2.0 * m as f64 / (n as f64 * (n as f64 - 1.0))
    } else {
        0.0
    };
    let (mut pairs, mut total) = (0usize, 0usize);
    for s in 0..n {
        for d in bfs(g, s).into_iter().flatten() {
            if d > 0 {
                pairs += 1;
                total += d;
            }
        }
    }
    let mean_distance = if pairs == 0 { 0.0 } else { total as f64 / pairs as f64 };
    let cz = |k| if n >= 3 { centralization(g, k).ok() } else { None };
    Ok(GraphSummary {
        node_count: n,
        edge_count: m,
        density,
        mean_distance,
        transitivity: transitivity(g)?,
        assortativity: if m > 0 { assortativity(g)? } else { None },
        degree_centralization: cz(Centrality::Degree),
        closeness_centralization: cz(Centrality::Closeness),
        betweenness_centralization: cz(Centrality::Betweenness),
        component_count: connected_components(g).community_count(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn degrees() {
        assert_eq!(degree(&Graph::complete(3), 1).unwrap(), 2);
        assert_eq!(degree(&two_triangle_bridge(), 2).unwrap(), 3);
        assert_eq!(degree(&Graph::empty(2), 1).unwrap(), 0);
        assert!(degree(&Graph::empty(2), 2).is_err());
    }

    #[test]
    fn clustering_values() {
        assert!(close(local_clustering(&Graph::complete(3), 0).unwrap(), 1.0));
        assert!(close(local_clustering(&star(5), 0).unwrap(), 0.0));
        assert!(close(local_clustering(&two_triangle_bridge(), 2).unwrap(), 1.0 / 3.0));
        assert!(close(local_clustering(&path(3), 0).unwrap(), 0.0));
    }

    #[test]
    fn transitivity_values() {
        assert!(close(transitivity(&Graph::complete(4)).unwrap(), 1.0));
        assert!(close(
            transitivity(&two_triangle_bridge()).unwrap(),
            (4.0 + 2.0 / 3.0) / 6.0
        ));
        assert!(close(transitivity(&star(6)).unwrap(), 0.0));
        assert!(transitivity(&Graph::empty(0)).is_err());
    }

    #[test]
    fn distances() {
        assert_eq!(
            shortest_distances(&path(3), 0).unwrap(),
            vec![Some(0), Some(1), Some(2)]
        );
        assert_eq!(shortest_distances(&two_triangle_bridge(), 0).unwrap()[5], Some(3));
        assert_eq!(shortest_distances(&Graph::empty(2), 0).unwrap()[1], None);
    }

    #[test]
    fn star_centralities() {
        let s = star(5);
        let b = centrality(&s, Centrality::Betweenness).unwrap();
        assert!(close(b.values[0], 6.0));
        assert!(b.values[1..].iter().all(|&x| x == 0.0));
        let c = centrality(&s, Centrality::Closeness).unwrap();
        assert!(close(c.values[0], 1.0));
        let k4 = centrality(&Graph::complete(4), Centrality::Betweenness).unwrap();
        assert!(k4.values.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn centralization_extremes() {
        for n in 3..=50 {
            for kind in Centrality::ALL {
                assert!(close(centralization(&star(n), kind).unwrap(), 1.0), "star {n} {kind:?}");
                assert!(close(centralization(&Graph::complete(n), kind).unwrap(), 0.0));
            }
        }
        assert!(close(centralization(&path(4), Centrality::Degree).unwrap(), 1.0 / 3.0));
        assert!(centralization(&path(2), Centrality::Degree).is_err());
    }

    #[test]
    fn assortativity_values() {
        assert!(close(assortativity(&path(3)).unwrap().unwrap(), -1.0));
        assert_eq!(assortativity(&cycle(7)).unwrap(), None);
        assert_eq!(assortativity(&Graph::complete(5)).unwrap(), None);
        assert!(assortativity(&Graph::empty(3)).is_err());
    }

    #[test]
    fn bridges_fixture() {
        assert_eq!(bridges_and_cutpoints(&two_triangle_bridge()), (vec![(2, 3)], vec![2, 3]));
        assert_eq!(bridges_and_cutpoints(&Graph::complete(4)), (vec![], vec![]));
        assert_eq!(bridges_and_cutpoints(&path(3)), (vec![(0, 1), (1, 2)], vec![1]));
    }

    #[test]
    fn components() {
        assert_eq!(connected_components(&two_triangles()).community_count(), 2);
        assert_eq!(connected_components(&two_triangle_bridge()).community_count(), 1);
        assert_eq!(connected_components(&Graph::empty(5)).community_count(), 5);
    }

    #[test]
    fn summary_density() {
        let s = summary(&two_triangle_bridge()).unwrap();
        assert!(close(s.density, 7.0 / 15.0));
        assert_eq!(s.component_count, 1);
    }
}
