use rand::seq::SliceRandom;
use rand::Rng;

use super::weighted::{compact, WeightedGraph};
use super::{check_input, DetectorParams};
use crate::error::Result;
use crate::graph::Graph;
use crate::partition::Partition;
use crate::rng::RngStream;

/// Louvain modularity optimisation: local node moves until no move helps,
/// then aggregation of communities into super-nodes (internal links become
/// self-loops), repeated until a move phase changes nothing.
pub fn detect_louvain(g: &Graph, params: &DetectorParams, stream: RngStream) -> Result<Partition> {
    check_input(g, params)?;
    let n = g.node_count();
    if g.edge_count() == 0 {
        return Ok(Partition::singletons(n));
    }
    let mut rng = stream.rng();
    let mut level = WeightedGraph::from_graph(g);
    let mut membership: Vec<usize> = (0..n).collect();
    while let Some(mut labels) = move_phase(&level, &mut rng) {
        let k = compact(&mut labels);
        for c in membership.iter_mut() {
            *c = labels[*c];
        }
        level = level.aggregate(&labels, k);
    }
    Ok(Partition::from_labels(&membership))
}

/// Sweeps nodes in shuffled order, moving each to the neighbouring community
/// with the largest modularity gain. Returns `None` if nothing moved.
pub(crate) fn move_phase<R: Rng>(w: &WeightedGraph, rng: &mut R) -> Option<Vec<usize>> {
    let n = w.node_count();
    let mut label: Vec<usize> = (0..n).collect();
    let mut tot = w.strength.clone();
    let mut link = vec![0.0; n];
    let mut touched = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    let mut moved_any = false;
    loop {
        order.shuffle(rng);
        let mut moved = false;
        for &v in &order {
            let own = label[v];
            let k = w.strength[v];
            for &(u, x) in &w.adj[v] {
                let c = label[u];
                if link[c] == 0.0 {
                    touched.push(c);
                }
                link[c] += x;
            }
            tot[own] -= k;
            let gain = |c: usize, link: &[f64]| link[c] - k * tot[c] / w.total;
            let mut best = own;
            let mut best_gain = gain(own, &link);
            for &c in &touched {
                let gc = gain(c, &link);
                if gc > best_gain + 1e-12 {
                    best = c;
                    best_gain = gc;
                }
            }
            tot[best] += k;
            label[v] = best;
            if best != own {
                moved = true;
            }
            for c in touched.drain(..) {
                link[c] = 0.0;
            }
        }
        if !moved {
            break;
        }
        moved_any = true;
    }
    moved_any.then_some(label)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluate::modularity;
    use crate::graph::fixtures::*;
    use crate::netgen::erdos_renyi;

    #[test]
    fn g6_optimum() {
        let g = two_triangle_bridge();
        for seed in 0..10 {
            let p = detect_louvain(&g, &DetectorParams::default(), RngStream::new(seed, 0)).unwrap();
            assert_eq!(p.canonical(), vec![vec![0, 1, 2], vec![3, 4, 5]]);
        }
    }

    #[test]
    fn aggregation_keeps_modularity_at_every_level() {
        for seed in 0..20 {
            let n = 16 + (seed as usize * 3) % 48;
            let g = erdos_renyi(n, 0.15, RngStream::new(seed, 7)).unwrap();
            if g.edge_count() == 0 {
                continue;
            }
            let mut rng = RngStream::new(seed, 1).rng();
            let mut level = WeightedGraph::from_graph(&g);
            let mut membership: Vec<usize> = (0..n).collect();
            while let Some(mut labels) = move_phase(&level, &mut rng) {
                let k = compact(&mut labels);
                for c in membership.iter_mut() {
                    *c = labels[*c];
                }
                let expanded = modularity(&g, &Partition::from_labels(&membership)).unwrap();
                assert!((level.modularity(&labels) - expanded).abs() < 1e-9);
                level = level.aggregate(&labels, k);
                for (c, s) in level.self_loop.iter().enumerate() {
                    let internal = g
                        .edges()
                        .filter(|&(u, v)| membership[u] == c && membership[v] == c)
                        .count();
                    assert_eq!(*s, 2.0 * internal as f64);
                }
                let identity: Vec<usize> = (0..k).collect();
                assert!((level.modularity(&identity) - expanded).abs() < 1e-9);
            }
        }
    }
}
