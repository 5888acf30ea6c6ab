use rand::seq::SliceRandom;
use rand::Rng;

use super::edges::EdgeStore;
use super::{mixing_coefficient, PlantedNetwork};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;
use crate::rng::RngStream;

const GN_GROUPS: usize = 4;
const GN_GROUP_SIZE: usize = 32;
const GN_DEGREE: f64 = 16.0;

/// Girvan–Newman benchmark: 128 nodes in four groups of 32, expected degree
/// 16 of which `z_out` leave the group on average. Intra-group pairs link
/// with probability `(16 − z_out)/31`, inter-group pairs with `z_out/96`.
pub fn girvan_newman(z_out: f64, stream: RngStream) -> Result<PlantedNetwork> {
    if !(0.0..=GN_DEGREE).contains(&z_out) {
        return Err(Error::arg(format!("z_out = {z_out} outside [0, 16]")));
    }
    let n = GN_GROUPS * GN_GROUP_SIZE;
    let p_in = (GN_DEGREE - z_out) / (GN_GROUP_SIZE - 1) as f64;
    let p_out = z_out / (n - GN_GROUP_SIZE) as f64;
    let group = |v: usize| v / GN_GROUP_SIZE;
    let mut rng = stream.rng();
    let mut adjacency = vec![Vec::new(); n];
    for u in 0..n {
        for v in u + 1..n {
            let p = if group(u) == group(v) { p_in } else { p_out };
            if rng.gen::<f64>() < p {
                adjacency[u].push(v);
                adjacency[v].push(u);
            }
        }
    }
    let graph = Graph::from_adjacency_unchecked(adjacency);
    let planted = Partition::from_labels(&(0..n).map(group).collect::<Vec<_>>());
    let realized_mu = mixing_coefficient(&graph, &planted);
    Ok(PlantedNetwork {
        graph,
        planted,
        realized_mu,
    })
}

/// Result of [`bagrow_rewire`].
#[derive(Debug, Clone, PartialEq)]
pub struct BagrowOutcome {
    pub network: PlantedNetwork,
    /// Share of the initial inter-community edges actually turned inward.
    pub realized_fraction: f64,
}

/// Bagrow's benchmark: split nodes at random into `k` equal groups, then
/// repeatedly take two inter-group edges and exchange endpoints so both become
/// intra-group edges, until `fraction` of the initial inter-group edges have
/// been converted. Degrees are preserved exactly. Stops early (best effort)
/// when no convertible pair is found within the attempt budget.
pub fn bagrow_rewire(g: &Graph, k: usize, fraction: f64, stream: RngStream) -> Result<BagrowOutcome> {
    if k < 2 {
        return Err(Error::arg(format!("need at least 2 communities, got {k}")));
    }
    if !(0.0..=1.0).contains(&fraction) {
        return Err(Error::arg(format!("fraction {fraction} outside [0, 1]")));
    }
    let n = g.node_count();
    if n < k {
        return Err(Error::arg(format!("cannot split {n} nodes into {k} groups")));
    }
    let mut rng = stream.rng();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut label = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        label[v] = i * k / n;
    }
    let mut store = EdgeStore::from_graph(g);
    let mut inter: Vec<(usize, usize)> = g.edges().filter(|&(u, v)| label[u] != label[v]).collect();
    let initial = inter.len();
    let target = (fraction * initial as f64).round() as usize;
    let mut converted = 0usize;
    let budget = 200 * target + 1000;
    let mut attempts = 0;
    while converted < target && inter.len() >= 2 && attempts < budget {
        attempts += 1;
        let i = rng.gen_range(0..inter.len());
        let mut j = rng.gen_range(0..inter.len() - 1);
        if j >= i {
            j += 1;
        }
        let (a, b) = inter[i];
        let (c, d) = inter[j];
        // Orientations that make both new edges intra-group.
        let candidates = [((a, b), (c, d)), ((a, b), (d, c))];
        let mut done = false;
        for ((a, b), (c, d)) in candidates {
            // (a,b),(c,d) -> (a,c),(b,d)
            if label[a] == label[c] && label[b] == label[d] && store.swap((a, b), (d, c)) {
                done = true;
                break;
            }
        }
        if done {
            let (hi, lo) = (i.max(j), i.min(j));
            inter.swap_remove(hi);
            inter.swap_remove(lo);
            converted += 2;
        }
    }
    let graph = store.to_graph();
    let planted = Partition::from_labels(&label);
    let realized_mu = mixing_coefficient(&graph, &planted);
    Ok(BagrowOutcome {
        network: PlantedNetwork {
            graph,
            planted,
            realized_mu,
        },
        realized_fraction: if initial == 0 { 0.0 } else { converted as f64 / initial as f64 },
    })
}
