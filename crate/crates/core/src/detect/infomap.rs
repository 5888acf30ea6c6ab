use rand::seq::SliceRandom;
use rand::Rng;

use super::weighted::{compact, WeightedGraph};
use super::{check_input, DetectorParams};
use crate::error::Result;
use crate::graph::Graph;
use crate::partition::Partition;
use crate::rng::RngStream;

fn plogp(x: f64) -> f64 {
    if x > 0.0 {
        x * x.log2()
    } else {
        0.0
    }
}

/// Two-level map equation of `p` on `g` in bits, for a random walk with
/// degree-proportional visit rates and no teleportation.
///
/// L = q↷·H(Q) + Σ_i p_i↻·H(P_i), evaluated in its expanded form
/// plogp(q) − 2Σ plogp(q_i) + Σ plogp(q_i + p_i) − Σ_α plogp(p_α).
pub fn description_length(g: &Graph, p: &Partition) -> Result<f64> {
    p.check_len(g.node_count())?;
    let w = WeightedGraph::from_graph(g);
    Ok(MapEquation::new(&w, 0.0).codelength(&w, p.membership()))
}

/// Constants of the map equation for one graph.
struct MapEquation {
    teleport: f64,
    node_count: f64,
    node_entropy: f64,
}

impl MapEquation {
    fn new(base: &WeightedGraph, teleport: f64) -> Self {
        let node_entropy = if base.total > 0.0 {
            base.strength.iter().map(|&s| plogp(s / base.total)).sum()
        } else {
            0.0
        };
        Self {
            teleport,
            node_count: base.members.iter().sum::<usize>() as f64,
            node_entropy,
        }
    }

    /// Exit flow of a module with the given boundary flow, visit rate and
    /// node count.
    fn exit(&self, cut: f64, flow: f64, members: f64) -> f64 {
        (1.0 - self.teleport) * cut + self.teleport * (1.0 - members / self.node_count) * flow
    }

    fn codelength(&self, w: &WeightedGraph, labels: &[usize]) -> f64 {
        if w.total == 0.0 {
            return 0.0;
        }
        let modules = Modules::new(w, labels, self);
        modules.codelength(self)
    }
}

/// Per-module flow bookkeeping for one aggregation level.
struct Modules {
    flow: Vec<f64>,
    cut: Vec<f64>,
    members: Vec<f64>,
    exit: Vec<f64>,
    sum_exit: f64,
    sum_plogp_exit: f64,
    sum_plogp_total: f64,
}

impl Modules {
    fn new(w: &WeightedGraph, labels: &[usize], eq: &MapEquation) -> Self {
        let k = labels.iter().max().map_or(0, |&c| c + 1).max(w.node_count());
        let mut flow = vec![0.0; k];
        let mut cut = vec![0.0; k];
        let mut members = vec![0.0; k];
        for (v, row) in w.adj.iter().enumerate() {
            let c = labels[v];
            flow[c] += w.strength[v] / w.total;
            members[c] += w.members[v] as f64;
            for &(u, x) in row {
                if labels[u] != c {
                    cut[c] += x / w.total;
                }
            }
        }
        let exit: Vec<f64> = (0..k).map(|c| eq.exit(cut[c], flow[c], members[c])).collect();
        let sum_exit = exit.iter().sum();
        let sum_plogp_exit = exit.iter().map(|&q| plogp(q)).sum();
        let sum_plogp_total = exit.iter().zip(&flow).map(|(&q, &p)| plogp(q + p)).sum();
        Self {
            flow,
            cut,
            members,
            exit,
            sum_exit,
            sum_plogp_exit,
            sum_plogp_total,
        }
    }

    fn codelength(&self, eq: &MapEquation) -> f64 {
        plogp(self.sum_exit) - 2.0 * self.sum_plogp_exit + self.sum_plogp_total - eq.node_entropy
    }
}

/// Node-move optimisation on one level: each node, in shuffled order, joins
/// the neighbouring module that shortens the description the most. Returns
/// whether any node moved.
fn move_phase<R: Rng>(
    w: &WeightedGraph,
    labels: &mut [usize],
    eq: &MapEquation,
    max_sweeps: usize,
    rng: &mut R,
) -> bool {
    let n = w.node_count();
    let mut m = Modules::new(w, labels, eq);
    let mut link = vec![0.0; m.flow.len()];
    let mut touched: Vec<usize> = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    let mut moved_any = false;
    for _ in 0..max_sweeps {
        order.shuffle(rng);
        let mut moved = false;
        for &v in &order {
            if w.adj[v].is_empty() {
                continue;
            }
            let a = labels[v];
            for &(u, x) in &w.adj[v] {
                let c = labels[u];
                if link[c] == 0.0 {
                    touched.push(c);
                }
                link[c] += x / w.total;
            }
            let p_v = w.strength[v] / w.total;
            let out_v = (w.strength[v] - w.self_loop[v]) / w.total;
            let n_v = w.members[v] as f64;
            let cut_a = m.cut[a] - out_v + 2.0 * link[a];
            let flow_a = m.flow[a] - p_v;
            let members_a = m.members[a] - n_v;
            let exit_a = eq.exit(cut_a, flow_a, members_a);
            let mut best: Option<(f64, usize, f64, f64)> = None;
            touched.sort_unstable();
            for &b in &touched {
                if b == a {
                    continue;
                }
                let cut_b = m.cut[b] + out_v - 2.0 * link[b];
                let exit_b = eq.exit(cut_b, m.flow[b] + p_v, m.members[b] + n_v);
                let sum_exit = m.sum_exit - m.exit[a] - m.exit[b] + exit_a + exit_b;
                let delta = plogp(sum_exit) - plogp(m.sum_exit)
                    - 2.0 * (plogp(exit_a) + plogp(exit_b) - plogp(m.exit[a]) - plogp(m.exit[b]))
                    + plogp(exit_a + flow_a) + plogp(exit_b + m.flow[b] + p_v)
                    - plogp(m.exit[a] + m.flow[a])
                    - plogp(m.exit[b] + m.flow[b]);
                if delta < -1e-10 && best.is_none_or(|(d, ..)| delta < d) {
                    best = Some((delta, b, cut_b, exit_b));
                }
            }
            if let Some((_, b, cut_b, exit_b)) = best {
                m.sum_exit += exit_a + exit_b - m.exit[a] - m.exit[b];
                m.sum_plogp_exit +=
                    plogp(exit_a) + plogp(exit_b) - plogp(m.exit[a]) - plogp(m.exit[b]);
                m.sum_plogp_total += plogp(exit_a + flow_a) + plogp(exit_b + m.flow[b] + p_v)
                    - plogp(m.exit[a] + m.flow[a])
                    - plogp(m.exit[b] + m.flow[b]);
                m.cut[a] = cut_a;
                m.flow[a] = flow_a;
                m.members[a] = members_a;
                m.exit[a] = exit_a;
                m.cut[b] = cut_b;
                m.flow[b] += p_v;
                m.members[b] += n_v;
                m.exit[b] = exit_b;
                labels[v] = b;
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
    debug_assert!(
        (m.codelength(eq) - Modules::new(w, labels, eq).codelength(eq)).abs() < 1e-8,
        "incremental map-equation terms drifted"
    );
    moved_any
}

/// One optimisation trial: node moves, then repeated aggregation, then
/// re-refinement at node level from the aggregated solution, until the
/// description length stops improving.
fn trial<R: Rng>(base: &WeightedGraph, eq: &MapEquation, params: &DetectorParams, rng: &mut R) -> (Vec<usize>, f64) {
    let n = base.node_count();
    let mut membership: Vec<usize> = (0..n).collect();
    let mut best = f64::INFINITY;
    loop {
        let mut candidate = membership.clone();
        move_phase(base, &mut candidate, eq, params.infomap_core_loops, rng);
        let mut k = compact(&mut candidate);
        let mut level = base.aggregate(&candidate, k);
        loop {
            let mut labels: Vec<usize> = (0..k).collect();
            if !move_phase(&level, &mut labels, eq, params.infomap_core_loops, rng) {
                break;
            }
            k = compact(&mut labels);
            for c in candidate.iter_mut() {
                *c = labels[*c];
            }
            level = level.aggregate(&labels, k);
        }
        let length = eq.codelength(base, &candidate);
        if length < best - 1e-10 {
            best = length;
            membership = candidate;
        } else {
            return (membership, best);
        }
    }
}

/// Infomap: minimise the two-level map equation over
/// `infomap_trials` independent optimisation runs and keep the shortest
/// description, falling back to a single module when nothing beats it.
pub fn detect_infomap(g: &Graph, params: &DetectorParams, stream: RngStream) -> Result<Partition> {
    check_input(g, params)?;
    let n = g.node_count();
    if g.edge_count() == 0 {
        return Ok(Partition::singletons(n));
    }
    let base = WeightedGraph::from_graph(g);
    let eq = MapEquation::new(&base, params.infomap_teleport);
    let mut rng = stream.rng();
    // Isolated nodes carry no flow; they stay in their own modules.
    let one: Vec<usize> = (0..n).map(|v| if g.deg(v) > 0 { 0 } else { v + 1 }).collect();
    let mut best = (one.clone(), eq.codelength(&base, &one));
    for _ in 0..params.infomap_trials {
        let (labels, length) = trial(&base, &eq, params, &mut rng);
        if length < best.1 - 1e-10 {
            best = (labels, length);
        }
    }
    Ok(Partition::from_labels(&best.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    fn entropy_of_degrees(g: &Graph) -> f64 {
        let two_m = 2.0 * g.edge_count() as f64;
        -g.degrees().iter().map(|&k| plogp(k as f64 / two_m)).sum::<f64>()
    }

    #[test]
    fn one_module_costs_the_visit_entropy() {
        let g = two_triangle_bridge();
        let l = description_length(&g, &Partition::one_block(6)).unwrap();
        assert!((l - entropy_of_degrees(&g)).abs() < 1e-12);
        // degrees 2,2,3,3,2,2 over 2m = 14
        let h = -(4.0 * plogp(2.0 / 14.0) + 2.0 * plogp(3.0 / 14.0));
        assert!((l - h).abs() < 1e-12);
    }

    #[test]
    fn g6_split_is_shorter() {
        let g = two_triangle_bridge();
        let split = Partition::from_labels(&[0, 0, 0, 1, 1, 1]);
        let l_split = description_length(&g, &split).unwrap();
        // q_i = 1/14 each, p_i = 1/2 each.
        let q = 1.0 / 14.0;
        let expected = plogp(2.0 * q) - 4.0 * plogp(q) + 2.0 * plogp(q + 0.5)
            + 4.0 * -plogp(2.0 / 14.0) * 1.0
            + 2.0 * -plogp(3.0 / 14.0);
        assert!((l_split - expected).abs() < 1e-12);
        assert!(l_split < entropy_of_degrees(&g));
        let p = detect_infomap(&g, &DetectorParams::default(), RngStream::new(1, 0)).unwrap();
        assert_eq!(p.canonical(), split.canonical());
    }

    #[test]
    fn moves_shorten_the_description() {
        let g = crate::netgen::girvan_newman(4.0, RngStream::new(3, 0)).unwrap().graph;
        let base = WeightedGraph::from_graph(&g);
        for teleport in [0.0, 0.15] {
            let eq = MapEquation::new(&base, teleport);
            let mut labels: Vec<usize> = (0..g.node_count()).collect();
            let mut rng = RngStream::new(5, 0).rng();
            move_phase(&base, &mut labels, &eq, 3, &mut rng);
            let singletons: Vec<usize> = (0..g.node_count()).collect();
            assert!(eq.codelength(&base, &labels) < eq.codelength(&base, &singletons));
        }
    }

    #[test]
    fn complete_graph_is_one_module() {
        let p = detect_infomap(&Graph::complete(8), &DetectorParams::default(), RngStream::new(0, 0)).unwrap();
        assert_eq!(p.community_count(), 1);
    }
}
