use rand::seq::SliceRandom;
use rand::Rng;

use super::weighted::compact;
use super::{check_input, DetectorParams};
use crate::error::Result;
use crate::graph::Graph;
use crate::partition::Partition;
use crate::rng::RngStream;

/// Result of [`detect_label_propagation`].
#[derive(Debug, Clone)]
pub struct LabelPropagationOutcome {
    pub partition: Partition,
    /// False if the sweep cap was hit before every node held a majority
    /// label of its neighbourhood.
    pub converged: bool,
    pub sweeps: usize,
}

/// Asynchronous label propagation (Raghavan–Albert–Kumara): every node starts
/// with its own label; in shuffled order each node adopts the label most
/// frequent among its neighbours, ties broken uniformly at random. Stops
/// once every node's label is among its neighbourhood's majority labels.
pub fn detect_label_propagation(
    g: &Graph,
    params: &DetectorParams,
    stream: RngStream,
) -> Result<LabelPropagationOutcome> {
    check_input(g, params)?;
    let n = g.node_count();
    let mut rng = stream.rng();
    let mut label: Vec<usize> = (0..n).collect();
    let mut count = vec![0usize; n];
    let mut touched = Vec::new();
    let mut majority = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    let mut converged = false;
    let mut sweeps = 0;
    while sweeps < params.label_propagation_max_sweeps {
        sweeps += 1;
        order.shuffle(&mut rng);
        for &v in &order {
            if majority_labels(g, v, &label, &mut count, &mut touched, &mut majority) {
                label[v] = majority[rng.gen_range(0..majority.len())];
            }
        }
        converged = (0..n).all(|v| {
            !majority_labels(g, v, &label, &mut count, &mut touched, &mut majority)
                || majority.contains(&label[v])
        });
        if converged {
            break;
        }
    }
    if !converged {
        log::warn!("label propagation stopped after {sweeps} sweeps without converging");
    }
    compact(&mut label);
    Ok(LabelPropagationOutcome {
        partition: Partition::from_labels(&label),
        converged,
        sweeps,
    })
}

/// Fill `majority` with the most frequent neighbour labels of `v`, sorted.
/// Returns false for an isolated node.
fn majority_labels(
    g: &Graph,
    v: usize,
    label: &[usize],
    count: &mut [usize],
    touched: &mut Vec<usize>,
    majority: &mut Vec<usize>,
) -> bool {
    majority.clear();
    if g.deg(v) == 0 {
        return false;
    }
    let mut best = 0;
    for &w in g.neighbors(v) {
        let l = label[w];
        if count[l] == 0 {
            touched.push(l);
        }
        count[l] += 1;
        best = best.max(count[l]);
    }
    for &l in touched.iter() {
        if count[l] == best {
            majority.push(l);
        }
    }
    majority.sort_unstable();
    for l in touched.drain(..) {
        count[l] = 0;
    }
    true
}
