//! Random-graph models and benchmarks with planted communities.
//!
//! All generators are pure functions of their parameters and an
//! [`RngStream`](crate::rng::RngStream); the same inputs give the same edge
//! list on every platform.

mod edges;
mod growth;
mod lfr;
mod planted;
mod random;

pub use growth::{barabasi_albert, evolutionary_pa, EvParams};
pub use lfr::{lfr, LfrParams, SeedModel};
pub use planted::{bagrow_rewire, girvan_newman, BagrowOutcome};
pub use random::{
    configuration_model, erdos_renyi, expected_degree_graph, is_graphical, powerlaw_degree_sequence,
};

use crate::graph::Graph;
use crate::partition::Partition;

/// A generated graph together with the communities it was built around.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedNetwork {
    pub graph: Graph,
    pub planted: Partition,
    /// Fraction of edge endpoints whose edge leaves the endpoint's community.
    pub realized_mu: f64,
}

/// Total inter-community degree over total degree.
pub fn mixing_coefficient(g: &Graph, p: &Partition) -> f64 {
    if g.edge_count() == 0 {
        return 0.0;
    }
    let inter = g
        .edges()
        .filter(|&(u, v)| p.community_of(u) != p.community_of(v))
        .count();
    inter as f64 / g.edge_count() as f64
}

/// Draws an index with probability proportional to `weights` (all
/// non-negative, positive sum) by linear scan.
pub(crate) fn weighted_index<R: rand::Rng>(weights: &[f64], total: f64, rng: &mut R) -> usize {
    let mut x = rng.gen::<f64>() * total;
    let mut last = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w > 0.0 {
            if x < w {
                return i;
            }
            x -= w;
            last = i;
        }
    }
    last
}
