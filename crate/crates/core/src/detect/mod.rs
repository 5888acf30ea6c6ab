//! Non-overlapping community detectors.
//!
//! Every detector maps a graph, a [`DetectorParams`] and an [`RngStream`] to a
//! [`Partition`]. Hierarchical detectors additionally return their
//! [`Dendrogram`], cut at maximum modularity. Deterministic detectors ignore
//! the stream.

mod betweenness;
mod dendrogram;
mod eigenvector;
mod fastgreedy;
mod infomap;
mod label_propagation;
mod louvain;
mod mcl;
mod params;
mod radetal;
mod spinglass;
mod walktrap;
mod weighted;

pub use betweenness::detect_edge_betweenness;
pub use dendrogram::{best_modularity_cut, Dendrogram, Merge};
pub use eigenvector::detect_leading_eigenvector;
pub use fastgreedy::detect_fastgreedy;
pub use infomap::{description_length, detect_infomap};
pub use label_propagation::{detect_label_propagation, LabelPropagationOutcome};
pub use louvain::detect_louvain;
pub use mcl::detect_mcl;
pub use params::DetectorParams;
pub use radetal::{detect_radetal, edge_clustering};
pub use spinglass::detect_spinglass;
pub use walktrap::detect_walktrap;

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;
use crate::rng::RngStream;

/// The ten detectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    EdgeBetweenness,
    FastGreedy,
    Louvain,
    Spinglass,
    LeadingEigenvector,
    Mcl,
    WalkTrap,
    Infomap,
    LabelPropagation,
    Radetal,
}

impl Algorithm {
    pub const ALL: [Algorithm; 10] = [
        Algorithm::EdgeBetweenness,
        Algorithm::FastGreedy,
        Algorithm::Louvain,
        Algorithm::Spinglass,
        Algorithm::LeadingEigenvector,
        Algorithm::Mcl,
        Algorithm::WalkTrap,
        Algorithm::Infomap,
        Algorithm::LabelPropagation,
        Algorithm::Radetal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::EdgeBetweenness => "edge_betweenness",
            Algorithm::FastGreedy => "fastgreedy",
            Algorithm::Louvain => "louvain",
            Algorithm::Spinglass => "spinglass",
            Algorithm::LeadingEigenvector => "leading_eigenvector",
            Algorithm::Mcl => "mcl",
            Algorithm::WalkTrap => "walktrap",
            Algorithm::Infomap => "infomap",
            Algorithm::LabelPropagation => "label_propagation",
            Algorithm::Radetal => "radetal",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        Self::ALL
            .into_iter()
            .find(|a| a.name() == key)
            .ok_or_else(|| {
                let names: Vec<_> = Self::ALL.iter().map(|a| a.name()).collect();
                Error::arg(format!("unknown algorithm '{s}' (expected one of {})", names.join(", ")))
            })
    }

    /// True if the output does not depend on the random stream.
    pub fn is_deterministic(self) -> bool {
        matches!(
            self,
            Algorithm::FastGreedy
                | Algorithm::LeadingEigenvector
                | Algorithm::Mcl
                | Algorithm::WalkTrap
                | Algorithm::Radetal
        )
    }

    /// True if the detector builds a dendrogram.
    pub fn is_hierarchical(self) -> bool {
        matches!(
            self,
            Algorithm::EdgeBetweenness
                | Algorithm::FastGreedy
                | Algorithm::WalkTrap
                | Algorithm::Radetal
        )
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Output of [`detect`].
#[derive(Debug, Clone)]
pub struct Detection {
    pub partition: Partition,
    pub dendrogram: Option<Dendrogram>,
    /// False when an iteration cap stopped the detector early (label
    /// propagation only); the partition is still valid.
    pub converged: bool,
}

/// Run `algorithm` on `g`.
pub fn detect(
    algorithm: Algorithm,
    g: &Graph,
    params: &DetectorParams,
    stream: RngStream,
) -> Result<Detection> {
    let hierarchical = |(partition, dendrogram): (Partition, Dendrogram)| Detection {
        partition,
        dendrogram: Some(dendrogram),
        converged: true,
    };
    let flat = |partition: Partition| Detection {
        partition,
        dendrogram: None,
        converged: true,
    };
    Ok(match algorithm {
        Algorithm::EdgeBetweenness => hierarchical(detect_edge_betweenness(g, params, stream)?),
        Algorithm::FastGreedy => hierarchical(detect_fastgreedy(g, params)?),
        Algorithm::Louvain => flat(detect_louvain(g, params, stream)?),
        Algorithm::Spinglass => flat(detect_spinglass(g, params, stream)?),
        Algorithm::LeadingEigenvector => flat(detect_leading_eigenvector(g, params)?),
        Algorithm::Mcl => flat(detect_mcl(g, params)?),
        Algorithm::WalkTrap => hierarchical(detect_walktrap(g, params)?),
        Algorithm::Infomap => flat(detect_infomap(g, params, stream)?),
        Algorithm::LabelPropagation => {
            let out = detect_label_propagation(g, params, stream)?;
            Detection {
                partition: out.partition,
                dendrogram: None,
                converged: out.converged,
            }
        }
        Algorithm::Radetal => hierarchical(detect_radetal(g, params)?),
    })
}

/// Shared precondition: a validated parameter set and a non-empty graph.
fn check_input(g: &Graph, params: &DetectorParams) -> Result<()> {
    params.validate()?;
    if g.node_count() == 0 {
        return Err(Error::arg("graph has no nodes"));
    }
    Ok(())
}

#[cfg(test)]
mod tests;
