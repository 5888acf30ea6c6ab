//! Partition comparison measures, quality functions and per-community
//! descriptors.
//!
//! Every comparison measure is derived from the [`ConfusionMatrix`] of the two
//! partitions. Entropies are in bits.

mod compare;
mod quality;

pub use compare::{
    adjusted_rand_index, confusion, jaccard_index, mutual_information_stats, pair_counts, purity,
    rand_index, van_dongen, ConfusionMatrix, InformationStats, PairCounts,
};
pub use quality::{
    community_profile, modularity, quality_functions, surprise, CommunityProfile, CommunityQuality,
    CommunityStats, QualityReport,
};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;

/// Named measures addressable from the command line and experiment configs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Measure {
    Rand,
    AdjustedRand,
    Jaccard,
    Purity,
    VanDongen,
    MutualInformation,
    VariationOfInformation,
    Nmi,
    Modularity,
    InternalDensity,
    CutRatio,
    Conductance,
    Surprise,
    CommunityCount,
}

impl Measure {
    pub const ALL: [Measure; 14] = [
        Measure::Rand,
        Measure::AdjustedRand,
        Measure::Jaccard,
        Measure::Purity,
        Measure::VanDongen,
        Measure::MutualInformation,
        Measure::VariationOfInformation,
        Measure::Nmi,
        Measure::Modularity,
        Measure::InternalDensity,
        Measure::CutRatio,
        Measure::Conductance,
        Measure::Surprise,
        Measure::CommunityCount,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Rand => "rand",
            Measure::AdjustedRand => "ari",
            Measure::Jaccard => "jaccard",
            Measure::Purity => "purity",
            Measure::VanDongen => "van_dongen",
            Measure::MutualInformation => "mi",
            Measure::VariationOfInformation => "vi",
            Measure::Nmi => "nmi",
            Measure::Modularity => "modularity",
            Measure::InternalDensity => "internal_density",
            Measure::CutRatio => "cut_ratio",
            Measure::Conductance => "conductance",
            Measure::Surprise => "surprise",
            Measure::CommunityCount => "communities",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == name)
            .ok_or_else(|| Error::arg(format!("unknown measure {name:?}")))
    }

    /// Whether the measure compares against a reference partition.
    pub fn needs_truth(self) -> bool {
        matches!(
            self,
            Measure::Rand
                | Measure::AdjustedRand
                | Measure::Jaccard
                | Measure::Purity
                | Measure::VanDongen
                | Measure::MutualInformation
                | Measure::VariationOfInformation
                | Measure::Nmi
        )
    }

    /// Direction used when ranking detectors by this measure; `None` for
    /// measures without a preferred direction (community count).
    pub fn higher_is_better(self) -> Option<bool> {
        match self {
            Measure::VanDongen
            | Measure::VariationOfInformation
            | Measure::CutRatio
            | Measure::Conductance => Some(false),
            Measure::CommunityCount => None,
            _ => Some(true),
        }
    }

    /// Evaluates the measure. `None` is the undefined flag (for example ARI
    /// with a degenerate denominator).
    pub fn evaluate(self, g: &Graph, found: &Partition, truth: Option<&Partition>) -> Result<Option<f64>> {
        let truth = || truth.ok_or_else(|| Error::arg(format!("measure {} needs a reference partition", self.name())));
        Ok(match self {
            Measure::Rand => Some(rand_index(found, truth()?)?),
            Measure::AdjustedRand => adjusted_rand_index(found, truth()?)?,
            Measure::Jaccard => Some(jaccard_index(found, truth()?)?),
            Measure::Purity => Some(purity(found, truth()?)?),
            Measure::VanDongen => Some(van_dongen(found, truth()?)? as f64),
            Measure::MutualInformation => Some(mutual_information_stats(found, truth()?)?.mi),
            Measure::VariationOfInformation => Some(mutual_information_stats(found, truth()?)?.vi),
            Measure::Nmi => Some(mutual_information_stats(found, truth()?)?.nmi),
            Measure::Modularity => Some(modularity(g, found)?),
            Measure::InternalDensity => Some(quality_functions(g, found)?.internal_density),
            Measure::CutRatio => Some(quality_functions(g, found)?.cut_ratio),
            Measure::Conductance => Some(quality_functions(g, found)?.conductance),
            Measure::Surprise => Some(surprise(g, found)?),
            Measure::CommunityCount => Some(found.community_count() as f64),
        })
    }
}

impl std::fmt::Display for Measure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}
