//! Community-detection laboratory.
//!
//! * [`graph`]: undirected simple graphs and their topological measures.
//! * [`netgen`]: random-graph models and planted-community benchmarks
//!   (Girvan–Newman, Bagrow rewiring, LFR over configuration-model,
//!   Barabási–Albert and evolutionary seeds).
//! * [`detect`]: ten non-overlapping community detectors behind one contract.
//! * [`evaluate`]: partition comparison measures, quality functions and
//!   community profiles.
//! * [`harness`]: experiment orchestration and report emission.

pub mod detect;
pub mod error;
pub mod evaluate;
pub mod graph;
pub mod harness;
pub mod netgen;
pub mod partition;
pub mod rng;

pub use error::{Error, Result};
pub use graph::Graph;
pub use partition::Partition;
pub use rng::RngStream;
