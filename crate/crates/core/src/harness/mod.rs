//! Experiment orchestration: configuration, parallel execution over a grid of
//! generated networks, summaries with detector ranks, and report emission.

mod config;
mod report;
mod run;
mod stats;

pub use config::{DetectorSpec, ExperimentConfig, GeneratorKind, Mode};
pub use report::{
    emit_reports, results_csv, runs_csv, series_tsv, summary_csv, RESULTS_HEADER, RUNS_HEADER, SUMMARY_HEADER,
};
pub use run::{
    run, run_experiment, run_topology_sweep, summarize, worker_count, ExperimentOutput, ResultRecord,
    RunRecord, RunStatus, SummaryRow, THREADS_ENV, TOPOLOGY_DETECTOR, TOPOLOGY_MEASURES,
};
pub use stats::{
    average_ranks, mean, mixing_limit, sample_stddev, spearman, tail_exponent_estimate, TailFit,
    MIN_TAIL_SAMPLES,
};
