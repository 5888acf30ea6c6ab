//! Experiment execution: one cell per (seed model, μ, replicate), cells in
//! parallel, detectors sequential within a cell.

use std::sync::{mpsc, Arc};
use std::thread;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::config::{ExperimentConfig, GeneratorKind, Mode};
use super::stats::{average_ranks, mean, sample_stddev};
use crate::detect::{detect, Algorithm, Detection, DetectorParams};
use crate::error::{Error, Result};
use crate::graph::metrics::{assortativity, centralization, transitivity, Centrality};
use crate::graph::Graph;
use crate::netgen::{girvan_newman, lfr, LfrParams, PlantedNetwork, SeedModel};
use crate::rng::RngStream;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "COMMKIT_THREADS";

/// Detector name used for the records of a topology sweep.
pub const TOPOLOGY_DETECTOR: &str = "topology";

/// Measures recorded by a topology sweep.
pub const TOPOLOGY_MEASURES: [&str; 3] = ["assortativity", "transitivity", "centralization"];

/// Outcome of one detector run (or of the generation step it depended on).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Ok,
    GenerationFailed,
    DetectorFailed,
    Timeout,
}

impl RunStatus {
    pub fn name(self) -> &'static str {
        match self {
            RunStatus::Ok => "ok",
            RunStatus::GenerationFailed => "generation_failed",
            RunStatus::DetectorFailed => "detector_failed",
            RunStatus::Timeout => "timeout",
        }
    }
}

/// One row of `results.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRecord {
    pub generator: GeneratorKind,
    /// `None` for generators without a seed model.
    pub seed_model: Option<SeedModel>,
    pub mu_target: f64,
    /// `None` when generation failed without a best attempt to report.
    pub mu_realized: Option<f64>,
    pub replicate: usize,
    /// Seed of the cell stream the network and detectors were drawn from.
    pub seed: u64,
    pub detector: String,
    pub measure: String,
    /// `None` is the undefined flag: the measure is undefined on this input
    /// or the run failed (see `status`).
    pub value: Option<f64>,
    pub runtime_ms: Option<f64>,
    /// Not part of `results.csv`; failed runs are excluded from means.
    pub status: RunStatus,
}

/// One row of `runs.csv`: the execution log of a detector on one network.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub generator: GeneratorKind,
    pub seed_model: Option<SeedModel>,
    pub mu_target: f64,
    pub replicate: usize,
    pub seed: u64,
    pub detector: String,
    pub status: RunStatus,
    /// Wall-clock time of the detector alone, generation excluded.
    pub runtime_ms: Option<f64>,
    pub converged: Option<bool>,
    pub communities: Option<usize>,
    pub message: String,
}

/// Aggregate over replicates of one (grid point, detector, measure).
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub generator: GeneratorKind,
    pub seed_model: Option<SeedModel>,
    pub mu_target: f64,
    pub detector: String,
    pub measure: String,
    pub mean: Option<f64>,
    pub stddev: Option<f64>,
    /// Replicates contributing a defined value.
    pub count: usize,
    /// Replicates whose generation or detection failed.
    pub failures: usize,
    /// Rank among the detectors of the same grid point and measure (1 is
    /// best, ties share the average rank); `None` for measures without a
    /// preferred direction or without a defined mean.
    pub rank: Option<f64>,
}

/// Everything produced by one run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub records: Vec<ResultRecord>,
    pub runs: Vec<RunRecord>,
    pub summary: Vec<SummaryRow>,
}

/// Worker count: the configured or available parallelism, capped by
/// `COMMKIT_THREADS` when that is set to a positive integer.
pub fn worker_count(configured: Option<usize>) -> usize {
    let available = thread::available_parallelism().map_or(1, |n| n.get());
    let base = configured.unwrap_or(available).max(1);
    match std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        Some(cap) if cap > 0 => base.min(cap),
        _ => base,
    }
}

/// Runs `cfg` in the mode it names.
pub fn run(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    match cfg.mode {
        Mode::Detection => run_experiment(cfg),
        Mode::Topology => run_topology_sweep(cfg),
    }
}

/// Grid position of one generated network.
#[derive(Debug, Clone, Copy)]
struct Cell {
    seed_model: Option<SeedModel>,
    mu: f64,
    replicate: usize,
    stream: RngStream,
}

fn cells(cfg: &ExperimentConfig) -> Vec<Cell> {
    let models: Vec<Option<SeedModel>> = match cfg.generator {
        GeneratorKind::Lfr => cfg.seed_models.iter().copied().map(Some).collect(),
        GeneratorKind::GirvanNewman => vec![None],
    };
    let mut out = Vec::new();
    for &seed_model in &models {
        for &mu in &cfg.mu {
            for replicate in 0..cfg.replicates {
                out.push(Cell {
                    seed_model,
                    mu,
                    replicate,
                    stream: cell_stream(cfg.seed, cfg.generator, seed_model, mu, replicate),
                });
            }
        }
    }
    out
}

/// The stream of a cell depends only on the master seed and the cell's
/// coordinates, so results are independent of scheduling and of which other
/// cells exist.
fn cell_stream(master: u64, generator: GeneratorKind, seed_model: Option<SeedModel>, mu: f64, replicate: usize) -> RngStream {
    let generator_tag = match generator {
        GeneratorKind::Lfr => 1,
        GeneratorKind::GirvanNewman => 2,
    };
    let model_tag = seed_model.map_or(0, |m| 1 + SeedModel::ALL.iter().position(|&x| x == m).unwrap_or(0) as u64);
    RngStream::new(master, generator_tag)
        .substream(model_tag)
        .substream(mu.to_bits())
        .substream(replicate as u64)
}

/// Stream of the network generated in a cell.
const NETWORK_TAG: u64 = 0;

/// Stream of a detector in a cell: one per algorithm, so adding or removing
/// detectors does not change the others' results.
fn detector_stream(cell: RngStream, algorithm: Algorithm) -> RngStream {
    let index = Algorithm::ALL.iter().position(|&a| a == algorithm).unwrap_or(0);
    cell.substream(100 + index as u64)
}

fn generate(cfg: &ExperimentConfig, cell: &Cell) -> Result<PlantedNetwork> {
    let stream = cell.stream.substream(NETWORK_TAG);
    let net = match cfg.generator {
        GeneratorKind::Lfr => {
            let params = LfrParams {
                mu: cell.mu,
                seed_model: cell.seed_model.unwrap_or(SeedModel::Cm),
                ..cfg.lfr.clone()
            };
            lfr(&params, stream)?
        }
        GeneratorKind::GirvanNewman => girvan_newman(16.0 * cell.mu, stream)?,
    };
    // Spot check of the generator contract on every replicate.
    net.graph.validate()?;
    if net.planted.len() != net.graph.node_count() {
        return Err(Error::Generation {
            msg: "planted partition does not cover the graph".into(),
            best_mu: None,
        });
    }
    Ok(net)
}

fn best_mu(e: &Error) -> Option<f64> {
    match e {
        Error::Generation { best_mu, .. } => *best_mu,
        _ => None,
    }
}

/// Result of running one detector with an optional wall-clock limit.
enum Attempt {
    Done(Result<Detection>, Duration),
    TimedOut,
}

fn run_detector(algorithm: Algorithm, graph: &Arc<Graph>, params: &DetectorParams, stream: RngStream, timeout: Option<Duration>) -> Attempt {
    let Some(limit) = timeout else {
        let start = Instant::now();
        let out = detect(algorithm, graph, params, stream);
        return Attempt::Done(out, start.elapsed());
    };
    let (tx, rx) = mpsc::channel();
    let graph = Arc::clone(graph);
    let params = params.clone();
    // A timed-out worker is abandoned; it finishes in the background and its
    // result is dropped.
    let spawned = thread::Builder::new()
        .name(format!("commkit-{algorithm}"))
        .spawn(move || {
            let start = Instant::now();
            let out = detect(algorithm, &graph, &params, stream);
            let _ = tx.send((out, start.elapsed()));
        });
    if let Err(e) = spawned {
        return Attempt::Done(Err(Error::Io(e)), Duration::ZERO);
    }
    match rx.recv_timeout(limit) {
        Ok((out, elapsed)) => Attempt::Done(out, elapsed),
        Err(mpsc::RecvTimeoutError::Timeout) => Attempt::TimedOut,
        Err(mpsc::RecvTimeoutError::Disconnected) => {
            Attempt::Done(Err(Error::Detector(format!("{algorithm} panicked"))), Duration::ZERO)
        }
    }
}

fn in_pool<T: Send>(cfg: &ExperimentConfig, job: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count(cfg.threads))
        .build()
        .map_err(|e| Error::arg(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(job))
}

/// Generates every network of the grid, runs each detector on it and scores
/// the result against the planted partition.
///
/// Failures are recorded rather than propagated: a failed generation flags
/// every record of its cell, a failed or timed-out detector flags its own
/// records, and flagged records are excluded from the summary means.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let cells = cells(cfg);
    log::info!(
        "{}: {} networks x {} detectors on {} threads",
        cfg.name,
        cells.len(),
        cfg.detectors.len(),
        worker_count(cfg.threads)
    );
    let per_cell: Vec<(Vec<ResultRecord>, Vec<RunRecord>)> =
        in_pool(cfg, || cells.par_iter().map(|cell| run_cell(cfg, cell)).collect())?;
    let (mut records, mut runs) = (Vec::new(), Vec::new());
    for (r, l) in per_cell {
        records.extend(r);
        runs.extend(l);
    }
    let summary = summarize(&records, &detector_order(cfg), &measure_order(cfg));
    Ok(ExperimentOutput { records, runs, summary })
}

fn detector_order(cfg: &ExperimentConfig) -> Vec<String> {
    let mut names: Vec<String> = Vec::new();
    for d in &cfg.detectors {
        let name = d.algorithm.name().to_string();
        if !names.contains(&name) {
            names.push(name);
        }
    }
    names
}

fn measure_order(cfg: &ExperimentConfig) -> Vec<String> {
    cfg.measures.iter().map(|m| m.name().to_string()).collect()
}

fn run_cell(cfg: &ExperimentConfig, cell: &Cell) -> (Vec<ResultRecord>, Vec<RunRecord>) {
    let network = generate(cfg, cell);
    let mu_realized = match &network {
        Ok(net) => Some(net.realized_mu),
        Err(e) => best_mu(e),
    };
    let record = |detector: &str, measure: &str, value: Option<f64>, runtime_ms: Option<f64>, status: RunStatus| ResultRecord {
        generator: cfg.generator,
        seed_model: cell.seed_model,
        mu_target: cell.mu,
        mu_realized,
        replicate: cell.replicate,
        seed: cell.stream.seed,
        detector: detector.to_string(),
        measure: measure.to_string(),
        value,
        runtime_ms,
        status,
    };
    let run_record = |detector: &str, status: RunStatus, runtime_ms: Option<f64>, converged: Option<bool>, communities: Option<usize>, message: String| RunRecord {
        generator: cfg.generator,
        seed_model: cell.seed_model,
        mu_target: cell.mu,
        replicate: cell.replicate,
        seed: cell.stream.seed,
        detector: detector.to_string(),
        status,
        runtime_ms,
        converged,
        communities,
        message,
    };
    let (mut records, mut runs) = (Vec::new(), Vec::new());
    let net = match network {
        Ok(net) => net,
        Err(e) => {
            log::warn!("generation failed at mu={} replicate={}: {e}", cell.mu, cell.replicate);
            for d in &cfg.detectors {
                let name = d.algorithm.name();
                for m in &cfg.measures {
                    records.push(record(name, m.name(), None, None, RunStatus::GenerationFailed));
                }
                runs.push(run_record(name, RunStatus::GenerationFailed, None, None, None, e.to_string()));
            }
            return (records, runs);
        }
    };
    let graph = Arc::new(net.graph);
    for d in &cfg.detectors {
        let name = d.algorithm.name();
        let stream = detector_stream(cell.stream, d.algorithm);
        match run_detector(d.algorithm, &graph, &d.params, stream, cfg.timeout) {
            Attempt::Done(Ok(found), elapsed) => {
                let ms = elapsed.as_secs_f64() * 1e3;
                let shown = cfg.record_runtime.then_some(ms);
                for m in &cfg.measures {
                    let value = match m.evaluate(&graph, &found.partition, Some(&net.planted)) {
                        Ok(v) => v.filter(|x| x.is_finite()),
                        Err(e) => {
                            log::warn!("{} undefined for {name}: {e}", m.name());
                            None
                        }
                    };
                    records.push(record(name, m.name(), value, shown, RunStatus::Ok));
                }
                runs.push(run_record(
                    name,
                    RunStatus::Ok,
                    Some(ms),
                    Some(found.converged),
                    Some(found.partition.community_count()),
                    String::new(),
                ));
            }
            Attempt::Done(Err(e), elapsed) => {
                log::warn!("{name} failed at mu={} replicate={}: {e}", cell.mu, cell.replicate);
                for m in &cfg.measures {
                    records.push(record(name, m.name(), None, None, RunStatus::DetectorFailed));
                }
                let ms = elapsed.as_secs_f64() * 1e3;
                runs.push(run_record(name, RunStatus::DetectorFailed, Some(ms), None, None, e.to_string()));
            }
            Attempt::TimedOut => {
                log::warn!("{name} timed out at mu={} replicate={}", cell.mu, cell.replicate);
                for m in &cfg.measures {
                    records.push(record(name, m.name(), None, None, RunStatus::Timeout));
                }
                let limit = cfg.timeout.map(|t| t.as_secs_f64() * 1e3);
                runs.push(run_record(name, RunStatus::Timeout, limit, None, None, "timeout".into()));
            }
        }
    }
    (records, runs)
}

/// Generates the grid of networks and records assortativity, transitivity
/// and degree centralization of each; detectors are not run.
pub fn run_topology_sweep(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let cells = cells(cfg);
    let per_cell: Vec<(Vec<ResultRecord>, RunRecord)> =
        in_pool(cfg, || cells.par_iter().map(|cell| topology_cell(cfg, cell)).collect())?;
    let (mut records, mut runs) = (Vec::new(), Vec::new());
    for (r, l) in per_cell {
        records.extend(r);
        runs.push(l);
    }
    let measures: Vec<String> = TOPOLOGY_MEASURES.iter().map(|s| s.to_string()).collect();
    let summary = summarize(&records, &[TOPOLOGY_DETECTOR.to_string()], &measures);
    Ok(ExperimentOutput { records, runs, summary })
}

fn topology_cell(cfg: &ExperimentConfig, cell: &Cell) -> (Vec<ResultRecord>, RunRecord) {
    let start = Instant::now();
    let network = generate(cfg, cell);
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    let (values, mu_realized, status, message) = match &network {
        Ok(net) => {
            let g = &net.graph;
            let values = [
                assortativity(g).ok().flatten(),
                transitivity(g).ok(),
                centralization(g, Centrality::Degree).ok(),
            ];
            (values, Some(net.realized_mu), RunStatus::Ok, String::new())
        }
        Err(e) => {
            log::warn!(
                "generation failed for {} at mu={} replicate={}: {e}",
                cell.seed_model.map_or("gn", |m| m.name()),
                cell.mu,
                cell.replicate
            );
            ([None; 3], best_mu(e), RunStatus::GenerationFailed, e.to_string())
        }
    };
    let records = TOPOLOGY_MEASURES
        .iter()
        .zip(values)
        .map(|(measure, value)| ResultRecord {
            generator: cfg.generator,
            seed_model: cell.seed_model,
            mu_target: cell.mu,
            mu_realized,
            replicate: cell.replicate,
            seed: cell.stream.seed,
            detector: TOPOLOGY_DETECTOR.to_string(),
            measure: measure.to_string(),
            value,
            runtime_ms: None,
            status,
        })
        .collect();
    let run = RunRecord {
        generator: cfg.generator,
        seed_model: cell.seed_model,
        mu_target: cell.mu,
        replicate: cell.replicate,
        seed: cell.stream.seed,
        detector: TOPOLOGY_DETECTOR.to_string(),
        status,
        runtime_ms: Some(elapsed),
        converged: None,
        communities: network.as_ref().ok().map(|n| n.planted.community_count()),
        message,
    };
    (records, run)
}

/// Means, sample standard deviations and ranks per (grid point, detector,
/// measure), in grid order, then `detectors` order, then `measures` order.
/// Records flagged by a failure are counted in `failures` and left out of
/// the means.
pub fn summarize(records: &[ResultRecord], detectors: &[String], measures: &[String]) -> Vec<SummaryRow> {
    let mut points: Vec<(GeneratorKind, Option<SeedModel>, f64)> = Vec::new();
    for r in records {
        let key = (r.generator, r.seed_model, r.mu_target);
        if !points.iter().any(|p| p.0 == key.0 && p.1 == key.1 && p.2.to_bits() == key.2.to_bits()) {
            points.push(key);
        }
    }
    let mut rows = Vec::new();
    for &(generator, seed_model, mu) in &points {
        let at_point: Vec<&ResultRecord> = records
            .iter()
            .filter(|r| r.generator == generator && r.seed_model == seed_model && r.mu_target.to_bits() == mu.to_bits())
            .collect();
        let first = rows.len();
        for detector in detectors {
            for measure in measures {
                let group: Vec<&&ResultRecord> = at_point
                    .iter()
                    .filter(|r| &r.detector == detector && &r.measure == measure)
                    .collect();
                if group.is_empty() {
                    continue;
                }
                let values: Vec<f64> = group
                    .iter()
                    .filter(|r| r.status == RunStatus::Ok)
                    .filter_map(|r| r.value)
                    .collect();
                rows.push(SummaryRow {
                    generator,
                    seed_model,
                    mu_target: mu,
                    detector: detector.clone(),
                    measure: measure.clone(),
                    mean: mean(&values),
                    stddev: sample_stddev(&values),
                    count: values.len(),
                    failures: group.iter().filter(|r| r.status != RunStatus::Ok).count(),
                    rank: None,
                });
            }
        }
        for measure in measures {
            let Some(descending) = crate::evaluate::Measure::parse(measure).ok().and_then(|m| m.higher_is_better()) else {
                continue;
            };
            let idx: Vec<usize> = (first..rows.len())
                .filter(|&i| &rows[i].measure == measure && rows[i].mean.is_some())
                .collect();
            let means: Vec<f64> = idx.iter().filter_map(|&i| rows[i].mean).collect();
            for (&i, rank) in idx.iter().zip(average_ranks(&means, descending)) {
                rows[i].rank = Some(rank);
            }
        }
    }
    rows
}
