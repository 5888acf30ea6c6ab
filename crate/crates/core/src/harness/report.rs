//! Report files: `results.csv`, `summary.csv`, `runs.csv` and one TSV plot
//! series per (seed model, detector, measure).

use std::fs;
use std::path::{Path, PathBuf};

use super::run::{ExperimentOutput, ResultRecord, RunRecord, SummaryRow};
use crate::error::{Error, Result};
use crate::netgen::SeedModel;

/// Exact header of `results.csv`.
pub const RESULTS_HEADER: [&str; 10] = [
    "generator",
    "seed_model",
    "mu_target",
    "mu_realized",
    "replicate",
    "seed",
    "detector",
    "measure",
    "value",
    "runtime_ms",
];

pub const SUMMARY_HEADER: [&str; 10] = [
    "generator",
    "seed_model",
    "mu_target",
    "detector",
    "measure",
    "mean",
    "stddev",
    "count",
    "failures",
    "rank",
];

pub const RUNS_HEADER: [&str; 11] = [
    "generator",
    "seed_model",
    "mu_target",
    "replicate",
    "seed",
    "detector",
    "status",
    "runtime_ms",
    "converged",
    "communities",
    "message",
];

/// Undefined values are written as an empty field, never as 0.
fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

fn model(m: Option<SeedModel>) -> String {
    m.map_or_else(String::new, |m| m.name().to_string())
}

fn to_csv<const N: usize>(header: [&str; N], rows: impl Iterator<Item = [String; N]>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(&row).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("fields are UTF-8"))
}

/// Text of `results.csv`.
pub fn results_csv(records: &[ResultRecord]) -> Result<String> {
    to_csv(
        RESULTS_HEADER,
        records.iter().map(|r| {
            [
                r.generator.name().to_string(),
                model(r.seed_model),
                r.mu_target.to_string(),
                opt(r.mu_realized),
                r.replicate.to_string(),
                r.seed.to_string(),
                r.detector.clone(),
                r.measure.clone(),
                opt(r.value),
                opt(r.runtime_ms),
            ]
        }),
    )
}

/// Text of `summary.csv`.
pub fn summary_csv(rows: &[SummaryRow]) -> Result<String> {
    to_csv(
        SUMMARY_HEADER,
        rows.iter().map(|s| {
            [
                s.generator.name().to_string(),
                model(s.seed_model),
                s.mu_target.to_string(),
                s.detector.clone(),
                s.measure.clone(),
                opt(s.mean),
                opt(s.stddev),
                s.count.to_string(),
                s.failures.to_string(),
                opt(s.rank),
            ]
        }),
    )
}

/// Text of `runs.csv`.
pub fn runs_csv(runs: &[RunRecord]) -> Result<String> {
    to_csv(
        RUNS_HEADER,
        runs.iter().map(|r| {
            [
                r.generator.name().to_string(),
                model(r.seed_model),
                r.mu_target.to_string(),
                r.replicate.to_string(),
                r.seed.to_string(),
                r.detector.clone(),
                r.status.name().to_string(),
                opt(r.runtime_ms),
                opt(r.converged),
                opt(r.communities),
                r.message.clone(),
            ]
        }),
    )
}

/// Plot series `(file name, TSV text)` with columns `mu, mean, stddev`, one
/// per (generator/seed model, detector, measure), rows in grid order.
pub fn series_tsv(rows: &[SummaryRow]) -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = Vec::new();
    for s in rows {
        let source = s.seed_model.map_or(s.generator.name(), |m| m.name());
        let name = format!("series_{source}_{}_{}.tsv", s.detector, s.measure);
        let line = format!("{}\t{}\t{}\n", s.mu_target, opt(s.mean), opt(s.stddev));
        match out.iter_mut().find(|(n, _)| *n == name) {
            Some((_, text)) => text.push_str(&line),
            None => out.push((name, format!("mu\tmean\tstddev\n{line}"))),
        }
    }
    out
}

/// Writes every report into `dir` (created if missing) and returns the paths
/// written. All content is rendered and the directory is checked for
/// writability before the first file is touched.
pub fn emit_reports(output: &ExperimentOutput, dir: &Path) -> Result<Vec<PathBuf>> {
    if output.records.is_empty() {
        return Err(Error::arg("no records to report"));
    }
    let mut files = vec![
        ("results.csv".to_string(), results_csv(&output.records)?),
        ("summary.csv".to_string(), summary_csv(&output.summary)?),
        ("runs.csv".to_string(), runs_csv(&output.runs)?),
    ];
    files.extend(series_tsv(&output.summary));

    fs::create_dir_all(dir)?;
    let probe = dir.join(".commkit-write-check");
    fs::write(&probe, b"")?;
    fs::remove_file(&probe)?;

    let mut written = Vec::with_capacity(files.len());
    for (name, text) in files {
        let path = dir.join(name);
        fs::write(&path, text)?;
        written.push(path);
    }
    Ok(written)
}
