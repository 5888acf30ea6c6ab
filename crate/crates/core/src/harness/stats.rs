//! Small statistics used by the harness: summaries, ranks, rank correlation,
//! the mixing limit and the degree-tail diagnostic.

use crate::error::{Error, Result};
use crate::partition::Partition;

/// Arithmetic mean; `None` for an empty slice.
pub fn mean(values: &[f64]) -> Option<f64> {
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

/// Sample standard deviation (n − 1 denominator); 0 for a single value and
/// `None` for an empty slice.
pub fn sample_stddev(values: &[f64]) -> Option<f64> {
    let m = mean(values)?;
    if values.len() < 2 {
        return Some(0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - m) * (v - m)).sum();
    Some((ss / (values.len() - 1) as f64).sqrt())
}

/// Ranks starting at 1 for the largest value when `descending`, for the
/// smallest otherwise. Tied values share the mean of the ranks they span.
pub fn average_ranks(values: &[f64], descending: bool) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| {
        let c = values[a].total_cmp(&values[b]);
        if descending {
            c.reverse()
        } else {
            c
        }
    });
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // Positions start..end hold ranks start+1 ..= end.
        let shared = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = shared;
        }
        start = end;
    }
    ranks
}

fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let (mx, my) = (mean(x)?, mean(y)?);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    (sxx > 0.0 && syy > 0.0).then(|| sxy / (sxx * syy).sqrt())
}

/// Spearman rank correlation (Pearson correlation of average ranks).
/// `None` when either sequence is constant.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<Option<f64>> {
    if x.len() != y.len() {
        return Err(Error::arg(format!("spearman: lengths differ ({} vs {})", x.len(), y.len())));
    }
    if x.len() < 2 {
        return Err(Error::arg("spearman needs at least two observations"));
    }
    Ok(pearson(&average_ranks(x, false), &average_ranks(y, false)))
}

/// Size-weighted mean over communities of `(n − |S|)/n`: the mixing level a
/// node would see if its links were spread at random over the graph.
pub fn mixing_limit(planted: &Partition) -> f64 {
    let n = planted.len() as f64;
    if n == 0.0 {
        return 0.0;
    }
    planted
        .sizes()
        .into_iter()
        .map(|s| {
            let s = s as f64;
            (s / n) * (n - s) / n
        })
        .sum()
}

/// Outcome of [`tail_exponent_estimate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailFit {
    /// `1 + |slope|` of log CCDF against log k.
    pub exponent: f64,
    /// Root-mean-square residual of the fit; large values flag a tail that
    /// is not a straight line on log–log axes.
    pub residual: f64,
    /// Number of samples at or above the cut-off.
    pub samples: usize,
}

/// Minimum number of samples at or above `k_min_fit`.
pub const MIN_TAIL_SAMPLES: usize = 100;

/// Least-squares fit of `log P(K ≥ k)` against `log k` over the distinct
/// values `k ≥ k_min_fit`, with the CCDF taken within the tail.
pub fn tail_exponent_estimate(degrees: &[usize], k_min_fit: usize) -> Result<TailFit> {
    let k_min_fit = k_min_fit.max(1);
    let mut tail: Vec<usize> = degrees.iter().copied().filter(|&k| k >= k_min_fit).collect();
    if tail.len() < MIN_TAIL_SAMPLES {
        return Err(Error::arg(format!(
            "{} samples at or above {k_min_fit}; at least {MIN_TAIL_SAMPLES} are needed",
            tail.len()
        )));
    }
    tail.sort_unstable();
    let total = tail.len() as f64;
    let mut points = Vec::new();
    let mut i = 0;
    while i < tail.len() {
        let k = tail[i];
        points.push(((k as f64).ln(), ((tail.len() - i) as f64 / total).ln()));
        while i < tail.len() && tail[i] == k {
            i += 1;
        }
    }
    if points.len() < 2 {
        return Err(Error::arg("the tail holds a single distinct value"));
    }
    let np = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / np;
    let my = points.iter().map(|p| p.1).sum::<f64>() / np;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = points
        .iter()
        .map(|p| {
            let r = p.1 - (intercept + slope * p.0);
            r * r
        })
        .sum();
    Ok(TailFit {
        exponent: 1.0 + slope.abs(),
        residual: (sse / np).sqrt(),
        samples: tail.len(),
    })
}
