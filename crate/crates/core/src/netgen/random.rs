use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;

use super::edges::EdgeStore;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::RngStream;

/// G(n, p): every pair linked independently with probability `p`.
pub fn erdos_renyi(n: usize, p: f64, stream: RngStream) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::arg(format!("edge probability {p} outside [0, 1]")));
    }
    let mut rng = stream.rng();
    let mut adjacency = vec![Vec::new(); n];
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                adjacency[u].push(v);
                adjacency[v].push(u);
            }
        }
    }
    Ok(Graph::from_adjacency_unchecked(adjacency))
}

/// Chung–Lu graph: pair `(u, v)` linked with probability `w_u w_v / Σw`.
pub fn expected_degree_graph(weights: &[f64], stream: RngStream) -> Result<Graph> {
    if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
        return Err(Error::arg(format!("invalid weight {w}")));
    }
    let n = weights.len();
    let total: f64 = weights.iter().sum();
    let mut adjacency = vec![Vec::new(); n];
    if total == 0.0 {
        return Ok(Graph::from_adjacency_unchecked(adjacency));
    }
    for u in 0..n {
        for v in u + 1..n {
            let p = weights[u] * weights[v] / total;
            if p > 1.0 + 1e-12 {
                return Err(Error::arg(format!(
                    "pair ({u}, {v}) has edge probability {p} > 1"
                )));
            }
        }
    }
    let mut rng = stream.rng();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < weights[u] * weights[v] / total {
                adjacency[u].push(v);
                adjacency[v].push(u);
            }
        }
    }
    Ok(Graph::from_adjacency_unchecked(adjacency))
}

/// Erdős–Gallai test for a simple-graph degree sequence.
pub fn is_graphical(degrees: &[usize]) -> bool {
    let n = degrees.len();
    if degrees.iter().sum::<usize>() % 2 == 1 || degrees.iter().any(|&d| d >= n) {
        return false;
    }
    let mut d = degrees.to_vec();
    d.sort_unstable_by(|a, b| b.cmp(a));
    let mut lhs = 0usize;
    for k in 1..=n {
        lhs += d[k - 1];
        let rhs = k * (k - 1) + d[k..].iter().map(|&x| x.min(k)).sum::<usize>();
        if lhs > rhs {
            return false;
        }
    }
    true
}

const CM_RESHUFFLE_SWEEPS: usize = 100;
const CM_RESTARTS: usize = 20;

/// Configuration model returning a simple graph with exactly the given
/// degree sequence.
///
/// Stubs are paired uniformly at random. Self-loops and multi-edges are then
/// repaired: first by re-pairing the offending stubs among themselves (up to
/// 100 sweeps), then by swapping each remaining bad pair with a random valid
/// edge. A repair that runs out of budget starts over from a fresh pairing,
/// up to 20 times.
pub fn configuration_model(degrees: &[usize], stream: RngStream) -> Result<Graph> {
    let total: usize = degrees.iter().sum();
    if total % 2 == 1 {
        return Err(Error::arg(format!("degree sum {total} is odd")));
    }
    if !is_graphical(degrees) {
        return Err(Error::arg("degree sequence is not graphical"));
    }
    let mut rng = stream.rng();
    for restart in 0..CM_RESTARTS {
        if let Some(g) = pair_and_repair(degrees, &mut rng) {
            debug_assert_eq!(g.degrees(), degrees);
            return Ok(g);
        }
        log::debug!("configuration model: repair attempt {restart} ran out of budget");
    }
    Err(Error::Generation {
        msg: format!("configuration model repair exceeded its swap budget {CM_RESTARTS} times"),
        best_mu: None,
    })
}

fn pair_and_repair<R: Rng>(degrees: &[usize], rng: &mut R) -> Option<Graph> {
    let n = degrees.len();
    let total: usize = degrees.iter().sum();
    let mut stubs: Vec<usize> = degrees
        .iter()
        .enumerate()
        .flat_map(|(v, &d)| std::iter::repeat_n(v, d))
        .collect();
    stubs.shuffle(rng);
    let mut pairs: Vec<(usize, usize)> = stubs.chunks_exact(2).map(|c| (c[0], c[1])).collect();

    let mut multiplicity: HashMap<(usize, usize), usize> = HashMap::new();
    for &(u, v) in &pairs {
        *multiplicity.entry((u.min(v), u.max(v))).or_default() += 1;
    }
    let is_bad = |(u, v): (usize, usize), mult: &HashMap<(usize, usize), usize>| {
        u == v || mult[&(u.min(v), u.max(v))] > 1
    };

    for _ in 0..CM_RESHUFFLE_SWEEPS {
        let bad: Vec<usize> = (0..pairs.len()).filter(|&i| is_bad(pairs[i], &multiplicity)).collect();
        if bad.is_empty() {
            break;
        }
        let mut loose: Vec<usize> = Vec::with_capacity(bad.len() * 2);
        for &i in &bad {
            let (u, v) = pairs[i];
            let k = (u.min(v), u.max(v));
            *multiplicity.get_mut(&k).unwrap() -= 1;
            loose.push(u);
            loose.push(v);
        }
        loose.shuffle(rng);
        for (slot, c) in bad.iter().zip(loose.chunks_exact(2)) {
            pairs[*slot] = (c[0], c[1]);
            *multiplicity.entry((c[0].min(c[1]), c[0].max(c[1]))).or_default() += 1;
        }
    }

    // Keep one copy of each valid pair; queue the rest for targeted swaps.
    let mut store = EdgeStore::new(n);
    let mut pending = Vec::new();
    for &(u, v) in &pairs {
        if !store.insert(u, v) {
            pending.push((u, v));
        }
    }
    let budget = 1000 * (pending.len() + 1) + 10 * total;
    let mut attempts = 0;
    while let Some((u, v)) = pending.pop() {
        loop {
            attempts += 1;
            if attempts > budget || store.edge_count() == 0 {
                return None;
            }
            let (x, y) = store.random_edge(rng);
            let (x, y) = if rng.gen() { (x, y) } else { (y, x) };
            // (u,v) + (x,y) -> (u,x) + (v,y)
            if u == x
                || v == y
                || store.has_edge(u, x)
                || store.has_edge(v, y)
                || (u.min(x), u.max(x)) == (v.min(y), v.max(y))
            {
                // No direct repair with this edge. Small dense sequences can
                // have none at all in the current state, so move the placed
                // edges around before trying again.
                shake(&mut store, rng);
                continue;
            }
            store.remove(x, y);
            store.insert(u, x);
            store.insert(v, y);
            break;
        }
    }
    Some(store.to_graph())
}

/// One degree-preserving swap (a,b) + (c,d) -> (a,d) + (c,b) between two
/// placed edges, applied only if the graph stays simple.
fn shake<R: Rng>(store: &mut EdgeStore, rng: &mut R) {
    if store.edge_count() < 2 {
        return;
    }
    let (a, b) = store.random_edge(rng);
    let (c, d) = store.random_edge(rng);
    let (c, d) = if rng.gen() { (c, d) } else { (d, c) };
    if a == d || c == b || store.has_edge(a, d) || store.has_edge(c, b) {
        return;
    }
    store.remove(a, b);
    store.remove(c, d);
    store.insert(a, d);
    store.insert(c, b);
}

fn truncated_powerlaw(x_min: f64, k_max: usize, gamma: f64) -> Vec<(usize, f64)> {
    let lo = x_min.floor() as usize;
    let frac = x_min - lo as f64;
    (lo.max(1)..=k_max)
        .map(|k| {
            let mut w = (k as f64).powf(-gamma);
            if k == lo {
                w *= 1.0 - frac;
            }
            (k, w)
        })
        .filter(|&(_, w)| w > 0.0)
        .collect()
}

fn mean_of(dist: &[(usize, f64)]) -> f64 {
    let z: f64 = dist.iter().map(|d| d.1).sum();
    dist.iter().map(|&(k, w)| k as f64 * w).sum::<f64>() / z
}

/// Discrete power law `P(k) ∝ k^-γ` on `[k_min, k_max]`, with the lower
/// cutoff solved so the mean equals `k_avg`. The cutoff is real-valued: the
/// weight of `⌊k_min⌋` is scaled by `1 − frac(k_min)`, which makes the mean a
/// continuous increasing function of `k_min`. Returns the support with
/// unnormalized weights and the solved cutoff.
pub(crate) fn solve_powerlaw(k_avg: f64, k_max: usize, gamma: f64) -> Result<(Vec<(usize, f64)>, f64)> {
    if gamma <= 1.0 {
        return Err(Error::arg(format!("exponent {gamma} must exceed 1")));
    }
    if k_max == 0 {
        return Err(Error::arg("maximum value must be positive"));
    }
    let lo_mean = mean_of(&truncated_powerlaw(1.0, k_max, gamma));
    if k_avg < lo_mean - 1e-9 || k_avg > k_max as f64 {
        return Err(Error::arg(format!(
            "no lower cutoff in [1, {k_max}] gives mean {k_avg} (reachable range [{lo_mean:.3}, {k_max}])"
        )));
    }
    let (mut lo, mut hi) = (1.0f64, k_max as f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mean_of(&truncated_powerlaw(mid, k_max, gamma)) < k_avg {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    Ok((truncated_powerlaw(x, k_max, gamma), x))
}

pub(crate) fn sample_from<R: Rng>(dist: &[(usize, f64)], count: usize, rng: &mut R) -> Vec<usize> {
    let mut cdf = Vec::with_capacity(dist.len());
    let mut acc = 0.0;
    for &(_, w) in dist {
        acc += w;
        cdf.push(acc);
    }
    (0..count)
        .map(|_| {
            let x = rng.gen::<f64>() * acc;
            let i = cdf.partition_point(|&c| c <= x).min(dist.len() - 1);
            dist[i].0
        })
        .collect()
}

/// `n` samples from a power law with mean `k_avg`, maximum `k_max` and
/// exponent `gamma`; one entry is resampled until the sum is even.
pub fn powerlaw_degree_sequence(
    n: usize,
    k_avg: f64,
    k_max: usize,
    gamma: f64,
    stream: RngStream,
) -> Result<Vec<usize>> {
    if n > 0 && k_max > n - 1 {
        return Err(Error::arg(format!("maximum degree {k_max} exceeds n - 1 = {}", n - 1)));
    }
    let (dist, _) = solve_powerlaw(k_avg, k_max, gamma)?;
    let mut rng = stream.rng();
    let mut seq = sample_from(&dist, n, &mut rng);
    if seq.iter().sum::<usize>() % 2 == 1 {
        if dist.iter().all(|&(k, _)| k % 2 == dist[0].0 % 2) {
            return Err(Error::arg("cannot reach an even degree sum: support has a single parity"));
        }
        let i = rng.gen_range(0..n);
        let old = seq[i];
        loop {
            let k = sample_from(&dist, 1, &mut rng)[0];
            if (k + old) % 2 == 1 {
                seq[i] = k;
                break;
            }
        }
    }
    Ok(seq)
}
