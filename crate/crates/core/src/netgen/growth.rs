use rand::Rng;

use super::weighted_index;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::RngStream;

fn check_growth(n: usize, m: usize) -> Result<()> {
    if m == 0 || n <= m {
        return Err(Error::arg(format!(
            "growth models need n > m >= 1 (got n = {n}, m = {m})"
        )));
    }
    Ok(())
}

fn seed_clique(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut adjacency = vec![Vec::new(); n];
    for (u, list) in adjacency.iter_mut().enumerate().take(m + 1) {
        list.extend((0..=m).filter(|&v| v != u));
    }
    adjacency
}

/// Barabási–Albert growth from a clique on `m + 1` nodes; each newcomer links
/// to `m` distinct existing nodes chosen with probability proportional to
/// degree.
pub fn barabasi_albert(n: usize, m: usize, stream: RngStream) -> Result<Graph> {
    check_growth(n, m)?;
    let mut rng = stream.rng();
    let mut adjacency = seed_clique(n, m);
    // Each node appears once per incident edge end.
    let mut ends: Vec<usize> = Vec::with_capacity(2 * (m * (m + 1) / 2 + m * n));
    for (u, list) in adjacency.iter().enumerate() {
        ends.extend(std::iter::repeat_n(u, list.len()));
    }
    let mut chosen = Vec::with_capacity(m);
    for v in m + 1..n {
        chosen.clear();
        while chosen.len() < m {
            let t = ends[rng.gen_range(0..ends.len())];
            if !chosen.contains(&t) {
                chosen.push(t);
            }
        }
        for &t in &chosen {
            adjacency[v].push(t);
            adjacency[t].push(v);
            ends.push(t);
            ends.push(v);
        }
    }
    Ok(Graph::from_adjacency_unchecked(adjacency))
}

/// Prisoner's-dilemma payoff and selection-pressure settings of the
/// evolutionary attachment model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvParams {
    /// Temptation payoff for unilateral defection, `b > 1`.
    pub b: f64,
    /// Weight of fitness in the attachment kernel, in `[0, 1]`.
    pub epsilon: f64,
}

impl Default for EvParams {
    fn default() -> Self {
        Self { b: 1.5, epsilon: 0.99 }
    }
}

/// Growth with evolutionary preferential attachment.
///
/// Before each newcomer arrives every node plays one prisoner's-dilemma round
/// against all its neighbors (payoffs: mutual cooperation 1, unilateral
/// defection `b`, otherwise 0). Its fitness is the round's total payoff. Each
/// node then compares itself with one random neighbor and, if the neighbor
/// scored more, copies the neighbor's strategy with probability
/// `(f_nb − f_self) / (b · max(k_self, k_nb))`. The newcomer links to `m`
/// distinct nodes drawn with probability `(1 − ε)/N + ε f_v / Σf`.
pub fn evolutionary_pa(n: usize, m: usize, params: EvParams, stream: RngStream) -> Result<Graph> {
    check_growth(n, m)?;
    let EvParams { b, epsilon } = params;
    if !(b > 1.0) {
        return Err(Error::arg(format!("temptation payoff b = {b} must exceed 1")));
    }
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::arg(format!("selection pressure {epsilon} outside [0, 1]")));
    }
    let mut rng = stream.rng();
    let mut adjacency = seed_clique(n, m);
    // true = cooperate
    let mut strategy: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
    let mut fitness = vec![0.0f64; n];
    let mut next_strategy = strategy.clone();
    let mut weights = vec![0.0f64; n];
    let mut chosen = Vec::with_capacity(m);
    for v in m + 1..n {
        let current = v;
        for u in 0..current {
            let mine = strategy[u];
            fitness[u] = adjacency[u]
                .iter()
                .map(|&w| match (mine, strategy[w]) {
                    (true, true) => 1.0,
                    (false, true) => b,
                    _ => 0.0,
                })
                .sum();
        }
        for u in 0..current {
            next_strategy[u] = strategy[u];
            let nb = &adjacency[u];
            if nb.is_empty() {
                continue;
            }
            let w = nb[rng.gen_range(0..nb.len())];
            let diff = fitness[w] - fitness[u];
            if diff > 0.0 {
                let scale = b * nb.len().max(adjacency[w].len()) as f64;
                if rng.gen::<f64>() < (diff / scale).min(1.0) {
                    next_strategy[u] = strategy[w];
                }
            }
        }
        strategy[..current].copy_from_slice(&next_strategy[..current]);

        let total_fitness: f64 = fitness[..current].iter().sum();
        let uniform = 1.0 / current as f64;
        for u in 0..current {
            weights[u] = if total_fitness > 0.0 {
                (1.0 - epsilon) * uniform + epsilon * fitness[u] / total_fitness
            } else {
                uniform
            };
        }
        chosen.clear();
        for _ in 0..m {
            let total: f64 = weights[..current].iter().sum();
            let t = if total > 0.0 {
                weighted_index(&weights[..current], total, &mut rng)
            } else {
                // Fitness mass exhausted; fall back to uniform over the rest.
                let rest: Vec<usize> = (0..current).filter(|u| !chosen.contains(u)).collect();
                rest[rng.gen_range(0..rest.len())]
            };
            chosen.push(t);
            weights[t] = 0.0;
        }
        for &t in &chosen {
            adjacency[v].push(t);
            adjacency[t].push(v);
        }
    }
    Ok(Graph::from_adjacency_unchecked(adjacency))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ba_three_nodes() {
        for seed in 0..10 {
            let g = barabasi_albert(3, 1, RngStream::new(seed, 0)).unwrap();
            assert_eq!(g.edge_count(), 2);
            assert!(g.has_edge(0, 1));
            assert_eq!(g.deg(2), 1);
        }
    }

    #[test]
    fn ba_edge_count() {
        let g = barabasi_albert(100, 3, RngStream::new(5, 0)).unwrap();
        assert_eq!(g.edge_count(), 3 * 4 / 2 + 3 * (100 - 3 - 1));
        g.validate().unwrap();
        assert!(barabasi_albert(3, 3, RngStream::default()).is_err());
        assert!(barabasi_albert(3, 0, RngStream::default()).is_err());
    }

    #[test]
    fn ev_edge_count_and_validity() {
        for eps in [0.0, 0.5, 1.0] {
            let g = evolutionary_pa(200, 4, EvParams { b: 1.5, epsilon: eps }, RngStream::new(6, 0)).unwrap();
            g.validate().unwrap();
            assert_eq!(g.edge_count(), 10 + 4 * (200 - 5));
        }
        let bad = EvParams { b: 1.0, epsilon: 0.5 };
        assert!(evolutionary_pa(20, 2, bad, RngStream::default()).is_err());
        let bad = EvParams { b: 2.0, epsilon: 1.5 };
        assert!(evolutionary_pa(20, 2, bad, RngStream::default()).is_err());
    }
}
