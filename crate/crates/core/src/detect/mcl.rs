use super::{check_input, DetectorParams};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;

/// Sparse column-stochastic matrix: `cols[j]` lists `(row, value)` by row.
type Columns = Vec<Vec<(usize, f64)>>;

/// Markov Cluster algorithm: alternate expansion (squaring the transfer
/// matrix) and inflation (entrywise power, column renormalisation, pruning)
/// until no entry moves by more than ε. Communities are the connected
/// components of the limit matrix's support.
pub fn detect_mcl(g: &Graph, params: &DetectorParams) -> Result<Partition> {
    check_input(g, params)?;
    let n = g.node_count();
    let mut m: Columns = (0..n)
        .map(|j| {
            let mut col: Vec<(usize, f64)> = g.neighbors(j).iter().map(|&i| (i, 1.0)).collect();
            if params.mcl_self_loop > 0.0 {
                col.push((j, params.mcl_self_loop));
                col.sort_by_key(|e| e.0);
            }
            normalize(&mut col);
            col
        })
        .collect();
    let mut scratch = vec![0.0; n];
    for _ in 0..params.mcl_max_iterations {
        let mut next = expand(&m, &mut scratch);
        for col in &mut next {
            inflate(col, params.mcl_inflation, params.mcl_prune);
        }
        let change = max_difference(&m, &next);
        m = next;
        if change < params.mcl_epsilon {
            return Ok(support_components(&m));
        }
    }
    Err(Error::Detector(format!(
        "mcl: no convergence within {} iterations",
        params.mcl_max_iterations
    )))
}

fn normalize(col: &mut [(usize, f64)]) {
    let s: f64 = col.iter().map(|e| e.1).sum();
    if s > 0.0 {
        col.iter_mut().for_each(|e| e.1 /= s);
    }
}

/// M·M, column by column.
fn expand(m: &Columns, acc: &mut [f64]) -> Columns {
    let mut touched = Vec::new();
    m.iter()
        .map(|col| {
            for &(k, a) in col {
                for &(i, b) in &m[k] {
                    if acc[i] == 0.0 {
                        touched.push(i);
                    }
                    acc[i] += a * b;
                }
            }
            touched.sort_unstable();
            let out: Vec<(usize, f64)> = touched.iter().map(|&i| (i, acc[i])).collect();
            for i in touched.drain(..) {
                acc[i] = 0.0;
            }
            out
        })
        .collect()
}

/// Raise entries to the power `r`, renormalise, drop entries below `prune`
/// and renormalise again. Values are scaled by the column maximum first so
/// large exponents cannot underflow the dominant entry.
pub(crate) fn inflate(col: &mut Vec<(usize, f64)>, r: f64, prune: f64) {
    let max = col.iter().map(|e| e.1).fold(0.0, f64::max);
    if max <= 0.0 {
        col.clear();
        return;
    }
    col.iter_mut().for_each(|e| e.1 = (e.1 / max).powf(r));
    normalize(col);
    col.retain(|e| e.1 >= prune);
    normalize(col);
}

fn max_difference(a: &Columns, b: &Columns) -> f64 {
    let mut worst = 0.0f64;
    for (ca, cb) in a.iter().zip(b) {
        let (mut i, mut j) = (0, 0);
        while i < ca.len() || j < cb.len() {
            let d = match (ca.get(i), cb.get(j)) {
                (Some(x), Some(y)) if x.0 == y.0 => {
                    i += 1;
                    j += 1;
                    x.1 - y.1
                }
                (Some(x), Some(y)) if x.0 < y.0 => {
                    i += 1;
                    x.1
                }
                (Some(x), None) => {
                    i += 1;
                    x.1
                }
                (_, Some(y)) => {
                    j += 1;
                    y.1
                }
                (None, None) => unreachable!(),
            };
            worst = worst.max(d.abs());
        }
    }
    worst
}

fn support_components(m: &Columns) -> Partition {
    let n = m.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (j, col) in m.iter().enumerate() {
        for &(i, _) in col {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let labels: Vec<usize> = (0..n).map(|v| find(&mut parent, v)).collect();
    Partition::from_labels(&labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn shared_fixtures() {
        let params = DetectorParams::default();
        for g in [two_triangles(), two_triangle_bridge()] {
            let p = detect_mcl(&g, &params).unwrap();
            assert_eq!(p.canonical(), vec![vec![0, 1, 2], vec![3, 4, 5]]);
        }
    }

    #[test]
    fn huge_inflation_keeps_only_the_argmax() {
        let mut col = vec![(0, 0.2), (3, 0.5), (7, 0.3)];
        inflate(&mut col, 1e4, 1e-5);
        assert_eq!(col, vec![(3, 1.0)]);
    }

    #[test]
    fn inflation_is_column_stochastic() {
        let mut col = vec![(0, 0.1), (1, 0.6), (2, 0.3)];
        inflate(&mut col, 2.0, 1e-5);
        let s: f64 = col.iter().map(|e| e.1).sum();
        assert!((s - 1.0).abs() < 1e-12);
        assert!(col[1].1 > 0.6);
    }

    #[test]
    fn edgeless_graph_gives_singletons() {
        let p = detect_mcl(&Graph::empty(5), &DetectorParams::default()).unwrap();
        assert_eq!(p.community_count(), 5);
    }

    #[test]
    fn iteration_cap_is_a_detector_error() {
        let params = DetectorParams {
            mcl_max_iterations: 1,
            ..Default::default()
        };
        assert!(matches!(detect_mcl(&cycle(12), &params), Err(Error::Detector(_))));
    }
}
