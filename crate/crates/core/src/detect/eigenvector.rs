use super::{check_input, DetectorParams};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;

/// Leading-eigenvector detection (Newman): recursively bisect by the sign of
/// the leading eigenvector of the generalised modularity matrix of each
/// group, stopping a branch when the leading eigenvalue is not positive or
/// the bisection does not increase modularity.
///
/// Eigenvectors come from power iteration on B + sI, where s is a
/// Gershgorin bound on the spectrum of B, started from a fixed
/// pseudo-random vector.
pub fn detect_leading_eigenvector(g: &Graph, params: &DetectorParams) -> Result<Partition> {
    check_input(g, params)?;
    let n = g.node_count();
    if g.edge_count() == 0 {
        return Ok(Partition::one_block(n));
    }
    let mut labels = vec![0usize; n];
    let mut next_label = 1;
    let mut pending = vec![(0..n).collect::<Vec<usize>>()];
    while let Some(group) = pending.pop() {
        if let Some((plus, minus)) = bisect(g, &group, params)? {
            for &v in &minus {
                labels[v] = next_label;
            }
            next_label += 1;
            pending.push(plus);
            pending.push(minus);
        }
    }
    Ok(Partition::from_labels(&labels))
}

/// Generalised modularity matrix of a node group, applied implicitly.
struct GroupOperator<'g> {
    g: &'g Graph,
    group: &'g [usize],
    /// Position of each graph node inside the group, `usize::MAX` if absent.
    index: Vec<usize>,
    degree: Vec<f64>,
    /// Diagonal correction: k_i^(g) − k_i·K_g/2m.
    correction: Vec<f64>,
    two_m: f64,
}

impl<'g> GroupOperator<'g> {
    fn new(g: &'g Graph, group: &'g [usize]) -> Self {
        let mut index = vec![usize::MAX; g.node_count()];
        for (i, &v) in group.iter().enumerate() {
            index[v] = i;
        }
        let two_m = 2.0 * g.edge_count() as f64;
        let degree: Vec<f64> = group.iter().map(|&v| g.deg(v) as f64).collect();
        let volume: f64 = degree.iter().sum();
        let correction = group
            .iter()
            .zip(&degree)
            .map(|(&v, &k)| {
                let inside = g.neighbors(v).iter().filter(|&&w| index[w] != usize::MAX).count();
                inside as f64 - k * volume / two_m
            })
            .collect();
        Self {
            g,
            group,
            index,
            degree,
            correction,
            two_m,
        }
    }

    fn len(&self) -> usize {
        self.group.len()
    }

    /// y = (B^(g) + shift·I) x
    fn apply(&self, x: &[f64], shift: f64, y: &mut [f64]) {
        let kx: f64 = self.degree.iter().zip(x).map(|(k, x)| k * x).sum::<f64>() / self.two_m;
        for (i, &v) in self.group.iter().enumerate() {
            let mut s = 0.0;
            for &w in self.g.neighbors(v) {
                let j = self.index[w];
                if j != usize::MAX {
                    s += x[j];
                }
            }
            y[i] = s - self.degree[i] * kx - self.correction[i] * x[i] + shift * x[i];
        }
    }

    fn spectral_bound(&self) -> f64 {
        let volume: f64 = self.degree.iter().sum();
        self.degree
            .iter()
            .zip(&self.correction)
            .map(|(&k, &c)| {
                let inside = c + k * volume / self.two_m;
                2.0 * (inside + k * volume / self.two_m)
            })
            .fold(0.0, f64::max)
    }
}

fn start_vector(group: &[usize]) -> Vec<f64> {
    group
        .iter()
        .map(|&v| {
            let mut h = (v as u64).wrapping_add(0x9E37_79B9_7F4A_7C15);
            h = (h ^ (h >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
            h = (h ^ (h >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
            h ^= h >> 31;
            1.0 + (h >> 11) as f64 / (1u64 << 53) as f64
        })
        .collect()
}

fn normalize(x: &mut [f64]) -> f64 {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
    norm
}

/// Split `group` in two, or `None` if it is indivisible.
fn bisect(g: &Graph, group: &[usize], params: &DetectorParams) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
    if group.len() < 2 {
        return Ok(None);
    }
    let op = GroupOperator::new(g, group);
    let shift = op.spectral_bound();
    if shift == 0.0 {
        return Ok(None);
    }
    let (vector, value) = leading_eigenpair(&op, shift, params)?;
    if value <= params.eigen_tolerance {
        return Ok(None);
    }
    let sign: Vec<f64> = vector.iter().map(|&x| if x >= 0.0 { 1.0 } else { -1.0 }).collect();
    let mut bs = vec![0.0; op.len()];
    op.apply(&sign, 0.0, &mut bs);
    let gain = sign.iter().zip(&bs).map(|(s, b)| s * b).sum::<f64>() / (2.0 * op.two_m);
    if gain <= 1e-12 {
        return Ok(None);
    }
    let (mut plus, mut minus) = (Vec::new(), Vec::new());
    for (&v, &s) in group.iter().zip(&sign) {
        if s > 0.0 {
            plus.push(v);
        } else {
            minus.push(v);
        }
    }
    if plus.is_empty() || minus.is_empty() {
        return Ok(None);
    }
    Ok(Some((plus, minus)))
}

/// Power iteration on B + shift·I. Returns the unit eigenvector and the
/// eigenvalue of B.
///
/// Iteration stops once the Rayleigh quotient moves by less than the
/// tolerance (relative to the shift) or the vector itself stops moving.
/// Stopping on the eigenvalue keeps nearly degenerate leading eigenvalues
/// from stalling the iteration; any vector of such a cluster is an equally
/// good bisection direction.
fn leading_eigenpair(op: &GroupOperator, shift: f64, params: &DetectorParams) -> Result<(Vec<f64>, f64)> {
    let mut x = start_vector(op.group);
    normalize(&mut x);
    let mut y = vec![0.0; op.len()];
    let mut previous = f64::NAN;
    for _ in 0..params.eigen_max_iterations {
        op.apply(&x, shift, &mut y);
        let rayleigh: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        normalize(&mut y);
        let change = x.iter().zip(&y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        std::mem::swap(&mut x, &mut y);
        if change < params.eigen_tolerance
            || (rayleigh - previous).abs() < params.eigen_tolerance * shift
        {
            return Ok((x, rayleigh - shift));
        }
        previous = rayleigh;
    }
    Err(Error::Detector(format!(
        "leading eigenvector: power iteration did not converge within {} iterations on a subgraph of {} nodes",
        params.eigen_max_iterations,
        op.len()
    )))
}
