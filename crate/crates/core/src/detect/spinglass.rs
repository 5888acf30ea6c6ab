use rand::seq::SliceRandom;
use rand::Rng;

use super::weighted::compact;
use super::{check_input, DetectorParams};
use crate::error::Result;
use crate::graph::Graph;
use crate::partition::Partition;
use crate::rng::RngStream;

/// Upper bound on temperature steps, reached only if the acceptance ratio
/// never falls below the stopping threshold.
const MAX_TEMPERATURES: usize = 5000;

/// Potts-model state with Hamiltonian H = −m·Q (Reichardt–Bornholdt with
/// γ = 1 and the configuration-model null), so ground states maximise
/// modularity.
pub(crate) struct Potts<'g> {
    g: &'g Graph,
    pub spin: Vec<usize>,
    volume: Vec<f64>,
    two_m: f64,
    count: Vec<usize>,
    touched: Vec<usize>,
}

impl<'g> Potts<'g> {
    pub fn new(g: &'g Graph, spin: Vec<usize>, q: usize) -> Self {
        let mut volume = vec![0.0; q];
        for (v, &s) in spin.iter().enumerate() {
            volume[s] += g.deg(v) as f64;
        }
        Self {
            g,
            spin,
            volume,
            two_m: 2.0 * g.edge_count() as f64,
            count: vec![0; q],
            touched: Vec::new(),
        }
    }

    fn links_to(&self, v: usize, s: usize) -> f64 {
        self.g.neighbors(v).iter().filter(|&&w| self.spin[w] == s).count() as f64
    }

    /// Energy change of moving `v` to spin `b`.
    pub fn delta(&self, v: usize, b: usize) -> f64 {
        let a = self.spin[v];
        if a == b {
            return 0.0;
        }
        let k = self.g.deg(v) as f64;
        let gain = self.links_to(v, b) - self.links_to(v, a)
            - k * (self.volume[b] - self.volume[a] + k) / self.two_m;
        -gain
    }

    pub fn apply(&mut self, v: usize, b: usize) {
        let k = self.g.deg(v) as f64;
        self.volume[self.spin[v]] -= k;
        self.volume[b] += k;
        self.spin[v] = b;
    }

    /// Move `v` to the neighbouring spin with the most negative energy
    /// change, if any is negative. Returns whether it moved.
    pub fn greedy_step(&mut self, v: usize) -> bool {
        let a = self.spin[v];
        let k = self.g.deg(v) as f64;
        for &w in self.g.neighbors(v) {
            let s = self.spin[w];
            if self.count[s] == 0 {
                self.touched.push(s);
            }
            self.count[s] += 1;
        }
        let own = self.count[a] as f64;
        let mut best = (a, -1e-12);
        for &s in &self.touched {
            if s == a {
                continue;
            }
            let d = -(self.count[s] as f64 - own
                - k * (self.volume[s] - self.volume[a] + k) / self.two_m);
            if d < best.1 || (d == best.1 && s < best.0) {
                best = (s, d);
            }
        }
        for s in self.touched.drain(..) {
            self.count[s] = 0;
        }
        if best.0 != a {
            self.apply(v, best.0);
            true
        } else {
            false
        }
    }
}

/// Spinglass detection: simulated annealing of a q-state Potts model whose
/// ground state maximises modularity.
///
/// The start temperature is calibrated so that the initial acceptance ratio
/// matches `spinglass_start_acceptance`; the temperature then decreases
/// geometrically, with `spinglass_sweeps` Metropolis sweeps per step, until
/// fewer than `spinglass_stop_acceptance` of the proposals change the energy.
/// A final zero-temperature descent settles the configuration. Isolated
/// nodes, whose spin does not affect the energy, become singletons.
pub fn detect_spinglass(g: &Graph, params: &DetectorParams, stream: RngStream) -> Result<Partition> {
    check_input(g, params)?;
    let n = g.node_count();
    let active: Vec<usize> = (0..n).filter(|&v| g.deg(v) > 0).collect();
    if active.is_empty() {
        return Ok(Partition::singletons(n));
    }
    let q = params.spinglass_spins;
    let mut rng = stream.rng();
    let spin: Vec<usize> = (0..n).map(|_| rng.gen_range(0..q)).collect();
    let mut potts = Potts::new(g, spin, q);

    let propose = |potts: &Potts, rng: &mut rand_chacha::ChaCha8Rng| {
        let v = active[rng.gen_range(0..active.len())];
        let mut b = rng.gen_range(0..q - 1);
        if b >= potts.spin[v] {
            b += 1;
        }
        (v, b, potts.delta(v, b))
    };

    let samples: Vec<f64> = (0..active.len().max(200))
        .map(|_| propose(&potts, &mut rng).2)
        .collect();
    let mut temperature = calibrate(&samples, params.spinglass_start_acceptance);
    let proposals = params.spinglass_sweeps * active.len();
    for _ in 0..MAX_TEMPERATURES {
        let mut accepted = 0usize;
        for _ in 0..proposals {
            let (v, b, d) = propose(&potts, &mut rng);
            if d <= 0.0 || rng.gen::<f64>() < (-d / temperature).exp() {
                potts.apply(v, b);
                if d.abs() > 1e-12 {
                    accepted += 1;
                }
            }
        }
        if (accepted as f64) < params.spinglass_stop_acceptance * proposals as f64 {
            break;
        }
        temperature *= params.spinglass_cooling;
    }

    let mut order = active.clone();
    for _ in 0..1000 {
        order.shuffle(&mut rng);
        let mut moved = false;
        for &v in &order {
            moved |= potts.greedy_step(v);
        }
        if !moved {
            break;
        }
    }

    let mut labels: Vec<usize> = potts.spin;
    for (v, label) in labels.iter_mut().enumerate() {
        if g.deg(v) == 0 {
            *label = q + v;
        }
    }
    compact(&mut labels);
    Ok(Partition::from_labels(&labels))
}

/// Temperature at which the mean Metropolis acceptance of the sampled uphill
/// moves equals `target`. Downhill moves are always accepted and carry no
/// information about the temperature scale, so they are left out.
fn calibrate(deltas: &[f64], target: f64) -> f64 {
    let uphill: Vec<f64> = deltas.iter().copied().filter(|&d| d > 1e-12).collect();
    if uphill.is_empty() {
        return 1.0;
    }
    let acceptance = |t: f64| uphill.iter().map(|&d| (-d / t).exp()).sum::<f64>() / uphill.len() as f64;
    let (mut lo, mut hi) = (1e-9f64, 1e9f64);
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if acceptance(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}
