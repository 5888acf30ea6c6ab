//! LFR benchmark with a choice of seed network.
//!
//! A scale-free seed graph is built first (configuration model over a
//! power-law degree sequence, Barabási–Albert growth, or evolutionary
//! preferential attachment). Community sizes are drawn from a power law, nodes
//! are placed so their internal degree fits, and degree-preserving double-edge
//! swaps then steer every node's internal degree towards `⌊(1 − μ)k⌉`.

use rand::seq::SliceRandom;
use rand::Rng;

use super::edges::EdgeStore;
use super::growth::{barabasi_albert, evolutionary_pa, EvParams};
use super::random::{configuration_model, powerlaw_degree_sequence, sample_from};
use super::{mixing_coefficient, PlantedNetwork};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;
use crate::rng::RngStream;

/// Model used to build the degree structure before communities are imposed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SeedModel {
    Cm,
    Ba,
    Ev,
}

impl SeedModel {
    pub const ALL: [SeedModel; 3] = [SeedModel::Cm, SeedModel::Ba, SeedModel::Ev];

    pub fn name(self) -> &'static str {
        match self {
            SeedModel::Cm => "cm",
            SeedModel::Ba => "ba",
            SeedModel::Ev => "ev",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cm" => Ok(SeedModel::Cm),
            "ba" => Ok(SeedModel::Ba),
            "ev" => Ok(SeedModel::Ev),
            _ => Err(Error::arg(format!("unknown seed model {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LfrParams {
    pub n: usize,
    pub k_avg: f64,
    /// Degree cap for the configuration-model seed. Growth seeds have no cap.
    pub k_max: usize,
    pub gamma: f64,
    pub beta: f64,
    pub c_min: usize,
    pub c_max: usize,
    pub mu: f64,
    pub seed_model: SeedModel,
    pub ev: EvParams,
    pub mu_tolerance: f64,
}

impl Default for LfrParams {
    fn default() -> Self {
        Self {
            n: 1000,
            k_avg: 20.0,
            k_max: 50,
            gamma: 3.0,
            beta: 2.0,
            c_min: 10,
            c_max: 50,
            mu: 0.2,
            seed_model: SeedModel::Cm,
            ev: EvParams::default(),
            mu_tolerance: 0.02,
        }
    }
}

impl LfrParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::arg(msg));
        if !(0.0..=1.0).contains(&self.mu) {
            return bad(format!("mu = {} outside [0, 1]", self.mu));
        }
        if !(self.gamma > 1.0) || !(self.beta > 1.0) {
            return bad(format!("exponents must exceed 1 (gamma = {}, beta = {})", self.gamma, self.beta));
        }
        if self.n < 2 {
            return bad(format!("n = {} too small", self.n));
        }
        if !(self.k_avg >= 1.0) || self.k_avg > self.k_max as f64 {
            return bad(format!("need 1 <= k_avg <= k_max (k_avg = {}, k_max = {})", self.k_avg, self.k_max));
        }
        if self.k_max >= self.n {
            return bad(format!("k_max = {} must be below n = {}", self.k_max, self.n));
        }
        if self.c_min == 0 || self.c_min > self.c_max || self.c_max > self.n {
            return bad(format!(
                "need 1 <= c_min <= c_max <= n (c_min = {}, c_max = {})",
                self.c_min, self.c_max
            ));
        }
        if !(self.mu_tolerance >= 0.0) {
            return bad(format!("mu_tolerance = {} must be non-negative", self.mu_tolerance));
        }
        Ok(())
    }
}

/// Swap attempts allowed per edge while steering the mixing.
const REWIRE_ATTEMPTS_PER_EDGE: usize = 50;

pub fn lfr(params: &LfrParams, stream: RngStream) -> Result<PlantedNetwork> {
    params.validate()?;
    let seed_graph = build_seed(params, stream.substream(0))?;
    plant(params, &seed_graph, stream.substream(1))
}

fn build_seed(p: &LfrParams, stream: RngStream) -> Result<Graph> {
    let m = ((p.k_avg / 2.0).round() as usize).max(1);
    match p.seed_model {
        SeedModel::Cm => {
            let degrees = powerlaw_degree_sequence(p.n, p.k_avg, p.k_max, p.gamma, stream.substream(0))?;
            configuration_model(&degrees, stream.substream(1))
        }
        SeedModel::Ba => barabasi_albert(p.n, m, stream),
        SeedModel::Ev => evolutionary_pa(p.n, m, p.ev, stream),
    }
}

fn internal_target(mu: f64, k: usize) -> usize {
    ((1.0 - mu) * k as f64).round_ties_even() as usize
}

/// Power-law community sizes on `[c_min, c_max]` summing to `n`.
fn draw_sizes<R: Rng>(n: usize, c_min: usize, c_max: usize, beta: f64, rng: &mut R) -> Result<Vec<usize>> {
    let dist: Vec<(usize, f64)> = (c_min..=c_max).map(|s| (s, (s as f64).powf(-beta))).collect();
    let mut sizes = Vec::new();
    let mut sum = 0;
    while sum < n {
        let s = sample_from(&dist, 1, rng)[0];
        sizes.push(s);
        sum += s;
    }
    let slack: usize = sizes.iter().map(|s| s - c_min).sum();
    if sum - n > slack {
        sum -= sizes.pop().unwrap();
    }
    while sum > n {
        let i = rng.gen_range(0..sizes.len());
        if sizes[i] > c_min {
            sizes[i] -= 1;
            sum -= 1;
        }
    }
    if sum < n {
        let room: usize = sizes.iter().map(|s| c_max - s).sum();
        if room < n - sum {
            return Err(Error::arg(format!(
                "community sizes in [{c_min}, {c_max}] cannot sum to {n}"
            )));
        }
        while sum < n {
            let i = rng.gen_range(0..sizes.len());
            if sizes[i] < c_max {
                sizes[i] += 1;
                sum += 1;
            }
        }
    }
    Ok(sizes)
}

/// Places nodes, largest internal degree first, into communities with room
/// and more than `target` members, chosen with probability proportional to
/// free slots. A node that fits nowhere goes to the largest community with
/// room and has its target clipped to that community's size minus one.
fn assign<R: Rng>(targets: &mut [usize], sizes: &[usize], rng: &mut R) -> (Vec<usize>, usize) {
    let n = targets.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    order.sort_by(|&a, &b| targets[b].cmp(&targets[a]));
    let mut filled = vec![0usize; sizes.len()];
    let mut label = vec![0usize; n];
    let mut weights = vec![0.0; sizes.len()];
    let mut clipped = 0;
    for v in order {
        let mut total = 0.0;
        for (c, w) in weights.iter_mut().enumerate() {
            *w = if sizes[c] > targets[v] && filled[c] < sizes[c] {
                (sizes[c] - filled[c]) as f64
            } else {
                0.0
            };
            total += *w;
        }
        let c = if total > 0.0 {
            super::weighted_index(&weights, total, rng)
        } else {
            let c = (0..sizes.len())
                .filter(|&c| filled[c] < sizes[c])
                .max_by_key(|&c| (sizes[c], std::cmp::Reverse(c)))
                .expect("sizes sum to n");
            targets[v] = sizes[c] - 1;
            clipped += 1;
            c
        };
        filled[c] += 1;
        label[v] = c;
    }
    (label, clipped)
}

/// A community whose internal targets sum to an odd number must keep one
/// stub outside. Pairs such communities up and exchanges, between the two,
/// a node of odd target for one of even target (both still fitting), which
/// makes both sums even without changing any size.
fn balance_parity(label: &mut [usize], targets: &[usize], sizes: &[usize]) {
    let mut sums = vec![0usize; sizes.len()];
    for (v, &c) in label.iter().enumerate() {
        sums[c] += targets[v];
    }
    let odd: Vec<usize> = (0..sizes.len()).filter(|&c| sums[c] % 2 == 1).collect();
    let mut members = vec![Vec::new(); sizes.len()];
    for (v, &c) in label.iter().enumerate() {
        members[c].push(v);
    }
    for pair in odd.chunks_exact(2) {
        let (a, b) = (pair[0], pair[1]);
        let swap = members[a].iter().enumerate().find_map(|(i, &u)| {
            members[b]
                .iter()
                .position(|&w| targets[u] % 2 != targets[w] % 2 && targets[u] < sizes[b] && targets[w] < sizes[a])
                .map(|j| (i, j))
        });
        if let Some((i, j)) = swap {
            let (u, w) = (members[a][i], members[b][j]);
            label[u] = b;
            label[w] = a;
            members[a][i] = w;
            members[b][j] = u;
        }
    }
}

fn plant(p: &LfrParams, seed: &Graph, stream: RngStream) -> Result<PlantedNetwork> {
    let mut rng = stream.rng();
    let n = seed.node_count();
    let degrees = seed.degrees();
    let targets: Vec<usize> = degrees.iter().map(|&k| internal_target(p.mu, k)).collect();
    let k_min = degrees.iter().copied().min().unwrap_or(0);
    let c_min = p.c_min.max(k_min);
    if c_min > p.c_max {
        return Err(Error::arg(format!(
            "minimum degree {k_min} forces c_min above c_max = {}",
            p.c_max
        )));
    }
    let sizes = draw_sizes(n, c_min, p.c_max, p.beta, &mut rng)?;
    let mut targets = targets;
    let (mut label, clipped) = assign(&mut targets, &sizes, &mut rng);
    balance_parity(&mut label, &targets, &sizes);
    if clipped > 0 {
        log::debug!("lfr: clipped the internal degree of {clipped} nodes to fit community sizes");
    }
    let mut rewirer = Rewirer::new(seed, label, targets);
    rewirer.run(REWIRE_ATTEMPTS_PER_EDGE * seed.edge_count(), &mut rng);
    let graph = rewirer.store.to_graph();
    let planted = Partition::from_labels(&rewirer.comm);
    debug_assert!(planted.sizes().iter().all(|&s| s >= c_min && s <= p.c_max));
    let realized_mu = mixing_coefficient(&graph, &planted);
    if (realized_mu - p.mu).abs() > p.mu_tolerance {
        return Err(Error::Generation {
            msg: format!(
                "realized mixing {realized_mu:.4} misses target {} by more than {}",
                p.mu, p.mu_tolerance
            ),
            best_mu: Some(realized_mu),
        });
    }
    Ok(PlantedNetwork {
        graph,
        planted,
        realized_mu,
    })
}

/// See [`Rewirer::reconnect`].
#[derive(Clone, Copy)]
enum Link {
    Direct,
    Split(usize, usize),
    Shift { c: usize, d: usize, e: usize, f: usize },
}

struct Rewirer {
    store: EdgeStore,
    comm: Vec<usize>,
    members: Vec<Vec<usize>>,
    internal: Vec<usize>,
    target: Vec<usize>,
    /// Nodes whose internal degree differs from target, with positions.
    pending: Vec<usize>,
    slot: Vec<usize>,
}

impl Rewirer {
    fn new(g: &Graph, comm: Vec<usize>, target: Vec<usize>) -> Self {
        let n = g.node_count();
        let k = comm.iter().copied().max().map_or(0, |c| c + 1);
        let mut members = vec![Vec::new(); k];
        for (v, &c) in comm.iter().enumerate() {
            members[c].push(v);
        }
        let internal: Vec<usize> = (0..n)
            .map(|v| g.neighbors(v).iter().filter(|&&u| comm[u] == comm[v]).count())
            .collect();
        let mut r = Self {
            store: EdgeStore::from_graph(g),
            comm,
            members,
            internal,
            target,
            pending: Vec::new(),
            slot: vec![usize::MAX; n],
        };
        for v in 0..n {
            r.refresh(v);
        }
        r
    }

    fn refresh(&mut self, v: usize) {
        let off = self.internal[v] != self.target[v];
        let listed = self.slot[v] != usize::MAX;
        if off && !listed {
            self.slot[v] = self.pending.len();
            self.pending.push(v);
        } else if !off && listed {
            let i = self.slot[v];
            self.pending.swap_remove(i);
            if i < self.pending.len() {
                self.slot[self.pending[i]] = i;
            }
            self.slot[v] = usize::MAX;
        }
    }

    fn cost(&self, v: usize, internal: usize) -> usize {
        internal.abs_diff(self.target[v])
    }

    /// Change in total deviation if each listed node's internal degree moves
    /// by the paired amount.
    fn delta(&self, changes: &[(usize, isize)]) -> isize {
        changes
            .iter()
            .map(|&(v, d)| {
                let old = self.internal[v];
                let new = (old as isize + d) as usize;
                self.cost(v, new) as isize - self.cost(v, old) as isize
            })
            .sum()
    }

    fn accept(&self, delta: isize, allow_neutral: bool) -> bool {
        delta < 0 || (allow_neutral && delta == 0)
    }

    fn apply(&mut self, changes: &[(usize, isize)]) {
        for &(v, d) in changes {
            self.internal[v] = (self.internal[v] as isize + d) as usize;
            self.refresh(v);
        }
    }

    fn random_neighbor_where<R: Rng>(&self, v: usize, rng: &mut R, pred: impl Fn(usize) -> bool) -> Option<usize> {
        let picks: Vec<usize> = self.store.neighbors(v).iter().copied().filter(|&u| pred(u)).collect();
        picks.choose(rng).copied()
    }

    fn run<R: Rng>(&mut self, budget: usize, rng: &mut R) {
        for _ in 0..budget {
            if self.pending.is_empty() {
                return;
            }
            let v = self.pending[rng.gen_range(0..self.pending.len())];
            if self.internal[v] < self.target[v] {
                self.pull_in(v, rng);
            } else {
                self.push_out(v, rng);
            }
        }
    }

    /// (v,x) + (w,y) -> (v,w) + (x,y) with w in v's community and x, y outside.
    fn pull_in<R: Rng>(&mut self, v: usize, rng: &mut R) {
        let cv = self.comm[v];
        let Some(x) = self.random_neighbor_where(v, rng, |u| self.comm[u] != cv) else {
            return;
        };
        let needy: Vec<usize> = self.members[cv]
            .iter()
            .copied()
            .filter(|&u| u != v && self.internal[u] < self.target[u] && !self.store.has_edge(v, u))
            .collect();
        let (w, allow_neutral) = match needy.choose(rng) {
            Some(&w) => (w, false),
            None => {
                if self.pull_in_pair(v, x, rng) {
                    return;
                }
                let pool = &self.members[cv];
                (pool[rng.gen_range(0..pool.len())], true)
            }
        };
        if w == v || self.store.has_edge(v, w) {
            return;
        }
        let Some(y) = self.random_neighbor_where(w, rng, |u| self.comm[u] != cv) else {
            return;
        };
        let Some(link) = self.reconnect(x, y, rng) else {
            return;
        };
        let mut changes = vec![(v, 1), (w, 1)];
        self.link_changes(x, y, link, &mut changes);
        if self.accept(self.delta(&changes), allow_neutral) {
            self.store.remove(v, x);
            self.store.remove(w, y);
            self.store.insert(v, w);
            self.link(x, y, link);
            self.apply(&changes);
        }
    }

    /// How to join the stubs freed at x and y (outside the community being
    /// filled): directly when (x, y) is a new edge; when x and y share a
    /// community but are equal or already adjacent, by splitting an internal
    /// edge (c, d) of that community into (x, c) + (y, d); and when they are
    /// adjacent across communities, by splitting one internal edge on each
    /// side, (c, d) + (e, f) -> (x, c) + (y, e) + (d, f), which hands the
    /// crossing link on to d and f.
    fn reconnect<R: Rng>(&self, x: usize, y: usize, rng: &mut R) -> Option<Link> {
        if x != y && !self.store.has_edge(x, y) {
            return Some(Link::Direct);
        }
        let cx = self.comm[x];
        if self.comm[y] != cx {
            let (c, d) = self.split_for(x, rng)?;
            let (e, f) = self.split_for(y, rng)?;
            if self.store.has_edge(d, f) {
                return None;
            }
            return Some(Link::Shift { c, d, e, f });
        }
        let pool = &self.members[cx];
        let c = pool[rng.gen_range(0..pool.len())];
        if c == x || c == y || self.store.has_edge(x, c) {
            return None;
        }
        let d = self.random_neighbor_where(c, rng, |u| {
            self.comm[u] == cx && u != x && u != y && !self.store.has_edge(y, u)
        })?;
        Some(Link::Split(c, d))
    }

    fn link(&mut self, x: usize, y: usize, link: Link) {
        match link {
            Link::Direct => {
                self.store.insert(x, y);
            }
            Link::Split(c, d) => {
                self.store.remove(c, d);
                self.store.insert(x, c);
                self.store.insert(y, d);
            }
            Link::Shift { c, d, e, f } => {
                self.store.remove(c, d);
                self.store.remove(e, f);
                self.store.insert(x, c);
                self.store.insert(y, e);
                self.store.insert(d, f);
            }
        }
    }

    /// Internal-degree changes at the far ends when x and y are joined by `link`.
    fn link_changes(&self, x: usize, y: usize, link: Link, changes: &mut Vec<(usize, isize)>) {
        match link {
            Link::Shift { d, f, .. } => changes.extend([(x, 1), (y, 1), (d, -1), (f, -1)]),
            _ if self.comm[x] == self.comm[y] => changes.extend([(x, 1), (y, 1)]),
            _ => {}
        }
    }

    /// An internal edge (c, d) of x's community with c not yet adjacent to x.
    fn split_for<R: Rng>(&self, x: usize, rng: &mut R) -> Option<(usize, usize)> {
        let cx = self.comm[x];
        let pool = &self.members[cx];
        let c = pool[rng.gen_range(0..pool.len())];
        if c == x || self.store.has_edge(x, c) {
            return None;
        }
        let d = self.random_neighbor_where(c, rng, |u| self.comm[u] == cx && u != x)?;
        Some((c, d))
    }

    /// Endgame of [`Self::pull_in`] when every needy member of v's community
    /// is already adjacent to v: (v,x) + (w,y) + (a,b) -> (v,a) + (w,b) +
    /// (x,y), with (a,b) an internal edge and x, y outside. w is a needy
    /// neighbor of v, or v itself when v lacks at least two internal links.
    /// a and b keep their internal degree; v and w each gain one.
    fn pull_in_pair<R: Rng>(&mut self, v: usize, x: usize, rng: &mut R) -> bool {
        let cv = self.comm[v];
        let mut partners: Vec<usize> = self
            .store
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&u| self.comm[u] == cv && self.internal[u] < self.target[u])
            .collect();
        if self.internal[v] + 2 <= self.target[v] {
            partners.push(v);
        }
        let Some(&w) = partners.choose(rng) else {
            return false;
        };
        let Some(y) = self.random_neighbor_where(w, rng, |u| self.comm[u] != cv && (w != v || u != x)) else {
            return false;
        };
        let Some(link) = self.reconnect(x, y, rng) else {
            return false;
        };
        let pool = &self.members[cv];
        let a = pool[rng.gen_range(0..pool.len())];
        if a == v || a == w || self.store.has_edge(v, a) {
            return false;
        }
        let Some(b) = self.random_neighbor_where(a, rng, |u| {
            self.comm[u] == cv && u != v && u != w && !self.store.has_edge(w, u)
        }) else {
            return false;
        };
        let mut changes = vec![(v, 1), (w, 1)];
        self.link_changes(x, y, link, &mut changes);
        if !self.accept(self.delta(&changes), false) {
            return false;
        }
        self.store.remove(v, x);
        self.store.remove(w, y);
        self.store.remove(a, b);
        self.store.insert(v, a);
        self.store.insert(w, b);
        self.link(x, y, link);
        self.apply(&changes);
        true
    }

    /// (v,w) + (x,y) -> (v,x) + (w,y) with w in v's community and x, y outside.
    fn push_out<R: Rng>(&mut self, v: usize, rng: &mut R) {
        let cv = self.comm[v];
        let (w, allow_neutral) = match self
            .random_neighbor_where(v, rng, |u| self.comm[u] == cv && self.internal[u] > self.target[u])
        {
            Some(w) => (w, false),
            None => match self.random_neighbor_where(v, rng, |u| self.comm[u] == cv) {
                Some(w) => (w, true),
                None => return,
            },
        };
        let (x, y) = self.store.random_edge(rng);
        let (x, y) = if rng.gen() { (x, y) } else { (y, x) };
        if self.comm[x] == cv || self.comm[y] == cv || self.store.has_edge(v, x) || self.store.has_edge(w, y) {
            return;
        }
        let mut changes = vec![(v, -1), (w, -1)];
        if self.comm[x] == self.comm[y] {
            changes.push((x, -1));
            changes.push((y, -1));
        }
        if self.accept(self.delta(&changes), allow_neutral) {
            self.store.remove(v, w);
            self.store.remove(x, y);
            self.store.insert(v, x);
            self.store.insert(w, y);
            self.apply(&changes);
        }
    }
}
