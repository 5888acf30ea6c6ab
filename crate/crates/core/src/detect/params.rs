use crate::error::{Error, Result};

/// Tunables of all detectors. Fields are public for struct-update syntax;
/// every detector calls [`DetectorParams::validate`] before running, and
/// [`DetectorParams::set`] range-checks single assignments.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorParams {
    /// Potts spin states available to Spinglass.
    pub spinglass_spins: usize,
    /// Geometric cooling factor per temperature step.
    pub spinglass_cooling: f64,
    /// Monte Carlo sweeps per temperature.
    pub spinglass_sweeps: usize,
    /// Initial acceptance ratio the start temperature is calibrated to.
    pub spinglass_start_acceptance: f64,
    /// Annealing stops once the acceptance ratio drops below this.
    pub spinglass_stop_acceptance: f64,
    /// MCL inflation exponent r.
    pub mcl_inflation: f64,
    /// MCL entries below this are pruned after inflation.
    pub mcl_prune: f64,
    /// MCL stops when no entry changes by more than this.
    pub mcl_epsilon: f64,
    /// Weight of the self-loop added to every node.
    pub mcl_self_loop: f64,
    pub mcl_max_iterations: usize,
    /// Random-walk length t.
    pub walktrap_steps: usize,
    /// Independent optimisation trials; the shortest description wins.
    pub infomap_trials: usize,
    /// Probability of teleporting to a uniformly random node.
    pub infomap_teleport: f64,
    /// Cap on node-move sweeps per optimisation level.
    pub infomap_core_loops: usize,
    pub label_propagation_max_sweeps: usize,
    /// Eigenvector iteration tolerance.
    pub eigen_tolerance: f64,
    pub eigen_max_iterations: usize,
    /// Edges removed between recomputations (edge betweenness).
    pub betweenness_batch: usize,
}

impl Default for DetectorParams {
    fn default() -> Self {
        Self {
            spinglass_spins: 25,
            spinglass_cooling: 0.99,
            spinglass_sweeps: 50,
            spinglass_start_acceptance: 0.5,
            spinglass_stop_acceptance: 1e-3,
            mcl_inflation: 2.0,
            mcl_prune: 1e-5,
            mcl_epsilon: 1e-8,
            mcl_self_loop: 1.0,
            mcl_max_iterations: 1000,
            walktrap_steps: 4,
            infomap_trials: 10,
            infomap_teleport: 0.0,
            infomap_core_loops: 100,
            label_propagation_max_sweeps: 100,
            eigen_tolerance: 1e-10,
            eigen_max_iterations: 100_000,
            betweenness_batch: 1,
        }
    }
}

const KEYS: [&str; 18] = [
    "spinglass.spins",
    "spinglass.cooling",
    "spinglass.sweeps",
    "spinglass.start_acceptance",
    "spinglass.stop_acceptance",
    "mcl.inflation",
    "mcl.prune",
    "mcl.epsilon",
    "mcl.self_loop",
    "mcl.max_iterations",
    "walktrap.steps",
    "infomap.trials",
    "infomap.teleport",
    "infomap.core_loops",
    "label_propagation.max_sweeps",
    "eigen.tolerance",
    "eigen.max_iterations",
    "betweenness.batch",
];

impl DetectorParams {
    /// Names accepted by [`DetectorParams::set`].
    pub fn keys() -> &'static [&'static str] {
        &KEYS
    }

    /// Assign one tunable from its textual form, e.g. `("mcl.inflation", "1.8")`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let mut next = self.clone();
        let int = || -> Result<usize> {
            value
                .trim()
                .parse()
                .map_err(|_| Error::arg(format!("{key}: '{value}' is not a non-negative integer")))
        };
        let real = || -> Result<f64> {
            value
                .trim()
                .parse()
                .map_err(|_| Error::arg(format!("{key}: '{value}' is not a number")))
        };
        match key.trim() {
            "spinglass.spins" => next.spinglass_spins = int()?,
            "spinglass.cooling" => next.spinglass_cooling = real()?,
            "spinglass.sweeps" => next.spinglass_sweeps = int()?,
            "spinglass.start_acceptance" => next.spinglass_start_acceptance = real()?,
            "spinglass.stop_acceptance" => next.spinglass_stop_acceptance = real()?,
            "mcl.inflation" => next.mcl_inflation = real()?,
            "mcl.prune" => next.mcl_prune = real()?,
            "mcl.epsilon" => next.mcl_epsilon = real()?,
            "mcl.self_loop" => next.mcl_self_loop = real()?,
            "mcl.max_iterations" => next.mcl_max_iterations = int()?,
            "walktrap.steps" => next.walktrap_steps = int()?,
            "infomap.trials" => next.infomap_trials = int()?,
            "infomap.teleport" => next.infomap_teleport = real()?,
            "infomap.core_loops" => next.infomap_core_loops = int()?,
            "label_propagation.max_sweeps" => next.label_propagation_max_sweeps = int()?,
            "eigen.tolerance" => next.eigen_tolerance = real()?,
            "eigen.max_iterations" => next.eigen_max_iterations = int()?,
            "betweenness.batch" => next.betweenness_batch = int()?,
            other => {
                return Err(Error::arg(format!(
                    "unknown detector parameter '{other}' (expected one of {})",
                    KEYS.join(", ")
                )))
            }
        }
        next.validate()?;
        *self = next;
        Ok(())
    }

    /// Check every field against its admissible range.
    pub fn validate(&self) -> Result<()> {
        fn check(ok: bool, what: &str) -> Result<()> {
            if ok {
                Ok(())
            } else {
                Err(Error::arg(what.to_string()))
            }
        }
        let open_unit = |x: f64| x > 0.0 && x < 1.0;
        check(self.spinglass_spins >= 2, "spinglass.spins must be at least 2")?;
        check(open_unit(self.spinglass_cooling), "spinglass.cooling must lie in (0, 1)")?;
        check(self.spinglass_sweeps >= 1, "spinglass.sweeps must be at least 1")?;
        check(
            open_unit(self.spinglass_start_acceptance),
            "spinglass.start_acceptance must lie in (0, 1)",
        )?;
        check(
            open_unit(self.spinglass_stop_acceptance)
                && self.spinglass_stop_acceptance < self.spinglass_start_acceptance,
            "spinglass.stop_acceptance must lie in (0, start_acceptance)",
        )?;
        check(
            self.mcl_inflation > 1.0 && self.mcl_inflation.is_finite(),
            "mcl.inflation must be a finite number above 1",
        )?;
        check(open_unit(self.mcl_prune), "mcl.prune must lie in (0, 1)")?;
        check(open_unit(self.mcl_epsilon), "mcl.epsilon must lie in (0, 1)")?;
        check(
            self.mcl_self_loop >= 0.0 && self.mcl_self_loop.is_finite(),
            "mcl.self_loop must be a finite non-negative number",
        )?;
        check(self.mcl_max_iterations >= 1, "mcl.max_iterations must be at least 1")?;
        check(self.walktrap_steps >= 1, "walktrap.steps must be at least 1")?;
        check(self.infomap_trials >= 1, "infomap.trials must be at least 1")?;
        check(
            (0.0..1.0).contains(&self.infomap_teleport),
            "infomap.teleport must lie in [0, 1)",
        )?;
        check(self.infomap_core_loops >= 1, "infomap.core_loops must be at least 1")?;
        check(
            self.label_propagation_max_sweeps >= 1,
            "label_propagation.max_sweeps must be at least 1",
        )?;
        check(open_unit(self.eigen_tolerance), "eigen.tolerance must lie in (0, 1)")?;
        check(self.eigen_max_iterations >= 1, "eigen.max_iterations must be at least 1")?;
        check(self.betweenness_batch >= 1, "betweenness.batch must be at least 1")?;
        Ok(())
    }
}
