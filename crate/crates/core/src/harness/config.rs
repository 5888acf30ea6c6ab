use std::fmt;
use std::path::PathBuf;
use std::time::Duration;

use crate::detect::{Algorithm, DetectorParams};
use crate::error::{Error, Result};
use crate::evaluate::Measure;
use crate::netgen::{EvParams, LfrParams, SeedModel};

/// Benchmark family generating the networks of an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeneratorKind {
    /// LFR over one or more seed models; the grid runs over μ.
    Lfr,
    /// Girvan–Newman 4×32 benchmark; μ maps to z_out = 16·μ.
    GirvanNewman,
}

impl GeneratorKind {
    pub fn name(self) -> &'static str {
        match self {
            GeneratorKind::Lfr => "lfr",
            GeneratorKind::GirvanNewman => "gn",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lfr" => Ok(GeneratorKind::Lfr),
            "gn" | "girvan_newman" => Ok(GeneratorKind::GirvanNewman),
            other => Err(Error::arg(format!("unknown generator '{other}' (expected lfr or gn)"))),
        }
    }
}

/// What an experiment measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Run detectors and score them against the planted partition.
    Detection,
    /// Record topological properties of the generated networks only.
    Topology,
}

/// One detector entry of a configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorSpec {
    pub algorithm: Algorithm,
    pub params: DetectorParams,
}

/// A complete experiment description.
///
/// The text form is one `key=value` pair per line; `#` starts a comment.
/// Recognised keys:
///
/// | key | meaning | default |
/// |---|---|---|
/// | `name` | label used in output file names | `experiment` |
/// | `mode` | `detection` or `topology` | `detection` |
/// | `generator` | `lfr` or `gn` | `lfr` |
/// | `n`, `k_avg`, `k_max`, `gamma`, `beta`, `c_min`, `c_max`, `mu_tolerance` | LFR parameters | 1000, 20, 50, 3, 2, 10, 50, 0.02 |
/// | `ev_b`, `ev_epsilon` | EV seed-model payoff and selection pressure | 1.5, 0.99 |
/// | `mu` | comma-separated mixing grid | required |
/// | `seed_model` | comma-separated `cm`, `ba`, `ev` | `cm` |
/// | `detector` | repeated; `name [param=value ...]`, or `all` | required in detection mode |
/// | `measures` | comma-separated measure names | `nmi` |
/// | `replicates` | networks per grid point | 5 |
/// | `seed` | master seed | 0 |
/// | `output_dir` | report directory | `results` |
/// | `threads` | worker threads (capped by `COMMKIT_THREADS`) | all cores |
/// | `timeout_s` | per-detector wall-clock limit, 0 disables | 600 |
/// | `record_runtime` | also write runtimes into `results.csv` | `false` |
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub name: String,
    pub mode: Mode,
    pub generator: GeneratorKind,
    /// Base LFR parameters; `mu` and `seed_model` are overridden per cell.
    pub lfr: LfrParams,
    pub mu: Vec<f64>,
    pub seed_models: Vec<SeedModel>,
    pub detectors: Vec<DetectorSpec>,
    pub measures: Vec<Measure>,
    pub replicates: usize,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub threads: Option<usize>,
    /// `None` disables the limit.
    pub timeout: Option<Duration>,
    /// Runtimes vary between runs; they are always written to `runs.csv` and
    /// only copied into `results.csv` on request so that file stays
    /// byte-reproducible by default.
    pub record_runtime: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            name: "experiment".into(),
            mode: Mode::Detection,
            generator: GeneratorKind::Lfr,
            lfr: LfrParams::default(),
            mu: Vec::new(),
            seed_models: vec![SeedModel::Cm],
            detectors: Vec::new(),
            measures: vec![Measure::Nmi],
            replicates: 5,
            seed: 0,
            output_dir: PathBuf::from("results"),
            threads: None,
            timeout: Some(Duration::from_secs(600)),
            record_runtime: false,
        }
    }
}

impl ExperimentConfig {
    /// Desk-scale detector comparison: LFR-CM with n = 1000, ⟨k⟩ = 20,
    /// k_max = 50, γ = 3, β = 2, communities of 10–50 nodes, μ ∈ {0.2, 0.6},
    /// five replicates, every detector except Edge Betweenness (too slow at
    /// this size) and the three partition-agreement measures.
    pub fn detector_comparison() -> Self {
        let algorithms = [
            Algorithm::Infomap,
            Algorithm::WalkTrap,
            Algorithm::LabelPropagation,
            Algorithm::Spinglass,
            Algorithm::Louvain,
            Algorithm::Mcl,
            Algorithm::Radetal,
            Algorithm::FastGreedy,
            Algorithm::LeadingEigenvector,
        ];
        Self {
            name: "detector_comparison".into(),
            mu: vec![0.2, 0.6],
            detectors: algorithms
                .into_iter()
                .map(|algorithm| DetectorSpec {
                    algorithm,
                    params: DetectorParams::default(),
                })
                .collect(),
            measures: vec![Measure::Rand, Measure::AdjustedRand, Measure::Nmi],
            seed: 2013,
            output_dir: PathBuf::from("results/detector_comparison"),
            ..Self::default()
        }
    }

    /// Desk-scale topology sweep: LFR over the three seed
    /// models for μ = 0.1, …, 0.9. Communities may hold up to 200 nodes so
    /// that preferential-attachment hubs fit inside one.
    pub fn topology_sweep() -> Self {
        Self {
            name: "topology_sweep".into(),
            mode: Mode::Topology,
            lfr: LfrParams {
                c_max: 200,
                ..LfrParams::default()
            },
            mu: (1..10).map(|i| i as f64 / 10.0).collect(),
            seed_models: SeedModel::ALL.to_vec(),
            seed: 2013,
            output_dir: PathBuf::from("results/topology_sweep"),
            ..Self::default()
        }
    }

    /// Parse the key=value text form.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (index, raw) in text.lines().enumerate() {
            let line_no = index + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse { line: line_no, msg };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected key=value, found '{line}'")))?;
            let (key, value) = (key.trim(), value.trim());
            let wrap = |e: Error| match e {
                Error::Argument(msg) => err(msg),
                other => other,
            };
            cfg.set(key, value).map_err(wrap)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
            value
                .parse()
                .map_err(|_| Error::arg(format!("{key}: cannot parse '{value}'")))
        }
        fn list(value: &str) -> impl Iterator<Item = &str> {
            value.split(',').map(str::trim).filter(|s| !s.is_empty())
        }
        match key {
            "name" => self.name = value.to_string(),
            "mode" => {
                self.mode = match value {
                    "detection" => Mode::Detection,
                    "topology" => Mode::Topology,
                    other => return Err(Error::arg(format!("mode: unknown mode '{other}'"))),
                }
            }
            "generator" => self.generator = GeneratorKind::parse(value)?,
            "n" => self.lfr.n = num(key, value)?,
            "k_avg" => self.lfr.k_avg = num(key, value)?,
            "k_max" => self.lfr.k_max = num(key, value)?,
            "gamma" => self.lfr.gamma = num(key, value)?,
            "beta" => self.lfr.beta = num(key, value)?,
            "c_min" => self.lfr.c_min = num(key, value)?,
            "c_max" => self.lfr.c_max = num(key, value)?,
            "mu_tolerance" => self.lfr.mu_tolerance = num(key, value)?,
            "ev_b" => self.lfr.ev = EvParams { b: num(key, value)?, ..self.lfr.ev },
            "ev_epsilon" => {
                self.lfr.ev = EvParams {
                    epsilon: num(key, value)?,
                    ..self.lfr.ev
                }
            }
            "mu" => self.mu = list(value).map(|v| num(key, v)).collect::<Result<_>>()?,
            "seed_model" => self.seed_models = list(value).map(SeedModel::parse).collect::<Result<_>>()?,
            "detector" => self.detectors.extend(parse_detector(value)?),
            "measures" => {
                self.measures = list(value).map(Measure::parse).collect::<Result<_>>()?;
            }
            "replicates" => self.replicates = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            "output_dir" => self.output_dir = PathBuf::from(value),
            "threads" => self.threads = Some(num(key, value)?),
            "timeout_s" => {
                let secs: f64 = num(key, value)?;
                if !(secs >= 0.0 && secs.is_finite()) {
                    return Err(Error::arg("timeout_s must be a non-negative number"));
                }
                self.timeout = (secs > 0.0).then(|| Duration::from_secs_f64(secs));
            }
            "record_runtime" => self.record_runtime = num(key, value)?,
            other => return Err(Error::arg(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    /// Check the invariants documented on the type.
    pub fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(Error::arg("replicates must be at least 1"));
        }
        if self.mu.is_empty() {
            return Err(Error::arg("the mu grid is empty"));
        }
        if let Some(bad) = self.mu.iter().find(|m| !(0.0..=1.0).contains(*m)) {
            return Err(Error::arg(format!("mu = {bad} outside [0, 1]")));
        }
        if self.seed_models.is_empty() {
            return Err(Error::arg("no seed_model given"));
        }
        if self.threads == Some(0) {
            return Err(Error::arg("threads must be at least 1"));
        }
        if self.mode == Mode::Detection {
            if self.detectors.is_empty() {
                return Err(Error::arg("no detector given"));
            }
            if self.measures.is_empty() {
                return Err(Error::arg("no measure given"));
            }
        }
        for d in &self.detectors {
            d.params.validate()?;
        }
        if self.generator == GeneratorKind::Lfr {
            for &mu in &self.mu {
                LfrParams { mu, ..self.lfr.clone() }.validate()?;
            }
        }
        Ok(())
    }
}

/// `name [key=value ...]` or `all`.
fn parse_detector(value: &str) -> Result<Vec<DetectorSpec>> {
    let mut parts = value.split_whitespace();
    let name = parts.next().ok_or_else(|| Error::arg("detector: missing algorithm name"))?;
    let mut params = DetectorParams::default();
    for assignment in parts {
        let (k, v) = assignment
            .split_once('=')
            .ok_or_else(|| Error::arg(format!("detector: expected param=value, found '{assignment}'")))?;
        params.set(k, v)?;
    }
    if name == "all" {
        return Ok(Algorithm::ALL
            .into_iter()
            .map(|algorithm| DetectorSpec {
                algorithm,
                params: params.clone(),
            })
            .collect());
    }
    Ok(vec![DetectorSpec {
        algorithm: Algorithm::parse(name)?,
        params,
    }])
}

impl fmt::Display for ExperimentConfig {
    /// Writes the text form accepted by [`ExperimentConfig::parse`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |items: Vec<String>| items.join(",");
        writeln!(f, "name={}", self.name)?;
        writeln!(
            f,
            "mode={}",
            match self.mode {
                Mode::Detection => "detection",
                Mode::Topology => "topology",
            }
        )?;
        writeln!(f, "generator={}", self.generator.name())?;
        let p = &self.lfr;
        writeln!(f, "n={}\nk_avg={}\nk_max={}\ngamma={}\nbeta={}", p.n, p.k_avg, p.k_max, p.gamma, p.beta)?;
        writeln!(f, "c_min={}\nc_max={}\nmu_tolerance={}", p.c_min, p.c_max, p.mu_tolerance)?;
        writeln!(f, "ev_b={}\nev_epsilon={}", p.ev.b, p.ev.epsilon)?;
        writeln!(f, "mu={}", join(self.mu.iter().map(|m| m.to_string()).collect()))?;
        writeln!(
            f,
            "seed_model={}",
            join(self.seed_models.iter().map(|s| s.name().to_string()).collect())
        )?;
        let defaults = DetectorParams::default();
        for d in &self.detectors {
            write!(f, "detector={}", d.algorithm)?;
            for key in DetectorParams::keys() {
                let value = param_value(&d.params, key);
                if value != param_value(&defaults, key) {
                    write!(f, " {key}={value}")?;
                }
            }
            writeln!(f)?;
        }
        if !self.measures.is_empty() {
            writeln!(f, "measures={}", join(self.measures.iter().map(|m| m.name().to_string()).collect()))?;
        }
        writeln!(f, "replicates={}\nseed={}", self.replicates, self.seed)?;
        writeln!(f, "output_dir={}", self.output_dir.display())?;
        if let Some(t) = self.threads {
            writeln!(f, "threads={t}")?;
        }
        writeln!(f, "timeout_s={}", self.timeout.map_or(0.0, |t| t.as_secs_f64()))?;
        writeln!(f, "record_runtime={}", self.record_runtime)
    }
}

fn param_value(p: &DetectorParams, key: &str) -> String {
    match key {
        "spinglass.spins" => p.spinglass_spins.to_string(),
        "spinglass.cooling" => p.spinglass_cooling.to_string(),
        "spinglass.sweeps" => p.spinglass_sweeps.to_string(),
        "spinglass.start_acceptance" => p.spinglass_start_acceptance.to_string(),
        "spinglass.stop_acceptance" => p.spinglass_stop_acceptance.to_string(),
        "mcl.inflation" => p.mcl_inflation.to_string(),
        "mcl.prune" => p.mcl_prune.to_string(),
        "mcl.epsilon" => p.mcl_epsilon.to_string(),
        "mcl.self_loop" => p.mcl_self_loop.to_string(),
        "mcl.max_iterations" => p.mcl_max_iterations.to_string(),
        "walktrap.steps" => p.walktrap_steps.to_string(),
        "infomap.trials" => p.infomap_trials.to_string(),
        "infomap.teleport" => p.infomap_teleport.to_string(),
        "infomap.core_loops" => p.infomap_core_loops.to_string(),
        "label_propagation.max_sweeps" => p.label_propagation_max_sweeps.to_string(),
        "eigen.tolerance" => p.eigen_tolerance.to_string(),
        "eigen.max_iterations" => p.eigen_max_iterations.to_string(),
        "betweenness.batch" => p.betweenness_batch.to_string(),
        _ => unreachable!("every key is listed"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_full_config() {
        let text = "\
# desk comparison
name=desk
mu=0.2, 0.6
seed_model=cm,ba
detector=louvain
detector=mcl mcl.inflation=1.8
measures=nmi,ari
replicates=3
seed=42
threads=2
timeout_s=0
c_max=80
";
        let cfg = ExperimentConfig::parse(text).unwrap();
        assert_eq!(cfg.name, "desk");
        assert_eq!(cfg.mu, vec![0.2, 0.6]);
        assert_eq!(cfg.seed_models, vec![SeedModel::Cm, SeedModel::Ba]);
        assert_eq!(cfg.detectors.len(), 2);
        assert_eq!(cfg.detectors[1].params.mcl_inflation, 1.8);
        assert_eq!(cfg.measures, vec![Measure::Nmi, Measure::AdjustedRand]);
        assert_eq!(cfg.replicates, 3);
        assert_eq!(cfg.timeout, None);
        assert_eq!(cfg.lfr.c_max, 80);
    }

    #[test]
    fn display_round_trips() {
        for cfg in [ExperimentConfig::detector_comparison(), ExperimentConfig::topology_sweep()] {
            let again = ExperimentConfig::parse(&cfg.to_string()).unwrap();
            assert_eq!(again, cfg);
        }
        let mut cfg = ExperimentConfig::detector_comparison();
        cfg.detectors[0].params.infomap_trials = 3;
        cfg.threads = Some(4);
        assert_eq!(ExperimentConfig::parse(&cfg.to_string()).unwrap(), cfg);
    }

    #[test]
    fn shipped_configs_match_presets() {
        let table = include_str!("../../../../configs/detector_comparison.conf");
        assert_eq!(ExperimentConfig::parse(table).unwrap(), ExperimentConfig::detector_comparison());
        let figure = include_str!("../../../../configs/topology_sweep.conf");
        assert_eq!(ExperimentConfig::parse(figure).unwrap(), ExperimentConfig::topology_sweep());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = ExperimentConfig::parse("mu=0.2\ndetector=louvain\nbogus=1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = ExperimentConfig::parse("mu=0.2\ndetector=kmeans\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = ExperimentConfig::parse("mu=0.2\nnot a pair\n").unwrap_err();
        assert!(err.is_argument());
    }

    #[test]
    fn invariants_are_checked() {
        for text in [
            "detector=louvain\n",
            "mu=0.2\n",
            "mu=0.2\ndetector=louvain\nreplicates=0\n",
            "mu=1.5\ndetector=louvain\n",
            "mu=0.2\ndetector=louvain\nmeasures=\n",
            "mu=0.2\ndetector=louvain\nseed_model=xx\n",
        ] {
            assert!(ExperimentConfig::parse(text).unwrap_err().is_argument(), "{text}");
        }
        let all = ExperimentConfig::parse("mu=0.2\ndetector=all\n").unwrap();
        assert_eq!(all.detectors.len(), 10);
    }
}
