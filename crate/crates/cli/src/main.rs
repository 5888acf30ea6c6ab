//! `commkit`: generate benchmark networks, detect communities, score
//! partitions and run experiments from the command line.
//!
//! Exit codes: 0 on success, 1 on argument errors, 2 on runtime errors.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use commkit::detect::{detect, Algorithm, DetectorParams};
use commkit::evaluate::{modularity, Measure};
use commkit::graph::{read_edge_list, summary, write_edge_list};
use commkit::harness::{self, ExperimentConfig, Mode};
use commkit::netgen::{self, EvParams, LfrParams, SeedModel};
use commkit::partition::{read_membership, write_membership};
use commkit::{Graph, Partition, RngStream};

#[derive(Parser, Debug)]
#[command(name = "commkit", version, about = "Community-detection laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a network; writes PREFIX.edges, PREFIX.planted (benchmarks
    /// only) and PREFIX.meta.
    Generate(GenerateArgs),
    /// Run one detector and write the membership it finds.
    Detect(DetectArgs),
    /// Score a partition, printing `measure,value` lines.
    Evaluate(EvaluateArgs),
    /// Run an experiment described by a key=value config file.
    Experiment(ExperimentArgs),
    /// Print the topological summary of a graph.
    Diagnose(DiagnoseArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Model {
    Lfr,
    Gn,
    Er,
    Ba,
    Ev,
    Cm,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(value_enum)]
    model: Model,
    /// Output path prefix.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    stream: u64,
    #[arg(long, default_value_t = 1000)]
    n: usize,
    /// Mean degree (lfr, cm).
    #[arg(long, default_value_t = 20.0)]
    k_avg: f64,
    /// Degree cap (lfr with the cm seed, cm).
    #[arg(long, default_value_t = 50)]
    k_max: usize,
    /// Degree exponent (lfr, cm).
    #[arg(long, default_value_t = 3.0)]
    gamma: f64,
    /// Community-size exponent (lfr).
    #[arg(long, default_value_t = 2.0)]
    beta: f64,
    #[arg(long, default_value_t = 10)]
    c_min: usize,
    #[arg(long, default_value_t = 50)]
    c_max: usize,
    /// Mixing coefficient (lfr, gn; gn uses z_out = 16·mu).
    #[arg(long, default_value_t = 0.2)]
    mu: f64,
    /// Seed model of an lfr network.
    #[arg(long, default_value = "cm")]
    seed_model: String,
    /// Edges per newcomer (ba, ev).
    #[arg(long, default_value_t = 10)]
    m: usize,
    /// Edge probability (er).
    #[arg(long, default_value_t = 0.02)]
    p: f64,
    /// Temptation payoff (ev).
    #[arg(long, default_value_t = 1.5)]
    ev_b: f64,
    /// Selection pressure (ev).
    #[arg(long, default_value_t = 0.99)]
    ev_epsilon: f64,
}

#[derive(Args, Debug)]
struct DetectArgs {
    #[arg(long)]
    algorithm: String,
    #[arg(long)]
    graph: PathBuf,
    /// Membership output file.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    stream: u64,
    /// Detector parameter as `key=value`, repeatable (e.g. mcl.inflation=1.8).
    #[arg(long = "param")]
    params: Vec<String>,
}

#[derive(Args, Debug)]
struct EvaluateArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    found: PathBuf,
    /// Reference partition, needed by the comparison measures.
    #[arg(long)]
    truth: Option<PathBuf>,
    /// Comma-separated measure names; defaults to every applicable measure.
    #[arg(long, value_delimiter = ',')]
    measures: Vec<String>,
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    #[arg(long)]
    config: PathBuf,
    /// Overrides the config's output_dir.
    #[arg(long)]
    output_dir: Option<PathBuf>,
    /// Overrides the config's thread count (still capped by COMMKIT_THREADS).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args, Debug)]
struct DiagnoseArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Planted membership; adds the mixing coefficient and mixing limit.
    #[arg(long)]
    planted: Option<PathBuf>,
    /// Also fit the degree tail above this cut-off.
    #[arg(long)]
    tail_kmin: Option<usize>,
}

/// A command-line mistake caught outside clap.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn is_argument_error(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.downcast_ref::<UsageError>().is_some()
            || c.downcast_ref::<commkit::Error>().is_some_and(|e| e.is_argument())
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if is_argument_error(&e) { 1 } else { 2 })
        }
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Generate(a) => generate(a),
        Command::Detect(a) => run_detect(a),
        Command::Evaluate(a) => evaluate(a),
        Command::Experiment(a) => experiment(a),
        Command::Diagnose(a) => diagnose(a),
    }
}

fn load_graph(path: &Path) -> Result<Graph> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    read_edge_list(BufReader::new(file)).with_context(|| format!("reading {}", path.display()))
}

fn load_partition(path: &Path, n: usize) -> Result<Partition> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    read_membership(BufReader::new(file), Some(n)).with_context(|| format!("reading {}", path.display()))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn generate(a: GenerateArgs) -> Result<()> {
    let stream = RngStream::new(a.seed, a.stream);
    let ev = EvParams {
        b: a.ev_b,
        epsilon: a.ev_epsilon,
    };
    let (graph, planted, realized_mu) = match a.model {
        Model::Lfr => {
            let params = LfrParams {
                n: a.n,
                k_avg: a.k_avg,
                k_max: a.k_max,
                gamma: a.gamma,
                beta: a.beta,
                c_min: a.c_min,
                c_max: a.c_max,
                mu: a.mu,
                seed_model: SeedModel::parse(&a.seed_model)?,
                ev,
                ..LfrParams::default()
            };
            let net = netgen::lfr(&params, stream)?;
            (net.graph, Some(net.planted), Some(net.realized_mu))
        }
        Model::Gn => {
            let net = netgen::girvan_newman(16.0 * a.mu, stream)?;
            (net.graph, Some(net.planted), Some(net.realized_mu))
        }
        Model::Er => (netgen::erdos_renyi(a.n, a.p, stream)?, None, None),
        Model::Ba => (netgen::barabasi_albert(a.n, a.m, stream)?, None, None),
        Model::Ev => (netgen::evolutionary_pa(a.n, a.m, ev, stream)?, None, None),
        Model::Cm => {
            let degrees = netgen::powerlaw_degree_sequence(a.n, a.k_avg, a.k_max, a.gamma, stream.substream(0))?;
            (netgen::configuration_model(&degrees, stream.substream(1))?, None, None)
        }
    };
    let edges_path = with_suffix(&a.out, ".edges");
    let mut w = create(&edges_path)?;
    write_edge_list(&graph, &mut w)?;
    w.flush()?;
    if let Some(p) = &planted {
        let mut w = create(&with_suffix(&a.out, ".planted"))?;
        write_membership(p, &mut w)?;
        w.flush()?;
    }
    let mut meta = create(&with_suffix(&a.out, ".meta"))?;
    writeln!(meta, "model={:?}", a.model)?;
    writeln!(meta, "seed={}\nstream={}", a.seed, a.stream)?;
    writeln!(meta, "nodes={}\nedges={}", graph.node_count(), graph.edge_count())?;
    if let Some(mu) = realized_mu {
        writeln!(meta, "mu_target={}\nmu_realized={mu}", a.mu)?;
    }
    if let Some(p) = &planted {
        writeln!(meta, "communities={}", p.community_count())?;
    }
    meta.flush()?;
    println!("wrote {}", edges_path.display());
    Ok(())
}

fn run_detect(a: DetectArgs) -> Result<()> {
    let algorithm = Algorithm::parse(&a.algorithm)?;
    let mut params = DetectorParams::default();
    for kv in &a.params {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| usage(format!("--param expects key=value, got '{kv}'")))?;
        params.set(k.trim(), v.trim())?;
    }
    let graph = load_graph(&a.graph)?;
    let found = detect(algorithm, &graph, &params, RngStream::new(a.seed, a.stream))?;
    let mut w = create(&a.out)?;
    write_membership(&found.partition, &mut w)?;
    w.flush()?;
    println!("community_count={}", found.partition.community_count());
    println!("modularity={}", modularity(&graph, &found.partition)?);
    if !found.converged {
        println!("converged=false");
    }
    Ok(())
}

fn evaluate(a: EvaluateArgs) -> Result<()> {
    let graph = load_graph(&a.graph)?;
    let n = graph.node_count();
    let found = load_partition(&a.found, n)?;
    let truth = a.truth.as_deref().map(|p| load_partition(p, n)).transpose()?;
    let measures: Vec<Measure> = if a.measures.is_empty() {
        Measure::ALL
            .into_iter()
            .filter(|m| truth.is_some() || !m.needs_truth())
            .collect()
    } else {
        a.measures.iter().map(|m| Measure::parse(m.trim())).collect::<Result<_, _>>()?
    };
    let mut out = io::stdout().lock();
    writeln!(out, "measure,value")?;
    for m in measures {
        let value = m.evaluate(&graph, &found, truth.as_ref())?;
        writeln!(out, "{},{}", m.name(), value.map_or_else(String::new, |v| v.to_string()))?;
    }
    Ok(())
}

fn experiment(a: ExperimentArgs) -> Result<()> {
    let text = std::fs::read_to_string(&a.config).with_context(|| format!("reading {}", a.config.display()))?;
    let mut cfg = ExperimentConfig::parse(&text).with_context(|| format!("in {}", a.config.display()))?;
    if let Some(dir) = a.output_dir {
        cfg.output_dir = dir;
    }
    if let Some(t) = a.threads {
        if t == 0 {
            return Err(usage("--threads must be at least 1"));
        }
        cfg.threads = Some(t);
    }
    let output = harness::run(&cfg)?;
    let written = harness::emit_reports(&output, &cfg.output_dir)?;
    let mut out = io::stdout().lock();
    match cfg.mode {
        Mode::Detection => writeln!(out, "seed_model,mu,detector,measure,mean,stddev,rank,failures")?,
        Mode::Topology => writeln!(out, "seed_model,mu,measure,mean,stddev,failures")?,
    }
    let fmt = |v: Option<f64>| v.map_or_else(String::new, |x| format!("{x:.4}"));
    for s in &output.summary {
        let source = s.seed_model.map_or(s.generator.name(), |m| m.name());
        match cfg.mode {
            Mode::Detection => writeln!(
                out,
                "{source},{},{},{},{},{},{},{}",
                s.mu_target,
                s.detector,
                s.measure,
                fmt(s.mean),
                fmt(s.stddev),
                s.rank.map_or_else(String::new, |r| r.to_string()),
                s.failures
            )?,
            Mode::Topology => writeln!(
                out,
                "{source},{},{},{},{},{}",
                s.mu_target,
                s.measure,
                fmt(s.mean),
                fmt(s.stddev),
                s.failures
            )?,
        }
    }
    for path in written {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn diagnose(a: DiagnoseArgs) -> Result<()> {
    let graph = load_graph(&a.graph)?;
    let s = summary(&graph)?;
    let opt = |v: Option<f64>| v.map_or_else(|| "undefined".to_string(), |x| x.to_string());
    let mut out = io::stdout().lock();
    writeln!(out, "nodes: {}", s.node_count)?;
    writeln!(out, "edges: {}", s.edge_count)?;
    writeln!(out, "density: {}", s.density)?;
    writeln!(out, "mean_distance: {}", s.mean_distance)?;
    writeln!(out, "transitivity: {}", s.transitivity)?;
    writeln!(out, "assortativity: {}", opt(s.assortativity))?;
    writeln!(out, "degree_centralization: {}", opt(s.degree_centralization))?;
    writeln!(out, "closeness_centralization: {}", opt(s.closeness_centralization))?;
    writeln!(out, "betweenness_centralization: {}", opt(s.betweenness_centralization))?;
    writeln!(out, "components: {}", s.component_count)?;
    if let Some(path) = &a.planted {
        let planted = load_partition(path, graph.node_count())?;
        writeln!(out, "communities: {}", planted.community_count())?;
        writeln!(out, "mixing: {}", netgen::mixing_coefficient(&graph, &planted))?;
        writeln!(out, "mixing_limit: {}", harness::mixing_limit(&planted))?;
    }
    if let Some(k_min) = a.tail_kmin {
        let fit = harness::tail_exponent_estimate(&graph.degrees(), k_min)?;
        writeln!(out, "tail_exponent: {}", fit.exponent)?;
        writeln!(out, "tail_fit_residual: {}", fit.residual)?;
    }
    Ok(())
}
