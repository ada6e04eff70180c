//! Experiment grids over (model, dynamics, repetition) cells.
//!
//! Every cell derives its randomness from a hash of the master seed and the
//! cell's labels, never from its position in the task list, so results do
//! not depend on worker count or on which other cells are configured.
//! Repetition `r` of a model uses the same network realization for all
//! dynamics.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::generators::{ModelKind, ModelSpec};
use crate::graph::Graph;
use crate::seeded_rng;
use crate::transmission::{
    run_transmission_with_dictionary, single_message_codebook, DEFAULT_SMOOTHING, DEFAULT_T90_CAP,
    DEFAULT_T_LONG,
};
use crate::walk::{Dynamics, WalkKind, DEFAULT_GAMMA};

fn default_dynamics() -> Vec<Dynamics> {
    Dynamics::ALL.to_vec()
}
fn default_repetitions() -> usize {
    30
}
fn default_t_long() -> u64 {
    DEFAULT_T_LONG
}
fn default_cap() -> u64 {
    DEFAULT_T90_CAP
}
fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}
fn default_gamma() -> f64 {
    DEFAULT_GAMMA
}
fn default_smoothing() -> f64 {
    DEFAULT_SMOOTHING
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub models: Vec<ModelSpec>,
    #[serde(default = "default_dynamics")]
    pub dynamics: Vec<Dynamics>,
    #[serde(default)]
    pub directed: bool,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    #[serde(default = "default_t_long")]
    pub t_long: u64,
    #[serde(default = "default_cap")]
    pub t90_cap: u64,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<PathBuf>,
    #[serde(default = "default_workers", skip_serializing)]
    pub workers: usize,
    /// TSAW repulsion base.
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    /// Additive smoothing of single-message dictionaries.
    #[serde(default = "default_smoothing")]
    pub smoothing: f64,
}

/// Undirected model set: ER, BA, two WS rewiring levels, WAX and GEO.
pub fn undirected_models(n: usize, mean_degree: f64) -> Vec<ModelSpec> {
    vec![
        ModelSpec::new(ModelKind::Er, n, mean_degree),
        ModelSpec::new(ModelKind::Ba, n, mean_degree),
        ModelSpec::new(ModelKind::Ws, n, mean_degree)
            .with_p(0.01)
            .with_label("WS1"),
        ModelSpec::new(ModelKind::Ws, n, mean_degree)
            .with_p(0.005)
            .with_label("WS2"),
        ModelSpec::new(ModelKind::Wax, n, mean_degree),
        ModelSpec::new(ModelKind::Geo, n, mean_degree),
    ]
}

/// Directed model set: the undirected ones plus KN.
pub fn directed_models(n: usize, mean_degree: f64) -> Vec<ModelSpec> {
    let mut models = undirected_models(n, mean_degree);
    models.push(ModelSpec::new(ModelKind::Kn, n, mean_degree));
    models
}

/// Reciprocity study: ER at r = 0.0, 0.4 and 0.9, ERE and KN.
pub fn s2_models(n: usize, mean_degree: f64) -> Vec<ModelSpec> {
    let er = |r: f64| {
        ModelSpec::new(ModelKind::Er, n, mean_degree)
            .with_reciprocity(r)
            .with_label(format!("ER-{r:.1}"))
    };
    vec![
        er(0.0),
        er(0.4),
        er(0.9),
        ModelSpec::new(ModelKind::Ere, n, mean_degree),
        ModelSpec::new(ModelKind::Kn, n, mean_degree),
    ]
}

impl ExperimentConfig {
    pub fn new(models: Vec<ModelSpec>, directed: bool) -> Self {
        ExperimentConfig {
            models,
            dynamics: default_dynamics(),
            directed,
            repetitions: default_repetitions(),
            t_long: default_t_long(),
            t90_cap: default_cap(),
            master_seed: 0,
            output_path: None,
            workers: default_workers(),
            gamma: default_gamma(),
            smoothing: default_smoothing(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(Error::param("repetitions must be >= 1"));
        }
        if self.t_long == 0 || self.t90_cap == 0 {
            return Err(Error::param("t_long and t90_cap must be >= 1"));
        }
        if self.workers == 0 {
            return Err(Error::param("workers must be >= 1"));
        }
        if self.models.is_empty() || self.dynamics.is_empty() {
            return Err(Error::param("need at least one model and one dynamics"));
        }
        let mut labels: Vec<String> = self.models.iter().map(ModelSpec::label).collect();
        labels.sort();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::param("model labels must be unique"));
        }
        let mut dynamics = self.dynamics.clone();
        dynamics.sort_by_key(|d| d.name());
        dynamics.dedup();
        if dynamics.len() != self.dynamics.len() {
            return Err(Error::param("dynamics must be unique"));
        }
        for m in &self.models {
            m.validate()?;
            if m.model.is_directed() && !self.directed {
                return Err(Error::param(format!(
                    "{} requires a directed experiment",
                    m.label()
                )));
            }
        }
        WalkKind::tsaw(self.gamma).validate()?;
        if !(self.smoothing > 0.0 && self.smoothing.is_finite()) {
            return Err(Error::param("smoothing must be positive"));
        }
        Ok(())
    }

    fn kind(&self, d: Dynamics) -> WalkKind<f64> {
        WalkKind {
            gamma: self.gamma,
            ..WalkKind::of(d)
        }
    }
}

/// Stable 64-bit seed from the master seed and a list of labels.
pub fn derive_seed(master: u64, parts: &[&str]) -> u64 {
    let mut h = Sha256::new();
    h.update(master.to_le_bytes());
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p.as_bytes());
    }
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("32-byte digest"))
}

/// Seed of the network realization for repetition `rep` of `model`.
pub fn graph_seed(master: u64, model: &str, rep: usize) -> u64 {
    derive_seed(master, &[model, "graph", &rep.to_string()])
}

/// Seed of the transmitted walk.
pub fn walk_seed(master: u64, model: &str, dynamics: Dynamics, rep: usize) -> u64 {
    derive_seed(master, &[model, dynamics.name(), "walk", &rep.to_string()])
}

/// Seed of the message used to estimate a single-message dictionary.
pub fn train_seed(master: u64, model: &str, dynamics: Dynamics, rep: usize) -> u64 {
    derive_seed(master, &[model, dynamics.name(), "train", &rep.to_string()])
}

/// One row of `runs.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub model: String,
    pub dynamics: String,
    pub directed: bool,
    pub seed: u64,
    pub n: usize,
    pub mean_degree: f64,
    pub t90: Option<u64>,
    pub t90c: Option<f64>,
    pub s90: Option<f64>,
    pub sl: f64,
    pub r90: Option<f64>,
    pub rl: f64,
    pub r90s: Option<f64>,
    pub censored: bool,
}

impl RunRecord {
    pub fn metric(&self, metric: Metric) -> Option<f64> {
        match metric {
            Metric::T90 => self.t90.map(|t| t as f64),
            Metric::T90c => self.t90c,
            Metric::S90 => self.s90,
            Metric::Sl => Some(self.sl),
            Metric::R90 => self.r90,
            Metric::Rl => Some(self.rl),
            Metric::R90s => self.r90s,
        }
    }
}

/// A cell that could not be run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellFailure {
    pub model: String,
    pub dynamics: String,
    pub rep: usize,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    T90,
    T90c,
    S90,
    Sl,
    R90,
    Rl,
    R90s,
}

impl Metric {
    pub const ALL: [Metric; 7] = [
        Metric::T90,
        Metric::T90c,
        Metric::S90,
        Metric::Sl,
        Metric::R90,
        Metric::Rl,
        Metric::R90s,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::T90 => "t90",
            Metric::T90c => "t90c",
            Metric::S90 => "s90",
            Metric::Sl => "sl",
            Metric::R90 => "r90",
            Metric::Rl => "rl",
            Metric::R90s => "r90s",
        }
    }

    /// Metrics that only exist when `T90` was reached.
    pub fn needs_t90(self) -> bool {
        !matches!(self, Metric::Sl | Metric::Rl)
    }
}

/// Mean and standard deviation of one metric over one cell's runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub model: String,
    pub dynamics: String,
    pub metric: String,
    pub mean: f64,
    /// Sample standard deviation (0 for a single run).
    pub std: f64,
    pub runs: usize,
    pub censored: usize,
}

#[derive(Debug, Clone, Default)]
pub struct ExperimentOutcome {
    pub runs: Vec<RunRecord>,
    pub aggregates: Vec<AggregateRow>,
    pub failures: Vec<CellFailure>,
}

impl ExperimentOutcome {
    /// Runs of one (model, dynamics) cell.
    pub fn cell<'a>(
        &'a self,
        model: &'a str,
        dynamics: Dynamics,
    ) -> impl Iterator<Item = &'a RunRecord> + 'a {
        self.runs
            .iter()
            .filter(move |r| r.model == model && r.dynamics == dynamics.name())
    }

    pub fn aggregate(
        &self,
        model: &str,
        dynamics: Dynamics,
        metric: Metric,
    ) -> Option<&AggregateRow> {
        self.aggregates.iter().find(|a| {
            a.model == model && a.dynamics == dynamics.name() && a.metric == metric.name()
        })
    }

    /// Writes `runs.csv`, `aggregates.csv`, `plotdata/<metric>.csv` and,
    /// if any cell failed, `failures.csv`.
    pub fn write(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        write_runs_csv(dir.join("runs.csv"), &self.runs)?;
        if !self.aggregates.is_empty() {
            emit_plot_data(&self.aggregates, dir)?;
        }
        if !self.failures.is_empty() {
            write_csv(dir.join("failures.csv"), &self.failures)?;
        }
        Ok(())
    }
}

fn make_pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::param(format!("thread pool: {e}")))
}

/// Runs every (model, dynamics, repetition) cell of `config`.
///
/// Cells whose network cannot be generated or whose run fails are recorded
/// in [`ExperimentOutcome::failures`]; the rest still complete.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutcome> {
    config.validate()?;
    let pool = make_pool(config.workers)?;
    let labels: Vec<String> = config.models.iter().map(ModelSpec::label).collect();
    let master = config.master_seed;

    let graph_tasks: Vec<(usize, usize)> = (0..config.models.len())
        .flat_map(|m| (0..config.repetitions).map(move |r| (m, r)))
        .collect();
    let graphs: Vec<Result<Graph>> = pool.install(|| {
        graph_tasks
            .par_iter()
            .map(|&(m, r)| {
                let mut rng = seeded_rng(graph_seed(master, &labels[m], r));
                config.models[m].prepare(config.directed, &mut rng)
            })
            .collect()
    });
    let graph_of = |m: usize, r: usize| &graphs[m * config.repetitions + r];

    let run_tasks: Vec<(usize, usize, usize)> = (0..config.models.len())
        .flat_map(|m| {
            (0..config.dynamics.len())
                .flat_map(move |d| (0..config.repetitions).map(move |r| (m, d, r)))
        })
        .collect();
    let results: Vec<std::result::Result<RunRecord, CellFailure>> = pool.install(|| {
        run_tasks
            .par_iter()
            .map(|&(m, d, r)| {
                let dynamics = config.dynamics[d];
                let label = &labels[m];
                let fail = |e: &Error| CellFailure {
                    model: label.clone(),
                    dynamics: dynamics.name().to_string(),
                    rep: r,
                    message: e.to_string(),
                };
                let g = graph_of(m, r).as_ref().map_err(fail)?;
                run_cell(config, label, dynamics, r, g).map_err(|e| fail(&e))
            })
            .collect()
    });

    let mut outcome = ExperimentOutcome::default();
    for res in results {
        match res {
            Ok(run) => outcome.runs.push(run),
            Err(f) => outcome.failures.push(f),
        }
    }
    outcome.aggregates = aggregate(&outcome.runs);
    Ok(outcome)
}

fn run_cell(
    config: &ExperimentConfig,
    label: &str,
    dynamics: Dynamics,
    rep: usize,
    g: &Graph,
) -> Result<RunRecord> {
    let kind = config.kind(dynamics);
    let master = config.master_seed;
    let dict = single_message_codebook(
        g,
        kind,
        train_seed(master, label, dynamics, rep),
        config.t90_cap,
        config.smoothing,
    )?;
    let seed = walk_seed(master, label, dynamics, rep);
    let m = run_transmission_with_dictionary(g, kind, seed, config.t90_cap, config.t_long, &dict)?;
    Ok(RunRecord {
        model: label.to_string(),
        dynamics: dynamics.name().to_string(),
        directed: g.is_directed(),
        seed,
        n: g.node_count(),
        mean_degree: g.mean_degree(),
        t90: m.t90,
        t90c: m.t90c,
        s90: m.s90,
        sl: m.sl,
        r90: m.r90,
        rl: m.rl,
        r90s: m.r90s,
        censored: m.censored,
    })
}

/// Runs the reciprocity study (ER-0.0, ER-0.4, ER-0.9, ERE, KN) with the
/// directed pipeline. Everything but the model list comes from `config`;
/// size and mean degree are taken from its first model (1000 and 8 if it
/// has none).
pub fn run_s2_study(config: &ExperimentConfig) -> Result<ExperimentOutcome> {
    let (n, k) = config
        .models
        .first()
        .map_or((1000, 8.0), |m| (m.n, m.mean_degree));
    let study = ExperimentConfig {
        models: s2_models(n, k),
        directed: true,
        ..config.clone()
    };
    run_experiment(&study)
}

/// Mean and sample standard deviation per (model, dynamics, metric), in
/// order of first appearance of each cell.
pub fn aggregate(runs: &[RunRecord]) -> Vec<AggregateRow> {
    let mut cells: Vec<(&str, &str)> = Vec::new();
    for r in runs {
        let key = (r.model.as_str(), r.dynamics.as_str());
        if !cells.contains(&key) {
            cells.push(key);
        }
    }
    let mut rows = Vec::with_capacity(cells.len() * Metric::ALL.len());
    for (model, dynamics) in cells {
        let cell: Vec<&RunRecord> = runs
            .iter()
            .filter(|r| r.model == model && r.dynamics == dynamics)
            .collect();
        let censored = cell.iter().filter(|r| r.censored).count();
        for metric in Metric::ALL {
            let values: Vec<f64> = cell.iter().filter_map(|r| r.metric(metric)).collect();
            let (mean, std) = mean_std(&values);
            rows.push(AggregateRow {
                model: model.to_string(),
                dynamics: dynamics.to_string(),
                metric: metric.name().to_string(),
                mean,
                std,
                runs: values.len(),
                censored,
            });
        }
    }
    rows
}

pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn write_csv<S: Serialize>(path: PathBuf, rows: &[S]) -> Result<()> {
    let mut w = csv::Writer::from_path(&path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_runs_csv(path: impl AsRef<Path>, runs: &[RunRecord]) -> Result<()> {
    let path = path.as_ref();
    if runs.is_empty() {
        // Header only, so downstream readers still see the schema.
        let header =
            "model,dynamics,directed,seed,n,mean_degree,t90,t90c,s90,sl,r90,rl,r90s,censored\n";
        return fs::write(path, header).map_err(|e| Error::io(path, e));
    }
    write_csv(path.to_path_buf(), runs)
}

pub fn read_runs_csv(path: impl AsRef<Path>) -> Result<Vec<RunRecord>> {
    let mut r = csv::Reader::from_path(path.as_ref())?;
    r.deserialize()
        .map(|row| row.map_err(Error::from))
        .collect()
}

pub fn read_aggregates_csv(path: impl AsRef<Path>) -> Result<Vec<AggregateRow>> {
    let mut r = csv::Reader::from_path(path.as_ref())?;
    r.deserialize()
        .map(|row| row.map_err(Error::from))
        .collect()
}

/// Writes `aggregates.csv` (long form) and one parallel-coordinates file
/// per metric under `plotdata/`: a header `model,<dynamics...>` and one line
/// of means per model. Models and dynamics keep their order of first
/// appearance in `rows`.
pub fn emit_plot_data(rows: &[AggregateRow], dir: impl AsRef<Path>) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::param("no aggregate rows to emit"));
    }
    let dir = dir.as_ref();
    let plot_dir = dir.join("plotdata");
    fs::create_dir_all(&plot_dir).map_err(|e| Error::io(&plot_dir, e))?;
    write_csv(dir.join("aggregates.csv"), rows)?;

    let mut models: Vec<&str> = Vec::new();
    let mut dynamics: Vec<&str> = Vec::new();
    let mut metrics: Vec<&str> = Vec::new();
    for r in rows {
        for (list, v) in [
            (&mut models, r.model.as_str()),
            (&mut dynamics, r.dynamics.as_str()),
            (&mut metrics, r.metric.as_str()),
        ] {
            if !list.contains(&v) {
                list.push(v);
            }
        }
    }
    for metric in metrics {
        let path = plot_dir.join(format!("{metric}.csv"));
        let mut w = csv::Writer::from_path(&path)?;
        let mut header = vec!["model"];
        header.extend(&dynamics);
        w.write_record(&header)?;
        for model in &models {
            let mut line = vec![model.to_string()];
            for d in &dynamics {
                let cell = rows
                    .iter()
                    .find(|r| r.model == *model && r.dynamics == *d && r.metric == metric);
                line.push(cell.map_or(String::new(), |r| r.mean.to_string()));
            }
            w.write_record(&line)?;
        }
        w.flush().map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}
