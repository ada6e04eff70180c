use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use netcast::experiment::{
    aggregate, directed_models, read_runs_csv, undirected_models, write_runs_csv,
};
use netcast::{
    degree_probability_model, emit_plot_data, empirical_probability_model, huffman_build,
    run_experiment, run_s2_study, run_transmission, seeded_rng, simulate, Dynamics,
    ExperimentConfig, ExperimentOutcome, Graph, ModelKind, ModelSpec, Start, WalkKind64,
};

#[derive(Parser)]
#[command(
    name = "netcast",
    version,
    about = "Random-walk transmission of complex networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a network and write it as an edge list.
    Generate {
        #[arg(long, value_parser = parse_model)]
        model: ModelKind,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 8.0)]
        mean_degree: f64,
        /// WS rewiring probability.
        #[arg(long)]
        p: Option<f64>,
        /// BA edges per new node.
        #[arg(long)]
        m: Option<usize>,
        /// Reciprocity of the undirected-to-directed conversion.
        #[arg(long)]
        reciprocity: Option<f64>,
        /// Apply the directed pipeline (conversion, then LSCC).
        #[arg(long, default_value_t = false, action = clap::ArgAction::Set)]
        directed: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the symbol stream of one walk, one node id per line.
    Walk {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_parser = parse_dynamics, default_value = "RW")]
        dynamics: Dynamics,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = netcast::walk::DEFAULT_GAMMA)]
        gamma: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a Huffman dictionary and write it as `symbol<TAB>bits` lines.
    Codebook {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_parser = parse_dynamics, default_value = "RW")]
        dynamics: Dynamics,
        #[arg(long, default_value_t = netcast::walk::DEFAULT_GAMMA)]
        gamma: f64,
        /// Estimate the dictionary from a symbol stream instead of the topology.
        #[arg(long)]
        message: Option<PathBuf>,
        #[arg(long, default_value_t = netcast::transmission::DEFAULT_SMOOTHING)]
        smoothing: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One transmission run; prints a CSV header and one row of metrics.
    Transmit {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_parser = parse_dynamics, default_value = "RW")]
        dynamics: Dynamics,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = netcast::walk::DEFAULT_GAMMA)]
        gamma: f64,
        #[arg(long = "t-long", default_value_t = netcast::transmission::DEFAULT_T_LONG)]
        t_long: u64,
        #[arg(long, default_value_t = netcast::transmission::DEFAULT_T90_CAP)]
        cap: u64,
    },
    /// Run a full experiment grid.
    Experiment {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_enum)]
        preset: Option<Preset>,
        /// Network size for presets.
        #[arg(long, default_value_t = 1000)]
        n: usize,
        /// Mean degree for presets.
        #[arg(long, default_value_t = 8.0)]
        mean_degree: f64,
    },
    /// Aggregate a runs.csv and write aggregates and plot data.
    Report {
        #[arg(long)]
        runs: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(clap::Args)]
struct GridArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, action = clap::ArgAction::Set)]
    directed: Option<bool>,
    #[arg(long = "t-long")]
    t_long: Option<u64>,
    #[arg(long)]
    cap: Option<u64>,
    #[arg(long)]
    repetitions: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    Undirected,
    Directed,
    S2,
}

fn parse_model(s: &str) -> Result<ModelKind, String> {
    s.parse().map_err(|e: netcast::Error| e.to_string())
}

fn parse_dynamics(s: &str) -> Result<Dynamics, String> {
    s.parse().map_err(|e: netcast::Error| e.to_string())
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            fs::File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn kind(dynamics: Dynamics, gamma: f64) -> WalkKind64 {
    WalkKind64 {
        gamma,
        ..WalkKind64::of(dynamics)
    }
}

fn read_symbols(path: &Path) -> Result<Vec<usize>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.split_whitespace()
        .map(|t| t.parse().with_context(|| format!("bad symbol {t:?}")))
        .collect()
}

fn experiment(grid: GridArgs, preset: Option<Preset>, n: usize, k: f64) -> Result<bool> {
    let mut config = match (&grid.config, preset) {
        (Some(path), _) => ExperimentConfig::load(path)?,
        (None, Some(Preset::Undirected)) => ExperimentConfig::new(undirected_models(n, k), false),
        (None, Some(Preset::Directed)) => ExperimentConfig::new(directed_models(n, k), true),
        (None, Some(Preset::S2)) => {
            ExperimentConfig::new(vec![ModelSpec::new(ModelKind::Er, n, k)], true)
        }
        (None, None) => bail!("either --config or --preset is required"),
    };
    if let Some(s) = grid.seed {
        config.master_seed = s;
    }
    if let Some(w) = grid.workers {
        config.workers = w;
    }
    if let Some(o) = grid.out {
        config.output_path = Some(o);
    }
    if let Some(d) = grid.directed {
        config.directed = d;
    }
    if let Some(t) = grid.t_long {
        config.t_long = t;
    }
    if let Some(c) = grid.cap {
        config.t90_cap = c;
    }
    if let Some(r) = grid.repetitions {
        config.repetitions = r;
    }
    let out = config
        .output_path
        .clone()
        .unwrap_or_else(|| PathBuf::from("results"));
    let outcome: ExperimentOutcome = if matches!(preset, Some(Preset::S2)) && grid.config.is_none()
    {
        run_s2_study(&config)?
    } else {
        run_experiment(&config)?
    };
    outcome.write(&out)?;
    for f in &outcome.failures {
        eprintln!(
            "cell {} / {} rep {} failed: {}",
            f.model, f.dynamics, f.rep, f.message
        );
    }
    eprintln!(
        "{} runs, {} failed cells, written to {}",
        outcome.runs.len(),
        outcome.failures.len(),
        out.display()
    );
    Ok(outcome.failures.is_empty())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Generate {
            model,
            n,
            mean_degree,
            p,
            m,
            reciprocity,
            directed,
            seed,
            out,
        } => {
            let spec = ModelSpec {
                p,
                m,
                reciprocity,
                ..ModelSpec::new(model, n, mean_degree)
            };
            spec.validate()?;
            let g = spec.prepare(directed, &mut seeded_rng(seed))?;
            let mut w = output(out.as_deref())?;
            w.write_all(g.to_edge_list().as_bytes())?;
            w.flush()?;
        }
        Command::Walk {
            graph,
            dynamics,
            steps,
            seed,
            gamma,
            out,
        } => {
            let g = Graph::load(&graph)?;
            let seq = simulate(
                &g,
                kind(dynamics, gamma),
                steps,
                Start::Uniform,
                seeded_rng(seed),
            )?;
            let mut w = output(out.as_deref())?;
            for s in seq {
                writeln!(w, "{s}")?;
            }
            w.flush()?;
        }
        Command::Codebook {
            graph,
            dynamics,
            gamma,
            message,
            smoothing,
            out,
        } => {
            let g = Graph::load(&graph)?;
            let model = match message {
                Some(path) => {
                    empirical_probability_model(&read_symbols(&path)?, g.node_count(), smoothing)?
                }
                None => degree_probability_model(&g, &kind(dynamics, gamma))?,
            };
            let mut w = output(out.as_deref())?;
            w.write_all(huffman_build(&model)?.to_text().as_bytes())?;
            w.flush()?;
        }
        Command::Transmit {
            graph,
            dynamics,
            seed,
            gamma,
            t_long,
            cap,
        } => {
            let g = Graph::load(&graph)?;
            let m = run_transmission(&g, kind(dynamics, gamma), seed, cap, t_long)?;
            let opt = |v: Option<f64>| v.map_or(String::new(), |x| x.to_string());
            println!("dynamics,n,edges,t90,t90c,s90,sl,r90,rl,censored");
            println!(
                "{},{},{},{},{},{},{},{},{},{}",
                dynamics,
                g.node_count(),
                g.edge_count(),
                m.t90.map_or(String::new(), |t| t.to_string()),
                opt(m.t90c),
                opt(m.s90),
                m.sl,
                opt(m.r90),
                m.rl,
                m.censored
            );
        }
        Command::Experiment {
            grid,
            preset,
            n,
            mean_degree,
        } => return experiment(grid, preset, n, mean_degree),
        Command::Report { runs, out } => {
            let records = read_runs_csv(&runs)?;
            if records.is_empty() {
                bail!("{} has no runs", runs.display());
            }
            fs::create_dir_all(&out)?;
            write_runs_csv(out.join("runs.csv"), &records)?;
            emit_plot_data(&aggregate(&records), &out)?;
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
