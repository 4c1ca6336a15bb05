use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde_json::json;

use sideobs::environment::{gen_random_walk_losses, WalkAssignment};
use sideobs::graph::{
    effective_independence_number_with_budget, gen_grid_geometric, gen_grid_geometric_with_spacing,
    GridWeightRule, ObservationGraph, DEFAULT_NODE_BUDGET,
};
use sideobs::harness::output::{self, Meta, AGGREGATE_FILE, META_FILE, SCATTER_FILE, TRACE_FILE};
use sideobs::harness::{
    random_alpha_experiment, random_graph, stream_rng, Experiment, RunConfig, StreamPurpose,
};
use sideobs::Result;

#[derive(Parser)]
#[command(version, about = "Bandits with noisy weighted side observations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured policy; writes trace.csv (repetition 0),
    /// aggregate.csv and meta.json
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Overrides the config's master seed
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides the config's repetition count
        #[arg(long)]
        reps: Option<usize>,
    },
    /// Exp3-IXt and Exp3-IXb over a threshold grid, with Exp3-WIX and Exp3
    /// as references; writes aggregate.csv and meta.json
    SweepEpsilon {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1"
        )]
        eps: Vec<f64>,
        #[arg(long)]
        reps: Option<usize>,
    },
    /// Effective independence numbers of random U(lo, hi) graphs; writes
    /// alpha_scatter.csv and meta.json
    RandomAlpha {
        #[arg(long, value_delimiter = ',', default_value = "5,10,20,30")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 0.0)]
        lo: f64,
        #[arg(long, default_value_t = 1.0)]
        hi: f64,
        #[arg(long, default_value_t = 100)]
        graphs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Prints alpha*, eps* and the ratio curve of a graph file as JSON
    AlphaStar {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Writes an interleaved random-walk loss sequence as CSV
    GenLosses {
        #[arg(long)]
        n_arms: usize,
        #[arg(long)]
        horizon: usize,
        #[arg(long, default_value_t = 20)]
        n_walks: usize,
        #[arg(long, default_value_t = 0.05)]
        step_sigma: f64,
        /// fixed | rotating
        #[arg(long, default_value = "fixed", value_parser = parse_serde::<WalkAssignment>)]
        assignment: WalkAssignment,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Writes an observation graph as JSON
    GenGraph {
        #[command(subcommand)]
        kind: GraphKind,
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GraphKind {
    /// side x side grid; rule is inv_one_plus_d2 or min_3_over_d2
    Grid {
        #[arg(long)]
        side: usize,
        #[arg(long, value_parser = parse_serde::<GridWeightRule>)]
        rule: GridWeightRule,
        #[arg(long)]
        spacing: Option<f64>,
    },
    /// i.i.d. U(lo, hi) weights; the same (n, lo, hi, seed) as an
    /// alpha_scatter.csv row regenerates that row's graph
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        lo: f64,
        #[arg(long)]
        hi: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    Identity {
        #[arg(long)]
        n: usize,
    },
    Complete {
        #[arg(long)]
        n: usize,
    },
}

fn parse_serde<T: DeserializeOwned>(s: &str) -> std::result::Result<T, String> {
    serde_json::from_value(serde_json::Value::String(s.to_owned())).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", json!({ "error": e.kind(), "message": e.to_string() }));
            ExitCode::FAILURE
        }
    }
}

fn load_config(path: &Path, reps: Option<usize>) -> Result<RunConfig> {
    let mut cfg = RunConfig::load(path)?;
    if let Some(r) = reps {
        cfg.repetitions = r;
    }
    Ok(cfg)
}

fn out_dir(dir: &Path) -> Result<&Path> {
    fs::create_dir_all(dir)?;
    Ok(dir)
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Run {
            config,
            out,
            seed,
            reps,
        } => {
            let mut cfg = load_config(&config, reps)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let exp = Experiment::new(cfg)?;
            let cfg = exp.config();
            let traces = exp.run_traces(&cfg.policy, cfg.repetitions)?;
            let agg = sideobs::harness::AggregateResult::from_traces(cfg.policy.label(), &traces)?;
            let dir = out_dir(&out)?;
            traces[0].write_csv(fs::File::create(dir.join(TRACE_FILE))?)?;
            output::write_aggregate_csv(fs::File::create(dir.join(AGGREGATE_FILE))?, [&agg])?;
            Meta::new("run", Some(cfg))
                .with("mean_final_regret", agg.mean)?
                .with("std_final_regret", agg.std)?
                .save(dir.join(META_FILE))?;
            log::info!(
                "{}: mean regret {:.3} over {} reps",
                agg.key,
                agg.mean,
                agg.repetitions
            );
        }
        Command::SweepEpsilon {
            config,
            out,
            eps,
            reps,
        } => {
            let cfg = load_config(&config, reps)?;
            let exp = Experiment::new(cfg)?;
            let rows = exp.sweep_epsilon(&eps, exp.config().repetitions)?;
            let dir = out_dir(&out)?;
            output::write_sweep_csv(fs::File::create(dir.join(AGGREGATE_FILE))?, &rows)?;
            Meta::new("sweep-epsilon", Some(exp.config()))
                .with("epsilons", &eps)?
                .save(dir.join(META_FILE))?;
        }
        Command::RandomAlpha {
            sizes,
            lo,
            hi,
            graphs,
            seed,
            budget,
            out,
        } => {
            let rows = random_alpha_experiment(&sizes, lo, hi, graphs, seed, budget)?;
            let dir = out_dir(&out)?;
            output::write_scatter_csv(fs::File::create(dir.join(SCATTER_FILE))?, &rows)?;
            Meta::new("random-alpha", None)
                .with(
                    "parameters",
                    json!({ "sizes": sizes, "lo": lo, "hi": hi, "graphs": graphs, "seed": seed, "budget": budget }),
                )?
                .save(dir.join(META_FILE))?;
        }
        Command::AlphaStar { graph, budget } => {
            let g = ObservationGraph::load(&graph)?;
            let r = effective_independence_number_with_budget(&g, budget)?;
            emit(&serde_json::to_string_pretty(&r)?)?;
        }
        Command::GenLosses {
            n_arms,
            horizon,
            n_walks,
            step_sigma,
            assignment,
            seed,
            out,
        } => {
            let mut rng = stream_rng(seed, StreamPurpose::Losses, 0);
            let losses =
                gen_random_walk_losses(n_arms, n_walks, horizon, step_sigma, assignment, &mut rng)?;
            losses.save(&out)?;
        }
        Command::GenGraph { kind, out } => {
            let g = match kind {
                GraphKind::Grid {
                    side,
                    rule,
                    spacing,
                } => match spacing {
                    Some(h) => gen_grid_geometric_with_spacing(side, rule, h)?,
                    None => gen_grid_geometric(side, rule)?,
                },
                GraphKind::Random { n, lo, hi, seed } => random_graph(n, lo, hi, seed)?,
                GraphKind::Identity { n } => ObservationGraph::identity(n),
                GraphKind::Complete { n } => ObservationGraph::complete(n),
            };
            match out {
                Some(path) => g.save(path)?,
                None => emit(&g.to_json_string()?)?,
            }
        }
    }
    Ok(())
}

/// Prints to stdout; a reader that went away early is not an error.
fn emit(text: &str) -> std::io::Result<()> {
    match writeln!(std::io::stdout().lock(), "{text}") {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => r,
    }
}
