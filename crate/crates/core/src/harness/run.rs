use std::sync::Arc;

use rayon::prelude::*;

use super::config::{GraphSpec, LossSpec, RunConfig};
use super::seeds::{stream_rng, StreamPurpose};
use super::trace::{AggregateResult, RegretTrace};
use crate::environment::{gen_random_walk_losses, Environment, GraphSchedule, LossSequence};
use crate::error::{Error, Result};
use crate::graph::{
    gen_grid_geometric, gen_grid_geometric_with_spacing, gen_random_uniform, ObservationGraph,
};
use crate::policies::{Algorithm, Policy, PolicySpec};

/// A validated config with its graph and loss sequence materialized. The
/// loss sequence is generated once and shared by every repetition and every
/// policy run on the experiment.
#[derive(Debug, Clone)]
pub struct Experiment {
    config: RunConfig,
    graph: Arc<ObservationGraph>,
    losses: Arc<LossSequence>,
}

impl Experiment {
    pub fn new(config: RunConfig) -> Result<Self> {
        config.validate()?;
        let graph = Arc::new(build_graph(&config)?);
        let losses = Arc::new(build_losses(&config)?);
        if graph.n() != config.n_arms {
            return Err(Error::Validation(format!(
                "graph has {} nodes, n_arms is {}",
                graph.n(),
                config.n_arms
            )));
        }
        if losses.n_arms() != config.n_arms || losses.horizon() != config.horizon {
            return Err(Error::Validation(format!(
                "loss sequence is {}x{}, config asks for {}x{}",
                losses.horizon(),
                losses.n_arms(),
                config.horizon,
                config.n_arms
            )));
        }
        Ok(Self {
            config,
            graph,
            losses,
        })
    }

    pub fn config(&self) -> &RunConfig {
        &self.config
    }

    pub fn graph(&self) -> &Arc<ObservationGraph> {
        &self.graph
    }

    pub fn losses(&self) -> &Arc<LossSequence> {
        &self.losses
    }

    /// Repetition `rep` of the configured policy.
    pub fn run_episode(&self, rep: u64) -> Result<RegretTrace> {
        self.run_policy_episode(&self.config.policy, rep)
    }

    /// Repetition `rep` of `spec`. Noise and arm draws come from the
    /// repetition's own streams, so different policies see the same noise.
    pub fn run_policy_episode(&self, spec: &PolicySpec, rep: u64) -> Result<RegretTrace> {
        let cfg = &self.config;
        let n = cfg.n_arms;
        let t_max = cfg.horizon;
        let mut env = Environment::new(
            Arc::clone(&self.losses),
            GraphSchedule::Static(Arc::clone(&self.graph)),
            cfg.noise,
        )?;
        let mut policy = Policy::new(*spec, n, cfg.noise.bound)?;
        let mut noise_rng = stream_rng(cfg.seed, StreamPurpose::Noise, rep);
        let mut sampling_rng = stream_rng(cfg.seed, StreamPurpose::Sampling, rep);

        let mut trace = RegretTrace {
            policy: spec.label(),
            arms: Vec::with_capacity(t_max),
            losses: Vec::with_capacity(t_max),
            cumulative_loss: Vec::with_capacity(t_max),
            cumulative_regret: Vec::with_capacity(t_max),
            arm_totals: vec![0.0; n],
            q: Vec::with_capacity(t_max),
            eta: Vec::with_capacity(t_max),
            gamma: Vec::with_capacity(t_max),
            min_scaled_estimate: Vec::with_capacity(t_max),
            final_regret: 0.0,
        };
        let mut learner_total = 0.0;
        for _ in 0..t_max {
            let (arm, _) = policy.play(&mut sampling_rng)?;
            let (loss, step) = env.step(arm, &mut noise_rng)?;
            let outcome = policy.ingest(&step.graph, &step.feedback)?;

            learner_total += loss;
            for (acc, l) in trace.arm_totals.iter_mut().zip(&step.losses) {
                *acc += l;
            }
            let best = trace
                .arm_totals
                .iter()
                .copied()
                .fold(f64::INFINITY, f64::min);

            trace.arms.push(arm);
            trace.losses.push(loss);
            trace.cumulative_loss.push(learner_total);
            trace.cumulative_regret.push(learner_total - best);
            trace.q.push(outcome.q);
            trace.eta.push(outcome.eta);
            trace.gamma.push(outcome.gamma);
            trace.min_scaled_estimate.push(outcome.min_scaled_estimate);
        }
        trace.final_regret = trace.cumulative_regret.last().copied().unwrap_or(0.0);
        Ok(trace)
    }

    /// Repetitions `0..n_reps` of `spec`, in repetition order.
    pub fn run_traces(&self, spec: &PolicySpec, n_reps: usize) -> Result<Vec<RegretTrace>> {
        (0..n_reps as u64)
            .into_par_iter()
            .map(|rep| self.run_policy_episode(spec, rep))
            .collect()
    }

    pub fn run_batch(&self, spec: &PolicySpec, n_reps: usize) -> Result<AggregateResult> {
        AggregateResult::from_traces(spec.label(), &self.run_traces(spec, n_reps)?)
    }

    /// Exp3-IXt and Exp3-IXb over `epsilons`, with Exp3-WIX and Exp3 as
    /// threshold-free references. Every row uses the config's rate mode.
    pub fn sweep_epsilon(&self, epsilons: &[f64], n_reps: usize) -> Result<Vec<SweepRow>> {
        if let Some(e) = epsilons.iter().find(|e| !(0.0..=1.0).contains(*e)) {
            return Err(Error::InvalidParameter(format!(
                "threshold {e} is not in [0, 1]"
            )));
        }
        let rates = self.config.policy.rates;
        let mut cells: Vec<(Option<f64>, Algorithm)> = vec![
            (None, Algorithm::Wix { delta: 1.0 }),
            (None, Algorithm::Exp3),
        ];
        for &epsilon in epsilons {
            cells.push((Some(epsilon), Algorithm::Ixt { epsilon }));
            cells.push((Some(epsilon), Algorithm::Ixb { epsilon }));
        }
        cells
            .into_iter()
            .map(|(epsilon, algorithm)| {
                let spec = PolicySpec::new(algorithm, rates);
                Ok(SweepRow {
                    algorithm,
                    epsilon,
                    result: self.run_batch(&spec, n_reps)?,
                })
            })
            .collect()
    }
}

/// One cell of an epsilon sweep; `epsilon` is `None` for reference rows.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub algorithm: Algorithm,
    pub epsilon: Option<f64>,
    pub result: AggregateResult,
}

fn build_graph(cfg: &RunConfig) -> Result<ObservationGraph> {
    match &cfg.graph {
        GraphSpec::Grid {
            side,
            rule,
            spacing,
        } => match spacing {
            Some(h) => gen_grid_geometric_with_spacing(*side, *rule, *h),
            None => gen_grid_geometric(*side, *rule),
        },
        GraphSpec::RandomUniform { lo, hi } => {
            let mut rng = stream_rng(cfg.seed, StreamPurpose::Graph, 0);
            gen_random_uniform(cfg.n_arms, *lo, *hi, &mut rng)
        }
        GraphSpec::Identity {} => Ok(ObservationGraph::identity(cfg.n_arms)),
        GraphSpec::Complete {} => Ok(ObservationGraph::complete(cfg.n_arms)),
        GraphSpec::File { path } => ObservationGraph::load(path),
    }
}

fn build_losses(cfg: &RunConfig) -> Result<LossSequence> {
    match &cfg.losses {
        LossSpec::RandomWalk {
            n_walks,
            step_sigma,
            assignment,
        } => {
            let mut rng = stream_rng(cfg.seed, StreamPurpose::Losses, 0);
            gen_random_walk_losses(
                cfg.n_arms,
                *n_walks,
                cfg.horizon,
                *step_sigma,
                *assignment,
                &mut rng,
            )
        }
        LossSpec::Constant { value } => LossSequence::constant(cfg.horizon, cfg.n_arms, *value),
        LossSpec::File { path } => LossSequence::load(path),
    }
}

/// Materializes `cfg` with master seed `seed` and runs repetition 0.
pub fn run_episode(cfg: &RunConfig, seed: u64) -> Result<RegretTrace> {
    let mut cfg = cfg.clone();
    cfg.seed = seed;
    Experiment::new(cfg)?.run_episode(0)
}

/// Repetitions `0..n_reps` of the configured policy on one shared loss
/// sequence.
pub fn run_batch(cfg: &RunConfig, n_reps: usize) -> Result<AggregateResult> {
    let exp = Experiment::new(cfg.clone())?;
    exp.run_batch(&cfg.policy, n_reps)
}

pub fn sweep_epsilon(cfg: &RunConfig, epsilons: &[f64], n_reps: usize) -> Result<Vec<SweepRow>> {
    Experiment::new(cfg.clone())?.sweep_epsilon(epsilons, n_reps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environment::NoiseModel;
    use crate::policies::RateMode;

    fn small_config(policy: PolicySpec) -> RunConfig {
        RunConfig {
            n_arms: 9,
            horizon: 300,
            policy,
            graph: GraphSpec::Grid {
                side: 3,
                rule: crate::graph::GridWeightRule::Min3OverD2,
                spacing: None,
            },
            losses: LossSpec::RandomWalk {
                n_walks: 4,
                step_sigma: 0.05,
                assignment: Default::default(),
            },
            noise: NoiseModel::default(),
            seed: 11,
            repetitions: 1,
        }
    }

    fn wix() -> PolicySpec {
        PolicySpec::new(Algorithm::Wix { delta: 1.0 }, RateMode::Adaptive { r: 1.0 })
    }

    #[test]
    fn regret_identity_holds() {
        let trace = run_episode(&small_config(wix()), 11).unwrap();
        let exp = Experiment::new(small_config(wix())).unwrap();
        let totals = exp.losses().arm_totals();
        assert_eq!(trace.arm_totals, totals);
        let min = totals.iter().copied().fold(f64::INFINITY, f64::min);
        assert_eq!(trace.final_regret, trace.learner_total() - min);
        let mut acc = 0.0;
        for (l, c) in trace.losses.iter().zip(&trace.cumulative_loss) {
            acc += l;
            assert_eq!(acc, *c);
        }
    }

    #[test]
    fn constant_losses_give_zero_regret() {
        for algorithm in [
            Algorithm::Exp3,
            Algorithm::Wix { delta: 1.0 },
            Algorithm::Ixb { epsilon: 0.5 },
        ] {
            let mut cfg = small_config(PolicySpec::new(algorithm, RateMode::Adaptive { r: 1.0 }));
            cfg.losses = LossSpec::Constant { value: 0.4 };
            let trace = run_episode(&cfg, 1).unwrap();
            assert!(trace.cumulative_regret.iter().all(|r| r.abs() < 1e-9));
        }
    }

    #[test]
    fn bandit_graph_has_q_equal_to_n_without_exploration() {
        let spec = PolicySpec::new(
            Algorithm::Exp3,
            RateMode::Static {
                eta: 0.05,
                gamma: 0.0,
            },
        );
        let mut cfg = small_config(spec);
        cfg.graph = GraphSpec::Identity {};
        let trace = run_episode(&cfg, 2).unwrap();
        assert!(trace.q.iter().all(|&q| (q - 9.0).abs() < 1e-9));
        assert!(trace.final_regret <= 300.0);
    }

    #[test]
    fn batch_is_prefix_stable() {
        let exp = Experiment::new(small_config(wix())).unwrap();
        let a = exp.run_batch(&wix(), 3).unwrap();
        let b = exp.run_batch(&wix(), 6).unwrap();
        assert_eq!(a.final_regrets[..], b.final_regrets[..3]);
        let one = exp.run_batch(&wix(), 1).unwrap();
        assert_eq!(one.std, 0.0);
        assert_eq!(one.mean, one.final_regrets[0]);
    }

    #[test]
    fn mismatched_loss_file_is_a_validation_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("l.csv");
        LossSequence::constant(10, 3, 0.5)
            .unwrap()
            .save(&path)
            .unwrap();
        let mut cfg = small_config(wix());
        cfg.losses = LossSpec::File { path };
        assert!(matches!(Experiment::new(cfg), Err(Error::Validation(_))));
    }
}
