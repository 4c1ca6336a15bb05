//! The oblivious environment: a pre-generated loss sequence, a (static or
//! per-round) observation graph, and bounded zero-mean observation noise.
//!
//! Each round the learner plays an arm, suffers that arm's loss, and then
//! sees for every arm `i` the feedback
//! `c_i = s(I, i) * loss_i + (1 - s(I, i)) * noise_i`.

use std::io::{Read, Write};
use std::path::Path;
use std::sync::Arc;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{invalid_input, invalid_param, Error, Result};
use crate::graph::ObservationGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseKind {
    /// Uniform on `[-R, R]`.
    UniformSymmetric,
    /// `+R` or `-R` with probability one half each.
    RademacherScaled,
    Zero,
}

/// Zero-mean observation noise bounded by `bound` in absolute value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseModel {
    pub distribution: NoiseKind,
    pub bound: f64,
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self {
            distribution: NoiseKind::UniformSymmetric,
            bound: 1.0,
        }
    }
}

impl NoiseModel {
    pub fn new(distribution: NoiseKind, bound: f64) -> Result<Self> {
        let m = Self {
            distribution,
            bound,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn zero() -> Self {
        Self {
            distribution: NoiseKind::Zero,
            bound: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.bound >= 0.0 && self.bound.is_finite()) {
            return Err(invalid_param(format!(
                "noise bound {} must be finite and non-negative",
                self.bound
            )));
        }
        Ok(())
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self.distribution {
            NoiseKind::UniformSymmetric => self.bound * (2.0 * rng.random::<f64>() - 1.0),
            NoiseKind::RademacherScaled => {
                if rng.random::<bool>() {
                    self.bound
                } else {
                    -self.bound
                }
            }
            NoiseKind::Zero => 0.0,
        }
    }
}

/// `T x N` losses in `[0, 1]`, row `t` holding the losses of round `t + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct LossSequence {
    n_arms: usize,
    losses: Vec<f64>,
}

impl LossSequence {
    pub fn new(horizon: usize, n_arms: usize, losses: Vec<f64>) -> Result<Self> {
        if losses.len() != horizon * n_arms {
            return Err(invalid_input(format!(
                "expected {} losses for T = {horizon}, N = {n_arms}, got {}",
                horizon * n_arms,
                losses.len()
            )));
        }
        if let Some(k) = losses.iter().position(|l| !(0.0..=1.0).contains(l)) {
            return Err(invalid_input(format!(
                "loss {} at round {}, arm {} is outside [0, 1]",
                losses[k],
                k / n_arms + 1,
                k % n_arms
            )));
        }
        Ok(Self { n_arms, losses })
    }

    /// Every arm suffers `value` in every round.
    pub fn constant(horizon: usize, n_arms: usize, value: f64) -> Result<Self> {
        Self::new(horizon, n_arms, vec![value; horizon * n_arms])
    }

    pub fn horizon(&self) -> usize {
        self.losses.len().checked_div(self.n_arms).unwrap_or(0)
    }

    pub fn n_arms(&self) -> usize {
        self.n_arms
    }

    /// Losses of round `index` (0-based).
    pub fn round(&self, index: usize) -> &[f64] {
        &self.losses[index * self.n_arms..(index + 1) * self.n_arms]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.losses
    }

    /// Total loss of every arm over the whole sequence.
    pub fn arm_totals(&self) -> Vec<f64> {
        let mut totals = vec![0.0; self.n_arms];
        for row in self.losses.chunks(self.n_arms.max(1)) {
            for (acc, l) in totals.iter_mut().zip(row) {
                *acc += l;
            }
        }
        totals
    }

    /// CSV with header `arm_0,...,arm_{N-1}` and one row per round. Values
    /// use the shortest representation that parses back to the same `f64`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record((0..self.n_arms).map(|i| format!("arm_{i}")))?;
        for t in 0..self.horizon() {
            w.write_record(self.round(t).iter().map(|l| l.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(reader);
        let headers = r.headers()?.clone();
        let n_arms = headers.len();
        for (i, h) in headers.iter().enumerate() {
            if h != format!("arm_{i}") {
                return Err(invalid_input(format!(
                    "loss CSV column {i} is named {h:?}, expected \"arm_{i}\""
                )));
            }
        }
        let mut losses = Vec::new();
        let mut horizon = 0;
        for record in r.records() {
            let record = record?;
            for field in record.iter() {
                losses.push(field.trim().parse::<f64>().map_err(|e| {
                    invalid_input(format!("row {}: cannot parse {field:?}: {e}", horizon + 1))
                })?);
            }
            horizon += 1;
        }
        Self::new(horizon, n_arms, losses)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_csv(std::fs::File::create(path)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_csv(std::fs::File::open(path)?)
    }
}

/// How the random walks are distributed over the arms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WalkAssignment {
    /// Arm `i` follows walk `i mod n_walks` for the whole run.
    #[default]
    Fixed,
    /// Arm `i` takes walk `(i + t) mod n_walks` in round `t`.
    Rotating,
}

/// Losses built from `n_walks` clipped Gaussian random walks that start at
/// independent `U(0, 1)` values.
pub fn gen_random_walk_losses<R: Rng + ?Sized>(
    n_arms: usize,
    n_walks: usize,
    horizon: usize,
    step_sigma: f64,
    assignment: WalkAssignment,
    rng: &mut R,
) -> Result<LossSequence> {
    if n_arms == 0 || n_walks == 0 || horizon == 0 {
        return Err(invalid_param(format!(
            "random-walk losses need n_arms, n_walks, horizon >= 1 \
             (got {n_arms}, {n_walks}, {horizon})"
        )));
    }
    let step = Normal::new(0.0, step_sigma)
        .ok()
        .filter(|_| step_sigma > 0.0)
        .ok_or_else(|| invalid_param(format!("step_sigma {step_sigma} must be positive")))?;

    let mut walks: Vec<f64> = (0..n_walks).map(|_| rng.random::<f64>()).collect();
    let mut losses = Vec::with_capacity(horizon * n_arms);
    for t in 0..horizon {
        if t > 0 {
            for w in walks.iter_mut() {
                *w = (*w + step.sample(rng)).clamp(0.0, 1.0);
            }
        }
        losses.extend((0..n_arms).map(|i| match assignment {
            WalkAssignment::Fixed => walks[i % n_walks],
            WalkAssignment::Rotating => walks[(i + t) % n_walks],
        }));
    }
    LossSequence::new(horizon, n_arms, losses)
}

/// `c_i = s(chosen, i) * losses_i + (1 - s(chosen, i)) * noise_i`.
pub fn emit_feedback(
    g: &ObservationGraph,
    losses: &[f64],
    chosen: usize,
    noise: &[f64],
) -> Result<Vec<f64>> {
    let n = g.n();
    if losses.len() != n || noise.len() != n {
        return Err(invalid_input(format!(
            "graph has {n} arms but got {} losses and {} noise values",
            losses.len(),
            noise.len()
        )));
    }
    if chosen >= n {
        return Err(invalid_input(format!(
            "arm {chosen} out of range for {n} arms"
        )));
    }
    Ok(g.row(chosen)
        .iter()
        .zip(losses.iter().zip(noise))
        .map(|(&s, (&l, &xi))| s * l + (1.0 - s) * xi)
        .collect())
}

/// Observation graphs over the rounds of a run.
#[derive(Debug, Clone)]
pub enum GraphSchedule {
    Static(Arc<ObservationGraph>),
    /// One graph per round.
    PerRound(Vec<Arc<ObservationGraph>>),
}

impl GraphSchedule {
    pub fn graph(&self, round_index: usize) -> &Arc<ObservationGraph> {
        match self {
            GraphSchedule::Static(g) => g,
            GraphSchedule::PerRound(gs) => &gs[round_index],
        }
    }
}

impl From<ObservationGraph> for GraphSchedule {
    fn from(g: ObservationGraph) -> Self {
        GraphSchedule::Static(Arc::new(g))
    }
}

/// Everything that happened in one round.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvironmentStep {
    /// 1-based round number.
    pub round: usize,
    pub action: usize,
    pub graph: Arc<ObservationGraph>,
    pub losses: Vec<f64>,
    pub noise: Vec<f64>,
    pub feedback: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct Environment {
    losses: Arc<LossSequence>,
    graphs: GraphSchedule,
    noise: NoiseModel,
    next_round: usize,
}

impl Environment {
    pub fn new(
        losses: Arc<LossSequence>,
        graphs: GraphSchedule,
        noise: NoiseModel,
    ) -> Result<Self> {
        noise.validate()?;
        let n = losses.n_arms();
        match &graphs {
            GraphSchedule::Static(g) if g.n() != n => {
                return Err(invalid_input(format!(
                    "graph has {} nodes but the loss sequence has {n} arms",
                    g.n()
                )))
            }
            GraphSchedule::PerRound(gs) => {
                if gs.len() != losses.horizon() {
                    return Err(invalid_input(format!(
                        "graph schedule covers {} rounds, horizon is {}",
                        gs.len(),
                        losses.horizon()
                    )));
                }
                if gs.iter().any(|g| g.n() != n) {
                    return Err(invalid_input(
                        "graph schedule size does not match the arm count",
                    ));
                }
            }
            _ => {}
        }
        Ok(Self {
            losses,
            graphs,
            noise,
            next_round: 0,
        })
    }

    pub fn n_arms(&self) -> usize {
        self.losses.n_arms()
    }

    pub fn horizon(&self) -> usize {
        self.losses.horizon()
    }

    /// Rounds played so far.
    pub fn rounds_played(&self) -> usize {
        self.next_round
    }

    pub fn losses(&self) -> &LossSequence {
        &self.losses
    }

    /// Graph the environment will reveal in the upcoming round.
    pub fn current_graph(&self) -> Option<&Arc<ObservationGraph>> {
        (self.next_round < self.horizon()).then(|| self.graphs.graph(self.next_round))
    }

    /// Plays `action` in the current round; returns the incurred loss and the
    /// round record. Noise is drawn for every arm from `rng`.
    pub fn step<R: Rng + ?Sized>(
        &mut self,
        action: usize,
        rng: &mut R,
    ) -> Result<(f64, EnvironmentStep)> {
        let t = self.next_round;
        if t >= self.horizon() {
            return Err(Error::HorizonExceeded {
                round: t + 1,
                horizon: self.horizon(),
            });
        }
        let n = self.n_arms();
        if action >= n {
            return Err(invalid_input(format!(
                "arm {action} out of range for {n} arms"
            )));
        }
        let graph = Arc::clone(self.graphs.graph(t));
        let losses = self.losses.round(t).to_vec();
        let noise: Vec<f64> = (0..n).map(|_| self.noise.sample(rng)).collect();
        let feedback = emit_feedback(&graph, &losses, action, &noise)?;
        self.next_round += 1;
        Ok((
            losses[action],
            EnvironmentStep {
                round: t + 1,
                action,
                graph,
                losses,
                noise,
                feedback,
            },
        ))
    }
}
