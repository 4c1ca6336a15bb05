use std::borrow::Cow;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::estimators::{
    action_distribution, compute_q, estimate, ixb_transform, ActionDistribution, EstimatorKind,
};
use super::rates::{adaptive_rates_from_sum, RateMode};
use crate::error::{invalid_input, invalid_param, Error, Result};
use crate::graph::ObservationGraph;

/// The learners built on the exponential-weights template.
///
/// JSON form: `{"kind": "wix", "delta": 1.0}`, `{"kind": "ixt", "epsilon": 0.5}`,
/// `{"kind": "exp3"}`; fields that do not belong to the kind are rejected.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AlgorithmRepr", into = "AlgorithmRepr")]
pub enum Algorithm {
    /// Ignores side observations: importance weighting on the played arm.
    Exp3,
    /// Weighted observations with implicit exploration.
    Wix { delta: f64 },
    /// Observations below `epsilon` are discarded, the rest importance
    /// weighted by their quality.
    Ixt { epsilon: f64 },
    /// Observations below `epsilon` are discarded and the rest treated as
    /// perfect.
    Ixb { epsilon: f64 },
    /// Every observation used as is.
    Basic,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum AlgorithmName {
    Exp3,
    Wix,
    Ixt,
    Ixb,
    Basic,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgorithmRepr {
    kind: AlgorithmName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    epsilon: Option<f64>,
}

impl TryFrom<AlgorithmRepr> for Algorithm {
    type Error = Error;

    fn try_from(r: AlgorithmRepr) -> Result<Self> {
        let no_delta = |name: &str| match r.delta {
            Some(_) => Err(invalid_input(format!("{name} takes no delta"))),
            None => Ok(()),
        };
        let no_epsilon = |name: &str| match r.epsilon {
            Some(_) => Err(invalid_input(format!("{name} takes no epsilon"))),
            None => Ok(()),
        };
        let epsilon = |name: &str| {
            r.epsilon
                .ok_or_else(|| invalid_input(format!("{name} needs an epsilon")))
        };
        Ok(match r.kind {
            AlgorithmName::Exp3 => {
                no_delta("exp3")?;
                no_epsilon("exp3")?;
                Algorithm::Exp3
            }
            AlgorithmName::Basic => {
                no_delta("basic")?;
                no_epsilon("basic")?;
                Algorithm::Basic
            }
            AlgorithmName::Wix => {
                no_epsilon("wix")?;
                Algorithm::Wix {
                    delta: r.delta.unwrap_or(1.0),
                }
            }
            AlgorithmName::Ixt => {
                no_delta("ixt")?;
                Algorithm::Ixt {
                    epsilon: epsilon("ixt")?,
                }
            }
            AlgorithmName::Ixb => {
                no_delta("ixb")?;
                Algorithm::Ixb {
                    epsilon: epsilon("ixb")?,
                }
            }
        })
    }
}

impl From<Algorithm> for AlgorithmRepr {
    fn from(a: Algorithm) -> Self {
        let (kind, delta, epsilon) = match a {
            Algorithm::Exp3 => (AlgorithmName::Exp3, None, None),
            Algorithm::Wix { delta } => (AlgorithmName::Wix, Some(delta), None),
            Algorithm::Ixt { epsilon } => (AlgorithmName::Ixt, None, Some(epsilon)),
            Algorithm::Ixb { epsilon } => (AlgorithmName::Ixb, None, Some(epsilon)),
            Algorithm::Basic => (AlgorithmName::Basic, None, None),
        };
        AlgorithmRepr {
            kind,
            delta,
            epsilon,
        }
    }
}

impl Algorithm {
    pub fn estimator(&self) -> EstimatorKind {
        match *self {
            Algorithm::Exp3 | Algorithm::Ixb { .. } => EstimatorKind::Truncated { epsilon: 1.0 },
            Algorithm::Wix { delta } => EstimatorKind::Weighted { delta },
            Algorithm::Ixt { epsilon } => EstimatorKind::Truncated { epsilon },
            Algorithm::Basic => EstimatorKind::Basic,
        }
    }

    /// The graph the learner's estimator works with, given the revealed one.
    pub fn learner_graph<'a>(&self, g: &'a ObservationGraph) -> Result<Cow<'a, ObservationGraph>> {
        Ok(match *self {
            Algorithm::Exp3 => Cow::Owned(ObservationGraph::identity(g.n())),
            Algorithm::Ixb { epsilon } => Cow::Owned(ixb_transform(g, epsilon)?),
            _ => Cow::Borrowed(g),
        })
    }

    pub fn validate(&self) -> Result<()> {
        if let Algorithm::Ixb { epsilon } = *self {
            if !(0.0..=1.0).contains(&epsilon) {
                return Err(invalid_param(format!(
                    "threshold {epsilon} is not in [0, 1]"
                )));
            }
        }
        self.estimator().validate()
    }

    /// Short label, e.g. `wix` or `ixt@eps=0.5`.
    pub fn label(&self) -> String {
        match *self {
            Algorithm::Exp3 => "exp3".into(),
            Algorithm::Wix { delta: 1.0 } => "wix".into(),
            Algorithm::Wix { delta } => format!("wix@delta={delta}"),
            Algorithm::Ixt { epsilon } => format!("ixt@eps={epsilon}"),
            Algorithm::Ixb { epsilon } => format!("ixb@eps={epsilon}"),
            Algorithm::Basic => "basic".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicySpec {
    pub algorithm: Algorithm,
    pub rates: RateMode,
}

impl PolicySpec {
    pub fn new(algorithm: Algorithm, rates: RateMode) -> Self {
        Self { algorithm, rates }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        self.algorithm.validate()?;
        self.rates.validate(n)
    }

    pub fn label(&self) -> String {
        match self.rates {
            RateMode::Static { eta, gamma } => {
                format!("{}/static(eta={eta},gamma={gamma})", self.algorithm.label())
            }
            RateMode::Adaptive { r } => format!("{}/adaptive(r={r})", self.algorithm.label()),
        }
    }
}

/// What the learner computed while ingesting one round of feedback.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundOutcome {
    pub q: f64,
    pub eta: f64,
    pub gamma: f64,
    pub estimates: Vec<f64>,
    /// `min_i eta * estimate_i`; must stay at or above -1 for the
    /// exponential-weights analysis to apply.
    pub min_scaled_estimate: f64,
}

#[derive(Debug, Clone)]
struct PendingRound {
    p: ActionDistribution,
    chosen: usize,
    eta: f64,
    gamma: f64,
}

/// Learner state: cumulative loss estimates plus the history of `Q`,
/// `eta` and `gamma`. Each round is [`Policy::play`] followed by
/// [`Policy::ingest`].
#[derive(Debug, Clone)]
pub struct Policy {
    spec: PolicySpec,
    n: usize,
    cumulative: Vec<f64>,
    q_sum: f64,
    q_history: Vec<f64>,
    eta_history: Vec<f64>,
    gamma_history: Vec<f64>,
    pending: Option<PendingRound>,
    safe_rates: bool,
}

impl Policy {
    /// `noise_bound` is the environment's `R`, used to check that the
    /// rates satisfy `gamma >= eta * R`.
    pub fn new(spec: PolicySpec, n: usize, noise_bound: f64) -> Result<Self> {
        if n == 0 {
            return Err(invalid_param("a policy needs at least one arm"));
        }
        spec.validate(n)?;
        let safe_rates = match spec.rates {
            RateMode::Static { eta, gamma } => gamma >= eta * noise_bound,
            RateMode::Adaptive { r } => r >= noise_bound,
        };
        if !safe_rates {
            log::warn!(
                "{}: rates violate gamma >= eta * R for R = {noise_bound}; \
                 loss estimates may fall below -1/eta",
                spec.label()
            );
        }
        Ok(Self {
            spec,
            n,
            cumulative: vec![0.0; n],
            q_sum: 0.0,
            q_history: Vec::new(),
            eta_history: Vec::new(),
            gamma_history: Vec::new(),
            pending: None,
            safe_rates,
        })
    }

    pub fn spec(&self) -> &PolicySpec {
        &self.spec
    }

    pub fn n_arms(&self) -> usize {
        self.n
    }

    /// Completed rounds.
    pub fn round(&self) -> usize {
        self.q_history.len()
    }

    pub fn cumulative_estimates(&self) -> &[f64] {
        &self.cumulative
    }

    pub fn q_history(&self) -> &[f64] {
        &self.q_history
    }

    pub fn eta_history(&self) -> &[f64] {
        &self.eta_history
    }

    pub fn gamma_history(&self) -> &[f64] {
        &self.gamma_history
    }

    /// Whether the configured rates satisfy `gamma >= eta * R`.
    pub fn rates_are_safe(&self) -> bool {
        self.safe_rates
    }

    /// `(eta_t, gamma_t)` for the upcoming round.
    pub fn current_rates(&self) -> Result<(f64, f64)> {
        match self.spec.rates {
            RateMode::Static { eta, gamma } => Ok((eta, gamma)),
            RateMode::Adaptive { r } => adaptive_rates_from_sum(self.q_sum, self.n, r),
        }
    }

    /// Draws the arm to play this round.
    pub fn play<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<(usize, ActionDistribution)> {
        if self.pending.is_some() {
            return Err(Error::ProtocolViolation(
                "play called twice without ingesting feedback".into(),
            ));
        }
        let (eta, gamma) = self.current_rates()?;
        let p = action_distribution(&self.cumulative, eta)?;
        let chosen = p.sample(rng);
        self.pending = Some(PendingRound {
            p: p.clone(),
            chosen,
            eta,
            gamma,
        });
        Ok((chosen, p))
    }

    /// Updates the cumulative estimates with the revealed graph and feedback.
    pub fn ingest(&mut self, graph: &ObservationGraph, feedback: &[f64]) -> Result<RoundOutcome> {
        let Some(round) = self.pending.take() else {
            return Err(Error::ProtocolViolation(
                "feedback received before play".into(),
            ));
        };
        if graph.n() != self.n || feedback.len() != self.n {
            self.pending = Some(round);
            return Err(invalid_input(
                "graph or feedback size does not match the arm count",
            ));
        }
        let kind = self.spec.algorithm.estimator();
        let view = self.spec.algorithm.learner_graph(graph)?;
        let estimates = estimate(kind, &round.p, &view, round.chosen, feedback, round.gamma)?;
        let q = compute_q(&round.p, &view, round.gamma, kind)?;

        let mut min_scaled = f64::INFINITY;
        for (acc, &e) in self.cumulative.iter_mut().zip(&estimates) {
            *acc += e;
            min_scaled = min_scaled.min(round.eta * e);
        }
        self.q_sum += q;
        self.q_history.push(q);
        self.eta_history.push(round.eta);
        self.gamma_history.push(round.gamma);

        Ok(RoundOutcome {
            q,
            eta: round.eta,
            gamma: round.gamma,
            estimates,
            min_scaled_estimate: min_scaled,
        })
    }
}
