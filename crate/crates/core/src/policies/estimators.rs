use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid_input, invalid_param, Error, Result};
use crate::graph::ObservationGraph;

/// Log-weights below this are clamped so that every arm keeps a strictly
/// positive (normal) probability.
const MIN_LOG_WEIGHT: f64 = -700.0;

/// Probability vector over the arms, strictly positive and summing to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionDistribution(Vec<f64>);

impl ActionDistribution {
    pub fn uniform(n: usize) -> Self {
        Self(vec![1.0 / n as f64; n])
    }

    /// Wraps an explicit probability vector after checking it lies on the
    /// simplex (entries positive, sum within `1e-9` of one).
    pub fn from_probs(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() || p.iter().any(|&x| !(x > 0.0 && x <= 1.0)) {
            return Err(invalid_input("probabilities must lie in (0, 1]"));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(invalid_input(format!("probabilities sum to {total}")));
        }
        Ok(Self(p))
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Inverse-CDF lookup of a uniform draw `u` in `[0, 1)`.
    pub fn arm_for(&self, u: f64) -> usize {
        let mut acc = 0.0;
        for (i, &p) in self.0.iter().enumerate() {
            acc += p;
            if u < acc {
                return i;
            }
        }
        // rounding left `u` above the accumulated mass
        self.0.len() - 1
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.arm_for(rng.random::<f64>())
    }
}

/// Exponential weights `p_i ∝ exp(-eta * L_i)`, shifted by the smallest
/// `eta * L_i` before exponentiating.
pub fn action_distribution(cumulative: &[f64], eta: f64) -> Result<ActionDistribution> {
    if cumulative.is_empty() {
        return Err(invalid_input("no arms"));
    }
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(invalid_param(format!(
            "learning rate {eta} must be positive"
        )));
    }
    if let Some(x) = cumulative.iter().find(|x| !x.is_finite()) {
        return Err(invalid_input(format!(
            "non-finite cumulative loss estimate {x}"
        )));
    }
    let scaled: Vec<f64> = cumulative.iter().map(|&l| eta * l).collect();
    let shift = scaled.iter().copied().fold(f64::INFINITY, f64::min);
    let weights: Vec<f64> = scaled
        .iter()
        .map(|&x| (shift - x).max(MIN_LOG_WEIGHT).exp())
        .collect();
    let total: f64 = weights.iter().sum();
    Ok(ActionDistribution(
        weights.into_iter().map(|w| w / total).collect(),
    ))
}

/// Which loss estimate the learner builds from the feedback.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EstimatorKind {
    /// `c_i / (sum_j p_j s_ji + gamma)`
    Basic,
    /// Only observations of quality at least `epsilon` are used.
    Truncated { epsilon: f64 },
    /// Feedback scaled by `s^delta`; `delta = 1` is the default.
    Weighted { delta: f64 },
}

impl EstimatorKind {
    pub fn validate(&self) -> Result<()> {
        match *self {
            EstimatorKind::Basic => Ok(()),
            EstimatorKind::Truncated { epsilon } if !(0.0..=1.0).contains(&epsilon) => Err(
                invalid_param(format!("threshold {epsilon} is not in [0, 1]")),
            ),
            EstimatorKind::Weighted { delta } if !(delta >= 1.0 && delta.is_finite()) => Err(
                invalid_param(format!("weight exponent {delta} must be at least 1")),
            ),
            _ => Ok(()),
        }
    }

    /// Factor applied to `c_i` when the played arm observes `i` with quality `s`.
    #[inline]
    fn numerator_factor(&self, s: f64) -> f64 {
        match *self {
            EstimatorKind::Basic => 1.0,
            EstimatorKind::Truncated { epsilon } => indicator(s >= epsilon),
            EstimatorKind::Weighted { delta } => pow(s, delta),
        }
    }

    /// Contribution of an observer with quality `s` to the denominator.
    #[inline]
    fn denominator_weight(&self, s: f64) -> f64 {
        match *self {
            EstimatorKind::Basic => s,
            EstimatorKind::Truncated { epsilon } => s * indicator(s >= epsilon),
            EstimatorKind::Weighted { delta } => pow(s, 1.0 + delta),
        }
    }
}

#[inline]
fn indicator(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

#[inline]
fn pow(s: f64, e: f64) -> f64 {
    if e == 1.0 {
        s
    } else if e == 2.0 {
        s * s
    } else {
        s.powf(e)
    }
}

fn check_shapes(p: &ActionDistribution, g: &ObservationGraph, gamma: f64) -> Result<()> {
    if p.len() != g.n() {
        return Err(invalid_input(format!(
            "distribution over {} arms, graph over {}",
            p.len(),
            g.n()
        )));
    }
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(invalid_param(format!("gamma {gamma} must be non-negative")));
    }
    Ok(())
}

/// Per-arm denominators `sum_j p_j w(s_ji) + gamma` of an estimator.
pub fn denominators(
    kind: EstimatorKind,
    p: &ActionDistribution,
    g: &ObservationGraph,
    gamma: f64,
) -> Result<Vec<f64>> {
    kind.validate()?;
    check_shapes(p, g, gamma)?;
    let mut den = vec![0.0; g.n()];
    for (j, &pj) in p.probs().iter().enumerate() {
        for (d, &s) in den.iter_mut().zip(g.row(j)) {
            *d += pj * kind.denominator_weight(s);
        }
    }
    den.iter_mut().for_each(|d| *d += gamma);
    Ok(den)
}

/// Loss estimates for every arm after playing `chosen` and seeing `feedback`.
pub fn estimate(
    kind: EstimatorKind,
    p: &ActionDistribution,
    g: &ObservationGraph,
    chosen: usize,
    feedback: &[f64],
    gamma: f64,
) -> Result<Vec<f64>> {
    let den = denominators(kind, p, g, gamma)?;
    if feedback.len() != g.n() || chosen >= g.n() {
        return Err(invalid_input(
            "feedback length or played arm does not match the graph",
        ));
    }
    g.row(chosen)
        .iter()
        .zip(feedback)
        .zip(&den)
        .enumerate()
        .map(|(i, ((&s, &c), &d))| {
            let num = kind.numerator_factor(s) * c;
            if d > 0.0 {
                Ok(num / d)
            } else if num == 0.0 {
                Ok(0.0)
            } else {
                Err(Error::DegenerateGraph(format!(
                    "arm {i} has non-zero feedback but zero observation probability"
                )))
            }
        })
        .collect()
}

pub fn estimate_basic(
    p: &ActionDistribution,
    g: &ObservationGraph,
    chosen: usize,
    feedback: &[f64],
    gamma: f64,
) -> Result<Vec<f64>> {
    estimate(EstimatorKind::Basic, p, g, chosen, feedback, gamma)
}

pub fn estimate_truncated(
    p: &ActionDistribution,
    g: &ObservationGraph,
    chosen: usize,
    feedback: &[f64],
    gamma: f64,
    epsilon: f64,
) -> Result<Vec<f64>> {
    estimate(
        EstimatorKind::Truncated { epsilon },
        p,
        g,
        chosen,
        feedback,
        gamma,
    )
}

pub fn estimate_weighted(
    p: &ActionDistribution,
    g: &ObservationGraph,
    chosen: usize,
    feedback: &[f64],
    gamma: f64,
    delta: f64,
) -> Result<Vec<f64>> {
    estimate(
        EstimatorKind::Weighted { delta },
        p,
        g,
        chosen,
        feedback,
        gamma,
    )
}

/// `Q = sum_i p_i / (sum_j p_j w(s_ji) + gamma)` for the estimator's
/// denominator weights `w`.
pub fn compute_q(
    p: &ActionDistribution,
    g: &ObservationGraph,
    gamma: f64,
    kind: EstimatorKind,
) -> Result<f64> {
    let den = denominators(kind, p, g, gamma)?;
    p.probs()
        .iter()
        .zip(&den)
        .enumerate()
        .try_fold(0.0, |acc, (i, (&pi, &d))| {
            if d > 0.0 {
                Ok(acc + pi / d)
            } else {
                Err(Error::DegenerateGraph(format!(
                    "arm {i} has zero observation probability"
                )))
            }
        })
}

/// Binary graph used by the Exp3-IXb baseline: weights of at least
/// `epsilon` become 1, the others 0. `epsilon = 0` is read as "any positive
/// weight".
pub fn ixb_transform(g: &ObservationGraph, epsilon: f64) -> Result<ObservationGraph> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(invalid_param(format!(
            "threshold {epsilon} is not in [0, 1]"
        )));
    }
    let weights = g
        .weights()
        .iter()
        .map(|&w| indicator(w > 0.0 && w >= epsilon))
        .collect();
    ObservationGraph::with_constant_diagonal(g.n(), weights)
}
