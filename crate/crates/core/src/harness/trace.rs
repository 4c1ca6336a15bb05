use std::io::Write;

use serde::Serialize;

use crate::error::{invalid_input, Result};

/// Per-round record of one episode. Regret is realized: learner loss
/// minus the loss of the best fixed arm on the same loss sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct RegretTrace {
    pub policy: String,
    pub arms: Vec<usize>,
    pub losses: Vec<f64>,
    /// Prefix sums of `losses`.
    pub cumulative_loss: Vec<f64>,
    /// `cumulative_loss[t]` minus the smallest arm total after round `t`.
    pub cumulative_regret: Vec<f64>,
    /// Total loss of every arm over the episode.
    pub arm_totals: Vec<f64>,
    pub q: Vec<f64>,
    pub eta: Vec<f64>,
    pub gamma: Vec<f64>,
    /// `min_i eta_t * estimate_{t,i}` per round.
    pub min_scaled_estimate: Vec<f64>,
    pub final_regret: f64,
}

impl RegretTrace {
    pub fn horizon(&self) -> usize {
        self.arms.len()
    }

    pub fn best_arm_total(&self) -> f64 {
        self.arm_totals
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn learner_total(&self) -> f64 {
        self.cumulative_loss.last().copied().unwrap_or(0.0)
    }

    /// `round,arm,loss,cum_regret,Q,eta,gamma`, rounds numbered from 1.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        #[derive(Serialize)]
        struct Row {
            round: usize,
            arm: usize,
            loss: f64,
            cum_regret: f64,
            #[serde(rename = "Q")]
            q: f64,
            eta: f64,
            gamma: f64,
        }
        let mut w = csv::Writer::from_writer(writer);
        for t in 0..self.horizon() {
            w.serialize(Row {
                round: t + 1,
                arm: self.arms[t],
                loss: self.losses[t],
                cum_regret: self.cumulative_regret[t],
                q: self.q[t],
                eta: self.eta[t],
                gamma: self.gamma[t],
            })?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Closed-form regret bound of the adaptive weighted learner evaluated on
/// the realized `Q` values: `2 sqrt(2 (1 + R + R^2) (N + sum Q) ln N)`.
pub fn theoretical_bound(trace: &RegretTrace, n: usize, r: f64) -> Result<f64> {
    if trace.q.is_empty() || trace.q.len() != trace.horizon() {
        return Err(invalid_input("trace has no Q history"));
    }
    q_sum_bound(trace.q.iter().sum(), n, r)
}

pub(crate) fn q_sum_bound(q_sum: f64, n: usize, r: f64) -> Result<f64> {
    if n < 2 {
        return Err(invalid_input("the bound needs at least two arms"));
    }
    let n = n as f64;
    Ok(2.0 * (2.0 * (1.0 + r + r * r) * (n + q_sum) * n.ln()).sqrt())
}

/// Mean and sample standard deviation over the repetitions of one
/// configuration, plus the mean cumulative-regret curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateResult {
    pub key: String,
    pub final_regrets: Vec<f64>,
    pub mean: f64,
    pub std: f64,
    pub repetitions: usize,
    #[serde(skip)]
    pub mean_curve: Vec<f64>,
}

impl AggregateResult {
    pub fn from_traces(key: impl Into<String>, traces: &[RegretTrace]) -> Result<Self> {
        if traces.is_empty() {
            return Err(invalid_input("no repetitions to aggregate"));
        }
        let finals: Vec<f64> = traces.iter().map(|t| t.final_regret).collect();
        let (mean, std) = mean_std(&finals);
        let horizon = traces[0].horizon();
        let mut curve = vec![0.0; horizon];
        for t in traces {
            for (acc, r) in curve.iter_mut().zip(&t.cumulative_regret) {
                *acc += r;
            }
        }
        let k = traces.len() as f64;
        curve.iter_mut().for_each(|c| *c /= k);
        Ok(Self {
            key: key.into(),
            final_regrets: finals,
            mean,
            std,
            repetitions: traces.len(),
            mean_curve: curve,
        })
    }
}

/// Mean and sample (n - 1) standard deviation; the deviation of a single
/// value is 0.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}
