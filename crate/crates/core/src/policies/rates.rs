use serde::{Deserialize, Serialize};

use crate::error::{invalid_param, Result};

/// How `(eta_t, gamma_t)` are chosen each round.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum RateMode {
    /// Fixed learning rate and implicit-exploration parameter.
    Static { eta: f64, gamma: f64 },
    /// `eta_t = sqrt(ln N / (2 (1 + R + R^2) (N + sum_{s<t} Q_s)))`,
    /// `gamma_t = R eta_t`.
    Adaptive { r: f64 },
}

impl RateMode {
    pub fn validate(&self, n: usize) -> Result<()> {
        match *self {
            RateMode::Static { eta, gamma } => {
                if !(eta > 0.0 && eta.is_finite()) {
                    return Err(invalid_param(format!("static eta {eta} must be positive")));
                }
                if !(gamma >= 0.0 && gamma.is_finite()) {
                    return Err(invalid_param(format!(
                        "static gamma {gamma} must be non-negative"
                    )));
                }
            }
            RateMode::Adaptive { r } => {
                if !(r >= 0.0 && r.is_finite()) {
                    return Err(invalid_param(format!(
                        "noise bound {r} must be non-negative"
                    )));
                }
                if n < 2 {
                    return Err(invalid_param("adaptive rates need at least two arms"));
                }
            }
        }
        Ok(())
    }
}

/// Adaptive `(eta_t, gamma_t)` from the `Q` values of the previous rounds.
pub fn adaptive_rates(q_history: &[f64], n: usize, r: f64) -> Result<(f64, f64)> {
    if let Some(q) = q_history.iter().find(|q| q.is_nan() || **q < 0.0) {
        return Err(invalid_param(format!(
            "Q values must be non-negative, got {q}"
        )));
    }
    adaptive_rates_from_sum(q_history.iter().sum(), n, r)
}

/// Same as [`adaptive_rates`] given `sum_{s<t} Q_s` directly.
pub fn adaptive_rates_from_sum(q_sum: f64, n: usize, r: f64) -> Result<(f64, f64)> {
    RateMode::Adaptive { r }.validate(n)?;
    let n = n as f64;
    let eta = (n.ln() / (2.0 * (1.0 + r + r * r) * (n + q_sum))).sqrt();
    Ok((eta, r * eta))
}
