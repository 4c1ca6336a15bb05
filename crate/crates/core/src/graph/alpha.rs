use serde::Serialize;

use super::mis::{independence_number_with_budget, DEFAULT_NODE_BUDGET};
use super::ObservationGraph;
use crate::error::{invalid_param, Result};

/// One threshold of the `alpha(eps) / eps^2` curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub epsilon: f64,
    pub alpha: usize,
}

impl CurvePoint {
    pub fn ratio(&self) -> f64 {
        self.alpha as f64 / (self.epsilon * self.epsilon)
    }
}

/// Effective independence number together with its minimizing threshold and
/// the full candidate curve (ascending in `epsilon`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaStarResult {
    pub alpha_star: f64,
    pub epsilon_star: f64,
    pub curve: Vec<CurvePoint>,
}

/// Thresholds at which `alpha(eps) / eps^2` can attain its minimum.
///
/// Between two consecutive distinct weights the thresholded arc set is
/// constant while `1 / eps^2` decreases, so only the weights themselves and
/// the top of the range need to be evaluated. The top of the range is the
/// self-observation quality (1 for ordinary graphs); thresholds above it
/// would cut the arms off from their own losses.
pub fn threshold_candidates(g: &ObservationGraph) -> Vec<f64> {
    let top = g.diagonal();
    let mut cands: Vec<f64> = g
        .off_diagonal()
        .filter(|&w| w > 0.0 && w <= top)
        .chain(std::iter::once(top))
        .collect();
    cands.sort_by(f64::total_cmp);
    cands.dedup();
    cands
}

pub fn effective_independence_number(g: &ObservationGraph) -> Result<AlphaStarResult> {
    effective_independence_number_with_budget(g, DEFAULT_NODE_BUDGET)
}

/// Ties in the ratio are broken towards the largest threshold.
pub fn effective_independence_number_with_budget(
    g: &ObservationGraph,
    budget: u64,
) -> Result<AlphaStarResult> {
    let curve = threshold_candidates(g)
        .into_iter()
        .map(|epsilon| {
            let alpha = independence_number_with_budget(&g.threshold_unchecked(epsilon), budget)?;
            Ok(CurvePoint { epsilon, alpha })
        })
        .collect::<Result<Vec<_>>>()?;

    let best = curve
        .iter()
        .fold(None::<&CurvePoint>, |best, p| match best {
            Some(b) if b.ratio() < p.ratio() => Some(b),
            _ => Some(p),
        })
        .expect("candidate list always contains the diagonal value");

    Ok(AlphaStarResult {
        alpha_star: best.ratio(),
        epsilon_star: best.epsilon,
        curve,
    })
}

/// Upper bound on the per-round quantity `Q` of the weighted estimator:
/// `2 a (1 + ln(1 + (N^2/gamma + N^2 + N) / a))` with `a` the effective
/// independence number.
pub fn q_upper_bound(alpha_star: f64, n: usize, gamma: f64) -> Result<f64> {
    if gamma.is_nan() || gamma <= 0.0 {
        return Err(invalid_param(format!(
            "gamma must be positive, got {gamma}"
        )));
    }
    if alpha_star.is_nan() || alpha_star < 1.0 {
        return Err(invalid_param(format!(
            "alpha_star must be at least 1, got {alpha_star}"
        )));
    }
    let n = n as f64;
    let n2 = n * n;
    Ok(2.0 * alpha_star * (1.0 + (1.0 + (n2 / gamma + n2 + n) / alpha_star).ln()))
}
