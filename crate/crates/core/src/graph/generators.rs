use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ObservationGraph;
use crate::error::{invalid_param, Result};

/// Distance-to-weight rule for the planar grid graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridWeightRule {
    /// `1 / (1 + d^2)`, nodes on a `k x k` grid spanning the unit square.
    InvOnePlusD2,
    /// `min(3 / d^2, 1)`, nodes at unit spacing.
    #[serde(rename = "min_3_over_d2")]
    Min3OverD2,
}

impl GridWeightRule {
    pub fn weight(self, d2: f64) -> f64 {
        match self {
            GridWeightRule::InvOnePlusD2 => 1.0 / (1.0 + d2),
            GridWeightRule::Min3OverD2 => (3.0 / d2).min(1.0),
        }
    }

    /// Distance between neighbouring grid nodes used by
    /// [`gen_grid_geometric`].
    pub fn default_spacing(self, k: usize) -> f64 {
        match self {
            GridWeightRule::InvOnePlusD2 if k > 1 => 1.0 / (k - 1) as f64,
            _ => 1.0,
        }
    }
}

/// Symmetric geometric graph on a `k x k` grid; node `r * k + c` sits at
/// row `r`, column `c`.
pub fn gen_grid_geometric(k: usize, rule: GridWeightRule) -> Result<ObservationGraph> {
    gen_grid_geometric_with_spacing(k, rule, rule.default_spacing(k))
}

pub fn gen_grid_geometric_with_spacing(
    k: usize,
    rule: GridWeightRule,
    spacing: f64,
) -> Result<ObservationGraph> {
    if k == 0 {
        return Err(invalid_param("grid side length must be at least 1"));
    }
    if !(spacing > 0.0 && spacing.is_finite()) {
        return Err(invalid_param(format!(
            "grid spacing {spacing} must be positive"
        )));
    }
    ObservationGraph::from_fn(k * k, |i, j| {
        let dr = (i / k) as f64 - (j / k) as f64;
        let dc = (i % k) as f64 - (j % k) as f64;
        rule.weight(spacing * spacing * (dr * dr + dc * dc))
    })
}

/// Directed graph with i.i.d. `U(lo, hi)` off-diagonal weights, drawn row by
/// row.
pub fn gen_random_uniform<R: Rng + ?Sized>(
    n: usize,
    lo: f64,
    hi: f64,
    rng: &mut R,
) -> Result<ObservationGraph> {
    if !(0.0 <= lo && lo <= hi && hi <= 1.0) {
        return Err(invalid_param(format!(
            "weight range [{lo}, {hi}] must satisfy 0 <= lo <= hi <= 1"
        )));
    }
    ObservationGraph::from_fn(n, |_, _| lo + (hi - lo) * rng.random::<f64>())
}
