use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::seeds::{stream_rng, StreamPurpose};
use crate::error::{invalid_param, Error, Result};
use crate::graph::{
    effective_independence_number_with_budget, gen_random_uniform, ObservationGraph,
};

/// One sampled graph of a random-weight experiment. `seed` regenerates the
/// graph on its own through [`random_graph`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScatterRow {
    pub n: usize,
    pub seed: u64,
    pub alpha_star: Option<f64>,
    pub eps_star: Option<f64>,
    pub status: ScatterStatus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScatterStatus {
    Ok,
    BudgetExceeded,
}

/// The `U(lo, hi)` graph on `n` nodes identified by a row's `seed`.
pub fn random_graph(n: usize, lo: f64, hi: f64, seed: u64) -> Result<ObservationGraph> {
    gen_random_uniform(n, lo, hi, &mut stream_rng(seed, StreamPurpose::Graph, 0))
}

/// Samples `n_graphs` graphs for every size and computes their effective
/// independence numbers. Rows come out grouped by size, in the order of
/// `sizes`. Graphs whose search exceeds `budget` are kept with
/// `status = budget_exceeded` and no values.
pub fn random_alpha_experiment(
    sizes: &[usize],
    lo: f64,
    hi: f64,
    n_graphs: usize,
    seed: u64,
    budget: u64,
) -> Result<Vec<ScatterRow>> {
    if !(0.0 <= lo && lo <= hi && hi <= 1.0) {
        return Err(invalid_param(format!(
            "weight range [{lo}, {hi}] must satisfy 0 <= lo <= hi <= 1"
        )));
    }
    if let Some(n) = sizes.iter().find(|&&n| n == 0) {
        return Err(invalid_param(format!("graph size {n} is not positive")));
    }
    let cells: Vec<(usize, u64)> = sizes
        .iter()
        .enumerate()
        .flat_map(|(s, &n)| {
            (0..n_graphs).map(move |g| {
                let index = (s * n_graphs + g) as u64;
                (
                    n,
                    stream_rng(seed, StreamPurpose::Graph, index).random::<u64>(),
                )
            })
        })
        .collect();
    cells
        .into_par_iter()
        .map(|(n, graph_seed)| {
            let g = random_graph(n, lo, hi, graph_seed)?;
            let row = |alpha_star, eps_star, status| ScatterRow {
                n,
                seed: graph_seed,
                alpha_star,
                eps_star,
                status,
            };
            match effective_independence_number_with_budget(&g, budget) {
                Ok(r) => Ok(row(
                    Some(r.alpha_star),
                    Some(r.epsilon_star),
                    ScatterStatus::Ok,
                )),
                Err(Error::BudgetExceeded { .. }) => {
                    log::warn!("alpha* search for n={n}, seed={graph_seed} exceeded its budget");
                    Ok(row(None, None, ScatterStatus::BudgetExceeded))
                }
                Err(e) => Err(e),
            }
        })
        .collect()
}

/// Median of the finite `alpha_star` values among the rows of size `n`.
pub fn median_alpha_star(rows: &[ScatterRow], n: usize) -> Option<f64> {
    let mut v: Vec<f64> = rows
        .iter()
        .filter(|r| r.n == n)
        .filter_map(|r| r.alpha_star)
        .collect();
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    })
}
