//! Weighted observation graphs and the graph quantities that govern the
//! regret of the learners in [`crate::policies`].
//!
//! An [`ObservationGraph`] stores, for every ordered pair of arms `(i, j)`,
//! the quality `s(i, j)` in `[0, 1]` of the feedback about arm `j` that the
//! learner receives when it plays arm `i`. Thresholding such a graph at a
//! level `eps` yields a [`BinaryDigraph`]; the smallest ratio
//! `alpha(eps) / eps^2` over all thresholds is the effective independence
//! number computed by [`effective_independence_number`].

mod alpha;
mod bitset;
mod generators;
mod mis;

pub use alpha::{
    effective_independence_number, effective_independence_number_with_budget, q_upper_bound,
    threshold_candidates, AlphaStarResult, CurvePoint,
};
pub use generators::{
    gen_grid_geometric, gen_grid_geometric_with_spacing, gen_random_uniform, GridWeightRule,
};
pub use mis::{
    independence_number, independence_number_with_budget, maximum_independent_set, BinaryDigraph,
    DEFAULT_NODE_BUDGET,
};

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{invalid_input, invalid_param, Error, Result};

/// Weighted digraph of observation qualities, stored as a dense row-major
/// `n x n` matrix. Row `i` holds the weights of the arcs leaving arm `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GraphFile", into = "GraphFile")]
pub struct ObservationGraph {
    n: usize,
    weights: Vec<f64>,
}

/// On-disk form: `{"n": 3, "weights": [ ...9 reals, row-major... ]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    n: usize,
    weights: Vec<f64>,
}

impl TryFrom<GraphFile> for ObservationGraph {
    type Error = Error;

    fn try_from(file: GraphFile) -> Result<Self> {
        ObservationGraph::new(file.n, file.weights)
    }
}

impl From<ObservationGraph> for GraphFile {
    fn from(g: ObservationGraph) -> Self {
        GraphFile {
            n: g.n,
            weights: g.weights,
        }
    }
}

impl ObservationGraph {
    /// Builds a graph from row-major weights. Every weight must lie in
    /// `[0, 1]` and every diagonal entry must be exactly 1.
    pub fn new(n: usize, weights: Vec<f64>) -> Result<Self> {
        let g = Self::unchecked_diagonal(n, weights)?;
        if let Some(i) = (0..n).find(|&i| g.weight(i, i) != 1.0) {
            return Err(invalid_input(format!(
                "diagonal weight s({i},{i}) = {} must be 1",
                g.weight(i, i)
            )));
        }
        Ok(g)
    }

    /// Variant of [`ObservationGraph::new`] for graphs whose self-observation
    /// quality is a constant `c` in `(0, 1]` shared by every arm.
    pub fn with_constant_diagonal(n: usize, weights: Vec<f64>) -> Result<Self> {
        let g = Self::unchecked_diagonal(n, weights)?;
        if n > 0 {
            let c = g.weight(0, 0);
            if c <= 0.0 {
                return Err(invalid_input("diagonal weight must be positive"));
            }
            if (1..n).any(|i| g.weight(i, i) != c) {
                return Err(invalid_input("diagonal weights must all be equal"));
            }
        }
        Ok(g)
    }

    fn unchecked_diagonal(n: usize, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != n * n {
            return Err(invalid_input(format!(
                "expected {} weights for n = {n}, got {}",
                n * n,
                weights.len()
            )));
        }
        if let Some((k, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(0.0..=1.0).contains(*w))
        {
            return Err(invalid_input(format!(
                "weight s({},{}) = {w} is outside [0, 1]",
                k / n,
                k % n
            )));
        }
        Ok(Self { n, weights })
    }

    /// Builds a graph from a weight function of the off-diagonal pairs; the
    /// diagonal is set to 1.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut weights = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                weights.push(if i == j { 1.0 } else { f(i, j) });
            }
        }
        Self::new(n, weights)
    }

    /// The bandit graph: every arm observes only itself.
    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |_, _| 0.0).expect("identity weights are valid")
    }

    /// Full information: every observation is perfect.
    pub fn complete(n: usize) -> Self {
        Self::from_fn(n, |_, _| 1.0).expect("unit weights are valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn weight(&self, from: usize, to: usize) -> f64 {
        self.weights[from * self.n + to]
    }

    /// Weights of the arcs leaving `from`.
    #[inline]
    pub fn row(&self, from: usize) -> &[f64] {
        &self.weights[from * self.n..(from + 1) * self.n]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Self-observation quality (1 unless built by
    /// [`ObservationGraph::with_constant_diagonal`]).
    pub fn diagonal(&self) -> f64 {
        if self.n == 0 {
            1.0
        } else {
            self.weight(0, 0)
        }
    }

    /// Largest off-diagonal weight, or 0 for a single node.
    pub fn max_off_diagonal(&self) -> f64 {
        self.off_diagonal().fold(0.0, f64::max)
    }

    /// Iterator over `(from, to, weight)` for all `from != to`.
    pub fn off_diagonal(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).flat_map(move |i| {
            (0..self.n)
                .filter(move |&j| j != i)
                .map(move |j| self.weight(i, j))
        })
    }

    pub fn is_binary(&self) -> bool {
        self.weights.iter().all(|&w| w == 0.0 || w == 1.0)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.weight(i, j) == self.weight(j, i)))
    }

    /// Keeps the arcs with weight at least `eps`, dropping the diagonal.
    pub fn threshold(&self, eps: f64) -> Result<BinaryDigraph> {
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(invalid_param(format!("threshold {eps} is not in (0, 1]")));
        }
        Ok(self.threshold_unchecked(eps))
    }

    pub(crate) fn threshold_unchecked(&self, eps: f64) -> BinaryDigraph {
        let mut g = BinaryDigraph::new(self.n);
        for i in 0..self.n {
            for (j, &w) in self.row(i).iter().enumerate() {
                if i != j && w >= eps {
                    g.add_arc(i, j);
                }
            }
        }
        g
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json_string()?)?;
        Ok(())
    }
}

/// Free-function form of [`ObservationGraph::threshold`].
pub fn threshold(g: &ObservationGraph, eps: f64) -> Result<BinaryDigraph> {
    g.threshold(eps)
}
