//! The exponential-weights template and its loss estimators.
//!
//! Every learner keeps cumulative loss estimates `L`, plays an arm drawn
//! from `p_i ∝ exp(-eta_t L_i)`, and adds a fresh estimate of every arm's
//! loss after seeing the feedback. The learners differ only in the
//! estimate ([`EstimatorKind`]) and in the graph they apply it to
//! ([`Algorithm::learner_graph`]).

mod estimators;
mod policy;
mod rates;

pub use estimators::{
    action_distribution, compute_q, denominators, estimate, estimate_basic, estimate_truncated,
    estimate_weighted, ixb_transform, ActionDistribution, EstimatorKind,
};
pub use policy::{Algorithm, Policy, PolicySpec, RoundOutcome};
pub use rates::{adaptive_rates, adaptive_rates_from_sum, RateMode};
