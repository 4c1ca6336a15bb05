//! Seeded experiment runner: episodes, repetition batches, threshold sweeps,
//! random-graph studies and the files the CLI writes.

mod config;
pub mod output;
mod run;
mod scatter;
mod seeds;
mod trace;

pub use config::{GraphSpec, LossSpec, RunConfig};
pub use run::{run_batch, run_episode, sweep_epsilon, Experiment, SweepRow};
pub use scatter::{
    median_alpha_star, random_alpha_experiment, random_graph, ScatterRow, ScatterStatus,
};
pub use seeds::{stream_rng, StreamPurpose};
pub use trace::{mean_std, theoretical_bound, AggregateResult, RegretTrace};
