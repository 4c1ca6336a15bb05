//! Adversarial multi-armed bandits with noisy, weighted side observations.
//!
//! * [`graph`]: observation graphs, exact independence numbers and the
//!   effective independence number.
//! * [`environment`]: the interaction protocol (losses, noise, feedback).
//! * [`policies`]: the exponential-weights template with basic, thresholded
//!   and weighted loss estimates (Exp3, Exp3-IXb, Exp3-IXt, Exp3-WIX).
//! * [`harness`]: seeded episodes, batches, sweeps and CSV/JSON output.

pub mod environment;
pub mod error;
pub mod graph;
pub mod harness;
pub mod policies;

pub use error::{Error, Result};
