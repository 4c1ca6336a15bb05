use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::environment::{NoiseModel, WalkAssignment};
use crate::error::{Error, Result};
use crate::graph::GridWeightRule;
use crate::policies::PolicySpec;

fn one() -> usize {
    1
}

/// Everything needed to reproduce a run. Loaded from a JSON file in which
/// unknown fields are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub n_arms: usize,
    pub horizon: usize,
    pub policy: PolicySpec,
    pub graph: GraphSpec,
    pub losses: LossSpec,
    #[serde(default)]
    pub noise: NoiseModel,
    pub seed: u64,
    #[serde(default = "one")]
    pub repetitions: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GraphSpec {
    /// `side x side` planar grid; `spacing` defaults to the rule's own.
    Grid {
        side: usize,
        rule: GridWeightRule,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        spacing: Option<f64>,
    },
    /// i.i.d. `U(lo, hi)` weights drawn from the experiment's graph stream.
    RandomUniform {
        lo: f64,
        hi: f64,
    },
    Identity {},
    Complete {},
    File {
        path: PathBuf,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LossSpec {
    RandomWalk {
        n_walks: usize,
        step_sigma: f64,
        #[serde(default)]
        assignment: WalkAssignment,
    },
    Constant {
        value: f64,
    },
    /// CSV with header `arm_0,...`.
    File {
        path: PathBuf,
    },
}

impl RunConfig {
    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// Loads a config; relative `path`s inside it are resolved against the
    /// config file's directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut cfg = Self::from_json_str(&std::fs::read_to_string(path)?)?;
        if let Some(dir) = path.parent() {
            cfg.resolve_paths(dir);
        }
        Ok(cfg)
    }

    fn resolve_paths(&mut self, dir: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = dir.join(&*p);
            }
        };
        if let GraphSpec::File { path } = &mut self.graph {
            fix(path);
        }
        if let LossSpec::File { path } = &mut self.losses {
            fix(path);
        }
    }

    /// Checks the parts of the config that do not need any file access.
    pub fn validate(&self) -> Result<()> {
        let invalid = |m: String| Err(Error::Validation(m));
        if self.n_arms < 2 {
            return invalid(format!("n_arms must be at least 2, got {}", self.n_arms));
        }
        if self.horizon < 1 {
            return invalid("horizon must be at least 1".into());
        }
        if self.repetitions < 1 {
            return invalid("repetitions must be at least 1".into());
        }
        if let GraphSpec::Grid { side, .. } = self.graph {
            if side * side != self.n_arms {
                return invalid(format!(
                    "a {side}x{side} grid has {} nodes but n_arms is {}",
                    side * side,
                    self.n_arms
                ));
            }
        }
        if let LossSpec::RandomWalk {
            n_walks,
            step_sigma,
            ..
        } = self.losses
        {
            if n_walks < 1 || step_sigma.is_nan() || step_sigma <= 0.0 {
                return invalid("random-walk losses need n_walks >= 1 and step_sigma > 0".into());
            }
        }
        if let LossSpec::Constant { value } = self.losses {
            if !(0.0..=1.0).contains(&value) {
                return invalid(format!("constant loss {value} is outside [0, 1]"));
            }
        }
        self.noise
            .validate()
            .and_then(|_| self.policy.validate(self.n_arms))
            .map_err(|e| Error::Validation(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SIX: &str = r#"{
        "n_arms": 25,
        "horizon": 5000,
        "policy": {"algorithm": {"kind": "wix"}, "rates": {"mode": "adaptive", "r": 1.0}},
        "graph": {"kind": "grid", "side": 5, "rule": "min_3_over_d2"},
        "losses": {"kind": "random_walk", "n_walks": 20, "step_sigma": 0.05},
        "noise": {"distribution": "uniform_symmetric", "bound": 1.0},
        "seed": 2016,
        "repetitions": 10
    }"#;

    #[test]
    fn parses_the_grid_experiment() {
        let cfg = RunConfig::from_json_str(SIX).unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.repetitions, 10);
        assert_eq!(
            cfg.losses,
            LossSpec::RandomWalk {
                n_walks: 20,
                step_sigma: 0.05,
                assignment: WalkAssignment::Fixed
            }
        );
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let extra = SIX.replace("\"seed\"", "\"sed\": 1, \"seed\"");
        assert!(RunConfig::from_json_str(&extra).is_err());
        let nested = SIX.replace(
            r#""rule": "min_3_over_d2""#,
            r#""rule": "min_3_over_d2", "k": 5"#,
        );
        assert!(RunConfig::from_json_str(&nested).is_err());
        let unit = SIX.replace(
            r#"{"kind": "grid", "side": 5, "rule": "min_3_over_d2"}"#,
            r#"{"kind": "identity", "side": 5}"#,
        );
        assert!(RunConfig::from_json_str(&unit).is_err());
    }

    #[test]
    fn validation_catches_inconsistencies() {
        let mut cfg = RunConfig::from_json_str(SIX).unwrap();
        cfg.n_arms = 24;
        assert!(matches!(cfg.validate(), Err(Error::Validation(_))));
        let mut cfg = RunConfig::from_json_str(SIX).unwrap();
        cfg.repetitions = 0;
        assert!(cfg.validate().is_err());
        let mut cfg = RunConfig::from_json_str(SIX).unwrap();
        cfg.graph = GraphSpec::Identity {};
        cfg.n_arms = 1;
        assert!(cfg.validate().is_err());
        let mut cfg = RunConfig::from_json_str(SIX).unwrap();
        cfg.losses = LossSpec::Constant { value: 2.0 };
        assert!(cfg.validate().is_err());
    }
}
