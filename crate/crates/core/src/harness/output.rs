//! CSV and JSON files written by the CLI.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use super::config::RunConfig;
use super::run::SweepRow;
use super::scatter::ScatterRow;
use super::trace::AggregateResult;
use crate::error::Result;

pub const TRACE_FILE: &str = "trace.csv";
pub const AGGREGATE_FILE: &str = "aggregate.csv";
pub const SCATTER_FILE: &str = "alpha_scatter.csv";
pub const META_FILE: &str = "meta.json";

/// `config_key,rep,final_regret`, one row per repetition.
pub fn write_aggregate_csv<'a, W: Write>(
    writer: W,
    results: impl IntoIterator<Item = &'a AggregateResult>,
) -> Result<()> {
    #[derive(Serialize)]
    struct Row<'a> {
        config_key: &'a str,
        rep: usize,
        final_regret: f64,
    }
    let mut w = csv::Writer::from_writer(writer);
    for r in results {
        for (rep, &final_regret) in r.final_regrets.iter().enumerate() {
            w.serialize(Row {
                config_key: &r.key,
                rep,
                final_regret,
            })?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Sweep rows as aggregate rows, keyed by policy label, e.g.
/// `ixt@eps=0.25/adaptive(r=1)` or `wix/adaptive(r=1)`.
pub fn write_sweep_csv<W: Write>(writer: W, rows: &[SweepRow]) -> Result<()> {
    write_aggregate_csv(writer, rows.iter().map(|r| &r.result))
}

/// `n,seed,alpha_star,eps_star,status`; the value columns are empty on
/// rows whose search exceeded its budget.
pub fn write_scatter_csv<W: Write>(writer: W, rows: &[ScatterRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Contents of `meta.json`. Holds no timestamps or host details, so
/// repeated runs write identical bytes.
#[derive(Debug, Clone, Serialize)]
pub struct Meta<'a> {
    pub command: &'a str,
    pub crate_name: &'static str,
    pub crate_version: &'static str,
    pub regret: &'static str,
    pub seed_streams: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config: Option<&'a RunConfig>,
    #[serde(flatten)]
    pub extra: serde_json::Map<String, serde_json::Value>,
}

impl<'a> Meta<'a> {
    pub fn new(command: &'a str, config: Option<&'a RunConfig>) -> Self {
        Self {
            command,
            crate_name: env!("CARGO_PKG_NAME"),
            crate_version: env!("CARGO_PKG_VERSION"),
            regret: "realized: learner total loss minus the smallest arm total on the same loss sequence",
            seed_streams: "ChaCha8 keyed by the master seed, stream 4*index + purpose (losses 0, graph 1, noise 2, sampling 3)",
            config,
            extra: serde_json::Map::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Serialize) -> Result<Self> {
        self.extra
            .insert(key.to_owned(), serde_json::to_value(value)?);
        Ok(self)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        std::fs::write(path, s)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aggregate_rows_recompute_mean() {
        let r = AggregateResult {
            key: "wix".into(),
            final_regrets: vec![1.5, 2.5],
            mean: 2.0,
            std: 0.5f64.sqrt(),
            repetitions: 2,
            mean_curve: vec![],
        };
        let mut buf = Vec::new();
        write_aggregate_csv(&mut buf, [&r]).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(s, "config_key,rep,final_regret\nwix,0,1.5\nwix,1,2.5\n");
    }

    #[test]
    fn scatter_marks_budget_rows() {
        use super::super::scatter::ScatterStatus;
        let rows = [
            ScatterRow {
                n: 4,
                seed: 7,
                alpha_star: Some(4.0),
                eps_star: Some(1.0),
                status: ScatterStatus::Ok,
            },
            ScatterRow {
                n: 9,
                seed: 8,
                alpha_star: None,
                eps_star: None,
                status: ScatterStatus::BudgetExceeded,
            },
        ];
        let mut buf = Vec::new();
        write_scatter_csv(&mut buf, &rows).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "n,seed,alpha_star,eps_star,status\n4,7,4.0,1.0,ok\n9,8,,,budget_exceeded\n"
        );
    }
}
