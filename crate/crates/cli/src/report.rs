//! Match report JSON and sweep CSV.

use std::io::Write;

use enf_core::matching::{MatchResult, SweepEntry};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchReport {
    pub mcc: f64,
    pub best_lag_s: f64,
    pub overlap_s: f64,
    pub curve: Vec<(f64, f64)>,
}

impl From<&MatchResult> for MatchReport {
    fn from(m: &MatchResult) -> Self {
        Self {
            mcc: m.mcc,
            best_lag_s: m.best_lag_s,
            overlap_s: m.overlap_s,
            curve: m.curve.clone(),
        }
    }
}

pub fn match_json(m: &MatchResult) -> Result<String, CliError> {
    serde_json::to_string_pretty(&MatchReport::from(m))
        .map_err(|e| CliError::Input(format!("cannot encode report: {e}")))
}

/// `duration_s,mcc,best_lag_s`; failed durations leave the last two fields
/// empty.
pub fn write_sweep(entries: &[SweepEntry], out: impl Write) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["duration_s", "mcc", "best_lag_s"])?;
    for e in entries {
        let (mcc, lag) = match &e.result {
            Ok(m) => (m.mcc.to_string(), m.best_lag_s.to_string()),
            Err(_) => (String::new(), String::new()),
        };
        w.write_record([e.duration_s.to_string(), mcc, lag])?;
    }
    w.flush()?;
    Ok(())
}
