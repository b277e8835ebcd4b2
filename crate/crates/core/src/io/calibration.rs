//! `calibration.json`: a calibrated router config plus the report that produced it.

use std::io;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::router::CalibrationReport;
use crate::types::RouterConfig;

#[derive(Debug, Error)]
pub enum CalibrationFileError {
    #[error("malformed calibration file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("calibration report does not match the config: {0}")]
    Mismatch(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationFile {
    pub config: RouterConfig,
    pub report: CalibrationReport,
}

impl CalibrationFile {
    pub fn to_json_pretty(&self) -> Result<String, CalibrationFileError> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

pub fn parse_calibration(bytes: &[u8]) -> Result<CalibrationFile, CalibrationFileError> {
    let file: CalibrationFile = serde_json::from_slice(bytes)?;
    let arms = file.config.arms.len();
    let r = &file.report;
    if r.thresholds != file.config.thresholds {
        return Err(CalibrationFileError::Mismatch("thresholds differ".into()));
    }
    for (what, len) in [("achieved_ratios", r.achieved_ratios.len()), ("target_ratios", r.target_ratios.len())] {
        if len != arms {
            return Err(CalibrationFileError::Mismatch(format!("{what} has {len} entries for {arms} arms")));
        }
    }
    if r.tied_at_threshold.len() != r.thresholds.len() {
        return Err(CalibrationFileError::Mismatch("tied_at_threshold length".into()));
    }
    Ok(file)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::router::calibrate_cheap_mass;
    use crate::types::{Arm, MetricKind, MetricSpec};

    #[test]
    fn round_trips_and_checks_consistency() {
        let report = calibrate_cheap_mass(&[0.1, 0.2, 0.3, 0.4], 0.5).unwrap();
        let config =
            RouterConfig::new(MetricSpec::of(MetricKind::Entropy), report.thresholds.clone(), Arm::default_pair())
                .unwrap();
        let file = CalibrationFile { config, report };
        let text = file.to_json_pretty().unwrap();
        assert_eq!(parse_calibration(text.as_bytes()).unwrap(), file);

        let mut skewed = file.clone();
        skewed.report.thresholds = vec![9.0];
        let text = serde_json::to_string(&skewed).unwrap();
        assert!(matches!(parse_calibration(text.as_bytes()), Err(CalibrationFileError::Mismatch(_))));
        assert!(matches!(parse_calibration(b"{}"), Err(CalibrationFileError::Json(_))));
    }
}
