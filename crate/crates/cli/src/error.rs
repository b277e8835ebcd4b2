use std::fmt;

use skewroute::io::{CalibrationFileError, CorpusError, InvalidSpec, ListError};
use skewroute::{CalibrationError, ConfigError, EvalError, RouteError};

/// A failure with the process exit code it maps to.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or flag values (exit 1).
    Usage(String),
    /// Input data failed validation (exit 2).
    Data(String),
    /// Anything else, such as an unwritable output directory (exit 3).
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Internal(_) => 3,
        }
    }

    pub fn usage(flag: &str, e: impl fmt::Display) -> Self {
        CliError::Usage(format!("{flag}: {e}"))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Data(m) => write!(f, "invalid data: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl From<CorpusError> for CliError {
    fn from(e: CorpusError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<ListError> for CliError {
    fn from(e: ListError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<InvalidSpec> for CliError {
    fn from(e: InvalidSpec) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<CalibrationError> for CliError {
    fn from(e: CalibrationError) -> Self {
        match e {
            CalibrationError::InvalidTargets(_) => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<CalibrationFileError> for CliError {
    fn from(e: CalibrationFileError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Calibration(c) => c.into(),
            EvalError::OutOfRange { .. }
            | EvalError::ArmCount(_)
            | EvalError::InvalidTokens(_)
            | EvalError::InvalidGroups(_)
            | EvalError::InvalidSplit { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<RouteError> for CliError {
    fn from(e: RouteError) -> Self {
        match e {
            RouteError::InvalidConfig(_) => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}
