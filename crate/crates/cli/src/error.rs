use std::fmt;
use std::path::PathBuf;

/// Failures of the command-line tool, each with its own exit status.
#[derive(Debug)]
pub enum CliError {
    ReadConfig { path: PathBuf, source: std::io::Error },
    Syntax { line: usize, reason: String },
    UnknownExperiment(String),
    NonIntegerSteps { final_time: f64, tau: f64 },
    GroupSize { runs: usize, group_size: usize },
    InvalidInitialState(String),
    InvalidValue { key: String, reason: String },
    Output { path: PathBuf, source: std::io::Error },
    Computation(qlm_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::ReadConfig { .. } => 3,
            CliError::Syntax { .. } => 4,
            CliError::UnknownExperiment(_) => 5,
            CliError::NonIntegerSteps { .. } => 6,
            CliError::GroupSize { .. } => 7,
            CliError::InvalidInitialState(_) => 8,
            CliError::InvalidValue { .. } => 9,
            CliError::Output { .. } => 10,
            CliError::Computation(_) => 11,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::ReadConfig { path, source } => write!(f, "cannot read config {}: {source}", path.display()),
            CliError::Syntax { line, reason } => write!(f, "config line {line}: {reason}"),
            CliError::UnknownExperiment(name) => {
                write!(f, "unknown experiment {name:?} (see `qlm list-experiments`)")
            }
            CliError::NonIntegerSteps { final_time, tau } => {
                write!(f, "T = {final_time} is not an integer multiple of tau = {tau}")
            }
            CliError::GroupSize { runs, group_size } => {
                write!(f, "K = {group_size} must be positive and divide M = {runs}")
            }
            CliError::InvalidInitialState(reason) => write!(f, "invalid initial state: {reason}"),
            CliError::InvalidValue { key, reason } => write!(f, "invalid value for {key}: {reason}"),
            CliError::Output { path, source } => write!(f, "cannot write {}: {source}", path.display()),
            CliError::Computation(e) => write!(f, "computation failed: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<qlm_core::Error> for CliError {
    fn from(e: qlm_core::Error) -> Self {
        CliError::Computation(e)
    }
}
