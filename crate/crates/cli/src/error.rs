use std::fmt;

use dirac_lindblad::Error as CoreError;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const IO: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const INCONSISTENT: i32 = 3;
    pub const NUMERICAL: i32 = 4;
}

#[derive(Debug)]
pub enum CliError {
    Io(String),
    Config(String),
    Core(CoreError),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        Self::Config(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Io(_) => exit::IO,
            Self::Config(_) => exit::CONFIG,
            Self::Core(e) => match e {
                CoreError::InvalidParams(_)
                | CoreError::InvalidInverseTemperature(_)
                | CoreError::LayoutMismatch(_)
                | CoreError::InvalidLayout(_)
                | CoreError::DegreeTooHigh { .. }
                | CoreError::ZeroConstraint => exit::CONFIG,
                CoreError::InconsistentDynamics => exit::INCONSISTENT,
                CoreError::TruncationBreach { .. }
                | CoreError::MonitorBreach { .. }
                | CoreError::ThermalTail { .. } => exit::NUMERICAL,
                _ => exit::IO,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Io(m) => write!(f, "i/o error: {m}"),
            Self::Config(m) => write!(f, "config error: {m}"),
            Self::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        Self::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
