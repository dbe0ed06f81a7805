use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A configuration value is missing or out of range. `key` names the offending field.
    #[error("invalid configuration `{key}`: {message}")]
    InvalidConfig { key: String, message: String },

    /// An argument lies outside the mathematical domain of a function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A caller broke an operation's precondition (e.g. querying an index before initialization).
    #[error("contract violation: {0}")]
    ContractViolation(String),

    /// A variance estimate of zero made a studentized quantity undefined.
    #[error("degenerate sample{}: estimated variance is zero", .arm.map(|a| format!(" for arm {a}")).unwrap_or_default())]
    DegenerateSample { arm: Option<usize> },

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidConfig {
            key: key.into(),
            message: message.into(),
        }
    }

    /// True for errors caused by user input rather than a failure while running.
    pub fn is_config_error(&self) -> bool {
        matches!(self, Error::InvalidConfig { .. })
    }
}
