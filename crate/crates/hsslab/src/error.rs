use std::fmt;

/// A failed run with the process exit status it maps to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub msg: String,
}

pub const EXIT_INVALID: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_INVARIANT: i32 = 4;

impl CliError {
    pub fn invalid(msg: impl Into<String>) -> CliError {
        CliError { code: EXIT_INVALID, msg: msg.into() }
    }
    pub fn budget(msg: impl Into<String>) -> CliError {
        CliError { code: EXIT_BUDGET, msg: msg.into() }
    }
    pub fn invariant(msg: impl Into<String>) -> CliError {
        CliError { code: EXIT_INVARIANT, msg: msg.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.msg)
    }
}

impl std::error::Error for CliError {}

impl From<hsslab_core::Error> for CliError {
    fn from(e: hsslab_core::Error) -> Self {
        use hsslab_core::Error::*;
        let code = match e {
            Field(_) | Invalid(_) => EXIT_INVALID,
            Budget(_) => EXIT_BUDGET,
            Invariant(_) => EXIT_INVARIANT,
        };
        CliError { code, msg: e.to_string() }
    }
}

impl From<hsslab_core::FieldError> for CliError {
    fn from(e: hsslab_core::FieldError) -> Self {
        CliError::invalid(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::invalid(format!("io: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::invalid(format!("json: {e}"))
    }
}

impl From<toml::de::Error> for CliError {
    fn from(e: toml::de::Error) -> Self {
        CliError::invalid(format!("config: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;
