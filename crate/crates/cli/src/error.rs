use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("{message}")]
    Invalid { kind: &'static str, message: String },
    #[error("{message}")]
    Inconsistent { message: String, dump: Value },
}

impl CliError {
    pub fn invalid(kind: &'static str, err: impl std::fmt::Display) -> Self {
        CliError::Invalid { kind, message: err.to_string() }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 2,
            CliError::Invalid { .. } | CliError::Inconsistent { .. } => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        let kind = match self {
            CliError::Usage(_) => "usage",
            CliError::Io { .. } => "io",
            CliError::Invalid { kind, .. } => kind,
            CliError::Inconsistent { .. } => "consistency",
        };
        let mut error = json!({ "kind": kind, "message": self.to_string(), "exit_code": self.exit_code() });
        if let CliError::Inconsistent { dump, .. } = self {
            error["dump"] = dump.clone();
        }
        json!({ "error": error })
    }
}
