use serde::Serialize;

use igt_core::ErrorKind;

/// Driver failure classes and their exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureKind {
    Precondition,
    Numerical,
    Io,
}

impl FailureKind {
    pub fn exit_code(self) -> i32 {
        match self {
            FailureKind::Precondition => 2,
            FailureKind::Numerical => 3,
            FailureKind::Io => 4,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CliError {
    pub kind: FailureKind,
    pub message: String,
    /// Offending configuration key, when one can be named.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub key: Option<String>,
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn precondition(message: impl Into<String>) -> Self {
        Self { kind: FailureKind::Precondition, message: message.into(), key: None }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        Self { kind: FailureKind::Numerical, message: message.into(), key: None }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self { kind: FailureKind::Io, message: message.into(), key: None }
    }

    pub fn with_key(mut self, key: impl Into<String>) -> Self {
        self.key = Some(key.into());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": self }).to_string()
    }
}

impl From<igt_core::Error> for CliError {
    fn from(e: igt_core::Error) -> Self {
        let kind = match e.kind() {
            ErrorKind::Precondition => FailureKind::Precondition,
            ErrorKind::Numerical => FailureKind::Numerical,
            ErrorKind::Io => FailureKind::Io,
        };
        Self { kind, message: e.to_string(), key: None }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::io(e.to_string())
    }
}
