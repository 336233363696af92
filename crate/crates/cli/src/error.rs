//! Errors and their exit codes.

use serde::Serialize;

#[derive(Debug)]
pub enum CliError {
    /// Invalid configuration or command line.
    Config(String),
    /// The Picard iteration stopped contracting.
    Diverged(String),
    /// A verification threshold was exceeded.
    Verification(String),
    /// Any other solver or I/O failure.
    Runtime(String),
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    exit_code: i32,
    message: &'a str,
}

#[derive(Serialize)]
struct ErrorObject<'a> {
    error: ErrorBody<'a>,
}

impl CliError {
    pub fn config(e: halfspace::Error) -> Self {
        CliError::Config(e.to_string())
    }

    pub fn runtime(e: impl std::fmt::Display) -> Self {
        CliError::Runtime(e.to_string())
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Diverged(_) => "diverged",
            CliError::Verification(_) => "verification",
            CliError::Runtime(_) => "runtime",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Diverged(_) => 3,
            CliError::Verification(_) => 4,
            CliError::Runtime(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Diverged(m) | CliError::Verification(m) | CliError::Runtime(m) => m,
        }
    }

    /// Machine-readable form: `{"error": {"kind", "exit_code", "message"}}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ErrorObject {
            error: ErrorBody {
                kind: self.kind(),
                exit_code: self.exit_code(),
                message: self.message(),
            },
        })
        .expect("error object serializes")
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.kind(), self.message())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}
