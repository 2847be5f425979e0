use serde::Serialize;
use thiserror::Error;

use preflattice_core::Error as CoreError;
use preflattice_culture::CultureError;
use preflattice_selforg::SelforgError;

/// Bad input of any kind.
pub const EXIT_INPUT: i32 = 2;
/// An enumeration cap was hit or an iteration failed to converge.
pub const EXIT_LIMIT: i32 = 3;

/// Kind of the error raised when stdout is closed early; not worth reporting.
pub const BROKEN_PIPE: &str = "BrokenPipe";

#[derive(Debug, Error)]
#[error("{message}")]
pub struct CliError {
    pub kind: String,
    pub message: String,
    pub code: i32,
}

#[derive(Serialize)]
struct ErrorLine<'a> {
    error: &'a str,
    message: &'a str,
}

impl CliError {
    pub fn input(kind: &str, message: impl Into<String>) -> Self {
        CliError { kind: kind.into(), message: message.into(), code: EXIT_INPUT }
    }

    /// One-line JSON for stderr.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&ErrorLine { error: &self.kind, message: &self.message }).expect("error serializes")
    }
}

/// `Foo(..)` or `Foo { .. }` → `Foo`.
fn variant_name(debug: &str) -> String {
    debug.split(|c: char| !c.is_alphanumeric() && c != '_').next().unwrap_or("Error").to_string()
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let code = match e {
            CoreError::CapExceeded { .. } | CoreError::NonConvergence { .. } => EXIT_LIMIT,
            _ => EXIT_INPUT,
        };
        CliError { kind: variant_name(&format!("{e:?}")), message: e.to_string(), code }
    }
}

impl From<CultureError> for CliError {
    fn from(e: CultureError) -> Self {
        CliError::input(&variant_name(&format!("{e:?}")), e.to_string())
    }
}

impl From<SelforgError> for CliError {
    fn from(e: SelforgError) -> Self {
        match e {
            SelforgError::Core(inner) => inner.into(),
            SelforgError::Culture(inner) => inner.into(),
            other => CliError::input(&variant_name(&format!("{other:?}")), other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        let kind = if e.kind() == std::io::ErrorKind::BrokenPipe { BROKEN_PIPE } else { "Io" };
        CliError::input(kind, e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::input("Parse", e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::input("Parse", e.to_string())
    }
}
