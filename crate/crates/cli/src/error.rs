use std::fmt;

use burgers_core::Error as CoreError;

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitKind {
    ReproductionFailure = 1,
    Config = 2,
    Numerical = 3,
}

impl ExitKind {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub kind: ExitKind,
    /// Kebab-case reason code, stable across releases.
    pub reason: String,
    pub message: String,
}

impl CliError {
    pub fn config(reason: &str, message: impl Into<String>) -> Self {
        Self {
            kind: ExitKind::Config,
            reason: reason.to_string(),
            message: message.into(),
        }
    }

    pub fn reproduction(message: impl Into<String>) -> Self {
        Self {
            kind: ExitKind::ReproductionFailure,
            reason: "tolerance-exceeded".into(),
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.kind.code()
    }

    /// `error: <reason>: <message>` on a single line.
    pub fn line(&self) -> String {
        let msg: String = self
            .message
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .collect::<Vec<_>>()
            .join("; ");
        format!("error: {}: {}", self.reason, msg)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.line())
    }
}

impl std::error::Error for CliError {}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        Self {
            kind: if e.is_numerical() {
                ExitKind::Numerical
            } else {
                ExitKind::Config
            },
            reason: e.code().to_string(),
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::config("io-error", e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::config("invalid-json", e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn core_errors_map_to_exit_codes() {
        let e: CliError = CoreError::Divergence {
            step: 4,
            node: 2,
            value: f64::NAN,
        }
        .into();
        assert_eq!(e.exit_code(), 3);
        let e: CliError = CoreError::SingularMatrix {
            column: 0,
            pivot: 0.0,
            threshold: 1e-13,
        }
        .into();
        assert_eq!(e.exit_code(), 3);
        let e: CliError = CoreError::InvalidArgument("dt".into()).into();
        assert_eq!(e.exit_code(), 2);
        assert!(e.line().starts_with("error: invalid-argument: "));
    }

    #[test]
    fn message_is_one_line() {
        let e = CliError::config("x", "first\n  second\n\nthird");
        assert_eq!(e.line(), "error: x: first; second; third");
    }
}
