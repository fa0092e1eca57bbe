//! Failures of a run, with the exit code each maps to.

use std::fmt;
use std::path::Path;

use serde::Serialize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CliError {
    Parse {
        #[serde(skip_serializing_if = "Option::is_none")]
        path: Option<String>,
        line: usize,
        column: usize,
        message: String,
    },
    Precondition {
        message: String,
    },
    Io {
        path: String,
        message: String,
    },
}

impl CliError {
    pub fn precondition(message: impl Into<String>) -> Self {
        CliError::Precondition {
            message: message.into(),
        }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            message: err.to_string(),
        }
    }

    /// Attaches a file name to a parse error and shifts its line by `offset`.
    pub fn from_core_in(err: schurmult::Error, path: &Path, offset: usize) -> Self {
        match err {
            schurmult::Error::Parse { line, column, message } => CliError::Parse {
                path: Some(path.display().to_string()),
                line: line + offset,
                column,
                message,
            },
            other => other.into(),
        }
    }

    /// I/O failures are missing or unreadable inputs, so they share the precondition code.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } => EXIT_PARSE,
            CliError::Precondition { .. } | CliError::Io { .. } => EXIT_PRECONDITION,
        }
    }

    /// One-line JSON object `{"error": {...}}` for stderr.
    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": self }).to_string()
    }
}

impl From<schurmult::Error> for CliError {
    fn from(err: schurmult::Error) -> Self {
        match err {
            schurmult::Error::Parse { line, column, message } => CliError::Parse {
                path: None,
                line,
                column,
                message,
            },
            other => CliError::precondition(other.to_string()),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse {
                path,
                line,
                column,
                message,
            } => match path {
                Some(p) => write!(f, "{p}:{line}:{column}: {message}"),
                None => write!(f, "{line}:{column}: {message}"),
            },
            CliError::Precondition { message } => f.write_str(message),
            CliError::Io { path, message } => write!(f, "{path}: {message}"),
        }
    }
}

impl std::error::Error for CliError {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_the_contract() {
        let parse: CliError = schurmult::format::parse_document("").unwrap_err().into();
        assert_eq!(parse.exit_code(), EXIT_PARSE);
        let pre: CliError = schurmult::KernelSpec::poisson(2.0).unwrap_err().into();
        assert_eq!(pre.exit_code(), EXIT_PRECONDITION);
    }

    #[test]
    fn json_has_a_kind_field() {
        let e = CliError::Parse {
            path: None,
            line: 3,
            column: 7,
            message: "bad".into(),
        };
        let v: serde_json::Value = serde_json::from_str(&e.to_json()).unwrap();
        assert_eq!(v["error"]["kind"], "parse");
        assert_eq!(v["error"]["line"], 3);
        assert_eq!(v["error"]["column"], 7);
    }
}
