use thiserror::Error;

/// Problems with the input; the binary exits with status 2 on any of them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum InputError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("invalid instance: {0}")]
    Validation(String),

    #[error("{command}: {source}")]
    Library {
        command: &'static str,
        #[source]
        source: kantorovich::Error,
    },
}
