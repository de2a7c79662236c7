use std::path::PathBuf;

/// Everything the IO layer and CLI can fail with.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    /// A malformed input, located by 1-based line and (when known) field.
    #[error("{}", position_message(*line, *column, message))]
    Input {
        line: usize,
        column: Option<usize>,
        message: String,
    },
    #[error(transparent)]
    Core(#[from] taxicab_core::Error),
    #[error("report: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
}

fn position_message(line: usize, column: Option<usize>, message: &str) -> String {
    match column {
        Some(c) => format!("line {line}, column {c}: {message}"),
        None => format!("line {line}: {message}"),
    }
}

impl Error {
    pub(crate) fn input(line: usize, column: Option<usize>, message: impl Into<String>) -> Self {
        Error::Input {
            line,
            column,
            message: message.into(),
        }
    }

    /// 3 for solver budget overruns, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Core(e) if e.is_budget() => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
