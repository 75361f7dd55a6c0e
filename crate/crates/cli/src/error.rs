use thiserror::Error;

use crate::parser::Pos;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}:{}: syntax error: {msg}", pos.line, pos.col)]
    Parse { pos: Pos, msg: String },
    #[error("{}:{}: {msg}", pos.line, pos.col)]
    Eval { pos: Pos, msg: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Engine(#[from] fitshift_core::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {msg}")]
    Data { path: String, msg: String },
}

impl CliError {
    pub fn parse(pos: Pos, msg: String) -> Self {
        CliError::Parse { pos, msg }
    }

    pub fn eval(pos: Pos, msg: impl Into<String>) -> Self {
        CliError::Eval { pos, msg: msg.into() }
    }

    pub fn position(&self) -> Option<Pos> {
        match self {
            CliError::Parse { pos, .. } | CliError::Eval { pos, .. } => Some(*pos),
            _ => None,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
