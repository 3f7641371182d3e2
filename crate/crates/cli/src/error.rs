use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid scenario: {0}")]
    Invalid(String),

    #[error("unknown construction '{name}'; available: {available}")]
    UnknownConstruction { name: String, available: String },

    #[error("unknown parameter '{name}' for {construction}; numeric parameters: {available}")]
    UnknownParameter { name: String, construction: String, available: String },

    #[error("construction failed ({kind}): {source}")]
    Construction { kind: String, source: coherence_cost::Error },

    #[error("{0}")]
    Numerics(#[from] coherence_cost::Error),

    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error("{failed} of {total} checks failed")]
    CheckFailed { failed: usize, total: usize },
}

impl CliError {
    /// 1 for failed checks, 2 for anything wrong with the input.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::CheckFailed { .. } => 1,
            _ => 2,
        }
    }

    pub(crate) fn construction(source: coherence_cost::Error) -> Self {
        let kind = format!("{source:?}");
        let kind = kind.split(['(', ' ', '{']).next().unwrap_or("Error").to_string();
        CliError::Construction { kind, source }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
