use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Parse(String),

    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Compute(#[from] phasetime::Error),

    /// Some points failed; with `--keep-going` they are written as `nan`.
    #[error("{failed} of {total} points failed; first error: {first}")]
    Points {
        failed: usize,
        total: usize,
        first: phasetime::Error,
    },

    #[error("{0} validation checks failed")]
    Validation(usize),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Compute(_) | CliError::Points { .. } | CliError::Validation(_) => 1,
        }
    }
}
