use std::path::PathBuf;

use modelcred_core::ErrorKind;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] modelcred_core::Error),
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }

    /// 1 for bad input, 2 when the N* search ran out of budget, 3 for numeric
    /// failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) | CliError::Io { .. } => 1,
            CliError::Core(e) => match e.kind() {
                ErrorKind::Input => 1,
                ErrorKind::Search => 2,
                ErrorKind::Numeric => 3,
            },
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
