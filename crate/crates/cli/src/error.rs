use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] dephaselab_core::Error),
    #[error("{0}")]
    Invalid(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        CliError::Invalid(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    /// 2 for validation failures, 3 for I/O, 4 when integration loses positivity.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(dephaselab_core::Error::PositivityLost { .. }) => 4,
            CliError::Core(_) | CliError::Invalid(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let lost = CliError::from(dephaselab_core::Error::PositivityLost { t: 1.0, min_eigenvalue: -1e-3 });
        assert_eq!(lost.exit_code(), 4);
        assert_eq!(CliError::from(dephaselab_core::Error::UnknownFigure(9)).exit_code(), 2);
        assert_eq!(CliError::invalid("x").exit_code(), 2);
        assert_eq!(CliError::io("f", std::io::Error::other("boom")).exit_code(), 3);
    }
}
