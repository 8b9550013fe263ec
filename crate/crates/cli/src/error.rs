use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] egmc::Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Usage(String),
    #[error("ambient dimension {dim} exceeds the guard 2^14; distinguish only runs at toy scale")]
    SizeGuard { dim: usize },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use egmc::Error as E;
        match self {
            CliError::Lib(E::InvalidParams(_) | E::UnknownParameterSet(_) | E::InvalidField(_)) => 2,
            CliError::Lib(E::Decode { .. } | E::Verify(_) | E::Malformed(_) | E::Truncated { .. } | E::RankTooLarge { .. }) => 4,
            CliError::Lib(_) => 1,
            CliError::Io { .. } => 3,
            CliError::Usage(_) | CliError::SizeGuard { .. } => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

pub fn read(path: &std::path::Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write(path: &std::path::Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}
