use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Core(#[from] tangent_vqe::Error),
    #[error("{path}: {message}")]
    Config { path: String, message: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("missing Hamiltonian files under {dir} for r = {points:?}")]
    MissingData { dir: String, points: Vec<String> },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;

impl HarnessError {
    pub fn io(path: impl AsRef<Path>, source: std::io::Error) -> HarnessError {
        HarnessError::Io { path: path.as_ref().display().to_string(), source }
    }
}
