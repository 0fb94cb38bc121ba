use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("singular matrix: {0}")]
    SingularMatrix(String),
    #[error("zero vector not allowed")]
    ZeroVector,
    #[error("malformed partition: {0}")]
    Partition(String),
    #[error("exact input required: {0}")]
    Exactness(String),
    #[error("eigenvalues not in normal order: {0}")]
    Ordering(String),
    #[error("unsupported classification: {0}")]
    UnsupportedClass(String),
    #[error("witness construction failed at stage `{stage}`: {detail}")]
    Construction { stage: String, detail: String },
    #[error("format error: {0}")]
    Format(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
