use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid vertex id {id} (vertex count {n})")]
    InvalidVertex { id: usize, n: usize },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("not in family: {0}")]
    NotInFamily(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: 2 bad input, 3 precondition or
    /// unsupported operation, 4 resource limit (1 is reserved for usage
    /// errors, handled by the argument parser).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidVertex { .. } | Error::InvalidInstance(_) | Error::Parse(_) => 2,
            Error::Precondition(_) | Error::Unsupported(_) | Error::NotInFamily(_) => 3,
            Error::Resource(_) => 4,
        }
    }
}
