use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid composition: {0}")]
    InvalidComposition(String),
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("outside supported range: {0}")]
    Unsupported(String),
    #[error("tolerance not met: {0}")]
    Tolerance(String),
    #[error("rank did not stabilize: {0}")]
    NotStabilized(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
