//! Crate error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("frame mismatch: expected {expected} box, got {got}")]
    FrameMismatch { expected: &'static str, got: &'static str },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("grid shape ({d}, {w}, {h}) not divisible by 2^{levels}")]
    NotDivisible { d: usize, w: usize, h: usize, levels: usize },

    #[error("dataset error: {0}")]
    Dataset(String),

    #[error("unknown class id {0} not present in remap table")]
    UnknownClassId(u16),

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("training aborted: {0}")]
    Training(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("image error: {0}")]
    Image(String),
}

impl From<image::ImageError> for Error {
    fn from(e: image::ImageError) -> Self {
        Error::Image(e.to_string())
    }
}
