use thiserror::Error;

/// Reasons a serialized generator state is rejected by [`load_state`](crate::load_state).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MalformedState {
    #[error("bad magic number {0:#010x}")]
    BadMagic(u32),
    #[error("unsupported state format version {0}")]
    UnsupportedVersion(u32),
    #[error("state truncated: needed {needed} bytes, found {found}")]
    Truncated { needed: usize, found: usize },
    #[error("field `{0}` out of range")]
    FieldRange(&'static str),
    #[error("{0} trailing bytes after state")]
    TrailingBytes(usize),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// The pool no longer matches its tracked sum of squares. Almost always
    /// caused by something writing into the generator's work area.
    #[error("corrupted state: {0}")]
    CorruptedState(String),
    #[error("malformed state: {0}")]
    MalformedState(#[from] MalformedState),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
