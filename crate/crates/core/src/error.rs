use alloc::string::String;

/// Errors raised by oracles, solvers and the certificate checker.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("element {element} is already in the base set")]
    AlreadyInBase { element: usize },
    #[error("set over universe {found} passed to an oracle over {expected} elements")]
    UniverseMismatch { expected: usize, found: usize },
    #[error("element {element} out of range for ground set of size {n}")]
    OutOfRange { element: usize, n: usize },
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("certification failed: {0}")]
    Certification(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
