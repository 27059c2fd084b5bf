use alloc::string::String;
use core::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// An operation was applied outside the set where it is defined.
    Domain(String),
    /// Input violates a structural requirement (triangulation axioms, partitions...).
    Validation(String),
    /// The configuration needs data the exact backend cannot represent.
    Unsupported(String),
    /// A fiber computation was not given enough preimage centers.
    IncompleteOracle(String),
    /// Two facades are not compatible with a map.
    Compatibility(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::Validation(m) => write!(f, "validation error: {m}"),
            Error::Unsupported(m) => write!(f, "unsupported configuration: {m}"),
            Error::IncompleteOracle(m) => write!(f, "incomplete root oracle: {m}"),
            Error::Compatibility(m) => write!(f, "compatibility error: {m}"),
        }
    }
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Validation(msg.into()))
}

pub(crate) fn unsupported<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Unsupported(msg.into()))
}
