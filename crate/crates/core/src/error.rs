use thiserror::Error;

/// Errors raised by the core group, measure and defect machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An operand does not belong to the structure it was handed to.
    #[error("domain error: {0}")]
    Domain(String),
    /// A descriptor (group, automorphism action, transformation group) is inconsistent.
    #[error("construction error: {0}")]
    Construction(String),
    /// A required piece of configuration is absent, e.g. a right action.
    #[error("configuration error: {0}")]
    Configuration(String),
    /// Text could not be parsed as an element, point or rational.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
