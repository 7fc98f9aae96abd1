use alloc::string::String;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),
    /// A parameter set violates a model invariant.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// The input carries no information for the requested operation
    /// (constant data, a single class, zero variance, ...).
    #[error("degenerate input: {0}")]
    Degenerate(String),
    /// Not enough observations, bins, or samples.
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    /// A generator was asked for more than its target structure can hold.
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    /// A running total stopped being finite.
    #[error("numeric overflow: {0}")]
    Overflow(String),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! bail {
    ($kind:ident, $($arg:tt)*) => {
        return Err($crate::Error::$kind(alloc::format!($($arg)*)))
    };
}
pub(crate) use bail;
