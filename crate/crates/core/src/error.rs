use thiserror::Error;

use crate::regularity::RegularityCertificate;

/// Errors produced by the exact engine and the certificate checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A distribution or model descriptor violates its invariants.
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    /// No value in the searched range satisfies the requested property.
    #[error("not found in range [{lo}, {hi}]")]
    NotFoundInRange { lo: f64, hi: f64 },

    /// A quantile bracket could not be established within 2^±200.
    #[error("quantile out of representable range")]
    OutOfRange,

    /// A check was invoked on a law that does not satisfy its hypothesis.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// The regularity condition failed where a derived check requires it.
    #[error(
        "precondition failed: regularity condition at K = {} violated (witness {:?})",
        .0.k, .0.witness
    )]
    RegularityPrecondition(Box<RegularityCertificate>),

    /// The request exceeds a resource guard.
    #[error("resource guard: {0}")]
    TooLarge(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
