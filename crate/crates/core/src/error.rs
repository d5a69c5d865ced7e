//! Error type shared by the pipeline stages.

use core::fmt;

/// Errors raised by ledger accumulation and scoring operations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// The ledger holds no sentences, so per-sentence rates are undefined.
    EmptyLedger,
    /// No fragments were recorded at the requested scale.
    EmptyScale(usize),
    /// Sentence indices arrived out of order.
    OutOfOrderTau { expected_min: u32, got: u32 },
    /// A score input was NaN or infinite.
    NonFinite,
    /// Gap statistics were requested on fewer than two occurrences.
    InsufficientOccurrences,
    /// A configuration invariant does not hold.
    InvalidConfig(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyLedger => write!(f, "ledger contains no sentences"),
            Error::EmptyScale(n) => write!(f, "no fragments recorded at scale n={n}"),
            Error::OutOfOrderTau { expected_min, got } => {
                write!(f, "tau {got} arrived after tau {expected_min}")
            }
            Error::NonFinite => write!(f, "non-finite value in score input"),
            Error::InsufficientOccurrences => {
                write!(f, "fewer than two occurrences; gap statistics undefined")
            }
            Error::InvalidConfig(msg) => write!(f, "invalid config: {msg}"),
        }
    }
}

#[cfg(any(test, feature = "std"))]
impl std::error::Error for Error {}
