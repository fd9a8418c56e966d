use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input lies outside the range where the operation is exact.
    #[error("unsupported range: {0}")]
    UnsupportedRange(String),
    /// A configured work or time cap was hit before an answer was found.
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("domain error: {0}")]
    Domain(String),
    /// The operation needs the enumerable (discrete-log table) regime.
    #[error("unsupported regime: {0}")]
    Regime(String),
    /// A named precondition inequality does not hold.
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("invalid sieve configuration: {0}")]
    Config(String),
    /// Two independent evaluations of the same quantity disagree.
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("verification failure: {0}")]
    Verification(String),
    #[error("parse error: {0}")]
    Parse(String),
}
