use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("no solution: {0}")]
    NoSolution(String),

    /// The root-finding oracle did not reach its residual target.
    #[error("oracle failure: {0}")]
    OracleFailure(String),

    /// A right-hand side produced (or was handed) a non-finite value.
    #[error("numerical blow-up: {0}")]
    NumericalBlowup(String),

    /// The hypothesis of a check does not hold for the given run.
    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("bracket error: stability verdict is {verdict} at both k_lo = {k_lo} and k_hi = {k_hi}")]
    Bracket { k_lo: f64, k_hi: f64, verdict: String },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
