use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The requested size is beyond what a brute-force path is allowed to attempt.
    #[error("infeasible: {what} with n = {n} exceeds the cap of {cap}")]
    Infeasible {
        what: &'static str,
        n: usize,
        cap: usize,
    },

    /// An exact division left a remainder. Never produced by valid data.
    #[error("internal consistency failure: {dividend} is not divisible by {divisor}")]
    InexactDivision { dividend: String, divisor: String },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
