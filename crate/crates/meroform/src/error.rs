use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot invert a series whose leading coefficient is unknown or zero")]
    ZeroLeading,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{0} is not a negative discriminant (need D < 0, D = 0,1 mod 4)")]
    NotDiscriminant(i64),
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("series has negative valuation {0}; use the weakly holomorphic path")]
    NegativeValuation(i64),
    #[error("series truncated at q^{have}, evaluation needs order {needed}")]
    InsufficientTruncation { needed: i64, have: i64 },
    #[error("no weakly holomorphic form with this principal part; pairings {violations:?}")]
    NoExistence { violations: Vec<(usize, String)> },
    #[error("point lies within {distance:.3e} of a pole")]
    PoleProximity { distance: f64 },
    #[error("tolerance 1e{target} unreachable (best certified error 1e{achieved:.1} at a_max = {a_max})")]
    Unreachable {
        target: i32,
        achieved: f64,
        a_max: u64,
    },
    #[error("precision failure: {0}")]
    Precision(String),
    #[error("value not recognized in the class field: {0}")]
    Unrecognized(String),
    #[error("inconsistent result: {0}")]
    Inconsistent(String),
}
