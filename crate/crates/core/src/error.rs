use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("tree size {n} exceeds the exhaustive-enumeration bound {bound}")]
    OracleBoundExceeded { n: usize, bound: usize },

    #[error("binomial({upper}, {lower}) has a negative upper index")]
    NegativeUpperIndex { upper: i64, lower: i64 },

    #[error("malformed balanced-parenthesis tree: {0}")]
    MalformedTree(String),

    #[error("series divisor must have constant term 1")]
    NonUnitDivisor,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
