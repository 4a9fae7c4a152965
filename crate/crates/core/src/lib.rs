//! Protection numbers of rooted plane trees.
//!
//! The protection number of a vertex is its distance to the nearest leaf in
//! the subtree it roots. This crate computes the distribution of the root's
//! protection number (`X_n`) and of a uniformly chosen vertex's protection
//! number (`Y_n`) over uniformly random plane trees of size `n` along several
//! independent routes:
//!
//! - [`tree`]: exhaustive enumeration, the ground-truth oracle;
//! - [`exact`]: big-integer power series and closed binomial sums;
//! - [`asymptotics`]: limit laws, `1/n` corrections and certified constants;
//! - [`mellin`]: the harmonic sums behind two of the constants and their
//!   functional equations;
//! - [`sampler`]: uniform random trees and Monte Carlo estimates.
//!
//! [`acceptance`] bundles the end-to-end checks run by `protection verify`.

pub mod acceptance;
pub mod asymptotics;
pub mod cli;
mod error;
pub mod exact;
pub mod mellin;
pub mod sampler;
pub mod tree;

pub use error::{Error, Result};

/// Which protection-number statistic a computation refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Statistic {
    /// Protection number of the root of a uniform random tree.
    X,
    /// Protection number of a uniform random vertex of a uniform random tree.
    Y,
}

impl std::fmt::Display for Statistic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Statistic::X => "X",
            Statistic::Y => "Y",
        })
    }
}

impl std::str::FromStr for Statistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "X" | "x" => Ok(Statistic::X),
            "Y" | "y" => Ok(Statistic::Y),
            _ => Err(Error::InvalidArgument(format!("statistic must be X or Y, got {s:?}"))),
        }
    }
}
