//! Exact counts and distributions.
//!
//! Everything here is computed with arbitrary-precision integers and
//! rationals; floating point only appears at the CLI boundary. The counts
//! `r(n, k)` (trees of size `n` whose root is `k`-protected) and `s(n, k)`
//! (`k`-protected vertices summed over those trees) are available as power
//! series coefficients and as closed binomial sums, so each can be checked
//! against the other and against [`crate::tree::Oracle`].

mod binomial;
mod bivariate;
mod distribution;
mod protected;
mod series;

pub use binomial::{binomial, catalan, narayana, FactorialTable};
pub use bivariate::{series_t_bivariate, BivariateSeries, VPoly};
pub use distribution::{dist_x_exact, dist_y_exact, DistributionTable, Method};
pub use protected::{
    r_explicit, s_explicit, series_invsqrt, series_l, series_r0, series_r_ge_k_closed,
    series_r_ge_k_recurrence, series_s_ge_k, ExplicitCounts,
};
pub use series::{Coefficient, TruncatedPowerSeries};

pub type ExactInteger = num_bigint::BigInt;
pub type ExactRational = num_rational::BigRational;
