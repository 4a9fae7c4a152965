use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use super::protected::{series_invsqrt, series_r0, ExplicitCounts};
use super::series::TruncatedPowerSeries;
use crate::error::{Error, Result};
use crate::tree::Oracle;

/// How exact counts are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    /// Exhaustive enumeration (small `n` only).
    Oracle,
    /// Power series expanded to order `n`.
    Series,
    /// Closed binomial sums.
    Explicit,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Oracle => "oracle",
            Method::Series => "series",
            Method::Explicit => "explicit",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "oracle" => Ok(Method::Oracle),
            "series" => Ok(Method::Series),
            "explicit" => Ok(Method::Explicit),
            _ => Err(Error::InvalidArgument(format!("unknown method {s:?}"))),
        }
    }
}

/// Exact law of a protection-number statistic on trees of size `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct DistributionTable {
    pub n: usize,
    /// `survival[k] = P(statistic >= k)` for `k < n`; it is zero from `n` on.
    pub survival: Vec<BigRational>,
    /// `pmf[k] = P(statistic = k)` for `k < n`.
    pub pmf: Vec<BigRational>,
    pub mean: BigRational,
    pub second_moment: BigRational,
    pub variance: BigRational,
}

impl DistributionTable {
    /// Builds the table from `counts[k]` (objects with statistic `>= k`,
    /// `k = 0..n`) out of `total`.
    pub fn from_counts(n: usize, counts: &[BigInt], total: &BigInt) -> Self {
        assert_eq!(counts.len(), n);
        assert_eq!(&counts[0], total, "every object has statistic >= 0");
        let ratio = |c: &BigInt| BigRational::new(c.clone(), total.clone());
        let survival: Vec<BigRational> = counts.iter().map(ratio).collect();
        let pmf = (0..n)
            .map(|k| {
                let next = counts.get(k + 1).cloned().unwrap_or_default();
                ratio(&(&counts[k] - next))
            })
            .collect();
        let first: BigInt = counts[1..].iter().sum();
        let second: BigInt = counts
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * BigInt::from(2 * k - 1))
            .sum();
        let mean = ratio(&first);
        let second_moment = ratio(&second);
        let variance = &second_moment - &mean * &mean;
        Self { n, survival, pmf, mean, second_moment, variance }
    }

    pub fn survival_at(&self, k: usize) -> BigRational {
        self.survival.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn pmf_at(&self, k: usize) -> BigRational {
        self.pmf.get(k).cloned().unwrap_or_else(BigRational::zero)
    }
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("tree size must be positive".into()));
    }
    Ok(())
}

// R_k to order n for every k < n, by iterating the recurrence.
fn series_chain(n: usize) -> Vec<TruncatedPowerSeries<BigInt>> {
    let one = TruncatedPowerSeries::<BigInt>::one(n);
    let mut chain = vec![series_r0(n)];
    for _ in 1..n {
        let prev = chain.last().unwrap();
        let next = prev.div(&(&one - prev)).expect("R has no constant term").shift_up(1);
        chain.push(next);
    }
    chain
}

/// Exact distribution of the root's protection number over trees of size `n`.
pub fn dist_x_exact(n: usize, method: Method, oracle: &Oracle) -> Result<DistributionTable> {
    check_size(n)?;
    let counts: Vec<BigInt> = match method {
        Method::Oracle => {
            let tally = oracle.tally(n)?;
            (0..n).map(|k| BigInt::from(tally.r(k))).collect()
        }
        Method::Series => series_chain(n).iter().map(|r| r.coeff(n).clone()).collect(),
        Method::Explicit => {
            let counts = ExplicitCounts::new(n);
            (0..n).into_par_iter().map(|k| counts.r(n, k)).collect()
        }
    };
    let total = counts[0].clone();
    Ok(DistributionTable::from_counts(n, &counts, &total))
}

/// Exact distribution of a uniformly chosen vertex's protection number over
/// trees of size `n`.
pub fn dist_y_exact(n: usize, method: Method, oracle: &Oracle) -> Result<DistributionTable> {
    check_size(n)?;
    let counts: Vec<BigInt> = match method {
        Method::Oracle => {
            let tally = oracle.tally(n)?;
            (0..n).map(|k| BigInt::from(tally.s(k))).collect()
        }
        Method::Series => {
            let invsqrt = series_invsqrt(n);
            series_chain(n)
                .iter()
                .map(|r| (r.coeff(n) + r.product_coeff(&invsqrt, n)) / 2)
                .collect()
        }
        Method::Explicit => {
            let counts = ExplicitCounts::new(n);
            (0..n).into_par_iter().map(|k| counts.s(n, k)).collect()
        }
    };
    let total = counts[0].clone();
    Ok(DistributionTable::from_counts(n, &counts, &total))
}

#[cfg(test)]
mod tests {
    use num_traits::{One, Signed};

    use super::*;

    fn is_probability(q: &BigRational) -> bool {
        !q.is_negative() && q <= &BigRational::one()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn all_methods_x(n: usize) -> DistributionTable {
        let oracle = Oracle::default();
        let a = dist_x_exact(n, Method::Oracle, &oracle).unwrap();
        assert_eq!(a, dist_x_exact(n, Method::Series, &oracle).unwrap());
        assert_eq!(a, dist_x_exact(n, Method::Explicit, &oracle).unwrap());
        a
    }

    fn all_methods_y(n: usize) -> DistributionTable {
        let oracle = Oracle::default();
        let a = dist_y_exact(n, Method::Oracle, &oracle).unwrap();
        assert_eq!(a, dist_y_exact(n, Method::Series, &oracle).unwrap());
        assert_eq!(a, dist_y_exact(n, Method::Explicit, &oracle).unwrap());
        a
    }

    #[test]
    fn x_small_sizes() {
        let one = all_methods_x(1);
        assert_eq!(one.pmf, vec![q(1, 1)]);
        assert_eq!(one.mean, q(0, 1));
        assert_eq!(one.variance, q(0, 1));

        let three = all_methods_x(3);
        assert_eq!(three.survival, vec![q(1, 1), q(1, 1), q(1, 2)]);
        assert_eq!(three.mean, q(3, 2));

        let four = all_methods_x(4);
        assert_eq!(four.survival, vec![q(1, 1), q(1, 1), q(2, 5), q(1, 5)]);
        assert_eq!(four.mean, q(8, 5));
        assert_eq!(four.survival_at(4), q(0, 1));
    }

    #[test]
    fn y_small_sizes() {
        assert_eq!(all_methods_y(1).pmf, vec![q(1, 1)]);
        let two = all_methods_y(2);
        assert_eq!(two.survival, vec![q(1, 1), q(1, 2)]);
        assert_eq!(two.mean, q(1, 2));
        assert_eq!(all_methods_y(3).survival, vec![q(1, 1), q(1, 2), q(1, 6)]);
    }

    #[test]
    fn table_identities() {
        for n in 1..=11 {
            for table in [all_methods_x(n), all_methods_y(n)] {
                let total: BigRational = table.pmf.iter().sum();
                assert_eq!(total, q(1, 1));
                assert!(table.survival.windows(2).all(|w| w[0] >= w[1]));
                let second: BigRational =
                    table.pmf.iter().enumerate().map(|(k, p)| p * BigInt::from(k * k)).sum();
                assert_eq!(second, table.second_moment);
                assert_eq!(table.variance, &table.second_moment - &table.mean * &table.mean);
                assert!(table.pmf.iter().all(is_probability));
            }
        }
    }

    #[test]
    fn methods_by_name() {
        assert_eq!("Series".parse::<Method>().unwrap(), Method::Series);
        assert!("brute".parse::<Method>().is_err());
        assert_eq!(Method::Explicit.to_string(), "explicit");
    }

    #[test]
    fn oracle_bound_propagates() {
        let oracle = Oracle::with_bound(5);
        assert_eq!(
            dist_x_exact(6, Method::Oracle, &oracle),
            Err(Error::OracleBoundExceeded { n: 6, bound: 5 })
        );
        assert!(dist_y_exact(0, Method::Explicit, &oracle).is_err());
        assert!(dist_x_exact(40, Method::Explicit, &oracle).is_ok());
    }
}
