//! Limit laws and `1/n` corrections for `X_n` and `Y_n`.
//!
//! Every expansion term is an exact rational in `q = 4^k`. The survival
//! probabilities satisfy
//!
//! ```text
//! P(X_n >= k) = 9q/(q+2)^2 + 9q((3k-8)q^2 + 28q - (12k+20)) / (2(q+2)^4) · 1/n + O(k^2 3^-k n^-3/2)
//! P(Y_n >= k) = 3/(q+2)   + ((3k-10)q^2 + (6k+26)q - 16) / (2(q+2)^3)     · 1/n + O(k^2 3^-k n^-2)
//! ```
//!
//! and the point probabilities are their consecutive differences.

mod constants;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

pub use constants::{
    asym_moments, constant, survival_sum, tail_bound, truncate_decimal, AsymptoticMoments,
    ConstantEnclosure, ConstantName, Interval, Part, Weight, MAX_DIGITS,
};

use crate::Statistic;

/// Power of `n` in an error term.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecayRate {
    ThreeHalves,
    Two,
}

/// Symbolic `O(·)` remainder attached to an expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ErrorOrder {
    pub rate: DecayRate,
    /// Whether the implied constant carries the `k^2 3^-k` prefactor.
    pub k_prefactor: bool,
}

impl fmt::Display for ErrorOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = match self.rate {
            DecayRate::ThreeHalves => "n^(-3/2)",
            DecayRate::Two => "n^(-2)",
        };
        if self.k_prefactor {
            write!(f, "O(k^2 3^(-k) {n})")
        } else {
            write!(f, "O({n})")
        }
    }
}

/// `leading + correction / n + error`.
#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticValue {
    pub leading: BigRational,
    pub correction: BigRational,
    pub error: ErrorOrder,
}

impl AsymptoticValue {
    /// Two-term approximation at size `n`.
    pub fn eval(&self, n: u64) -> BigRational {
        &self.leading + &self.correction / BigInt::from(n)
    }

    pub fn eval_f64(&self, n: u64) -> f64 {
        self.eval(n).to_f64().unwrap_or(f64::NAN)
    }
}

fn q(k: u32) -> BigInt {
    BigInt::from(4).pow(k)
}

fn ratio(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

/// Probability that the root is `k`-protected, to order `1/n`.
///
/// At `k = 0` this is exactly one, and at `k = 1` exactly one as well for
/// every `n >= 2`; the formula reproduces both.
pub fn asym_p_x_ge(k: u32) -> AsymptoticValue {
    let q = q(k);
    let kk = BigInt::from(k);
    let q2: BigInt = &q + 2;
    let leading = ratio(9 * &q, q2.pow(2));
    let poly = (3 * &kk - 8) * q.pow(2) + 28 * &q - (12 * &kk + 20);
    let correction = ratio(9 * &q * poly, 2 * q2.pow(4));
    AsymptoticValue {
        leading,
        correction,
        error: ErrorOrder { rate: DecayRate::ThreeHalves, k_prefactor: true },
    }
}

/// Probability that a uniform vertex is `k`-protected, to order `1/n`.
pub fn asym_p_y_ge(k: u32) -> AsymptoticValue {
    let q = q(k);
    let kk = BigInt::from(k);
    let q2: BigInt = &q + 2;
    let leading = ratio(BigInt::from(3), q2.clone());
    let poly = (3 * &kk - 10) * q.pow(2) + (6 * &kk + 26) * &q - 16;
    let correction = ratio(poly, 2 * q2.pow(3));
    AsymptoticValue {
        leading,
        correction,
        error: ErrorOrder { rate: DecayRate::Two, k_prefactor: true },
    }
}

pub fn asym_p_ge(statistic: Statistic, k: u32) -> AsymptoticValue {
    match statistic {
        Statistic::X => asym_p_x_ge(k),
        Statistic::Y => asym_p_y_ge(k),
    }
}

/// `P(X_n = k)` to order `1/n`, from the closed point-probability formula.
pub fn limit_pmf_x(k: u32) -> AsymptoticValue {
    let q = q(k);
    let kk = BigInt::from(k);
    let a: BigInt = &q + 2;
    let b: BigInt = 2 * &q + 1;
    let leading = ratio(27 * &q * (q.pow(2) - 1), a.pow(2) * b.pow(2));
    let poly = 4 * (&kk - 3) * q.pow(6) + 36 * q.pow(5) - (45 * &kk - 72) * q.pow(4)
        - 80 * &kk * q.pow(3)
        - (45 * &kk + 72) * q.pow(2)
        - 36 * &q
        + 4 * (&kk + 3);
    let correction = ratio(81 * &q * poly, 2 * a.pow(4) * b.pow(4));
    AsymptoticValue {
        leading,
        correction,
        error: ErrorOrder { rate: DecayRate::ThreeHalves, k_prefactor: true },
    }
}

/// `P(Y_n = k)` to order `1/n`.
///
/// The leading term is `9q / ((4q+2)(q+2))`; the correction is the difference
/// of consecutive survival corrections. The closed correction in
/// [`displayed_pmf_y_correction`] is exactly twice this value and does not
/// match exact data.
pub fn limit_pmf_y(k: u32) -> AsymptoticValue {
    let q = q(k);
    let leading = ratio(9 * &q, (4 * &q + 2) * (&q + 2));
    let correction = asym_p_y_ge(k).correction - asym_p_y_ge(k + 1).correction;
    AsymptoticValue {
        leading,
        correction,
        error: ErrorOrder { rate: DecayRate::Two, k_prefactor: true },
    }
}

/// The closed form `3q(q-1)((6k-22)q^3 + (21k+30)q^2 + (21k+96)q + (6k+58)) / ((q+2)^3 (2q+1)^3)`
/// for the `1/n` term of `P(Y_n = k)`. Kept for comparison only.
pub fn displayed_pmf_y_correction(k: u32) -> BigRational {
    let q = q(k);
    let kk = BigInt::from(k);
    let poly = (6 * &kk - 22) * q.pow(3)
        + (21 * &kk + 30) * q.pow(2)
        + (21 * &kk + 96) * &q
        + (6 * &kk + 58);
    let a: BigInt = &q + 2;
    let b: BigInt = 2 * &q + 1;
    ratio(3 * &q * (&q - 1) * poly, a.pow(3) * b.pow(3))
}

pub fn limit_pmf(statistic: Statistic, k: u32) -> AsymptoticValue {
    match statistic {
        Statistic::X => limit_pmf_x(k),
        Statistic::Y => limit_pmf_y(k),
    }
}

#[cfg(test)]
mod tests {
    use num_traits::{One, Zero};

    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn survival_terms_at_small_k() {
        assert_eq!(asym_p_x_ge(1).leading, r(1, 1));
        assert_eq!(asym_p_x_ge(1).correction, r(0, 1));
        assert_eq!(asym_p_x_ge(2).leading, r(4, 9));
        assert_eq!(asym_p_x_ge(0).leading, r(1, 1));
        assert_eq!(asym_p_x_ge(0).correction, r(0, 1));
        assert_eq!(asym_p_y_ge(1).leading, r(1, 2));
        assert_eq!(asym_p_y_ge(2).leading, r(1, 6));
        assert_eq!(asym_p_y_ge(1).correction, r(0, 1));
        assert_eq!(asym_p_y_ge(0).leading, r(1, 1));
    }

    #[test]
    fn point_terms_at_small_k() {
        assert!(limit_pmf_x(0).leading.is_zero());
        assert!(limit_pmf_x(0).correction.is_zero());
        assert_eq!(limit_pmf_x(1).leading, r(5, 9));
        assert_eq!(limit_pmf_y(0).leading, r(1, 2));
        assert_eq!(limit_pmf_y(1).leading, r(1, 3));
    }

    #[test]
    fn point_terms_are_survival_differences() {
        for k in 0..=30 {
            let (a, b, p) = (asym_p_x_ge(k), asym_p_x_ge(k + 1), limit_pmf_x(k));
            assert_eq!(p.leading, &a.leading - &b.leading, "X leading k={k}");
            assert_eq!(p.correction, &a.correction - &b.correction, "X correction k={k}");
            let (a, b, p) = (asym_p_y_ge(k), asym_p_y_ge(k + 1), limit_pmf_y(k));
            assert_eq!(p.leading, &a.leading - &b.leading, "Y leading k={k}");
            assert_eq!(p.correction, &a.correction - &b.correction);
        }
    }

    #[test]
    fn displayed_y_correction_is_doubled() {
        for k in 0..=30 {
            assert_eq!(displayed_pmf_y_correction(k), limit_pmf_y(k).correction * BigInt::from(2));
        }
    }

    #[test]
    fn y_leading_terms_telescope() {
        let mut partial = BigRational::zero();
        for k in 0..=40u32 {
            partial += limit_pmf_y(k).leading;
            let expected = BigRational::one() - r(3, 1) / (q(k + 1) + 2);
            assert_eq!(partial, expected);
        }
    }

    #[test]
    fn survival_leading_terms_decrease() {
        for k in 1..60 {
            assert!(asym_p_x_ge(k + 1).leading < asym_p_x_ge(k).leading);
            assert!(asym_p_y_ge(k + 1).leading < asym_p_y_ge(k).leading);
        }
    }

    #[test]
    fn evaluation() {
        let v = asym_p_x_ge(2);
        let at = v.eval(100);
        assert_eq!(at, &v.leading + &v.correction / BigInt::from(100));
        assert!((v.eval_f64(100) - 0.4444).abs() < 0.01);
        assert_eq!(v.error.to_string(), "O(k^2 3^(-k) n^(-3/2))");
    }
}
