//! Generating functions and binomial sums for `k`-protected trees.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::binomial::{binomial, FactorialTable};
use super::series::TruncatedPowerSeries;
use crate::error::{Error, Result};

type Series = TruncatedPowerSeries<BigInt>;

/// All plane trees: `Σ_{n ≥ 1} C_{n-1} z^n`.
pub fn series_r0(order: usize) -> Series {
    let mut coeffs = Vec::with_capacity(order + 1);
    coeffs.push(BigInt::zero());
    let mut c = BigInt::one();
    for m in 0..order as u64 {
        coeffs.push(c.clone());
        // C_{m+1} = C_m · 2(2m+1) / (m+2)
        c = c * (2 * (2 * m + 1)) / (m + 2);
    }
    Series::new(coeffs)
}

/// `k`-protected trees via `R_k = z R_{k-1} / (1 - R_{k-1})`, starting from all trees.
pub fn series_r_ge_k_recurrence(k: usize, order: usize) -> Series {
    let one = Series::one(order);
    let mut r = series_r0(order);
    for _ in 0..k {
        r = r.div(&(&one - &r)).expect("R has no constant term").shift_up(1);
    }
    r
}

/// `k`-protected trees via the closed form `(1-z) z^{k+1} Q / (1 + z^{k+1} Q)`,
/// where `Q = R_0^3 / z^3` is the cube of the Catalan series.
pub fn series_r_ge_k_closed(k: usize, order: usize) -> Result<Series> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "the closed form needs k >= 1; use series_r0 for all trees".into(),
        ));
    }
    let r0 = series_r0(order + 3);
    let q = r0.pow(3).shift_down(3);
    let shifted = q.shift_up(k + 1);
    let one_minus_z = Series::from_fn(order, |i| match i {
        0 => BigInt::one(),
        1 => -BigInt::one(),
        _ => BigInt::zero(),
    });
    let numerator = &one_minus_z * &shifted;
    let denominator = &Series::one(order) + &shifted;
    numerator.div(&denominator)
}

/// `(1 - 4z)^{-1/2} = Σ C(2n, n) z^n`.
pub fn series_invsqrt(order: usize) -> Series {
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut c = BigInt::one();
    for n in 0..=order as u64 {
        coeffs.push(c.clone());
        c = c * (2 * (2 * n + 1)) / (n + 1);
    }
    Series::new(coeffs)
}

/// `k`-protected vertices summed over trees: `½ R_k (1 + (1-4z)^{-1/2})`.
pub fn series_s_ge_k(k: usize, order: usize) -> Series {
    let r = series_r_ge_k_recurrence(k, order);
    half_times_one_plus_invsqrt(&r)
}

fn half_times_one_plus_invsqrt(r: &Series) -> Series {
    let order = r.order();
    let sum = r + &(r * &series_invsqrt(order));
    sum.exact_div_scalar(&BigInt::from(2)).expect("coefficients count vertices")
}

/// Leaves summed over trees: `(z/2)(1 + (1-4z)^{-1/2})`.
pub fn series_l(order: usize) -> Series {
    half_times_one_plus_invsqrt(&Series::monomial(1, order))
}

/// Closed binomial sums for `r(n, k)` and `s(n, k)` backed by a factorial
/// table, for evaluating many large sizes.
#[derive(Clone, Debug)]
pub struct ExplicitCounts {
    table: FactorialTable,
}

impl ExplicitCounts {
    /// Supports every size up to `max_n`.
    pub fn new(max_n: usize) -> Self {
        Self { table: FactorialTable::new(2 * max_n.max(1)) }
    }

    pub fn max_n(&self) -> usize {
        self.table.max() / 2
    }

    fn c(&self, a: i64, b: i64) -> BigInt {
        self.table.binomial(a, b).expect("binomial sums never use a negative upper index")
    }

    /// Trees of size `n` whose root is `k`-protected.
    pub fn r(&self, n: usize, k: usize) -> BigInt {
        assert!(n >= 1 && n <= self.max_n());
        r_sum(n, k, |a, b| self.c(a, b))
    }

    /// `k`-protected vertices summed over all trees of size `n`.
    pub fn s(&self, n: usize, k: usize) -> BigInt {
        assert!(n >= 1 && n <= self.max_n());
        s_sum(n, k, |a, b| self.c(a, b))
    }
}

fn r_sum(n: usize, k: usize, c: impl Fn(i64, i64) -> BigInt) -> BigInt {
    let (n, k) = (n as i64, k as i64);
    if k == 0 {
        return c(2 * n - 2, n - 1) / n;
    }
    let mut total = BigInt::zero();
    let mut j = 1;
    while n - (k + 1) * j >= 0 {
        let a = 2 * n - 3 - (2 * k - 1) * j;
        let term = c(a, n - (k + 1) * j) - c(a, n - 3 - (k + 1) * j);
        if j % 2 == 1 {
            total += term;
        } else {
            total -= term;
        }
        j += 1;
    }
    total
}

// Coefficient of z^n in R_k (1-4z)^{-1/2}: expand R_k = (1-z) Σ_j (-1)^{j-1} z^{(k+1)j} C(z)^{3j}
// and use [z^i] C(z)^a / sqrt(1-4z) = C(2i+a, i).
fn s_sum(n: usize, k: usize, c: impl Fn(i64, i64) -> BigInt) -> BigInt {
    if k == 0 {
        let n = n as i64;
        return c(2 * n - 2, n - 1);
    }
    let mut total = r_sum(n, k, &c);
    let (n, k) = (n as i64, k as i64);
    let mut j = 1;
    while n - (k + 1) * j >= 0 {
        let i = n - (k + 1) * j;
        let term = c(2 * i + 3 * j, i) - c(2 * i + 3 * j - 2, i - 1);
        if j % 2 == 1 {
            total += term;
        } else {
            total -= term;
        }
        j += 1;
    }
    debug_assert!((&total % 2u32).is_zero());
    total / 2
}

/// Alternating binomial sum for the number of `k`-protected trees of size `n`.
pub fn r_explicit(n: usize, k: usize) -> BigInt {
    assert!(n >= 1, "tree size must be positive");
    r_sum(n, k, |a, b| binomial(a, b).expect("binomial sums never use a negative upper index"))
}

/// Binomial sum for `k`-protected vertices summed over trees of size `n`.
pub fn s_explicit(n: usize, k: usize) -> BigInt {
    assert!(n >= 1, "tree size must be positive");
    s_sum(n, k, |a, b| binomial(a, b).expect("binomial sums never use a negative upper index"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::catalan;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn r0_coefficients() {
        let r0 = series_r0(12);
        assert_eq!(&r0.coeffs()[..5], ints(&[0, 1, 1, 2, 5]).as_slice());
        assert_eq!(r0.coeff(12), &BigInt::from(58786));
        // R0^2 - R0 + z = 0
        let residual = &(&r0 * &r0) - &r0;
        assert_eq!(residual, (-&Series::monomial(1, 12)));
    }

    #[test]
    fn recurrence_small_k() {
        assert_eq!(&series_r_ge_k_recurrence(1, 4).coeffs()[1..], ints(&[0, 1, 2, 5]).as_slice());
        assert_eq!(&series_r_ge_k_recurrence(2, 4).coeffs()[1..], ints(&[0, 0, 1, 2]).as_slice());
        assert_eq!(series_r_ge_k_recurrence(3, 4).coeff(4), &BigInt::one());
        assert_eq!(series_r_ge_k_recurrence(0, 9), series_r0(9));
    }

    #[test]
    fn closed_form_matches_recurrence() {
        for k in 1..=8 {
            assert_eq!(series_r_ge_k_closed(k, 20).unwrap(), series_r_ge_k_recurrence(k, 20), "k = {k}");
        }
        assert_eq!(series_r_ge_k_closed(2, 5).unwrap().coeff(3), &BigInt::one());
        let five = series_r_ge_k_closed(5, 12).unwrap();
        assert!(five.coeffs()[..=5].iter().all(Zero::is_zero));
        assert!(series_r_ge_k_closed(0, 5).is_err());
    }

    #[test]
    fn invsqrt_coefficients() {
        let s = series_invsqrt(10);
        assert_eq!(&s.coeffs()[..4], ints(&[1, 2, 6, 20]).as_slice());
        assert_eq!(s.coeff(10), &BigInt::from(184756));
        let geometric = Series::from_fn(10, |n| BigInt::from(4).pow(n as u32));
        assert_eq!(&s * &s, geometric);
    }

    #[test]
    fn vertex_series() {
        let s0 = series_s_ge_k(0, 8);
        for n in 1..=8u64 {
            assert_eq!(s0.coeff(n as usize), &(catalan(n - 1) * n));
        }
        assert_eq!(&series_s_ge_k(1, 3).coeffs()[1..], ints(&[0, 1, 3]).as_slice());
        assert_eq!(series_s_ge_k(2, 3).coeff(3), &BigInt::one());
    }

    #[test]
    fn leaf_series() {
        let l = series_l(10);
        assert_eq!(l.coeff(0), &BigInt::zero());
        assert_eq!(l.coeff(1), &BigInt::one());
        assert_eq!(l.coeff(4), &BigInt::from(10));
        for n in 2..=10i64 {
            assert_eq!(l.coeff(n as usize), &(binomial(2 * n - 2, n - 1).unwrap() / 2));
        }
    }

    #[test]
    fn explicit_small_values() {
        assert_eq!(r_explicit(1, 1), BigInt::zero());
        assert_eq!(r_explicit(2, 1), BigInt::one());
        assert_eq!(r_explicit(3, 1), BigInt::from(2));
        assert_eq!(r_explicit(4, 2), BigInt::from(2));
        assert_eq!(r_explicit(4, 3), BigInt::one());
        assert_eq!(s_explicit(3, 1), BigInt::from(3));
        assert_eq!(s_explicit(3, 2), BigInt::one());
        assert_eq!(s_explicit(2, 1), BigInt::one());
    }

    #[test]
    fn explicit_sums_match_series() {
        let order = 48;
        let counts = ExplicitCounts::new(order);
        for k in 0..=order {
            let r = series_r_ge_k_recurrence(k, order);
            let s = series_s_ge_k(k, order);
            for n in 1..=order {
                assert_eq!(&counts.r(n, k), r.coeff(n), "r({n}, {k})");
                assert_eq!(&counts.s(n, k), s.coeff(n), "s({n}, {k})");
                if n <= 16 {
                    assert_eq!(&r_explicit(n, k), r.coeff(n));
                    assert_eq!(&s_explicit(n, k), s.coeff(n));
                }
            }
        }
    }
}
