use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// `C(a, b)`, zero when `b < 0` or `b > a >= 0`.
///
/// A negative upper index with a non-negative lower index never arises in the
/// binomial sums of this crate, so it is reported as an error instead of being
/// given the generalized value.
pub fn binomial(a: i64, b: i64) -> Result<BigInt> {
    if b < 0 {
        return Ok(BigInt::zero());
    }
    if a < 0 {
        return Err(Error::NegativeUpperIndex { upper: a, lower: b });
    }
    if b > a {
        return Ok(BigInt::zero());
    }
    let b = b.min(a - b) as u64;
    let a = a as u64;
    let mut acc = BigUint::one();
    for i in 1..=b {
        acc *= a - b + i;
        acc /= i;
    }
    Ok(acc.into())
}

/// The Catalan number `C_m = C(2m, m) / (m + 1)`.
pub fn catalan(m: u64) -> BigInt {
    let m = m as i64;
    binomial(2 * m, m).expect("non-negative indices") / (m + 1)
}

/// Number of plane trees with `n` vertices and `l` leaves; zero outside the
/// admissible range.
pub fn narayana(n: u64, l: u64) -> BigInt {
    match (n, l) {
        (1, 1) => BigInt::one(),
        (0 | 1, _) => BigInt::zero(),
        _ if l == 0 || l > n - 1 => BigInt::zero(),
        _ => {
            let m = (n - 1) as i64;
            let l = l as i64;
            binomial(m, l).unwrap() * binomial(m, l - 1).unwrap() / m
        }
    }
}

/// Precomputed factorials for evaluating many large binomials quickly.
#[derive(Clone, Debug)]
pub struct FactorialTable {
    factorials: Vec<BigUint>,
}

impl FactorialTable {
    /// Table covering `0! ..= max!`.
    pub fn new(max: usize) -> Self {
        let mut factorials = Vec::with_capacity(max + 1);
        factorials.push(BigUint::one());
        for i in 1..=max {
            let next = &factorials[i - 1] * i as u64;
            factorials.push(next);
        }
        Self { factorials }
    }

    pub fn max(&self) -> usize {
        self.factorials.len() - 1
    }

    /// Same conventions as [`binomial`]. Panics if `a` exceeds the table.
    pub fn binomial(&self, a: i64, b: i64) -> Result<BigInt> {
        if b < 0 {
            return Ok(BigInt::zero());
        }
        if a < 0 {
            return Err(Error::NegativeUpperIndex { upper: a, lower: b });
        }
        if b > a {
            return Ok(BigInt::zero());
        }
        let (a, b) = (a as usize, b as usize);
        let denominator = &self.factorials[b] * &self.factorials[a - b];
        Ok((&self.factorials[a] / denominator).into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn binomial_conventions() {
        assert_eq!(binomial(4, 2).unwrap(), big(6));
        assert_eq!(binomial(2, -2).unwrap(), big(0));
        assert_eq!(binomial(0, 0).unwrap(), big(1));
        assert_eq!(binomial(3, 5).unwrap(), big(0));
        assert_eq!(binomial(-3, -1).unwrap(), big(0));
        assert_eq!(
            binomial(-1, 0),
            Err(Error::NegativeUpperIndex { upper: -1, lower: 0 })
        );
    }

    #[test]
    fn pascal_rule() {
        for a in 1..40 {
            for b in 0..=a {
                assert_eq!(
                    binomial(a, b).unwrap(),
                    binomial(a - 1, b - 1).unwrap() + binomial(a - 1, b).unwrap()
                );
            }
        }
    }

    #[test]
    fn factorial_table_matches_direct() {
        let table = FactorialTable::new(120);
        for a in 0..=120 {
            for b in -2..=a + 2 {
                assert_eq!(table.binomial(a, b).unwrap(), binomial(a, b).unwrap());
            }
        }
        assert!(table.binomial(-4, 1).is_err());
    }

    #[test]
    fn catalan_values() {
        assert_eq!(catalan(0), big(1));
        assert_eq!(catalan(3), big(5));
        assert_eq!(catalan(10), big(16796));
        // convolution recurrence
        let c: Vec<BigInt> = (0..30).map(catalan).collect();
        for m in 0..29 {
            let conv: BigInt = (0..=m).map(|i| &c[i] * &c[m - i]).sum();
            assert_eq!(conv, c[m + 1]);
        }
    }

    #[test]
    fn narayana_rows() {
        assert_eq!(narayana(4, 2), big(3));
        assert_eq!(narayana(4, 1), big(1));
        assert_eq!(narayana(4, 4), big(0));
        assert_eq!(narayana(1, 1), big(1));
        assert_eq!(narayana(1, 2), big(0));
        assert_eq!(narayana(5, 0), big(0));
        for n in 1..=8u64 {
            let row: BigInt = (0..=n + 1).map(|l| narayana(n, l)).sum();
            assert_eq!(row, catalan(n - 1));
        }
    }
}
