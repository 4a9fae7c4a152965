use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::series::{ref_ops, Coefficient, TruncatedPowerSeries};

/// Polynomial in the leaf marker `v` with integer coefficients, used as the
/// coefficient ring of the bivariate tree series. Trailing zeros are trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct VPoly(Vec<BigInt>);

impl VPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self(coeffs)
    }

    /// `v^power`.
    pub fn monomial(power: usize) -> Self {
        let mut c = vec![BigInt::zero(); power + 1];
        c[power] = BigInt::one();
        Self(c)
    }

    pub fn coeff(&self, power: usize) -> BigInt {
        self.0.get(power).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.0.iter().sum()
    }
}

impl Zero for VPoly {
    fn zero() -> Self {
        Self(Vec::new())
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

impl One for VPoly {
    fn one() -> Self {
        Self(vec![BigInt::one()])
    }
}

impl Add<&VPoly> for &VPoly {
    type Output = VPoly;

    fn add(self, rhs: &VPoly) -> VPoly {
        let len = self.0.len().max(rhs.0.len());
        VPoly::new((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub<&VPoly> for &VPoly {
    type Output = VPoly;

    fn sub(self, rhs: &VPoly) -> VPoly {
        let len = self.0.len().max(rhs.0.len());
        VPoly::new((0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul<&VPoly> for &VPoly {
    type Output = VPoly;

    fn mul(self, rhs: &VPoly) -> VPoly {
        if self.is_zero() || rhs.is_zero() {
            return VPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        VPoly::new(out)
    }
}

impl Add for VPoly {
    type Output = VPoly;

    fn add(self, rhs: VPoly) -> VPoly {
        &self + &rhs
    }
}

impl Sub for VPoly {
    type Output = VPoly;

    fn sub(self, rhs: VPoly) -> VPoly {
        &self - &rhs
    }
}

impl Mul for VPoly {
    type Output = VPoly;

    fn mul(self, rhs: VPoly) -> VPoly {
        &self * &rhs
    }
}

impl Neg for VPoly {
    type Output = VPoly;

    fn neg(self) -> VPoly {
        VPoly(self.0.into_iter().map(|c| -c).collect())
    }
}

impl Coefficient for VPoly {
    ref_ops!();

    /// Only division by a constant polynomial is supported.
    fn exact_div(&self, divisor: &Self) -> Option<Self> {
        if divisor.degree() != Some(0) {
            return None;
        }
        let d = &divisor.0[0];
        self.0.iter().map(|c| c.exact_div(d)).collect::<Option<Vec<_>>>().map(VPoly::new)
    }
}

/// Tree series `T(v, z)`: `z` marks vertices and `v` marks leaves.
#[derive(Clone, Debug, PartialEq)]
pub struct BivariateSeries {
    series: TruncatedPowerSeries<VPoly>,
}

impl BivariateSeries {
    /// Order in `z`.
    pub fn order(&self) -> usize {
        self.series.order()
    }

    /// Coefficient of `z^n v^l`.
    pub fn coeff(&self, n: usize, l: usize) -> BigInt {
        self.series.coeff(n).coeff(l)
    }

    /// The univariate series obtained by setting `v = 1`.
    pub fn at_v_one(&self) -> TruncatedPowerSeries<BigInt> {
        self.series.map(VPoly::eval_at_one)
    }

    pub fn as_series(&self) -> &TruncatedPowerSeries<VPoly> {
        &self.series
    }
}

/// `T(v, z)` to order `order` in `z`, by iterating `T = zv + zT / (1 - T)`.
///
/// Each pass fixes one more power of `z`, so `order` passes reach the fixed
/// point.
pub fn series_t_bivariate(order: usize) -> BivariateSeries {
    let one = TruncatedPowerSeries::<VPoly>::one(order);
    let z = TruncatedPowerSeries::<VPoly>::monomial(1, order);
    let zv = z.scale(&VPoly::monomial(1));
    let mut t = TruncatedPowerSeries::<VPoly>::zero(order);
    for _ in 0..order {
        let branches = t.div(&(&one - &t)).expect("T has no constant term");
        t = &zv + &(&z * &branches);
    }
    BivariateSeries { series: t }
}
