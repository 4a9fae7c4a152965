use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact coefficient ring for [`TruncatedPowerSeries`].
pub trait Coefficient: Clone + Debug + PartialEq + Zero + One + Neg<Output = Self> {
    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    /// `self / divisor` when the quotient exists in the ring.
    fn exact_div(&self, divisor: &Self) -> Option<Self>;
}

macro_rules! ref_ops {
    () => {
        fn add_ref(&self, rhs: &Self) -> Self {
            self + rhs
        }
        fn sub_ref(&self, rhs: &Self) -> Self {
            self - rhs
        }
        fn mul_ref(&self, rhs: &Self) -> Self {
            self * rhs
        }
    };
}
pub(crate) use ref_ops;

impl Coefficient for BigInt {
    ref_ops!();

    fn exact_div(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }
}

impl Coefficient for BigRational {
    ref_ops!();

    fn exact_div(&self, divisor: &Self) -> Option<Self> {
        (!divisor.is_zero()).then(|| self / divisor)
    }
}

/// Power series `Σ_{i ≤ order} c_i z^i` known exactly up to `order`.
///
/// Binary operations truncate to the smaller operand order.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedPowerSeries<C> {
    coeffs: Vec<C>,
}

impl<C: Coefficient> TruncatedPowerSeries<C> {
    /// Series with the given coefficients; the order is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series keeps at least its constant term");
        Self { coeffs }
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> C) -> Self {
        Self::new((0..=order).map(f).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self::new(vec![C::zero(); order + 1])
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(0, order)
    }

    /// `z^power`, which is zero when `power > order`.
    pub fn monomial(power: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if power <= order {
            s.coeffs[power] = C::one();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    /// Coefficient of `z^n`. Panics when `n` is beyond the known order.
    pub fn coeff(&self, n: usize) -> &C {
        assert!(n <= self.order(), "coefficient z^{n} beyond order {}", self.order());
        &self.coeffs[n]
    }

    pub fn truncate(mut self, order: usize) -> Self {
        assert!(order <= self.order());
        self.coeffs.truncate(order + 1);
        self
    }

    /// Multiplication by `z^shift`, keeping the order.
    pub fn shift_up(&self, shift: usize) -> Self {
        let order = self.order();
        Self::from_fn(order, |i| if i < shift { C::zero() } else { self.coeffs[i - shift].clone() })
    }

    /// Division by `z^shift`; the dropped coefficients must vanish.
    pub fn shift_down(&self, shift: usize) -> Self {
        assert!(shift <= self.order());
        assert!(self.coeffs[..shift].iter().all(Zero::is_zero), "series not divisible by z^{shift}");
        Self::new(self.coeffs[shift..].to_vec())
    }

    pub fn scale(&self, factor: &C) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.mul_ref(factor)).collect())
    }

    /// Divides every coefficient by `divisor`; `None` if any quotient leaves the ring.
    pub fn exact_div_scalar(&self, divisor: &C) -> Option<Self> {
        self.coeffs.iter().map(|c| c.exact_div(divisor)).collect::<Option<Vec<_>>>().map(Self::new)
    }

    /// Coefficient of `z^n` in `self * other` without forming the product.
    pub fn product_coeff(&self, other: &Self, n: usize) -> C {
        assert!(n <= self.order().min(other.order()));
        (0..=n).fold(C::zero(), |acc, i| acc.add_ref(&self.coeffs[i].mul_ref(&other.coeffs[n - i])))
    }

    /// Quotient by a series whose constant term is one.
    pub fn div(&self, divisor: &Self) -> Result<Self> {
        if !divisor.coeffs[0].is_one() {
            return Err(Error::NonUnitDivisor);
        }
        let order = self.order().min(divisor.order());
        let mut q: Vec<C> = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let mut c = self.coeffs[n].clone();
            for i in 1..=n {
                if !divisor.coeffs[i].is_zero() && !q[n - i].is_zero() {
                    c = c.sub_ref(&divisor.coeffs[i].mul_ref(&q[n - i]));
                }
            }
            q.push(c);
        }
        Ok(Self::new(q))
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one(self.order());
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    pub fn map<D: Coefficient>(&self, f: impl FnMut(&C) -> D) -> TruncatedPowerSeries<D> {
        TruncatedPowerSeries::new(self.coeffs.iter().map(f).collect())
    }
}

impl TruncatedPowerSeries<BigInt> {
    pub fn to_rational(&self) -> TruncatedPowerSeries<BigRational> {
        self.map(|c| BigRational::from_integer(c.clone()))
    }
}

impl<C: Coefficient> Add for &TruncatedPowerSeries<C> {
    type Output = TruncatedPowerSeries<C>;

    fn add(self, rhs: Self) -> Self::Output {
        let order = self.order().min(rhs.order());
        TruncatedPowerSeries::from_fn(order, |i| self.coeffs[i].add_ref(&rhs.coeffs[i]))
    }
}

impl<C: Coefficient> Sub for &TruncatedPowerSeries<C> {
    type Output = TruncatedPowerSeries<C>;

    fn sub(self, rhs: Self) -> Self::Output {
        let order = self.order().min(rhs.order());
        TruncatedPowerSeries::from_fn(order, |i| self.coeffs[i].sub_ref(&rhs.coeffs[i]))
    }
}

impl<C: Coefficient> Neg for &TruncatedPowerSeries<C> {
    type Output = TruncatedPowerSeries<C>;

    fn neg(self) -> Self::Output {
        TruncatedPowerSeries::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<C: Coefficient> Mul for &TruncatedPowerSeries<C> {
    type Output = TruncatedPowerSeries<C>;

    fn mul(self, rhs: Self) -> Self::Output {
        let order = self.order().min(rhs.order());
        let mut out = vec![C::zero(); order + 1];
        for (i, a) in self.coeffs[..=order].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs[..=order - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add_ref(&a.mul_ref(b));
                }
            }
        }
        TruncatedPowerSeries::new(out)
    }
}
