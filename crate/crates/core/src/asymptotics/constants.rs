//! Certified enclosures of the moment constants `c0..c3` and `d0..d3`.
//!
//! With `P_k = P(· >= k)` split into a leading part `L_k` and a `1/n` part `M_k`,
//!
//! ```text
//! c0 = Σ L_k           c1 = Σ M_k
//! c2 = Σ (2k-1) L_k - c0^2     c3 = Σ (2k-1) M_k - 2 c0 c1
//! ```
//!
//! for `X`, and the same with `Y` for the `d` constants. Each series is summed
//! exactly up to `K` and the tail is bounded using `|term_k| <= A (k+1)^p 4^-k`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::asym_p_ge;
use crate::error::{Error, Result};
use crate::Statistic;

pub const MAX_DIGITS: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Part {
    Leading,
    Correction,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weight {
    /// Plain sum over `k >= 1`.
    Plain,
    /// Each term multiplied by `2k - 1`.
    Odd,
}

fn term(statistic: Statistic, part: Part, weight: Weight, k: u32) -> BigRational {
    let v = asym_p_ge(statistic, k);
    let t = match part {
        Part::Leading => v.leading,
        Part::Correction => v.correction,
    };
    match weight {
        Weight::Plain => t,
        Weight::Odd => t * BigInt::from(2 * k as i64 - 1),
    }
}

// (A, p) with |term_k| <= A (k+1)^p 4^-k for all k >= 1. With q = 4^k >= 4:
//   X leading      9q/(q+2)^2 <= 9/q
//   X correction   |(3k-8)q^2 + 28q - (12k+20)| <= (15k+56) q^2, denominator >= 2q^4  =>  252 (k+1)/q
//   Y leading      3/(q+2) <= 3/q
//   Y correction   |(3k-10)q^2 + (6k+26)q - 16| <= (9k+52) q^2, denominator >= 2q^3  =>  26 (k+1)/q
// and the odd weight adds a factor 2k-1 <= 2(k+1).
fn tail_coefficients(statistic: Statistic, part: Part, weight: Weight) -> (u64, u32) {
    let (a, p) = match (statistic, part) {
        (Statistic::X, Part::Leading) => (9, 0),
        (Statistic::X, Part::Correction) => (252, 1),
        (Statistic::Y, Part::Leading) => (3, 0),
        (Statistic::Y, Part::Correction) => (26, 1),
    };
    match weight {
        Weight::Plain => (a, p),
        Weight::Odd => (2 * a, p + 1),
    }
}

/// Upper bound on `Σ_{k > terms} |term_k|`.
///
/// For `k > K >= 1` consecutive bound terms shrink by at least
/// `((K+3)/(K+2))^2 / 4 < 1/2`, so the tail is at most twice its first term.
pub fn tail_bound(statistic: Statistic, part: Part, weight: Weight, terms: u32) -> BigRational {
    assert!(terms >= 1);
    let (a, p) = tail_coefficients(statistic, part, weight);
    let num = BigInt::from(2 * a) * BigInt::from(terms + 2).pow(p);
    BigRational::new(num, BigInt::from(4).pow(terms + 1))
}

/// Exact `Σ_{k=1}^{terms} term_k`.
pub fn survival_sum(statistic: Statistic, part: Part, weight: Weight, terms: u32) -> BigRational {
    let fractions: Vec<(BigInt, BigInt)> = (1..=terms)
        .map(|k| {
            let t = term(statistic, part, weight, k);
            (t.numer().clone(), t.denom().clone())
        })
        .collect();
    if fractions.is_empty() {
        return BigRational::zero();
    }
    let (num, den) = split_sum(&fractions);
    BigRational::new(num, den)
}

// Pairwise sum without intermediate reduction.
fn split_sum(fractions: &[(BigInt, BigInt)]) -> (BigInt, BigInt) {
    if fractions.len() == 1 {
        return fractions[0].clone();
    }
    let mid = fractions.len() / 2;
    let (ln, ld) = split_sum(&fractions[..mid]);
    let (rn, rd) = split_sum(&fractions[mid..]);
    (ln * &rd + rn * &ld, ld * rd)
}

/// Closed rational interval `[lower, upper]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Interval {
    pub lower: BigRational,
    pub upper: BigRational,
}

impl Interval {
    pub fn point(x: BigRational) -> Self {
        Self { lower: x.clone(), upper: x }
    }

    pub fn around(center: BigRational, radius: &BigRational) -> Self {
        Self { lower: &center - radius, upper: center + radius }
    }

    pub fn width(&self) -> BigRational {
        &self.upper - &self.lower
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lower <= x && x <= &self.upper
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lower + &self.upper) / BigInt::from(2)
    }

    pub fn midpoint_f64(&self) -> f64 {
        self.midpoint().to_f64().unwrap_or(f64::NAN)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { lower: &self.lower + &other.lower, upper: &self.upper + &other.upper }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { lower: &self.lower - &other.upper, upper: &self.upper - &other.lower }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let products = [
            &self.lower * &other.lower,
            &self.lower * &other.upper,
            &self.upper * &other.lower,
            &self.upper * &other.upper,
        ];
        let lower = products.iter().min().unwrap().clone();
        let upper = products.iter().max().unwrap().clone();
        Self { lower, upper }
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        let a = &self.lower * factor;
        let b = &self.upper * factor;
        if a <= b {
            Self { lower: a, upper: b }
        } else {
            Self { lower: b, upper: a }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConstantName {
    C0,
    C1,
    C2,
    C3,
    D0,
    D1,
    D2,
    D3,
}

impl ConstantName {
    pub const ALL: [ConstantName; 8] = [
        ConstantName::C0,
        ConstantName::C1,
        ConstantName::C2,
        ConstantName::C3,
        ConstantName::D0,
        ConstantName::D1,
        ConstantName::D2,
        ConstantName::D3,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ConstantName::C0 => "c0",
            ConstantName::C1 => "c1",
            ConstantName::C2 => "c2",
            ConstantName::C3 => "c3",
            ConstantName::D0 => "d0",
            ConstantName::D1 => "d1",
            ConstantName::D2 => "d2",
            ConstantName::D3 => "d3",
        }
    }

    pub fn statistic(&self) -> Statistic {
        match self {
            ConstantName::C0 | ConstantName::C1 | ConstantName::C2 | ConstantName::C3 => Statistic::X,
            _ => Statistic::Y,
        }
    }
}

impl fmt::Display for ConstantName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConstantName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ConstantName::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown constant {s:?}")))
    }
}

/// Rational bounds on a constant together with its certified decimal digits.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstantEnclosure {
    pub name: ConstantName,
    pub lower: BigRational,
    pub upper: BigRational,
    pub digits: usize,
    /// Truncation toward zero to `digits` places after the point.
    pub decimal: String,
    /// Number of exactly summed terms.
    pub terms: u32,
    /// Whether both bounds truncate to the same `digits`-place decimal.
    pub certified: bool,
}

impl ConstantEnclosure {
    pub fn interval(&self) -> Interval {
        Interval { lower: self.lower.clone(), upper: self.upper.clone() }
    }

    pub fn value_f64(&self) -> f64 {
        self.interval().midpoint_f64()
    }
}

fn enclose_sum(statistic: Statistic, part: Part, weight: Weight, terms: u32) -> Interval {
    Interval::around(
        survival_sum(statistic, part, weight, terms),
        &tail_bound(statistic, part, weight, terms),
    )
}

fn enclose(name: ConstantName, terms: u32) -> Interval {
    let s = name.statistic();
    let first = || enclose_sum(s, Part::Leading, Weight::Plain, terms);
    let second = || enclose_sum(s, Part::Correction, Weight::Plain, terms);
    match name {
        ConstantName::C0 | ConstantName::D0 => first(),
        ConstantName::C1 | ConstantName::D1 => second(),
        ConstantName::C2 | ConstantName::D2 => {
            let m = first();
            enclose_sum(s, Part::Leading, Weight::Odd, terms).sub(&m.mul(&m))
        }
        ConstantName::C3 | ConstantName::D3 => {
            let cross = first().mul(&second()).scale(&BigRational::from_integer(2.into()));
            enclose_sum(s, Part::Correction, Weight::Odd, terms).sub(&cross)
        }
    }
}

fn initial_terms(digits: usize) -> u32 {
    ((digits as f64 + 4.0) / 4f64.log10()).ceil() as u32 + 16
}

/// Truncates `x` toward zero to `digits` places after the point.
pub fn truncate_decimal(x: &BigRational, digits: usize) -> String {
    let scaled = x * BigRational::from_integer(BigInt::from(10).pow(digits as u32));
    let t = scaled.to_integer();
    let magnitude = t.abs().to_string();
    let padded = format!("{magnitude:0>width$}", width = digits + 1);
    let (int_part, frac_part) = padded.split_at(padded.len() - digits);
    let sign = if x.is_negative() { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

/// Enclosure of `name` tight enough to certify `digits` decimal places.
pub fn constant(name: ConstantName, digits: usize) -> Result<ConstantEnclosure> {
    if digits > MAX_DIGITS {
        return Err(Error::InvalidArgument(format!(
            "at most {MAX_DIGITS} digits are supported, got {digits}"
        )));
    }
    let target = BigRational::new(BigInt::one(), BigInt::from(10).pow(digits as u32 + 2));
    let mut terms = initial_terms(digits);
    let mut attempts = 0;
    loop {
        let interval = enclose(name, terms);
        let width_ok = interval.width() < target;
        let lo = truncate_decimal(&interval.lower, digits);
        let hi = truncate_decimal(&interval.upper, digits);
        attempts += 1;
        if width_ok && (lo == hi || attempts >= 8) {
            return Ok(ConstantEnclosure {
                name,
                certified: lo == hi,
                decimal: lo,
                lower: interval.lower,
                upper: interval.upper,
                digits,
                terms,
            });
        }
        terms += 32;
    }
}

/// Two-term approximations of the mean and variance at size `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticMoments {
    pub n: Option<u64>,
    pub mean: Interval,
    pub variance: Interval,
}

/// `mean ≈ c0 + c1/n` and `variance ≈ c2 + c3/n` (or the `d` constants for
/// `Y`); `n = None` gives the limits.
pub fn asym_moments(statistic: Statistic, n: Option<u64>, digits: usize) -> Result<AsymptoticMoments> {
    let names = match statistic {
        Statistic::X => [ConstantName::C0, ConstantName::C1, ConstantName::C2, ConstantName::C3],
        Statistic::Y => [ConstantName::D0, ConstantName::D1, ConstantName::D2, ConstantName::D3],
    };
    let [m0, m1, v0, v1] = names.map(|c| constant(c, digits).map(|e| e.interval()));
    let (m0, m1, v0, v1) = (m0?, m1?, v0?, v1?);
    let combine = |base: Interval, slope: Interval| match n {
        None => base,
        Some(n) => base.add(&slope.scale(&BigRational::new(BigInt::one(), BigInt::from(n)))),
    };
    Ok(AsymptoticMoments { n, mean: combine(m0, m1), variance: combine(v0, v1) })
}
