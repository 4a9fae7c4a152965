//! Double-precision evaluation of the harmonic sums
//!
//! ```text
//! F(x) = Σ_{k>=1} e^{-(2k-1)x} / (1 + e^{-(2k-1)x})^2
//! G(x) = Σ_{k>=1} (2k-1) e^{-(2k-1)x} / (1 + e^{-(2k-1)x})
//! ```
//!
//! and checks of their functional equations under `x -> π²/x`:
//!
//! ```text
//! F(x) = 1/(4x) - (π²/x²) F(π²/x)
//! G(x) = π²/(24x²) + 1/24 - (π²/x²) G(π²/x)
//! ```

use std::f64::consts::{LN_2, PI};

use serde::Serialize;

use crate::error::{Error, Result};

/// Smallest tolerance accepted by [`eval_f`] and [`eval_g`].
pub const MIN_TOLERANCE: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MellinEval {
    pub x: f64,
    pub value: f64,
    /// Upper bound on the discarded tail.
    pub truncation_bound: f64,
    pub terms: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Series {
    F,
    G,
}

fn check_args(x: f64, tol: f64) -> Result<()> {
    if x.is_nan() || x <= 0.0 || x.is_infinite() {
        return Err(Error::InvalidArgument(format!("x must be positive and finite, got {x}")));
    }
    if tol.is_nan() || tol < MIN_TOLERANCE {
        return Err(Error::InvalidArgument(format!("tolerance must be at least {MIN_TOLERANCE:e}, got {tol:e}")));
    }
    Ok(())
}

// Sums terms k = 1, 2, ... and stops once the current term and the tail bound
// after it are both below tol/10.
fn sum_series(series: Series, x: f64, tol: f64) -> Result<MellinEval> {
    check_args(x, tol)?;
    let r = (-2.0 * x).exp();
    let mut value = 0.0;
    let mut k = 0usize;
    loop {
        k += 1;
        let m = (2 * k - 1) as f64;
        let e = (-m * x).exp();
        let term = match series {
            Series::F => e / ((1.0 + e) * (1.0 + e)),
            Series::G => m * e / (1.0 + e),
        };
        value += term;
        // Both terms are dominated by (weight) e^{-(2j-1)x}; the bound for
        // j > k is geometric once the weight ratio times r drops below one.
        let next = (-(m + 2.0) * x).exp();
        let tail = match series {
            Series::F => next / (1.0 - r),
            Series::G => {
                let ratio = (m + 4.0) / (m + 2.0) * r;
                if ratio < 1.0 {
                    (m + 2.0) * next / (1.0 - ratio)
                } else {
                    f64::INFINITY
                }
            }
        };
        if term < tol / 10.0 && tail < tol / 10.0 {
            return Ok(MellinEval { x, value, truncation_bound: tail, terms: k });
        }
    }
}

pub fn eval_f(x: f64, tol: f64) -> Result<MellinEval> {
    sum_series(Series::F, x, tol)
}

pub fn eval_g(x: f64, tol: f64) -> Result<MellinEval> {
    sum_series(Series::G, x, tol)
}

pub fn eval(series: Series, x: f64, tol: f64) -> Result<MellinEval> {
    sum_series(series, x, tol)
}

/// Both sides of a functional equation at `x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FunctionalCheck {
    pub series: Series,
    pub x: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

pub fn check_functional_eq(series: Series, x: f64) -> Result<FunctionalCheck> {
    let lhs = eval(series, x, MIN_TOLERANCE)?.value;
    let dual = eval(series, PI * PI / x, MIN_TOLERANCE)?.value;
    let factor = PI * PI / (x * x);
    let rhs = match series {
        Series::F => 1.0 / (4.0 * x) - factor * dual,
        Series::G => factor / 24.0 + 1.0 / 24.0 - factor * dual,
    };
    Ok(FunctionalCheck { series, x, lhs, rhs, residual: (lhs - rhs).abs() })
}

pub fn check_f_functional_eq(x: f64) -> Result<FunctionalCheck> {
    check_functional_eq(Series::F, x)
}

pub fn check_g_functional_eq(x: f64) -> Result<FunctionalCheck> {
    check_functional_eq(Series::G, x)
}

/// `(π²/log²2) S(π²/log 2)`, the gap left when the dual term is dropped from
/// the functional equation at `x = log 2`.
pub fn near_identity_gap(series: Series) -> f64 {
    let dual = PI * PI / LN_2;
    let value = eval(series, dual, MIN_TOLERANCE).expect("positive abscissa").value;
    PI * PI / (LN_2 * LN_2) * value
}

/// Sample abscissas used by the acceptance checks.
pub fn standard_abscissas() -> [f64; 7] {
    [0.5, LN_2, 1.0, 2.0, std::f64::consts::E, PI, 5.0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_arguments() {
        assert!(eval_f(0.0, 1e-12).is_err());
        assert!(eval_f(-1.0, 1e-12).is_err());
        assert!(eval_g(f64::NAN, 1e-12).is_err());
        assert!(eval_g(1.0, 1e-15).is_err());
    }

    #[test]
    fn functional_equations_hold() {
        for x in standard_abscissas() {
            let f = check_f_functional_eq(x).unwrap();
            let g = check_g_functional_eq(x).unwrap();
            assert!(f.residual < 1e-12, "F at {x}: {}", f.residual);
            assert!(g.residual < 1e-12, "G at {x}: {}", g.residual);
        }
    }

    #[test]
    fn fixed_point_values() {
        assert!((eval_f(PI, 1e-14).unwrap().value - 1.0 / (8.0 * PI)).abs() < 1e-12);
        assert!((eval_g(PI, 1e-14).unwrap().value - 1.0 / 24.0).abs() < 1e-12);
    }

    #[test]
    fn large_arguments_are_tiny() {
        assert!(eval_f(40.0, 1e-14).unwrap().value < 1e-16);
        assert!(eval_g(40.0, 1e-14).unwrap().value < 1e-16);
    }

    #[test]
    fn near_identities() {
        let f = format!("{:.20}", near_identity_gap(Series::F));
        let g = format!("{:.20}", near_identity_gap(Series::G));
        assert!(f.starts_with("0.0000134525077"), "{f}");
        assert!(g.starts_with("0.0000134525165276"), "{g}");
    }

    #[test]
    fn truncation_bound_below_tolerance() {
        for tol in [1e-6, 1e-10, 1e-14] {
            for x in [0.05, 0.5, 3.0] {
                let e = eval_g(x, tol).unwrap();
                assert!(e.truncation_bound < tol);
                let tighter = eval_g(x, 1e-14).unwrap();
                assert!((e.value - tighter.value).abs() <= tol + 1e-13 * tighter.value);
            }
        }
    }

    #[test]
    fn matches_constants() {
        use crate::asymptotics::{constant, ConstantName};
        let c0 = constant(ConstantName::C0, 20).unwrap().value_f64();
        let d0 = constant(ConstantName::D0, 20).unwrap().value_f64();
        let d2 = constant(ConstantName::D2, 20).unwrap().value_f64();
        assert!((4.5 * eval_f(LN_2, 1e-14).unwrap().value - c0).abs() < 1e-12);
        assert!((1.5 * eval_g(LN_2, 1e-14).unwrap().value - (d2 + d0 * d0)).abs() < 1e-11);
    }
}
