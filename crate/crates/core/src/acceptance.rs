//! End-to-end acceptance checks, shared by `protection verify` and the
//! `acceptance` integration test.
//!
//! Every tolerance is a named constant below.

use std::fmt;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::asymptotics::{
    asym_p_ge, asym_p_x_ge, asym_p_y_ge, constant, limit_pmf_x, limit_pmf_y, AsymptoticValue,
    ConstantName,
};
use crate::exact::{
    catalan, dist_x_exact, dist_y_exact, series_r_ge_k_closed, series_r_ge_k_recurrence,
    series_s_ge_k, ExplicitCounts, Method,
};
use crate::mellin::{self, Series};
use crate::sampler::estimate_survival;
use crate::tree::Oracle;
use crate::Statistic;

/// Largest tree size checked against exhaustive enumeration.
pub const ORACLE_MAX_N: usize = 12;
/// Decimal places compared against the reference constants.
pub const CONSTANT_DIGITS: usize = 50;
/// Number of pmf terms summed in the normalization check.
pub const NORMALIZATION_TERMS: u32 = 80;
/// Exponent `e` of the normalization tail bound `10^-e`.
pub const NORMALIZATION_TAIL_EXP: u32 = 40;
/// Largest `k` whose pmf terms are compared with survival differences.
pub const DIFFERENCE_MAX_K: u32 = 30;
pub const CONVERGENCE_SIZES: [usize; 5] = [100, 200, 400, 800, 1600];
pub const CONVERGENCE_KS: [u32; 3] = [1, 2, 3];
/// Allowed max/min ratio of scaled residuals across [`CONVERGENCE_SIZES`].
pub const CONVERGENCE_FACTOR: f64 = 4.0;
pub const MELLIN_RESIDUAL: f64 = 1e-12;
pub const MELLIN_C0: f64 = 1e-12;
pub const MELLIN_D2: f64 = 1e-11;
pub const MELLIN_FIXED_POINT: f64 = 1e-12;
pub const NEAR_IDENTITY_F: &str = "0.0000134525077";
pub const NEAR_IDENTITY_G: &str = "0.0000134525165276";
pub const MONTE_CARLO_SIZES: [usize; 3] = [10, 50, 200];
pub const MONTE_CARLO_TRIALS: u64 = 100_000;
pub const MONTE_CARLO_MAX_K: usize = 5;
pub const MONTE_CARLO_SIGMAS: f64 = 4.0;
pub const MONTE_CARLO_SEED: u64 = 20_240_601;
pub const MEAN_TRIALS: u64 = 1_000_000;
pub const MEAN_SIZE: usize = 200;
pub const MEAN_TOLERANCE: f64 = 0.02;
pub const MOMENT_SIZE: usize = 1600;
pub const MOMENT_TOLERANCE_X: f64 = 1e-3;
pub const MOMENT_TOLERANCE_Y: f64 = 1e-4;

/// Reference 60-digit values of the moment constants (last digit rounded).
pub const REFERENCE_DIGITS: [(ConstantName, &str); 8] = [
    (ConstantName::C0, "1.622971384715353049514658203184345989635513668984063539407825"),
    (ConstantName::C1, "0.1311873689494231825244485810366733833577429413531428274982796"),
    (ConstantName::C2, "0.71569507178333266731548919868273628601066118785422617431075"),
    (ConstantName::C3, "-0.294639322732595323433878185755458143829498855158644070705218"),
    (ConstantName::D0, "0.727649276913726097531184400482145348863515722775042276537008"),
    (ConstantName::D1, "-0.0311837125986222774945246489936100437425899128713521725307175"),
    (ConstantName::D2, "0.81689937948362892278879205623322983539562628691031631640757"),
    (ConstantName::D3, "0.014197899249123624176745586362758197533680269252844749278840"),
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {}. {} ({} ms): {}", self.id, self.name, self.elapsed_ms, self.detail)
    }
}

fn timed(id: u8, name: &'static str, body: impl FnOnce() -> (bool, String)) -> CriterionOutcome {
    let start = Instant::now();
    let (passed, detail) = body();
    CriterionOutcome { id, name, passed, detail, elapsed_ms: start.elapsed().as_millis() }
}

fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

// False for NaN.
fn below(value: f64, bound: f64) -> bool {
    value < bound
}

fn pow10_inv(e: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(10).pow(e))
}

/// Truncates a decimal string to `places` digits after the point.
pub fn decimal_prefix(s: &str, places: usize) -> &str {
    match s.find('.') {
        Some(dot) => &s[..(dot + 1 + places).min(s.len())],
        None => s,
    }
}

/// Counts `r(n,k)` and `s(n,k)` along every route for `n <= ORACLE_MAX_N`.
pub fn oracle_equivalence() -> CriterionOutcome {
    timed(1, "oracle equivalence", || {
        let oracle = Oracle::default();
        let order = ORACLE_MAX_N;
        let mut mismatches = Vec::new();
        let mut cells = 0;
        for k in 0..=order {
            let rec = series_r_ge_k_recurrence(k, order);
            let closed = (k >= 1).then(|| series_r_ge_k_closed(k, order).expect("k >= 1"));
            let s_series = series_s_ge_k(k, order);
            for n in 1..=order {
                let tally = oracle.tally(n).expect("within oracle bound");
                let r = BigInt::from(tally.r(k));
                let s = BigInt::from(tally.s(k));
                cells += 1;
                let mut routes_r = vec![rec.coeff(n).clone(), crate::exact::r_explicit(n, k)];
                if let Some(c) = &closed {
                    routes_r.push(c.coeff(n).clone());
                }
                let routes_s = [s_series.coeff(n).clone(), crate::exact::s_explicit(n, k)];
                if routes_r.iter().any(|x| x != &r) || routes_s.iter().any(|x| x != &s) {
                    mismatches.push(format!("(n={n}, k={k})"));
                }
            }
        }
        let detail = if mismatches.is_empty() {
            format!("{cells} cells, r and s agree on every route")
        } else {
            format!("mismatch at {}", mismatches.join(", "))
        };
        (mismatches.is_empty(), detail)
    })
}

/// Certified digits of each constant against [`REFERENCE_DIGITS`].
pub fn constant_digits() -> CriterionOutcome {
    timed(2, "constants to 50 digits", || {
        let mut failed = Vec::new();
        for (name, reference) in REFERENCE_DIGITS {
            let enclosure = constant(name, CONSTANT_DIGITS).expect("digits within range");
            let expected = decimal_prefix(reference, CONSTANT_DIGITS);
            if !enclosure.certified || enclosure.decimal != expected {
                failed.push(format!("{name} computed {} expected {expected}", enclosure.decimal));
            }
        }
        let passed = failed.is_empty();
        let detail = if passed {
            "all 8 match".to_string()
        } else {
            format!("{}/8 match; {}", 8 - failed.len(), failed.join("; "))
        };
        (passed, detail)
    })
}

/// Limit laws sum to one with a tiny exact tail, and pmf terms are survival differences.
pub fn normalization() -> CriterionOutcome {
    timed(3, "limit-law normalization", || {
        let bound = pow10_inv(NORMALIZATION_TAIL_EXP);
        let mut problems = Vec::new();
        for (stat, pmf) in [
            (Statistic::X, limit_pmf_x as fn(u32) -> AsymptoticValue),
            (Statistic::Y, limit_pmf_y as fn(u32) -> AsymptoticValue),
        ] {
            let partial: BigRational = (0..=NORMALIZATION_TERMS).map(|k| pmf(k).leading).sum();
            let tail = BigRational::one() - &partial;
            let exact_tail = asym_p_ge(stat, NORMALIZATION_TERMS + 1).leading;
            if tail != exact_tail || tail.is_negative() || tail >= bound {
                problems.push(format!("{stat}: tail {:e}", to_f64(&tail)));
            }
            for k in 1..=DIFFERENCE_MAX_K {
                let (a, b) = (asym_p_ge(stat, k), asym_p_ge(stat, k + 1));
                let p = pmf(k);
                if p.leading != &a.leading - &b.leading || p.correction != &a.correction - &b.correction {
                    problems.push(format!("{stat}: difference at k={k}"));
                }
            }
        }
        let detail = if problems.is_empty() {
            let tx = to_f64(&asym_p_x_ge(NORMALIZATION_TERMS + 1).leading);
            let ty = to_f64(&asym_p_y_ge(NORMALIZATION_TERMS + 1).leading);
            format!("tails X {tx:.3e}, Y {ty:.3e}; differences exact for k=1..{DIFFERENCE_MAX_K}")
        } else {
            problems.join("; ")
        };
        (problems.is_empty(), detail)
    })
}

/// Exact survival probability `P(stat_n >= k)`.
pub fn exact_survival(counts: &ExplicitCounts, stat: Statistic, n: usize, k: usize) -> BigRational {
    let c = catalan(n as u64 - 1);
    match stat {
        Statistic::X => BigRational::new(counts.r(n, k), c),
        Statistic::Y => BigRational::new(counts.s(n, k), c * BigInt::from(n)),
    }
}

/// `|exact - two-term expansion| * n^power` for each size in [`CONVERGENCE_SIZES`].
pub fn scaled_residuals(counts: &ExplicitCounts, stat: Statistic, k: u32, power: f64) -> Vec<f64> {
    CONVERGENCE_SIZES
        .iter()
        .map(|&n| {
            let exact = exact_survival(counts, stat, n, k as usize);
            let diff = (exact - asym_p_ge(stat, k).eval(n as u64)).abs();
            to_f64(&diff) * (n as f64).powf(power)
        })
        .collect()
}

/// Ratio of the largest to smallest entry; one for an all-zero sequence and
/// infinite when only some entries vanish.
pub fn spread(values: &[f64]) -> f64 {
    let max = values.iter().cloned().fold(0.0, f64::max);
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    if max == 0.0 {
        1.0
    } else {
        max / min
    }
}

/// Scaled residuals of the survival expansions stay within a bounded factor.
pub fn convergence_rates() -> CriterionOutcome {
    timed(4, "convergence rates", || {
        let counts = ExplicitCounts::new(*CONVERGENCE_SIZES.last().unwrap());
        let mut passed = true;
        let mut parts = Vec::new();
        for (stat, power) in [(Statistic::X, 1.5), (Statistic::Y, 2.0)] {
            for k in CONVERGENCE_KS {
                let ratio = spread(&scaled_residuals(&counts, stat, k, power));
                let ok = ratio < CONVERGENCE_FACTOR;
                passed &= ok;
                parts.push(format!("{stat} k={k} ratio {ratio:.3}{}", if ok { "" } else { " (too large)" }));
            }
        }
        (passed, parts.join(", "))
    })
}

/// Functional equations, near-identities, fixed points and cross-links of F and G.
pub fn mellin_identities() -> CriterionOutcome {
    timed(5, "Mellin identities", || {
        let mut problems = Vec::new();
        let mut worst: f64 = 0.0;
        for x in mellin::standard_abscissas() {
            for series in [Series::F, Series::G] {
                let check = mellin::check_functional_eq(series, x).expect("positive abscissa");
                worst = worst.max(check.residual);
                if !below(check.residual, MELLIN_RESIDUAL) {
                    problems.push(format!("{series:?}({x}) residual {:e}", check.residual));
                }
            }
        }
        for (series, prefix) in [(Series::F, NEAR_IDENTITY_F), (Series::G, NEAR_IDENTITY_G)] {
            let text = format!("{:.20}", mellin::near_identity_gap(series));
            if !text.starts_with(prefix) {
                problems.push(format!("{series:?} near-identity {text}"));
            }
        }
        let pi = std::f64::consts::PI;
        let ln2 = std::f64::consts::LN_2;
        let f_pi = mellin::eval_f(pi, mellin::MIN_TOLERANCE).unwrap().value;
        let g_pi = mellin::eval_g(pi, mellin::MIN_TOLERANCE).unwrap().value;
        if !below((f_pi - 1.0 / (8.0 * pi)).abs(), MELLIN_FIXED_POINT) {
            problems.push(format!("F(pi) = {f_pi}"));
        }
        if !below((g_pi - 1.0 / 24.0).abs(), MELLIN_FIXED_POINT) {
            problems.push(format!("G(pi) = {g_pi}"));
        }
        let value = |c| constant(c, 20).expect("digits within range").value_f64();
        let (c0, d0, d2) = (value(ConstantName::C0), value(ConstantName::D0), value(ConstantName::D2));
        let f = 4.5 * mellin::eval_f(ln2, mellin::MIN_TOLERANCE).unwrap().value;
        let g = 1.5 * mellin::eval_g(ln2, mellin::MIN_TOLERANCE).unwrap().value;
        if !below((f - c0).abs(), MELLIN_C0) {
            problems.push(format!("(9/2)F(log 2) - c0 = {:e}", f - c0));
        }
        if !below((g - (d2 + d0 * d0)).abs(), MELLIN_D2) {
            problems.push(format!("(3/2)G(log 2) - (d2 + d0^2) = {:e}", g - d2 - d0 * d0));
        }
        let passed = problems.is_empty();
        let detail = if passed {
            format!("max functional residual {worst:.2e}; near-identities, fixed points and cross-links hold")
        } else {
            problems.join("; ")
        };
        (passed, detail)
    })
}

/// Monte Carlo survival fractions and the mean of `Y` against exact values.
pub fn monte_carlo() -> CriterionOutcome {
    timed(6, "Monte Carlo agreement", || {
        let oracle = Oracle::default();
        let mut problems = Vec::new();
        let mut worst: f64 = 0.0;
        for stat in [Statistic::X, Statistic::Y] {
            for n in MONTE_CARLO_SIZES {
                let exact = match stat {
                    Statistic::X => dist_x_exact(n, Method::Explicit, &oracle),
                    Statistic::Y => dist_y_exact(n, Method::Explicit, &oracle),
                }
                .expect("explicit method has no size bound");
                let seed = MONTE_CARLO_SEED + n as u64;
                let sample = estimate_survival(stat, n, MONTE_CARLO_TRIALS, seed).expect("valid arguments");
                for k in 0..=MONTE_CARLO_MAX_K {
                    let p = to_f64(&exact.survival_at(k));
                    let observed = sample.fraction_at_least(k);
                    let sd = (p * (1.0 - p) / MONTE_CARLO_TRIALS as f64).sqrt();
                    let ok = if sd == 0.0 {
                        observed == p
                    } else {
                        let z = (observed - p).abs() / sd;
                        worst = worst.max(z);
                        z < MONTE_CARLO_SIGMAS
                    };
                    if !ok {
                        problems.push(format!("{stat} n={n} k={k}: {observed} vs {p:.6}"));
                    }
                }
            }
        }
        let sample = estimate_survival(Statistic::Y, MEAN_SIZE, MEAN_TRIALS, MONTE_CARLO_SEED).expect("valid arguments");
        let value = |c| constant(c, 20).expect("digits within range").value_f64();
        let target = value(ConstantName::D0) + value(ConstantName::D1) / MEAN_SIZE as f64;
        let gap = (sample.mean() - target).abs();
        if !below(gap, MEAN_TOLERANCE) {
            problems.push(format!("mean of Y_{MEAN_SIZE} {} vs {target:.6}", sample.mean()));
        }
        let passed = problems.is_empty();
        let detail = if passed {
            format!("largest deviation {worst:.2} sd; mean of Y_{MEAN_SIZE} off by {gap:.2e}")
        } else {
            problems.join("; ")
        };
        (passed, detail)
    })
}

/// Exact means at [`MOMENT_SIZE`] against the two-term expansions.
pub fn moment_convergence() -> CriterionOutcome {
    timed(7, "moment convergence", || {
        let oracle = Oracle::default();
        let n = MOMENT_SIZE;
        let value = |c| constant(c, 30).expect("digits within range").value_f64();
        let x = dist_x_exact(n, Method::Explicit, &oracle).expect("explicit method has no size bound");
        let y = dist_y_exact(n, Method::Explicit, &oracle).expect("explicit method has no size bound");
        let gap_x = (to_f64(&x.mean) - value(ConstantName::C0) - value(ConstantName::C1) / n as f64).abs();
        let gap_y = (to_f64(&y.mean) - value(ConstantName::D0) - value(ConstantName::D1) / n as f64).abs();
        let passed = gap_x < MOMENT_TOLERANCE_X && gap_y < MOMENT_TOLERANCE_Y;
        (passed, format!("|E X_{n} - (c0 + c1/n)| = {gap_x:.3e}, |E Y_{n} - (d0 + d1/n)| = {gap_y:.3e}"))
    })
}

pub type Check = fn() -> CriterionOutcome;

pub const CRITERIA: [Check; 7] = [
    oracle_equivalence,
    constant_digits,
    normalization,
    convergence_rates,
    mellin_identities,
    monte_carlo,
    moment_convergence,
];

pub fn run_all() -> Vec<CriterionOutcome> {
    CRITERIA.iter().map(|check| check()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefixes() {
        assert_eq!(decimal_prefix("1.23456", 3), "1.234");
        assert_eq!(decimal_prefix("-0.5", 3), "-0.5");
        assert_eq!(decimal_prefix("7", 3), "7");
    }

    #[test]
    fn spread_conventions() {
        assert_eq!(spread(&[0.0, 0.0]), 1.0);
        assert_eq!(spread(&[1.0, 2.0]), 2.0);
        assert!(spread(&[0.0, 2.0]).is_infinite());
    }

    #[test]
    fn reference_strings_are_long_enough() {
        for (_, s) in REFERENCE_DIGITS {
            assert!(s.split('.').nth(1).unwrap().len() >= CONSTANT_DIGITS);
        }
        assert!(num_traits::Zero::is_zero(&BigRational::from_integer(0.into())));
        assert!(BigRational::from_integer(0.into()) < pow10_inv(NORMALIZATION_TAIL_EXP));
    }
}
