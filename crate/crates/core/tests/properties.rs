use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use protection::asymptotics::{asym_p_ge, Interval};
use protection::exact::{
    binomial, r_explicit, s_explicit, series_r_ge_k_recurrence, series_s_ge_k, TruncatedPowerSeries,
};
use protection::sampler::sample_tree;
use protection::tree::PlaneTree;
use protection::Statistic;

fn random_tree(n: usize, seed: u64) -> PlaneTree {
    sample_tree(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn series(coeffs: Vec<i64>) -> TruncatedPowerSeries<BigInt> {
    TruncatedPowerSeries::new(coeffs.into_iter().map(BigInt::from).collect())
}

proptest! {
    #[test]
    fn profile_is_non_increasing(n in 1usize..300, seed: u64) {
        let tree = random_tree(n, seed);
        let profile = tree.protection_profile();
        prop_assert_eq!(profile.at_least(0), n as u64);
        prop_assert_eq!(profile.at_least(1), (n - tree.leaf_count()) as u64);
        for k in 0..20 {
            prop_assert!(profile.at_least(k) >= profile.at_least(k + 1));
        }
    }

    #[test]
    fn protection_is_one_plus_min_over_children(n in 1usize..200, seed: u64) {
        let tree = random_tree(n, seed);
        let pi = tree.protection_numbers();
        for v in 0..n {
            let children = tree.children(v);
            let expected = children.iter().map(|&c| pi[c as usize] + 1).min().unwrap_or(0);
            prop_assert_eq!(pi[v], expected);
        }
    }

    #[test]
    fn parenthesis_form_round_trips(n in 1usize..100, seed: u64) {
        let tree = random_tree(n, seed);
        let text = tree.to_parens();
        prop_assert_eq!(text.len(), 2 * n);
        prop_assert_eq!(text.parse::<PlaneTree>().unwrap(), tree);
    }

    #[test]
    fn pascal_rule(a in 1i64..80, b in -3i64..85) {
        let lhs = binomial(a, b).unwrap();
        let rhs = binomial(a - 1, b).unwrap() + binomial(a - 1, b - 1).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn division_inverts_multiplication(
        a in prop::collection::vec(-50i64..50, 8),
        mut d in prop::collection::vec(-50i64..50, 8),
    ) {
        d[0] = 1;
        let (a, d) = (series(a), series(d));
        prop_assert_eq!((&a * &d).div(&d).unwrap(), a);
    }

    #[test]
    fn explicit_sums_match_series(n in 1usize..40, k in 0usize..12) {
        prop_assert_eq!(r_explicit(n, k), series_r_ge_k_recurrence(k, n).coeff(n).clone());
        prop_assert_eq!(s_explicit(n, k), series_s_ge_k(k, n).coeff(n).clone());
    }

    #[test]
    fn counts_are_monotone(n in 1usize..120, k in 0usize..10) {
        prop_assert!(r_explicit(n, k) >= r_explicit(n, k + 1));
        prop_assert!(s_explicit(n, k) >= s_explicit(n, k + 1));
        prop_assert!(s_explicit(n, k) >= r_explicit(n, k));
    }

    #[test]
    fn leading_survival_terms_are_probabilities(k in 0u32..200) {
        for stat in [Statistic::X, Statistic::Y] {
            let v = asym_p_ge(stat, k).leading;
            prop_assert!(v > BigRational::from_integer(0.into()) && v <= BigRational::from_integer(1.into()));
        }
    }

    #[test]
    fn interval_products_enclose_point_products(
        a in -100i64..100, b in 0i64..50, c in -100i64..100, d in 0i64..50, s in 0i64..=10, t in 0i64..=10,
    ) {
        let q = |x: i64| BigRational::from_integer(x.into());
        let x = Interval { lower: q(a), upper: q(a + b) };
        let y = Interval { lower: q(c), upper: q(c + d) };
        let px = q(a) + q(b) * BigRational::new(s.into(), 10.into());
        let py = q(c) + q(d) * BigRational::new(t.into(), 10.into());
        prop_assert!(x.mul(&y).contains(&(&px * &py)));
        prop_assert!(x.sub(&y).contains(&(&px - &py)));
        prop_assert!(x.add(&y).contains(&(&px + &py)));
    }
}
