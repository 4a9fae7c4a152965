//! Uniform random plane trees and Monte Carlo estimates of `X_n` and `Y_n`.
//!
//! A tree with `n` vertices is drawn by shuffling `n - 1` up-steps and `n`
//! down-steps, rotating to the unique cyclic shift whose proper prefixes stay
//! nonnegative (cycle lemma), and dropping the final down-step. The result is
//! a uniform Dyck path of length `2(n - 1)`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tree::PlaneTree;
use crate::Statistic;

/// Number of independent random streams trials are split across.
pub const WORKERS: usize = 8;

pub const RNG_NAME: &str = "ChaCha8Rng";

/// Uniform random plane tree with `n >= 1` vertices.
pub fn sample_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> PlaneTree {
    assert!(n >= 1, "a tree has at least one vertex");
    let mut steps = vec![true; n - 1];
    steps.resize(2 * n - 1, false);
    steps.shuffle(rng);
    let start = cycle_lemma_start(&steps);
    let mut path = Vec::with_capacity(2 * n - 2);
    path.extend_from_slice(&steps[start..]);
    path.extend_from_slice(&steps[..start]);
    path.pop();
    PlaneTree::from_dyck_steps(&path).expect("rotation is a Dyck path")
}

// Start of the unique rotation whose prefixes stay >= 0 before the last step:
// just after the first position where the running sum attains its minimum.
fn cycle_lemma_start(steps: &[bool]) -> usize {
    let mut sum = 0i64;
    let mut min = i64::MAX;
    let mut at = 0;
    for (i, &up) in steps.iter().enumerate() {
        sum += if up { 1 } else { -1 };
        if sum < min {
            min = sum;
            at = i + 1;
        }
    }
    if at == steps.len() {
        0
    } else {
        at
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleStats {
    pub statistic: Statistic,
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    /// `survival_counts[k]` samples had the statistic `>= k`.
    pub survival_counts: Vec<u64>,
    pub workers: usize,
    pub rng: &'static str,
}

impl SampleStats {
    pub fn count_at_least(&self, k: usize) -> u64 {
        self.survival_counts.get(k).copied().unwrap_or(0)
    }

    pub fn fraction_at_least(&self, k: usize) -> f64 {
        self.count_at_least(k) as f64 / self.trials as f64
    }

    pub fn mean(&self) -> f64 {
        self.survival_counts.iter().skip(1).sum::<u64>() as f64 / self.trials as f64
    }
}

fn chunk(trials: u64, worker: usize) -> u64 {
    let base = trials / WORKERS as u64;
    let extra = (worker as u64) < trials % WORKERS as u64;
    base + extra as u64
}

/// Histogram of the statistic over `trials` samples. Worker `w` draws
/// `chunk(trials, w)` samples from stream `w` of a generator seeded by `seed`,
/// so the result depends only on `(statistic, n, trials, seed)`.
pub fn estimate_survival(statistic: Statistic, n: usize, trials: u64, seed: u64) -> Result<SampleStats> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let histograms: Vec<Vec<u64>> = (0..WORKERS)
        .into_par_iter()
        .map(|w| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(w as u64);
            let mut hist = Vec::new();
            for _ in 0..chunk(trials, w) {
                let tree = sample_tree(n, &mut rng);
                let value = match statistic {
                    Statistic::X => tree.protection_number(),
                    Statistic::Y => {
                        let v = rng.random_range(0..n);
                        tree.protection_numbers()[v]
                    }
                } as usize;
                if hist.len() <= value {
                    hist.resize(value + 1, 0);
                }
                hist[value] += 1;
            }
            hist
        })
        .collect();
    let len = histograms.iter().map(Vec::len).max().unwrap_or(0);
    let mut exact = vec![0u64; len];
    for h in &histograms {
        for (k, c) in h.iter().enumerate() {
            exact[k] += c;
        }
    }
    let mut survival_counts = vec![0u64; len];
    let mut acc = 0;
    for k in (0..len).rev() {
        acc += exact[k];
        survival_counts[k] = acc;
    }
    Ok(SampleStats {
        statistic,
        n,
        trials,
        seed,
        survival_counts,
        workers: WORKERS,
        rng: RNG_NAME,
    })
}

#[cfg(test)]
mod tests {
    use std::collections::HashMap;

    use super::*;

    #[test]
    fn single_vertex() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            assert_eq!(sample_tree(1, &mut rng), PlaneTree::single_vertex());
        }
    }

    #[test]
    fn rotation_is_admissible() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 1..40 {
            let t = sample_tree(n, &mut rng);
            assert_eq!(t.len(), n);
        }
    }

    fn frequencies(n: usize, samples: usize, seed: u64) -> HashMap<String, usize> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut seen = HashMap::new();
        for _ in 0..samples {
            *seen.entry(sample_tree(n, &mut rng).to_parens()).or_insert(0) += 1;
        }
        seen
    }

    #[test]
    fn uniform_on_four_vertices() {
        let samples = 1_000_000;
        let seen = frequencies(4, samples, 7);
        assert_eq!(seen.len(), 5);
        let p = 0.2;
        let sd = (samples as f64 * p * (1.0 - p)).sqrt();
        for (tree, count) in seen {
            assert!((count as f64 - samples as f64 * p).abs() < 4.0 * sd, "{tree}: {count}");
        }
    }

    #[test]
    fn uniform_on_three_vertices() {
        let samples = 100_000;
        let seen = frequencies(3, samples, 11);
        assert_eq!(seen.len(), 2);
        let sd = (samples as f64 * 0.25).sqrt();
        for count in seen.values() {
            assert!((*count as f64 - samples as f64 / 2.0).abs() < 4.0 * sd);
        }
    }

    #[test]
    fn deterministic_and_well_formed() {
        let a = estimate_survival(Statistic::Y, 30, 5_003, 42).unwrap();
        let b = estimate_survival(Statistic::Y, 30, 5_003, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.survival_counts[0], 5_003);
        assert!(a.survival_counts.windows(2).all(|w| w[0] >= w[1]));
        let c = estimate_survival(Statistic::Y, 30, 5_003, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn root_always_one_protected() {
        let s = estimate_survival(Statistic::X, 5, 1_000, 3).unwrap();
        assert_eq!(s.count_at_least(1), 1_000);
        assert_eq!(estimate_survival(Statistic::X, 1, 10, 3).unwrap().survival_counts, vec![10]);
    }

    #[test]
    fn small_size_fractions() {
        let trials = 100_000;
        let s = estimate_survival(Statistic::X, 4, trials, 9).unwrap();
        let sd = (0.4 * 0.6 / trials as f64).sqrt();
        assert!((s.fraction_at_least(2) - 0.4).abs() < 4.0 * sd);
        assert!(estimate_survival(Statistic::X, 0, 1, 0).is_err());
        assert!(estimate_survival(Statistic::X, 3, 0, 0).is_err());
    }
}
