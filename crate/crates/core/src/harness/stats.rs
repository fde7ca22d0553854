//! Seed-paired trend checks for sweep results.

use serde::{Deserialize, Serialize};
use statrs::distribution::{Binomial, DiscreteCDF};

use crate::float::definitely_greater;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    NonIncreasing,
    NonDecreasing,
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// One-sided sign test: probability of at least `k` successes out of `n`
/// fair coin flips.
pub fn sign_test_p(k: u64, n: u64) -> f64 {
    if k == 0 || n == 0 {
        return 1.0;
    }
    let b = Binomial::new(0.5, n).expect("valid binomial");
    b.sf(k - 1)
}

/// Comparison of two consecutive sweep points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepCheck {
    pub from: usize,
    pub to: usize,
    pub mean_from: f64,
    pub mean_to: f64,
    /// Seeds whose value moved against the expected direction.
    pub against: u64,
    /// Seeds whose value moved with it.
    pub along: u64,
    pub ties: u64,
    /// Sign-test p-value for "moves against the expected direction".
    pub p_value: f64,
    /// Mean moved the wrong way and the sign test rejects at `alpha`.
    pub violated: bool,
}

/// Checks consecutive points of `series[point][seed]` (seeds paired by
/// position) for a monotone trend.
pub fn check_trend(series: &[Vec<f64>], direction: Direction, alpha: f64) -> Vec<StepCheck> {
    series
        .windows(2)
        .enumerate()
        .map(|(i, pair)| {
            let (a, b) = (&pair[0], &pair[1]);
            let oriented = |x: f64, y: f64| match direction {
                Direction::NonIncreasing => (x, y),
                Direction::NonDecreasing => (y, x),
            };
            let mut against = 0;
            let mut along = 0;
            for (&x, &y) in a.iter().zip(b) {
                let (lo, hi) = oriented(x, y);
                // "against" means the later point is worse than allowed
                if definitely_greater(hi, lo) {
                    against += 1;
                } else if definitely_greater(lo, hi) {
                    along += 1;
                }
            }
            let ties = a.len().min(b.len()) as u64 - against - along;
            let (mean_from, mean_to) = (mean(a), mean(b));
            let (lo, hi) = oriented(mean_from, mean_to);
            let p_value = sign_test_p(against, against + along);
            StepCheck {
                from: i,
                to: i + 1,
                mean_from,
                mean_to,
                against,
                along,
                ties,
                p_value,
                violated: definitely_greater(hi, lo) && p_value < alpha,
            }
        })
        .collect()
}
