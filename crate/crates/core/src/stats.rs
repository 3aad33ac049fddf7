//! Goodness-of-fit and interval helpers for the Monte Carlo checks.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

/// Result of a chi-square goodness-of-fit test.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    /// Number of cells after pooling.
    pub cells: usize,
}

impl ChiSquare {
    pub fn passes(&self, alpha: f64) -> bool {
        self.p_value >= alpha
    }
}

/// Chi-square test of `observed` counts against cell probabilities `probs`.
///
/// Adjacent cells are pooled left to right until each pooled cell expects at
/// least `min_expected` observations; a short remainder joins the last cell.
/// Cells with probability zero must have zero observations, otherwise the
/// p-value is zero.
pub fn chi_square_gof(observed: &[u64], probs: &[f64], min_expected: f64) -> ChiSquare {
    assert_eq!(observed.len(), probs.len(), "observed and probs differ in length");
    let total: u64 = observed.iter().sum();
    let n = total as f64;
    let impossible = observed.iter().zip(probs).any(|(&o, &p)| p <= 0.0 && o > 0);
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let (mut obs, mut exp) = (0.0, 0.0);
    for (&o, &p) in observed.iter().zip(probs) {
        obs += o as f64;
        exp += p * n;
        if exp >= min_expected {
            cells.push((obs, exp));
            obs = 0.0;
            exp = 0.0;
        }
    }
    if exp > 0.0 || obs > 0.0 {
        match cells.last_mut() {
            Some(last) => {
                last.0 += obs;
                last.1 += exp;
            }
            None => cells.push((obs, exp)),
        }
    }
    let statistic: f64 = cells
        .iter()
        .filter(|(_, e)| *e > 0.0)
        .map(|(o, e)| (o - e) * (o - e) / e)
        .sum();
    let dof = cells.len().saturating_sub(1);
    let p_value = if impossible {
        0.0
    } else if dof == 0 {
        1.0
    } else {
        let dist = ChiSquared::new(dof as f64).expect("dof > 0");
        1.0 - dist.cdf(statistic)
    };
    ChiSquare {
        statistic,
        dof,
        p_value,
        cells: cells.len(),
    }
}

/// Two-sided normal quantile `z` with `P(|Z| > z) = alpha`.
pub fn normal_quantile(alpha: f64) -> f64 {
    Normal::new(0.0, 1.0)
        .expect("standard normal")
        .inverse_cdf(1.0 - alpha / 2.0)
}

/// Wilson score interval for `successes` out of `trials` at two-sided level
/// `alpha`.
pub fn wilson_interval(successes: u64, trials: u64, alpha: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = normal_quantile(alpha);
    let n = trials as f64;
    let phat = successes as f64 / n;
    let denom = 1.0 + z * z / n;
    let centre = (phat + z * z / (2.0 * n)) / denom;
    let half = z * (phat * (1.0 - phat) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).clamp(0.0, phat), (centre + half).clamp(phat, 1.0))
}

/// Per-test level for `tests` simultaneous tests at family level `alpha`.
pub fn bonferroni(alpha: f64, tests: usize) -> f64 {
    alpha / tests.max(1) as f64
}

/// `(observed - expected) / sd` for a Bernoulli frequency.
pub fn frequency_z(hits: u64, trials: u64, p: f64) -> f64 {
    if trials == 0 {
        return 0.0;
    }
    let n = trials as f64;
    let sd = (p * (1.0 - p) / n).sqrt();
    let f = hits as f64 / n;
    if sd == 0.0 {
        if f == p {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (f - p) / sd
    }
}

/// Bonferroni-adjusted two-sided p-value of the largest `|z|` among `tests`
/// standard normal statistics.
pub fn max_z_p_value(max_abs_z: f64, tests: usize) -> f64 {
    let tail = 1.0 - Normal::new(0.0, 1.0).expect("standard normal").cdf(max_abs_z.abs());
    (2.0 * tail * tests.max(1) as f64).min(1.0)
}

/// `sqrt(T)` times the sample correlation of two indicator sequences given
/// their counts; approximately standard normal under independence.
pub fn correlation_z(both: u64, a: u64, b: u64, trials: u64) -> f64 {
    if trials == 0 {
        return 0.0;
    }
    let t = trials as f64;
    let (pa, pb) = (a as f64 / t, b as f64 / t);
    let sd = (pa * (1.0 - pa) * pb * (1.0 - pb)).sqrt();
    if sd == 0.0 {
        return 0.0;
    }
    (both as f64 / t - pa * pb) / sd * t.sqrt()
}
