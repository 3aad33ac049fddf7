use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use super::CouplingError;
use crate::bounds::{binomial_pmf, binomial_tail, Side};
use crate::combinatorics::binomial;
use crate::rng::Seed;
use crate::stats::{chi_square_gof, ChiSquare};

/// One joint draw: `X <= Z <= Y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominancePair {
    pub x: u64,
    pub z: u64,
    pub y: u64,
}

/// Joint sampler of `X ~ Bin(N, P)` and `Y ~ Bin(LKN, P/K)` with `X <= Y`.
///
/// `Y` is a sum of `N` blocks `Y'_i ~ Bin(LK, P/K)`; `Z_i = 1{Y'_i >= 1}` is
/// Bernoulli(`P0`) with `1 - P0 = (1 - P/K)^(LK)`, and `X_i` keeps `Z_i` with
/// probability `P / P0`.
#[derive(Clone, Debug)]
pub struct BinomialCoupler {
    pub n: u64,
    pub p: f64,
    pub k: u64,
    pub l: u64,
    /// `P0 = 1 - (1 - P/K)^(LK)`.
    pub p0: f64,
    /// `P / P0`.
    pub thinning: f64,
    block: Option<Binomial>,
}

impl BinomialCoupler {
    pub fn new(n: u64, p: f64, k: u64, l: u64) -> Result<Self, CouplingError> {
        if !(0.0..=0.5).contains(&p) {
            return Err(CouplingError::Parameter(format!("P = {p} must lie in [0, 1/2]")));
        }
        if l < 2 {
            return Err(CouplingError::Parameter(format!("L = {l} must be at least 2")));
        }
        if k == 0 {
            return Err(CouplingError::Parameter("K must be positive".into()));
        }
        let trials = l
            .checked_mul(k)
            .ok_or_else(|| CouplingError::Parameter("L K overflows".into()))?;
        let q = p / k as f64;
        let p0 = -(trials as f64 * (-q).ln_1p()).exp_m1();
        let thinning = if p0 > 0.0 { (p / p0).min(1.0) } else { 0.0 };
        let block = (q > 0.0).then(|| Binomial::new(trials, q).expect("valid binomial"));
        Ok(BinomialCoupler {
            n,
            p,
            k,
            l,
            p0,
            thinning,
            block,
        })
    }

    /// `|(1 - P/K)^(LK) - (1 - P0)|`, computed by repeated squaring.
    pub fn p0_residual(&self) -> f64 {
        let base = 1.0 - self.p / self.k as f64;
        let direct = pow_u64(base, self.l * self.k);
        (direct - (1.0 - self.p0)).abs()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> DominancePair {
        let mut out = DominancePair { x: 0, z: 0, y: 0 };
        let Some(block) = &self.block else {
            return out;
        };
        for _ in 0..self.n {
            let yi = block.sample(rng);
            out.y += yi;
            if yi >= 1 {
                out.z += 1;
                if rng.random::<f64>() < self.thinning {
                    out.x += 1;
                }
            }
        }
        out
    }
}

fn pow_u64(mut base: f64, mut e: u64) -> f64 {
    let mut acc = 1.0;
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        base *= base;
        e >>= 1;
    }
    acc
}

/// `samples` draws from [`BinomialCoupler`].
pub fn couple_binomials(
    n: u64,
    p: f64,
    k: u64,
    l: u64,
    samples: usize,
    seed: Seed,
) -> Result<Vec<DominancePair>, CouplingError> {
    let c = BinomialCoupler::new(n, p, k, l)?;
    let mut rng = seed.rng();
    Ok((0..samples).map(|_| c.sample(&mut rng)).collect())
}

/// Chi-square test of `samples` against `Bin(n, p)`, with the upper tail
/// beyond the largest observed value pooled into one cell.
pub fn binomial_gof(samples: &[u64], n: u64, p: f64) -> ChiSquare {
    let top = samples.iter().copied().max().unwrap_or(0).min(n);
    let mut observed = vec![0u64; top as usize + 2];
    for &s in samples {
        observed[s as usize] += 1;
    }
    let mut probs: Vec<f64> = (0..=top).map(|k| binomial_pmf(n, p, k)).collect();
    probs.push(if top < n {
        binomial_tail(n, p, top + 1, Side::Upper)
    } else {
        0.0
    });
    chi_square_gof(&observed, &probs, 5.0)
}

/// `N`, `P`, `K`, `L` before and after rounding.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SillyParameters {
    pub n_raw: f64,
    pub p: f64,
    pub k_raw: f64,
    pub l_raw: f64,
    pub n: u64,
    pub k: u64,
    pub l: u64,
}

/// Why the parameters fall outside the regime where dominance is guaranteed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "violation")]
pub enum RegimeViolation {
    LBelowTwo { l: u64 },
    PAboveHalf { p: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SillyCouplingReport {
    pub params: SillyParameters,
    pub regime: Option<RegimeViolation>,
    pub trials: usize,
    pub violations: u64,
    pub mean_x: f64,
    pub mean_y: f64,
    pub expected_x: f64,
    pub expected_y: f64,
    pub fit_x: Option<ChiSquare>,
    pub fit_y: Option<ChiSquare>,
}

/// Instantiates the dominance coupling with
/// `N = ρ eps^2 ln n`, `P = n^(-eps')`,
/// `K = r/(1 + eps/2) · C(n-1, r-1) / (n^eps' ln n)` and
/// `L = (1 + eps/2) / (eps^2 r ρ)`, each rounded to the nearest integer
/// (`N, K >= 1`), and runs `trials` joint draws.
pub fn verify_silly_coupling(
    n: usize,
    r: usize,
    eps: f64,
    eps_prime: f64,
    rho: usize,
    trials: usize,
    seed: Seed,
) -> Result<SillyCouplingReport, CouplingError> {
    let ln_n = (n as f64).ln();
    let np = (n as f64).powf(eps_prime);
    let deg = binomial(n as u64 - 1, r as u64 - 1)
        .ok_or_else(|| CouplingError::Parameter("C(n-1, r-1) overflows".into()))? as f64;
    let half = 1.0 + eps / 2.0;
    let params = SillyParameters {
        n_raw: rho as f64 * eps * eps * ln_n,
        p: 1.0 / np,
        k_raw: r as f64 / half * deg / (np * ln_n),
        l_raw: half / (eps * eps * r as f64 * rho as f64),
        n: 0,
        k: 0,
        l: 0,
    };
    let params = SillyParameters {
        n: (params.n_raw.round() as u64).max(1),
        k: (params.k_raw.round() as u64).max(1),
        l: params.l_raw.round() as u64,
        ..params
    };
    let regime = if params.l < 2 {
        Some(RegimeViolation::LBelowTwo { l: params.l })
    } else if params.p > 0.5 {
        Some(RegimeViolation::PAboveHalf { p: params.p })
    } else {
        None
    };
    let mut report = SillyCouplingReport {
        regime,
        trials: 0,
        violations: 0,
        mean_x: 0.0,
        mean_y: 0.0,
        expected_x: params.n as f64 * params.p,
        expected_y: (params.l * params.n) as f64 * params.p,
        fit_x: None,
        fit_y: None,
        params,
    };
    if report.regime.is_some() || trials == 0 {
        return Ok(report);
    }
    let pr = &report.params;
    let draws = couple_binomials(pr.n, pr.p, pr.k, pr.l, trials, seed)?;
    let xs: Vec<u64> = draws.iter().map(|d| d.x).collect();
    let ys: Vec<u64> = draws.iter().map(|d| d.y).collect();
    report.trials = trials;
    report.violations = draws.iter().filter(|d| d.x > d.y).count() as u64;
    report.mean_x = xs.iter().sum::<u64>() as f64 / trials as f64;
    report.mean_y = ys.iter().sum::<u64>() as f64 / trials as f64;
    report.fit_x = Some(binomial_gof(&xs, pr.n, pr.p));
    report.fit_y = Some(binomial_gof(&ys, pr.l * pr.k * pr.n, pr.p / pr.k as f64));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_probability() {
        let d = couple_binomials(5, 0.0, 2, 2, 100, Seed::new(1)).unwrap();
        assert!(d.iter().all(|p| p.x == 0 && p.y == 0));
    }

    #[test]
    fn p0_example() {
        let c = BinomialCoupler::new(1, 0.5, 1, 2).unwrap();
        assert!((c.p0 - 0.75).abs() < 1e-15);
        assert!(c.p0 >= c.p);
        assert!(c.p0_residual() < 1e-12);
    }

    #[test]
    fn dominance_and_means() {
        let d = couple_binomials(10, 0.3, 4, 2, 100_000, Seed::new(2)).unwrap();
        assert!(d.iter().all(|p| p.x <= p.z && p.z <= p.y));
        let n = d.len() as f64;
        let mx = d.iter().map(|p| p.x as f64).sum::<f64>() / n;
        let my = d.iter().map(|p| p.y as f64).sum::<f64>() / n;
        // sd of the mean: sqrt(2.1 / n) and sqrt(80 * 0.075 * 0.925 / n)
        assert!((mx - 3.0).abs() < 3.0 * (2.1f64 / n).sqrt());
        assert!((my - 6.0).abs() < 3.0 * (5.55f64 / n).sqrt());
    }

    #[test]
    fn parameter_errors() {
        assert!(BinomialCoupler::new(1, 0.6, 1, 2).is_err());
        assert!(BinomialCoupler::new(1, 0.3, 1, 1).is_err());
        assert!(BinomialCoupler::new(1, 0.3, 0, 2).is_err());
    }

    #[test]
    fn silly_regime() {
        let rep = verify_silly_coupling(10_000, 3, 0.5, 0.1, 3, 100, Seed::new(1)).unwrap();
        assert!((rep.params.l_raw - 1.25 / 2.25).abs() < 1e-12);
        assert_eq!(rep.regime, Some(RegimeViolation::LBelowTwo { l: 1 }));
        assert_eq!(rep.trials, 0);
        let rep = verify_silly_coupling(10_000, 3, 0.2, 0.1, 1, 0, Seed::new(1)).unwrap();
        assert_eq!(rep.trials, 0);
        assert!(rep.fit_x.is_none());
    }

    #[test]
    fn silly_in_regime_has_no_violations() {
        // L = 1.1 / (0.04 * 3) = 9.17
        let rep = verify_silly_coupling(10_000, 3, 0.2, 0.1, 1, 2_000, Seed::new(3)).unwrap();
        assert_eq!(rep.regime, None);
        assert_eq!(rep.violations, 0);
        assert!(rep.fit_x.as_ref().unwrap().p_value > 1e-4);
        assert!(rep.fit_y.as_ref().unwrap().p_value > 1e-4);
    }
}
