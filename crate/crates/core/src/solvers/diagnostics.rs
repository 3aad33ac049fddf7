use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{MatchingCount, MatchingCounter, SolverError};
use crate::samplers::PermutationProcess;
use crate::scalar::rational_to;

/// Which times of the permutation process to evaluate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "schedule")]
pub enum Schedule {
    /// `t = 0, 1, ..., stop` (clamped to `N`).
    Every {
        stop: usize,
    },
    At {
        times: Vec<usize>,
    },
    /// Every step up to and including the first `t` with `Φ(H_t) = 0`.
    UntilZero,
}

/// Degree, codegree and matching-count statistics of `H_t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProcessRecord {
    pub t: usize,
    pub m_t: usize,
    /// `D_t = r m_t / n`.
    pub avg_degree: f64,
    pub max_degree: usize,
    pub min_degree: usize,
    pub max_codegree: usize,
    /// `γ_t = n / (r m_t)`; `None` when `m_t = 0`.
    pub gamma: Option<f64>,
    pub removed_protected: bool,
    /// `ξ_t = 1 - Φ(H_t)/Φ(H_{t-1})`; zero when `e_t ∈ E1`, `None` at `t = 0`
    /// or when `Φ(H_{t-1}) = 0`.
    pub xi: Option<f64>,
    /// `ln(1 - ξ_t)` evaluated from the exact ratio; `None` where `ξ_t` is
    /// undefined or equal to one.
    pub ln_one_minus_xi: Option<f64>,
    pub phi: MatchingCount,
    /// `ln Φ(H_t)`; `None` marks `Φ = 0` (that is, `-∞`).
    pub ln_phi: Option<f64>,
}

fn count_at(process: &PermutationProcess, t: usize) -> Result<MatchingCount, SolverError> {
    Ok(MatchingCounter::new(&process.hypergraph_at(t))?.count())
}

fn record(process: &PermutationProcess, t: usize, phi: MatchingCount, prev: Option<&MatchingCount>) -> ProcessRecord {
    let h = process.hypergraph_at(t);
    let (n, r) = (h.n(), h.r());
    let m_t = process.m_t(t);
    let degrees = h.degrees();
    let removed_protected = process.step(t).removed_is_protected;
    let ratio = match prev {
        Some(prev) if !prev.is_zero() => Some(if removed_protected {
            BigRational::one()
        } else {
            BigRational::new(BigInt::from(phi.0.clone()), BigInt::from(prev.0.clone()))
        }),
        _ => None,
    };
    let xi = ratio.as_ref().map(|q| rational_to::<f64>(&(BigRational::one() - q)));
    let ln_one_minus_xi = ratio.as_ref().filter(|q| !q.is_zero()).map(|q| {
        crate::scalar::ln_biguint(&q.numer().magnitude().clone()) - crate::scalar::ln_biguint(q.denom().magnitude())
    });
    ProcessRecord {
        t,
        m_t,
        avg_degree: (r * m_t) as f64 / n as f64,
        max_degree: degrees.iter().copied().max().unwrap_or(0),
        min_degree: degrees.iter().copied().min().unwrap_or(0),
        max_codegree: h.max_codegree(),
        gamma: (m_t > 0).then(|| n as f64 / (r * m_t) as f64),
        removed_protected,
        xi,
        ln_one_minus_xi,
        ln_phi: (!phi.is_zero()).then(|| phi.ln()),
        phi,
    }
}

/// Evaluates the process at the scheduled times. `Φ` is recounted from
/// scratch at each needed time (including `t - 1` for every scheduled `t`).
pub fn process_diagnostics(
    process: &PermutationProcess,
    schedule: &Schedule,
) -> Result<Vec<ProcessRecord>, SolverError> {
    let len = process.len();
    let mut out = Vec::new();
    match schedule {
        Schedule::Every { stop } => {
            let mut prev: Option<MatchingCount> = None;
            for t in 0..=(*stop).min(len) {
                let phi = count_at(process, t)?;
                out.push(record(process, t, phi.clone(), prev.as_ref()));
                prev = Some(phi);
            }
        }
        Schedule::UntilZero => {
            let mut prev: Option<MatchingCount> = None;
            for t in 0..=len {
                let phi = count_at(process, t)?;
                let zero = phi.is_zero();
                out.push(record(process, t, phi.clone(), prev.as_ref()));
                prev = Some(phi);
                if zero {
                    break;
                }
            }
        }
        Schedule::At { times } => {
            let times: BTreeSet<usize> = times.iter().copied().filter(|&t| t <= len).collect();
            for t in times {
                let prev = if t == 0 { None } else { Some(count_at(process, t - 1)?) };
                let phi = count_at(process, t)?;
                out.push(record(process, t, phi, prev.as_ref()));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::Hypergraph;
    use crate::rng::Seed;

    #[test]
    fn initial_record() {
        let e1 = Hypergraph::empty(6, 3).unwrap();
        let p = PermutationProcess::new(&e1, Seed::new(4)).unwrap();
        let recs = process_diagnostics(&p, &Schedule::At { times: vec![0, 10] }).unwrap();
        assert_eq!(recs[0].m_t, 20);
        assert!((recs[0].avg_degree - 10.0).abs() < 1e-12);
        assert_eq!(recs[0].xi, None);
        assert_eq!(recs[0].phi.0, 10u32.into());
        assert_eq!(recs[1].m_t, 10);
        assert!((recs[1].gamma.unwrap() - 0.2).abs() < 1e-12);
    }

    #[test]
    fn telescopes_until_zero() {
        let e1 = Hypergraph::empty(9, 3).unwrap();
        let p = PermutationProcess::new(&e1, Seed::new(11)).unwrap();
        let recs = process_diagnostics(&p, &Schedule::UntilZero).unwrap();
        let last = recs.last().unwrap();
        assert!(last.phi.is_zero());
        assert_eq!(last.xi, Some(1.0));
        let base = recs[0].ln_phi.unwrap();
        let mut acc = 0.0;
        for rec in &recs[1..] {
            if let (Some(l), Some(lp)) = (rec.ln_one_minus_xi, rec.ln_phi) {
                acc += l;
                assert!((acc - (lp - base)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn protected_removals_have_zero_xi() {
        let e1 = Hypergraph::from_edges(6, 3, [[0, 1, 2], [3, 4, 5]]).unwrap();
        let p = PermutationProcess::new(&e1, Seed::new(5)).unwrap();
        let recs = process_diagnostics(&p, &Schedule::Every { stop: 20 }).unwrap();
        assert_eq!(recs.len(), 21);
        for r in &recs {
            if r.removed_protected {
                assert_eq!(r.xi, Some(0.0));
            }
        }
        assert_eq!(recs[20].m_t, 2);
        assert_eq!(recs[20].phi.0, 1u32.into());
    }
}
