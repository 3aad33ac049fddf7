//! Closed-form tail bounds, the exact pmf oracles used to check them, and the
//! root finder for the loose-cycle threshold degree `ρ(r)`.

mod exact;
mod rho;
mod tails;

pub use exact::{
    binomial_pmf_exact, binomial_tail_exact, binomial_two_sided_exact, hypergeometric_pmf_exact,
    hypergeometric_tail_exact,
};
pub use rho::{rho_function, rho_threshold, RhoEquation, RhoError, RhoRoot};
pub use tails::{binomial_cdf, binomial_pmf, binomial_tail, hypergeometric_pmf, hypergeometric_tail, Side};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundError {
    #[error("parameter {name} = {value} is outside its domain ({domain})")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },
}

fn domain<T: Scalar>(name: &'static str, value: T, domain: &'static str) -> BoundError {
    BoundError::Domain {
        name,
        value: value.as_f64(),
        domain,
    }
}

/// Two-sided Chernoff bound `P(|Bin(n,p) - np| >= eps np) <= 2 exp(-eps^2 np / 3)`.
pub fn chernoff_two_sided<T: Scalar>(n: u64, p: T, eps: T) -> Result<T, BoundError> {
    if !(p >= T::zero() && p <= T::one()) {
        return Err(domain("p", p, "[0, 1]"));
    }
    if !(eps > T::zero()) {
        return Err(domain("eps", eps, "(0, inf)"));
    }
    let two = T::of(2.0);
    Ok(two * (-(eps * eps) * T::of(n as f64) * p / T::of(3.0)).exp())
}

/// Upper-tail bound `P(Bin(n,p) >= alpha np) <= (e / alpha)^(alpha np)`, `alpha > 1`.
pub fn chernoff_upper<T: Scalar>(n: u64, p: T, alpha: T) -> Result<T, BoundError> {
    if !(p >= T::zero() && p <= T::one()) {
        return Err(domain("p", p, "[0, 1]"));
    }
    if !(alpha > T::one()) {
        return Err(domain("alpha", alpha, "(1, inf)"));
    }
    Ok((T::E() / alpha).powf(alpha * T::of(n as f64) * p))
}

/// Union bound over vertex pairs for large codegrees:
/// `n^2 (r^2 m_t / (k n^2))^k`.
pub fn codegree_union_bound<T: Scalar>(n: u64, r: u64, m_t: u64, k: u64) -> Result<T, BoundError> {
    if k == 0 {
        return Err(domain("k", T::zero(), "k >= 1"));
    }
    let n2 = T::of((n * n) as f64);
    let ratio = T::of((r * r) as f64) * T::of(m_t as f64) / (T::of(k as f64) * n2);
    Ok(n2 * ratio.powi(k as i32))
}

/// Exponent `θ_α = eps^2 (ln(1/eps^2) + 1 + ln α) - α` bounding the expected
/// number of low-out-degree vertices by `n^θ_α`.
pub fn theta<T: Scalar>(eps: T, alpha: T) -> Result<T, BoundError> {
    if !(eps > T::zero()) {
        return Err(domain("eps", eps, "(0, inf)"));
    }
    if !(alpha > T::zero()) {
        return Err(domain("alpha", alpha, "(0, inf)"));
    }
    let e2 = eps * eps;
    Ok(e2 * ((T::one() / e2).ln() + T::one() + alpha.ln()) - alpha)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaReport<T> {
    pub theta: T,
    /// `θ_α < -1`: no vertex is expected to have low degree.
    pub below_minus_one: bool,
}

/// [`theta`] together with its regime predicate.
pub fn expected_bad_bound<T: Scalar>(eps: T, alpha: T) -> Result<ThetaReport<T>, BoundError> {
    let theta = theta(eps, alpha)?;
    Ok(ThetaReport {
        theta,
        below_minus_one: theta < -T::one(),
    })
}

/// The union bound `n ρ P(Bin(C(n-1, r-1), α p*) <= d*)` behind [`theta`],
/// evaluated exactly in floating point for finite `n`.
pub fn expected_bad_union<T: Scalar>(n: usize, r: usize, rho: usize, alpha: T, d_star: u64) -> T {
    let trials = crate::combinatorics::binomial(n as u64 - 1, r as u64 - 1).unwrap_or(u64::MAX);
    let p = alpha * crate::samplers::p_star::<T>(n, r);
    let p = p.min(T::one());
    T::of_usize(n) * T::of_usize(rho) * binomial_tail(trials, p, d_star, Side::Lower)
}

/// Which closed-form bound a [`TailBoundReport`] describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    ChernoffTwoSided,
    ChernoffUpper,
    Codegree,
}

/// A bound next to the quantity it bounds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailBoundReport<T> {
    pub kind: BoundKind,
    pub params: Vec<(String, f64)>,
    pub exact: T,
    pub bound: T,
    /// `bound - exact`; nonnegative whenever the bound holds.
    pub slack: T,
}

impl<T: Scalar> TailBoundReport<T> {
    fn new(kind: BoundKind, params: Vec<(String, f64)>, exact: T, bound: T) -> Self {
        TailBoundReport {
            kind,
            params,
            exact,
            bound,
            slack: bound - exact,
        }
    }

    pub fn holds(&self) -> bool {
        self.slack >= T::zero()
    }
}

/// Exact `P(|Bin(n,p) - np| >= eps np)` beside [`chernoff_two_sided`].
pub fn report_two_sided(n: u64, p: f64, eps: f64) -> Result<TailBoundReport<f64>, BoundError> {
    let bound = chernoff_two_sided(n, p, eps)?;
    let exact = binomial_two_sided_exact(n, p, eps);
    Ok(TailBoundReport::new(
        BoundKind::ChernoffTwoSided,
        vec![("n".into(), n as f64), ("p".into(), p), ("eps".into(), eps)],
        exact,
        bound,
    ))
}

/// Exact `P(Bin(n,p) >= alpha np)` beside [`chernoff_upper`].
pub fn report_upper(n: u64, p: f64, alpha: f64) -> Result<TailBoundReport<f64>, BoundError> {
    let bound = chernoff_upper(n, p, alpha)?;
    let exact = exact::binomial_at_least_multiple(n, p, alpha);
    Ok(TailBoundReport::new(
        BoundKind::ChernoffUpper,
        vec![("n".into(), n as f64), ("p".into(), p), ("alpha".into(), alpha)],
        exact,
        bound,
    ))
}

/// Pairwise union `C(n,2) P(Hyp(N, C(n-2,r-2), m_t) >= k)` beside
/// [`codegree_union_bound`]. The first quantity is itself an upper bound on
/// the probability that some pair has codegree at least `k` in a uniformly
/// random `m_t`-edge hypergraph.
pub fn report_codegree(n: u64, r: u64, m_t: u64, k: u64) -> Result<TailBoundReport<f64>, BoundError> {
    let bound = codegree_union_bound(n, r, m_t, k)?;
    let total = crate::combinatorics::binomial(n, r).unwrap_or(u64::MAX);
    if m_t > total {
        return Err(domain("m_t", m_t as f64, "m_t <= C(n, r)"));
    }
    let pair_edges = crate::combinatorics::binomial(n - 2, r - 2).unwrap_or(0);
    let tail = hypergeometric_tail_exact(total, pair_edges, m_t, k, Side::Upper);
    let pairs = crate::combinatorics::binomial(n, 2).unwrap_or(0);
    let exact = crate::scalar::rational_to::<f64>(&tail) * pairs as f64;
    Ok(TailBoundReport::new(
        BoundKind::Codegree,
        vec![
            ("n".into(), n as f64),
            ("r".into(), r as f64),
            ("m_t".into(), m_t as f64),
            ("k".into(), k as f64),
        ],
        exact,
        bound,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chernoff_two_sided_values() {
        let b: f64 = chernoff_two_sided(100, 0.5, 0.2).unwrap();
        assert!((b - 2.0 * (-2.0f64 / 3.0).exp()).abs() < 1e-14);
        assert!((b - 1.026834238065184).abs() < 1e-12);
        let tiny: f64 = chernoff_two_sided(100, 0.5, 1e-9).unwrap();
        assert!((tiny - 2.0).abs() < 1e-12);
        assert!(chernoff_two_sided(10, 1.5f64, 0.1).is_err());
        assert!(chernoff_two_sided(10, 0.5f64, 0.0).is_err());
        let r = report_two_sided(100, 0.5, 0.2).unwrap();
        assert!(r.holds());
        assert!((r.exact - 0.05688793364098079).abs() < 1e-12);
    }

    #[test]
    fn chernoff_upper_values() {
        let one: f64 = chernoff_upper(50, 0.1, std::f64::consts::E).unwrap();
        assert!((one - 1.0).abs() < 1e-12);
        let b: f64 = chernoff_upper(50, 0.1, 4.0).unwrap();
        assert!((b - 4.4125517470983117e-4).abs() < 1e-15);
        let r = report_upper(50, 0.1, 4.0).unwrap();
        assert!((r.exact - 2.3685993581841863e-08).abs() < 1e-18);
        assert!(r.holds());
        assert!(chernoff_upper(50, 0.1f64, 1.0).is_err());
    }

    #[test]
    fn codegree_bound_values() {
        // r^2 m / (k n^2) = 1
        let b: f64 = codegree_union_bound(10, 3, 100, 9).unwrap();
        assert!((b - 100.0).abs() < 1e-9);
        let b: f64 = codegree_union_bound(100, 3, 10_000, 9).unwrap();
        assert!((b - 1e4).abs() < 1e-6);
        assert!(codegree_union_bound::<f64>(10, 3, 5, 0).is_err());
    }

    #[test]
    fn theta_values() {
        let t: f64 = theta(0.1, 1.05).unwrap();
        assert!((t - (0.01 * (100f64.ln() + 1.0 + 1.05f64.ln()) - 1.05)).abs() < 1e-15);
        assert!((t + 0.9934603964984248).abs() < 1e-12);
        let rep = expected_bad_bound(0.1f64, 1.5).unwrap();
        assert!((rep.theta + 1.4398936470590373).abs() < 1e-12);
        assert!(rep.below_minus_one);
        // alpha = 1, eps -> 0 gives theta -> -1
        let t: f64 = theta(1e-6, 1.0).unwrap();
        assert!((t + 1.0).abs() < 1e-9);
        let t32: f32 = theta(0.1f32, 1.5).unwrap();
        assert!((t32 + 1.4398936).abs() < 1e-5);
    }

    #[test]
    fn theta_regime_with_alpha_one_plus_half_eps() {
        // θ < -1 for small eps only; the crossing sits just above 0.0831
        for i in 1..=2500 {
            let eps = i as f64 / 10_000.0;
            let rep = expected_bad_bound(eps, 1.0 + eps / 2.0).unwrap();
            assert_eq!(rep.below_minus_one, eps < 0.0832, "eps = {eps}: theta = {}", rep.theta);
        }
    }

    #[test]
    fn expected_bad_union_shrinks_with_alpha() {
        let lo: f64 = expected_bad_union(200, 3, 1, 0.5, 2);
        let hi: f64 = expected_bad_union(200, 3, 1, 2.0, 2);
        assert!(hi < lo);
    }
}
