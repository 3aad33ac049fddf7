use serde::{Deserialize, Serialize};

use crate::scalar::{ln_binomial, Scalar};

/// Which tail of a discrete distribution: `X >= t` or `X <= t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Upper,
    Lower,
}

/// `P(Bin(n, p) = k)` in log space.
pub fn binomial_pmf<T: Scalar>(n: u64, p: T, k: u64) -> T {
    if k > n {
        return T::zero();
    }
    if p <= T::zero() {
        return if k == 0 { T::one() } else { T::zero() };
    }
    if p >= T::one() {
        return if k == n { T::one() } else { T::zero() };
    }
    let lp = ln_binomial::<T>(n, k) + T::of_usize(k as usize) * p.ln() + T::of_usize((n - k) as usize) * (-p).ln_1p();
    lp.exp()
}

fn kahan<T: Scalar>(terms: impl Iterator<Item = T>) -> T {
    let mut sum = T::zero();
    let mut c = T::zero();
    for x in terms {
        let y = x - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}

/// `P(Bin(n,p) >= t)` (`Side::Upper`) or `P(Bin(n,p) <= t)` (`Side::Lower`).
///
/// Sums pmf terms outward from the threshold until they stop contributing.
pub fn binomial_tail<T: Scalar>(n: u64, p: T, t: u64, side: Side) -> T {
    let range: Box<dyn Iterator<Item = u64>> = match side {
        Side::Upper if t > n => return T::zero(),
        Side::Upper => Box::new(t..=n),
        Side::Lower => Box::new((0..=t.min(n)).rev()),
    };
    let mode = (T::of_usize(n as usize + 1) * p).floor().as_f64() as u64;
    let mut out = Vec::new();
    for k in range {
        let term = binomial_pmf(n, p, k);
        out.push(term);
        let moving_away = match side {
            Side::Upper => k > mode,
            Side::Lower => k < mode,
        };
        if moving_away && term == T::zero() {
            break;
        }
    }
    out.reverse();
    kahan(out.into_iter()).min(T::one())
}

/// `P(Bin(n,p) <= k)`.
pub fn binomial_cdf<T: Scalar>(n: u64, p: T, k: u64) -> T {
    binomial_tail(n, p, k, Side::Lower)
}

/// `P(X = k)` for `X ~ Hyp(total, successes, draws)`.
///
/// Uses `C(N-K, d-k) / C(N, d) = prod_{i<k} (d-i)/(N-i) · prod_{j<K-k} (N-d-j)/(N-k-j)`,
/// with `K <= d` after swapping the roles of successes and draws, so only
/// `min(K, d)` factors near one are multiplied in log space.
pub fn hypergeometric_pmf<T: Scalar>(total: u64, successes: u64, draws: u64, k: u64) -> T {
    if successes > total || draws > total {
        return T::zero();
    }
    if k > successes || k > draws || draws - k > total - successes {
        return T::zero();
    }
    let (special, d) = if successes <= draws {
        (successes, draws)
    } else {
        (draws, successes)
    };
    let n = T::of(total as f64);
    let (d_t, k_t) = (T::of(d as f64), T::of(k as f64));
    let mut terms: Vec<T> = (0..k)
        .map(|i| {
            let i = T::of(i as f64);
            ((d_t - i) / (n - i)).ln()
        })
        .collect();
    terms.extend((0..special - k).map(|j| {
        let j = T::of(j as f64);
        ((n - d_t - j) / (n - k_t - j)).ln()
    }));
    (ln_binomial::<T>(special, k) + kahan(terms.into_iter())).exp()
}

/// Tail of `Hyp(total, successes, draws)` at threshold `t`.
pub fn hypergeometric_tail<T: Scalar>(total: u64, successes: u64, draws: u64, t: u64, side: Side) -> T {
    let hi = successes.min(draws);
    let lo = draws.saturating_sub(total - successes.min(total));
    let terms: Vec<T> = match side {
        Side::Upper => (t.max(lo)..=hi)
            .map(|k| hypergeometric_pmf(total, successes, draws, k))
            .collect(),
        Side::Lower if t < lo => return T::zero(),
        Side::Lower => (lo..=t.min(hi))
            .map(|k| hypergeometric_pmf(total, successes, draws, k))
            .collect(),
    };
    let mut terms = terms;
    terms.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    kahan(terms.into_iter()).min(T::one())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_small() {
        let p: f64 = binomial_pmf(4, 0.5, 2);
        assert!((p - 0.375).abs() < 1e-14);
        let u: f64 = binomial_tail(4, 0.5, 3, Side::Upper);
        assert!((u - 5.0 / 16.0).abs() < 1e-14);
        let l: f64 = binomial_tail(4, 0.5, 1, Side::Lower);
        assert!((l - 5.0 / 16.0).abs() < 1e-14);
        assert_eq!(binomial_tail::<f64>(4, 0.5, 5, Side::Upper), 0.0);
        assert!((binomial_tail::<f64>(4, 0.5, 0, Side::Upper) - 1.0).abs() < 1e-14);
        assert_eq!(binomial_pmf::<f64>(3, 0.0, 0), 1.0);
        assert_eq!(binomial_pmf::<f64>(3, 1.0, 3), 1.0);
    }

    #[test]
    fn binomial_f32() {
        let p: f32 = binomial_pmf(10, 0.3, 3);
        assert!((p - 0.266_827_93).abs() < 1e-5);
    }

    #[test]
    fn hypergeometric_small() {
        let p: f64 = hypergeometric_tail(10, 5, 4, 4, Side::Upper);
        assert!((p - 5.0 / 210.0).abs() < 1e-14);
        let all: f64 = hypergeometric_tail(10, 5, 4, 0, Side::Upper);
        assert!((all - 1.0).abs() < 1e-14);
        let lo: f64 = hypergeometric_tail(10, 5, 4, 0, Side::Lower);
        assert!((lo - 5.0 / 210.0).abs() < 1e-14);
    }
}
