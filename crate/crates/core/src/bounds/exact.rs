use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::Side;
use crate::scalar::{rational_from_decimal, rational_to};

fn binom_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

fn int(x: BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Exact `P(Bin(n, p) = k)` for `k = 0..=n`.
pub fn binomial_pmf_exact(n: u64, p: &BigRational) -> Vec<BigRational> {
    let q = BigRational::one() - p;
    let mut p_pow = vec![BigRational::one()];
    let mut q_pow = vec![BigRational::one()];
    for i in 0..n as usize {
        p_pow.push(&p_pow[i] * p);
        q_pow.push(&q_pow[i] * &q);
    }
    (0..=n)
        .map(|k| int(binom_big(n, k)) * &p_pow[k as usize] * &q_pow[(n - k) as usize])
        .collect()
}

/// Exact mass of `Bin(n, p)` on `{k : keep(k)}`.
///
/// With `p = a/b` in lowest terms the terms share the denominator `b^n`, so
/// only integer numerators are summed.
pub fn binomial_tail_exact(n: u64, p: &BigRational, keep: impl Fn(u64) -> bool) -> BigRational {
    let (a, b) = (p.numer().clone(), p.denom().clone());
    let c = &b - &a;
    let mut a_pow = vec![BigInt::one()];
    let mut c_pow = vec![BigInt::one()];
    for i in 0..n as usize {
        a_pow.push(&a_pow[i] * &a);
        c_pow.push(&c_pow[i] * &c);
    }
    let mut total = BigInt::zero();
    let mut coef = BigUint::one();
    for k in 0..=n {
        if keep(k) {
            total += BigInt::from(coef.clone()) * &a_pow[k as usize] * &c_pow[(n - k) as usize];
        }
        coef = coef * BigUint::from(n - k) / BigUint::from(k + 1);
    }
    BigRational::new(total, num_traits::pow(b, n as usize))
}

/// Exact `P(|Bin(n,p) - np| >= eps np)`, with `p` and `eps` read as the
/// decimals they print as.
pub fn binomial_two_sided_exact(n: u64, p: f64, eps: f64) -> f64 {
    let pr = rational_from_decimal(p).expect("finite p");
    let er = rational_from_decimal(eps).expect("finite eps");
    let mean = &pr * BigRational::from_integer(BigInt::from(n));
    let dev = &er * &mean;
    let tail = binomial_tail_exact(n, &pr, |k| {
        (BigRational::from_integer(BigInt::from(k)) - &mean).abs() >= dev
    });
    rational_to(&tail)
}

/// Exact `P(Bin(n,p) >= alpha np)`.
pub(crate) fn binomial_at_least_multiple(n: u64, p: f64, alpha: f64) -> f64 {
    let pr = rational_from_decimal(p).expect("finite p");
    let target = rational_from_decimal(alpha).expect("finite alpha") * &pr * BigRational::from_integer(BigInt::from(n));
    let tail = binomial_tail_exact(n, &pr, |k| BigRational::from_integer(BigInt::from(k)) >= target);
    rational_to(&tail)
}

/// Exact pmf of `Hyp(total, successes, draws)` indexed by `k = 0..=draws`.
pub fn hypergeometric_pmf_exact(total: u64, successes: u64, draws: u64) -> Vec<BigRational> {
    let denom = int(binom_big(total, draws));
    (0..=draws)
        .map(|k| {
            if k > successes || draws - k > total.saturating_sub(successes) {
                BigRational::zero()
            } else {
                int(binom_big(successes, k) * binom_big(total - successes, draws - k)) / &denom
            }
        })
        .collect()
}

/// Exact tail of `Hyp(total, successes, draws)` at threshold `t`.
///
/// Terms are built by the ratio recurrence so that the binomials of very large
/// `total` are never formed.
pub fn hypergeometric_tail_exact(total: u64, successes: u64, draws: u64, t: u64, side: Side) -> BigRational {
    let lo = draws.saturating_sub(total - successes);
    let hi = successes.min(draws);
    if lo > hi {
        return BigRational::zero();
    }
    let (a, b) = match side {
        Side::Upper => (t.max(lo), hi),
        Side::Lower => (lo, t.min(hi)),
    };
    if a > b {
        return BigRational::zero();
    }
    let r = |x: u64| BigRational::from_integer(BigInt::from(x));
    // relative weights w_k = C(K,k) C(M-K,n-k) / C(K,lo) C(M-K,n-lo)
    let mut w = BigRational::one();
    let mut sum_all = BigRational::zero();
    let mut sum_sel = BigRational::zero();
    for k in lo..=hi {
        if k > lo {
            // w_k / w_{k-1} = (K-k+1)(n-k+1) / (k (M-K-n+k))
            w = w * r(successes - k + 1) * r(draws - k + 1) / (r(k) * r(total + k - successes - draws));
        }
        if k >= a && k <= b {
            sum_sel += &w;
        }
        sum_all += &w;
    }
    sum_sel / sum_all
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_pmfs_sum_to_one() {
        let p = BigRational::new(BigInt::from(1), BigInt::from(3));
        let s = binomial_pmf_exact(7, &p)
            .into_iter()
            .fold(BigRational::zero(), |a, b| a + b);
        assert!(s.is_one());
        let h = hypergeometric_pmf_exact(12, 5, 6)
            .into_iter()
            .fold(BigRational::zero(), |a, b| a + b);
        assert!(h.is_one());
    }

    #[test]
    fn hypergeometric_recurrence_matches_direct() {
        for (m, k, n) in [(10u64, 5u64, 4u64), (20, 3, 7), (15, 10, 12), (30, 0, 5), (9, 9, 3)] {
            let pmf = hypergeometric_pmf_exact(m, k, n);
            for t in 0..=n {
                let direct = pmf[t as usize..].iter().fold(BigRational::zero(), |a, b| a + b);
                assert_eq!(hypergeometric_tail_exact(m, k, n, t, Side::Upper), direct);
                let direct = pmf[..=t as usize].iter().fold(BigRational::zero(), |a, b| a + b);
                assert_eq!(hypergeometric_tail_exact(m, k, n, t, Side::Lower), direct);
            }
        }
        let x = hypergeometric_tail_exact(10, 5, 4, 4, Side::Upper);
        assert_eq!(x, BigRational::new(BigInt::from(1), BigInt::from(42)));
    }
}
