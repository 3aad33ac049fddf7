//! Binomial coefficients and the lexicographic rank/unrank bijection between
//! `[0, C(n, k))` and the sorted `k`-subsets of `[0, n)`.

use std::collections::HashSet;

use rand::Rng;

/// `C(n, k)` as `u64`, or `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k as u128 {
        // acc * (n - k + i) / i stays integral at every step
        acc = acc.checked_mul(n as u128 - k as u128 + i)? / i;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// Lexicographic rank of a sorted `k`-subset of `[0, n)`.
pub fn rank_subset(n: u32, subset: &[u32]) -> u64 {
    let k = subset.len() as u64;
    let mut rank = 0u64;
    let mut start = 0u32;
    for (i, &c) in subset.iter().enumerate() {
        for j in start..c {
            rank += binomial((n - j - 1) as u64, k - i as u64 - 1).unwrap_or(u64::MAX);
        }
        start = c + 1;
    }
    rank
}

/// Inverse of [`rank_subset`]: writes the `rank`-th sorted `k`-subset of `[0, n)` into `out`.
pub fn unrank_subset_into(n: u32, k: usize, mut rank: u64, out: &mut Vec<u32>) {
    out.clear();
    let mut c = 0u32;
    for i in 0..k {
        loop {
            let count = binomial((n - c - 1) as u64, (k - i - 1) as u64).unwrap_or(u64::MAX);
            if count <= rank {
                rank -= count;
                c += 1;
            } else {
                out.push(c);
                c += 1;
                break;
            }
        }
    }
}

pub fn unrank_subset(n: u32, k: usize, rank: u64) -> Vec<u32> {
    let mut out = Vec::with_capacity(k);
    unrank_subset_into(n, k, rank, &mut out);
    out
}

/// Floyd's algorithm: `m` distinct uniform values from `[0, total)`, in
/// increasing order. Uses `O(m)` memory.
pub fn floyd_sample<R: Rng + ?Sized>(rng: &mut R, total: u64, m: u64) -> Vec<u64> {
    assert!(m <= total, "cannot draw {m} distinct values from {total}");
    let mut chosen: HashSet<u64> = HashSet::with_capacity(m as usize);
    let mut out = Vec::with_capacity(m as usize);
    for j in (total - m)..total {
        let t = rng.random_range(0..=j);
        let pick = if chosen.contains(&t) { j } else { t };
        chosen.insert(pick);
        out.push(pick);
    }
    out.sort_unstable();
    out
}

/// The `(k)`-subset of `[0, n) \ {skip}` with the given rank, in the order
/// induced by relabelling `[0, n) \ {skip}` to `[0, n - 1)`.
pub fn unrank_subset_avoiding(n: u32, k: usize, skip: u32, rank: u64) -> Vec<u32> {
    let mut s = unrank_subset(n - 1, k, rank);
    for v in &mut s {
        if *v >= skip {
            *v += 1;
        }
    }
    s
}

/// Inverse of [`unrank_subset_avoiding`].
pub fn rank_subset_avoiding(n: u32, skip: u32, subset: &[u32]) -> u64 {
    let shifted: Vec<u32> = subset.iter().map(|&v| if v > skip { v - 1 } else { v }).collect();
    rank_subset(n - 1, &shifted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(0, 0), Some(1));
        assert_eq!(binomial(5, 2), Some(10));
        assert_eq!(binomial(9, 3), Some(84));
        assert_eq!(binomial(5, 6), Some(0));
        assert_eq!(binomial(100, 3), Some(161_700));
        assert_eq!(binomial(200, 100), None);
    }

    #[test]
    fn unrank_enumerates_lexicographically() {
        let all: Vec<_> = (0..10).map(|i| unrank_subset(5, 3, i)).collect();
        assert_eq!(all[0], vec![0, 1, 2]);
        assert_eq!(all[1], vec![0, 1, 3]);
        assert_eq!(all[9], vec![2, 3, 4]);
        for w in all.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn floyd_is_distinct_and_in_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = floyd_sample(&mut rng, 20, 20);
        assert_eq!(s, (0..20).collect::<Vec<_>>());
        let s = floyd_sample(&mut rng, 1000, 17);
        assert_eq!(s.len(), 17);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
        assert!(floyd_sample(&mut rng, 5, 0).is_empty());
    }

    proptest! {
        #[test]
        fn rank_unrank_roundtrip(n in 1u32..14, k in 0usize..6, seed in any::<u64>()) {
            prop_assume!(k as u32 <= n);
            let total = binomial(n as u64, k as u64).unwrap();
            let rank = seed % total;
            let s = unrank_subset(n, k, rank);
            prop_assert_eq!(s.len(), k);
            prop_assert!(s.windows(2).all(|w| w[0] < w[1]));
            prop_assert_eq!(rank_subset(n, &s), rank);
        }

        #[test]
        fn avoiding_roundtrip(n in 3u32..12, skip_raw in any::<u32>(), seed in any::<u64>()) {
            let skip = skip_raw % n;
            let total = binomial(n as u64 - 1, 2).unwrap();
            let rank = seed % total;
            let s = unrank_subset_avoiding(n, 2, skip, rank);
            prop_assert!(!s.contains(&skip));
            prop_assert_eq!(rank_subset_avoiding(n, skip, &s), rank);
        }
    }
}
