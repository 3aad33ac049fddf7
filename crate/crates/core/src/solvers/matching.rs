use std::collections::{HashMap, HashSet};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{canonical_edge_order, check_size, full_mask, mask_of, NotFoundReason, Outcome, SolverError};
use crate::certificates::PerfectMatching;
use crate::hypergraph::{Hypergraph, Vertex};
use crate::scalar::ln_biguint;

/// Exact number of perfect matchings `Φ(H)`. Parallel edges are distinct, so
/// a matching is a set of edge indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct MatchingCount(pub BigUint);

impl From<MatchingCount> for String {
    fn from(c: MatchingCount) -> String {
        c.0.to_string()
    }
}

impl TryFrom<String> for MatchingCount {
    type Error = num_bigint::ParseBigIntError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse().map(MatchingCount)
    }
}

impl MatchingCount {
    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// `ln Φ`, `-inf` for zero.
    pub fn ln(&self) -> f64 {
        ln_biguint(&self.0)
    }
}

impl std::fmt::Display for MatchingCount {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// Edges grouped by their smallest vertex, each group in canonical order.
fn by_min_vertex(h: &Hypergraph) -> (Vec<u128>, Vec<Vec<usize>>) {
    let masks: Vec<u128> = h.edges().map(mask_of).collect();
    let mut groups = vec![Vec::new(); h.n()];
    for e in canonical_edge_order(h) {
        groups[h.edge(e)[0] as usize].push(e);
    }
    (masks, groups)
}

/// Memoized matching counts of induced sub-hypergraphs `H[U]`, keyed by `U`.
///
/// Counting branches on the lowest vertex of `U`: every matching of `H[U]`
/// uses exactly one edge whose smallest vertex is that vertex. The number of
/// distinct `U` visited grows exponentially in `n`; `n` up to about 30 with
/// `r = 3` is practical.
#[derive(Clone, Debug)]
pub struct MatchingCounter {
    n: usize,
    r: usize,
    masks: Vec<u128>,
    groups: Vec<Vec<usize>>,
    memo: HashMap<u128, BigUint>,
}

impl MatchingCounter {
    pub fn new(h: &Hypergraph) -> Result<Self, SolverError> {
        check_size(h)?;
        let (masks, groups) = by_min_vertex(h);
        Ok(MatchingCounter {
            n: h.n(),
            r: h.r(),
            masks,
            groups,
            memo: HashMap::new(),
        })
    }

    /// `Φ(H[U])` for the vertex set `U` given as a bitmask.
    pub fn count_mask(&mut self, free: u128) -> BigUint {
        if free == 0 {
            return BigUint::one();
        }
        if !(free.count_ones() as usize).is_multiple_of(self.r) {
            return BigUint::zero();
        }
        if let Some(c) = self.memo.get(&free) {
            return c.clone();
        }
        let v = free.trailing_zeros() as usize;
        let mut total = BigUint::zero();
        for j in 0..self.groups[v].len() {
            let m = self.masks[self.groups[v][j]];
            if m & !free == 0 {
                total += self.count_mask(free & !m);
            }
        }
        self.memo.insert(free, total.clone());
        total
    }

    pub fn count(&mut self) -> MatchingCount {
        MatchingCount(self.count_mask(full_mask(self.n)))
    }

    /// `Φ(H - S)`.
    pub fn count_without(&mut self, removed: &[Vertex]) -> MatchingCount {
        MatchingCount(self.count_mask(full_mask(self.n) & !mask_of(removed)))
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }
}

/// `Φ(H)`; zero when `r` does not divide `n`.
pub fn count_matchings(h: &Hypergraph) -> Result<MatchingCount, SolverError> {
    Ok(MatchingCounter::new(h)?.count())
}

fn uniform_below<R: Rng + ?Sized>(rng: &mut R, bound: &BigUint) -> BigUint {
    let bits = bound.bits();
    let words = bits.div_ceil(32) as usize;
    let top_bits = bits - (words as u64 - 1) * 32;
    loop {
        let mut digits: Vec<u32> = (0..words).map(|_| rng.random()).collect();
        if top_bits < 32 {
            digits[words - 1] &= (1u32 << top_bits) - 1;
        }
        let x = BigUint::from_slice(&digits);
        if &x < bound {
            return x;
        }
    }
}

/// A perfect matching drawn uniformly from all `Φ(H)` of them, or `None`
/// when `Φ(H) = 0`.
pub fn sample_perfect_matching<R: Rng + ?Sized>(
    h: &Hypergraph,
    rng: &mut R,
) -> Result<Option<PerfectMatching>, SolverError> {
    let mut counter = MatchingCounter::new(h)?;
    let mut free = full_mask(h.n());
    if counter.count_mask(free).is_zero() {
        return Ok(None);
    }
    let mut chosen = Vec::with_capacity(h.n() / h.r().max(1));
    while free != 0 {
        let total = counter.count_mask(free);
        let mut x = uniform_below(rng, &total);
        let v = free.trailing_zeros() as usize;
        let group = counter.groups[v].clone();
        let mut picked = None;
        for e in group {
            let m = counter.masks[e];
            if m & !free != 0 {
                continue;
            }
            let c = counter.count_mask(free & !m);
            if x < c {
                picked = Some(e);
                break;
            }
            x -= c;
        }
        let e = picked.expect("weights sum to the total");
        chosen.push(e);
        free &= !counter.masks[e];
    }
    Ok(Some(PerfectMatching { edge_indices: chosen }))
}

/// Exact-cover backtracking on the lowest uncovered vertex.
pub fn find_perfect_matching(h: &Hypergraph, budget: u64) -> Result<Outcome<PerfectMatching>, SolverError> {
    check_size(h)?;
    let (n, r) = (h.n(), h.r());
    if n % r != 0 {
        return Ok(Outcome::NotFound {
            reason: NotFoundReason::Divisibility { n, divisor: r },
            nodes: 0,
        });
    }
    if let Some(&vertex) = h.isolated_vertices().first() {
        return Ok(Outcome::NotFound {
            reason: NotFoundReason::IsolatedVertex { vertex },
            nodes: 0,
        });
    }
    let (masks, groups) = by_min_vertex(h);
    struct St<'a> {
        masks: &'a [u128],
        groups: &'a [Vec<usize>],
        dead: HashSet<u128>,
        path: Vec<usize>,
        nodes: u64,
        budget: u64,
    }
    // Ok(true) found, Ok(false) none below, Err(()) budget
    fn go(st: &mut St, free: u128) -> Result<bool, ()> {
        if free == 0 {
            return Ok(true);
        }
        if st.dead.contains(&free) {
            return Ok(false);
        }
        let v = free.trailing_zeros() as usize;
        for &e in st.groups[v].iter() {
            let m = st.masks[e];
            if m & !free != 0 {
                continue;
            }
            if st.nodes >= st.budget {
                return Err(());
            }
            st.nodes += 1;
            st.path.push(e);
            if go(st, free & !m)? {
                return Ok(true);
            }
            st.path.pop();
        }
        st.dead.insert(free);
        Ok(false)
    }
    let mut st = St {
        masks: &masks,
        groups: &groups,
        dead: HashSet::new(),
        path: Vec::new(),
        nodes: 0,
        budget,
    };
    let res = go(&mut st, full_mask(n));
    let nodes = st.nodes;
    Ok(match res {
        Ok(true) => Outcome::Found {
            certificate: PerfectMatching { edge_indices: st.path },
            nodes,
        },
        Ok(false) => Outcome::NotFound {
            reason: NotFoundReason::Exhausted,
            nodes,
        },
        Err(()) => Outcome::BudgetExceeded { nodes },
    })
}
