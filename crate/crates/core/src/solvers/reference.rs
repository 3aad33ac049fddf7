//! Brute-force enumerators used as oracles for the search code. They share no
//! logic with the solvers and are only practical for `n` up to about 10.

use std::collections::HashSet;

use num_bigint::BigUint;

use crate::hypergraph::{Hypergraph, Vertex};

/// Every loose Hamilton cycle of `h`, each given as its sequence of vertex
/// sets in canonical cyclic form. Found by placing vertices one position at a
/// time around the cycle; vertex 0 is placed within the first `r - 1`
/// positions, which every rotation class meets.
pub fn loose_cycles_by_arrangement(h: &Hypergraph) -> HashSet<Vec<Vec<Vertex>>> {
    let (n, r) = (h.n(), h.r());
    let mut found = HashSet::new();
    if r < 2 || n % (r - 1) != 0 || n / (r - 1) < 3 {
        return found;
    }
    let edges: HashSet<Vec<Vertex>> = h.edges().map(|e| e.to_vec()).collect();
    let block = |order: &[Vertex], start: usize| -> Vec<Vertex> {
        let mut b: Vec<Vertex> = (0..r).map(|i| order[(start + i) % n]).collect();
        b.sort_unstable();
        b
    };
    let mut order: Vec<Vertex> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn place(
        order: &mut Vec<Vertex>,
        used: &mut Vec<bool>,
        n: usize,
        r: usize,
        edges: &HashSet<Vec<Vertex>>,
        block: &dyn Fn(&[Vertex], usize) -> Vec<Vertex>,
        found: &mut HashSet<Vec<Vec<Vertex>>>,
    ) {
        let len = order.len();
        // a block starting at a junction position is complete
        if len >= r && (len - r).is_multiple_of(r - 1) && !edges.contains(&block(order, len - r)) {
            return;
        }
        if len == r - 1 && !order.contains(&0) {
            return;
        }
        if len == n {
            let k = n / (r - 1);
            let seq: Vec<Vec<Vertex>> = (0..k).map(|i| block(order, i * (r - 1))).collect();
            if seq.iter().all(|b| edges.contains(b)) {
                found.insert(canonical_cycle(seq));
            }
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                order.push(v as Vertex);
                place(order, used, n, r, edges, block, found);
                order.pop();
                used[v] = false;
            }
        }
    }
    place(&mut order, &mut used, n, r, &edges, &block, &mut found);
    found
}

/// Lexicographically smallest rotation or reflection of a cyclic sequence.
pub fn canonical_cycle(seq: Vec<Vec<Vertex>>) -> Vec<Vec<Vertex>> {
    let k = seq.len();
    let mut best: Option<Vec<Vec<Vertex>>> = None;
    for rev in [false, true] {
        let base: Vec<Vec<Vertex>> = if rev {
            seq.iter().rev().cloned().collect()
        } else {
            seq.clone()
        };
        for shift in 0..k {
            let cand: Vec<Vec<Vertex>> = (0..k).map(|i| base[(i + shift) % k].clone()).collect();
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap_or_default()
}

/// `Φ(H)` by checking every set of `n / r` edge indices.
pub fn count_matchings_by_subsets(h: &Hypergraph) -> BigUint {
    let (n, r, m) = (h.n(), h.r(), h.m());
    let mut count = BigUint::from(0u32);
    if n % r != 0 {
        return count;
    }
    let k = n / r;
    let mut pick: Vec<usize> = Vec::with_capacity(k);
    fn rec(h: &Hypergraph, m: usize, k: usize, from: usize, pick: &mut Vec<usize>, count: &mut BigUint) {
        if pick.len() == k {
            let mut seen = vec![false; h.n()];
            for &e in pick.iter() {
                for &v in h.edge(e) {
                    if seen[v as usize] {
                        return;
                    }
                    seen[v as usize] = true;
                }
            }
            *count += 1u32;
            return;
        }
        for e in from..m {
            pick.push(e);
            rec(h, m, k, e + 1, pick, count);
            pick.pop();
        }
    }
    rec(h, m, k, 0, &mut pick, &mut count);
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_six_three_cycles() {
        let h = Hypergraph::complete(6, 3).unwrap();
        assert_eq!(loose_cycles_by_arrangement(&h).len(), 120);
        assert_eq!(count_matchings_by_subsets(&h), BigUint::from(10u32));
    }

    #[test]
    fn pairings() {
        let h = Hypergraph::complete(4, 2).unwrap();
        assert_eq!(count_matchings_by_subsets(&h), BigUint::from(3u32));
    }
}
