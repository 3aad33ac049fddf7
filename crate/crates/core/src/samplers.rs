//! Random hypergraph models, all driven by a [`Seed`].

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Geometric};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combinatorics::{binomial, floyd_sample, rank_subset, unrank_subset_avoiding, unrank_subset_into};
use crate::format::AnyHypergraph;
use crate::hypergraph::{Hypergraph, HypergraphError, OrientedHypergraph, Vertex};
use crate::rng::Seed;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SampleError {
    #[error("m = {m} exceeds C(n, r) = {total}")]
    TooManyEdges { m: u64, total: u64 },
    #[error("probability {0} is outside [0, 1]")]
    BadProbability(f64),
    #[error("need n >= r, got n = {n}, r = {r}")]
    TooFewVertices { n: usize, r: usize },
    #[error("r = {r} does not divide n = {n}")]
    Indivisible { n: usize, r: usize },
    #[error("C({n}, {r}) does not fit in 64 bits")]
    Overflow { n: usize, r: usize },
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

/// Which random model to draw from, with its model-specific parameter.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum Model {
    /// `m` uniformly random distinct edges.
    Hnm { m: u64 },
    /// Every edge independently with probability `p`.
    Hnp { p: f64 },
    /// Every one of the `r C(n, r)` oriented edges independently with probability `p`.
    Oriented { p: f64 },
    /// Every vertex picks `d` incident edges uniformly with replacement.
    Dout { d: usize },
    /// Multiset union of `rho` independent uniform perfect matchings.
    MatchingUnion { rho: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n: usize,
    pub r: usize,
    #[serde(flatten)]
    pub model: Model,
}

impl ModelParams {
    pub fn validate(&self) -> Result<(), SampleError> {
        if self.r < 2 {
            return Err(HypergraphError::BadUniformity(self.r).into());
        }
        match self.model {
            Model::Hnm { m } => {
                let total = total_edges(self.n, self.r)?;
                if m > total {
                    return Err(SampleError::TooManyEdges { m, total });
                }
            }
            Model::Hnp { p } | Model::Oriented { p } => check_probability(p)?,
            Model::Dout { .. } => {
                if self.n < self.r {
                    return Err(SampleError::TooFewVertices { n: self.n, r: self.r });
                }
            }
            Model::MatchingUnion { .. } => {
                if !self.n.is_multiple_of(self.r) {
                    return Err(SampleError::Indivisible { n: self.n, r: self.r });
                }
            }
        }
        Ok(())
    }
}

/// Draws from any model; oriented models return [`AnyHypergraph::Oriented`].
pub fn sample(params: &ModelParams, seed: Seed) -> Result<AnyHypergraph, SampleError> {
    let (n, r) = (params.n, params.r);
    Ok(match params.model {
        Model::Hnm { m } => AnyHypergraph::Unoriented(sample_hnm(n, r, m, seed)?),
        Model::Hnp { p } => AnyHypergraph::Unoriented(sample_hnp(n, r, p, seed)?),
        Model::Oriented { p } => AnyHypergraph::Oriented(sample_oriented_hnp(n, r, p, seed)?),
        Model::Dout { d } => AnyHypergraph::Oriented(sample_dout(n, r, d, seed)?),
        Model::MatchingUnion { rho } => AnyHypergraph::Unoriented(sample_matching_union(n, r, rho, seed)?),
    })
}

pub(crate) fn total_edges(n: usize, r: usize) -> Result<u64, SampleError> {
    binomial(n as u64, r as u64).ok_or(SampleError::Overflow { n, r })
}

fn check_probability(p: f64) -> Result<(), SampleError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(SampleError::BadProbability(p))
    }
}

/// `p* = ln n / C(n - 1, r - 1)`, the per-edge probability giving expected degree `ln n`.
pub fn p_star<T: Scalar>(n: usize, r: usize) -> T {
    let deg = binomial(n as u64 - 1, r as u64 - 1).unwrap_or(u64::MAX);
    T::of_usize(n).ln() / T::of(deg as f64)
}

/// `d* = ceil(eps^2 ln n)`.
pub fn d_star(eps: f64, n: usize) -> usize {
    (eps * eps * (n as f64).ln()).ceil().max(0.0) as usize
}

/// Indices in `[0, total)` kept independently with probability `p`, ascending.
pub(crate) fn bernoulli_indices<R: Rng + ?Sized>(rng: &mut R, total: u64, p: f64) -> Vec<u64> {
    if p <= 0.0 || total == 0 {
        return Vec::new();
    }
    if p >= 1.0 {
        return (0..total).collect();
    }
    let geo = Geometric::new(p).expect("p in (0, 1)");
    let mut out = Vec::with_capacity(((total as f64) * p * 1.2) as usize + 4);
    let mut next = geo.sample(rng);
    while next < total {
        out.push(next);
        next = next.saturating_add(1).saturating_add(geo.sample(rng));
    }
    out
}

pub fn sample_hnm(n: usize, r: usize, m: u64, seed: Seed) -> Result<Hypergraph, SampleError> {
    sample_hnm_with(&mut seed.rng(), n, r, m)
}

pub fn sample_hnm_with<R: Rng + ?Sized>(rng: &mut R, n: usize, r: usize, m: u64) -> Result<Hypergraph, SampleError> {
    ModelParams {
        n,
        r,
        model: Model::Hnm { m },
    }
    .validate()?;
    let total = total_edges(n, r)?;
    let ranks = floyd_sample(rng, total, m);
    Ok(edges_from_ranks(n, r, &ranks))
}

pub(crate) fn edges_from_ranks(n: usize, r: usize, ranks: &[u64]) -> Hypergraph {
    let mut data = Vec::with_capacity(ranks.len() * r);
    let mut buf = Vec::with_capacity(r);
    for &rank in ranks {
        unrank_subset_into(n as u32, r, rank, &mut buf);
        data.extend_from_slice(&buf);
    }
    Hypergraph::from_flat_unchecked(n, r, data)
}

pub fn sample_hnp(n: usize, r: usize, p: f64, seed: Seed) -> Result<Hypergraph, SampleError> {
    sample_hnp_with(&mut seed.rng(), n, r, p)
}

pub fn sample_hnp_with<R: Rng + ?Sized>(rng: &mut R, n: usize, r: usize, p: f64) -> Result<Hypergraph, SampleError> {
    ModelParams {
        n,
        r,
        model: Model::Hnp { p },
    }
    .validate()?;
    let total = total_edges(n, r)?;
    let ranks = bernoulli_indices(rng, total, p);
    Ok(edges_from_ranks(n, r, &ranks))
}

pub fn sample_oriented_hnp(n: usize, r: usize, p: f64, seed: Seed) -> Result<OrientedHypergraph, SampleError> {
    sample_oriented_hnp_with(&mut seed.rng(), n, r, p)
}

/// Candidate `i` is edge `i / r` (lexicographic rank) with its `(i % r)`-th
/// vertex as the tail.
pub fn sample_oriented_hnp_with<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    r: usize,
    p: f64,
) -> Result<OrientedHypergraph, SampleError> {
    ModelParams {
        n,
        r,
        model: Model::Oriented { p },
    }
    .validate()?;
    let total = total_edges(n, r)?
        .checked_mul(r as u64)
        .ok_or(SampleError::Overflow { n, r })?;
    let mut out = OrientedHypergraph::empty(n, r)?;
    let mut buf = Vec::with_capacity(r);
    let mut heads = Vec::with_capacity(r - 1);
    for idx in bernoulli_indices(rng, total, p) {
        unrank_subset_into(n as u32, r, idx / r as u64, &mut buf);
        let pos = (idx % r as u64) as usize;
        heads.clear();
        heads.extend(buf.iter().enumerate().filter(|&(i, _)| i != pos).map(|(_, &v)| v));
        out.push_unchecked(buf[pos], &heads);
    }
    Ok(out)
}

pub fn sample_dout(n: usize, r: usize, d: usize, seed: Seed) -> Result<OrientedHypergraph, SampleError> {
    sample_dout_with(&mut seed.rng(), n, r, d)
}

/// Each vertex `v` makes `d` independent uniform picks among the
/// `C(n-1, r-1)` edges containing it, keeping repeats. Edges are emitted
/// grouped by tail, in pick order.
pub fn sample_dout_with<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    r: usize,
    d: usize,
) -> Result<OrientedHypergraph, SampleError> {
    ModelParams {
        n,
        r,
        model: Model::Dout { d },
    }
    .validate()?;
    let per_vertex = total_edges(n - 1, r - 1)?;
    let mut out = OrientedHypergraph::empty(n, r)?;
    for v in 0..n as Vertex {
        for _ in 0..d {
            let rank = rng.random_range(0..per_vertex);
            let heads = unrank_subset_avoiding(n as u32, r - 1, v, rank);
            out.push_unchecked(v, &heads);
        }
    }
    Ok(out)
}

/// Position of `heads` among the `C(n-1, r-1)` out-edge candidates of `tail`.
pub fn candidate_rank(n: usize, tail: Vertex, heads: &[Vertex]) -> u64 {
    crate::combinatorics::rank_subset_avoiding(n as u32, tail, heads)
}

pub fn sample_matching_union(n: usize, r: usize, rho: usize, seed: Seed) -> Result<Hypergraph, SampleError> {
    sample_matching_union_with(&mut seed.rng(), n, r, rho)
}

pub fn sample_matching_union_with<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    r: usize,
    rho: usize,
) -> Result<Hypergraph, SampleError> {
    ModelParams {
        n,
        r,
        model: Model::MatchingUnion { rho },
    }
    .validate()?;
    let mut data = Vec::with_capacity(rho * n);
    for _ in 0..rho {
        data.extend(uniform_matching_of_complete(rng, n, r));
    }
    Ok(Hypergraph::from_flat_unchecked(n, r, data))
}

/// A uniform perfect matching of `K(n, r)`: repeatedly match the lowest
/// unmatched vertex with a uniform `(r-1)`-subset of the other unmatched ones.
fn uniform_matching_of_complete<R: Rng + ?Sized>(rng: &mut R, n: usize, r: usize) -> Vec<Vertex> {
    let mut unmatched: Vec<Vertex> = (0..n as Vertex).collect();
    let mut flat = Vec::with_capacity(n);
    while let Some((&low, rest)) = unmatched.split_first() {
        let mut rest = rest.to_vec();
        let picked: Vec<usize> = rand::seq::index::sample(rng, rest.len(), r - 1).into_vec();
        let mut edge: Vec<Vertex> = picked.iter().map(|&i| rest[i]).collect();
        edge.push(low);
        edge.sort_unstable();
        let mut gone = picked;
        gone.sort_unstable_by(|a, b| b.cmp(a));
        for i in gone {
            rest.remove(i);
        }
        flat.extend_from_slice(&edge);
        unmatched = rest;
    }
    flat
}

/// The edge-deletion process on `K(n, r)` that never deletes a protected
/// edge set `E1`.
///
/// A uniformly random ordering `e_1, ..., e_N` of all edges is fixed at
/// construction. At time `t` the hypergraph is `E1 ∪ {e_{t+1}, ..., e_N}`.
#[derive(Clone, Debug)]
pub struct PermutationProcess {
    n: usize,
    r: usize,
    order: Vec<u64>,
    protected: HashSet<u64>,
    // protected_removed[t] = |E1 ∩ {e_1..e_t}|
    protected_removed: Vec<usize>,
}

/// One step of the process: time `t`, `m_t = |H_t|`, and the edge `e_t`
/// removed from `R` to reach it (none at `t = 0`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProcessStep {
    pub t: usize,
    pub m_t: usize,
    pub removed: Option<Vec<Vertex>>,
    pub removed_is_protected: bool,
}

impl PermutationProcess {
    pub fn new(protected: &Hypergraph, seed: Seed) -> Result<Self, SampleError> {
        let (n, r) = (protected.n(), protected.r());
        let total = total_edges(n, r)?;
        if total > 20_000_000 {
            return Err(SampleError::Overflow { n, r });
        }
        let mut order: Vec<u64> = (0..total).collect();
        order.shuffle(&mut seed.rng());
        let protected: HashSet<u64> = protected.edges().map(|e| rank_subset(n as u32, e)).collect();
        let mut protected_removed = Vec::with_capacity(order.len() + 1);
        protected_removed.push(0);
        let mut acc = 0;
        for rank in &order {
            acc += protected.contains(rank) as usize;
            protected_removed.push(acc);
        }
        Ok(PermutationProcess {
            n,
            r,
            order,
            protected,
            protected_removed,
        })
    }

    /// `N = C(n, r)`, the number of steps until `R` is empty.
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn protected_len(&self) -> usize {
        self.protected.len()
    }

    pub fn m_t(&self, t: usize) -> usize {
        (self.len() - t) + self.protected_removed[t]
    }

    /// Edge `e_t` (1-based), with whether it belongs to `E1`.
    pub fn removed_edge(&self, t: usize) -> Option<(Vec<Vertex>, bool)> {
        let rank = *self.order.get(t.checked_sub(1)?)?;
        let mut e = Vec::with_capacity(self.r);
        unrank_subset_into(self.n as u32, self.r, rank, &mut e);
        Some((e, self.protected.contains(&rank)))
    }

    pub fn step(&self, t: usize) -> ProcessStep {
        let removed = self.removed_edge(t);
        ProcessStep {
            t,
            m_t: self.m_t(t),
            removed_is_protected: removed.as_ref().is_some_and(|(_, p)| *p),
            removed: removed.map(|(e, _)| e),
        }
    }

    /// `H_t` with edges in lexicographic order.
    pub fn hypergraph_at(&self, t: usize) -> Hypergraph {
        assert!(t <= self.len(), "t = {t} beyond N = {}", self.len());
        let mut ranks: Vec<u64> = self.order[t..].to_vec();
        ranks.extend(self.order[..t].iter().filter(|r| self.protected.contains(r)));
        ranks.sort_unstable();
        edges_from_ranks(self.n, self.r, &ranks)
    }

    /// `(t, H_t, m_t)` for `t = 0, 1, ..., stop` (clamped to `N`).
    pub fn states(&self, stop: usize) -> impl Iterator<Item = (usize, Hypergraph, usize)> + '_ {
        (0..=stop.min(self.len())).map(move |t| (t, self.hypergraph_at(t), self.m_t(t)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hnm_extremes() {
        let k = sample_hnm(6, 3, 20, Seed::new(1)).unwrap();
        assert_eq!(k, Hypergraph::complete(6, 3).unwrap());
        assert_eq!(sample_hnm(6, 3, 0, Seed::new(1)).unwrap().m(), 0);
        assert!(matches!(
            sample_hnm(6, 3, 21, Seed::new(1)),
            Err(SampleError::TooManyEdges { m: 21, total: 20 })
        ));
        assert!(sample_hnm(6, 3, 7, Seed::new(9)).unwrap().is_simple());
    }

    #[test]
    fn hnp_extremes() {
        assert_eq!(
            sample_hnp(6, 3, 1.0, Seed::new(2)).unwrap(),
            Hypergraph::complete(6, 3).unwrap()
        );
        assert_eq!(sample_hnp(6, 3, 0.0, Seed::new(2)).unwrap().m(), 0);
        assert!(sample_hnp(6, 3, 1.5, Seed::new(2)).is_err());
    }

    #[test]
    fn oriented_extremes() {
        assert_eq!(sample_oriented_hnp(5, 3, 0.0, Seed::new(3)).unwrap().m(), 0);
        let all = sample_oriented_hnp(4, 3, 1.0, Seed::new(3)).unwrap();
        assert_eq!(all.m(), 12);
        assert!(all.out_degrees().iter().all(|&d| d == 3));
    }

    #[test]
    fn dout_basics() {
        assert_eq!(sample_dout(6, 3, 0, Seed::new(4)).unwrap().m(), 0);
        let h = sample_dout(3, 3, 4, Seed::new(4)).unwrap();
        assert_eq!(h.m(), 12);
        assert!(h.unoriented().edges().all(|e| e == [0, 1, 2]));
        let h = sample_dout(9, 3, 2, Seed::new(5)).unwrap();
        assert!(h.out_degrees().iter().all(|&d| d == 2));
        assert!(matches!(
            sample_dout(2, 3, 1, Seed::new(0)),
            Err(SampleError::TooFewVertices { .. })
        ));
    }

    #[test]
    fn matching_union_degrees() {
        let single = sample_matching_union(3, 3, 1, Seed::new(6)).unwrap();
        assert_eq!(single.sorted_edge_list(), vec![vec![0, 1, 2]]);
        let u = sample_matching_union(12, 3, 4, Seed::new(6)).unwrap();
        assert!(u.degrees().iter().all(|&d| d == 4));
        assert!(matches!(
            sample_matching_union(7, 3, 1, Seed::new(6)),
            Err(SampleError::Indivisible { .. })
        ));
    }

    #[test]
    fn permutation_process_endpoints() {
        let empty = Hypergraph::empty(6, 3).unwrap();
        let proc = PermutationProcess::new(&empty, Seed::new(8)).unwrap();
        assert_eq!(proc.hypergraph_at(0), Hypergraph::complete(6, 3).unwrap());
        assert_eq!(proc.hypergraph_at(proc.len()).m(), 0);

        let e1 = sample_dout(6, 3, 1, Seed::new(8)).unwrap().unoriented().dedup();
        let proc = PermutationProcess::new(&e1, Seed::new(9)).unwrap();
        let n_total = proc.len();
        for t in 0..=n_total {
            let m_t = proc.m_t(t);
            assert!(m_t >= n_total - t && m_t <= n_total - t + e1.m());
            assert_eq!(proc.hypergraph_at(t).m(), m_t);
        }
        assert_eq!(proc.hypergraph_at(n_total).sorted_edge_list(), e1.sorted_edge_list());
    }

    #[test]
    fn samplers_are_deterministic() {
        let a = sample_hnp(8, 3, 0.3, Seed::new(11).with_stream(2)).unwrap();
        let b = sample_hnp(8, 3, 0.3, Seed::new(11).with_stream(2)).unwrap();
        assert_eq!(a, b);
        let c = sample_hnp(8, 3, 0.3, Seed::new(11).with_stream(3)).unwrap();
        assert_ne!(a, c);
    }
}
