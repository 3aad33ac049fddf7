//! Immutable r-uniform (multi)hypergraphs and their oriented counterpart.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combinatorics::{binomial, unrank_subset_into};

pub type Vertex = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypergraphError {
    #[error("uniformity r = {0} must be at least 2")]
    BadUniformity(usize),
    #[error("edge {index} has {found} vertices, expected {expected}")]
    WrongEdgeSize {
        index: usize,
        found: usize,
        expected: usize,
    },
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: u64, n: usize },
    #[error("edge {index} repeats vertex {vertex}")]
    RepeatedVertex { index: usize, vertex: Vertex },
    #[error("oriented edge {index}: tail {tail} also appears among its heads")]
    TailInHeads { index: usize, tail: Vertex },
    #[error("codegree needs two distinct vertices, got {0} twice")]
    EqualVertices(Vertex),
    #[error("complete hypergraph K({n}, {r}) is too large to enumerate")]
    TooLarge { n: usize, r: usize },
}

fn check_vertex(v: u64, n: usize) -> Result<Vertex, HypergraphError> {
    if v < n as u64 {
        Ok(v as Vertex)
    } else {
        Err(HypergraphError::VertexOutOfRange { vertex: v, n })
    }
}

/// Sorts `edge` in place and checks it is a valid `r`-set on `[0, n)`.
fn canonicalize(edge: &mut [Vertex], index: usize, n: usize, r: usize) -> Result<(), HypergraphError> {
    if edge.len() != r {
        return Err(HypergraphError::WrongEdgeSize {
            index,
            found: edge.len(),
            expected: r,
        });
    }
    edge.sort_unstable();
    for (i, &v) in edge.iter().enumerate() {
        check_vertex(v as u64, n)?;
        if i > 0 && edge[i - 1] == v {
            return Err(HypergraphError::RepeatedVertex { index, vertex: v });
        }
    }
    Ok(())
}

/// An `r`-uniform multihypergraph on `[0, n)`.
///
/// Edges are kept in insertion order, each stored sorted. Repeated edges are
/// allowed; [`Hypergraph::is_simple`] reports whether any occur.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "HypergraphRepr", try_from = "HypergraphRepr")]
pub struct Hypergraph {
    n: usize,
    r: usize,
    // flat storage, stride r
    data: Vec<Vertex>,
    simple: bool,
}

#[derive(Serialize, Deserialize)]
struct HypergraphRepr {
    n: usize,
    r: usize,
    edges: Vec<Vec<Vertex>>,
}

impl From<Hypergraph> for HypergraphRepr {
    fn from(h: Hypergraph) -> Self {
        HypergraphRepr {
            n: h.n,
            r: h.r,
            edges: h.edges().map(<[Vertex]>::to_vec).collect(),
        }
    }
}

impl TryFrom<HypergraphRepr> for Hypergraph {
    type Error = HypergraphError;
    fn try_from(repr: HypergraphRepr) -> Result<Self, Self::Error> {
        Hypergraph::from_edges(repr.n, repr.r, repr.edges)
    }
}

/// Old/new vertex correspondence produced by [`Hypergraph::remove_vertices`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relabeling {
    /// `old_to_new[v]` is `None` for removed vertices.
    pub old_to_new: Vec<Option<Vertex>>,
    pub new_to_old: Vec<Vertex>,
}

impl Relabeling {
    pub fn compose(&self, then: &Relabeling) -> Relabeling {
        let old_to_new = self
            .old_to_new
            .iter()
            .map(|v| v.and_then(|mid| then.old_to_new[mid as usize]))
            .collect();
        let new_to_old = then
            .new_to_old
            .iter()
            .map(|&mid| self.new_to_old[mid as usize])
            .collect();
        Relabeling { old_to_new, new_to_old }
    }
}

impl Hypergraph {
    pub fn empty(n: usize, r: usize) -> Result<Self, HypergraphError> {
        if r < 2 {
            return Err(HypergraphError::BadUniformity(r));
        }
        Ok(Hypergraph {
            n,
            r,
            data: Vec::new(),
            simple: true,
        })
    }

    /// Builds a hypergraph from arbitrary vertex lists, canonicalizing each.
    pub fn from_edges<I, E>(n: usize, r: usize, edges: I) -> Result<Self, HypergraphError>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[Vertex]>,
    {
        let mut h = Hypergraph::empty(n, r)?;
        for (index, e) in edges.into_iter().enumerate() {
            let start = h.data.len();
            h.data.extend_from_slice(e.as_ref());
            canonicalize(&mut h.data[start..], index, n, r)?;
        }
        h.simple = h.compute_simple();
        Ok(h)
    }

    /// Edges given as sorted, validated slices; used by the samplers.
    pub(crate) fn from_flat_unchecked(n: usize, r: usize, data: Vec<Vertex>) -> Self {
        debug_assert_eq!(data.len() % r, 0);
        let mut h = Hypergraph {
            n,
            r,
            data,
            simple: true,
        };
        debug_assert!(h
            .edges()
            .all(|e| e.windows(2).all(|w| w[0] < w[1]) && e.last().is_none_or(|&v| (v as usize) < n)));
        h.simple = h.compute_simple();
        h
    }

    /// The complete hypergraph `K(n, r)`, edges in lexicographic order.
    pub fn complete(n: usize, r: usize) -> Result<Self, HypergraphError> {
        if r < 2 {
            return Err(HypergraphError::BadUniformity(r));
        }
        let total = binomial(n as u64, r as u64)
            .filter(|&t| t <= 50_000_000)
            .ok_or(HypergraphError::TooLarge { n, r })?;
        let mut data = Vec::with_capacity(total as usize * r);
        let mut buf = Vec::with_capacity(r);
        for rank in 0..total {
            unrank_subset_into(n as u32, r, rank, &mut buf);
            data.extend_from_slice(&buf);
        }
        Ok(Hypergraph {
            n,
            r,
            data,
            simple: true,
        })
    }

    fn compute_simple(&self) -> bool {
        let mut seen: Vec<&[Vertex]> = self.edges().collect();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] != w[1])
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn r(&self) -> usize {
        self.r
    }

    /// Number of edges, counted with multiplicity.
    #[inline]
    pub fn m(&self) -> usize {
        self.data.len() / self.r
    }

    pub fn is_simple(&self) -> bool {
        self.simple
    }

    #[inline]
    pub fn edge(&self, i: usize) -> &[Vertex] {
        &self.data[i * self.r..(i + 1) * self.r]
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = &[Vertex]> + '_ {
        self.data.chunks_exact(self.r)
    }

    pub fn degree(&self, v: Vertex) -> Result<usize, HypergraphError> {
        check_vertex(v as u64, self.n)?;
        Ok(self.data.iter().filter(|&&x| x == v).count())
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &v in &self.data {
            d[v as usize] += 1;
        }
        d
    }

    pub fn codegree(&self, v: Vertex, w: Vertex) -> Result<usize, HypergraphError> {
        check_vertex(v as u64, self.n)?;
        check_vertex(w as u64, self.n)?;
        if v == w {
            return Err(HypergraphError::EqualVertices(v));
        }
        Ok(self
            .edges()
            .filter(|e| e.binary_search(&v).is_ok() && e.binary_search(&w).is_ok())
            .count())
    }

    /// Largest codegree over all vertex pairs (0 when `n < 2`).
    pub fn max_codegree(&self) -> usize {
        let n = self.n;
        let mut co = vec![0u32; n * n];
        for e in self.edges() {
            for (i, &a) in e.iter().enumerate() {
                for &b in &e[i + 1..] {
                    co[a as usize * n + b as usize] += 1;
                }
            }
        }
        co.into_iter().max().unwrap_or(0) as usize
    }

    pub fn isolated_vertices(&self) -> Vec<Vertex> {
        self.degrees()
            .iter()
            .enumerate()
            .filter(|(_, &d)| d == 0)
            .map(|(v, _)| v as Vertex)
            .collect()
    }

    pub fn has_isolated_vertex(&self) -> bool {
        self.degrees().contains(&0)
    }

    /// Index of the first edge equal to `edge` (given in any order).
    pub fn find_edge(&self, edge: &[Vertex]) -> Option<usize> {
        let mut key = edge.to_vec();
        key.sort_unstable();
        self.edges().position(|e| e == key.as_slice())
    }

    pub fn contains_edge(&self, edge: &[Vertex]) -> bool {
        self.find_edge(edge).is_some()
    }

    /// Map from each distinct edge to the index of its first occurrence.
    pub fn edge_index(&self) -> HashMap<Vec<Vertex>, usize> {
        let mut map = HashMap::with_capacity(self.m());
        for (i, e) in self.edges().enumerate() {
            map.entry(e.to_vec()).or_insert(i);
        }
        map
    }

    /// Removes the vertices in `removed` and every edge meeting them. The
    /// survivors are relabelled to `[0, n - |removed|)` preserving order.
    pub fn remove_vertices(&self, removed: &[Vertex]) -> Result<(Hypergraph, Relabeling), HypergraphError> {
        let mut gone = vec![false; self.n];
        for &z in removed {
            check_vertex(z as u64, self.n)?;
            gone[z as usize] = true;
        }
        let mut old_to_new = vec![None; self.n];
        let mut new_to_old = Vec::new();
        for v in 0..self.n {
            if !gone[v] {
                old_to_new[v] = Some(new_to_old.len() as Vertex);
                new_to_old.push(v as Vertex);
            }
        }
        let mut data = Vec::new();
        for e in self.edges() {
            if e.iter().all(|&v| !gone[v as usize]) {
                // relabelling is monotone, so the edge stays sorted
                data.extend(e.iter().map(|&v| old_to_new[v as usize].unwrap()));
            }
        }
        let h = Hypergraph {
            n: new_to_old.len(),
            r: self.r,
            data,
            simple: self.simple,
        };
        Ok((h, Relabeling { old_to_new, new_to_old }))
    }

    /// Same vertex set, each distinct edge kept once (first occurrence order).
    pub fn dedup(&self) -> Hypergraph {
        let mut seen = std::collections::HashSet::with_capacity(self.m());
        let mut data = Vec::with_capacity(self.data.len());
        for e in self.edges() {
            if seen.insert(e) {
                data.extend_from_slice(e);
            }
        }
        Hypergraph {
            n: self.n,
            r: self.r,
            data,
            simple: true,
        }
    }

    /// Multiset union: the edges of `self` followed by those of `other`.
    pub fn union(&self, other: &Hypergraph) -> Hypergraph {
        assert_eq!((self.n, self.r), (other.n, other.r), "union of mismatched hypergraphs");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Hypergraph::from_flat_unchecked(self.n, self.r, data)
    }

    /// Sub-hypergraph on the same vertices keeping the edges at `indices`.
    pub fn select(&self, indices: &[usize]) -> Hypergraph {
        let mut data = Vec::with_capacity(indices.len() * self.r);
        for &i in indices {
            data.extend_from_slice(self.edge(i));
        }
        Hypergraph::from_flat_unchecked(self.n, self.r, data)
    }

    /// Edges as owned sorted vectors, sorted lexicographically.
    pub fn sorted_edge_list(&self) -> Vec<Vec<Vertex>> {
        let mut v: Vec<Vec<Vertex>> = self.edges().map(<[Vertex]>::to_vec).collect();
        v.sort_unstable();
        v
    }
}

/// One oriented edge: a tail plus `r - 1` sorted heads.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrientedEdge<'a> {
    pub tail: Vertex,
    pub heads: &'a [Vertex],
}

impl OrientedEdge<'_> {
    /// All `r` vertices, sorted.
    pub fn vertices(&self) -> Vec<Vertex> {
        let mut v = Vec::with_capacity(self.heads.len() + 1);
        v.extend_from_slice(self.heads);
        let pos = v.partition_point(|&h| h < self.tail);
        v.insert(pos, self.tail);
        v
    }
}

/// A multiset of oriented edges on `[0, n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "OrientedRepr", try_from = "OrientedRepr")]
pub struct OrientedHypergraph {
    n: usize,
    r: usize,
    tails: Vec<Vertex>,
    // flat storage, stride r - 1
    heads: Vec<Vertex>,
}

#[derive(Serialize, Deserialize)]
struct OrientedRepr {
    n: usize,
    r: usize,
    edges: Vec<(Vertex, Vec<Vertex>)>,
}

impl From<OrientedHypergraph> for OrientedRepr {
    fn from(h: OrientedHypergraph) -> Self {
        OrientedRepr {
            n: h.n,
            r: h.r,
            edges: h.edges().map(|e| (e.tail, e.heads.to_vec())).collect(),
        }
    }
}

impl TryFrom<OrientedRepr> for OrientedHypergraph {
    type Error = HypergraphError;
    fn try_from(repr: OrientedRepr) -> Result<Self, Self::Error> {
        OrientedHypergraph::from_edges(repr.n, repr.r, repr.edges)
    }
}

impl OrientedHypergraph {
    pub fn empty(n: usize, r: usize) -> Result<Self, HypergraphError> {
        if r < 2 {
            return Err(HypergraphError::BadUniformity(r));
        }
        Ok(OrientedHypergraph {
            n,
            r,
            tails: Vec::new(),
            heads: Vec::new(),
        })
    }

    pub fn from_edges<I, H>(n: usize, r: usize, edges: I) -> Result<Self, HypergraphError>
    where
        I: IntoIterator<Item = (Vertex, H)>,
        H: AsRef<[Vertex]>,
    {
        let mut h = OrientedHypergraph::empty(n, r)?;
        for (index, (tail, heads)) in edges.into_iter().enumerate() {
            check_vertex(tail as u64, n)?;
            let start = h.heads.len();
            h.heads.extend_from_slice(heads.as_ref());
            canonicalize(&mut h.heads[start..], index, n, r - 1).map_err(|e| match e {
                HypergraphError::WrongEdgeSize { index, found, .. } => HypergraphError::WrongEdgeSize {
                    index,
                    found: found + 1,
                    expected: r,
                },
                other => other,
            })?;
            if h.heads[start..].binary_search(&tail).is_ok() {
                return Err(HypergraphError::TailInHeads { index, tail });
            }
            h.tails.push(tail);
        }
        Ok(h)
    }

    pub(crate) fn push_unchecked(&mut self, tail: Vertex, heads: &[Vertex]) {
        debug_assert_eq!(heads.len(), self.r - 1);
        debug_assert!(heads.binary_search(&tail).is_err());
        self.tails.push(tail);
        self.heads.extend_from_slice(heads);
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn r(&self) -> usize {
        self.r
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.tails.len()
    }

    #[inline]
    pub fn edge(&self, i: usize) -> OrientedEdge<'_> {
        let s = self.r - 1;
        OrientedEdge {
            tail: self.tails[i],
            heads: &self.heads[i * s..(i + 1) * s],
        }
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = OrientedEdge<'_>> + '_ {
        (0..self.m()).map(move |i| self.edge(i))
    }

    /// Indices of the edges whose tail is `v`.
    pub fn out_edges(&self, v: Vertex) -> impl Iterator<Item = usize> + '_ {
        self.tails
            .iter()
            .enumerate()
            .filter(move |(_, &t)| t == v)
            .map(|(i, _)| i)
    }

    pub fn out_degree(&self, v: Vertex) -> usize {
        self.tails.iter().filter(|&&t| t == v).count()
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &t in &self.tails {
            d[t as usize] += 1;
        }
        d
    }

    /// Forgets orientations; one unoriented edge per oriented edge.
    pub fn unoriented(&self) -> Hypergraph {
        let mut data = Vec::with_capacity(self.m() * self.r);
        for e in self.edges() {
            data.extend(e.vertices());
        }
        Hypergraph::from_flat_unchecked(self.n, self.r, data)
    }

    /// Multiset union of several oriented hypergraphs on the same vertex set.
    pub fn concat<'a>(parts: impl IntoIterator<Item = &'a OrientedHypergraph>) -> Option<Self> {
        let mut iter = parts.into_iter();
        let mut out = iter.next()?.clone();
        for p in iter {
            assert_eq!((out.n, out.r), (p.n, p.r), "concat of mismatched hypergraphs");
            out.tails.extend_from_slice(&p.tails);
            out.heads.extend_from_slice(&p.heads);
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn h(n: usize, r: usize, edges: &[&[Vertex]]) -> Hypergraph {
        Hypergraph::from_edges(n, r, edges.iter().copied()).unwrap()
    }

    #[test]
    fn degree_examples() {
        let k = Hypergraph::complete(4, 2).unwrap();
        assert_eq!(k.degree(0).unwrap(), 3);
        let e = Hypergraph::empty(5, 3).unwrap();
        assert_eq!(e.degree(4).unwrap(), 0);
        let g = h(5, 3, &[&[0, 1, 2], &[2, 3, 4]]);
        assert_eq!(g.degree(2).unwrap(), 2);
        assert!(matches!(g.degree(5), Err(HypergraphError::VertexOutOfRange { .. })));
    }

    #[test]
    fn codegree_examples() {
        let k = Hypergraph::complete(5, 3).unwrap();
        assert_eq!(k.codegree(0, 1).unwrap(), 3);
        let m = h(6, 3, &[&[0, 1, 2], &[3, 4, 5]]);
        assert_eq!(m.codegree(0, 3).unwrap(), 0);
        let g = h(5, 3, &[&[0, 1, 2], &[0, 1, 3], &[0, 1, 4]]);
        assert_eq!(g.codegree(0, 1).unwrap(), 3);
        assert_eq!(g.max_codegree(), 3);
        assert_eq!(g.codegree(1, 1), Err(HypergraphError::EqualVertices(1)));
        assert!(g.codegree(0, 9).is_err());
    }

    #[test]
    fn remove_vertices_examples() {
        let k = Hypergraph::complete(6, 3).unwrap();
        let (rest, map) = k.remove_vertices(&[0, 1, 2]).unwrap();
        assert_eq!(rest.n(), 3);
        assert_eq!(rest.m(), 1);
        assert_eq!(rest.edge(0), &[0, 1, 2]);
        assert_eq!(map.new_to_old, vec![3, 4, 5]);

        let (same, _) = k.remove_vertices(&[]).unwrap();
        assert_eq!(same, k);

        let g = h(6, 3, &[&[0, 1, 2], &[3, 4, 5]]);
        let (rest, map) = g.remove_vertices(&[0]).unwrap();
        assert_eq!(rest.m(), 1);
        assert_eq!(rest.edge(0), &[2, 3, 4]);
        assert_eq!(map.old_to_new[3], Some(2));
        assert_eq!(map.old_to_new[0], None);
        assert!(g.remove_vertices(&[6]).is_err());
    }

    #[test]
    fn invalid_edges_are_rejected() {
        assert!(matches!(
            Hypergraph::from_edges(5, 3, [[0u32, 1]].iter()),
            Err(HypergraphError::WrongEdgeSize { .. })
        ));
        assert!(matches!(
            Hypergraph::from_edges(5, 3, [[0u32, 1, 1]].iter()),
            Err(HypergraphError::RepeatedVertex { .. })
        ));
        assert!(matches!(
            Hypergraph::from_edges(3, 3, [[0u32, 1, 3]].iter()),
            Err(HypergraphError::VertexOutOfRange { .. })
        ));
        assert!(Hypergraph::empty(3, 1).is_err());
        assert!(matches!(
            OrientedHypergraph::from_edges(4, 3, [(1u32, [1u32, 2])]),
            Err(HypergraphError::TailInHeads { .. })
        ));
    }

    #[test]
    fn simple_flag_tracks_repeats() {
        let g = h(4, 2, &[&[0, 1], &[1, 0]]);
        assert!(!g.is_simple());
        assert!(g.dedup().is_simple());
        assert_eq!(g.dedup().m(), 1);
    }

    #[test]
    fn oriented_projection() {
        let o = OrientedHypergraph::from_edges(5, 3, [(3u32, vec![4u32, 0]), (0, vec![1, 2])]).unwrap();
        assert_eq!(o.edge(0).heads, &[0, 4]);
        assert_eq!(o.out_degree(3), 1);
        let u = o.unoriented();
        assert_eq!(u.edge(0), &[0, 3, 4]);
        assert_eq!(u.edge(1), &[0, 1, 2]);
    }

    fn arb_hypergraph() -> impl Strategy<Value = Hypergraph> {
        (3usize..9, 2usize..4).prop_flat_map(|(n, r)| {
            let edge = proptest::sample::subsequence((0..n as Vertex).collect::<Vec<_>>(), r).prop_shuffle();
            proptest::collection::vec(edge, 0..12).prop_map(move |es| Hypergraph::from_edges(n, r, es).unwrap())
        })
    }

    proptest! {
        #[test]
        fn handshake(g in arb_hypergraph()) {
            let total: usize = g.degrees().iter().sum();
            prop_assert_eq!(total, g.r() * g.m());
        }

        #[test]
        fn canonicalization_is_idempotent(g in arb_hypergraph(), seed in any::<u64>()) {
            // rebuild from rotated vertex lists
            let rotated: Vec<Vec<Vertex>> = g.edges().map(|e| {
                let mut v = e.to_vec();
                let k = (seed as usize) % v.len();
                v.rotate_left(k);
                v
            }).collect();
            let again = Hypergraph::from_edges(g.n(), g.r(), rotated).unwrap();
            prop_assert_eq!(again, g);
        }

        #[test]
        fn removal_composes(g in arb_hypergraph(), a in any::<u64>(), b in any::<u64>()) {
            let n = g.n() as u64;
            let z1 = vec![(a % n) as Vertex];
            let (g1, m1) = g.remove_vertices(&z1).unwrap();
            let z2_new = vec![(b % (n - 1)) as Vertex];
            let (g12, m2) = g1.remove_vertices(&z2_new).unwrap();
            let mut union = z1.clone();
            union.push(m1.new_to_old[z2_new[0] as usize]);
            let (direct, md) = g.remove_vertices(&union).unwrap();
            prop_assert_eq!(&g12, &direct);
            prop_assert_eq!(m1.compose(&m2), md);
        }
    }
}
