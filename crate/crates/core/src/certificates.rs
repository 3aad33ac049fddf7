//! Loose Hamilton cycles and perfect matchings as checkable certificates.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{Hypergraph, Vertex};

/// A loose Hamilton cycle of a host hypergraph.
///
/// `vertex_order` is a cyclic ordering of `[0, n)`; `edge_indices` lists the
/// `n / (r - 1)` host edges in cycle order. Each edge is a block of `r`
/// consecutive vertices and consecutive edges share exactly one vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LooseHamiltonCycle {
    pub vertex_order: Vec<Vertex>,
    pub edge_indices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerfectMatching {
    pub edge_indices: Vec<usize>,
}

/// Why a claimed certificate was rejected.
#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum Defect {
    #[error("n = {n} is not divisible by {divisor}")]
    Divisibility { n: usize, divisor: usize },
    #[error("expected {expected} edges, found {found}")]
    WrongEdgeCount { expected: usize, found: usize },
    #[error("vertex order is not a permutation of [0, n)")]
    NotAPermutation,
    #[error("edge index {0} is out of range")]
    EdgeIndexOutOfRange(usize),
    #[error("edge at position {0} is not a block of consecutive vertices")]
    NotConsecutive(usize),
    #[error("edge at position {0} and its successor do not share exactly one vertex")]
    WrongOverlap(usize),
    #[error("vertex {0} is not covered")]
    Uncovered(Vertex),
    #[error("vertex {0} is covered more than once")]
    Overlapping(Vertex),
}

impl LooseHamiltonCycle {
    /// Builds the cycle from an edge sequence in which consecutive edges
    /// (cyclically) share exactly one vertex. Returns `None` if they do not.
    pub fn from_edge_sequence(h: &Hypergraph, edge_indices: Vec<usize>) -> Option<Self> {
        let k = edge_indices.len();
        if k < 3 || edge_indices.iter().any(|&i| i >= h.m()) {
            return None;
        }
        let shared = |a: usize, b: usize| -> Option<Vertex> {
            let (ea, eb) = (h.edge(a), h.edge(b));
            let mut common = ea.iter().filter(|v| eb.binary_search(v).is_ok());
            let first = *common.next()?;
            common.next().is_none().then_some(first)
        };
        let junctions: Vec<Vertex> = (0..k)
            .map(|i| shared(edge_indices[(i + k - 1) % k], edge_indices[i]))
            .collect::<Option<_>>()?;
        let mut order = Vec::with_capacity(k * (h.r() - 1));
        for i in 0..k {
            let (start, end) = (junctions[i], junctions[(i + 1) % k]);
            order.push(start);
            order.extend(h.edge(edge_indices[i]).iter().filter(|&&v| v != start && v != end));
        }
        Some(LooseHamiltonCycle {
            vertex_order: order,
            edge_indices,
        })
    }

    /// Junction vertices: those lying in two consecutive edges.
    pub fn junctions(&self, r: usize) -> Vec<Vertex> {
        self.vertex_order.iter().step_by(r - 1).copied().collect()
    }
}

/// Checks every loose-cycle invariant of `c` against host `h`.
pub fn validate_loose_cycle(h: &Hypergraph, c: &LooseHamiltonCycle) -> Result<(), Defect> {
    let (n, r) = (h.n(), h.r());
    if n % (r - 1) != 0 {
        return Err(Defect::Divisibility { n, divisor: r - 1 });
    }
    let k = n / (r - 1);
    if c.edge_indices.len() != k {
        return Err(Defect::WrongEdgeCount {
            expected: k,
            found: c.edge_indices.len(),
        });
    }
    if c.vertex_order.len() != n {
        return Err(Defect::NotAPermutation);
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in c.vertex_order.iter().enumerate() {
        if v as usize >= n || pos[v as usize] != usize::MAX {
            return Err(Defect::NotAPermutation);
        }
        pos[v as usize] = i;
    }
    let mut covered = vec![false; n];
    for (i, &ei) in c.edge_indices.iter().enumerate() {
        if ei >= h.m() {
            return Err(Defect::EdgeIndexOutOfRange(ei));
        }
        let e = h.edge(ei);
        // exactly one member whose cyclic predecessor lies outside the edge
        let inside = |p: usize| e.iter().any(|&v| pos[v as usize] == p);
        let starts = e.iter().filter(|&&v| !inside((pos[v as usize] + n - 1) % n)).count();
        if starts != 1 {
            return Err(Defect::NotConsecutive(i));
        }
        for &v in e {
            covered[v as usize] = true;
        }
    }
    for i in 0..k {
        let a = h.edge(c.edge_indices[i]);
        let b = h.edge(c.edge_indices[(i + 1) % k]);
        let outside = a.iter().filter(|v| b.binary_search(v).is_err()).count();
        if outside != r - 1 {
            return Err(Defect::WrongOverlap(i));
        }
    }
    if let Some(v) = covered.iter().position(|&x| !x) {
        return Err(Defect::Uncovered(v as Vertex));
    }
    Ok(())
}

pub fn is_loose_cycle(h: &Hypergraph, c: &LooseHamiltonCycle) -> bool {
    validate_loose_cycle(h, c).is_ok()
}

pub fn validate_matching(h: &Hypergraph, m: &PerfectMatching) -> Result<(), Defect> {
    let (n, r) = (h.n(), h.r());
    if n % r != 0 {
        return Err(Defect::Divisibility { n, divisor: r });
    }
    if m.edge_indices.len() != n / r {
        return Err(Defect::WrongEdgeCount {
            expected: n / r,
            found: m.edge_indices.len(),
        });
    }
    let mut covered = vec![false; n];
    for &ei in &m.edge_indices {
        if ei >= h.m() {
            return Err(Defect::EdgeIndexOutOfRange(ei));
        }
        for &v in h.edge(ei) {
            if std::mem::replace(&mut covered[v as usize], true) {
                return Err(Defect::Overlapping(v));
            }
        }
    }
    match covered.iter().position(|&x| !x) {
        Some(v) => Err(Defect::Uncovered(v as Vertex)),
        None => Ok(()),
    }
}

pub fn is_perfect_matching(h: &Hypergraph, m: &PerfectMatching) -> bool {
    validate_matching(h, m).is_ok()
}
