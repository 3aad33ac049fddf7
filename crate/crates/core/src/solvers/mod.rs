//! Exact search for loose Hamilton cycles and perfect matchings, matching
//! counts, and the weight diagnostics built on them.
//!
//! Vertex sets are `u128` bitmasks, so every routine here requires
//! `n <= 128`. Budgets count search nodes, never wall time.

mod diagnostics;
mod loose;
mod matching;
pub mod reference;
mod weights;

pub use diagnostics::{process_diagnostics, ProcessRecord, Schedule};
pub use loose::{count_loose_cycles, find_loose_hamilton, for_each_loose_cycle, SearchReport};
pub use matching::{count_matchings, find_perfect_matching, sample_perfect_matching, MatchingCount, MatchingCounter};
pub use weights::{weight_profile, WeightMode, WeightProfile};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{Hypergraph, Vertex};

/// Largest vertex count the bitmask solvers accept.
pub const MAX_VERTICES: usize = 128;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("n = {0} exceeds the solver limit of {MAX_VERTICES} vertices")]
    TooManyVertices(usize),
    #[error("{what} would need {size} evaluations (limit {limit})")]
    TooLarge {
        what: &'static str,
        size: u128,
        limit: u128,
    },
}

/// Why a search concluded that nothing exists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "reason")]
pub enum NotFoundReason {
    Divisibility {
        n: usize,
        divisor: usize,
    },
    /// Fewer than three edges would be needed, so consecutive edges cannot
    /// meet in a single vertex.
    TooShort {
        edges: usize,
    },
    IsolatedVertex {
        vertex: Vertex,
    },
    Exhausted,
}

/// Result of a budgeted search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "outcome")]
pub enum Outcome<T> {
    Found { certificate: T, nodes: u64 },
    NotFound { reason: NotFoundReason, nodes: u64 },
    BudgetExceeded { nodes: u64 },
}

impl<T> Outcome<T> {
    pub fn found(&self) -> Option<&T> {
        match self {
            Outcome::Found { certificate, .. } => Some(certificate),
            _ => None,
        }
    }

    pub fn into_found(self) -> Option<T> {
        match self {
            Outcome::Found { certificate, .. } => Some(certificate),
            _ => None,
        }
    }

    pub fn is_budget_exceeded(&self) -> bool {
        matches!(self, Outcome::BudgetExceeded { .. })
    }

    pub fn nodes(&self) -> u64 {
        match self {
            Outcome::Found { nodes, .. } | Outcome::NotFound { nodes, .. } | Outcome::BudgetExceeded { nodes } => {
                *nodes
            }
        }
    }
}

pub(crate) fn check_size(h: &Hypergraph) -> Result<(), SolverError> {
    if h.n() > MAX_VERTICES {
        Err(SolverError::TooManyVertices(h.n()))
    } else {
        Ok(())
    }
}

#[inline]
pub(crate) fn mask_of(vertices: &[Vertex]) -> u128 {
    vertices.iter().fold(0u128, |m, &v| m | (1u128 << v))
}

#[inline]
pub(crate) fn full_mask(n: usize) -> u128 {
    if n == 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

/// Iterates the set bits of `mask` in increasing order.
pub(crate) fn bits(mut mask: u128) -> impl Iterator<Item = Vertex> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let v = mask.trailing_zeros();
            mask &= mask - 1;
            Some(v)
        }
    })
}

/// Edge indices sorted by their vertex lists, then by index.
pub(crate) fn canonical_edge_order(h: &Hypergraph) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..h.m()).collect();
    idx.sort_by(|&a, &b| h.edge(a).cmp(h.edge(b)).then(a.cmp(&b)));
    idx
}
