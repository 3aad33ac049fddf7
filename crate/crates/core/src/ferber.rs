//! Removing the `n/(r-1) mod r` restriction by contracting one edge.
//!
//! The edges of `H_p` are split into two independent layers with
//! `1 - p = (1 - p1)(1 - p2)`. An anchor edge `e` of layer 1 is contracted to
//! a new vertex `e*`; every layer-2 edge meeting `e` in one vertex `x_i` is
//! moved onto `e*` and kept with probability
//! `q = (1 - (1 - p2)^(1/r)) / p2`, which makes each `e*`-edge present with
//! probability `p2` again. A loose Hamilton cycle of the contracted
//! hypergraph through `e*` as a junction lifts to one of the original by
//! reinserting `e` between the two preimages.

use std::collections::{BTreeMap, HashMap};
use std::ops::ControlFlow;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certificates::{validate_loose_cycle, LooseHamiltonCycle};
use crate::combinatorics::binomial;
use crate::hypergraph::{Hypergraph, HypergraphError, Vertex};
use crate::rng::Seed;
use crate::scalar::Scalar;
use crate::solvers::{for_each_loose_cycle, SolverError};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ReductionError {
    #[error("p = {p} is below p1 = {p1}")]
    Regime { p: f64, p1: f64 },
    #[error("probability {0} is outside [0, 1)")]
    Probability(f64),
    #[error("anchor edge is invalid: {0}")]
    InvalidEdge(String),
    #[error("contraction map does not fit the cycle: {0}")]
    InconsistentMap(String),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// `p2` with `1 - p = (1 - p1)(1 - p2)`.
pub fn split_probability<T: Scalar>(p: T, p1: T) -> Result<T, ReductionError> {
    if !(p1 >= T::zero() && p < T::one()) {
        return Err(ReductionError::Probability(p.as_f64()));
    }
    if p < p1 {
        return Err(ReductionError::Regime {
            p: p.as_f64(),
            p1: p1.as_f64(),
        });
    }
    Ok((p - p1) / (T::one() - p1))
}

/// `p1 = ln n / C(n, r)`.
pub fn anchor_probability<T: Scalar>(n: usize, r: usize) -> T {
    T::of_usize(n).ln() / T::of(binomial(n as u64, r as u64).unwrap_or(u64::MAX) as f64)
}

/// Acceptance ratio `q = (1 - (1 - p2)^(1/r)) / p2`, with its limit `1/r` at
/// `p2 = 0`.
pub fn acceptance_ratio<T: Scalar>(p2: T, r: usize) -> T {
    if p2 == T::zero() {
        return T::one() / T::of_usize(r);
    }
    -((-p2).ln_1p() / T::of_usize(r)).exp_m1() / p2
}

/// One candidate edge meeting the anchor in a single vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AcceptanceDecision {
    /// Index of the edge in the layer-2 hypergraph.
    pub source: usize,
    /// The anchor vertex it contained.
    pub replaced: Vertex,
    pub accepted: bool,
}

/// Bookkeeping for one contraction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractionMap {
    pub n: usize,
    pub r: usize,
    /// The anchor `{x_1, ..., x_r}`, sorted.
    pub edge: Vec<Vertex>,
    /// Id of the new vertex, `n - r`.
    pub e_star: Vertex,
    /// Original id of each surviving vertex, `new_to_old[v*]` for `v* < e*`.
    pub new_to_old: Vec<Vertex>,
    pub old_to_new: Vec<Option<Vertex>>,
    pub decisions: Vec<AcceptanceDecision>,
    /// For each edge of `H*`: the accepted `(layer-2 index, replaced vertex)`
    /// pairs mapping onto it; a single `(index, None)` entry for edges that
    /// avoid the anchor.
    pub preimages: Vec<Vec<(usize, Option<Vertex>)>>,
}

impl ContractionMap {
    pub fn contracted_n(&self) -> usize {
        self.n - self.r + 1
    }

    fn to_old(&self, v: Vertex) -> Vertex {
        self.new_to_old[v as usize]
    }
}

/// Contracts `edge` in `h2` to `e*`.
pub fn contract(h2: &Hypergraph, edge: &[Vertex], seed: Seed) -> Result<(Hypergraph, ContractionMap), ReductionError> {
    let (n, r) = (h2.n(), h2.r());
    let mut e: Vec<Vertex> = edge.to_vec();
    e.sort_unstable();
    if e.len() != r || e.windows(2).any(|w| w[0] == w[1]) || e.iter().any(|&v| v as usize >= n) {
        return Err(ReductionError::InvalidEdge(format!(
            "{edge:?} is not an {r}-set of [0, {n})"
        )));
    }
    let p2 = if h2.m() == 0 {
        0.0
    } else {
        h2.m() as f64 / binomial(n as u64, r as u64).unwrap_or(u64::MAX) as f64
    };
    contract_with_ratio(h2, &e, acceptance_ratio(p2, r), seed)
}

/// [`contract`] with an explicit acceptance probability.
pub fn contract_with_ratio(
    h2: &Hypergraph,
    edge: &[Vertex],
    q: f64,
    seed: Seed,
) -> Result<(Hypergraph, ContractionMap), ReductionError> {
    let (n, r) = (h2.n(), h2.r());
    let mut e: Vec<Vertex> = edge.to_vec();
    e.sort_unstable();
    if e.len() != r || e.windows(2).any(|w| w[0] == w[1]) || e.iter().any(|&v| v as usize >= n) {
        return Err(ReductionError::InvalidEdge(format!(
            "{edge:?} is not an {r}-set of [0, {n})"
        )));
    }
    let in_e = |v: Vertex| e.binary_search(&v).is_ok();
    let mut old_to_new = vec![None; n];
    let mut new_to_old = Vec::with_capacity(n - r);
    for v in 0..n as Vertex {
        if !in_e(v) {
            old_to_new[v as usize] = Some(new_to_old.len() as Vertex);
            new_to_old.push(v);
        }
    }
    let e_star = (n - r) as Vertex;
    let mut rng = seed.rng();
    let mut decisions = Vec::new();
    let mut images: BTreeMap<Vec<Vertex>, Vec<(usize, Option<Vertex>)>> = BTreeMap::new();
    for (idx, f) in h2.edges().enumerate() {
        let hits: Vec<Vertex> = f.iter().copied().filter(|&v| in_e(v)).collect();
        match hits.len() {
            0 => {
                let img: Vec<Vertex> = f.iter().map(|&v| old_to_new[v as usize].expect("survivor")).collect();
                images.entry(img).or_default().push((idx, None));
            }
            1 => {
                let accepted = rng.random::<f64>() < q;
                decisions.push(AcceptanceDecision {
                    source: idx,
                    replaced: hits[0],
                    accepted,
                });
                if accepted {
                    let mut img: Vec<Vertex> = f
                        .iter()
                        .filter(|&&v| v != hits[0])
                        .map(|&v| old_to_new[v as usize].expect("survivor"))
                        .collect();
                    img.push(e_star);
                    img.sort_unstable();
                    images.entry(img).or_default().push((idx, Some(hits[0])));
                }
            }
            _ => {}
        }
    }
    let (edges, preimages): (Vec<_>, Vec<_>) = images.into_iter().unzip();
    let h_star = Hypergraph::from_edges(n - r + 1, r, edges)?;
    Ok((
        h_star,
        ContractionMap {
            n,
            r,
            edge: e,
            e_star,
            new_to_old,
            old_to_new,
            decisions,
            preimages,
        },
    ))
}

/// Why a contracted cycle does not lift.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "reason")]
pub enum NotLiftable {
    /// `e*` lies inside a single cycle edge rather than at a junction.
    Interior,
    /// `e*` is not on the cycle at all.
    Absent,
    /// Both `e*`-edges only have preimages through the same anchor vertex.
    Collision,
    /// A needed edge is missing from the host.
    MissingHostEdge { edge: Vec<Vertex> },
}

fn find_in(index: &HashMap<Vec<Vertex>, usize>, mut edge: Vec<Vertex>) -> Result<usize, NotLiftable> {
    edge.sort_unstable();
    index.get(&edge).copied().ok_or(NotLiftable::MissingHostEdge { edge })
}

/// Lifts a loose Hamilton cycle `c_star` of `h_star` to one of `host`, a
/// hypergraph on the original vertices containing the anchor and every
/// preimage used. `h2` is the layer the preimages index into.
pub fn lift_cycle(
    c_star: &LooseHamiltonCycle,
    h_star: &Hypergraph,
    map: &ContractionMap,
    h2: &Hypergraph,
    host: &Hypergraph,
) -> Result<Result<LooseHamiltonCycle, NotLiftable>, ReductionError> {
    let k = c_star.edge_indices.len();
    if h_star.n() != map.contracted_n() || h2.n() != map.n || host.n() != map.n {
        return Err(ReductionError::InconsistentMap("vertex counts differ".into()));
    }
    if c_star.edge_indices.iter().any(|&i| i >= map.preimages.len()) {
        return Err(ReductionError::InconsistentMap("cycle edge outside the map".into()));
    }
    let has_star = |i: usize| h_star.edge(c_star.edge_indices[i]).contains(&map.e_star);
    let positions: Vec<usize> = (0..k).filter(|&i| has_star(i)).collect();
    let (a, b) = match positions.as_slice() {
        [] => return Ok(Err(NotLiftable::Absent)),
        [_] => return Ok(Err(NotLiftable::Interior)),
        [a, b] => (*a, *b),
        _ => {
            return Err(ReductionError::InconsistentMap(
                "e* in more than two cycle edges".into(),
            ))
        }
    };
    // order so that the cycle runs ..., first, e*, second, ...
    let (first, second) = if (a + 1) % k == b { (a, b) } else { (b, a) };
    let index = host.edge_index();
    let anchor = find_in(&index, map.edge.clone());
    let anchor = match anchor {
        Ok(i) => i,
        Err(e) => return Ok(Err(e)),
    };
    let pre_first = &map.preimages[c_star.edge_indices[first]];
    let pre_second = &map.preimages[c_star.edge_indices[second]];
    for &(i1, x1) in pre_first {
        for &(i2, x2) in pre_second {
            match (x1, x2) {
                (Some(a), Some(b)) if a != b => {}
                _ => continue,
            }
            let mut seq = Vec::with_capacity(k + 1);
            let mut missing = None;
            for step in 0..k {
                let pos = (second + step) % k;
                let img = c_star.edge_indices[pos];
                let original: Vec<Vertex> = if pos == second {
                    h2.edge(i2).to_vec()
                } else if pos == first {
                    h2.edge(i1).to_vec()
                } else {
                    h_star.edge(img).iter().map(|&v| map.to_old(v)).collect()
                };
                match find_in(&index, original) {
                    Ok(i) => seq.push(i),
                    Err(e) => missing = Some(e),
                }
            }
            if let Some(e) = missing {
                return Ok(Err(e));
            }
            seq.push(anchor);
            let Some(cycle) = LooseHamiltonCycle::from_edge_sequence(host, seq) else {
                continue;
            };
            if validate_loose_cycle(host, &cycle).is_ok() {
                return Ok(Ok(cycle));
            }
        }
    }
    Ok(Err(NotLiftable::Collision))
}

/// Inverse of [`lift_cycle`]: removes the anchor from a lifted cycle and maps
/// the rest back to `h_star`.
pub fn recontract(
    lifted: &LooseHamiltonCycle,
    host: &Hypergraph,
    h_star: &Hypergraph,
    map: &ContractionMap,
) -> Result<LooseHamiltonCycle, ReductionError> {
    let k = lifted.edge_indices.len();
    let pos = lifted
        .edge_indices
        .iter()
        .position(|&i| host.edge(i) == map.edge.as_slice())
        .ok_or_else(|| ReductionError::InconsistentMap("anchor edge not on the cycle".into()))?;
    let index = h_star.edge_index();
    let mut seq = Vec::with_capacity(k - 1);
    for step in 1..k {
        let f = host.edge(lifted.edge_indices[(pos + step) % k]);
        let mut img: Vec<Vertex> = f
            .iter()
            .map(|&v| map.old_to_new[v as usize].unwrap_or(map.e_star))
            .collect();
        img.sort_unstable();
        img.dedup();
        if img.len() != map.r {
            return Err(ReductionError::InconsistentMap(format!(
                "edge {f:?} meets the anchor twice"
            )));
        }
        let i = index
            .get(&img)
            .copied()
            .ok_or_else(|| ReductionError::InconsistentMap(format!("image {img:?} not in H*")))?;
        seq.push(i);
    }
    LooseHamiltonCycle::from_edge_sequence(h_star, seq)
        .ok_or_else(|| ReductionError::InconsistentMap("images do not form a loose cycle".into()))
}

/// Why the reduction produced no cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "reason")]
pub enum ReductionNotFound {
    Divisibility {
        n: usize,
        divisor: usize,
    },
    NoAnchorEdge,
    /// The contracted hypergraph has no loose Hamilton cycle.
    NoContractedCycle,
    /// Cycles exist but none lifts.
    NoLiftableCycle,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "outcome")]
pub enum ReductionOutcome {
    Found { cycle: LooseHamiltonCycle },
    NotFound { reason: ReductionNotFound },
    BudgetExceeded,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub p: f64,
    pub p1: f64,
    pub p2: f64,
    pub anchor: Option<Vec<Vertex>>,
    pub layer1_edges: usize,
    pub layer2_edges: usize,
    pub contracted_edges: usize,
    pub cycles_tried: u64,
    pub lift_failures: BTreeMap<String, u64>,
    pub nodes: u64,
    pub outcome: ReductionOutcome,
}

/// Splits the edges of `h` into layer 1 and layer 2 so that, for `h` drawn
/// from `H_{n,p}`, the layers are independent `H_{n,p1}` and `H_{n,p2}`.
pub fn split_layers(h: &Hypergraph, p: f64, p1: f64, p2: f64, seed: Seed) -> (Hypergraph, Hypergraph) {
    let mut rng = seed.rng();
    let (both, only1) = if p > 0.0 {
        (p1 * p2 / p, p1 * (1.0 - p2) / p)
    } else {
        (0.0, 0.0)
    };
    let (mut l1, mut l2) = (Vec::new(), Vec::new());
    for f in h.edges() {
        let u: f64 = rng.random();
        if u < both {
            l1.push(f.to_vec());
            l2.push(f.to_vec());
        } else if u < both + only1 {
            l1.push(f.to_vec());
        } else {
            l2.push(f.to_vec());
        }
    }
    let (n, r) = (h.n(), h.r());
    (
        Hypergraph::from_edges(n, r, l1).expect("edges of h"),
        Hypergraph::from_edges(n, r, l2).expect("edges of h"),
    )
}

/// Full pipeline on `h_p`: split, anchor, contract, solve, lift.
pub fn reduce_and_solve(h_p: &Hypergraph, p: f64, seed: Seed, budget: u64) -> Result<ReductionReport, ReductionError> {
    let (n, r) = (h_p.n(), h_p.r());
    let p1 = anchor_probability::<f64>(n, r);
    let p2 = split_probability(p, p1)?;
    let mut report = ReductionReport {
        p,
        p1,
        p2,
        anchor: None,
        layer1_edges: 0,
        layer2_edges: 0,
        contracted_edges: 0,
        cycles_tried: 0,
        lift_failures: BTreeMap::new(),
        nodes: 0,
        outcome: ReductionOutcome::BudgetExceeded,
    };
    if r < 2 || n % (r - 1) != 0 {
        report.outcome = ReductionOutcome::NotFound {
            reason: ReductionNotFound::Divisibility {
                n,
                divisor: r.saturating_sub(1),
            },
        };
        return Ok(report);
    }
    let (l1, l2) = split_layers(h_p, p, p1, p2, seed.derive(1));
    report.layer1_edges = l1.m();
    report.layer2_edges = l2.m();
    let Some(anchor) = l1.sorted_edge_list().into_iter().next() else {
        report.outcome = ReductionOutcome::NotFound {
            reason: ReductionNotFound::NoAnchorEdge,
        };
        return Ok(report);
    };
    report.anchor = Some(anchor.clone());
    let (h_star, map) = contract_with_ratio(&l2, &anchor, acceptance_ratio(p2, r), seed.derive(2))?;
    report.contracted_edges = h_star.m();
    solve_contracted(&h_star, &map, &l2, h_p, budget, &mut report)?;
    Ok(report)
}

/// Searches `h_star` for a cycle that lifts, recording each failure reason.
pub fn solve_contracted(
    h_star: &Hypergraph,
    map: &ContractionMap,
    h2: &Hypergraph,
    host: &Hypergraph,
    budget: u64,
    report: &mut ReductionReport,
) -> Result<(), ReductionError> {
    let mut found = None;
    let mut error = None;
    let mut tried = 0u64;
    let mut failures: BTreeMap<String, u64> = BTreeMap::new();
    let search = for_each_loose_cycle(h_star, budget, |c| {
        tried += 1;
        match lift_cycle(c, h_star, map, h2, host) {
            Ok(Ok(cycle)) => {
                found = Some(cycle);
                ControlFlow::Break(())
            }
            Ok(Err(reason)) => {
                let key = match reason {
                    NotLiftable::Interior => "interior",
                    NotLiftable::Absent => "absent",
                    NotLiftable::Collision => "collision",
                    NotLiftable::MissingHostEdge { .. } => "missing-host-edge",
                };
                *failures.entry(key.to_string()).or_default() += 1;
                ControlFlow::Continue(())
            }
            Err(e) => {
                error = Some(e);
                ControlFlow::Break(())
            }
        }
    })?;
    if let Some(e) = error {
        return Err(e);
    }
    report.cycles_tried = tried;
    report.lift_failures = failures;
    report.nodes = search.nodes;
    report.outcome = match found {
        Some(cycle) => ReductionOutcome::Found { cycle },
        None if search.budget_exceeded => ReductionOutcome::BudgetExceeded,
        None if tried == 0 => ReductionOutcome::NotFound {
            reason: ReductionNotFound::NoContractedCycle,
        },
        None => ReductionOutcome::NotFound {
            reason: ReductionNotFound::NoLiftableCycle,
        },
    };
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_probability_examples() {
        assert_eq!(split_probability(0.3f64, 0.3).unwrap(), 0.0);
        let p2: f64 = split_probability(0.01, 0.001).unwrap();
        assert!((p2 - 0.009009009009009009).abs() < 1e-15);
        assert!(((1.0 - 0.01) - (1.0 - 0.001) * (1.0 - p2)).abs() < 1e-15);
        let near: f64 = split_probability(1.0 - 1e-12, 0.001).unwrap();
        assert!(near < 1.0 && near > 1.0 - 1e-11);
        assert!(matches!(
            split_probability(0.001f64, 0.01),
            Err(ReductionError::Regime { .. })
        ));
        assert!(split_probability(1.0f64, 0.01).is_err());
    }

    #[test]
    fn acceptance_ratio_values() {
        let q: f64 = acceptance_ratio(0.1, 3);
        assert!((q - 0.3451061539437028).abs() < 1e-15);
        let small: f64 = acceptance_ratio(1e-9, 3);
        assert!((small - 1.0 / 3.0).abs() < 1e-9);
        assert_eq!(acceptance_ratio(0.0f64, 4), 0.25);
    }

    fn fixture() -> (Hypergraph, Hypergraph, Vec<Vertex>) {
        // layer 2 holds the preimages and the two other cycle edges
        let h2 = Hypergraph::from_edges(8, 3, [[0, 1, 5], [2, 3, 7], [0, 3, 4]]).unwrap();
        let mut host_edges = h2.sorted_edge_list();
        host_edges.push(vec![5, 6, 7]);
        let host = Hypergraph::from_edges(8, 3, host_edges).unwrap();
        (h2, host, vec![5, 6, 7])
    }

    #[test]
    fn hand_built_lift() {
        let (h2, host, e) = fixture();
        let (h_star, map) = contract_with_ratio(&h2, &e, 1.0, Seed::new(0)).unwrap();
        assert_eq!(h_star.n(), 6);
        assert_eq!(map.e_star, 5);
        let seq: Vec<usize> = [[0, 1, 5], [2, 3, 5], [0, 3, 4]]
            .iter()
            .map(|f| h_star.find_edge(f).unwrap())
            .collect();
        let c_star = LooseHamiltonCycle::from_edge_sequence(&h_star, seq).unwrap();
        let lifted = lift_cycle(&c_star, &h_star, &map, &h2, &host).unwrap().unwrap();
        validate_loose_cycle(&host, &lifted).unwrap();
        let mut used: Vec<Vec<Vertex>> = lifted.edge_indices.iter().map(|&i| host.edge(i).to_vec()).collect();
        used.sort();
        assert_eq!(used, vec![vec![0, 1, 5], vec![0, 3, 4], vec![2, 3, 7], vec![5, 6, 7]]);
        let back = recontract(&lifted, &host, &h_star, &map).unwrap();
        let mut a = back.edge_indices.clone();
        let mut b = c_star.edge_indices.clone();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn interior_and_absent() {
        // e* interior: cycle {0,1,2},{2,3,e*},{e*... } impossible with 6
        // vertices, so use a cycle where e* sits inside one edge
        let h_star = Hypergraph::from_edges(6, 3, [[0, 1, 2], [2, 3, 5], [3, 4, 0], [2, 4, 5]]).unwrap();
        let map = ContractionMap {
            n: 8,
            r: 3,
            edge: vec![5, 6, 7],
            e_star: 5,
            new_to_old: vec![0, 1, 2, 3, 4],
            old_to_new: vec![Some(0), Some(1), Some(2), Some(3), Some(4), None, None, None],
            decisions: vec![],
            preimages: vec![vec![]; 4],
        };
        let h2 = Hypergraph::empty(8, 3).unwrap();
        let seq: Vec<usize> = [[0, 1, 2], [2, 3, 5], [0, 3, 4]]
            .iter()
            .map(|f| h_star.find_edge(f).unwrap())
            .collect();
        let c = LooseHamiltonCycle::from_edge_sequence(&h_star, seq).unwrap();
        assert_eq!(
            lift_cycle(&c, &h_star, &map, &h2, &h2).unwrap(),
            Err(NotLiftable::Interior)
        );
    }

    #[test]
    fn disjoint_anchor_keeps_everything() {
        let h2 = Hypergraph::from_edges(7, 3, [[0, 1, 2], [1, 2, 3]]).unwrap();
        let (h_star, map) = contract(&h2, &[4, 5, 6], Seed::new(1)).unwrap();
        assert_eq!(h_star.n(), 5);
        assert_eq!(h_star.sorted_edge_list(), h2.sorted_edge_list());
        assert!(map.decisions.is_empty());
        assert_eq!(h_star.degree(map.e_star).unwrap(), 0);
    }

    #[test]
    fn overlapping_edges_are_dropped() {
        let h2 = Hypergraph::from_edges(7, 3, [[0, 4, 5], [0, 1, 4]]).unwrap();
        let (h_star, map) = contract_with_ratio(&h2, &[4, 5, 6], 1.0, Seed::new(1)).unwrap();
        assert_eq!(h_star.sorted_edge_list(), vec![vec![0, 1, 4]]);
        assert_eq!(map.decisions.len(), 1);
        assert_eq!(map.preimages[0], vec![(1, Some(4))]);
    }

    #[test]
    fn invalid_anchor() {
        let h2 = Hypergraph::empty(7, 3).unwrap();
        assert!(contract(&h2, &[1, 1, 2], Seed::new(0)).is_err());
        assert!(contract(&h2, &[1, 2, 9], Seed::new(0)).is_err());
        assert!(contract(&h2, &[1, 2], Seed::new(0)).is_err());
    }

    #[test]
    fn empty_layer_one_has_no_anchor() {
        let h = Hypergraph::empty(8, 3).unwrap();
        let rep = reduce_and_solve(&h, 0.5, Seed::new(0), u64::MAX).unwrap();
        assert_eq!(
            rep.outcome,
            ReductionOutcome::NotFound {
                reason: ReductionNotFound::NoAnchorEdge
            }
        );
    }
}
