use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use super::{bits, canonical_edge_order, check_size, mask_of, NotFoundReason, Outcome, SolverError};
use crate::certificates::LooseHamiltonCycle;
use crate::hypergraph::{Hypergraph, Vertex};

/// Summary of a [`for_each_loose_cycle`] run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub nodes: u64,
    pub cycles: u64,
    /// The search space was covered completely (not stopped by the callback
    /// or the budget).
    pub exhausted: bool,
    pub budget_exceeded: bool,
    pub not_found: Option<NotFoundReason>,
}

enum Stop {
    Budget,
    Callback,
}

struct Search<'a, F> {
    h: &'a Hypergraph,
    r: usize,
    masks: Vec<u128>,
    incident: Vec<Vec<usize>>,
    budget: u64,
    nodes: u64,
    path: Vec<usize>,
    s: Vertex,
    cycles: u64,
    visit: F,
}

impl<F: FnMut(&LooseHamiltonCycle) -> ControlFlow<()>> Search<'_, F> {
    fn tick(&mut self) -> Result<(), Stop> {
        if self.nodes >= self.budget {
            return Err(Stop::Budget);
        }
        self.nodes += 1;
        Ok(())
    }

    /// Can a path from `t` through all of `free` end at `s`? Checks that `free`
    /// and `s` are reachable from `t` using edges inside `free ∪ {t, s}`.
    fn feasible(&self, free: u128, t: Vertex) -> bool {
        let allowed = free | (1u128 << t) | (1u128 << self.s);
        let inside: Vec<u128> = self.masks.iter().copied().filter(|m| m & !allowed == 0).collect();
        let mut reached = 1u128 << t;
        loop {
            let before = reached;
            for &m in &inside {
                if m & reached != 0 {
                    reached |= m;
                }
            }
            if reached == before {
                break;
            }
        }
        reached & allowed == allowed
    }

    fn emit(&mut self) -> Result<(), Stop> {
        self.cycles += 1;
        let cycle =
            LooseHamiltonCycle::from_edge_sequence(self.h, self.path.clone()).expect("search only builds loose cycles");
        match (self.visit)(&cycle) {
            ControlFlow::Continue(()) => Ok(()),
            ControlFlow::Break(()) => Err(Stop::Callback),
        }
    }

    fn extend(&mut self, t: Vertex, free: u128) -> Result<(), Stop> {
        let t_bit = 1u128 << t;
        let s_bit = 1u128 << self.s;
        if free.count_ones() as usize == self.r - 2 {
            let closing = free | t_bit | s_bit;
            for j in 0..self.incident[t as usize].len() {
                let e = self.incident[t as usize][j];
                if self.masks[e] != closing {
                    continue;
                }
                // with 0 as a junction both directions start at 0; keep the
                // one whose first edge comes first
                if self.s == 0 && self.path[0] > e {
                    continue;
                }
                self.tick()?;
                self.path.push(e);
                let res = self.emit();
                self.path.pop();
                res?;
            }
            return Ok(());
        }
        for j in 0..self.incident[t as usize].len() {
            let e = self.incident[t as usize][j];
            let rest = self.masks[e] & !t_bit;
            if rest & !free != 0 {
                continue;
            }
            let next_free = free & !rest;
            for t2 in bits(rest) {
                self.tick()?;
                if !self.feasible(next_free, t2) {
                    continue;
                }
                self.path.push(e);
                let res = self.extend(t2, next_free);
                self.path.pop();
                res?;
            }
        }
        Ok(())
    }
}

fn precheck(h: &Hypergraph) -> Option<NotFoundReason> {
    let (n, r) = (h.n(), h.r());
    if r < 2 || n % (r - 1) != 0 {
        return Some(NotFoundReason::Divisibility {
            n,
            divisor: r.saturating_sub(1),
        });
    }
    let k = n / (r - 1);
    if k < 3 {
        return Some(NotFoundReason::TooShort { edges: k });
    }
    h.isolated_vertices()
        .first()
        .map(|&vertex| NotFoundReason::IsolatedVertex { vertex })
}

/// Calls `visit` on every loose Hamilton cycle of `h`, each exactly once,
/// until it returns `Break` or `budget` search nodes have been spent.
///
/// The first edge contains vertex 0. On it an ordered junction pair `(s, t)`
/// is chosen, with `s = 0` when 0 is a junction and `s < t` otherwise; the
/// cycle then grows from `t` one edge at a time through unused vertices and
/// closes at `s`. Parallel edges yield distinct cycles.
pub fn for_each_loose_cycle<F>(h: &Hypergraph, budget: u64, visit: F) -> Result<SearchReport, SolverError>
where
    F: FnMut(&LooseHamiltonCycle) -> ControlFlow<()>,
{
    check_size(h)?;
    let mut report = SearchReport {
        nodes: 0,
        cycles: 0,
        exhausted: true,
        budget_exceeded: false,
        not_found: None,
    };
    if let Some(reason) = precheck(h) {
        report.not_found = Some(reason);
        return Ok(report);
    }
    let n = h.n();
    let mut incident = vec![Vec::new(); n];
    for e in canonical_edge_order(h) {
        for &v in h.edge(e) {
            incident[v as usize].push(e);
        }
    }
    let masks: Vec<u128> = h.edges().map(mask_of).collect();
    let mut search = Search {
        h,
        r: h.r(),
        masks,
        incident,
        budget,
        nodes: 0,
        path: Vec::with_capacity(n),
        s: 0,
        cycles: 0,
        visit,
    };
    let all = super::full_mask(n);
    let first_edges = search.incident[0].clone();
    let result = (|| {
        for e in first_edges {
            let verts: Vec<Vertex> = h.edge(e).to_vec();
            for &s in &verts {
                for &t in &verts {
                    let ok = s != t && if s == 0 || t == 0 { s == 0 } else { s < t };
                    if !ok {
                        continue;
                    }
                    search.tick()?;
                    search.s = s;
                    let free = all & !search.masks[e];
                    if !search.feasible(free, t) {
                        continue;
                    }
                    search.path.push(e);
                    let res = search.extend(t, free);
                    search.path.pop();
                    res?;
                }
            }
        }
        Ok(())
    })();
    report.nodes = search.nodes;
    report.cycles = search.cycles;
    match result {
        Ok(()) => {
            if search.cycles == 0 {
                report.not_found = Some(NotFoundReason::Exhausted);
            }
        }
        Err(Stop::Budget) => {
            report.exhausted = false;
            report.budget_exceeded = true;
        }
        Err(Stop::Callback) => report.exhausted = false,
    }
    Ok(report)
}

/// First loose Hamilton cycle in search order.
pub fn find_loose_hamilton(h: &Hypergraph, budget: u64) -> Result<Outcome<LooseHamiltonCycle>, SolverError> {
    let mut found = None;
    let report = for_each_loose_cycle(h, budget, |c| {
        found = Some(c.clone());
        ControlFlow::Break(())
    })?;
    Ok(match found {
        Some(certificate) => Outcome::Found {
            certificate,
            nodes: report.nodes,
        },
        None if report.budget_exceeded => Outcome::BudgetExceeded { nodes: report.nodes },
        None => Outcome::NotFound {
            reason: report.not_found.unwrap_or(NotFoundReason::Exhausted),
            nodes: report.nodes,
        },
    })
}

/// Number of distinct loose Hamilton cycles, or `None` if the budget ran out.
pub fn count_loose_cycles(h: &Hypergraph, budget: u64) -> Result<Option<u64>, SolverError> {
    let report = for_each_loose_cycle(h, budget, |_| ControlFlow::Continue(()))?;
    Ok((!report.budget_exceeded).then_some(report.cycles))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificates::validate_loose_cycle;

    #[test]
    fn complete_six_three() {
        let h = Hypergraph::complete(6, 3).unwrap();
        let out = find_loose_hamilton(&h, u64::MAX).unwrap();
        let c = out.found().unwrap();
        validate_loose_cycle(&h, c).unwrap();
        assert_eq!(c.edge_indices.len(), 3);
        // 6! / (2 * 3) arrangements up to rotation and reflection, r - 2 = 1
        assert_eq!(count_loose_cycles(&h, u64::MAX).unwrap(), Some(120));
    }

    #[test]
    fn unique_triangle() {
        let h = Hypergraph::from_edges(6, 3, [[0, 1, 2], [2, 3, 4], [4, 5, 0]]).unwrap();
        let c = find_loose_hamilton(&h, u64::MAX).unwrap().into_found().unwrap();
        let mut used = c.edge_indices.clone();
        used.sort();
        assert_eq!(used, vec![0, 1, 2]);
        assert_eq!(count_loose_cycles(&h, u64::MAX).unwrap(), Some(1));
    }

    #[test]
    fn obstructions() {
        let h = Hypergraph::from_edges(6, 3, [[0, 1, 2], [2, 3, 4]]).unwrap();
        assert!(matches!(
            find_loose_hamilton(&h, u64::MAX).unwrap(),
            Outcome::NotFound {
                reason: NotFoundReason::IsolatedVertex { vertex: 5 },
                ..
            }
        ));
        let h = Hypergraph::complete(7, 3).unwrap();
        assert!(matches!(
            find_loose_hamilton(&h, u64::MAX).unwrap(),
            Outcome::NotFound {
                reason: NotFoundReason::Divisibility { n: 7, divisor: 2 },
                ..
            }
        ));
        let h = Hypergraph::complete(4, 3).unwrap();
        assert!(matches!(
            find_loose_hamilton(&h, u64::MAX).unwrap(),
            Outcome::NotFound {
                reason: NotFoundReason::TooShort { edges: 2 },
                ..
            }
        ));
    }

    #[test]
    fn budget_is_distinct_from_not_found() {
        let h = Hypergraph::complete(12, 3).unwrap();
        assert!(find_loose_hamilton(&h, 0).unwrap().is_budget_exceeded());
        assert!(find_loose_hamilton(&h, 3).unwrap().is_budget_exceeded());
        assert_eq!(count_loose_cycles(&h, 10).unwrap(), None);
    }
}
