use std::collections::HashSet;
use std::ops::ControlFlow;

use num_bigint::BigUint;
use proptest::prelude::*;

use loosecycle::certificates::{validate_loose_cycle, validate_matching};
use loosecycle::solvers::reference::{canonical_cycle, count_matchings_by_subsets, loose_cycles_by_arrangement};
use loosecycle::solvers::{
    count_loose_cycles, count_matchings, find_loose_hamilton, find_perfect_matching, for_each_loose_cycle,
    sample_perfect_matching, MatchingCounter, NotFoundReason, Outcome,
};
use loosecycle::{sample_hnm, Hypergraph, Seed, Vertex};

fn complete_matchings(n: u64, r: u64) -> BigUint {
    let fact = |k: u64| (1..=k).fold(BigUint::from(1u32), |a, i| a * i);
    fact(n) / (fact(r).pow((n / r) as u32) * fact(n / r))
}

#[test]
fn complete_counts_match_formula() {
    for (n, r) in [(4, 2), (6, 2), (8, 2), (6, 3), (9, 3), (12, 3), (8, 4)] {
        let h = Hypergraph::complete(n, r).unwrap();
        assert_eq!(
            count_matchings(&h).unwrap().0,
            complete_matchings(n as u64, r as u64),
            "K({n},{r})"
        );
    }
    for (n, r) in [(4, 2), (6, 3)] {
        let h = Hypergraph::complete(n, r).unwrap();
        assert_eq!(count_matchings_by_subsets(&h), complete_matchings(n as u64, r as u64));
    }
}

#[test]
fn complete_cycle_counts() {
    let h = Hypergraph::complete(6, 3).unwrap();
    assert_eq!(
        count_loose_cycles(&h, u64::MAX).unwrap(),
        Some(loose_cycles_by_arrangement(&h).len() as u64)
    );
    let h = Hypergraph::complete(8, 3).unwrap();
    assert_eq!(
        count_loose_cycles(&h, u64::MAX).unwrap(),
        Some(loose_cycles_by_arrangement(&h).len() as u64)
    );
}

fn cycle_sets(h: &Hypergraph) -> HashSet<Vec<Vec<Vertex>>> {
    let mut out = HashSet::new();
    for_each_loose_cycle(h, u64::MAX, |c| {
        let seq = c.edge_indices.iter().map(|&e| h.edge(e).to_vec()).collect();
        out.insert(canonical_cycle(seq));
        ControlFlow::Continue(())
    })
    .unwrap();
    out
}

#[test]
fn enumeration_matches_arrangements_at_ten() {
    for seed in 0..30u64 {
        let m = 20 + seed * 3;
        let h = sample_hnm(10, 3, m, Seed::new(seed)).unwrap();
        assert_eq!(cycle_sets(&h), loose_cycles_by_arrangement(&h), "seed {seed}");
    }
}

#[test]
fn four_uniform_enumeration() {
    let h = Hypergraph::complete(9, 4).unwrap();
    assert_eq!(cycle_sets(&h), loose_cycles_by_arrangement(&h));
    let h = sample_hnm(9, 4, 40, Seed::new(5)).unwrap();
    assert_eq!(cycle_sets(&h), loose_cycles_by_arrangement(&h));
}

#[test]
fn budget_is_respected() {
    let h = Hypergraph::complete(12, 3).unwrap();
    match find_loose_hamilton(&h, 3).unwrap() {
        Outcome::BudgetExceeded { nodes } => assert!(nodes <= 3),
        other => panic!("unexpected {other:?}"),
    }
    assert!(find_perfect_matching(&h, 0).unwrap().is_budget_exceeded());
    assert_eq!(count_loose_cycles(&h, 10).unwrap(), None);
}

#[test]
fn divisibility_and_isolated() {
    let h = Hypergraph::complete(9, 3).unwrap();
    assert!(matches!(
        find_loose_hamilton(&h, u64::MAX).unwrap(),
        Outcome::NotFound {
            reason: NotFoundReason::Divisibility { n: 9, divisor: 2 },
            ..
        }
    ));
    let h = Hypergraph::from_edges(8, 3, [[0, 1, 2], [2, 3, 4], [4, 5, 6]]).unwrap();
    assert!(matches!(
        find_loose_hamilton(&h, u64::MAX).unwrap(),
        Outcome::NotFound {
            reason: NotFoundReason::IsolatedVertex { vertex: 7 },
            ..
        }
    ));
}

#[test]
fn uniform_matching_sampler_hits_each_matching() {
    let h = Hypergraph::complete(6, 3).unwrap();
    let mut seen = HashSet::new();
    let mut rng = Seed::new(9).rng();
    for _ in 0..400 {
        let m = sample_perfect_matching(&h, &mut rng).unwrap().unwrap();
        validate_matching(&h, &m).unwrap();
        let mut edges: Vec<Vec<Vertex>> = m.edge_indices.iter().map(|&e| h.edge(e).to_vec()).collect();
        edges.sort();
        seen.insert(edges);
    }
    assert_eq!(seen.len(), 10);
}

fn arb_hypergraph(n: usize, r: usize) -> impl Strategy<Value = Hypergraph> {
    let total = (1..=r as u64).fold(1u64, |a, i| a * (n as u64 + 1 - i) / i);
    (0..=total, any::<u64>()).prop_map(move |(m, s)| sample_hnm(n, r, m, Seed::new(s)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cycles_agree_with_arrangements(h in arb_hypergraph(8, 3)) {
        let expected = loose_cycles_by_arrangement(&h);
        match find_loose_hamilton(&h, u64::MAX).unwrap() {
            Outcome::Found { certificate, .. } => {
                prop_assert!(validate_loose_cycle(&h, &certificate).is_ok());
                prop_assert!(!expected.is_empty());
            }
            Outcome::NotFound { .. } => prop_assert!(expected.is_empty()),
            Outcome::BudgetExceeded { .. } => prop_assert!(false, "unbounded search ran out"),
        }
        prop_assert_eq!(count_loose_cycles(&h, u64::MAX).unwrap(), Some(expected.len() as u64));
    }

    #[test]
    fn matchings_agree_with_subsets(h in arb_hypergraph(9, 3)) {
        let count = count_matchings(&h).unwrap().0;
        prop_assert_eq!(&count, &count_matchings_by_subsets(&h));
        let found = find_perfect_matching(&h, u64::MAX).unwrap();
        prop_assert_eq!(found.found().is_some(), count > BigUint::from(0u32));
        if let Some(m) = found.found() {
            prop_assert!(validate_matching(&h, m).is_ok());
        }
    }

    #[test]
    fn removal_counts_match_subgraph(h in arb_hypergraph(9, 3), a in 0u32..9, b in 0u32..9, c in 0u32..9) {
        let mut s = vec![a, b, c];
        s.sort_unstable();
        s.dedup();
        prop_assume!(s.len() == 3);
        let mut counter = MatchingCounter::new(&h).unwrap();
        let direct = count_matchings(&h.remove_vertices(&s).unwrap().0).unwrap();
        prop_assert_eq!(counter.count_without(&s), direct);
    }
}
