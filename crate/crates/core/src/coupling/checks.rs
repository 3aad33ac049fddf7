use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::split::{build_split, classify_vertices, restrict_types_2_3};
use super::{CouplingConfig, CouplingError, CouplingTranscript};
use crate::combinatorics::{binomial, rank_subset, unrank_subset};
use crate::hypergraph::{OrientedHypergraph, Vertex};
use crate::rng::Seed;
use crate::stats::frequency_z;

/// An extracted edge not found where it should be.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "violation")]
pub enum EmbeddingViolation {
    NotAvailable {
        layer: usize,
        tail: Vertex,
        heads: Vec<Vertex>,
    },
    WrongPickCount {
        layer: usize,
        vertex: Vertex,
        picks: usize,
        expected: usize,
    },
}

fn oriented_set(parts: &[&OrientedHypergraph]) -> HashSet<(Vertex, Vec<Vertex>)> {
    parts
        .iter()
        .flat_map(|h| h.edges().map(|e| (e.tail, e.heads.to_vec())))
        .collect()
}

/// On a successful transcript, checks that every edge of every `K_i` is an
/// oriented edge of `E→1 ∪ E→'2 ∪ E→'3` and that each vertex made exactly
/// `d*` picks per layer. On failure only the pick counts are checked.
pub fn check_embedding(tr: &CouplingTranscript) -> Result<(), EmbeddingViolation> {
    let d = tr.classification.d_star;
    for (i, k) in tr.layers.iter().enumerate() {
        for (v, &deg) in k.out_degrees().iter().enumerate() {
            if deg != d {
                return Err(EmbeddingViolation::WrongPickCount {
                    layer: i,
                    vertex: v as Vertex,
                    picks: deg,
                    expected: d,
                });
            }
        }
    }
    if !tr.success() {
        return Ok(());
    }
    let mut parts: Vec<&OrientedHypergraph> = tr.split.e1_layers.iter().collect();
    parts.push(&tr.e2_prime);
    parts.push(&tr.e3_prime);
    let allowed = oriented_set(&parts);
    for (i, k) in tr.layers.iter().enumerate() {
        for e in k.edges() {
            if !allowed.contains(&(e.tail, e.heads.to_vec())) {
                return Err(EmbeddingViolation::NotAvailable {
                    layer: i,
                    tail: e.tail,
                    heads: e.heads.to_vec(),
                });
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeFrequency {
    pub edge: Vec<Vertex>,
    /// Runs with the edge in `E'2 ∪ E'3`.
    pub hits: u64,
    pub z: f64,
    /// Standardized covariance between presence in `E1` and in `E'2 ∪ E'3`.
    pub cov_z: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarginalReport {
    pub trials: u64,
    pub p2: f64,
    pub edges: Vec<EdgeFrequency>,
    pub max_abs_z: f64,
    pub max_abs_cov_z: f64,
}

/// Monte Carlo check that `E'2 ∪ E'3` (unoriented) has every edge present
/// with probability `p2`, independently of `E1`.
pub fn marginal_identity_check(
    config: &CouplingConfig,
    trials: u64,
    seed: Seed,
) -> Result<MarginalReport, CouplingError> {
    let (n, r) = (config.n, config.r);
    let total = binomial(n as u64, r as u64)
        .filter(|&t| t <= 1 << 16)
        .ok_or_else(|| CouplingError::Parameter(format!("C({n}, {r}) is too large for per-edge statistics")))?
        as usize;
    let mut in23 = vec![0u64; total];
    let mut in1 = vec![0u64; total];
    let mut both = vec![0u64; total];
    let mut p2 = 0.0;
    let mut present23 = vec![false; total];
    let mut present1 = vec![false; total];
    for trial in 0..trials {
        let split = build_split(config, seed.with_stream(trial))?;
        p2 = split.probs.p2;
        let classes = classify_vertices(&split, config.d_star(), config.eps_prime);
        let (e2p, e3p) = restrict_types_2_3(&split, &classes);
        present23.iter_mut().for_each(|x| *x = false);
        present1.iter_mut().for_each(|x| *x = false);
        for h in [&e2p, &e3p] {
            for e in h.edges() {
                present23[rank_subset(n as u32, &e.vertices()) as usize] = true;
            }
        }
        for layer in &split.e1_layers {
            for e in layer.edges() {
                present1[rank_subset(n as u32, &e.vertices()) as usize] = true;
            }
        }
        for i in 0..total {
            in23[i] += present23[i] as u64;
            in1[i] += present1[i] as u64;
            both[i] += (present23[i] && present1[i]) as u64;
        }
    }
    let t = trials as f64;
    let edges: Vec<EdgeFrequency> = (0..total)
        .map(|i| {
            let (a, b) = (in1[i] as f64 / t, in23[i] as f64 / t);
            let cov = both[i] as f64 / t - a * b;
            let sd = (a * (1.0 - a) * b * (1.0 - b) / t).sqrt();
            EdgeFrequency {
                edge: unrank_subset(n as u32, r, i as u64),
                hits: in23[i],
                z: frequency_z(in23[i], trials, p2),
                cov_z: if sd > 0.0 { cov / sd } else { 0.0 },
            }
        })
        .collect();
    let max_abs_z = edges.iter().map(|e| e.z.abs()).fold(0.0, f64::max);
    let max_abs_cov_z = edges.iter().map(|e| e.cov_z.abs()).fold(0.0, f64::max);
    Ok(MarginalReport {
        trials,
        p2,
        edges,
        max_abs_z,
        max_abs_cov_z,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coupling::run_coupling;

    #[test]
    fn zero_trials_report_is_empty() {
        let cfg = CouplingConfig::new(6, 3, 0.5, 1);
        let rep = marginal_identity_check(&cfg, 0, Seed::new(1)).unwrap();
        assert!(rep.edges.iter().all(|e| e.hits == 0));
    }

    #[test]
    fn embedding_holds_on_random_runs() {
        for s in 0..200 {
            let cfg = CouplingConfig::new(7, 3, 0.8, 2);
            let tr = run_coupling(&cfg, Seed::new(s)).unwrap();
            check_embedding(&tr).unwrap();
        }
    }

    #[test]
    fn small_frequency_run() {
        let cfg = CouplingConfig::new(6, 3, 0.5, 1);
        let rep = marginal_identity_check(&cfg, 4000, Seed::new(7)).unwrap();
        assert_eq!(rep.edges.len(), 20);
        assert!(rep.max_abs_z < 4.5, "{}", rep.max_abs_z);
        assert!(rep.max_abs_cov_z < 4.5, "{}", rep.max_abs_cov_z);
    }
}
