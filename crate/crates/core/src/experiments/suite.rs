use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::bounds::{binomial_pmf, codegree_union_bound};
use crate::combinatorics::{binomial, rank_subset};
use crate::coupling::{binomial_gof, couple_binomials, run_coupling, CouplingConfig, SplitProbabilities};
use crate::ferber::{acceptance_ratio, contract_with_ratio};
use crate::hypergraph::Hypergraph;
use crate::rng::Seed;
use crate::samplers::{
    candidate_rank, sample_dout, sample_hnm, sample_hnp, sample_matching_union, sample_oriented_hnp,
};
use crate::stats::{bonferroni, chi_square_gof, correlation_z, frequency_z, max_z_p_value, wilson_interval};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Base sample size; each claim uses this many samples (coupling claims
    /// use a fifth of it).
    pub trials: u64,
    /// Family-wise significance level, split evenly across claims.
    pub alpha: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 1,
            trials: 50_000,
            alpha: 0.01,
        }
    }
}

/// One checked claim.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimResult {
    pub id: String,
    pub description: String,
    pub samples: u64,
    pub statistic: f64,
    /// Bonferroni-adjusted within the claim where it aggregates several
    /// statistics; `None` for checks that are not significance tests.
    pub p_value: Option<f64>,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    /// Level each claim is tested at.
    pub level: f64,
    pub claims: Vec<ClaimResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.passed)
    }
}

type Check = fn(u64, Seed, f64) -> Result<ClaimResult, ExperimentError>;

/// Identifiers of every claim, in report order.
pub const CLAIMS: [&str; 17] = [
    "hnm-edge-frequency",
    "hnp-edge-count",
    "hnp-conditional-hnm",
    "oriented-projection",
    "dout-pick-uniform",
    "matching-union-uniform",
    "stream-independence",
    "binomial-dominance",
    "coupling-edge-frequency",
    "coupling-edge-covariance",
    "coupling-host-frequency",
    "coupling-conditional-picks",
    "coupling-bad-vertex-uniform",
    "coupling-layer-independence",
    "contracted-preimage-rate",
    "contracted-edge-presence",
    "codegree-bound",
];

const CHECKS: [Check; 17] = [
    hnm_edge_frequency,
    hnp_edge_count,
    hnp_conditional_hnm,
    oriented_projection,
    dout_pick_uniform,
    matching_union_uniform,
    stream_independence,
    binomial_dominance,
    coupling_edge_frequency,
    coupling_edge_covariance,
    coupling_host_frequency,
    coupling_conditional_picks,
    coupling_bad_vertex_uniform,
    coupling_layer_independence,
    contracted_preimage_rate,
    contracted_edge_presence,
    codegree_bound,
];

/// Runs every Monte Carlo check with fixed seeds. A config with zero trials
/// gives an empty report.
pub fn statistical_suite(config: &SuiteConfig) -> Result<SuiteReport, ExperimentError> {
    if !(config.alpha > 0.0 && config.alpha < 1.0) {
        return Err(ExperimentError::Config(format!(
            "alpha = {} is outside (0, 1)",
            config.alpha
        )));
    }
    let level = bonferroni(config.alpha, CHECKS.len());
    if config.trials == 0 {
        return Ok(SuiteReport {
            config: config.clone(),
            level,
            claims: Vec::new(),
        });
    }
    let base = Seed::new(config.seed);
    let claims = CHECKS
        .par_iter()
        .enumerate()
        .map(|(i, check)| check(config.trials, base.derive(i as u64), level))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SuiteReport {
        config: config.clone(),
        level,
        claims,
    })
}

fn claim(id: &str, description: &str, samples: u64, statistic: f64, p: f64, level: f64, detail: String) -> ClaimResult {
    ClaimResult {
        id: id.into(),
        description: description.into(),
        samples,
        statistic,
        p_value: Some(p),
        passed: p >= level,
        detail,
    }
}

fn max_abs(zs: &[f64]) -> f64 {
    zs.iter().fold(0.0f64, |a, z| a.max(z.abs()))
}

fn edge_frequencies(hits: &[u64], trials: u64, p: f64) -> (f64, f64) {
    let zs: Vec<f64> = hits.iter().map(|&h| frequency_z(h, trials, p)).collect();
    let z = max_abs(&zs);
    (z, max_z_p_value(z, zs.len()))
}

fn hnm_edge_frequency(trials: u64, seed: Seed, level: f64) -> Result<ClaimResult, ExperimentError> {
    let mut hits = vec![0u64; 10];
    for t in 0..trials {
        for e in sample_hnm(5, 3, 4, seed.with_stream(t))?.edges() {
            hits[rank_subset(5, e) as usize] += 1;
        }
    }
    let (z, p) = edge_frequencies(&hits, trials, 0.4);
    Ok(claim(
        "hnm-edge-frequency",
        "H(5,3,m=4): each edge present with probability 4/10",
        trials,
        z,
        p,
        level,
        format!("max |z| = {z:.3}"),
    ))
}

fn hnp_edge_count(trials: u64, seed: Seed, level: f64) -> Result<ClaimResult, ExperimentError> {
    let mut counts = vec![0u64; 11];
    for t in 0..trials {
        counts[sample_hnp(5, 3, 0.3, seed.with_stream(t))?.m()] += 1;
    }
    let probs: Vec<f64> = (0..=10).map(|k| binomial_pmf(10, 0.3, k)).collect();
    let c = chi_square_gof(&counts, &probs, 5.0);
    Ok(claim(
        "hnp-edge-count",
        "H(5,3,p=0.3): edge count ~ Bin(10, 0.3)",
        trials,
        c.statistic,
        c.p_value,
        level,
        format!("chi2 = {:.3} on {} dof", c.statistic, c.dof),
    ))
}

fn hnp_conditional_hnm(trials: u64, seed: Seed, level: f64) -> Result<ClaimResult, ExperimentError> {
    // K(4,3) has 4 edges; given two are present, each of the 6 pairs is equally likely
    let mut counts = vec![0u64; 6];
    let mut kept = 0;
    for t in 0..trials {
        let h = sample_hnp(4, 3, 0.5, seed.with_stream(t))?;
        if h.m() == 2 {
            let a = rank_subset(4, h.edge(0)) as usize;
            let b = rank_subset(4, h.edge(1)) as usize;
            let (a, b) = (a.min(b), a.max(b));
            // index of the pair {a, b} among pairs of [0, 4)
            counts[a * (7 - a) / 2 + b - a - 1] += 1;
            kept += 1;
        }
    }
    let c = chi_square_gof(&counts, &[1.0 / 6.0; 6], 5.0);
    Ok(claim(
        "hnp-conditional-hnm",
        "H(4,3,p) given m = 2 is uniform over edge pairs",
        kept,
        c.statistic,
        c.p_value,
        level,
        format!("{kept} conditioned samples"),
    ))
}

fn oriented_projection(trials: u64, seed: Seed, level: f64) -> Result<ClaimResult, ExperimentError> {
    let mut hits = vec![0u64; 10];
    let mut seen = [false; 10];
    for t in 0..trials {
        seen.fill(false);
        for e in sample_oriented_hnp(5, 3, 0.1, seed.with_stream(t))?.edges() {
            seen[rank_subset(5, &e.vertices()) as usize] = true;
        }
        for (h, &s) in hits.iter_mut().zip(&seen) {
            *h += s as u64;
        }
    }
    let p = 1.0 - 0.9f64.powi(3);
    let (z, pv) = edge_frequencies(&hits, trials, p);
    Ok(claim(
        "oriented-projection",
        "oriented H(5,3,p=0.1) projects to H(5,3,1-0.9^3)",
        trials,
        z,
        pv,
        level,
        format!("max |z| = {z:.3}"),
    ))
}

fn dout_pick_uniform(trials: u64, seed: Seed, level: f64) -> Result<ClaimResult, ExperimentError> {
    let mut counts = vec![0u64; 6];
    for t in 0..trials {
        let h = sample_dout(5, 3, 2, seed.with_stream(t))?;
        for e in h.edges().filter(|e| e.tail == 0) {
            counts[candidate_rank(5, 0, e.heads) as usize] += 1;
        }
    }
    let c = chi_square_gof(&counts, &[1.0 / 6.0; 6], 5.0);
    Ok(claim(
        "dout-pick-uniform",
        "2-out on 5 vertices: picks uniform over the 6 candidates",
        2 * trials,
        c.statistic,
        c.p_value,
        level,
        format!("counts {counts:?}"),
    ))
}

fn matching_union_uniform(trials: u64, seed: Seed, level: f64) -> Result<ClaimResult, ExperimentError> {
    let mut counts = vec![0u64; 3];
    for t in 0..trials {
        let h = sample_matching_union(4, 2, 1, seed.with_stream(t))?;
        let partner = h.edges().find(|e| e[0] == 0).map(|e| e[1]).unwrap_or(1);
        counts[partner as usize - 1] += 1;
    }
    let c = chi_square_gof(&counts, &[1.0 / 3.0; 3], 5.0);
    Ok(claim(
        "matching-union-uniform",
        "uniform perfect matching of K(4,2): each of 3 with probability 1/3",
        trials,
        c.statistic,
        c.p_value,
        level,
        format!("counts {counts:?}"),
    ))
}

fn stream_independence(trials: u64, seed: Seed, level: f64) -> Result<ClaimResult, ExperimentError> {
    let (mut a, mut b, mut both) = ([0u64; 10], [0u64; 10], [0u64; 10]);
    for t in 0..trials {
        let s = seed.derive(t);
        let x = sample_hnp(5, 3, 0.3, s.with_stream(0))?;
        let y = sample_hnp(5, 3, 0.3, s.with_stream(1))?;
        let (mut px, mut py) = ([false; 10], [false; 10]);
        x.edges().for_each(|e| px[rank_subset(5, e) as usize] = true);
        y.edges().for_each(|e| py[rank_subset(5, e) as usize] = true);
        for i in 0..10 {
            a[i] += px[i] as u64;
            b[i] += py[i] as u64;
            both[i] += (px[i] && py[i]) as u64;
        }
    }
    let zs: Vec<f64> = (0..10).map(|i| correlation_z(both[i], a[i], b[i], trials)).collect();
    let z = max_abs(&zs);
    let p = max_z_p_value(z, zs.len());
    Ok(claim(
        "stream-independence",
        "edge indicators on streams 0 and 1 are uncorrelated",
        trials,
        z,
        p,
        level,
        format!("max |corr z| = {z:.3}"),
    ))
}

fn binomial_dominance(trials: u64, seed: Seed, level: f64) -> Result<ClaimResult, ExperimentError> {
    let pairs = couple_binomials(10, 0.3, 4, 2, trials as usize, seed)?;
    let violations = pairs.iter().filter(|d| d.x > d.y).count();
    let xs: Vec<u64> = pairs.iter().map(|d| d.x).collect();
    let ys: Vec<u64> = pairs.iter().map(|d| d.y).collect();
    let gx = binomial_gof(&xs, 10, 0.3);
    let gy = binomial_gof(&ys, 80, 0.075);
    let p = (2.0 * gx.p_value.min(gy.p_value)).min(1.0);
    let mut c = claim(
        "binomial-dominance",
        "X <= Y always, X ~ Bin(10, 0.3), Y ~ Bin(80, 0.075)",
        trials,
        violations as f64,
        p,
        level,
        format!(
            "{violations} violations; marginal p = {:.4}, {:.4}",
            gx.p_value, gy.p_value
        ),
    );
    c.passed &= violations == 0;
    Ok(c)
}

fn coupling_config() -> CouplingConfig {
    CouplingConfig::new(6, 3, 0.5, 1)
}

fn coupling_edge_frequency(trials: u64, seed: Seed, level: f64) -> Result<ClaimResult, ExperimentError> {
    let trials = trials / 5;
    let rep = crate::coupling::marginal_identity_check(&coupling_config(), trials, seed)?;
    let p = max_z_p_value(rep.max_abs_z, rep.edges.len());
    Ok(claim(
        "coupling-edge-frequency",
        "E'2 ∪ E'3 has each edge with probability p2",
        trials,
        rep.max_abs_z,
        p,
        level,
        format!("p2 = {:.6}", rep.p2),
    ))
}

fn coupling_edge_covariance(trials: u64, seed: Seed, level: f64) -> Result<ClaimResult, ExperimentError> {
    let trials = trials / 5;
    let rep = crate::coupling::marginal_identity_check(&coupling_config(), trials, seed)?;
    let p = max_z_p_value(rep.max_abs_cov_z, rep.edges.len());
    Ok(claim(
        "coupling-edge-covariance",
        "edge presence in E1 and in E'2 ∪ E'3 is uncorrelated",
        trials,
        rep.max_abs_cov_z,
        p,
        level,
        format!("max |cov z| = {:.3}", rep.max_abs_cov_z),
    ))
}

fn coupling_host_frequency(trials: u64, seed: Seed, level: f64) -> Result<ClaimResult, ExperimentError> {
    let trials = trials / 5;
    let config = coupling_config();
    let probs = SplitProbabilities::<f64>::new(config.n, config.r, config.eps, config.rho)?;
    let total = binomial(6, 3).unwrap_or(0) as usize;
    let mut hits = vec![0u64; total];
    for t in 0..trials {
        let tr = run_coupling(&config, seed.with_stream(t))?;
        let mut seen = vec![false; total];
        for h in tr.split.e1_layers.iter().chain([&tr.e2_prime, &tr.e3_prime]) {
            for e in h.edges() {
                seen[rank_subset(6, &e.vertices()) as usize] = true;
            }
        }
        for (h, s) in hits.iter_mut().zip(seen) {
            *h += s as u64;
        }
    }
    let q = 1.0 - (1.0 - probs.p1_tilde) * (1.0 - probs.p2);
    let (z, p) = edge_frequencies(&hits, trials, q);
    let mut c = claim(
        "coupling-host-frequency",
        "E1 ∪ E'2 ∪ E'3 has each edge with probability p1~ + p2 - p1~ p2 <= p",
        trials,
        z,
        p,
        level,
        format!("expected {q:.6}, p = {:.6}", probs.p),
    );
    c.passed &= q <= probs.p;
    Ok(c)
}

/// Candidate ranks of every pick in successful runs, restricted to vertices
/// accepted by `keep`.
fn conditional_picks(
    config: &CouplingConfig,
    trials: u64,
    seed: Seed,
    keep: impl Fn(&crate::coupling::CouplingTranscript, u32) -> bool,
) -> Result<(Vec<u64>, u64), ExperimentError> {
    let cands = binomial(config.n as u64 - 1, config.r as u64 - 1).unwrap_or(0) as usize;
    let mut counts = vec![0u64; cands];
    let mut successes = 0;
    for t in 0..trials {
        let tr = run_coupling(config, seed.with_stream(t))?;
        if !tr.success() {
            continue;
        }
        successes += 1;
        for k in &tr.layers {
            for e in k.edges().filter(|e| keep(&tr, e.tail)) {
                counts[candidate_rank(config.n, e.tail, e.heads) as usize] += 1;
            }
        }
    }
    Ok((counts, successes))
}

fn coupling_conditional_picks(trials: u64, seed: Seed, level: f64) -> Result<ClaimResult, ExperimentError> {
    let trials = trials / 5;
    let config = coupling_config();
    let (counts, successes) = conditional_picks(&config, trials, seed, |_, _| true)?;
    let c = chi_square_gof(&counts, &vec![1.0 / counts.len() as f64; counts.len()], 5.0);
    Ok(claim(
        "coupling-conditional-picks",
        "given success, picks are uniform over each vertex's candidate edges",
        counts.iter().sum(),
        c.statistic,
        c.p_value,
        level,
        format!("{successes} successful runs of {trials}"),
    ))
}

fn coupling_bad_vertex_uniform(trials: u64, seed: Seed, level: f64) -> Result<ClaimResult, ExperimentError> {
    let trials = trials / 5;
    let mut config = CouplingConfig::new(5, 3, 1.0, 1);
    config.d_star = Some(1);
    let (counts, successes) = conditional_picks(&config, trials, seed, |tr, v| tr.classification.is_bad(v))?;
    let c = chi_square_gof(&counts, &[1.0 / 6.0; 6], 5.0);
    Ok(claim(
        "coupling-bad-vertex-uniform",
        "n = 5, d* = 1: given success, a bad vertex's pick is uniform over its 6 candidates",
        counts.iter().sum(),
        c.statistic,
        c.p_value,
        level,
        format!("{successes} successful runs of {trials}; counts {counts:?}"),
    ))
}

fn coupling_layer_independence(trials: u64, seed: Seed, level: f64) -> Result<ClaimResult, ExperimentError> {
    let trials = trials / 5;
    let config = CouplingConfig::new(6, 3, 0.5, 2);
    let cands = binomial(5, 2).unwrap_or(0) as usize;
    let (mut a, mut b, mut both) = (vec![0u64; cands], vec![0u64; cands], vec![0u64; cands]);
    for t in 0..trials {
        let tr = run_coupling(&config, seed.with_stream(t))?;
        let first = |i: usize| {
            tr.layers[i]
                .edges()
                .find(|e| e.tail == 0)
                .map(|e| candidate_rank(6, 0, e.heads) as usize)
        };
        if let (Some(x), Some(y)) = (first(0), first(1)) {
            a[x] += 1;
            b[y] += 1;
            if x == y {
                both[x] += 1;
            }
        }
    }
    let zs: Vec<f64> = (0..cands).map(|i| correlation_z(both[i], a[i], b[i], trials)).collect();
    let z = max_abs(&zs);
    let p = max_z_p_value(z, zs.len());
    Ok(claim(
        "coupling-layer-independence",
        "first picks of vertex 0 in K1 and K2 are uncorrelated",
        trials,
        z,
        p,
        level,
        format!("max |corr z| = {z:.3}"),
    ))
}

/// Contracts `{4, 5, 6}` in `H(7, 3, p2)` and counts how often the preimage
/// `{0, 1, 4}` survives and how often `{0, 1, e*}` is present.
fn contraction_counts(trials: u64, seed: Seed, p2: f64) -> Result<(u64, u64), ExperimentError> {
    let q = acceptance_ratio(p2, 3);
    let (mut survived, mut present) = (0, 0);
    for t in 0..trials {
        let s = seed.with_stream(t);
        let h2 = sample_hnp(7, 3, p2, s.derive(1))?;
        let (h_star, map) = contract_with_ratio(&h2, &[4, 5, 6], q, s.derive(2))?;
        let target = h2.find_edge(&[0, 1, 4]);
        survived += map.decisions.iter().any(|d| d.accepted && Some(d.source) == target) as u64;
        present += h_star.contains_edge(&[0, 1, map.e_star]) as u64;
    }
    Ok((survived, present))
}

const CONTRACT_P2: f64 = 0.3;

fn contracted_preimage_rate(trials: u64, seed: Seed, level: f64) -> Result<ClaimResult, ExperimentError> {
    let (survived, _) = contraction_counts(trials, seed, CONTRACT_P2)?;
    let p = 1.0 - (1.0 - CONTRACT_P2).powf(1.0 / 3.0);
    let z = frequency_z(survived, trials, p);
    let pv = max_z_p_value(z, 1);
    Ok(claim(
        "contracted-preimage-rate",
        "a fixed preimage is present and accepted with probability 1-(1-p2)^(1/r)",
        trials,
        z,
        pv,
        level,
        format!("{survived} of {trials}, expected {p:.6}"),
    ))
}

fn contracted_edge_presence(trials: u64, seed: Seed, level: f64) -> Result<ClaimResult, ExperimentError> {
    let (_, present) = contraction_counts(trials, seed, CONTRACT_P2)?;
    let z = frequency_z(present, trials, CONTRACT_P2);
    let pv = max_z_p_value(z, 1);
    Ok(claim(
        "contracted-edge-presence",
        "a fixed edge through e* is present with probability p2",
        trials,
        z,
        pv,
        level,
        format!("{present} of {trials}, expected {CONTRACT_P2}"),
    ))
}

fn codegree_bound(trials: u64, seed: Seed, level: f64) -> Result<ClaimResult, ExperimentError> {
    let (n, r, m, k) = (8usize, 3usize, 10u64, 5usize);
    let bound: f64 = codegree_union_bound(n as u64, r as u64, m, k as u64)?;
    let mut hits = 0;
    for t in 0..trials {
        let h: Hypergraph = sample_hnm(n, r, m, seed.with_stream(t))?;
        hits += (h.max_codegree() >= k) as u64;
    }
    let (_, upper) = wilson_interval(hits, trials, 2.0 * level);
    Ok(ClaimResult {
        id: "codegree-bound".into(),
        description: "P(some pair has codegree >= 5 in H(8,3,m=10)) is below the union bound".into(),
        samples: trials,
        statistic: hits as f64 / trials as f64,
        p_value: None,
        passed: upper <= bound,
        detail: format!(
            "estimate {:.6}, upper {upper:.6}, bound {bound:.6}",
            hits as f64 / trials as f64
        ),
    })
}
