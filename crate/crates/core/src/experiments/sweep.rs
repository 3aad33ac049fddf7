use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::combinatorics::binomial;
use crate::hypergraph::Hypergraph;
use crate::rng::Seed;
use crate::samplers::{sample_hnm, PermutationProcess};
use crate::solvers::{find_loose_hamilton, NotFoundReason, Outcome};
use crate::stats::wilson_interval;

/// Edge counts to visit, either directly or as multiples of `n ln n / r`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "values")]
pub enum Grid {
    Ratios(Vec<f64>),
    Edges(Vec<u64>),
}

impl Grid {
    pub fn default_ratios() -> Self {
        Grid::Ratios(vec![0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0])
    }

    fn len(&self) -> usize {
        match self {
            Grid::Ratios(v) => v.len(),
            Grid::Edges(v) => v.len(),
        }
    }
}

/// A threshold sweep over `H_{n,m}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n: usize,
    pub r: usize,
    pub grid: Grid,
    pub trials: u64,
    pub seed: u64,
    pub budget: u64,
    /// Significance level for confidence intervals.
    pub alpha: f64,
    pub record_timing: bool,
}

impl ExperimentConfig {
    pub fn new(n: usize, r: usize, trials: u64, seed: u64) -> Self {
        ExperimentConfig {
            n,
            r,
            grid: Grid::default_ratios(),
            trials,
            seed,
            budget: 50_000_000,
            alpha: 0.01,
            record_timing: false,
        }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.grid.len() == 0 {
            return Err(ExperimentError::Config("grid is empty".into()));
        }
        if self.trials == 0 {
            return Err(ExperimentError::Config("trials must be at least 1".into()));
        }
        if self.r < 2 || self.n < self.r {
            return Err(ExperimentError::Config(format!(
                "need 2 <= r <= n, got n = {}, r = {}",
                self.n, self.r
            )));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(ExperimentError::Config(format!(
                "alpha = {} is outside (0, 1)",
                self.alpha
            )));
        }
        Ok(())
    }

    /// The edge count of each grid point, clamped to `C(n, r)`.
    pub fn edge_counts(&self) -> Vec<u64> {
        let total = binomial(self.n as u64, self.r as u64).unwrap_or(u64::MAX);
        let scale = self.n as f64 * (self.n as f64).ln() / self.r as f64;
        match &self.grid {
            Grid::Ratios(v) => v
                .iter()
                .map(|c| ((c * scale).round().max(0.0) as u64).min(total))
                .collect(),
            Grid::Edges(v) => v.iter().map(|&m| m.min(total)).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrialOutcome {
    Found,
    NotFound,
    BudgetExceeded,
}

/// One trial, as written to the per-trial CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub point: usize,
    pub m: u64,
    pub trial: u64,
    pub seed: u64,
    pub stream: u64,
    pub outcome: TrialOutcome,
    pub reason: Option<String>,
    pub isolated: bool,
    pub nodes: u64,
    pub wall_ms: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSummary {
    pub m: u64,
    pub ratio: f64,
    pub trials: u64,
    pub successes: u64,
    pub not_found: u64,
    pub budget_exceeded: u64,
    pub isolated: u64,
    /// Trials that found no cycle and had an isolated vertex.
    pub isolated_failures: u64,
    pub rate: f64,
    pub wilson: (f64, f64),
    pub isolated_rate: f64,
    pub reasons: BTreeMap<String, u64>,
}

impl PointSummary {
    pub fn failures(&self) -> u64 {
        self.not_found + self.budget_exceeded
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub points: Vec<PointSummary>,
    pub records: Vec<TrialRecord>,
}

pub(crate) fn reason_key(reason: &NotFoundReason) -> &'static str {
    match reason {
        NotFoundReason::Divisibility { .. } => "divisibility",
        NotFoundReason::TooShort { .. } => "too-short",
        NotFoundReason::IsolatedVertex { .. } => "isolated-vertex",
        NotFoundReason::Exhausted => "exhausted",
    }
}

/// Trial seed for grid point `point`, trial `trial`.
pub fn trial_seed(seed: u64, point: usize, trial: u64) -> Seed {
    Seed::new(seed).derive(point as u64).with_stream(trial)
}

fn run_trial(config: &ExperimentConfig, point: usize, m: u64, trial: u64) -> Result<TrialRecord, ExperimentError> {
    let start = config.record_timing.then(Instant::now);
    let seed = trial_seed(config.seed, point, trial);
    let h = sample_hnm(config.n, config.r, m, seed)?;
    let isolated = h.has_isolated_vertex();
    let out = find_loose_hamilton(&h, config.budget)?;
    let (outcome, reason) = match &out {
        Outcome::Found { .. } => (TrialOutcome::Found, None),
        Outcome::NotFound { reason, .. } => (TrialOutcome::NotFound, Some(reason_key(reason).to_string())),
        Outcome::BudgetExceeded { .. } => (TrialOutcome::BudgetExceeded, None),
    };
    Ok(TrialRecord {
        point,
        m,
        trial,
        seed: seed.value,
        stream: seed.stream,
        outcome,
        reason,
        isolated,
        nodes: out.nodes(),
        wall_ms: start.map(|s| s.elapsed().as_secs_f64() * 1e3),
    })
}

fn summarize(config: &ExperimentConfig, point: usize, m: u64, records: &[TrialRecord]) -> PointSummary {
    let mine: Vec<&TrialRecord> = records.iter().filter(|t| t.point == point).collect();
    let count = |o: TrialOutcome| mine.iter().filter(|t| t.outcome == o).count() as u64;
    let trials = mine.len() as u64;
    let successes = count(TrialOutcome::Found);
    let isolated = mine.iter().filter(|t| t.isolated).count() as u64;
    let mut reasons = BTreeMap::new();
    for t in &mine {
        if let Some(r) = &t.reason {
            *reasons.entry(r.clone()).or_insert(0) += 1;
        }
    }
    let scale = config.n as f64 * (config.n as f64).ln() / config.r as f64;
    PointSummary {
        m,
        ratio: m as f64 / scale,
        trials,
        successes,
        not_found: count(TrialOutcome::NotFound),
        budget_exceeded: count(TrialOutcome::BudgetExceeded),
        isolated,
        isolated_failures: mine
            .iter()
            .filter(|t| t.isolated && t.outcome != TrialOutcome::Found)
            .count() as u64,
        rate: successes as f64 / trials.max(1) as f64,
        wilson: wilson_interval(successes, trials, config.alpha),
        isolated_rate: isolated as f64 / trials.max(1) as f64,
        reasons,
    }
}

/// Estimates the probability of a loose Hamilton cycle at each grid point by
/// exact search, in parallel over trials.
pub fn threshold_sweep(config: &ExperimentConfig) -> Result<ExperimentResult, ExperimentError> {
    config.validate()?;
    let counts = config.edge_counts();
    let jobs: Vec<(usize, u64, u64)> = counts
        .iter()
        .enumerate()
        .flat_map(|(p, &m)| (0..config.trials).map(move |t| (p, m, t)))
        .collect();
    let records = jobs
        .par_iter()
        .map(|&(p, m, t)| run_trial(config, p, m, t))
        .collect::<Result<Vec<_>, _>>()?;
    let points = counts
        .iter()
        .enumerate()
        .map(|(p, &m)| summarize(config, p, m, &records))
        .collect();
    Ok(ExperimentResult {
        config: config.clone(),
        points,
        records,
    })
}

/// Existence of a loose Hamilton cycle along one run of the edge-deletion
/// process.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonotoneReport {
    pub n: usize,
    pub r: usize,
    pub seed: u64,
    pub times: Vec<usize>,
    pub edges: Vec<usize>,
    /// `None` where the budget ran out.
    pub exists: Vec<Option<bool>>,
    /// No time with a cycle follows a time without one.
    pub monotone: bool,
}

/// Runs the deletion process on `K(n, r)` and checks that once the cycle is
/// gone it never comes back. Times are `0, stride, 2 stride, ...` up to the
/// last edge.
pub fn monotone_check(
    n: usize,
    r: usize,
    seed: Seed,
    budget: u64,
    stride: usize,
) -> Result<MonotoneReport, ExperimentError> {
    let empty = Hypergraph::empty(n, r).map_err(crate::samplers::SampleError::from)?;
    let process = PermutationProcess::new(&empty, seed)?;
    let stride = stride.max(1);
    let times: Vec<usize> = (0..=process.len()).step_by(stride).collect();
    let exists = times
        .par_iter()
        .map(|&t| {
            let h = process.hypergraph_at(t);
            let out = find_loose_hamilton(&h, budget)?;
            Ok(match out {
                Outcome::Found { .. } => Some(true),
                Outcome::NotFound { .. } => Some(false),
                Outcome::BudgetExceeded { .. } => None,
            })
        })
        .collect::<Result<Vec<_>, ExperimentError>>()?;
    let mut seen_false = false;
    let mut monotone = true;
    for e in exists.iter().flatten() {
        if !e {
            seen_false = true;
        } else if seen_false {
            monotone = false;
        }
    }
    Ok(MonotoneReport {
        n,
        r,
        seed: seed.value,
        edges: times.iter().map(|&t| process.m_t(t)).collect(),
        times,
        exists,
        monotone,
    })
}
