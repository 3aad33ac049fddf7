use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::bounds::{rho_threshold, RhoEquation};
use crate::certificates::{validate_loose_cycle, validate_matching};
use crate::combinatorics::binomial;
use crate::coupling::{run_coupling, CouplingConfig, CouplingFailure};
use crate::hypergraph::{Hypergraph, Vertex};
use crate::rng::Seed;
use crate::samplers::{p_star, sample_hnm};
use crate::solvers::{find_loose_hamilton, find_perfect_matching, sample_perfect_matching, NotFoundReason, Outcome};

/// Largest `n` for which a found matching is replaced by an exactly uniform
/// one drawn through matching counts.
pub const UNIFORM_MATCHING_LIMIT: usize = 36;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub n: usize,
    pub r: usize,
    pub eps: f64,
    /// Number of layers; defaults to `floor(rho(r)) + 1`.
    pub rho: Option<usize>,
    pub seed: u64,
    pub budget: u64,
}

impl PipelineConfig {
    pub fn new(n: usize, r: usize, eps: f64, seed: u64, budget: u64) -> Self {
        PipelineConfig {
            n,
            r,
            eps,
            rho: None,
            seed,
            budget,
        }
    }
}

/// Outcome of one solver stage.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum StageOutcome {
    Found {
        nodes: u64,
    },
    NotFound {
        reason: NotFoundReason,
        nodes: u64,
    },
    BudgetExceeded {
        nodes: u64,
    },
    /// Not run because an earlier stage failed.
    Skipped,
}

impl StageOutcome {
    fn of<T>(o: &Outcome<T>) -> Self {
        match o {
            Outcome::Found { nodes, .. } => StageOutcome::Found { nodes: *nodes },
            Outcome::NotFound { reason, nodes } => StageOutcome::NotFound {
                reason: reason.clone(),
                nodes: *nodes,
            },
            Outcome::BudgetExceeded { nodes } => StageOutcome::BudgetExceeded { nodes: *nodes },
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, StageOutcome::Found { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "stage")]
pub enum Stage {
    Matching { layer: usize },
    LooseCycle,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayerReport {
    /// Edges of `Γ_i` after removing repeats.
    pub gamma_edges: usize,
    pub extra_edges: u64,
    pub matching: StageOutcome,
    /// Whether the reported matching was drawn uniformly from all perfect
    /// matchings of `Γ_i`.
    pub uniform: bool,
    pub matching_edges: Vec<Vec<Vertex>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub config: PipelineConfig,
    pub rho: usize,
    pub d_star: usize,
    /// `m* = N p*`.
    pub m_star: f64,
    pub coupling_success: bool,
    /// Set when the coupling fell back to independent layers.
    pub coupling_failure: Option<CouplingFailure>,
    pub layers: Vec<LayerReport>,
    pub union_edges: usize,
    pub cycle: StageOutcome,
    pub cycle_edges: Vec<Vec<Vertex>>,
    pub failed_stage: Option<Stage>,
}

impl PipelineReport {
    pub fn success(&self) -> bool {
        self.failed_stage.is_none()
    }
}

/// Coupling, then a perfect matching in each `Γ_i = K_i ∪ H_i`, then a loose
/// Hamilton cycle in the union of the matchings.
pub fn matching_pipeline(config: &PipelineConfig) -> Result<PipelineReport, ExperimentError> {
    let (n, r) = (config.n, config.r);
    if r < 2 || n % (r * (r - 1)) != 0 {
        return Err(ExperimentError::Config(format!(
            "r(r-1) = {} must divide n = {n}",
            r * r.saturating_sub(1)
        )));
    }
    let rho = match config.rho {
        Some(rho) if rho >= 1 => rho,
        Some(_) => return Err(ExperimentError::Config("rho must be at least 1".into())),
        None => rho_threshold::<f64>(r, 1e-12, RhoEquation::Standard)?.rho_int,
    };
    let seed = Seed::new(config.seed);
    let coupling = CouplingConfig::new(n, r, config.eps, rho);
    let transcript = run_coupling(&coupling, seed.derive(1))?;
    let total = binomial(n as u64, r as u64).unwrap_or(u64::MAX);
    let m_star = total as f64 * p_star::<f64>(n, r);
    let extra = (config.eps * m_star / rho as f64).round() as u64;

    let mut layers = Vec::with_capacity(rho);
    let mut matchings = Vec::with_capacity(rho);
    let mut failed_stage = None;
    for (i, k) in transcript.layers.iter().enumerate() {
        // stream i keeps the layers' extra randomness independent
        let layer_seed = seed.derive(2).with_stream(i as u64);
        let h_i = sample_hnm(n, r, extra, layer_seed.derive(1))?;
        let gamma = k.unoriented().union(&h_i).dedup();
        let found = find_perfect_matching(&gamma, config.budget)?;
        let mut report = LayerReport {
            gamma_edges: gamma.m(),
            extra_edges: extra,
            matching: StageOutcome::of(&found),
            uniform: false,
            matching_edges: Vec::new(),
        };
        let mut chosen = found.into_found();
        if chosen.is_some() && n <= UNIFORM_MATCHING_LIMIT {
            if let Some(m) = sample_perfect_matching(&gamma, &mut layer_seed.derive(2).rng())? {
                chosen = Some(m);
                report.uniform = true;
            }
        }
        match chosen {
            Some(m) => {
                validate_matching(&gamma, &m).map_err(|d| ExperimentError::Invalid(d.to_string()))?;
                report.matching_edges = m.edge_indices.iter().map(|&e| gamma.edge(e).to_vec()).collect();
                matchings.push(report.matching_edges.clone());
            }
            None => {
                failed_stage.get_or_insert(Stage::Matching { layer: i });
            }
        }
        layers.push(report);
    }

    let mut report = PipelineReport {
        config: config.clone(),
        rho,
        d_star: coupling.d_star(),
        m_star,
        coupling_success: transcript.success(),
        coupling_failure: transcript.failure.clone(),
        layers,
        union_edges: 0,
        cycle: StageOutcome::Skipped,
        cycle_edges: Vec::new(),
        failed_stage,
    };
    if report.failed_stage.is_some() {
        return Ok(report);
    }
    let union = Hypergraph::from_edges(n, r, matchings.iter().flatten())?.dedup();
    report.union_edges = union.m();
    let out = find_loose_hamilton(&union, config.budget)?;
    report.cycle = StageOutcome::of(&out);
    match out.into_found() {
        Some(c) => {
            validate_loose_cycle(&union, &c).map_err(|d| ExperimentError::Invalid(d.to_string()))?;
            report.cycle_edges = c.edge_indices.iter().map(|&e| union.edge(e).to_vec()).collect();
        }
        None => report.failed_stage = Some(Stage::LooseCycle),
    }
    Ok(report)
}
