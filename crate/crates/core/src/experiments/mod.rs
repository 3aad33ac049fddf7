//! Threshold sweeps, the coupling-to-cycle pipeline, the Monte Carlo suite,
//! and result files.
//!
//! Every trial draws from its own seed stream, so results do not depend on
//! thread count or scheduling. Wall times are only recorded on request; with
//! them off, equal configs give byte-identical files.

mod pipeline;
mod suite;
mod sweep;

pub use pipeline::{
    matching_pipeline, LayerReport, PipelineConfig, PipelineReport, Stage, StageOutcome, UNIFORM_MATCHING_LIMIT,
};
pub use suite::{statistical_suite, ClaimResult, SuiteConfig, SuiteReport, CLAIMS};
pub use sweep::{
    monotone_check, threshold_sweep, trial_seed, ExperimentConfig, ExperimentResult, Grid, MonotoneReport,
    PointSummary, TrialOutcome, TrialRecord,
};

use std::io::Write;

use serde::Serialize;
use thiserror::Error;

use crate::bounds::{BoundError, RhoError};
use crate::coupling::CouplingError;
use crate::ferber::ReductionError;
use crate::hypergraph::HypergraphError;
use crate::samplers::SampleError;
use crate::solvers::SolverError;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("certificate failed validation: {0}")]
    Invalid(String),
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Coupling(#[from] CouplingError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(transparent)]
    Rho(#[from] RhoError),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Per-trial records as CSV, preceded by one `#` line holding the config as
/// JSON.
pub fn write_records_csv<W: Write>(result: &ExperimentResult, mut out: W) -> Result<(), ExperimentError> {
    writeln!(out, "# {}", serde_json::to_string(&result.config)?)?;
    let mut w = csv::Writer::from_writer(out);
    for rec in &result.records {
        w.serialize(rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads records written by [`write_records_csv`].
pub fn read_records_csv<R: std::io::Read>(input: R) -> Result<(ExperimentConfig, Vec<TrialRecord>), ExperimentError> {
    let mut text = String::new();
    let mut input = input;
    input.read_to_string(&mut text)?;
    let (first, rest) = text.split_once('\n').unwrap_or((&text, ""));
    let config = first
        .strip_prefix("# ")
        .ok_or_else(|| ExperimentError::Config("missing config line".into()))?;
    let config: ExperimentConfig = serde_json::from_str(config)?;
    let mut r = csv::Reader::from_reader(rest.as_bytes());
    let records = r.deserialize().collect::<Result<Vec<TrialRecord>, _>>()?;
    Ok((config, records))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String, ExperimentError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}
