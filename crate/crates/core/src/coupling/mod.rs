//! Embedding `ρ` independent copies of the `d*`-out model inside one
//! `H_{n,p}`, together with the binomial dominance coupling it relies on.
//!
//! The construction draws three independent edge families: `ρ` oriented
//! layers of type 1, an unoriented family of type 2 and an oriented family of
//! type 3. Vertices with out-degree at least `d*` in every type-1 layer are
//! good. Good vertices take their picks from their type-1 out-edges; bad
//! vertices take them from type-2 edges whose other vertices are all good and
//! from type-3 edges containing another bad vertex.

mod binomial;
mod checks;
mod extract;
mod split;

pub use binomial::{
    binomial_gof, couple_binomials, verify_silly_coupling, BinomialCoupler, DominancePair, RegimeViolation,
    SillyCouplingReport, SillyParameters,
};
pub use checks::{check_embedding, marginal_identity_check, EdgeFrequency, EmbeddingViolation, MarginalReport};
pub use extract::{extract_layers, run_coupling, BadVertexDraw, CouplingFailure, CouplingTranscript, PickSource};
pub use split::{
    build_split, classify_vertices, restrict_types_2_3, CouplingConfig, EdgeTypeSplit, SplitIdentities,
    SplitProbabilities, VertexClassification,
};

use thiserror::Error;

use crate::hypergraph::HypergraphError;
use crate::samplers::SampleError;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum CouplingError {
    #[error("derived probability {name} = {value} lies outside [0, 1]")]
    Probability { name: &'static str, value: f64 },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}
