//! Random `r`-uniform hypergraphs and loose Hamilton cycles.
//!
//! Samplers for `H_{n,m}`, `H_{n,p}`, oriented and `d`-out models; exact
//! solvers for loose Hamilton cycles and perfect matchings with checkable
//! certificates; the coupling that embeds independent `d`-out hypergraphs in
//! `H_{n,p}`; the edge-contraction reduction for awkward `n`; tail bounds
//! with exact oracles; and an experiment harness.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix it to one of them. Counts that overflow machine words use
//! `BigUint` and `BigRational`.
//!
//! ```
//! use loosecycle::{find_loose_hamilton, sample_hnm, validate_loose_cycle, Seed};
//!
//! let h = sample_hnm(8, 3, 40, Seed::new(3)).unwrap();
//! if let Some(c) = find_loose_hamilton(&h, u64::MAX).unwrap().found() {
//!     assert!(validate_loose_cycle(&h, c).is_ok());
//! }
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod certificates;
pub mod combinatorics;
pub mod coupling;
pub mod experiments;
pub mod ferber;
pub mod format;
pub mod hypergraph;
pub mod rng;
pub mod samplers;
pub mod scalar;
pub mod solvers;
pub mod stats;

pub use certificates::{validate_loose_cycle, validate_matching, Defect, LooseHamiltonCycle, PerfectMatching};
pub use coupling::{run_coupling, CouplingConfig, CouplingTranscript};
pub use ferber::{contract, lift_cycle, reduce_and_solve, ContractionMap};
pub use hypergraph::{Hypergraph, HypergraphError, OrientedHypergraph, Vertex};
pub use rng::Seed;
pub use samplers::{
    sample_dout, sample_hnm, sample_hnp, sample_matching_union, sample_oriented_hnp, PermutationProcess,
};
pub use scalar::Scalar;
pub use solvers::{count_matchings, find_loose_hamilton, find_perfect_matching, MatchingCount, Outcome};

pub type SplitProbabilitiesF64 = coupling::SplitProbabilities<f64>;
pub type SplitProbabilitiesF32 = coupling::SplitProbabilities<f32>;
pub type TailBoundReportF64 = bounds::TailBoundReport<f64>;
pub type TailBoundReportF32 = bounds::TailBoundReport<f32>;
pub type RhoRootF64 = bounds::RhoRoot<f64>;
pub type RhoRootF32 = bounds::RhoRoot<f32>;
pub type ThetaReportF64 = bounds::ThetaReport<f64>;
pub type ThetaReportF32 = bounds::ThetaReport<f32>;
