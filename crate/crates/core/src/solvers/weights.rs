use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{MatchingCounter, SolverError};
use crate::combinatorics::{binomial, floyd_sample, unrank_subset};
use crate::hypergraph::{Hypergraph, Vertex};
use crate::rng::Seed;

/// Which sets `S` a [`WeightProfile`] evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "mode")]
pub enum WeightMode {
    /// Every `r`-subset of the vertex set.
    Exhaustive,
    /// `samples` distinct `r`-subsets chosen uniformly.
    Sampled { samples: u64, seed: u64 },
}

/// `w(S) = Φ(H - S)` over a family of `r`-sets, with mean and max ratio.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightProfile {
    pub mode: WeightMode,
    pub weights: Vec<(Vec<Vertex>, BigUint)>,
    /// `w̄`, the mean over the evaluated sets.
    pub mean: BigRational,
    /// `max w / w̄`; `None` when every weight is zero.
    pub maxr: Option<BigRational>,
}

impl WeightProfile {
    pub fn sampled(&self) -> bool {
        matches!(self.mode, WeightMode::Sampled { .. })
    }
}

const EXHAUSTIVE_LIMIT: u64 = 5_000_000;

pub fn weight_profile(h: &Hypergraph, mode: WeightMode) -> Result<WeightProfile, SolverError> {
    let (n, r) = (h.n(), h.r());
    let total = binomial(n as u64, r as u64).unwrap_or(u64::MAX);
    let ranks: Vec<u64> = match mode {
        WeightMode::Exhaustive => {
            if total > EXHAUSTIVE_LIMIT {
                return Err(SolverError::TooLarge {
                    what: "exhaustive weight profile",
                    size: total as u128,
                    limit: EXHAUSTIVE_LIMIT as u128,
                });
            }
            (0..total).collect()
        }
        WeightMode::Sampled { samples, seed } => floyd_sample(&mut Seed::new(seed).rng(), total, samples.min(total)),
    };
    let mut counter = MatchingCounter::new(h)?;
    let mut weights = Vec::with_capacity(ranks.len());
    let mut sum = BigUint::zero();
    let mut max = BigUint::zero();
    for rank in ranks {
        let s = unrank_subset(n as u32, r, rank);
        let w = counter.count_without(&s).0;
        sum += &w;
        if w > max {
            max = w.clone();
        }
        weights.push((s, w));
    }
    let mean = if weights.is_empty() {
        BigRational::zero()
    } else {
        BigRational::new(BigInt::from(sum), BigInt::from(weights.len()))
    };
    let maxr = (!mean.is_zero()).then(|| BigRational::from_integer(BigInt::from(max)) / &mean);
    Ok(WeightProfile {
        mode,
        weights,
        mean,
        maxr,
    })
}
