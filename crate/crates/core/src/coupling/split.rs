use serde::{Deserialize, Serialize};

use super::CouplingError;
use crate::hypergraph::{Hypergraph, OrientedHypergraph, Vertex};
use crate::rng::Seed;
use crate::samplers::{d_star, p_star, sample_hnp_with, sample_oriented_hnp_with};
use crate::scalar::Scalar;

/// Parameters of one coupling run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingConfig {
    pub n: usize,
    pub r: usize,
    pub eps: f64,
    pub rho: usize,
    /// Exponent in the bad-fraction threshold `n^(-eps')`.
    pub eps_prime: f64,
    /// Overrides `d* = ceil(eps^2 ln n)`.
    pub d_star: Option<usize>,
}

impl CouplingConfig {
    pub fn new(n: usize, r: usize, eps: f64, rho: usize) -> Self {
        CouplingConfig {
            n,
            r,
            eps,
            rho,
            eps_prime: 0.1,
            d_star: None,
        }
    }

    pub fn d_star(&self) -> usize {
        self.d_star.unwrap_or_else(|| d_star(self.eps, self.n))
    }
}

/// The edge probabilities of the three edge types.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitProbabilities<T> {
    pub n: usize,
    pub r: usize,
    pub rho: usize,
    pub eps: T,
    /// `ln n / C(n-1, r-1)`.
    pub p_star: T,
    /// `(1 + eps) p*`.
    pub p: T,
    /// `1 - (1 - (eps/2) p*)^(1/r)`.
    pub p1: T,
    /// Per-layer probability: `(1 - p1')^ρ = 1 - p1`.
    pub p1_prime: T,
    /// `(1 + eps/2) p*`.
    pub p2: T,
    /// `(1 - p3)^r = 1 - p2`.
    pub p3: T,
    /// `(eps/2) p*`, the unoriented density of type 1.
    pub p1_tilde: T,
    /// `p2`, the unoriented density of type 3.
    pub p3_tilde: T,
}

/// Residuals of the defining relations; all should be near zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitIdentities<T> {
    /// `(1 - p1')^ρ - (1 - p1)`.
    pub layers: T,
    /// `(1 - p3)^r - (1 - p2)`.
    pub type3: T,
    /// `1 - (1 - p1)^r - p1~`.
    pub type1: T,
    /// `p - (p1~ + p2)`, exactly zero up to rounding.
    pub slack: T,
}

/// `1 - (1 - q)^(1/k)` without cancellation.
fn root_complement<T: Scalar>(q: T, k: usize) -> T {
    -((-q).ln_1p() / T::of_usize(k)).exp_m1()
}

impl<T: Scalar> SplitProbabilities<T> {
    pub fn new(n: usize, r: usize, eps: T, rho: usize) -> Result<Self, CouplingError> {
        if r < 2 || n <= r {
            return Err(CouplingError::Parameter(format!(
                "need n > r >= 2, got n = {n}, r = {r}"
            )));
        }
        if rho == 0 {
            return Err(CouplingError::Parameter("rho must be at least 1".into()));
        }
        if !(eps >= T::zero()) {
            return Err(CouplingError::Parameter(format!("eps = {eps} must be nonnegative")));
        }
        let half = T::of(0.5);
        let p_star = p_star::<T>(n, r);
        let p = (T::one() + eps) * p_star;
        let p1_tilde = eps * half * p_star;
        let p2 = (T::one() + eps * half) * p_star;
        for (name, value) in [("p", p), ("p2", p2)] {
            if !(value >= T::zero() && value <= T::one()) {
                return Err(CouplingError::Probability {
                    name,
                    value: value.as_f64(),
                });
            }
        }
        let p1 = root_complement(p1_tilde, r);
        let p1_prime = root_complement(p1, rho);
        let p3 = root_complement(p2, r);
        Ok(SplitProbabilities {
            n,
            r,
            rho,
            eps,
            p_star,
            p,
            p1,
            p1_prime,
            p2,
            p3,
            p1_tilde,
            p3_tilde: p2,
        })
    }

    pub fn identities(&self) -> SplitIdentities<T> {
        let one = T::one();
        SplitIdentities {
            layers: (one - self.p1_prime).powi(self.rho as i32) - (one - self.p1),
            type3: (one - self.p3).powi(self.r as i32) - (one - self.p2),
            type1: one - (one - self.p1).powi(self.r as i32) - self.p1_tilde,
            slack: self.p - (self.p1_tilde + self.p2),
        }
    }
}

/// One draw of the three edge families.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeTypeSplit {
    pub probs: SplitProbabilities<f64>,
    /// The `ρ` independent type-1 layers, each `H→_{n,p1'}`.
    pub e1_layers: Vec<OrientedHypergraph>,
    /// Type 2, `H_{n,p2}`.
    pub e2: Hypergraph,
    /// Type 3, `H→_{n,p3}`.
    pub e3: OrientedHypergraph,
}

const LAYER_LABEL: u64 = 0x1000;
const TYPE2_LABEL: u64 = 0x2000;
const TYPE3_LABEL: u64 = 0x3000;

impl EdgeTypeSplit {
    /// Draws types 2 and 3 afresh around given type-1 layers.
    pub fn around_layers(
        probs: SplitProbabilities<f64>,
        e1_layers: Vec<OrientedHypergraph>,
        seed: Seed,
    ) -> Result<Self, CouplingError> {
        let (n, r) = (probs.n, probs.r);
        if e1_layers.len() != probs.rho || e1_layers.iter().any(|l| l.n() != n || l.r() != r) {
            return Err(CouplingError::Parameter(
                "type-1 layers do not match the parameters".into(),
            ));
        }
        let e2 = sample_hnp_with(&mut seed.derive(TYPE2_LABEL).rng(), n, r, probs.p2)?;
        let e3 = sample_oriented_hnp_with(&mut seed.derive(TYPE3_LABEL).rng(), n, r, probs.p3)?;
        Ok(EdgeTypeSplit {
            probs,
            e1_layers,
            e2,
            e3,
        })
    }

    /// All type-1 edges as one oriented multiset.
    pub fn e1(&self) -> OrientedHypergraph {
        OrientedHypergraph::concat(&self.e1_layers).expect("rho >= 1")
    }
}

/// Draws the three families independently.
pub fn build_split(config: &CouplingConfig, seed: Seed) -> Result<EdgeTypeSplit, CouplingError> {
    let probs = SplitProbabilities::<f64>::new(config.n, config.r, config.eps, config.rho)?;
    let layers = (0..config.rho)
        .map(|i| {
            sample_oriented_hnp_with(
                &mut seed.derive(LAYER_LABEL + i as u64).rng(),
                config.n,
                config.r,
                probs.p1_prime,
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    EdgeTypeSplit::around_layers(probs, layers, seed)
}

/// Good and bad vertices of a split.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexClassification {
    pub d_star: usize,
    /// `out_degrees[i][v]`: out-degree of `v` in type-1 layer `i`.
    pub out_degrees: Vec<Vec<usize>>,
    pub good: Vec<Vertex>,
    pub bad: Vec<Vertex>,
    pub bad_fraction: f64,
    /// `n^(-eps')`.
    pub bad_threshold: f64,
    /// The bad fraction is at most the threshold.
    pub f1_holds: bool,
}

impl VertexClassification {
    pub fn is_bad(&self, v: Vertex) -> bool {
        self.bad.binary_search(&v).is_ok()
    }
}

pub fn classify_vertices(split: &EdgeTypeSplit, d_star: usize, eps_prime: f64) -> VertexClassification {
    let n = split.probs.n;
    let out_degrees: Vec<Vec<usize>> = split.e1_layers.iter().map(|l| l.out_degrees()).collect();
    let (mut good, mut bad) = (Vec::new(), Vec::new());
    for v in 0..n {
        if out_degrees.iter().all(|d| d[v] >= d_star) {
            good.push(v as Vertex);
        } else {
            bad.push(v as Vertex);
        }
    }
    let bad_fraction = bad.len() as f64 / n as f64;
    let bad_threshold = (n as f64).powf(-eps_prime);
    VertexClassification {
        d_star,
        out_degrees,
        good,
        bad,
        bad_fraction,
        bad_threshold,
        f1_holds: bad_fraction <= bad_threshold,
    }
}

/// `(E→'2, E→'3)`: type-2 edges with at most one bad vertex, oriented with
/// the bad vertex (or else the smallest vertex) as tail; and type-3 edges
/// with more than one bad vertex.
pub fn restrict_types_2_3(
    split: &EdgeTypeSplit,
    classes: &VertexClassification,
) -> (OrientedHypergraph, OrientedHypergraph) {
    let (n, r) = (split.probs.n, split.probs.r);
    let mut e2p = OrientedHypergraph::empty(n, r).expect("r >= 2");
    let mut heads = Vec::with_capacity(r - 1);
    for e in split.e2.edges() {
        let bad: Vec<Vertex> = e.iter().copied().filter(|&v| classes.is_bad(v)).collect();
        if bad.len() > 1 {
            continue;
        }
        let tail = bad.first().copied().unwrap_or(e[0]);
        heads.clear();
        heads.extend(e.iter().copied().filter(|&v| v != tail));
        e2p.push_unchecked(tail, &heads);
    }
    let mut e3p = OrientedHypergraph::empty(n, r).expect("r >= 2");
    for e in split.e3.edges() {
        let bad = e.vertices().into_iter().filter(|&v| classes.is_bad(v)).count();
        if bad > 1 {
            e3p.push_unchecked(e.tail, e.heads);
        }
    }
    (e2p, e3p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_at_n10() {
        let s = SplitProbabilities::<f64>::new(10, 3, 0.5, 2).unwrap();
        assert!((s.p_star - 0.06396069702761238).abs() < 1e-15);
        assert!((s.p2 - 0.07995087128451547).abs() < 1e-15);
        assert!((s.p3 - 0.02739386175606462).abs() < 1e-14);
        let id = s.identities();
        assert!(id.layers.abs() < 1e-12);
        assert!(id.type3.abs() < 1e-12);
        assert!(id.type1.abs() < 1e-12);
        assert!(id.slack.abs() < 1e-15);
        assert!(s.p1_tilde + s.p2 <= s.p + 1e-15);
    }

    #[test]
    fn single_precision_constants() {
        let s = SplitProbabilities::<f32>::new(10, 3, 0.5, 2).unwrap();
        assert!((s.p3 - 0.027_393_862).abs() < 1e-6);
    }

    #[test]
    fn zero_eps_gives_empty_type1() {
        let cfg = CouplingConfig::new(8, 3, 0.0, 2);
        let split = build_split(&cfg, Seed::new(1)).unwrap();
        assert_eq!(split.probs.p1, 0.0);
        assert!(split.e1_layers.iter().all(|l| l.m() == 0));
        let c = classify_vertices(&split, 1, 0.1);
        assert_eq!(c.bad.len(), 8);
        let c = classify_vertices(&split, 0, 0.1);
        assert_eq!(c.good.len(), 8);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(SplitProbabilities::<f64>::new(3, 3, 0.5, 1).is_err());
        assert!(SplitProbabilities::<f64>::new(10, 3, 0.5, 0).is_err());
        assert!(SplitProbabilities::<f64>::new(10, 3, -0.1, 1).is_err());
        // p = 3 p* > 1 at n = 4, r = 3
        assert!(matches!(
            SplitProbabilities::<f64>::new(4, 3, 2.0, 1),
            Err(CouplingError::Probability { .. })
        ));
    }

    #[test]
    fn hand_built_classification() {
        let layer = OrientedHypergraph::from_edges(6, 3, [(0, [1, 2]), (0, [3, 4])]).unwrap();
        let probs = SplitProbabilities::<f64>::new(6, 3, 0.5, 1).unwrap();
        let split = EdgeTypeSplit::around_layers(probs, vec![layer], Seed::new(2)).unwrap();
        let c = classify_vertices(&split, 1, 0.1);
        assert_eq!(c.good, vec![0]);
        assert_eq!(c.bad, vec![1, 2, 3, 4, 5]);
        let (e2p, e3p) = restrict_types_2_3(&split, &c);
        for e in e2p.edges() {
            let bad = e.vertices().into_iter().filter(|&v| c.is_bad(v)).count();
            assert!(bad <= 1);
            if bad == 1 {
                assert!(c.is_bad(e.tail));
            }
        }
        for e in e3p.edges() {
            assert!(e.vertices().into_iter().filter(|&v| c.is_bad(v)).count() > 1);
        }
    }
}
