use std::collections::BTreeMap;

use rand::seq::index::sample as index_sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::split::{build_split, classify_vertices, restrict_types_2_3};
use super::{CouplingConfig, CouplingError, EdgeTypeSplit, VertexClassification};
use crate::bounds::binomial_pmf;
use crate::combinatorics::binomial;
use crate::hypergraph::{OrientedHypergraph, Vertex};
use crate::rng::Seed;
use crate::samplers::sample_dout_with;

/// Why the coupling fell back to independent layers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "event")]
pub enum CouplingFailure {
    /// Too many bad vertices.
    F1 { bad_fraction: f64, threshold: f64 },
    /// A bad vertex has fewer than `ρ d*` usable type-2 out-edges.
    F2 {
        vertex: Vertex,
        out_degree: usize,
        required: usize,
    },
    /// More labels fell among the bad-bad candidates than there are type-3
    /// out-edges to carry them.
    EllExceedsT { vertex: Vertex, ell: usize, t: usize },
}

/// Where a picked out-edge came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "from")]
pub enum PickSource {
    Type1 {
        layer: usize,
        index: usize,
    },
    Type2 {
        index: usize,
    },
    Type3 {
        index: usize,
    },
    /// Drawn independently after a failure.
    Fresh,
}

/// The label procedure at one bad vertex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BadVertexDraw {
    pub vertex: Vertex,
    /// Candidates whose heads are all good.
    pub x: u64,
    /// Candidates with another bad vertex.
    pub y: u64,
    /// Indices into `E→'2` of the out-edges of this vertex (`S`).
    pub s: Vec<usize>,
    /// The uniform `ρ d*`-subset `S'` of `S`.
    pub s_prime: Vec<usize>,
    /// Indices into `E→'3` of the out-edges of this vertex (`T`).
    pub t_edges: Vec<usize>,
    /// Labels `a_1, ..., a_{ρ d*}` in `[1, x + y]`; those `<= y` stand for
    /// candidates in `Y`.
    pub labels: Vec<u64>,
    /// Number of labels `<= y`.
    pub ell: usize,
    /// Distinct label to edge assignment, as indices into `S'` or `T`.
    pub assignment: BTreeMap<u64, usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingTranscript {
    pub config: CouplingConfig,
    pub split: EdgeTypeSplit,
    pub classification: VertexClassification,
    pub e2_prime: OrientedHypergraph,
    pub e3_prime: OrientedHypergraph,
    pub f2_holds: bool,
    pub bad_draws: Vec<BadVertexDraw>,
    /// `K_1, ..., K_ρ`; in each, vertex `v` is the tail of exactly `d*`
    /// edges, listed grouped by tail in pick order.
    pub layers: Vec<OrientedHypergraph>,
    /// `sources[i][j]` is the origin of edge `j` of `K_{i+1}`.
    pub sources: Vec<Vec<PickSource>>,
    pub failure: Option<CouplingFailure>,
}

impl CouplingTranscript {
    pub fn success(&self) -> bool {
        self.failure.is_none()
    }
}

type Pick = (Vec<Vertex>, PickSource);

const GOOD_LABEL: u64 = 0x10_0000;
const BAD_LABEL: u64 = 0x20_0000;
const FRESH_LABEL: u64 = 0x30_0000;

/// Draws `count` labels uniformly from `[1, m]`, distinct values mapped to a
/// uniformly random injection into `targets`. Returns the target of each draw.
fn assign_labels<R: Rng + ?Sized>(
    rng: &mut R,
    labels: &[u64],
    targets: &[usize],
    assignment: &mut BTreeMap<u64, usize>,
) -> Vec<usize> {
    let mut distinct: Vec<u64> = labels.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    assert!(
        distinct.len() <= targets.len(),
        "not enough edges for the distinct labels"
    );
    let chosen = index_sample(rng, targets.len(), distinct.len()).into_vec();
    for (label, slot) in distinct.iter().zip(chosen) {
        assignment.insert(*label, targets[slot]);
    }
    labels.iter().map(|l| assignment[l]).collect()
}

/// `ℓ = F_ℓ^{-1}(U)` where `U` is uniform on `[F_t(t-1), F_t(t))`, with
/// `ℓ ~ Bin(draws, q)` and `t ~ Bin(y, p3)`. The map is monotone in `t`, so
/// `ℓ <= t` whenever the first binomial is dominated by the second.
fn quantile_coupled_ell<R: Rng + ?Sized>(rng: &mut R, draws: usize, q: f64, y: u64, p3: f64, t: usize) -> usize {
    coupled_ell(rng.random::<f64>(), draws, q, y, p3, t)
}

fn coupled_ell(v: f64, draws: usize, q: f64, y: u64, p3: f64, t: usize) -> usize {
    let lo: f64 = (0..t as u64).map(|k| binomial_pmf::<f64>(y, p3, k)).sum();
    let width: f64 = binomial_pmf(y, p3, t as u64);
    let u = lo + width * v;
    let mut acc = 0.0;
    for k in 0..draws {
        acc += binomial_pmf::<f64>(draws as u64, q, k as u64);
        if u < acc {
            return k;
        }
    }
    draws
}

struct Layers {
    edges: Vec<OrientedHypergraph>,
    sources: Vec<Vec<PickSource>>,
}

fn fresh_layers(config: &CouplingConfig, d: usize, seed: Seed) -> Result<Layers, CouplingError> {
    let mut edges = Vec::with_capacity(config.rho);
    let mut sources = Vec::with_capacity(config.rho);
    for i in 0..config.rho {
        let k = sample_dout_with(&mut seed.derive(FRESH_LABEL + i as u64).rng(), config.n, config.r, d)?;
        sources.push(vec![PickSource::Fresh; k.m()]);
        edges.push(k);
    }
    Ok(Layers { edges, sources })
}

fn out_lists(h: &OrientedHypergraph) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); h.n()];
    for (i, e) in h.edges().enumerate() {
        out[e.tail as usize].push(i);
    }
    out
}

/// Runs the extraction on a given split and classification.
pub fn extract_layers(
    config: &CouplingConfig,
    split: EdgeTypeSplit,
    classification: VertexClassification,
    seed: Seed,
) -> Result<CouplingTranscript, CouplingError> {
    let (n, r, rho) = (config.n, config.r, config.rho);
    let d = classification.d_star;
    let (e2_prime, e3_prime) = restrict_types_2_3(&split, &classification);
    let e2_out = out_lists(&e2_prime);
    let e3_out = out_lists(&e3_prime);
    let need = rho * d;
    let f2_violation = classification
        .bad
        .iter()
        .map(|&v| (v, e2_out[v as usize].len()))
        .find(|&(_, deg)| deg < need);
    let f2_holds = f2_violation.is_none();

    let mut failure = None;
    if !classification.f1_holds {
        failure = Some(CouplingFailure::F1 {
            bad_fraction: classification.bad_fraction,
            threshold: classification.bad_threshold,
        });
    } else if let Some((vertex, out_degree)) = f2_violation {
        failure = Some(CouplingFailure::F2 {
            vertex,
            out_degree,
            required: need,
        });
    }

    // picks[i][v] = d edges (tail v) for layer i, with sources
    let mut picks: Vec<Vec<Vec<Pick>>> = vec![vec![Vec::new(); n]; rho];
    let mut bad_draws = Vec::new();
    let m_all = binomial(n as u64 - 1, r as u64 - 1).expect("small n");

    if failure.is_none() {
        let x = binomial(classification.good.len() as u64, r as u64 - 1).unwrap_or(0);
        let y = m_all.saturating_sub(x);
        for &v in &classification.bad {
            let mut rng = seed.derive(BAD_LABEL + v as u64).rng();
            let s = e2_out[v as usize].clone();
            let t_edges = e3_out[v as usize].clone();
            let s_prime: Vec<usize> = {
                let mut idx = index_sample(&mut rng, s.len(), need).into_vec();
                idx.sort_unstable();
                idx.into_iter().map(|i| s[i]).collect()
            };
            let q = y as f64 / m_all as f64;
            let ell = quantile_coupled_ell(&mut rng, need, q, y, split.probs.p3, t_edges.len());
            if ell > t_edges.len() {
                failure = Some(CouplingFailure::EllExceedsT {
                    vertex: v,
                    ell,
                    t: t_edges.len(),
                });
                break;
            }
            let in_y = index_sample(&mut rng, need, ell).into_vec();
            let mut is_y = vec![false; need];
            for i in in_y {
                is_y[i] = true;
            }
            let labels: Vec<u64> = is_y
                .iter()
                .map(|&yy| {
                    if yy {
                        rng.random_range(1..=y)
                    } else {
                        rng.random_range(y + 1..=m_all)
                    }
                })
                .collect();
            let y_labels: Vec<u64> = labels.iter().copied().filter(|&l| l <= y).collect();
            let x_labels: Vec<u64> = labels.iter().copied().filter(|&l| l > y).collect();
            let mut assignment = BTreeMap::new();
            let y_edges = assign_labels(&mut rng, &y_labels, &t_edges, &mut assignment);
            let x_edges = assign_labels(&mut rng, &x_labels, &s_prime, &mut assignment);
            let (mut yi, mut xi) = (y_edges.into_iter(), x_edges.into_iter());
            for (j, &label) in labels.iter().enumerate() {
                let (edge, source) = if label <= y {
                    let idx = yi.next().expect("one edge per label");
                    (e3_prime.edge(idx), PickSource::Type3 { index: idx })
                } else {
                    let idx = xi.next().expect("one edge per label");
                    (e2_prime.edge(idx), PickSource::Type2 { index: idx })
                };
                debug_assert_eq!(edge.tail, v);
                picks[j / d.max(1)][v as usize].push((edge.heads.to_vec(), source));
            }
            bad_draws.push(BadVertexDraw {
                vertex: v,
                x,
                y,
                s,
                s_prime,
                t_edges,
                labels,
                ell,
                assignment,
            });
        }
    }

    let layers = if failure.is_none() {
        for (i, layer) in split.e1_layers.iter().enumerate() {
            let outs = out_lists(layer);
            for &v in &classification.good {
                let mut rng = seed.derive(GOOD_LABEL + (i * n) as u64 + v as u64).rng();
                let labels: Vec<u64> = (0..d).map(|_| rng.random_range(1..=m_all)).collect();
                let mut assignment = BTreeMap::new();
                let chosen = assign_labels(&mut rng, &labels, &outs[v as usize], &mut assignment);
                for idx in chosen {
                    picks[i][v as usize].push((
                        layer.edge(idx).heads.to_vec(),
                        PickSource::Type1 { layer: i, index: idx },
                    ));
                }
            }
        }
        let mut edges = Vec::with_capacity(rho);
        let mut sources = Vec::with_capacity(rho);
        for layer in picks {
            let mut k = OrientedHypergraph::empty(n, r)?;
            let mut src = Vec::with_capacity(n * d);
            for (v, list) in layer.into_iter().enumerate() {
                for (heads, s) in list {
                    k.push_unchecked(v as Vertex, &heads);
                    src.push(s);
                }
            }
            edges.push(k);
            sources.push(src);
        }
        Layers { edges, sources }
    } else {
        fresh_layers(config, d, seed)?
    };

    Ok(CouplingTranscript {
        config: config.clone(),
        split,
        classification,
        e2_prime,
        e3_prime,
        f2_holds,
        bad_draws,
        layers: layers.edges,
        sources: layers.sources,
        failure,
    })
}

/// Builds a split, classifies and extracts.
pub fn run_coupling(config: &CouplingConfig, seed: Seed) -> Result<CouplingTranscript, CouplingError> {
    let split = build_split(config, seed.derive(1))?;
    let classification = classify_vertices(&split, config.d_star(), config.eps_prime);
    extract_layers(config, split, classification, seed.derive(2))
}
