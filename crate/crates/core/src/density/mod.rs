//! Dense rooted structures in balanced r-partite hosts.
//!
//! Every asymptotic threshold is a parameter with a formula default; the
//! reports carry both the threshold used and the statistic achieved.

pub mod bipartite;
pub mod classify;
pub mod digraph;
pub mod reduce;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{Hypergraph, HypergraphError, Vertex};
use crate::regularity::{at_least, RegularityCertificate, RegularityError};
use crate::roots::{common_neighborhood_unchecked, count_through, RootError, RootMethod, DEFAULT_EXACT_BUDGET};

pub use bipartite::{heavy_ssets, heavy_vertices, BipartiteError, BipartiteGraph, HeavySsets, HeavyVertices};
pub use classify::{classify_edge, find_dense_arrow, ClassificationSummary, DenseArrow, EdgeClass, EdgeClassification, ZeroReason};
pub use digraph::{build_dense_digraph, DenseDigraph, PartFailure};
pub use reduce::{bipartite_reduction_witness, count_rooted_pairs, rooted_sset_search, ReductionWitness, RootedPairCount, RootedSsets};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DensityError {
    #[error("host must be balanced r-partite")]
    NotBalancedPartite,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("vertex {u} is not in the tuple {tuple:?}")]
    UNotInT { tuple: Vec<Vertex>, u: Vertex },
    #[error("vertex {v} is not in the link of {tuple:?}")]
    VNotInLink { tuple: Vec<Vertex>, v: Vertex },
    #[error("tuple {0:?} must have one vertex in every part but one")]
    NotFullTuple(Vec<Vertex>),
    #[error("subgraph is not contained in the host")]
    NotSubgraph,
    #[error("parts must be distinct, got {0} twice")]
    SamePart(usize),
    #[error("part index {index} out of range for {parts} parts")]
    BadPartIndex { index: usize, parts: usize },
    #[error("edge {0:?} is not in the host")]
    EdgeNotPresent(Vec<Vertex>),
    #[error("host is not certified regular")]
    NotRegular(Box<RegularityCertificate>),
    #[error("no index covers a 1/r share of the edges: {zero_edges} of {edges} edges have f = 0, best index count {best_count}")]
    NoMajorityIndex {
        edges: usize,
        zero_edges: usize,
        best_count: usize,
        per_index_edges: Vec<usize>,
    },
    #[error("part arrow {source_part} -> {target} failed at tuple {tuple:?}, vertex {v}")]
    ArrowNotVerified {
        source_part: usize,
        target: usize,
        tuple: Vec<Vertex>,
        v: Vertex,
    },
    #[error("regularized subgraph for target part {0} is empty")]
    EmptyWitness(usize),
    #[error("(T; {v}) is not dense on the source vertex")]
    NotDense { v: Vertex },
    #[error("|X| = {size} below margin C*n^(eps+delta) = {needed}")]
    MarginTooSmall { size: usize, needed: f64 },
    #[error("X is empty")]
    EmptyX,
    #[error("target part {0} must differ from the source part and the tuple's missing part")]
    BadTargetPart(usize),
    #[error(transparent)]
    Bipartite(#[from] BipartiteError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Regularity(#[from] RegularityError),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

/// Thresholds and knobs shared by the density operations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityParams {
    pub s: usize,
    pub delta: f64,
    pub epsilon: f64,
    pub alpha: f64,
    /// Replaces `n^{r-2-1/(s-1)-δ}`.
    pub codegree_threshold: Option<f64>,
    /// Replaces `d(T)^{s-1}/r`.
    pub sset_fraction_threshold: Option<f64>,
    /// Replaces `(n^{1-1/(s-1)-ε}/(α·log₂ n))^{s-1}` in the edge classifier.
    pub zero_class_threshold: Option<f64>,
    /// Stands in for "much larger than".
    pub margin: f64,
    pub root_method: RootMethod,
    pub exact_budget: usize,
}

impl DensityParams {
    pub fn new(s: usize, epsilon: f64, alpha: f64) -> Self {
        DensityParams {
            s,
            delta: (s as f64 + 1.0) * epsilon,
            epsilon,
            alpha,
            codegree_threshold: None,
            sset_fraction_threshold: None,
            zero_class_threshold: None,
            margin: 10.0,
            root_method: RootMethod::Matching,
            exact_budget: DEFAULT_EXACT_BUDGET,
        }
    }

    /// Codegree threshold 1 and margin 0.1, so that desk-scale hosts reach
    /// every branch of the constructive searches.
    pub fn permissive(s: usize) -> Self {
        DensityParams {
            codegree_threshold: Some(1.0),
            margin: 0.1,
            ..DensityParams::new(s, 0.1, 2.0)
        }
    }

    pub fn validate(&self) -> Result<(), DensityError> {
        let bad = |m: &str| Err(DensityError::InvalidParams(m.to_string()));
        if self.s < 2 {
            return bad("s must be at least 2");
        }
        if !(self.delta >= 0.0 && self.epsilon >= 0.0) {
            return bad("delta and epsilon must be non-negative");
        }
        if !(self.alpha > 0.0) {
            return bad("alpha must be positive");
        }
        if !(self.margin > 0.0) {
            return bad("margin must be positive");
        }
        for (name, v) in [
            ("codegree_threshold", self.codegree_threshold),
            ("sset_fraction_threshold", self.sset_fraction_threshold),
            ("zero_class_threshold", self.zero_class_threshold),
        ] {
            if v.is_some_and(|x| !(x > 0.0)) {
                return Err(DensityError::InvalidParams(format!("{name} must be positive")));
            }
        }
        Ok(())
    }

    fn inv(&self) -> f64 {
        1.0 / (self.s as f64 - 1.0)
    }

    /// `n^{r-2-1/(s-1)-δ}` unless overridden.
    pub fn codegree_threshold(&self, n: usize, r: usize) -> f64 {
        self.codegree_threshold
            .unwrap_or_else(|| (n as f64).powf(r as f64 - 2.0 - self.inv() - self.delta))
    }

    /// `d^{s-1}/r` unless overridden.
    pub fn sset_threshold(&self, degree: usize, r: usize) -> f64 {
        self.sset_fraction_threshold
            .unwrap_or_else(|| (degree as f64).powi(self.s as i32 - 1) / r as f64)
    }

    /// `(n^{1-1/(s-1)-ε}/(α·log₂ n))^{s-1}` unless overridden.
    pub fn zero_class_threshold(&self, n: usize) -> f64 {
        self.zero_class_threshold.unwrap_or_else(|| {
            let nf = n as f64;
            (nf.powf(1.0 - self.inv() - self.epsilon) / (self.alpha * nf.log2())).powi(self.s as i32 - 1)
        })
    }

    /// Copy with `δ = (s+1)ε`.
    pub fn with_arrow_delta(&self) -> Self {
        DensityParams {
            delta: (self.s as f64 + 1.0) * self.epsilon,
            ..self.clone()
        }
    }
}

pub(crate) fn balanced(g: &Hypergraph) -> Result<usize, DensityError> {
    match (g.is_partite(), g.balanced_part_size()) {
        (true, Some(n)) => Ok(n),
        _ => Err(DensityError::NotBalancedPartite),
    }
}

/// Validates an (r-1)-tuple with one vertex outside exactly one part;
/// returns it sorted along with that part.
pub(crate) fn full_tuple(g: &Hypergraph, tuple: &[Vertex]) -> Result<(Vec<Vertex>, usize), DensityError> {
    let t = g.tuple(tuple)?;
    if t.len() != g.r() - 1 {
        return Err(DensityError::NotFullTuple(tuple.to_vec()));
    }
    Ok((t.vertices().to_vec(), t.missing_parts()[0]))
}

/// `N(T)` of an (r-1)-tuple as a sorted vertex list.
pub(crate) fn link_vertices(g: &Hypergraph, tuple: &[Vertex]) -> Vec<Vertex> {
    let mut out: Vec<Vertex> = g.link_unchecked(tuple).into_iter().flatten().collect();
    out.sort_unstable();
    out
}

/// `cd(S|u)`.
pub(crate) fn codegree_through(g: &Hypergraph, set: &[Vertex], u: Vertex) -> usize {
    count_through(&common_neighborhood_unchecked(g, set), u)
}

/// The s-sets `S` with `v ∈ S ⊆ link`, in lexicographic order.
pub(crate) fn ssets_through(link: &[Vertex], v: Vertex, s: usize) -> impl Iterator<Item = Vec<Vertex>> + '_ {
    link.iter()
        .copied()
        .filter(move |&w| w != v)
        .combinations(s - 1)
        .map(move |mut rest| {
            let pos = rest.partition_point(|&w| w < v);
            rest.insert(pos, v);
            rest
        })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseCheck {
    pub tuple: Vec<Vertex>,
    pub v: Vertex,
    pub u: Vertex,
    pub degree: usize,
    pub qualifying: usize,
    pub codegree_threshold: f64,
    pub sset_threshold: f64,
    pub dense: bool,
}

/// Counts s-sets `S` with `v ∈ S ⊆ N(T)` and `cd(S|u) ≥ codegree threshold`;
/// `(T; v)` is dense on `u` when the count reaches the s-set threshold.
pub fn is_delta_dense(
    g: &Hypergraph,
    tuple: &[Vertex],
    v: Vertex,
    u: Vertex,
    params: &DensityParams,
) -> Result<DenseCheck, DensityError> {
    params.validate()?;
    let n = balanced(g)?;
    let (tuple, _) = full_tuple(g, tuple)?;
    if !tuple.contains(&u) {
        return Err(DensityError::UNotInT { tuple, u });
    }
    let link = link_vertices(g, &tuple);
    if link.binary_search(&v).is_err() {
        return Err(DensityError::VNotInLink { tuple, v });
    }
    Ok(dense_check_unchecked(g, tuple, &link, v, u, n, params))
}

pub(crate) fn dense_check_unchecked(
    g: &Hypergraph,
    tuple: Vec<Vertex>,
    link: &[Vertex],
    v: Vertex,
    u: Vertex,
    n: usize,
    params: &DensityParams,
) -> DenseCheck {
    let r = g.r();
    let codegree_threshold = params.codegree_threshold(n, r);
    let sset_threshold = params.sset_threshold(link.len(), r);
    let qualifying = ssets_through(link, v, params.s)
        .filter(|set| at_least(codegree_through(g, set, u) as f64, codegree_threshold))
        .count();
    DenseCheck {
        degree: link.len(),
        dense: at_least(qualifying as f64, sset_threshold),
        tuple,
        v,
        u,
        qualifying,
        codegree_threshold,
        sset_threshold,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArrowCheck {
    pub source: usize,
    pub target: usize,
    pub delta: f64,
    pub holds: bool,
    pub pairs_checked: usize,
    pub failure: Option<DenseCheck>,
}

/// Checks that every `T ∈ 𝒯_target(H)` and `v ∈ N_H(T)` has `(T; v)` dense
/// on `T ∩ V_source` in `G`. Stops at the first failure.
pub fn part_arrow(
    h: &Hypergraph,
    g: &Hypergraph,
    source: usize,
    target: usize,
    params: &DensityParams,
) -> Result<ArrowCheck, DensityError> {
    params.validate()?;
    let n = balanced(g)?;
    let r = g.r();
    for index in [source, target] {
        if index >= r {
            return Err(DensityError::BadPartIndex { index, parts: r });
        }
    }
    if source == target {
        return Err(DensityError::SamePart(source));
    }
    if !h.is_subgraph_of(g) {
        return Err(DensityError::NotSubgraph);
    }
    let mut pairs_checked = 0;
    for tuple in h.tuples(target)? {
        let u = *tuple.iter().find(|&&w| g.part_of(w) == source).expect("full tuple");
        let g_link = link_vertices(g, &tuple);
        for v in link_vertices(h, &tuple) {
            pairs_checked += 1;
            let check = dense_check_unchecked(g, tuple.clone(), &g_link, v, u, n, params);
            if !check.dense {
                return Ok(ArrowCheck {
                    source,
                    target,
                    delta: params.delta,
                    holds: false,
                    pairs_checked,
                    failure: Some(check),
                });
            }
        }
    }
    Ok(ArrowCheck {
        source,
        target,
        delta: params.delta,
        holds: true,
        pairs_checked,
        failure: None,
    })
}
