//! Edge classification toward a target part and the arrow search built on it.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{balanced, link_vertices, part_arrow, ssets_through, ArrowCheck, DensityError, DensityParams};
use crate::hypergraph::{Hypergraph, Vertex};
use crate::regularity::{
    at_least, max_degree_caps, relative_regular_subgraph, verify_regularity, verify_regularity_with_caps,
    DeletionTrace, RegularityCertificate, RegularityParams,
};
use crate::roots::{common_neighborhood_unchecked, count_through, root_report_from_cn};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroReason {
    /// Enough small pairs `(S, T_e)`.
    Small,
    /// `d(T_e) < s`, so there are no s-sets to classify.
    NoSsets,
    /// The best index falls short of the s-set threshold.
    Deficient,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeClass {
    Zero(ZeroReason),
    /// Part index of the dominant root.
    Index(usize),
}

impl EdgeClass {
    pub fn index(self) -> Option<usize> {
        match self {
            EdgeClass::Index(i) => Some(i),
            EdgeClass::Zero(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeClassification {
    pub edge: Vec<Vertex>,
    pub target: usize,
    /// The edge without its target-part vertex.
    pub t_e: Vec<Vertex>,
    pub v: Vertex,
    pub class: EdgeClass,
    /// Indexed by part; the target entry is always 0.
    pub per_index_counts: Vec<usize>,
    pub sset_count: usize,
    pub small_count: usize,
    /// s-sets with no root inside `T_e`; their `cd(S|T_e)` is taken as 0.
    pub rootless_count: usize,
    pub small_threshold: f64,
    pub zero_threshold: f64,
    pub index_threshold: f64,
}

/// Classifies `e` toward `target`. With `T_e = e \ V_target` and
/// `v = e ∩ V_target`, each s-set `v ∈ S ⊆ N(T_e)` is small when
/// `cd(S|T_e)`, the largest `cd(S|u)` over roots `u ∈ T_e`, is below
/// `n^{r-2-1/(s-1)-(s+1)ε}`. A large `S` has the index of the first root in
/// `T_e` (by part) reaching the threshold.
pub fn classify_edge(
    g: &Hypergraph,
    edge: &[Vertex],
    target: usize,
    params: &DensityParams,
) -> Result<EdgeClassification, DensityError> {
    params.validate()?;
    let n = balanced(g)?;
    let r = g.r();
    if target >= r {
        return Err(DensityError::BadPartIndex { index: target, parts: r });
    }
    let mut sorted = edge.to_vec();
    sorted.sort_unstable();
    if !g.contains_edge(&sorted) {
        return Err(DensityError::EdgeNotPresent(edge.to_vec()));
    }
    Ok(classify_unchecked(g, sorted, target, n, params))
}

fn classify_unchecked(
    g: &Hypergraph,
    edge: Vec<Vertex>,
    target: usize,
    n: usize,
    params: &DensityParams,
) -> EdgeClassification {
    let r = g.r();
    let arrow = params.with_arrow_delta();
    let small_threshold = arrow.codegree_threshold(n, r);
    let zero_threshold = params.zero_class_threshold(n);
    let v = edge[target];
    let mut t_e = edge.clone();
    t_e.remove(target);
    let link = link_vertices(g, &t_e);
    let index_threshold = params.sset_threshold(link.len(), r);

    let mut per_index_counts = vec![0usize; r];
    let mut sset_count = 0;
    let mut small_count = 0;
    let mut rootless_count = 0;
    for set in ssets_through(&link, v, params.s) {
        sset_count += 1;
        let cn = common_neighborhood_unchecked(g, &set);
        let report = root_report_from_cn(set, &cn, params.root_method, params.exact_budget);
        // an exact cover beyond budget counts as rootless
        let roots: Vec<Vertex> = report
            .map(|rep| rep.roots.into_iter().filter(|u| t_e.contains(u)).collect())
            .unwrap_or_default();
        if roots.is_empty() {
            rootless_count += 1;
        }
        let mut best: Option<(usize, usize)> = None;
        for u in roots {
            let cd = count_through(&cn, u);
            let part = g.part_of(u);
            if at_least(cd as f64, small_threshold) && best.is_none_or(|(p, _)| part < p) {
                best = Some((part, cd));
            }
        }
        match best {
            Some((part, _)) => per_index_counts[part] += 1,
            None => small_count += 1,
        }
    }

    let class = if at_least(small_count as f64, zero_threshold) {
        EdgeClass::Zero(ZeroReason::Small)
    } else if sset_count == 0 {
        EdgeClass::Zero(ZeroReason::NoSsets)
    } else {
        let (best_part, best_count) = per_index_counts
            .iter()
            .enumerate()
            .fold((usize::MAX, 0usize), |acc, (p, &c)| if c > acc.1 { (p, c) } else { acc });
        if best_count == 0 || !at_least(best_count as f64, index_threshold) {
            EdgeClass::Zero(ZeroReason::Deficient)
        } else {
            EdgeClass::Index(best_part)
        }
    };
    EdgeClassification {
        edge,
        target,
        t_e,
        v,
        class,
        per_index_counts,
        sset_count,
        small_count,
        rootless_count,
        small_threshold,
        zero_threshold,
        index_threshold,
    }
}

/// Classifies every edge of `g` toward `target`, in edge order.
pub fn classify_all(g: &Hypergraph, target: usize, params: &DensityParams) -> Result<Vec<EdgeClassification>, DensityError> {
    params.validate()?;
    let n = balanced(g)?;
    if target >= g.r() {
        return Err(DensityError::BadPartIndex {
            index: target,
            parts: g.r(),
        });
    }
    Ok(g.edges()
        .par_iter()
        .map(|e| classify_unchecked(g, e.clone(), target, n, params))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationSummary {
    pub edges: usize,
    /// Edges with `f = 0`.
    pub zero_edges: usize,
    pub zero_small: usize,
    pub zero_no_ssets: usize,
    pub zero_deficient: usize,
    /// Edges per index, indexed by part.
    pub per_index_edges: Vec<usize>,
    pub rootless_ssets: usize,
}

impl ClassificationSummary {
    pub fn of(r: usize, classes: &[EdgeClassification]) -> Self {
        let mut summary = ClassificationSummary {
            edges: classes.len(),
            zero_edges: 0,
            zero_small: 0,
            zero_no_ssets: 0,
            zero_deficient: 0,
            per_index_edges: vec![0; r],
            rootless_ssets: 0,
        };
        for c in classes {
            summary.rootless_ssets += c.rootless_count;
            match c.class {
                EdgeClass::Index(i) => summary.per_index_edges[i] += 1,
                EdgeClass::Zero(reason) => {
                    summary.zero_edges += 1;
                    match reason {
                        ZeroReason::Small => summary.zero_small += 1,
                        ZeroReason::NoSsets => summary.zero_no_ssets += 1,
                        ZeroReason::Deficient => summary.zero_deficient += 1,
                    }
                }
            }
        }
        summary
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DenseArrow {
    pub source: usize,
    pub target: usize,
    pub delta: f64,
    pub subgraph: Hypergraph,
    pub summary: ClassificationSummary,
    /// Regularity of the subgraph at `(ε + log_n 2r, 2r²α)`.
    pub relative_certificate: RegularityCertificate,
    /// Regularity of the subgraph at `(ε + log_n 4r, 4r²α)`.
    pub arrow_certificate: RegularityCertificate,
    pub host_certificate: RegularityCertificate,
    pub trace: DeletionTrace,
    pub check: ArrowCheck,
}

/// Classifies all edges toward `target`, keeps the edges of the most common
/// index `i` (ties to the smallest), regularizes them relative to `g` with
/// `c = r`, and verifies `V_i → V_target` at `δ = (s+1)ε`. With
/// `require_regular`, `g` must first pass `verify_regularity`.
pub fn find_dense_arrow(
    g: &Hypergraph,
    target: usize,
    params: &DensityParams,
    require_regular: bool,
) -> Result<DenseArrow, DensityError> {
    params.validate()?;
    let n = balanced(g)?;
    let r = g.r();
    let host_certificate = verify_regularity(g, params.s, params.epsilon, params.alpha)?;
    if require_regular && !host_certificate.pass {
        return Err(DensityError::NotRegular(Box::new(host_certificate)));
    }
    let classes = classify_all(g, target, params)?;
    let summary = ClassificationSummary::of(r, &classes);
    let (source, best_count) = summary
        .per_index_edges
        .iter()
        .enumerate()
        .fold((usize::MAX, 0usize), |acc, (p, &c)| if c > acc.1 { (p, c) } else { acc });
    if best_count == 0 || best_count * r < g.edge_count() {
        return Err(DensityError::NoMajorityIndex {
            edges: summary.edges,
            zero_edges: summary.zero_edges,
            best_count,
            per_index_edges: summary.per_index_edges,
        });
    }
    let keep: Vec<&Vec<Vertex>> = classes
        .iter()
        .filter(|c| c.class == EdgeClass::Index(source))
        .map(|c| &c.edge)
        .collect();
    let sub = g.with_edges(keep)?;
    let reg = RegularityParams {
        s: params.s,
        epsilon: params.epsilon,
        alpha: params.alpha,
    };
    let relative = relative_regular_subgraph(g, &sub, r as f64, reg)?;
    if relative.subgraph.edge_count() == 0 {
        return Err(DensityError::EmptyWitness(target));
    }
    let rf = r as f64;
    let arrow_certificate = verify_regularity_with_caps(
        &relative.subgraph,
        params.s,
        params.epsilon + (4.0 * rf).ln() / (n as f64).ln(),
        4.0 * rf * rf * params.alpha,
        &max_degree_caps(g)?,
    )?;
    let arrow_params = params.with_arrow_delta();
    let check = part_arrow(&relative.subgraph, g, source, target, &arrow_params)?;
    if let Some(f) = &check.failure {
        return Err(DensityError::ArrowNotVerified {
            source_part: source,
            target,
            tuple: f.tuple.clone(),
            v: f.v,
        });
    }
    Ok(DenseArrow {
        source,
        target,
        delta: arrow_params.delta,
        subgraph: relative.subgraph,
        summary,
        relative_certificate: relative.certificate,
        arrow_certificate,
        host_certificate,
        trace: relative.trace,
        check,
    })
}
