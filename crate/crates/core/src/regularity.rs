//! Regularization by deletion.
//!
//! `find_regular_subgraph` runs a balanced r-partite reduction, one dyadic
//! bucketing pass per part, and then a deletion loop that strips every
//! (r-1)-tuple whose degree falls below `Δ_i / (4r·log₂^r n)`.
//! `relative_regular_subgraph` is the variant that regularizes a large
//! subgraph relative to the degrees of its host. `verify_regularity`
//! evaluates the `(ε, α)`-regularity conditions without changing anything.

use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{Hypergraph, HypergraphError, Vertex};

/// Default number of random balanced partitions tried by
/// [`partite_reduction`].
pub const DEFAULT_PARTITION_RETRIES: usize = 64;

/// Relative slack for floating comparisons against powers of n.
const ROUNDING: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RegularityError {
    #[error("operation requires an r-partite hypergraph")]
    NotPartite,
    #[error("parts have unequal sizes {0:?}")]
    UnequalParts(Vec<usize>),
    #[error("{order} vertices cannot be split into {r} equal parts")]
    NotDivisible { order: usize, r: usize },
    #[error("hypergraph has no edges")]
    EmptyInput,
    #[error("part size {0} is too small; need at least 2")]
    PartTooSmall(usize),
    #[error("s must be at least 2 for the regularity exponents, got {0}")]
    InvalidS(usize),
    #[error("subgraph is not contained in the host")]
    NotSubgraph,
    #[error("subgraph has {have} edges, need at least {need}")]
    TooFewEdges { have: usize, need: f64 },
    #[error("factor c must be positive, got {0}")]
    InvalidFactor(f64),
    #[error("threshold divisor must be positive, got {0}")]
    InvalidDivisor(f64),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

pub(crate) fn at_least(value: f64, target: f64) -> bool {
    value >= target * (1.0 - ROUNDING)
}

/// Outcome of evaluating the `(ε, α)`-regularity conditions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularityCertificate {
    pub s: usize,
    pub epsilon: f64,
    pub alpha: f64,
    pub part_size: usize,
    pub delta_caps: Vec<u64>,
    pub achieved_min_degree: Vec<Option<usize>>,
    pub achieved_max_degree: Vec<Option<usize>>,
    pub edge_count: usize,
    /// `n^{r - 1/(s-1) - ε}`.
    pub density_target: f64,
    /// `[n^{1-1/(s-1)-ε}, n^{1-1/(s-1)+ε}]`.
    pub degree_window: (f64, f64),
    pub density_bound_ok: bool,
    pub degree_window_ok: bool,
    pub per_tuple_ok: bool,
    pub pass: bool,
}

impl RegularityCertificate {
    fn evaluate(g: &Hypergraph, s: usize, epsilon: f64, alpha: f64, caps: &[u64]) -> Self {
        let n = g.part_sizes()[0];
        let r = g.r();
        let nf = n as f64;
        let inv = 1.0 / (s as f64 - 1.0);
        let density_target = nf.powf(r as f64 - inv - epsilon);
        let degree_window = (nf.powf(1.0 - inv - epsilon), nf.powf(1.0 - inv + epsilon));
        let mut achieved_min_degree = Vec::with_capacity(r);
        let mut achieved_max_degree = Vec::with_capacity(r);
        let mut per_tuple_ok = true;
        for part in 0..r {
            let degrees: Vec<usize> = g
                .tuple_degrees(part)
                .expect("partite")
                .into_iter()
                .map(|(_, d)| d)
                .collect();
            let cap = caps[part] as f64;
            for &d in &degrees {
                if !(at_least(d as f64 * alpha, cap) && d as f64 <= cap) {
                    per_tuple_ok = false;
                }
            }
            achieved_min_degree.push(degrees.iter().copied().min());
            achieved_max_degree.push(degrees.iter().copied().max());
        }
        let density_bound_ok = at_least(g.edge_count() as f64, density_target);
        let degree_window_ok = caps.iter().all(|&cap| {
            let cap = cap as f64;
            at_least(cap, degree_window.0) && at_least(degree_window.1, cap)
        });
        RegularityCertificate {
            s,
            epsilon,
            alpha,
            part_size: n,
            delta_caps: caps.to_vec(),
            achieved_min_degree,
            achieved_max_degree,
            edge_count: g.edge_count(),
            density_target,
            degree_window,
            density_bound_ok,
            degree_window_ok,
            per_tuple_ok,
            pass: density_bound_ok && degree_window_ok && per_tuple_ok,
        }
    }
}

fn require_balanced(g: &Hypergraph) -> Result<usize, RegularityError> {
    if !g.is_partite() {
        return Err(RegularityError::NotPartite);
    }
    g.balanced_part_size()
        .ok_or_else(|| RegularityError::UnequalParts(g.part_sizes().to_vec()))
}

/// Per-part maximum tuple degree (0 for parts with no tuples).
pub fn max_degree_caps(g: &Hypergraph) -> Result<Vec<u64>, RegularityError> {
    if !g.is_partite() {
        return Err(RegularityError::NotPartite);
    }
    Ok((0..g.r())
        .map(|part| {
            g.tuple_degrees(part)
                .expect("partite")
                .into_iter()
                .map(|(_, d)| d as u64)
                .max()
                .unwrap_or(0)
        })
        .collect())
}

/// Evaluates `(ε, α)`-regularity with `Δ_i` the maximum degree over `𝒯_i`.
pub fn verify_regularity(
    g: &Hypergraph,
    s: usize,
    epsilon: f64,
    alpha: f64,
) -> Result<RegularityCertificate, RegularityError> {
    require_balanced(g)?;
    if s < 2 {
        return Err(RegularityError::InvalidS(s));
    }
    let caps = max_degree_caps(g)?;
    Ok(RegularityCertificate::evaluate(g, s, epsilon, alpha, &caps))
}

/// Same as [`verify_regularity`] with explicit caps `Δ_i`.
pub fn verify_regularity_with_caps(
    g: &Hypergraph,
    s: usize,
    epsilon: f64,
    alpha: f64,
    caps: &[u64],
) -> Result<RegularityCertificate, RegularityError> {
    require_balanced(g)?;
    if s < 2 {
        return Err(RegularityError::InvalidS(s));
    }
    assert_eq!(caps.len(), g.r(), "one cap per part");
    Ok(RegularityCertificate::evaluate(g, s, epsilon, alpha, caps))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartiteReduction {
    pub graph: Hypergraph,
    /// `vertex_map[new] = old`.
    pub vertex_map: Vec<Vertex>,
    pub original_edges: usize,
    pub retained_edges: usize,
    pub fraction: f64,
    /// `r!/r^r`.
    pub expected_fraction: f64,
    /// Whether the best partition kept at least `r!/r^r · e(G)` edges.
    pub meets_expectation: bool,
    pub attempts: usize,
}

fn factorial(k: usize) -> u128 {
    (1..=k as u128).product()
}

/// Restricts `g` to the transversal edges of the balanced partition `parts`
/// and relabels so part `i` owns ids `i·n..(i+1)·n` (ascending old ids).
pub fn reduce_with_partition(g: &Hypergraph, parts: &[Vec<Vertex>]) -> Result<PartiteReduction, RegularityError> {
    let r = g.r();
    let order = g.order();
    if parts.len() != r || !order.is_multiple_of(r) || parts.iter().any(|p| p.len() != order / r) {
        return Err(RegularityError::NotDivisible { order, r });
    }
    let n = order / r;
    let mut new_id = vec![Vertex::MAX; order];
    let mut part_of = vec![usize::MAX; order];
    let mut vertex_map = Vec::with_capacity(order);
    for (i, part) in parts.iter().enumerate() {
        let mut sorted = part.clone();
        sorted.sort_unstable();
        for (rank, &v) in sorted.iter().enumerate() {
            if v as usize >= order || part_of[v as usize] != usize::MAX {
                return Err(RegularityError::NotDivisible { order, r });
            }
            part_of[v as usize] = i;
            new_id[v as usize] = (i * n + rank) as Vertex;
            vertex_map.push(v);
        }
    }
    let edges: Vec<Vec<Vertex>> = g
        .edges()
        .iter()
        .filter(|e| {
            let mut seen = vec![false; r];
            e.iter().all(|&v| !std::mem::replace(&mut seen[part_of[v as usize]], true))
        })
        .map(|e| e.iter().map(|&v| new_id[v as usize]).collect())
        .collect();
    let graph = Hypergraph::new(r, vec![n; r], edges)?;
    let original = g.edge_count();
    let retained = graph.edge_count();
    let meets = retained as u128 * (r as u128).pow(r as u32) >= factorial(r) * original as u128;
    Ok(PartiteReduction {
        graph,
        vertex_map,
        original_edges: original,
        retained_edges: retained,
        fraction: if original == 0 { 1.0 } else { retained as f64 / original as f64 },
        expected_fraction: factorial(r) as f64 / (r as f64).powi(r as i32),
        meets_expectation: meets,
        attempts: 1,
    })
}

/// Best of `retries` seeded random balanced partitions. A hypergraph that is
/// already balanced r-partite is returned unchanged.
pub fn partite_reduction(g: &Hypergraph, seed: u64, retries: usize) -> Result<PartiteReduction, RegularityError> {
    let r = g.r();
    if let Some(n) = g.balanced_part_size() {
        let parts: Vec<Vec<Vertex>> = (0..r).map(|i| g.part_range(i).collect()).collect();
        debug_assert!(parts.iter().all(|p| p.len() == n));
        return reduce_with_partition(g, &parts);
    }
    let order = g.order();
    if !order.is_multiple_of(r) || order == 0 {
        return Err(RegularityError::NotDivisible { order, r });
    }
    let n = order / r;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vertices: Vec<Vertex> = g.vertices().collect();
    let mut best: Option<PartiteReduction> = None;
    let attempts = retries.max(1);
    for _ in 0..attempts {
        vertices.shuffle(&mut rng);
        let parts: Vec<Vec<Vertex>> = vertices.chunks(n).map(|c| c.to_vec()).collect();
        let candidate = reduce_with_partition(g, &parts)?;
        if best.as_ref().is_none_or(|b| candidate.retained_edges > b.retained_edges) {
            best = Some(candidate);
        }
    }
    let mut best = best.expect("at least one attempt");
    best.attempts = attempts;
    Ok(best)
}

/// Dyadic class of a positive degree: the least j with `d ≤ 2^j`, so that
/// `2^{j-1} < d ≤ 2^j` (degree 1 is class 0).
pub fn dyadic_class(degree: usize) -> u32 {
    debug_assert!(degree > 0);
    usize::BITS - (degree - 1).leading_zeros()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DyadicPass {
    pub part: usize,
    pub graph: Hypergraph,
    pub class: u32,
    pub delta_cap: u64,
    /// Edges covered by each class `j = 0, 1, ...`.
    pub class_edge_counts: Vec<usize>,
}

/// Buckets `𝒯_part` by dyadic degree class and keeps the edges of the class
/// covering the most edges (ties to the smallest class).
pub fn dyadic_pass(g: &Hypergraph, part: usize) -> Result<DyadicPass, RegularityError> {
    if !g.is_partite() {
        return Err(RegularityError::NotPartite);
    }
    if g.edge_count() == 0 {
        return Err(RegularityError::EmptyInput);
    }
    let tuples = g.tuple_degrees(part)?;
    let mut counts: Vec<usize> = Vec::new();
    for (_, d) in &tuples {
        let j = dyadic_class(*d) as usize;
        if counts.len() <= j {
            counts.resize(j + 1, 0);
        }
        counts[j] += d;
    }
    let (class, _) = counts
        .iter()
        .enumerate()
        .fold((0usize, 0usize), |best, (j, &c)| if c > best.1 { (j, c) } else { best });
    let graph = g.retain(|e| {
        let mut t = e.to_vec();
        t.remove(part);
        dyadic_class(g.degree_unchecked(&t)) as usize == class
    });
    Ok(DyadicPass {
        part,
        graph,
        class: class as u32,
        delta_cap: 1u64 << class,
        class_edge_counts: counts,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeletionRecord {
    pub tuple: Vec<Vertex>,
    pub part: usize,
    pub degree: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct DeletionTrace {
    pub rounds: Vec<DeletionRecord>,
    pub edges_deleted: usize,
    pub sweeps: usize,
}

impl DeletionTrace {
    /// Re-applies the recorded deletions to `start`; `None` if any recorded
    /// degree disagrees with the replay.
    pub fn replay(&self, start: &Hypergraph) -> Option<Hypergraph> {
        let mut alive = FixedBitSet::with_capacity(start.edge_count());
        alive.insert_range(..);
        for rec in &self.rounds {
            let mut hit = start.edges_containing(&rec.tuple);
            hit.intersect_with(&alive);
            if hit.count_ones(..) != rec.degree {
                return None;
            }
            alive.difference_with(&hit);
        }
        let deleted = start.edge_count() - alive.count_ones(..);
        (deleted == self.edges_deleted).then(|| {
            let kept: Vec<&Vec<Vertex>> = alive.ones().map(|i| &start.edges()[i]).collect();
            start.with_edges(kept).expect("subset of valid edges")
        })
    }
}

/// Repeatedly deletes all edges through any (r-1)-tuple `T` whose current
/// degree is below `threshold(T, missing part)`. Tuples are visited in
/// lexicographic order within a sweep; sweeps repeat until one deletes
/// nothing.
fn deletion_loop<F>(h: &Hypergraph, threshold: F) -> (Hypergraph, DeletionTrace)
where
    F: Fn(&[Vertex], usize) -> f64,
{
    let mut alive = FixedBitSet::with_capacity(h.edge_count());
    alive.insert_range(..);
    let mut trace = DeletionTrace::default();
    let tuples: Vec<(Vec<Vertex>, usize)> = {
        let mut all: Vec<(Vec<Vertex>, usize)> = Vec::new();
        for e in h.edges() {
            for part in 0..h.r() {
                let mut t = e.clone();
                t.remove(part);
                all.push((t, part));
            }
        }
        all.sort();
        all.dedup();
        all
    };
    let thresholds: Vec<f64> = tuples.iter().map(|(t, part)| threshold(t, *part)).collect();
    loop {
        trace.sweeps += 1;
        let mut deleted_this_sweep = false;
        for ((t, part), &thr) in tuples.iter().zip(&thresholds) {
            let mut hit = h.edges_containing(t);
            hit.intersect_with(&alive);
            let d = hit.count_ones(..);
            if d > 0 && (d as f64) < thr {
                alive.difference_with(&hit);
                trace.rounds.push(DeletionRecord {
                    tuple: t.clone(),
                    part: *part,
                    degree: d,
                });
                trace.edges_deleted += d;
                deleted_this_sweep = true;
            }
        }
        if !deleted_this_sweep {
            break;
        }
    }
    let kept: Vec<&Vec<Vertex>> = alive.ones().map(|i| &h.edges()[i]).collect();
    (h.with_edges(kept).expect("subset of valid edges"), trace)
}

/// `4r·log₂^r n`, the default deletion divisor and regularity ratio.
pub fn default_divisor(r: usize, n: usize) -> f64 {
    4.0 * r as f64 * (n as f64).log2().powi(r as i32)
}

/// Deletion loop with per-part thresholds `caps[i] / divisor`.
pub fn delete_below_caps(h: &Hypergraph, caps: &[u64], divisor: f64) -> (Hypergraph, DeletionTrace) {
    deletion_loop(h, |_, part| caps[part] as f64 / divisor)
}

/// Deletion loop with thresholds `d_G(T) / (2cr)`.
pub fn delete_below_relative(h: &Hypergraph, host: &Hypergraph, c: f64) -> (Hypergraph, DeletionTrace) {
    let factor = 2.0 * c * host.r() as f64;
    deletion_loop(h, |t, _| host.degree_unchecked(t) as f64 / factor)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegularizeOptions {
    pub s: usize,
    pub epsilon: f64,
    pub seed: u64,
    pub retries: usize,
    /// Replaces `4r·log₂^r n` in the deletion threshold and in α.
    pub threshold_divisor: Option<f64>,
}

impl RegularizeOptions {
    pub fn new(s: usize, epsilon: f64) -> Self {
        RegularizeOptions {
            s,
            epsilon,
            seed: 0,
            retries: DEFAULT_PARTITION_RETRIES,
            threshold_divisor: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegularSubgraph {
    pub reduction: PartiteReduction,
    pub passes: Vec<DyadicPass>,
    /// The graph after all dyadic passes.
    pub bucketed: Hypergraph,
    pub delta_caps: Vec<u64>,
    pub divisor: f64,
    pub thresholds: Vec<f64>,
    pub subgraph: Hypergraph,
    pub trace: DeletionTrace,
    pub certificate: RegularityCertificate,
}

/// Partite reduction, dyadic passes over parts `0..r` in order, then the
/// deletion loop. The certificate is evaluated at
/// `ε' = ε + (log₂ n)^{-1/2}` and `α = 4r·log₂^r n` (or the override).
pub fn find_regular_subgraph(g: &Hypergraph, options: &RegularizeOptions) -> Result<RegularSubgraph, RegularityError> {
    if options.s < 2 {
        return Err(RegularityError::InvalidS(options.s));
    }
    let reduction = partite_reduction(g, options.seed, options.retries)?;
    let r = g.r();
    let n = reduction.graph.part_sizes()[0];
    if n < 2 {
        return Err(RegularityError::PartTooSmall(n));
    }
    let divisor = options.threshold_divisor.unwrap_or_else(|| default_divisor(r, n));
    if !(divisor > 0.0) {
        return Err(RegularityError::InvalidDivisor(divisor));
    }
    let mut current = reduction.graph.clone();
    let mut passes = Vec::with_capacity(r);
    for part in 0..r {
        let pass = dyadic_pass(&current, part)?;
        current = pass.graph.clone();
        passes.push(pass);
    }
    let delta_caps: Vec<u64> = passes.iter().map(|p| p.delta_cap).collect();
    let (subgraph, trace) = delete_below_caps(&current, &delta_caps, divisor);
    assert!(
        subgraph.edge_count() > 0 || current.edge_count() == 0,
        "deletion loop emptied a nonempty graph"
    );
    let eps_prime = options.epsilon + (n as f64).log2().powf(-0.5);
    let certificate = RegularityCertificate::evaluate(&subgraph, options.s, eps_prime, divisor, &delta_caps);
    Ok(RegularSubgraph {
        thresholds: delta_caps.iter().map(|&c| c as f64 / divisor).collect(),
        reduction,
        passes,
        bucketed: current,
        delta_caps,
        divisor,
        subgraph,
        trace,
        certificate,
    })
}

/// Regularity parameters a host is certified at.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegularityParams {
    pub s: usize,
    pub epsilon: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RelativeRegular {
    pub subgraph: Hypergraph,
    pub trace: DeletionTrace,
    pub c: f64,
    /// Evaluated at `(ε + log_n 2c, 2αcr)` with the host's caps.
    pub certificate: RegularityCertificate,
}

/// Regularizes `sub ⊆ host` relative to host degrees: deletes tuples with
/// `d_H(T) < d_G(T)/(2cr)` until stable. Requires `e(sub) ≥ e(host)/c`.
pub fn relative_regular_subgraph(
    host: &Hypergraph,
    sub: &Hypergraph,
    c: f64,
    params: RegularityParams,
) -> Result<RelativeRegular, RegularityError> {
    let n = require_balanced(host)?;
    if params.s < 2 {
        return Err(RegularityError::InvalidS(params.s));
    }
    if !(c > 0.0) {
        return Err(RegularityError::InvalidFactor(c));
    }
    if n < 2 {
        return Err(RegularityError::PartTooSmall(n));
    }
    if !sub.is_subgraph_of(host) {
        return Err(RegularityError::NotSubgraph);
    }
    let need = host.edge_count() as f64 / c;
    if (sub.edge_count() as f64) < need * (1.0 - ROUNDING) {
        return Err(RegularityError::TooFewEdges {
            have: sub.edge_count(),
            need,
        });
    }
    let (subgraph, trace) = delete_below_relative(sub, host, c);
    let r = host.r() as f64;
    let caps = max_degree_caps(host)?;
    let certificate = RegularityCertificate::evaluate(
        &subgraph,
        params.s,
        params.epsilon + (2.0 * c).ln() / (n as f64).ln(),
        2.0 * params.alpha * c * r,
        &caps,
    );
    Ok(RelativeRegular {
        subgraph,
        trace,
        c,
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    #[test]
    fn dyadic_classes() {
        let classes: Vec<u32> = (1..=9).map(dyadic_class).collect();
        assert_eq!(classes, vec![0, 1, 2, 2, 3, 3, 3, 3, 4]);
    }

    #[test]
    fn partite_input_is_kept() {
        let g = Hypergraph::complete_partite(vec![3, 3, 3]).unwrap();
        let red = partite_reduction(&g, 0, 8).unwrap();
        assert_eq!(red.graph, g);
        assert_eq!(red.fraction, 1.0);
        assert_eq!(red.vertex_map, (0..9).collect::<Vec<_>>());
        assert!(red.meets_expectation);
    }

    #[test]
    fn all_triples_on_six_vertices() {
        // every balanced partition of K_6^(3) keeps exactly the 2*2*2 transversals
        let g = Hypergraph::complete(6, 3).unwrap();
        let vertices: Vec<Vertex> = (0..6).collect();
        for first in vertices.iter().copied().combinations(2) {
            let rest: Vec<Vertex> = vertices.iter().copied().filter(|v| !first.contains(v)).collect();
            for second in rest.iter().copied().combinations(2) {
                let third: Vec<Vertex> = rest.iter().copied().filter(|v| !second.contains(v)).collect();
                let red = reduce_with_partition(&g, &[first.clone(), second, third]).unwrap();
                assert_eq!(red.retained_edges, 8);
            }
        }
        let red = partite_reduction(&g, 3, 4).unwrap();
        assert_eq!(red.retained_edges, 8);
        assert!(red.retained_edges as f64 >= (6.0 / 27.0 * 20.0f64).ceil());
        assert!(red.meets_expectation);
    }

    #[test]
    fn single_edge_finds_separating_partition() {
        let g = Hypergraph::new(3, vec![6], [[0, 1, 2]]).unwrap();
        let red = partite_reduction(&g, 0, DEFAULT_PARTITION_RETRIES).unwrap();
        assert_eq!(red.retained_edges, 1);
        assert!(matches!(
            partite_reduction(&Hypergraph::new(3, vec![7], [[0, 1, 2]]).unwrap(), 0, 4),
            Err(RegularityError::NotDivisible { order: 7, r: 3 })
        ));
    }

    #[test]
    fn dyadic_uniform_degree_four() {
        let g = Hypergraph::complete_partite(vec![4, 4, 4]).unwrap();
        let pass = dyadic_pass(&g, 2).unwrap();
        assert_eq!(pass.class, 2);
        assert_eq!(pass.delta_cap, 4);
        assert_eq!(pass.graph, g);
    }

    #[test]
    fn dyadic_keeps_heavier_class() {
        // part 2 of size 8; tuple (0,8) has degree 8, tuples (1,9) and (2,10) degree 1
        let mut edges: Vec<Vec<Vertex>> = (16..24).map(|z| vec![0, 8, z]).collect();
        edges.push(vec![1, 9, 16]);
        edges.push(vec![2, 10, 17]);
        let g = Hypergraph::new(3, vec![8, 8, 8], edges).unwrap();
        let pass = dyadic_pass(&g, 2).unwrap();
        assert_eq!(pass.delta_cap, 8);
        assert_eq!(pass.class_edge_counts, vec![2, 0, 0, 8]);
        assert_eq!(pass.graph.edge_count(), 8);
    }

    #[test]
    fn dyadic_single_edge_and_empty() {
        let g = Hypergraph::new(3, vec![2, 2, 2], [[0, 2, 4]]).unwrap();
        let pass = dyadic_pass(&g, 0).unwrap();
        assert_eq!(pass.delta_cap, 1);
        let empty = Hypergraph::empty(3, vec![2, 2, 2]).unwrap();
        assert_eq!(dyadic_pass(&empty, 0).unwrap_err(), RegularityError::EmptyInput);
    }

    #[test]
    fn complete_partite_needs_no_deletion() {
        let g = Hypergraph::complete_partite(vec![4, 4, 4]).unwrap();
        let out = find_regular_subgraph(&g, &RegularizeOptions::new(3, 0.1)).unwrap();
        assert_eq!(out.subgraph, g);
        assert_eq!(out.trace.edges_deleted, 0);
        assert_eq!(out.delta_caps, vec![4, 4, 4]);
        assert!(out.certificate.per_tuple_ok);
    }

    #[test]
    fn pendant_tuple_survives_default_threshold() {
        // n = 8, r = 3: threshold 16 / (12 * 27) < 1 never deletes
        assert!((default_divisor(3, 8) - 324.0).abs() < 1e-9);
        let mut edges: Vec<Vec<Vertex>> = (16..24).map(|z| vec![0, 8, z]).collect();
        edges.push(vec![1, 9, 16]);
        let g = Hypergraph::new(3, vec![8, 8, 8], edges).unwrap();
        let (h, trace) = delete_below_caps(&g, &[16, 16, 16], default_divisor(3, 8));
        assert_eq!(h, g);
        assert_eq!(trace.edges_deleted, 0);
    }

    #[test]
    fn empty_input_is_rejected() {
        let g = Hypergraph::empty(3, vec![4, 4, 4]).unwrap();
        assert_eq!(
            find_regular_subgraph(&g, &RegularizeOptions::new(3, 0.1)).unwrap_err(),
            RegularityError::EmptyInput
        );
    }

    #[test]
    fn override_divisor_exercises_deletion() {
        let mut edges: Vec<Vec<Vertex>> = (16..24).map(|z| vec![0, 8, z]).collect();
        edges.push(vec![1, 9, 16]);
        let g = Hypergraph::new(3, vec![8, 8, 8], edges).unwrap();
        // only part 2 has a threshold above 1
        let (h, trace) = delete_below_caps(&g, &[1, 1, 8], 2.0);
        assert_eq!(h.edge_count(), 8);
        assert_eq!(trace.edges_deleted, 1);
        assert_eq!(trace.replay(&g), Some(h.clone()));
        let sum: usize = trace.rounds.iter().map(|r| r.degree).sum();
        assert_eq!(sum, trace.edges_deleted);
        let (again, second) = delete_below_caps(&h, &[1, 1, 8], 2.0);
        assert_eq!(again, h);
        assert_eq!(second.edges_deleted, 0);
    }

    #[test]
    fn relative_examples() {
        let g = Hypergraph::complete_partite(vec![2, 2, 2]).unwrap();
        let params = RegularityParams {
            s: 3,
            epsilon: 0.1,
            alpha: 2.0,
        };
        let out = relative_regular_subgraph(&g, &g, 1.0, params).unwrap();
        assert_eq!(out.subgraph, g);

        // keep the 4 edges avoiding tuple (0, 2) entirely
        let sub = g.retain(|e| !(e.contains(&0) && e.contains(&2)) && e.contains(&0) || e.contains(&1) && e.contains(&3));
        assert_eq!(sub.edge_count(), 4);
        let out = relative_regular_subgraph(&g, &sub, 2.0, params).unwrap();
        assert_eq!(out.subgraph, sub);
        assert!(!out.subgraph.tuples(2).unwrap().contains(&vec![0, 2]));

        assert!(matches!(
            relative_regular_subgraph(&g, &sub, 1.5, params),
            Err(RegularityError::TooFewEdges { have: 4, .. })
        ));
        let other = Hypergraph::new(3, vec![2, 2, 2], [[0, 2, 4]]).unwrap();
        let not_sub = Hypergraph::new(3, vec![2, 2, 2], [[0, 2, 5]]).unwrap();
        assert_eq!(
            relative_regular_subgraph(&other, &not_sub, 1.0, params).unwrap_err(),
            RegularityError::NotSubgraph
        );
    }

    #[test]
    fn verify_complete_partite_fails_window() {
        let g = Hypergraph::complete_partite(vec![4, 4, 4]).unwrap();
        let cert = verify_regularity(&g, 3, 0.1, 2.0).unwrap();
        assert_eq!(cert.delta_caps, vec![4, 4, 4]);
        assert!(cert.density_bound_ok);
        assert!(cert.per_tuple_ok);
        assert!(!cert.degree_window_ok);
        assert!(!cert.pass);
    }

    #[test]
    fn verify_single_edge_on_singletons_passes() {
        let g = Hypergraph::new(3, vec![1, 1, 1], [[0, 1, 2]]).unwrap();
        let cert = verify_regularity(&g, 3, 0.1, 2.0).unwrap();
        assert!(cert.pass);
    }

    #[test]
    fn verify_rejects_unequal_parts() {
        let g = Hypergraph::complete_partite(vec![2, 3, 2]).unwrap();
        assert!(matches!(
            verify_regularity(&g, 3, 0.1, 2.0),
            Err(RegularityError::UnequalParts(_))
        ));
    }
}
