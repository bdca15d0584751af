//! Exact detection of `K_{s,t}^{(r)}` and of the four-edge configuration
//! `A ∪ B = C ∪ D`, `A ∩ B = C ∩ D = ∅`.
//!
//! `K_{s,t}^{(r)}` has t pairwise disjoint (r-1)-sets `X_1..X_t`, an s-set
//! `Y` disjoint from all of them, and every `X_i ∪ {y}` as an edge. A copy
//! exists exactly when some s-set `Y` has t pairwise disjoint members in its
//! common neighbourhood that avoid `Y`. The search enumerates `Y` in
//! lexicographic order, shrinking the common neighbourhood one vertex at a
//! time and dropping prefixes that can no longer support t disjoint sets.

use std::collections::HashMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{Hypergraph, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PatternError {
    #[error("pattern uniformity {pattern} does not match host uniformity {host}")]
    ArityMismatch { pattern: usize, host: usize },
    #[error("invalid pattern parameters r={r} s={s} t={t}")]
    InvalidParams { r: usize, s: usize, t: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PatternParams {
    pub r: usize,
    pub s: usize,
    pub t: usize,
}

impl PatternParams {
    pub fn new(r: usize, s: usize, t: usize) -> Result<Self, PatternError> {
        if r < 2 || s < 1 || t < 1 {
            return Err(PatternError::InvalidParams { r, s, t });
        }
        Ok(PatternParams { r, s, t })
    }

    /// Number of vertices of `K_{s,t}^{(r)}`.
    pub fn vertex_count(&self) -> usize {
        self.t * (self.r - 1) + self.s
    }

    pub fn edge_count(&self) -> usize {
        self.s * self.t
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HostMode {
    General,
    Partite,
}

impl HostMode {
    pub fn of(g: &Hypergraph) -> Self {
        if g.is_partite() {
            HostMode::Partite
        } else {
            HostMode::General
        }
    }
}

/// A copy of `K_{s,t}^{(r)}` inside a host hypergraph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub x_sets: Vec<Vec<Vertex>>,
    pub y: Vec<Vertex>,
    pub host_mode: HostMode,
}

impl Embedding {
    /// The s·t edges `X_i ∪ {y}` of the copy, sorted.
    pub fn edges(&self) -> Vec<Vec<Vertex>> {
        let mut out = Vec::with_capacity(self.x_sets.len() * self.y.len());
        for x in &self.x_sets {
            for &y in &self.y {
                let mut e = x.clone();
                e.push(y);
                e.sort_unstable();
                out.push(e);
            }
        }
        out.sort();
        out
    }

    /// Checks shape, disjointness and presence of every edge in `g`.
    pub fn is_valid_in(&self, g: &Hypergraph, params: PatternParams) -> bool {
        if self.y.len() != params.s || self.x_sets.len() != params.t {
            return false;
        }
        if self.x_sets.iter().any(|x| x.len() != params.r - 1) {
            return false;
        }
        let mut all: Vec<Vertex> = self.x_sets.iter().flatten().copied().collect();
        all.extend(&self.y);
        let total = all.len();
        all.sort_unstable();
        all.dedup();
        all.len() == total && self.edges().iter().all(|e| g.contains_edge(e))
    }
}

/// Four distinct edges with `a ∪ b = c ∪ d` and `a ∩ b = c ∩ d = ∅`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quadruple {
    pub a: Vec<Vertex>,
    pub b: Vec<Vertex>,
    pub c: Vec<Vertex>,
    pub d: Vec<Vertex>,
}

impl Quadruple {
    pub fn is_valid_in(&self, g: &Hypergraph) -> bool {
        let edges = [&self.a, &self.b, &self.c, &self.d];
        if edges.iter().any(|e| !g.contains_edge(e)) {
            return false;
        }
        for i in 0..4 {
            for j in i + 1..4 {
                if edges[i] == edges[j] {
                    return false;
                }
            }
        }
        disjoint(&self.a, &self.b) && disjoint(&self.c, &self.d) && union(&self.a, &self.b) == union(&self.c, &self.d)
    }
}

pub(crate) fn disjoint(a: &[Vertex], b: &[Vertex]) -> bool {
    a.iter().all(|v| !b.contains(v))
}

fn union(a: &[Vertex], b: &[Vertex]) -> Vec<Vertex> {
    let mut u: Vec<Vertex> = a.iter().chain(b).copied().collect();
    u.sort_unstable();
    u.dedup();
    u
}

/// Lexicographically first family of `need` pairwise disjoint members of
/// `sets` (indices ascending), if any.
pub fn disjoint_family(sets: &[Vec<Vertex>], need: usize) -> Option<Vec<usize>> {
    fn go(
        sets: &[Vec<Vertex>],
        start: usize,
        need: usize,
        used: &mut Vec<Vertex>,
        chosen: &mut Vec<usize>,
    ) -> bool {
        if chosen.len() == need {
            return true;
        }
        let missing = need - chosen.len();
        for idx in start..sets.len() {
            if sets.len() - idx < missing {
                return false;
            }
            let set = &sets[idx];
            if set.iter().any(|v| used.contains(v)) {
                continue;
            }
            used.extend_from_slice(set);
            chosen.push(idx);
            if go(sets, idx + 1, need, used, chosen) {
                return true;
            }
            chosen.pop();
            used.truncate(used.len() - set.len());
        }
        false
    }
    let mut used = Vec::new();
    let mut chosen = Vec::new();
    go(sets, 0, need, &mut used, &mut chosen).then_some(chosen)
}

/// Size of a maximum family of pairwise disjoint sets.
pub fn max_disjoint_family_size(sets: &[Vec<Vertex>]) -> usize {
    let mut k = 0;
    while disjoint_family(sets, k + 1).is_some() {
        k += 1;
    }
    k
}

fn check_arity(g: &Hypergraph, params: PatternParams) -> Result<(), PatternError> {
    if params.r != g.r() {
        return Err(PatternError::ArityMismatch {
            pattern: params.r,
            host: g.r(),
        });
    }
    Ok(())
}

/// Finds the lexicographically least copy of `K_{s,t}^{(r)}` (least `Y`,
/// then least family of X sets), or `None` if the host is free.
pub fn find_kst(g: &Hypergraph, params: PatternParams) -> Result<Option<Embedding>, PatternError> {
    check_arity(g, params)?;
    if g.order() < params.vertex_count() || g.edge_count() < params.edge_count() {
        return Ok(None);
    }
    let candidates: Vec<Vertex> = g.vertices().filter(|&v| g.vertex_degree(v) >= params.t).collect();

    struct Search<'a> {
        g: &'a Hypergraph,
        params: PatternParams,
        candidates: Vec<Vertex>,
        y: Vec<Vertex>,
    }

    impl Search<'_> {
        fn extend(&mut self, start: usize, cn: &[Vec<Vertex>]) -> Option<Embedding> {
            if self.y.len() == self.params.s {
                let family = disjoint_family(cn, self.params.t)?;
                return Some(Embedding {
                    x_sets: family.into_iter().map(|i| cn[i].clone()).collect(),
                    y: self.y.clone(),
                    host_mode: HostMode::of(self.g),
                });
            }
            let remaining = self.params.s - self.y.len();
            for idx in start..self.candidates.len() {
                if self.candidates.len() - idx < remaining {
                    break;
                }
                let y = self.candidates[idx];
                let next: Vec<Vec<Vertex>> = if self.y.is_empty() {
                    self.g.link_unchecked(&[y])
                } else {
                    cn.iter()
                        .filter(|b| !b.contains(&y) && {
                            let mut e = (*b).clone();
                            e.push(y);
                            e.sort_unstable();
                            self.g.contains_edge(&e)
                        })
                        .cloned()
                        .collect()
                };
                // the common neighbourhood only shrinks as Y grows
                if next.len() < self.params.t || disjoint_family(&next, self.params.t).is_none() {
                    continue;
                }
                self.y.push(y);
                if let Some(found) = self.extend(idx + 1, &next) {
                    return Some(found);
                }
                self.y.pop();
            }
            None
        }
    }

    let mut search = Search {
        g,
        params,
        candidates,
        y: Vec::new(),
    };
    Ok(search.extend(0, &[]))
}

pub fn is_kst_free(g: &Hypergraph, params: PatternParams) -> Result<bool, PatternError> {
    Ok(find_kst(g, params)?.is_none())
}

/// The characterization checked directly: some s-set `Y` of the host has t
/// pairwise disjoint members in `CN(Y)`. Scans every s-set without the
/// pruning [`find_kst`] uses.
pub fn contains_kst_by_codegree(g: &Hypergraph, params: PatternParams) -> Result<bool, PatternError> {
    check_arity(g, params)?;
    if g.order() < params.s {
        return Ok(false);
    }
    Ok(g.vertices().combinations(params.s).any(|y| {
        let cn = crate::roots::common_neighborhood(g, &y).expect("valid s-set");
        disjoint_family(&cn, params.t).is_some()
    }))
}

/// Finds four distinct edges with `A ∪ B = C ∪ D` and `A ∩ B = C ∩ D = ∅`.
///
/// Disjoint edge pairs are scanned in index order and grouped by their
/// union; the first union reached by a second pair yields the witness.
pub fn find_erdos_quadruple(g: &Hypergraph) -> Option<Quadruple> {
    let edges = g.edges();
    let mut by_union: HashMap<Vec<Vertex>, (usize, usize)> = HashMap::new();
    for i in 0..edges.len() {
        for j in i + 1..edges.len() {
            if !disjoint(&edges[i], &edges[j]) {
                continue;
            }
            let u = union(&edges[i], &edges[j]);
            match by_union.get(&u) {
                Some(&(a, b)) => {
                    return Some(Quadruple {
                        a: edges[a].clone(),
                        b: edges[b].clone(),
                        c: edges[i].clone(),
                        d: edges[j].clone(),
                    })
                }
                None => {
                    by_union.insert(u, (i, j));
                }
            }
        }
    }
    None
}

/// The pattern `K_{s,t}^{(r)}` itself as a general hypergraph on
/// `t(r-1)+s` vertices: `X_i = {i(r-1), ..., i(r-1)+r-2}`, `Y` the last s ids.
pub fn kst_hypergraph(params: PatternParams) -> Hypergraph {
    let emb = canonical_kst_embedding(params);
    Hypergraph::new(params.r, vec![params.vertex_count()], emb.edges()).expect("pattern is a valid hypergraph")
}

pub fn canonical_kst_embedding(params: PatternParams) -> Embedding {
    let k = (params.r - 1) as Vertex;
    let x_sets = (0..params.t as Vertex)
        .map(|i| (i * k..(i + 1) * k).collect())
        .collect();
    let base = params.t as Vertex * k;
    Embedding {
        x_sets,
        y: (base..base + params.s as Vertex).collect(),
        host_mode: HostMode::General,
    }
}
