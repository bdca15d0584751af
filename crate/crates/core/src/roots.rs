//! Common neighbourhoods, codegrees and root sets.
//!
//! For an s-set `S`, `CN(S)` is the family of (r-1)-sets lying in the link
//! of every vertex of `S`. Its roots are a vertex cover of `CN(S)`. Two covers
//! are offered: the vertex union of a greedy maximal matching, which is what
//! the `< rt` root bound for `K_{s,t}`-free hosts is proved with, and an exact
//! minimum cover with a lexicographically least tie-break.

use std::collections::BTreeMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{Hypergraph, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootError {
    #[error("invalid vertex set {set:?}: {reason}")]
    InvalidSet { set: Vec<Vertex>, reason: String },
    #[error("vertex {0} lies in the subject set")]
    UNotOutsideS(Vertex),
    #[error("common neighbourhood has {size} members, exact cover budget is {budget}")]
    ExactCoverTooLarge { size: usize, budget: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum RootMethod {
    #[default]
    Matching,
    Exact,
}

/// Default cap on `|CN(S)|` for the exact cover search.
pub const DEFAULT_EXACT_BUDGET: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootReport {
    pub subject: Vec<Vertex>,
    pub cn_size: usize,
    pub matching: Vec<Vec<Vertex>>,
    pub roots: Vec<Vertex>,
    pub method: RootMethod,
    pub per_root_codegrees: BTreeMap<Vertex, usize>,
}

impl RootReport {
    pub fn is_rooted_on(&self, v: Vertex) -> bool {
        self.roots.binary_search(&v).is_ok()
    }
}

fn validate_set(g: &Hypergraph, set: &[Vertex]) -> Result<Vec<Vertex>, RootError> {
    let invalid = |reason: &str| RootError::InvalidSet {
        set: set.to_vec(),
        reason: reason.to_string(),
    };
    if set.is_empty() {
        return Err(invalid("empty"));
    }
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(invalid("repeated vertex"));
    }
    if sorted.iter().any(|&v| v as usize >= g.order()) {
        return Err(invalid("vertex out of range"));
    }
    Ok(sorted)
}

/// `CN(S)`, lexicographically sorted. Members automatically avoid `S`.
pub fn common_neighborhood(g: &Hypergraph, set: &[Vertex]) -> Result<Vec<Vec<Vertex>>, RootError> {
    let set = validate_set(g, set)?;
    Ok(common_neighborhood_unchecked(g, &set))
}

pub(crate) fn common_neighborhood_unchecked(g: &Hypergraph, set: &[Vertex]) -> Vec<Vec<Vertex>> {
    let (&first, rest) = set.split_first().expect("nonempty set");
    let mut scratch = Vec::with_capacity(g.r());
    g.link_unchecked(&[first])
        .into_iter()
        .filter(|b| {
            rest.iter().all(|&v| {
                if b.contains(&v) {
                    return false;
                }
                scratch.clear();
                scratch.extend_from_slice(b);
                scratch.push(v);
                scratch.sort_unstable();
                g.contains_edge(&scratch)
            })
        })
        .collect()
}

pub fn codegree(g: &Hypergraph, set: &[Vertex]) -> Result<usize, RootError> {
    Ok(common_neighborhood(g, set)?.len())
}

/// `cd(S|u)`: members of `CN(S)` containing `u`.
pub fn codegree_at(g: &Hypergraph, set: &[Vertex], u: Vertex) -> Result<usize, RootError> {
    let cn = common_neighborhood(g, set)?;
    if set.contains(&u) {
        return Err(RootError::UNotOutsideS(u));
    }
    Ok(count_through(&cn, u))
}

pub(crate) fn count_through(cn: &[Vec<Vertex>], u: Vertex) -> usize {
    cn.iter().filter(|b| b.contains(&u)).count()
}

/// Maximal pairwise-disjoint subfamily, scanning `sets` in the given order.
pub fn greedy_matching(sets: &[Vec<Vertex>]) -> Vec<Vec<Vertex>> {
    let mut used: Vec<Vertex> = Vec::new();
    let mut out = Vec::new();
    for set in sets {
        if set.iter().all(|v| !used.contains(v)) {
            used.extend_from_slice(set);
            out.push(set.clone());
        }
    }
    out
}

pub fn is_vertex_cover(cover: &[Vertex], sets: &[Vec<Vertex>]) -> bool {
    sets.iter().all(|b| b.iter().any(|v| cover.contains(v)))
}

/// Lexicographically least minimum vertex cover of `sets`.
pub fn minimum_vertex_cover(sets: &[Vec<Vertex>]) -> Vec<Vertex> {
    if sets.is_empty() {
        return Vec::new();
    }
    let candidates: Vec<Vertex> = sets.iter().flatten().copied().sorted().dedup().collect();
    let lower = greedy_matching(sets).len();
    for k in lower..=candidates.len() {
        if let Some(cover) = least_cover_of_size(sets, &candidates, k) {
            return cover;
        }
    }
    unreachable!("the full candidate set is a cover")
}

/// DFS over k-subsets of `candidates` in lexicographic order. A set whose
/// vertices all lie before the next candidate and is still uncovered kills
/// the branch.
fn least_cover_of_size(sets: &[Vec<Vertex>], candidates: &[Vertex], k: usize) -> Option<Vec<Vertex>> {
    fn go(
        sets: &[Vec<Vertex>],
        candidates: &[Vertex],
        k: usize,
        start: usize,
        chosen: &mut Vec<Vertex>,
    ) -> bool {
        let bound = candidates.get(start).copied().unwrap_or(Vertex::MAX);
        let dead = sets.iter().any(|b| {
            *b.iter().max().unwrap() < bound && !b.iter().any(|v| chosen.contains(v))
        });
        if dead {
            return false;
        }
        if chosen.len() == k {
            return is_vertex_cover(chosen, sets);
        }
        for idx in start..candidates.len() {
            if candidates.len() - idx < k - chosen.len() {
                break;
            }
            chosen.push(candidates[idx]);
            if go(sets, candidates, k, idx + 1, chosen) {
                return true;
            }
            chosen.pop();
            // skipping candidates[idx]: sets whose max vertex is it must be covered already
            let skipped = candidates[idx];
            let stranded = sets.iter().any(|b| {
                *b.iter().max().unwrap() <= skipped && !b.iter().any(|v| chosen.contains(v))
            });
            if stranded {
                return false;
            }
        }
        false
    }
    let mut chosen = Vec::with_capacity(k);
    go(sets, candidates, k, 0, &mut chosen).then_some(chosen)
}

/// Root set of `S` by the given method.
pub fn root_set(
    g: &Hypergraph,
    set: &[Vertex],
    method: RootMethod,
    exact_budget: usize,
) -> Result<RootReport, RootError> {
    let subject = validate_set(g, set)?;
    let cn = common_neighborhood_unchecked(g, &subject);
    root_report_from_cn(subject, &cn, method, exact_budget)
}

pub(crate) fn root_report_from_cn(
    subject: Vec<Vertex>,
    cn: &[Vec<Vertex>],
    method: RootMethod,
    exact_budget: usize,
) -> Result<RootReport, RootError> {
    let matching = greedy_matching(cn);
    let roots: Vec<Vertex> = match method {
        RootMethod::Matching => matching.iter().flatten().copied().sorted().collect(),
        RootMethod::Exact => {
            if cn.len() > exact_budget {
                return Err(RootError::ExactCoverTooLarge {
                    size: cn.len(),
                    budget: exact_budget,
                });
            }
            minimum_vertex_cover(cn)
        }
    };
    debug_assert!(is_vertex_cover(&roots, cn));
    let per_root_codegrees = roots.iter().map(|&u| (u, count_through(cn, u))).collect();
    Ok(RootReport {
        subject,
        cn_size: cn.len(),
        matching,
        roots,
        method,
        per_root_codegrees,
    })
}

/// Both covers of `S` side by side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootComparison {
    pub matching: RootReport,
    pub exact: Option<RootReport>,
    pub methods_differ: bool,
}

pub fn compare_root_methods(g: &Hypergraph, set: &[Vertex], exact_budget: usize) -> Result<RootComparison, RootError> {
    let matching = root_set(g, set, RootMethod::Matching, exact_budget)?;
    let exact = match root_set(g, set, RootMethod::Exact, exact_budget) {
        Ok(report) => Some(report),
        Err(RootError::ExactCoverTooLarge { .. }) => None,
        Err(e) => return Err(e),
    };
    let methods_differ = exact.as_ref().is_some_and(|e| e.roots != matching.roots);
    Ok(RootComparison {
        matching,
        exact,
        methods_differ,
    })
}

/// Violations of the degree and codegree ceilings derived from a uniform
/// cap `Δ` on (r-1)-tuple degrees in a balanced r-partite host:
/// `d(A) ≤ Δ·n^{r-k-1}` for every k-tuple, and, when the host is
/// `K_{s,t}`-free, `cd(S) ≤ r·t·Δ·n^{r-3}` for every s-set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetDegreeReport {
    pub delta: usize,
    pub part_size: usize,
    pub tuples_checked: usize,
    pub ssets_checked: usize,
    pub tuple_violations: Vec<(Vec<Vertex>, usize, u128)>,
    pub codegree_violations: Vec<(Vec<Vertex>, usize, u128)>,
}

impl SetDegreeReport {
    pub fn ok(&self) -> bool {
        self.tuple_violations.is_empty() && self.codegree_violations.is_empty()
    }
}

/// Checks the set-degree bounds. `codegree_pattern` is `Some((s, t))` when the
/// host is known to be `K_{s,t}`-free; the codegree bound is then checked over
/// every s-set. Returns `None` unless the host is balanced r-partite, r ≥ 3.
pub fn check_set_degree_bounds(g: &Hypergraph, codegree_pattern: Option<(usize, usize)>) -> Option<SetDegreeReport> {
    let n = g.balanced_part_size()?;
    let r = g.r();
    if r < 3 {
        return None;
    }
    let delta = g.max_tuple_degree();
    let mut report = SetDegreeReport {
        delta,
        part_size: n,
        tuples_checked: 0,
        ssets_checked: 0,
        tuple_violations: Vec::new(),
        codegree_violations: Vec::new(),
    };
    for k in 1..r {
        let ktuples: Vec<Vec<Vertex>> = g
            .edges()
            .iter()
            .flat_map(|e| e.iter().copied().combinations(k))
            .sorted()
            .dedup()
            .collect();
        let bound = delta as u128 * (n as u128).pow((r - k - 1) as u32);
        for a in ktuples {
            report.tuples_checked += 1;
            let d = g.degree_unchecked(&a);
            if d as u128 > bound {
                report.tuple_violations.push((a, d, bound));
            }
        }
    }
    if let Some((s, t)) = codegree_pattern {
        let bound = (r * t) as u128 * delta as u128 * (n as u128).pow((r - 3) as u32);
        for set in g.vertices().combinations(s) {
            report.ssets_checked += 1;
            let cd = common_neighborhood_unchecked(g, &set).len();
            if cd as u128 > bound {
                report.codegree_violations.push((set, cd, bound));
            }
        }
    }
    Some(report)
}
