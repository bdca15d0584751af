//! Constructive searches around a dense tuple: rooted s-sets inside `X`,
//! the bipartite reduction witness, and rooted pair counts.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::{
    balanced, codegree_through, dense_check_unchecked, full_tuple, heavy_ssets, heavy_vertices, link_vertices,
    ssets_through, BipartiteGraph, DensityError, DensityParams,
};
use crate::hypergraph::{Hypergraph, Vertex};
use crate::regularity::at_least;
use crate::roots::{root_set, RootMethod};

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

fn union_sorted(parts: &[&[Vertex]]) -> Vec<Vertex> {
    let mut out: Vec<Vertex> = parts.iter().flat_map(|p| p.iter().copied()).collect();
    out.sort_unstable();
    out
}

struct Setup {
    n: usize,
    tuple: Vec<Vertex>,
    v1: Vertex,
    link: Vec<Vertex>,
    xs: Vec<Vertex>,
}

fn setup(
    g: &Hypergraph,
    tuple: &[Vertex],
    xs: &[Vertex],
    source: usize,
    params: &DensityParams,
) -> Result<Setup, DensityError> {
    params.validate()?;
    let n = balanced(g)?;
    let (tuple, missing) = full_tuple(g, tuple)?;
    if source >= g.r() {
        return Err(DensityError::BadPartIndex {
            index: source,
            parts: g.r(),
        });
    }
    if source == missing {
        return Err(DensityError::SamePart(source));
    }
    let v1 = *tuple.iter().find(|&&w| g.part_of(w) == source).expect("full tuple");
    let link = link_vertices(g, &tuple);
    let mut xs = xs.to_vec();
    xs.sort_unstable();
    xs.dedup();
    if let Some(&v) = xs.iter().find(|v| link.binary_search(v).is_err()) {
        return Err(DensityError::VNotInLink { tuple, v });
    }
    Ok(Setup { n, tuple, v1, link, xs })
}

/// `𝒜(v)`: the s-sets `v ∈ S ⊆ N(T)` with `cd(S|v_1)` at the codegree
/// threshold; returns them with their union `A(v)`.
fn dense_family(g: &Hypergraph, link: &[Vertex], v: Vertex, v1: Vertex, n: usize, params: &DensityParams) -> (Vec<Vec<Vertex>>, Vec<Vertex>) {
    let threshold = params.codegree_threshold(n, g.r());
    let family: Vec<Vec<Vertex>> = ssets_through(link, v, params.s)
        .filter(|set| at_least(codegree_through(g, set, v1) as f64, threshold))
        .collect();
    let union: Vec<Vertex> = family.iter().flatten().copied().sorted().dedup().collect();
    (family, union)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootedSsets {
    pub tuple: Vec<Vertex>,
    pub v1: Vertex,
    /// Verified rooted on `v_1`.
    pub ssets: Vec<Vec<Vertex>>,
    /// Heavy s-sets that turned out not to be rooted on `v_1`.
    pub rejected: Vec<Vec<Vertex>>,
    pub u0: Option<Vertex>,
    pub x_prime: Vec<Vertex>,
    pub b_size: usize,
    pub rho: Option<String>,
    /// `n^{-sε-sδ}|X|^s/(3·s!·r^s)`.
    pub bound: f64,
    pub guarantee_met: bool,
}

/// Searches `X ⊆ N(T)` for s-sets rooted on `v_1 = T ∩ V_source`. Every
/// `v ∈ X` must have `(T; v)` dense on `v_1`, and `|X| ≥ C·n^{ε+δ}`.
///
/// Picks `u_0` lying in the most sets `A(v)` (ties to the smallest), sets
/// `X'` to those `v`, and runs the heavy s-set search on the bipartite graph
/// between `X'` and `ℬ = N({u_0, v_1})` whose edges `vB` mean
/// `{v, v_1} ∪ B ∈ G`. The density used is the exact density of that graph.
pub fn rooted_sset_search(
    g: &Hypergraph,
    tuple: &[Vertex],
    xs: &[Vertex],
    source: usize,
    params: &DensityParams,
) -> Result<RootedSsets, DensityError> {
    let Setup { n, tuple, v1, link, xs } = setup(g, tuple, xs, source, params)?;
    let s = params.s;
    let r = g.r();
    let bound = (n as f64).powf(-(s as f64) * (params.epsilon + params.delta)) * (xs.len() as f64).powi(s as i32)
        / (3.0 * factorial(s) * (r as f64).powi(s as i32));
    let mut out = RootedSsets {
        tuple: tuple.clone(),
        v1,
        ssets: Vec::new(),
        rejected: Vec::new(),
        u0: None,
        x_prime: Vec::new(),
        b_size: 0,
        rho: None,
        bound,
        guarantee_met: true,
    };
    if xs.is_empty() {
        return Ok(out);
    }
    for &v in &xs {
        if !dense_check_unchecked(g, tuple.clone(), &link, v, v1, n, params).dense {
            return Err(DensityError::NotDense { v });
        }
    }
    let needed = params.margin * (n as f64).powf(params.epsilon + params.delta);
    if !at_least(xs.len() as f64, needed) {
        return Err(DensityError::MarginTooSmall { size: xs.len(), needed });
    }
    let unions: Vec<Vec<Vertex>> = xs.iter().map(|&v| dense_family(g, &link, v, v1, n, params).1).collect();
    let (u0, _) = link
        .iter()
        .map(|&u| (u, unions.iter().filter(|a| a.binary_search(&u).is_ok()).count()))
        .fold((link[0], 0usize), |best, cur| if cur.1 > best.1 { cur } else { best });
    let x_prime: Vec<Vertex> = xs
        .iter()
        .zip(&unions)
        .filter(|(_, a)| a.binary_search(&u0).is_ok())
        .map(|(&v, _)| v)
        .collect();
    let mut pair = vec![u0, v1];
    pair.sort_unstable();
    let b_family = g.link_unchecked(&pair);
    let mut edges = Vec::new();
    for (a, &v) in x_prime.iter().enumerate() {
        for (b, set) in b_family.iter().enumerate() {
            if g.contains_edge(&union_sorted(&[&[v, v1], set])) {
                edges.push((a, b));
            }
        }
    }
    let h = BipartiteGraph::new(x_prime.len(), b_family.len(), edges)?;
    out.u0 = Some(u0);
    out.b_size = b_family.len();
    let rho = h.density().filter(|d| *d > Ratio::new(0, 1));
    let Some(rho) = rho else {
        out.x_prime = x_prime;
        out.guarantee_met = at_least(0.0, bound);
        return Ok(out);
    };
    out.rho = Some(rho.to_string());
    let heavy = heavy_ssets(&h, rho, s, params.margin)?;
    for idx in heavy.ssets {
        let set: Vec<Vertex> = idx.iter().map(|&i| x_prime[i]).collect();
        let report = root_set(g, &set, params.root_method, params.exact_budget)?;
        if report.is_rooted_on(v1) {
            out.ssets.push(set);
        } else {
            out.rejected.push(set);
        }
    }
    out.x_prime = x_prime;
    out.guarantee_met = at_least(out.ssets.len() as f64, bound);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdFlags {
    pub y_size: bool,
    pub z_size: bool,
    pub hits: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionWitness {
    pub tuple: Vec<Vertex>,
    pub source: usize,
    pub target: usize,
    pub v: Vertex,
    pub v1: Vertex,
    /// `A(v)`.
    pub a: Vec<Vertex>,
    pub b_size: usize,
    /// The (r-3)-tuple `R*`.
    pub r_tuple: Vec<Vertex>,
    pub z: Vec<Vertex>,
    pub y: Vec<Vertex>,
    /// `y ↦ |N({v_1, y} ∪ R*) ∩ Z|`.
    pub per_y_hits: BTreeMap<Vertex, usize>,
    pub rho: Option<String>,
    /// `n^{1-1/(s-1)-2ε-δ}/(2rα)`.
    pub y_bound: f64,
    /// `[n^{1-1/(s-1)-δ}, n^{1-1/(s-1)+ε}]`.
    pub z_window: (f64, f64),
    /// `n^{1-1/(s-1)-ε-2δ}/2`.
    pub hit_bound: f64,
    pub thresholds_met: ThresholdFlags,
}

fn hits(g: &Hypergraph, v1: Vertex, y: Vertex, r_tuple: &[Vertex], z: &[Vertex]) -> usize {
    z.iter()
        .filter(|&&zz| g.contains_edge(&union_sorted(&[&[v1, y, zz], r_tuple])))
        .count()
}

impl ReductionWitness {
    /// Recomputes `per_y_hits` from `g`.
    pub fn replays(&self, g: &Hypergraph) -> bool {
        let recomputed: BTreeMap<Vertex, usize> = self
            .y
            .iter()
            .map(|&y| (y, hits(g, self.v1, y, &self.r_tuple, &self.z)))
            .collect();
        recomputed == self.per_y_hits
    }
}

/// Builds the reduction witness for `v = min X`, `A = A(v)` and
/// `ℬ = N({v, v_1})`: groups `ℬ` by the (r-3)-tuple `R = B \ V_target`,
/// takes the `R*` with the most edges to `A`, sets
/// `Z = N({v, v_1} ∪ R*) ⊆ V_target`, and keeps as `Y` the heavy vertices of
/// the bipartite graph `(A, Z)` with `az` an edge iff `{v_1, a, z} ∪ R* ∈ G`.
pub fn bipartite_reduction_witness(
    g: &Hypergraph,
    tuple: &[Vertex],
    xs: &[Vertex],
    source: usize,
    target: usize,
    params: &DensityParams,
) -> Result<ReductionWitness, DensityError> {
    if xs.is_empty() {
        return Err(DensityError::EmptyX);
    }
    let Setup { n, tuple, v1, link, xs } = setup(g, tuple, xs, source, params)?;
    let missing = g.tuple(&tuple)?.missing_parts()[0];
    if target >= g.r() || target == source || target == missing {
        return Err(DensityError::BadTargetPart(target));
    }
    let s = params.s;
    let r = g.r() as f64;
    let nf = n as f64;
    let inv = 1.0 / (s as f64 - 1.0);
    let (eps, delta) = (params.epsilon, params.delta);
    let y_bound = nf.powf(1.0 - inv - 2.0 * eps - delta) / (2.0 * r * params.alpha);
    let z_window = (nf.powf(1.0 - inv - delta), nf.powf(1.0 - inv + eps));
    let hit_bound = nf.powf(1.0 - inv - eps - 2.0 * delta) / 2.0;

    let v = xs[0];
    let (_, a) = dense_family(g, &link, v, v1, n, params);
    let mut pair = vec![v, v1];
    pair.sort_unstable();
    let b_family = g.link_unchecked(&pair);
    let a_links: Vec<Vec<Vec<Vertex>>> = a
        .iter()
        .map(|&x| {
            let mut p = vec![x, v1];
            p.sort_unstable();
            g.link_unchecked(&p)
        })
        .collect();
    let mut weights: BTreeMap<Vec<Vertex>, usize> = BTreeMap::new();
    for b in &b_family {
        let rest: Vec<Vertex> = b.iter().copied().filter(|&w| g.part_of(w) != target).collect();
        let w = a_links.iter().filter(|lk| lk.binary_search(b).is_ok()).count();
        *weights.entry(rest).or_insert(0) += w;
    }
    let r_tuple = weights
        .iter()
        .fold(None::<(&Vec<Vertex>, usize)>, |best, (k, &w)| match best {
            Some((_, bw)) if bw >= w => best,
            _ => Some((k, w)),
        })
        .map(|(k, _)| k.clone())
        .unwrap_or_default();
    let z: Vec<Vertex> = if b_family.is_empty() {
        Vec::new()
    } else {
        link_vertices(g, &union_sorted(&[&pair, &r_tuple]))
    };
    let mut edges = Vec::new();
    for (ai, &x) in a.iter().enumerate() {
        for (zi, &zz) in z.iter().enumerate() {
            if g.contains_edge(&union_sorted(&[&[v1, x, zz], &r_tuple])) {
                edges.push((ai, zi));
            }
        }
    }
    let h = BipartiteGraph::new(a.len(), z.len(), edges)?;
    let rho = h.density().filter(|d| *d > Ratio::new(0, 1));
    let y: Vec<Vertex> = match rho {
        Some(rho) => heavy_vertices(&h, rho)?.vertices.into_iter().map(|i| a[i]).collect(),
        None => Vec::new(),
    };
    let per_y_hits: BTreeMap<Vertex, usize> = y.iter().map(|&yy| (yy, hits(g, v1, yy, &r_tuple, &z))).collect();
    let thresholds_met = ThresholdFlags {
        y_size: !y.is_empty() && at_least(y.len() as f64, y_bound),
        z_size: at_least(z.len() as f64, z_window.0) && at_least(z_window.1, z.len() as f64),
        hits: !y.is_empty() && per_y_hits.values().all(|&h| at_least(h as f64, hit_bound)),
    };
    Ok(ReductionWitness {
        tuple,
        source,
        target,
        v,
        v1,
        a,
        b_size: b_family.len(),
        r_tuple,
        z,
        y,
        per_y_hits,
        rho: rho.map(|r| r.to_string()),
        y_bound,
        z_window,
        hit_bound,
        thresholds_met,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootedPairCount {
    pub m: usize,
    /// `r·t·|Z|^s`.
    pub bound: u128,
    pub within: bool,
    pub pairs: Vec<(Vec<Vertex>, Vertex)>,
}

/// Counts pairs `(S, y)` with `S` an s-subset of `Z` and `y ∈ Y` a root of
/// `S` under the matching cover. In a partite host `Y` and `Z` must lie in
/// two distinct parts; in a general host they must be disjoint.
pub fn count_rooted_pairs(
    g: &Hypergraph,
    ys: &[Vertex],
    zs: &[Vertex],
    s: usize,
    t: usize,
) -> Result<RootedPairCount, DensityError> {
    let ys: Vec<Vertex> = ys.iter().copied().sorted().dedup().collect();
    let zs: Vec<Vertex> = zs.iter().copied().sorted().dedup().collect();
    if let Some(&w) = ys.iter().chain(&zs).find(|&&w| w as usize >= g.order()) {
        return Err(DensityError::Hypergraph(crate::hypergraph::HypergraphError::VertexOutOfRange {
            vertex: w,
            order: g.order(),
        }));
    }
    if g.is_partite() {
        let part = |set: &[Vertex]| -> Option<usize> {
            let p = g.part_of(*set.first()?);
            set.iter().all(|&w| g.part_of(w) == p).then_some(p)
        };
        match (part(&ys), part(&zs)) {
            (Some(a), Some(b)) if a == b => return Err(DensityError::SamePart(a)),
            (None, _) if !ys.is_empty() => return Err(DensityError::InvalidParams("Y must lie in one part".into())),
            (_, None) if !zs.is_empty() => return Err(DensityError::InvalidParams("Z must lie in one part".into())),
            _ => {}
        }
    } else if let Some(&w) = ys.iter().find(|w| zs.binary_search(w).is_ok()) {
        return Err(DensityError::SamePart(w as usize));
    }
    if s == 0 {
        return Err(DensityError::InvalidParams("s must be positive".into()));
    }
    let mut pairs = Vec::new();
    for set in zs.iter().copied().combinations(s) {
        let report = root_set(g, &set, RootMethod::Matching, 0)?;
        for &y in &ys {
            if report.is_rooted_on(y) {
                pairs.push((set.clone(), y));
            }
        }
    }
    let bound = (g.r() * t) as u128 * (zs.len() as u128).pow(s as u32);
    Ok(RootedPairCount {
        m: pairs.len(),
        within: pairs.len() as u128 <= bound,
        bound,
        pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::{kst_hypergraph, PatternParams};

    fn permissive(s: usize) -> DensityParams {
        DensityParams {
            codegree_threshold: Some(1.0),
            margin: 0.1,
            ..DensityParams::new(s, 0.1, 2.0)
        }
    }

    #[test]
    fn empty_x_search_is_vacuous() {
        let g = Hypergraph::complete_partite(vec![4, 4, 4]).unwrap();
        let out = rooted_sset_search(&g, &[0, 4], &[], 0, &permissive(2)).unwrap();
        assert!(out.ssets.is_empty());
        assert!(out.guarantee_met);
    }

    #[test]
    fn single_vertex_fails_default_margin() {
        let g = Hypergraph::complete_partite(vec![4, 4, 4]).unwrap();
        let params = DensityParams {
            codegree_threshold: Some(1.0),
            ..DensityParams::new(2, 0.1, 2.0)
        };
        assert!(matches!(
            rooted_sset_search(&g, &[0, 4], &[8], 0, &params),
            Err(DensityError::MarginTooSmall { size: 1, .. })
        ));
    }

    #[test]
    fn complete_partite_rooted_search() {
        let g = Hypergraph::complete_partite(vec![9, 9, 9]).unwrap();
        let params = permissive(3);
        let xs: Vec<Vertex> = (18..27).collect();
        let out = rooted_sset_search(&g, &[0, 9], &xs, 0, &params).unwrap();
        assert!(!out.ssets.is_empty());
        for set in &out.ssets {
            let report = root_set(&g, set, params.root_method, params.exact_budget).unwrap();
            assert!(report.is_rooted_on(0));
        }
    }

    #[test]
    fn reduction_on_three_parts() {
        let g = Hypergraph::complete_partite(vec![4, 4, 4]).unwrap();
        // T = (0, 8) misses part 1 and v1 = 0, so only part 2 is a valid target
        let params = DensityParams {
            epsilon: 0.5,
            delta: 0.0,
            ..permissive(3)
        };
        for bad in [0, 1, 3] {
            assert_eq!(
                bipartite_reduction_witness(&g, &[0, 8], &[4], 0, bad, &params).unwrap_err(),
                DensityError::BadTargetPart(bad)
            );
        }
        assert_eq!(
            bipartite_reduction_witness(&g, &[0, 8], &[], 0, 2, &params).unwrap_err(),
            DensityError::EmptyX
        );
        let w = bipartite_reduction_witness(&g, &[0, 8], &[4], 0, 2, &params).unwrap();
        assert!(w.r_tuple.is_empty());
        assert_eq!(w.z, vec![8, 9, 10, 11]);
        assert_eq!(w.y, vec![4, 5, 6, 7]);
        assert!(w.thresholds_met.y_size && w.thresholds_met.z_size && w.thresholds_met.hits);
        assert!(w.replays(&g));
    }

    #[test]
    fn complete_four_partite_witness() {
        let g = Hypergraph::complete_partite(vec![3, 3, 3, 3]).unwrap();
        // T = (0, 6, 9) misses part 1; v1 = 0, target part 2
        let params = DensityParams {
            epsilon: 1.0,
            delta: 0.0,
            ..permissive(2)
        };
        let w = bipartite_reduction_witness(&g, &[0, 6, 9], &[3, 4], 0, 2, &params).unwrap();
        assert_eq!(w.v, 3);
        assert_eq!(w.a, vec![3, 4, 5]);
        assert_eq!(w.r_tuple, vec![9]);
        assert_eq!(w.z, vec![6, 7, 8]);
        assert_eq!(w.y, vec![3, 4, 5]);
        assert!(w.per_y_hits.values().all(|&h| h == 3));
        assert!(w.thresholds_met.y_size && w.thresholds_met.z_size && w.thresholds_met.hits);
        assert!(w.replays(&g));
    }

    #[test]
    fn sparse_witness_reports_flags() {
        // T = (0, 8) has link {4, 5}: too few vertices for any 3-set
        let g = Hypergraph::new(3, vec![4, 4, 4], [[0, 4, 8], [0, 5, 8], [0, 5, 9]]).unwrap();
        let params = DensityParams::new(3, 0.1, 2.0);
        let w = bipartite_reduction_witness(&g, &[0, 8], &[5], 0, 2, &params).unwrap();
        assert!(w.a.is_empty());
        assert_eq!(w.z, vec![8, 9]);
        assert!(!w.thresholds_met.y_size);
        assert!(w.replays(&g));

        let g4 = Hypergraph::new(4, vec![3, 3, 3, 3], [[0, 3, 6, 9], [0, 4, 6, 9], [0, 4, 7, 10]]).unwrap();
        let w = bipartite_reduction_witness(&g4, &[0, 6, 9], &[4], 0, 2, &DensityParams::new(2, 0.1, 2.0)).unwrap();
        assert!(w.replays(&g4));
        assert!(!(w.thresholds_met.y_size && w.thresholds_met.z_size && w.thresholds_met.hits));
    }

    #[test]
    fn pair_counts() {
        let g = Hypergraph::complete_partite(vec![3, 3, 3]).unwrap();
        let small = count_rooted_pairs(&g, &[0, 1], &[6], 2, 2).unwrap();
        assert_eq!(small.m, 0);
        assert!(matches!(count_rooted_pairs(&g, &[0], &[1], 2, 2), Err(DensityError::SamePart(0))));

        let params = PatternParams::new(3, 2, 2).unwrap();
        let kst = kst_hypergraph(params);
        // X_1 = {0, 1}, X_2 = {2, 3}, Y = {4, 5}: S = Y has CN = {01, 23}
        let out = count_rooted_pairs(&kst, &[0, 1, 2, 3], &[4, 5], 2, 2).unwrap();
        assert_eq!(out.m, 4);
        assert!(out.within);
        for (set, y) in &out.pairs {
            let report = root_set(&kst, set, RootMethod::Matching, 0).unwrap();
            assert!(report.is_rooted_on(*y));
        }
    }
}
