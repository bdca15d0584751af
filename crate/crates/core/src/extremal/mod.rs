//! Exact small Turán numbers, the four-edge problem, and constructions.

mod masks;
mod search;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use masks::Forbidden;

use crate::hypergraph::{Hypergraph, HypergraphError, Vertex};
use crate::patterns::{find_erdos_quadruple, is_kst_free, PatternParams};
use masks::{from_vertices, to_vertices, EdgeView, MaskSet};
use search::{search, Space};

pub const DEFAULT_BUDGET: u64 = 50_000_000;
pub const DEFAULT_WITNESS_LIMIT: usize = 8;
/// Largest vertex count searched in mode `all` unless raised.
pub const DEFAULT_ALL_CEILING: usize = 8;
/// Largest part size searched in mode `partite` unless raised.
pub const DEFAULT_PARTITE_CEILING: usize = 4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExtremalError {
    #[error("n = {n} exceeds the ceiling {ceiling}")]
    CeilingExceeded { n: usize, ceiling: usize },
    #[error("{0} candidate edges exceed the 128-bit search space")]
    TooManyCandidates(usize),
    #[error("need n > r, got n = {n}, r = {r}")]
    TooSmall { n: usize, r: usize },
    #[error("hosts are limited to 64 vertices, got {0}")]
    TooLarge(usize),
    #[error("forbidden pattern has uniformity {pattern}, host has {host}")]
    ArityMismatch { pattern: usize, host: usize },
    #[error("probability must lie in [0, 1], got {0}")]
    BadProbability(f64),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    /// All r-subsets of `n` vertices.
    All,
    /// Transversals of r parts of size `n`.
    Partite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOptions {
    /// Node budget; when exhausted the value is only a lower bound.
    pub budget: u64,
    pub witness_limit: usize,
    pub ceiling: Option<usize>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: DEFAULT_BUDGET,
            witness_limit: DEFAULT_WITNESS_LIMIT,
            ceiling: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    pub n: usize,
    pub r: usize,
    pub forbidden: Forbidden,
    pub mode: SearchMode,
    pub value: usize,
    /// Canonical extremal hypergraphs, sorted.
    pub witnesses: Vec<Hypergraph>,
    pub nodes_explored: u64,
    pub exhaustive: bool,
    pub symmetries: usize,
}

fn candidates(n: usize, r: usize, mode: SearchMode) -> (Vec<Vec<Vertex>>, Vec<usize>, Vec<Vec<Vertex>>) {
    match mode {
        SearchMode::All => (
            (0..n as Vertex).combinations(r).collect(),
            vec![n],
            vec![(0..n as Vertex).collect()],
        ),
        SearchMode::Partite => {
            let parts: Vec<Vec<Vertex>> = (0..r).map(|i| ((i * n) as Vertex..((i + 1) * n) as Vertex).collect()).collect();
            let cands = parts.iter().map(|p| p.iter().copied()).multi_cartesian_product().collect();
            (cands, vec![n; r], parts)
        }
    }
}

/// Whether `g` avoids `forbidden`, by the pattern module's detectors.
pub fn is_free(g: &Hypergraph, forbidden: Forbidden) -> bool {
    match forbidden {
        Forbidden::Kst(p) => is_kst_free(g, p).unwrap_or(false),
        Forbidden::Quadruple => find_erdos_quadruple(g).is_none(),
    }
}

fn exact(n: usize, r: usize, forbidden: Forbidden, mode: SearchMode, options: SearchOptions) -> Result<SearchResult, ExtremalError> {
    let ceiling = options.ceiling.unwrap_or(match mode {
        SearchMode::All => DEFAULT_ALL_CEILING,
        SearchMode::Partite => DEFAULT_PARTITE_CEILING,
    });
    if n > ceiling {
        return Err(ExtremalError::CeilingExceeded { n, ceiling });
    }
    let (cands, part_sizes, groups) = candidates(n, r, mode);
    if cands.len() > 128 {
        return Err(ExtremalError::TooManyCandidates(cands.len()));
    }
    let order: usize = part_sizes.iter().sum();
    if order == 0 {
        return Ok(SearchResult {
            n,
            r,
            forbidden,
            mode,
            value: 0,
            witnesses: vec![],
            nodes_explored: 0,
            exhaustive: true,
            symmetries: 1,
        });
    }
    let space = Space::new(r, order, cands.clone(), &groups);
    let outcome = search(&space, forbidden, options.budget, options.witness_limit);
    let witnesses: Vec<Hypergraph> = outcome
        .witnesses
        .iter()
        .map(|&set| {
            let edges = (0..cands.len()).filter(|&i| set >> i & 1 == 1).map(|i| cands[i].clone());
            Hypergraph::new(r, part_sizes.clone(), edges).expect("candidates are valid edges")
        })
        .collect();
    for w in &witnesses {
        assert!(is_free(w, forbidden), "search produced a non-free witness");
        assert_eq!(w.edge_count(), outcome.value);
    }
    Ok(SearchResult {
        n,
        r,
        forbidden,
        mode,
        value: outcome.value,
        witnesses,
        nodes_explored: outcome.nodes,
        exhaustive: outcome.exhaustive,
        symmetries: space.symmetry_count(),
    })
}

/// `ex(n, K_{s,t}^{(r)})` on `n` vertices (mode `All`) or on the r-partite
/// host with parts of size `n` (mode `Partite`).
pub fn turan_exact(n: usize, params: PatternParams, mode: SearchMode, options: SearchOptions) -> Result<SearchResult, ExtremalError> {
    exact(n, params.r, Forbidden::Kst(params), mode, options)
}

/// Largest r-graph on `n` vertices without four distinct edges
/// `A ∪ B = C ∪ D`, `A ∩ B = C ∩ D = ∅`.
pub fn erdos_fr_exact(n: usize, r: usize, options: SearchOptions) -> Result<SearchResult, ExtremalError> {
    if r < 2 {
        return Err(HypergraphError::InvalidUniformity(r).into());
    }
    exact(n, r, Forbidden::Quadruple, SearchMode::All, options)
}

/// All `C(n-1, r-1)` r-sets containing vertex 0.
pub fn construct_star(n: usize, r: usize) -> Result<Hypergraph, ExtremalError> {
    if n <= r {
        return Err(ExtremalError::TooSmall { n, r });
    }
    let edges = (1..n as Vertex).combinations(r - 1).map(|mut rest| {
        rest.insert(0, 0);
        rest
    });
    Ok(Hypergraph::new(r, vec![n], edges)?)
}

fn check_forbidden(r: usize, forbidden: Forbidden) -> Result<(), ExtremalError> {
    match forbidden {
        Forbidden::Kst(p) if p.r != r => Err(ExtremalError::ArityMismatch { pattern: p.r, host: r }),
        _ => Ok(()),
    }
}

fn greedy(mut cands: Vec<Vec<Vertex>>, order: usize, r: usize, forbidden: Forbidden, seed: u64) -> Vec<Vec<Vertex>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    cands.shuffle(&mut rng);
    let mut set = MaskSet::new(order);
    for c in cands {
        let e = from_vertices(&c);
        set.insert(e);
        if forbidden.through(&set as &dyn EdgeView, e, r) {
            set.remove_last(e);
        }
    }
    set.edges().iter().map(|&e| to_vertices(e)).collect()
}

/// Adds the r-subsets of `n` vertices in a seeded random order, keeping
/// each one that leaves the hypergraph free. The result is maximal free.
pub fn construct_random_maximal(n: usize, r: usize, forbidden: Forbidden, seed: u64) -> Result<Hypergraph, ExtremalError> {
    check_forbidden(r, forbidden)?;
    if n > 64 {
        return Err(ExtremalError::TooLarge(n));
    }
    let shell = Hypergraph::empty(r, vec![n])?;
    let cands: Vec<Vec<Vertex>> = (0..n as Vertex).combinations(r).collect();
    let edges = greedy(cands, shell.order(), r, forbidden, seed);
    Ok(Hypergraph::new(r, vec![n], edges)?)
}

/// Random greedy maximal free subgraph of the complete r-partite host.
pub fn construct_random_maximal_partite(part_sizes: Vec<usize>, forbidden: Forbidden, seed: u64) -> Result<Hypergraph, ExtremalError> {
    let shell = Hypergraph::empty(part_sizes.len(), part_sizes.clone())?;
    let r = shell.r();
    check_forbidden(r, forbidden)?;
    if shell.order() > 64 {
        return Err(ExtremalError::TooLarge(shell.order()));
    }
    let cands: Vec<Vec<Vertex>> = (0..r)
        .map(|i| shell.part_range(i))
        .multi_cartesian_product()
        .collect();
    let edges = greedy(cands, shell.order(), r, forbidden, seed);
    Ok(Hypergraph::new(r, part_sizes, edges)?)
}

/// Each r-subset of `n` vertices independently with probability `p`.
pub fn random_hypergraph(n: usize, r: usize, p: f64, seed: u64) -> Result<Hypergraph, ExtremalError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(ExtremalError::BadProbability(p));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<Vec<Vertex>> = (0..n as Vertex).combinations(r).filter(|_| rng.random_bool(p)).collect();
    Ok(Hypergraph::new(r, vec![n], edges)?)
}

/// Each transversal of the given parts independently with probability `p`.
pub fn random_partite(part_sizes: Vec<usize>, p: f64, seed: u64) -> Result<Hypergraph, ExtremalError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(ExtremalError::BadProbability(p));
    }
    let shell = Hypergraph::empty(part_sizes.len(), part_sizes.clone())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<Vec<Vertex>> = (0..shell.r())
        .map(|i| shell.part_range(i))
        .multi_cartesian_product()
        .filter(|_| rng.random_bool(p))
        .collect();
    Ok(Hypergraph::new(shell.r(), part_sizes, edges)?)
}
