//! Averaging over bipartite graphs `(A, B)` with density at least `ρ`.
//!
//! All thresholds are compared in exact rational arithmetic.

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BipartiteError {
    #[error("edge ({a}, {b}) outside {a_size} x {b_size}")]
    OutOfRange { a: usize, b: usize, a_size: usize, b_size: usize },
    #[error("edge ({0}, {1}) listed twice")]
    DuplicateEdge(usize, usize),
    #[error("density precondition failed: {edges} edges < rho * {a_size} * {b_size} (rho = {rho})")]
    DensityPreconditionFailed {
        edges: usize,
        a_size: usize,
        b_size: usize,
        rho: String,
    },
    #[error("margin too small: rho*|A| = {lhs} < C*s = {rhs}")]
    MarginTooSmall { lhs: f64, rhs: f64 },
}

/// Simple bipartite graph with sides `0..a_size` and `0..b_size`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    a_size: usize,
    b_size: usize,
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

impl BipartiteGraph {
    pub fn new(
        a_size: usize,
        b_size: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, BipartiteError> {
        let mut adjacency = vec![Vec::new(); a_size];
        for (a, b) in edges {
            if a >= a_size || b >= b_size {
                return Err(BipartiteError::OutOfRange { a, b, a_size, b_size });
            }
            adjacency[a].push(b);
        }
        let mut edge_count = 0;
        for (a, nbrs) in adjacency.iter_mut().enumerate() {
            nbrs.sort_unstable();
            if let Some(w) = nbrs.windows(2).find(|w| w[0] == w[1]) {
                return Err(BipartiteError::DuplicateEdge(a, w[0]));
            }
            edge_count += nbrs.len();
        }
        Ok(BipartiteGraph {
            a_size,
            b_size,
            adjacency,
            edge_count,
        })
    }

    pub fn a_size(&self) -> usize {
        self.a_size
    }

    pub fn b_size(&self) -> usize {
        self.b_size
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, a: usize) -> &[usize] {
        &self.adjacency[a]
    }

    pub fn degree(&self, a: usize) -> usize {
        self.adjacency[a].len()
    }

    /// Exact density `e / (|A||B|)`; `None` when a side is empty.
    pub fn density(&self) -> Option<Ratio<u64>> {
        let cells = (self.a_size * self.b_size) as u64;
        (cells > 0).then(|| Ratio::new(self.edge_count as u64, cells))
    }

    /// Number of common neighbours of the vertices in `set ⊆ A`.
    pub fn common_degree(&self, set: &[usize]) -> usize {
        let Some((&first, rest)) = set.split_first() else {
            return self.b_size;
        };
        self.adjacency[first]
            .iter()
            .filter(|b| rest.iter().all(|&a| self.adjacency[a].binary_search(b).is_ok()))
            .count()
    }
}

fn big(ratio: Ratio<u64>) -> BigRational {
    BigRational::new(BigInt::from(*ratio.numer()), BigInt::from(*ratio.denom()))
}

fn int(x: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn factorial(s: usize) -> BigRational {
    (1..=s).fold(BigRational::one(), |acc, k| acc * int(k))
}

fn check_density(g: &BipartiteGraph, rho: Ratio<u64>) -> Result<BigRational, BipartiteError> {
    let rho_big = big(rho);
    let fail = || BipartiteError::DensityPreconditionFailed {
        edges: g.edge_count,
        a_size: g.a_size,
        b_size: g.b_size,
        rho: rho.to_string(),
    };
    if rho_big <= BigRational::zero() || rho_big > BigRational::one() {
        return Err(fail());
    }
    if int(g.edge_count) < rho_big.clone() * int(g.a_size) * int(g.b_size) {
        return Err(fail());
    }
    Ok(rho_big)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeavyVertices {
    pub vertices: Vec<usize>,
    /// `ρ|B|/2` as a reduced fraction string.
    pub degree_cutoff: String,
    /// `ρ|A|/2` as a reduced fraction string.
    pub count_bound: String,
    pub guarantee_met: bool,
}

/// Every `a ∈ A` with `|N(a)| ≥ ρ|B|/2`; there are at least `ρ|A|/2` of
/// them whenever `e ≥ ρ|A||B|`. Requires `0 < ρ ≤ 1`.
pub fn heavy_vertices(g: &BipartiteGraph, rho: Ratio<u64>) -> Result<HeavyVertices, BipartiteError> {
    let rho = check_density(g, rho)?;
    let two = int(2);
    let cutoff = rho.clone() * int(g.b_size) / two.clone();
    let vertices: Vec<usize> = (0..g.a_size).filter(|&a| int(g.degree(a)) >= cutoff).collect();
    let count_bound = rho * int(g.a_size) / two;
    let guarantee_met = int(vertices.len()) >= count_bound;
    Ok(HeavyVertices {
        vertices,
        degree_cutoff: cutoff.to_string(),
        count_bound: count_bound.to_string(),
        guarantee_met,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeavySsets {
    pub ssets: Vec<Vec<usize>>,
    /// `ρ^s|B|/3`.
    pub common_cutoff: String,
    /// `(ρ|A|)^s/(3·s!)`.
    pub count_bound: String,
    pub guarantee_met: bool,
}

/// Every s-set of `A` with at least `ρ^s|B|/3` common neighbours.
///
/// `margin` replaces the asymptotic "ρ|A| much larger than s": the call
/// fails unless `ρ|A| ≥ margin·s`. The count guarantee is reported, not
/// asserted.
pub fn heavy_ssets(
    g: &BipartiteGraph,
    rho: Ratio<u64>,
    s: usize,
    margin: f64,
) -> Result<HeavySsets, BipartiteError> {
    let rho = check_density(g, rho)?;
    let lhs = (rho.clone() * int(g.a_size)).to_f64().unwrap_or(f64::INFINITY);
    let rhs = margin * s as f64;
    if lhs < rhs {
        return Err(BipartiteError::MarginTooSmall { lhs, rhs });
    }
    let rho_s = num_traits::pow(rho.clone(), s);
    let cutoff = rho_s * int(g.b_size) / int(3);
    let ssets: Vec<Vec<usize>> = (0..g.a_size)
        .combinations(s)
        .filter(|set| int(g.common_degree(set)) >= cutoff)
        .collect();
    let count_bound = num_traits::pow(rho * int(g.a_size), s) / (int(3) * factorial(s));
    let guarantee_met = int(ssets.len()) >= count_bound;
    Ok(HeavySsets {
        ssets,
        common_cutoff: cutoff.to_string(),
        count_bound: count_bound.to_string(),
        guarantee_met,
    })
}
