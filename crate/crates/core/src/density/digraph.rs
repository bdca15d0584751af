//! The digraph on parts whose arcs are found dense arrows.

use serde::{Deserialize, Serialize};

use super::{find_dense_arrow, DenseArrow, DensityError, DensityParams};
use crate::hypergraph::Hypergraph;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartFailure {
    pub target: usize,
    pub error: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DenseDigraph {
    pub nodes: usize,
    /// `(source, target)` pairs, sorted.
    pub arcs: Vec<(usize, usize)>,
    pub witnesses: Vec<DenseArrow>,
    pub failures: Vec<PartFailure>,
}

impl DenseDigraph {
    /// A bare digraph on `nodes` parts with the given arcs.
    pub fn from_arcs(nodes: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut arcs: Vec<(usize, usize)> = arcs.into_iter().collect();
        assert!(
            arcs.iter().all(|&(i, j)| i != j && i < nodes && j < nodes),
            "arcs must join distinct existing nodes"
        );
        arcs.sort_unstable();
        arcs.dedup();
        DenseDigraph {
            nodes,
            arcs,
            witnesses: Vec::new(),
            failures: Vec::new(),
        }
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.nodes];
        for &(_, j) in &self.arcs {
            deg[j] += 1;
        }
        deg
    }

    /// Every node has an incoming arc.
    pub fn check_property_i(&self) -> bool {
        self.in_degrees().iter().all(|&d| d > 0)
    }

    /// The lexicographically first path `i → j → k` on three distinct nodes,
    /// or `None` when no such path exists.
    pub fn property_ii_violation(&self) -> Option<[usize; 3]> {
        for &(i, j) in &self.arcs {
            for &(j2, k) in &self.arcs {
                if j2 == j && k != i {
                    return Some([i, j, k]);
                }
            }
        }
        None
    }

    pub fn check_property_ii(&self) -> bool {
        self.property_ii_violation().is_none()
    }

    pub fn verdicts(&self) -> DigraphVerdicts {
        DigraphVerdicts {
            property_i: self.check_property_i(),
            property_ii: self.check_property_ii(),
            property_ii_path: self.property_ii_violation(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigraphVerdicts {
    pub property_i: bool,
    pub property_ii: bool,
    pub property_ii_path: Option<[usize; 3]>,
}

/// Runs [`find_dense_arrow`] for each target part in order; failures are
/// recorded rather than returned.
pub fn build_dense_digraph(
    g: &Hypergraph,
    params: &DensityParams,
    require_regular: bool,
) -> Result<DenseDigraph, DensityError> {
    params.validate()?;
    super::balanced(g)?;
    let mut witnesses = Vec::new();
    let mut failures = Vec::new();
    for target in 0..g.r() {
        match find_dense_arrow(g, target, params, require_regular) {
            Ok(arrow) => witnesses.push(arrow),
            Err(e) => failures.push(PartFailure {
                target,
                error: e.to_string(),
            }),
        }
    }
    let mut digraph = DenseDigraph::from_arcs(g.r(), witnesses.iter().map(|w| (w.source, w.target)));
    digraph.witnesses = witnesses;
    digraph.failures = failures;
    Ok(digraph)
}
