//! Uniform hypergraphs, general or r-partite, with canonical edge storage.
//!
//! Vertices carry global 0-based ids. Part membership follows from the
//! cumulative part ranges: part `i` owns ids `offsets[i]..offsets[i + 1]`.
//! A hypergraph with a single part is a general (non-partite) hypergraph;
//! one with exactly `r` parts is r-partite and every edge must be a
//! transversal.

mod io;

use std::fmt;

use fixedbitset::FixedBitSet;
use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use io::ParseError;

pub type Vertex = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HypergraphError {
    #[error("uniformity must be at least 2, got {0}")]
    InvalidUniformity(usize),
    #[error("{parts} parts given for uniformity {r}; expected 1 (general) or {r} (partite)")]
    InvalidPartCount { r: usize, parts: usize },
    #[error("part {0} is empty")]
    EmptyPart(usize),
    #[error("edge {edge:?} has {got} vertices, expected {expected}")]
    WrongArity { edge: Vec<Vertex>, got: usize, expected: usize },
    #[error("vertex {vertex} is outside 0..{order}")]
    VertexOutOfRange { vertex: Vertex, order: usize },
    #[error("edge {0:?} repeats a vertex")]
    RepeatedVertex(Vec<Vertex>),
    #[error("edge {0:?} does not take exactly one vertex from each part")]
    NonTransversalEdge(Vec<Vertex>),
    #[error("edge {0:?} appears twice")]
    DuplicateEdge(Vec<Vertex>),
    #[error("invalid tuple {tuple:?}: {reason}")]
    InvalidTuple { tuple: Vec<Vertex>, reason: String },
    #[error("part index {index} out of range for {parts} parts")]
    BadPartIndex { index: usize, parts: usize },
    #[error("operation requires an r-partite hypergraph")]
    NotPartite,
    #[error("edge {0:?} is not in the hypergraph")]
    UnknownEdge(Vec<Vertex>),
}

/// A vertex set with at most one vertex per part, of size `1..=r-1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Tuple {
    vertices: Vec<Vertex>,
    missing_parts: Vec<usize>,
}

impl Tuple {
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// Part indices not covered by the tuple. Empty in general mode.
    pub fn missing_parts(&self) -> &[usize] {
        &self.missing_parts
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

#[derive(Clone)]
pub struct Hypergraph {
    r: usize,
    part_sizes: Vec<usize>,
    offsets: Vec<Vertex>,
    edges: Vec<Vec<Vertex>>,
    incidence: Vec<FixedBitSet>,
}

impl PartialEq for Hypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.r == other.r && self.part_sizes == other.part_sizes && self.edges == other.edges
    }
}

impl Eq for Hypergraph {}

impl fmt::Debug for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Hypergraph")
            .field("r", &self.r)
            .field("part_sizes", &self.part_sizes)
            .field("edges", &self.edges)
            .finish()
    }
}

#[derive(Serialize, Deserialize)]
struct HypergraphRepr {
    r: usize,
    part_sizes: Vec<usize>,
    edges: Vec<Vec<Vertex>>,
}

impl Serialize for Hypergraph {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        HypergraphRepr {
            r: self.r,
            part_sizes: self.part_sizes.clone(),
            edges: self.edges.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Hypergraph {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = HypergraphRepr::deserialize(deserializer)?;
        Hypergraph::new(repr.r, repr.part_sizes, repr.edges).map_err(serde::de::Error::custom)
    }
}

impl Hypergraph {
    /// Builds a canonical hypergraph. Each edge is sorted; the edge list is
    /// sorted lexicographically. Duplicates are rejected rather than merged.
    pub fn new<E>(r: usize, part_sizes: Vec<usize>, edges: E) -> Result<Self, HypergraphError>
    where
        E: IntoIterator,
        E::Item: AsRef<[Vertex]>,
    {
        if r < 2 {
            return Err(HypergraphError::InvalidUniformity(r));
        }
        if part_sizes.len() != 1 && part_sizes.len() != r {
            return Err(HypergraphError::InvalidPartCount {
                r,
                parts: part_sizes.len(),
            });
        }
        if let Some(i) = part_sizes.iter().position(|&n| n == 0) {
            return Err(HypergraphError::EmptyPart(i));
        }
        let mut offsets = Vec::with_capacity(part_sizes.len() + 1);
        offsets.push(0);
        for &n in &part_sizes {
            offsets.push(offsets.last().unwrap() + n as Vertex);
        }
        let mut g = Hypergraph {
            r,
            part_sizes,
            offsets,
            edges: Vec::new(),
            incidence: Vec::new(),
        };
        let mut canonical = Vec::new();
        for edge in edges {
            canonical.push(g.canonical_edge(edge.as_ref())?);
        }
        canonical.sort();
        if let Some(w) = canonical.windows(2).find(|w| w[0] == w[1]) {
            return Err(HypergraphError::DuplicateEdge(w[0].clone()));
        }
        g.edges = canonical;
        g.rebuild_incidence();
        Ok(g)
    }

    /// Empty hypergraph on the given parts.
    pub fn empty(r: usize, part_sizes: Vec<usize>) -> Result<Self, HypergraphError> {
        Self::new(r, part_sizes, std::iter::empty::<Vec<Vertex>>())
    }

    /// Complete r-partite hypergraph with the given part sizes.
    pub fn complete_partite(part_sizes: Vec<usize>) -> Result<Self, HypergraphError> {
        let r = part_sizes.len();
        let g = Self::empty(r, part_sizes)?;
        let ranges: Vec<_> = (0..r).map(|i| g.part_range(i)).collect();
        let edges: Vec<Vec<Vertex>> = ranges.into_iter().multi_cartesian_product().collect();
        Self::new(r, g.part_sizes, edges)
    }

    /// Complete r-uniform hypergraph on `n` vertices (general mode).
    pub fn complete(n: usize, r: usize) -> Result<Self, HypergraphError> {
        let edges: Vec<Vec<Vertex>> = (0..n as Vertex).combinations(r).collect();
        Self::new(r, vec![n.max(1)], edges)
    }

    fn canonical_edge(&self, edge: &[Vertex]) -> Result<Vec<Vertex>, HypergraphError> {
        if edge.len() != self.r {
            return Err(HypergraphError::WrongArity {
                edge: edge.to_vec(),
                got: edge.len(),
                expected: self.r,
            });
        }
        let order = self.order();
        if let Some(&v) = edge.iter().find(|&&v| v as usize >= order) {
            return Err(HypergraphError::VertexOutOfRange { vertex: v, order });
        }
        let mut sorted = edge.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(HypergraphError::RepeatedVertex(sorted));
        }
        if self.is_partite() {
            // sorted ids of a transversal visit parts 0, 1, ..., r-1 in order
            let transversal = sorted.iter().enumerate().all(|(i, &v)| self.part_of(v) == i);
            if !transversal {
                return Err(HypergraphError::NonTransversalEdge(sorted));
            }
        }
        Ok(sorted)
    }

    fn rebuild_incidence(&mut self) {
        let m = self.edges.len();
        let mut incidence = vec![FixedBitSet::with_capacity(m); self.order()];
        for (idx, e) in self.edges.iter().enumerate() {
            for &v in e {
                incidence[v as usize].insert(idx);
            }
        }
        self.incidence = incidence;
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn part_sizes(&self) -> &[usize] {
        &self.part_sizes
    }

    pub fn num_parts(&self) -> usize {
        self.part_sizes.len()
    }

    pub fn is_partite(&self) -> bool {
        self.part_sizes.len() == self.r
    }

    /// Common part size if the hypergraph is balanced r-partite.
    pub fn balanced_part_size(&self) -> Option<usize> {
        if !self.is_partite() {
            return None;
        }
        let n = self.part_sizes[0];
        self.part_sizes.iter().all(|&m| m == n).then_some(n)
    }

    pub fn order(&self) -> usize {
        *self.offsets.last().unwrap() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<Vertex>] {
        &self.edges
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.order() as Vertex
    }

    pub fn part_range(&self, part: usize) -> std::ops::Range<Vertex> {
        self.offsets[part]..self.offsets[part + 1]
    }

    pub fn part_of(&self, v: Vertex) -> usize {
        // offsets is sorted and starts at 0
        self.offsets.partition_point(|&o| o <= v) - 1
    }

    pub fn contains_edge(&self, edge: &[Vertex]) -> bool {
        self.edge_index(edge).is_some()
    }

    /// Index of a sorted edge in the canonical edge list.
    pub fn edge_index(&self, edge: &[Vertex]) -> Option<usize> {
        if edge.len() != self.r {
            return None;
        }
        if edge.windows(2).all(|w| w[0] < w[1]) {
            self.edges.binary_search_by(|e| e.as_slice().cmp(edge)).ok()
        } else {
            let mut sorted = edge.to_vec();
            sorted.sort_unstable();
            self.edges.binary_search(&sorted).ok()
        }
    }

    /// Number of edges through `v`.
    pub fn vertex_degree(&self, v: Vertex) -> usize {
        self.incidence[v as usize].count_ones(..)
    }

    /// Bitset of edge indices containing every vertex of `set`.
    pub fn edges_containing(&self, set: &[Vertex]) -> FixedBitSet {
        let mut iter = set.iter();
        let mut acc = match iter.next() {
            Some(&v) => self.incidence[v as usize].clone(),
            None => {
                let mut all = FixedBitSet::with_capacity(self.edges.len());
                all.insert_range(..);
                return all;
            }
        };
        for &v in iter {
            acc.intersect_with(&self.incidence[v as usize]);
        }
        acc
    }

    /// Validates a vertex set as a tuple of this hypergraph.
    pub fn tuple(&self, vertices: &[Vertex]) -> Result<Tuple, HypergraphError> {
        let invalid = |reason: &str| HypergraphError::InvalidTuple {
            tuple: vertices.to_vec(),
            reason: reason.to_string(),
        };
        if vertices.is_empty() || vertices.len() >= self.r {
            return Err(invalid("size must lie in 1..r"));
        }
        let mut sorted = vertices.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(invalid("repeated vertex"));
        }
        if sorted.iter().any(|&v| v as usize >= self.order()) {
            return Err(invalid("vertex out of range"));
        }
        let mut missing_parts = Vec::new();
        if self.is_partite() {
            let parts: Vec<usize> = sorted.iter().map(|&v| self.part_of(v)).collect();
            if parts.windows(2).any(|w| w[0] == w[1]) {
                return Err(invalid("two vertices in one part"));
            }
            missing_parts = (0..self.r).filter(|p| !parts.contains(p)).collect();
        }
        Ok(Tuple {
            vertices: sorted,
            missing_parts,
        })
    }

    /// The (r-k)-sets completing `tuple` to an edge, in lexicographic order.
    pub fn link(&self, tuple: &[Vertex]) -> Result<Vec<Vec<Vertex>>, HypergraphError> {
        let t = self.tuple(tuple)?;
        Ok(self.link_unchecked(t.vertices()))
    }

    /// Link of an arbitrary vertex set without tuple validation.
    pub(crate) fn link_unchecked(&self, set: &[Vertex]) -> Vec<Vec<Vertex>> {
        self.edges_containing(set)
            .ones()
            .map(|idx| {
                self.edges[idx]
                    .iter()
                    .copied()
                    .filter(|v| !set.contains(v))
                    .collect()
            })
            .collect()
    }

    pub fn degree(&self, tuple: &[Vertex]) -> Result<usize, HypergraphError> {
        let t = self.tuple(tuple)?;
        Ok(self.degree_unchecked(t.vertices()))
    }

    pub(crate) fn degree_unchecked(&self, set: &[Vertex]) -> usize {
        self.edges_containing(set).count_ones(..)
    }

    /// The (r-1)-tuples avoiding part `part` with positive degree, each once,
    /// in lexicographic order.
    pub fn tuples(&self, part: usize) -> Result<Vec<Vec<Vertex>>, HypergraphError> {
        if !self.is_partite() {
            return Err(HypergraphError::NotPartite);
        }
        if part >= self.r {
            return Err(HypergraphError::BadPartIndex {
                index: part,
                parts: self.r,
            });
        }
        let mut out: Vec<Vec<Vertex>> = self
            .edges
            .iter()
            .map(|e| {
                let mut t = e.clone();
                t.remove(part);
                t
            })
            .collect();
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// Tuples of `tuples(part)` paired with their degrees.
    pub fn tuple_degrees(&self, part: usize) -> Result<Vec<(Vec<Vertex>, usize)>, HypergraphError> {
        let tuples = self.tuples(part)?;
        Ok(tuples
            .into_iter()
            .map(|t| {
                let d = self.degree_unchecked(&t);
                (t, d)
            })
            .collect())
    }

    /// Every (r-1)-tuple of the hypergraph, any part, lexicographic order.
    pub fn all_tuples(&self) -> Vec<Vec<Vertex>> {
        let mut out: Vec<Vec<Vertex>> = self
            .edges
            .iter()
            .flat_map(|e| e.iter().copied().combinations(self.r - 1))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Maximum degree over all (r-1)-tuples; 0 for an empty hypergraph.
    pub fn max_tuple_degree(&self) -> usize {
        self.all_tuples()
            .iter()
            .map(|t| self.degree_unchecked(t))
            .max()
            .unwrap_or(0)
    }

    /// Removes the given edges. Every edge must be present.
    pub fn delete_edges<E>(&self, edges: E) -> Result<Self, HypergraphError>
    where
        E: IntoIterator,
        E::Item: AsRef<[Vertex]>,
    {
        let mut doomed = FixedBitSet::with_capacity(self.edges.len());
        for e in edges {
            let e = e.as_ref();
            let idx = self
                .edge_index(e)
                .ok_or_else(|| HypergraphError::UnknownEdge(e.to_vec()))?;
            doomed.insert(idx);
        }
        Ok(self.retain_indices(|idx| !doomed.contains(idx)))
    }

    /// Keeps the edges satisfying `keep`.
    pub fn retain<F>(&self, mut keep: F) -> Self
    where
        F: FnMut(&[Vertex]) -> bool,
    {
        self.retain_indices(|idx| keep(&self.edges[idx]))
    }

    fn retain_indices<F>(&self, mut keep: F) -> Self
    where
        F: FnMut(usize) -> bool,
    {
        let edges = (0..self.edges.len())
            .filter(|&idx| keep(idx))
            .map(|idx| self.edges[idx].clone())
            .collect();
        let mut g = Hypergraph {
            r: self.r,
            part_sizes: self.part_sizes.clone(),
            offsets: self.offsets.clone(),
            edges,
            incidence: Vec::new(),
        };
        g.rebuild_incidence();
        g
    }

    /// Same vertex set, edges taken from `edges` (already validated subset).
    pub fn with_edges<E>(&self, edges: E) -> Result<Self, HypergraphError>
    where
        E: IntoIterator,
        E::Item: AsRef<[Vertex]>,
    {
        Self::new(self.r, self.part_sizes.clone(), edges)
    }

    /// Whether every edge of `self` is an edge of `other` on the same parts.
    pub fn is_subgraph_of(&self, other: &Hypergraph) -> bool {
        self.r == other.r
            && self.part_sizes == other.part_sizes
            && self.edges.iter().all(|e| other.contains_edge(e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k222() -> Hypergraph {
        Hypergraph::complete_partite(vec![2, 2, 2]).unwrap()
    }

    #[test]
    fn smallest_partite_instance() {
        let g = Hypergraph::new(3, vec![1, 1, 1], [[0, 1, 2]]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert!(g.is_partite());
    }

    #[test]
    fn complete_partite_has_all_transversals() {
        let g = k222();
        assert_eq!(g.edge_count(), 8);
        assert_eq!(g.edges()[0], vec![0, 2, 4]);
        assert_eq!(g.edges()[7], vec![1, 3, 5]);
    }

    #[test]
    fn constructor_errors() {
        assert!(matches!(
            Hypergraph::new(3, vec![2, 2, 2], [[0, 1, 2]]),
            Err(HypergraphError::NonTransversalEdge(_))
        ));
        assert!(matches!(
            Hypergraph::new(3, vec![2, 2, 2], [[0, 2, 4], [4, 2, 0]]),
            Err(HypergraphError::DuplicateEdge(_))
        ));
        assert!(matches!(
            Hypergraph::new(3, vec![2, 2, 2], [[0, 2, 9]]),
            Err(HypergraphError::VertexOutOfRange { vertex: 9, .. })
        ));
        assert!(matches!(
            Hypergraph::new(3, vec![2, 2, 2], [vec![0, 2]]),
            Err(HypergraphError::WrongArity { got: 2, .. })
        ));
        assert!(matches!(
            Hypergraph::new(3, vec![6], [[1, 1, 2]]),
            Err(HypergraphError::RepeatedVertex(_))
        ));
        assert!(matches!(
            Hypergraph::new(1, vec![3], [[0]]),
            Err(HypergraphError::InvalidUniformity(1))
        ));
        assert!(matches!(
            Hypergraph::new(3, vec![2, 2], [[0, 1, 2]]),
            Err(HypergraphError::InvalidPartCount { .. })
        ));
    }

    #[test]
    fn part_lookup_uses_cumulative_ranges() {
        let g = Hypergraph::empty(3, vec![1, 3, 2]).unwrap();
        let parts: Vec<usize> = g.vertices().map(|v| g.part_of(v)).collect();
        assert_eq!(parts, vec![0, 1, 1, 1, 2, 2]);
    }

    #[test]
    fn link_examples() {
        let single = Hypergraph::new(3, vec![6], [[0, 1, 2]]).unwrap();
        assert_eq!(single.link(&[0, 1]).unwrap(), vec![vec![2]]);
        assert!(single.link(&[5]).unwrap().is_empty());
        let g = k222();
        assert_eq!(g.link(&[0, 2]).unwrap(), vec![vec![4], vec![5]]);
        assert_eq!(g.degree(&[0, 2]).unwrap(), 2);
        assert!(matches!(
            g.link(&[0, 1]),
            Err(HypergraphError::InvalidTuple { .. })
        ));
        assert!(g.link(&[0, 2, 4]).is_err());
    }

    #[test]
    fn degree_examples() {
        let g = Hypergraph::complete_partite(vec![3, 3, 3]).unwrap();
        assert_eq!(g.degree(&[0, 3]).unwrap(), 3);
        let single = Hypergraph::new(3, vec![6], [[0, 1, 2]]).unwrap();
        assert_eq!(single.degree(&[0]).unwrap(), 1);
        assert_eq!(single.degree(&[1, 2]).unwrap(), 1);
        assert_eq!(single.degree(&[3, 4]).unwrap(), 0);
    }

    #[test]
    fn tuples_examples() {
        let g = k222();
        assert_eq!(
            g.tuples(2).unwrap(),
            vec![vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3]]
        );
        let empty = Hypergraph::empty(3, vec![2, 2, 2]).unwrap();
        assert!(empty.tuples(0).unwrap().is_empty());
        let single = Hypergraph::new(3, vec![2, 2, 2], [[0, 2, 4]]).unwrap();
        assert_eq!(single.tuples(0).unwrap(), vec![vec![2, 4]]);
        assert!(matches!(
            g.tuples(3),
            Err(HypergraphError::BadPartIndex { .. })
        ));
        let general = Hypergraph::complete(5, 3).unwrap();
        assert_eq!(general.tuples(0), Err(HypergraphError::NotPartite));
    }

    #[test]
    fn delete_examples() {
        let g = k222();
        assert_eq!(g.delete_edges(Vec::<Vec<Vertex>>::new()).unwrap(), g);
        let all = g.delete_edges(g.edges().to_vec()).unwrap();
        assert_eq!(all.edge_count(), 0);
        assert_eq!(all.part_sizes(), g.part_sizes());
        let through0: Vec<_> = g.edges().iter().filter(|e| e.contains(&0)).cloned().collect();
        assert_eq!(g.delete_edges(through0).unwrap().edge_count(), 4);
        assert!(matches!(
            all.delete_edges([[0, 2, 4]]),
            Err(HypergraphError::UnknownEdge(_))
        ));
    }

    #[test]
    fn handshake_on_complete_partite() {
        let g = Hypergraph::complete_partite(vec![2, 3, 4]).unwrap();
        for part in 0..3 {
            let total: usize = g.tuple_degrees(part).unwrap().iter().map(|(_, d)| d).sum();
            assert_eq!(total, g.edge_count());
        }
    }
}
