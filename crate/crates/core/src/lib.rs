pub mod cli;
pub mod density;
pub mod extremal;
pub mod hypergraph;
pub mod patterns;
pub mod regularity;
pub mod roots;

pub use hypergraph::{Hypergraph, HypergraphError, Vertex};
pub use patterns::PatternParams;
