//! Weighted regularity toolkit: vertex- and edge-weighted graphs,
//! quasi-randomness and ε-regularity checks with exhaustive oracles and
//! local search, energy-increment decompositions of edge functions, and
//! construction of weighted ε-regular partitions.

pub mod decomposition;
pub mod edge_fn;
pub mod error;
pub mod graph;
pub mod io;
pub mod models;
pub mod partition;
pub mod quasirandom;
pub mod regularity;
pub mod report;
pub mod rng;
mod search;

pub use edge_fn::{inner_product, norm, EdgeFunction};
pub use error::{Error, Result};
pub use graph::{Edge, NormalizationScales, SubgraphPair, VertexSubset, WeightedGraph, TOL};
pub use report::{Mode, SearchBudget};
