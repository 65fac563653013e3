//! Percolation on spectral expanders: host generators, second-eigenvalue
//! measurement, edge percolation with low-degree peeling, structural
//! checks on the removed set and the core, and a seeded experiment harness.

pub mod experiment;
pub mod generators;
pub mod graph;
pub mod io;
pub mod percolation;
pub mod prob;
pub mod rng;
pub mod spectral;
pub mod structure;

pub use generators::{Family, GeneratorError, GeneratorSpec};
pub use graph::{build_graph, Graph, GraphError, VertexSet};
pub use percolation::{peel, percolate, verify_trace, PercolationParams, PruneTrace};
pub use prob::Probability;
pub use spectral::{second_eigenvalue_abs, SpectralOptions, SpectralSummary};
