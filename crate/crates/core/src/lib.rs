//! Edge clustering of weighted digraphs with Flow Laplacians.
//!
//! Every edge of a digraph becomes a vertex of a signed dual graph. The
//! Flow Laplacian of one of three edge affinities (PRE, DPE, RGE) is
//! normalized by edge volumes, and its bottom eigenvectors feed k-means.

pub mod cli;
pub mod cuts;
pub mod error;
pub mod graph;
pub mod io;
pub mod laplacian;
pub mod sparse;
pub mod spectral;
pub mod synth;
pub mod volume;

pub use error::{Error, Result};
pub use graph::{default_nu, Digraph, Edge, VertexVector};
pub use laplacian::{AffinityKind, ConstructionPath};
pub use spectral::{cluster_edges, ClusterOptions, Clustering};
