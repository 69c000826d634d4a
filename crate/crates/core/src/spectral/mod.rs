//! Spectral edge clustering.

pub mod eigen;
pub mod kmeans;
pub mod pipeline;

pub use eigen::{all_eigenvalues, smallest_eigenpairs, EigenBasis, EigenOptions};
pub use kmeans::{kmeans_pp, row_normalize, FeatureMatrix, KMeansResult};
pub use pipeline::{cluster_edges, ClusterOptions, Clustering};
