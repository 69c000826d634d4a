//! Edge clustering: Flow Laplacian, volume normalization, spectral
//! embedding and k-means.

use crate::error::{Error, Result};
use crate::graph::{default_nu, Digraph, VertexVector};
use crate::laplacian::{
    build_dual_graph, build_edge_laplacian, build_flow_laplacian, build_flow_laplacian_general,
    build_psi, AffinityKind, ConstructionPath, DualGraph, FlowLaplacian, PhiMatrix,
};
use crate::volume::{edge_volumes, normalize_laplacian, unnormalized, EdgeVolumes, NormalizedLaplacian};

use super::eigen::{smallest_eigenpairs, EigenBasis, EigenOptions, DEFAULT_DENSE_CUTOFF};
use super::kmeans::{kmeans_pp, row_normalize, FeatureMatrix, DEFAULT_RESTARTS};

#[derive(Debug, Clone)]
pub struct ClusterOptions {
    /// Vertex weights; the weighted degree over `‖w‖₁` when absent.
    pub nu: Option<VertexVector>,
    /// Explicit `Φ`. Replaces the one derived from `ν` in the Laplacian.
    pub phi: Option<PhiMatrix>,
    pub normalized: bool,
    pub seed: u64,
    pub restarts: usize,
    pub dense_cutoff: usize,
    pub path: ConstructionPath,
}

impl Default for ClusterOptions {
    fn default() -> Self {
        ClusterOptions {
            nu: None,
            phi: None,
            normalized: true,
            seed: 0,
            restarts: DEFAULT_RESTARTS,
            dense_cutoff: DEFAULT_DENSE_CUTOFF,
            path: ConstructionPath::EdgeLaplacian,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Clustering {
    pub kind: AffinityKind,
    pub k_requested: usize,
    pub k_used: usize,
    pub labels: Vec<usize>,
    pub nu: VertexVector,
    pub dual: DualGraph,
    pub laplacian: FlowLaplacian,
    pub operator: NormalizedLaplacian,
    pub volumes: EdgeVolumes,
    pub eigen: EigenBasis,
    pub features: FeatureMatrix,
    pub kmeans_objective: f64,
    pub warnings: Vec<String>,
}

/// Partitions the edges of `g` into `k` clusters.
pub fn cluster_edges(g: &Digraph, kind: AffinityKind, k: usize, opts: &ClusterOptions) -> Result<Clustering> {
    let m = g.n_edges();
    if m == 0 {
        return Err(Error::EmptyEdgeSet);
    }
    if k == 0 || k > m {
        return Err(Error::InvalidClusterCount { k, m });
    }
    let nu = match &opts.nu {
        Some(nu) => nu.clone(),
        None => default_nu(g)?,
    };
    nu.check_len(g)?;
    nu.check_positive_on_edges(g)?;

    let (laplacian, dual) = match &opts.phi {
        None => {
            let le = build_edge_laplacian(g, &nu)?;
            let dual = build_dual_graph(&le);
            (build_flow_laplacian(g, &nu, kind, opts.path)?, dual)
        }
        Some(phi) => {
            let l = build_flow_laplacian_general(g, phi, kind)?;
            let psi = build_psi(g, AffinityKind::Pre);
            let signed = phi.matrix.map(|p, q, v| if p == q { 0.0 } else { psi.matrix.get(p, q) * v });
            (l, DualGraph::from_signed_weights(signed))
        }
    };
    let volumes = edge_volumes(g, &nu)?;
    let operator = if opts.normalized {
        normalize_laplacian(&laplacian, &volumes)?
    } else {
        unnormalized(&laplacian)
    };
    let eig_opts = EigenOptions {
        dense_cutoff: opts.dense_cutoff,
        ..EigenOptions::default()
    };
    let eigen = smallest_eigenpairs(&operator.matrix, k, &eig_opts)?;
    log::debug!("smallest eigenvalues: {:?}", eigen.values);
    let features = row_normalize(&eigen);
    let km = kmeans_pp(&features, k, opts.seed, opts.restarts)?;

    let mut warnings: Vec<String> = g.warnings().to_vec();
    if !features.zero_rows.is_empty() {
        warnings.push(format!(
            "{} edges have a zero spectral embedding row",
            features.zero_rows.len()
        ));
    }
    warnings.extend(km.warnings.iter().cloned());

    Ok(Clustering {
        kind,
        k_requested: k,
        k_used: km.k_used,
        labels: km.labels,
        nu,
        dual,
        laplacian,
        operator,
        volumes,
        eigen,
        features,
        kmeans_objective: km.objective,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_components_rge() {
        // Two disjoint directed triangles.
        let g = Digraph::new(
            6,
            [(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0), (3, 4, 1.0), (4, 5, 1.0), (5, 3, 1.0)],
            true,
        )
        .unwrap();
        let c = cluster_edges(&g, AffinityKind::Rge, 2, &ClusterOptions::default()).unwrap();
        assert_eq!(c.labels, vec![0, 0, 0, 1, 1, 1]);
        assert!(c.eigen.values[0].abs() < 1e-12 && c.eigen.values[1].abs() < 1e-12);
    }

    #[test]
    fn rejects_k_out_of_range() {
        let g = Digraph::new(2, [(0, 1, 1.0)], true).unwrap();
        assert!(matches!(
            cluster_edges(&g, AffinityKind::Pre, 2, &ClusterOptions::default()),
            Err(Error::InvalidClusterCount { k: 2, m: 1 })
        ));
    }

    #[test]
    fn single_cluster() {
        let g = Digraph::new(3, [(0, 1, 1.0), (1, 2, 1.0)], true).unwrap();
        let c = cluster_edges(&g, AffinityKind::Dpe, 1, &ClusterOptions::default()).unwrap();
        assert_eq!(c.labels, vec![0, 0]);
        assert_eq!(c.k_used, 1);
    }
}
