//! Exact cluster costs on the signed dual graph and an exhaustive minimizer.
//!
//! For disjoint sets `A`, `B` of dual vertices, `Cut(A, B) = Σ_{p∈A} Σ_{q∈B} |w'_pq|`;
//! within one set (`Links±(Σ, Σ)`) the double sum visits each dual edge in
//! both orientations. With these sums the unscaled cost of a cluster equals
//! `xᵀ L x` for its 0/1 indicator `x`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Digraph, VertexVector};
use crate::laplacian::{build_dual_graph, build_edge_laplacian, AffinityKind, DualGraph};
use crate::volume::{edge_volumes, EdgeVolumes};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterCut {
    pub cluster: usize,
    pub size: usize,
    /// `Cut(Σ, Σ̄)`.
    pub cut: f64,
    /// `Links⁺(Σ, Σ)`.
    pub links_pos_within: f64,
    /// `Links⁻(Σ, Σ)`.
    pub links_neg_within: f64,
    /// `Links⁺(Σ, Σ̄)`.
    pub links_pos_out: f64,
    /// `Links⁻(Σ, Σ̄)`.
    pub links_neg_out: f64,
    pub unscaled_cost: Option<f64>,
    pub volume: Option<f64>,
    pub normalized_cost: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutReport {
    pub kind: Option<AffinityKind>,
    pub clusters: Vec<ClusterCut>,
    pub total_unscaled_cost: Option<f64>,
    pub total_normalized_cost: Option<f64>,
}

fn check_labels(dual: &DualGraph, labels: &[usize], k: usize) -> Result<()> {
    if labels.len() != dual.n_vertices() {
        return Err(Error::DimensionMismatch {
            what: "label vector length",
            expected: dual.n_vertices(),
            actual: labels.len(),
        });
    }
    if let Some(p) = labels.iter().position(|&c| c >= k) {
        return Err(Error::LabelOutOfRange {
            edge: p,
            label: labels[p],
            k,
        });
    }
    Ok(())
}

/// Cut and link sums for each of the `k` clusters.
pub fn cut_quantities(dual: &DualGraph, labels: &[usize], k: usize) -> Result<CutReport> {
    check_labels(dual, labels, k)?;
    let mut clusters: Vec<ClusterCut> = (0..k)
        .map(|c| ClusterCut {
            cluster: c,
            size: 0,
            cut: 0.0,
            links_pos_within: 0.0,
            links_neg_within: 0.0,
            links_pos_out: 0.0,
            links_neg_out: 0.0,
            unscaled_cost: None,
            volume: None,
            normalized_cost: None,
        })
        .collect();
    for &c in labels {
        clusters[c].size += 1;
    }
    for (p, q, w) in dual.weights.iter() {
        if p == q {
            continue;
        }
        let c = &mut clusters[labels[p]];
        if labels[p] == labels[q] {
            c.links_pos_within += w.max(0.0);
            c.links_neg_within += (-w).max(0.0);
        } else {
            c.cut += w.abs();
            c.links_pos_out += w.max(0.0);
            c.links_neg_out += (-w).max(0.0);
        }
    }
    Ok(CutReport {
        kind: None,
        clusters,
        total_unscaled_cost: None,
        total_normalized_cost: None,
    })
}

fn ucost(c: &ClusterCut, kind: AffinityKind) -> f64 {
    match kind {
        AffinityKind::Pre => c.cut + 2.0 * c.links_neg_within,
        AffinityKind::Dpe => c.cut + 2.0 * c.links_pos_within,
        AffinityKind::Rge => c.cut,
    }
}

/// `UCost_PRE = Cut + 2 Links⁻(Σ,Σ)`, `UCost_DPE = Cut + 2 Links⁺(Σ,Σ)`,
/// `UCost_RGE = Cut`, per cluster.
pub fn unscaled_cost(dual: &DualGraph, labels: &[usize], k: usize, kind: AffinityKind) -> Result<Vec<f64>> {
    let report = cut_quantities(dual, labels, k)?;
    Ok(report.clusters.iter().map(|c| ucost(c, kind)).collect())
}

/// Full per-cluster report with `NCost = Σ_k UCost^(k) / Vol(Σ^(k))`.
pub fn cost_report(
    dual: &DualGraph,
    labels: &[usize],
    k: usize,
    kind: AffinityKind,
    vols: &EdgeVolumes,
) -> Result<CutReport> {
    let mut report = cut_quantities(dual, labels, k)?;
    let cluster_vols = vols.cluster_volumes(labels, k);
    let mut total_u = 0.0;
    let mut total_n = 0.0;
    for c in &mut report.clusters {
        if c.size == 0 {
            return Err(Error::EmptyCluster { cluster: c.cluster });
        }
        let u = ucost(c, kind);
        let v = cluster_vols[c.cluster];
        c.unscaled_cost = Some(u);
        c.volume = Some(v);
        c.normalized_cost = Some(u / v);
        total_u += u;
        total_n += u / v;
    }
    report.kind = Some(kind);
    report.total_unscaled_cost = Some(total_u);
    report.total_normalized_cost = Some(total_n);
    Ok(report)
}

pub fn normalized_cost(
    dual: &DualGraph,
    labels: &[usize],
    k: usize,
    kind: AffinityKind,
    vols: &EdgeVolumes,
) -> Result<f64> {
    Ok(cost_report(dual, labels, k, kind, vols)?
        .total_normalized_cost
        .expect("set by cost_report"))
}

pub const BRUTE_FORCE_MAX_EDGES: usize = 12;
pub const MAX_LISTED_OPTIMA: usize = 1024;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BruteForceResult {
    pub labels: Vec<usize>,
    pub cost: f64,
    /// Partitions whose cost ties the optimum (within `1e-9` relative).
    pub n_optimal: usize,
    /// The tied partitions themselves, in enumeration order, at most
    /// `MAX_LISTED_OPTIMA` of them.
    pub optima: Vec<Vec<usize>>,
    pub n_partitions: u64,
}

/// Exhaustive minimum of the total normalized cost (or the total unscaled
/// cost when `normalized` is false) over all partitions of the edges into
/// exactly `k` nonempty clusters.
///
/// Partitions are enumerated as restricted growth strings, so the returned
/// labels are the lexicographically smallest representative of the first
/// optimal partition met in lexicographic order.
pub fn brute_force_min(
    g: &Digraph,
    kind: AffinityKind,
    k: usize,
    nu: &VertexVector,
    normalized: bool,
) -> Result<BruteForceResult> {
    let m = g.n_edges();
    if m > BRUTE_FORCE_MAX_EDGES {
        return Err(Error::InstanceTooLarge {
            m,
            limit: BRUTE_FORCE_MAX_EDGES,
        });
    }
    if k == 0 || k > m {
        return Err(Error::InvalidClusterCount { k, m });
    }
    let dual = build_dual_graph(&build_edge_laplacian(g, nu)?);
    let vols = edge_volumes(g, nu)?;
    let entries: Vec<(usize, usize, f64)> = dual.weights.iter().filter(|e| e.0 != e.1).collect();

    let evaluate = |labels: &[usize]| -> f64 {
        let mut u = vec![0.0; k];
        for &(p, q, w) in &entries {
            let c = labels[p];
            if c == labels[q] {
                match kind {
                    AffinityKind::Pre => u[c] += 2.0 * (-w).max(0.0),
                    AffinityKind::Dpe => u[c] += 2.0 * w.max(0.0),
                    AffinityKind::Rge => {}
                }
            } else {
                u[c] += w.abs();
            }
        }
        if normalized {
            let v = vols.cluster_volumes(labels, k);
            u.iter().zip(&v).map(|(a, b)| a / b).sum()
        } else {
            u.iter().sum()
        }
    };

    let mut labels = vec![0usize; m];
    // prefix_max[i] = max(labels[..=i])
    let mut prefix_max = vec![0usize; m];
    let mut best: Option<(Vec<usize>, f64)> = None;
    let mut costs = Vec::new();
    let mut near: Vec<(Vec<usize>, f64)> = Vec::new();
    let tie = |a: f64, b: f64| (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0);
    let mut n_partitions = 0u64;

    // Iterative enumeration of restricted growth strings with max label k-1.
    loop {
        if prefix_max[m - 1] == k - 1 {
            n_partitions += 1;
            let c = evaluate(&labels);
            costs.push(c);
            if best.as_ref().is_none_or(|b| c < b.1) {
                best = Some((labels.clone(), c));
            }
            let b = best.as_ref().expect("set above").1;
            near.retain(|x| tie(x.1, b));
            if tie(c, b) && near.len() < MAX_LISTED_OPTIMA {
                near.push((labels.clone(), c));
            }
        }
        // Advance to the next string whose prefix can still reach k blocks.
        let mut i = m - 1;
        loop {
            if i == 0 {
                let (labels, cost) = best.expect("k <= m guarantees a partition");
                let n_optimal = costs.iter().filter(|&&c| tie(c, cost)).count();
                let optima = near.into_iter().filter(|x| tie(x.1, cost)).map(|x| x.0).collect();
                return Ok(BruteForceResult {
                    labels,
                    cost,
                    n_optimal,
                    optima,
                    n_partitions,
                });
            }
            let limit = (prefix_max[i - 1] + 1).min(k - 1);
            if labels[i] < limit {
                labels[i] += 1;
                prefix_max[i] = prefix_max[i - 1].max(labels[i]);
                // Remaining positions must be able to open the missing blocks.
                let needed = (k - 1).saturating_sub(prefix_max[i]);
                if needed <= m - 1 - i {
                    for j in i + 1..m {
                        labels[j] = 0;
                        prefix_max[j] = prefix_max[j - 1];
                    }
                    break;
                }
            } else {
                i -= 1;
            }
        }
    }
}
