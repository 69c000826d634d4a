//! Edge volumes and normalized Flow Laplacians.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Digraph, VertexVector};
use crate::laplacian::{AffinityKind, FlowLaplacian};
use crate::sparse::SparseMatrix;

/// Per-edge volumes `f_p`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeVolumes {
    pub values: Vec<f64>,
}

impl EdgeVolumes {
    /// Sum of member volumes for every cluster label in `0..k`.
    pub fn cluster_volumes(&self, labels: &[usize], k: usize) -> Vec<f64> {
        let mut out = vec![0.0; k];
        for (&f, &c) in self.values.iter().zip(labels) {
            out[c] += f;
        }
        out
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// `f_p = (|w_p| / 2) (σ_ℓ ν_ℓ / ⟨d_out,ℓ⟩ + σ_k ν_k / ⟨d_in,k⟩)` for edge
/// `p = ℓ -> k`. A self-edge uses the same vertex in both terms.
pub fn edge_volumes(g: &Digraph, nu: &VertexVector) -> Result<EdgeVolumes> {
    nu.check_len(g)?;
    let stats = g.vertex_stats();
    let nu = nu.values();
    let values = g
        .edges()
        .iter()
        .enumerate()
        .map(|(p, e)| {
            if e.weight == 0.0 {
                return Err(Error::ZeroWeight { edge: p });
            }
            let (l, k) = (e.source, e.target);
            let d_out = stats.abs_out_degree[l];
            let d_in = stats.abs_in_degree[k];
            // Both degrees include |w_p| itself.
            assert!(d_out > 0.0 && d_in > 0.0, "edge {p} missing from its own degrees");
            let src = stats.social_participation[l] as f64 * nu[l] / d_out;
            let dst = stats.social_participation[k] as f64 * nu[k] / d_in;
            Ok(0.5 * e.weight.abs() * (src + dst))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EdgeVolumes { values })
}

/// `F^{-1/2} L F^{-1/2}`, or `L` itself in unnormalized mode.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedLaplacian {
    pub matrix: SparseMatrix,
    pub kind: AffinityKind,
    pub normalized: bool,
}

pub fn normalize_laplacian(l: &FlowLaplacian, vols: &EdgeVolumes) -> Result<NormalizedLaplacian> {
    if vols.values.len() != l.matrix.dim() {
        return Err(Error::DimensionMismatch {
            what: "volume vector length",
            expected: l.matrix.dim(),
            actual: vols.values.len(),
        });
    }
    if let Some(p) = vols.values.iter().position(|&f| !(f > 0.0)) {
        return Err(Error::NonPositiveVolume {
            edge: p,
            volume: vols.values[p],
        });
    }
    let s: Vec<f64> = vols.values.iter().map(|f| 1.0 / f.sqrt()).collect();
    Ok(NormalizedLaplacian {
        matrix: l.matrix.map(|p, q, v| s[p] * v * s[q]),
        kind: l.kind,
        normalized: true,
    })
}

pub fn unnormalized(l: &FlowLaplacian) -> NormalizedLaplacian {
    NormalizedLaplacian {
        matrix: l.matrix.clone(),
        kind: l.kind,
        normalized: false,
    }
}

/// Expected effect of a perturbation on `f_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Increase,
    Decrease,
    Unchanged,
}

/// How the perturbed edge relates to the probed edge `p = ℓ -> k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeRole {
    /// `e_p` itself.
    OwnWeight,
    /// Another out-edge of `ℓ` (raises `⟨d'_out,ℓ⟩`).
    SiblingOutOfSource,
    /// Another in-edge of `k` (raises `⟨d'_in,k⟩`).
    SiblingInOfTarget,
    /// An in-edge of `ℓ` (raises `⟨d_in,ℓ⟩`).
    InOfSource,
    /// An out-edge of `k` (raises `⟨d_out,k⟩`).
    OutOfTarget,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeOutcome {
    pub role: ProbeRole,
    pub perturbed_edge: usize,
    pub before: f64,
    pub after: f64,
    pub expected: Direction,
}

impl ProbeOutcome {
    pub fn holds(&self) -> bool {
        match self.expected {
            Direction::Increase => self.after > self.before,
            Direction::Decrease => self.after < self.before,
            Direction::Unchanged => (self.after - self.before).abs() <= 1e-12 * self.before.abs(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub edge: usize,
    pub delta: f64,
    pub outcomes: Vec<ProbeOutcome>,
}

impl MonotonicityReport {
    pub fn all_hold(&self) -> bool {
        self.outcomes.iter().all(ProbeOutcome::holds)
    }
}

/// Volume of edge `p` under weighted-degree importance with the normalizer
/// `‖w‖₁` pinned to `norm`, so that only the named degree changes.
fn volume_with_pinned_norm(g: &Digraph, p: usize, norm: f64) -> f64 {
    let stats = g.vertex_stats();
    let e = g.edge(p);
    let (l, k) = (e.source, e.target);
    let nu_l = stats.abs_degree[l] / norm;
    let nu_k = stats.abs_degree[k] / norm;
    0.5 * e.weight
        * (stats.social_participation[l] as f64 * nu_l / stats.abs_out_degree[l]
            + stats.social_participation[k] as f64 * nu_k / stats.abs_in_degree[k])
}

/// Perturbs `|w_p|`, then the first sibling/neighbour edge of each role, by
/// `+delta` and reports `f_p` before and after.
///
/// Importance follows the weighted-degree rule with `‖w‖₁` held at its
/// unperturbed value: each probe changes one degree quantity with the others
/// fixed. A sibling probe is expected to leave `f_p` unchanged when the
/// complementary degree at that endpoint is zero (e.g. `ℓ` has no in-edges).
pub fn volume_monotonicity_probe(g: &Digraph, p: usize, delta: f64) -> Result<MonotonicityReport> {
    if p >= g.n_edges() {
        return Err(Error::DegeneratePerturbation(format!(
            "edge {p} out of range for {} edges",
            g.n_edges()
        )));
    }
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::DegeneratePerturbation(format!(
            "perturbation must be positive and finite, got {delta}"
        )));
    }
    let e = *g.edge(p);
    if e.is_self_edge() {
        return Err(Error::DegeneratePerturbation(format!("edge {p} is a self-edge")));
    }
    let (l, k) = (e.source, e.target);
    let norm = g.total_abs_weight();
    let stats = g.vertex_stats();
    let before = volume_with_pinned_norm(g, p, norm);

    let role_of = |q: usize| -> Option<ProbeRole> {
        let o = g.edge(q);
        if q == p {
            return Some(ProbeRole::OwnWeight);
        }
        if o.is_self_edge() {
            return None;
        }
        let roles = [
            (o.source == l, ProbeRole::SiblingOutOfSource),
            (o.target == k, ProbeRole::SiblingInOfTarget),
            (o.target == l, ProbeRole::InOfSource),
            (o.source == k, ProbeRole::OutOfTarget),
        ];
        let hits: Vec<ProbeRole> = roles.iter().filter(|r| r.0).map(|r| r.1).collect();
        match hits.as_slice() {
            [single] => Some(*single),
            // A parallel edge raises both sibling degrees; a reverse edge
            // raises both neighbour degrees.
            [ProbeRole::SiblingOutOfSource, ProbeRole::SiblingInOfTarget] => {
                Some(ProbeRole::SiblingOutOfSource)
            }
            [ProbeRole::InOfSource, ProbeRole::OutOfTarget] => Some(ProbeRole::InOfSource),
            _ => None,
        }
    };

    let expected = |role: ProbeRole, q: usize| -> Direction {
        match role {
            ProbeRole::OwnWeight | ProbeRole::InOfSource | ProbeRole::OutOfTarget => {
                Direction::Increase
            }
            ProbeRole::SiblingOutOfSource | ProbeRole::SiblingInOfTarget => {
                let o = g.edge(q);
                // ⟨d⟩/⟨d_out⟩ = 1 + ⟨d_in⟩/⟨d_out⟩ only moves if ⟨d_in⟩ > 0.
                let src_moves = o.source == l && stats.abs_in_degree[l] > 0.0;
                let dst_moves = o.target == k && stats.abs_out_degree[k] > 0.0;
                if src_moves || dst_moves {
                    Direction::Decrease
                } else {
                    Direction::Unchanged
                }
            }
        }
    };

    let mut outcomes = Vec::new();
    let mut seen = Vec::new();
    for q in std::iter::once(p).chain(0..g.n_edges()) {
        let Some(role) = role_of(q) else { continue };
        if seen.contains(&role) {
            continue;
        }
        seen.push(role);
        let h = g.with_edge_weight(q, g.edge(q).weight + delta)?;
        outcomes.push(ProbeOutcome {
            role,
            perturbed_edge: q,
            before,
            after: volume_with_pinned_norm(&h, p, norm),
            expected: expected(role, q),
        });
    }
    Ok(MonotonicityReport {
        edge: p,
        delta,
        outcomes,
    })
}
