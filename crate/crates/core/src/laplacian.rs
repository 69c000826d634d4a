//! Edge affinity matrices, the edge Laplacian, the signed dual graph and the
//! three Flow Laplacians.
//!
//! Every Flow Laplacian can be assembled two ways:
//!
//! * [`ConstructionPath::PsiPhi`]: `L = D_ΨΦ - Ψ ⊙ Φ` with `Ψ` taken from the
//!   sign pattern of `BᵀB` and `Φ` from the shared-vertex importance rule;
//! * [`ConstructionPath::EdgeLaplacian`]: `W' = L_e(ν) - diag(L_e(ν))` and
//!   `L = D_|W'| ∓ W'` (or `D_|W'| - |W'|`), which needs `ν > 0`.
//!
//! On every supported input the two agree entry for entry.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Digraph, VertexVector};
use crate::sparse::SparseMatrix;

/// Which edge pairs are encouraged to share a cluster.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AffinityKind {
    /// Producer-receptor emphasizing: co-incoming and co-outgoing pairs.
    Pre,
    /// Directed-path emphasizing: pairs forming a length-2 directed path.
    Dpe,
    /// Region emphasizing: any pair sharing a vertex.
    Rge,
}

impl AffinityKind {
    pub const ALL: [AffinityKind; 3] = [AffinityKind::Pre, AffinityKind::Dpe, AffinityKind::Rge];

    pub fn as_str(&self) -> &'static str {
        match self {
            AffinityKind::Pre => "pre",
            AffinityKind::Dpe => "dpe",
            AffinityKind::Rge => "rge",
        }
    }
}

impl fmt::Display for AffinityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AffinityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pre" => Ok(AffinityKind::Pre),
            "dpe" => Ok(AffinityKind::Dpe),
            "rge" => Ok(AffinityKind::Rge),
            other => Err(Error::Config(format!(
                "unknown method `{other}` (expected pre, dpe or rge)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstructionPath {
    PsiPhi,
    EdgeLaplacian,
}

/// Signed edge-pair structure: `sgn(BᵀB)` off the diagonal, transformed per
/// affinity kind.
#[derive(Debug, Clone, PartialEq)]
pub struct PsiMatrix {
    pub kind: AffinityKind,
    pub matrix: SparseMatrix,
}

/// `(BᵀB)_pq` for `p != q`, accumulated vertex by vertex.
fn gram_off_diagonal(g: &Digraph) -> Vec<BTreeMap<usize, i64>> {
    let b = g.incidence();
    let mut acc: Vec<BTreeMap<usize, i64>> = vec![BTreeMap::new(); g.n_edges()];
    for i in 0..g.n_vertices() {
        let row = b.row(i);
        for &(p, sp) in row {
            for &(q, sq) in row {
                if p != q {
                    *acc[p].entry(q).or_insert(0) += i64::from(sp) * i64::from(sq);
                }
            }
        }
    }
    acc
}

pub fn build_psi(g: &Digraph, kind: AffinityKind) -> PsiMatrix {
    let diag = match kind {
        AffinityKind::Dpe => -1.0,
        _ => 1.0,
    };
    let rows = gram_off_diagonal(g)
        .into_iter()
        .enumerate()
        .map(|(p, r)| {
            let mut out: Vec<(usize, f64)> = r
                .into_iter()
                .filter(|&(_, v)| v != 0)
                .map(|(q, v)| {
                    let s = v.signum() as f64;
                    let s = match kind {
                        AffinityKind::Pre => s,
                        AffinityKind::Dpe => -s,
                        AffinityKind::Rge => s.abs(),
                    };
                    (q, s)
                })
                .collect();
            let at = out.partition_point(|e| e.0 < p);
            out.insert(at, (p, diag));
            out
        })
        .collect();
    PsiMatrix {
        kind,
        matrix: SparseMatrix::from_rows(g.n_edges(), rows),
    }
}

/// Non-negative, symmetric, zero-diagonal pair weights.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiMatrix {
    pub matrix: SparseMatrix,
}

impl PhiMatrix {
    /// Validates a user-supplied weight matrix against `g`.
    pub fn from_user(g: &Digraph, matrix: SparseMatrix) -> Result<Self> {
        let m = g.n_edges();
        if matrix.dim() != m {
            return Err(Error::DimensionMismatch {
                what: "phi matrix dimension",
                expected: m,
                actual: matrix.dim(),
            });
        }
        for (p, q, v) in matrix.iter() {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidPhi(format!("entry ({p},{q}) = {v} is negative or non-finite")));
            }
            if p == q && v != 0.0 {
                return Err(Error::InvalidPhi(format!("diagonal entry ({p},{p}) = {v} is nonzero")));
            }
            if matrix.get(q, p) != v {
                return Err(Error::InvalidPhi(format!("entry ({p},{q}) is not symmetric")));
            }
            if v != 0.0 && !share_vertex(g, p, q) {
                return Err(Error::InvalidPhi(format!(
                    "entry ({p},{q}) = {v} links edges without a common vertex"
                )));
            }
        }
        Ok(PhiMatrix { matrix })
    }
}

fn share_vertex(g: &Digraph, p: usize, q: usize) -> bool {
    let (a, b) = (g.edge(p), g.edge(q));
    a.source == b.source || a.source == b.target || a.target == b.source || a.target == b.target
}

/// `φ_pq = ν_i` for each vertex `v_i` shared by the distinct edges `e_p`,
/// `e_q`. Pairs sharing both endpoints (multi-edges, 2-cycles) get
/// `ν_k + ν_ℓ`. Self-edges carry no pair weight, matching their zero
/// incidence column.
pub fn build_phi(g: &Digraph, nu: &VertexVector) -> Result<PhiMatrix> {
    nu.check_len(g)?;
    nu.check_non_negative()?;
    let mut incident = vec![Vec::new(); g.n_vertices()];
    for (p, e) in g.edges().iter().enumerate() {
        if !e.is_self_edge() {
            incident[e.source].push(p);
            incident[e.target].push(p);
        }
    }
    let mut triplets = Vec::new();
    for (edges, &w) in incident.iter().zip(nu.values()) {
        for &p in edges {
            for &q in edges {
                if p != q {
                    triplets.push((p, q, w));
                }
            }
        }
    }
    Ok(PhiMatrix {
        matrix: SparseMatrix::from_triplets(g.n_edges(), triplets),
    })
}

/// `L_e(ν) = Bᵀ diag(ν) B`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeLaplacian {
    pub matrix: SparseMatrix,
    pub nu: VertexVector,
}

impl EdgeLaplacian {
    /// `(L_e w)_p = ν_ℓ d_net,ℓ - ν_k d_net,k` for edge `p = ℓ -> k`.
    pub fn differential(&self, w: &[f64]) -> Result<Vec<f64>> {
        if w.len() != self.matrix.dim() {
            return Err(Error::DimensionMismatch {
                what: "edge weight vector length",
                expected: self.matrix.dim(),
                actual: w.len(),
            });
        }
        Ok(self.matrix.mul_vec(w))
    }

    /// `wᵀ L_e w`.
    pub fn quadratic_sum(&self, w: &[f64]) -> Result<f64> {
        let lw = self.differential(w)?;
        Ok(lw.iter().zip(w).map(|(a, b)| a * b).sum())
    }
}

/// `ν` may be any real vector here; only the clustering path needs `ν > 0`.
pub fn build_edge_laplacian(g: &Digraph, nu: &VertexVector) -> Result<EdgeLaplacian> {
    nu.check_len(g)?;
    let b = g.incidence();
    let mut triplets = Vec::new();
    for (i, &w) in nu.values().iter().enumerate() {
        let row = b.row(i);
        for &(p, sp) in row {
            for &(q, sq) in row {
                triplets.push((p, q, w * f64::from(sp * sq)));
            }
        }
    }
    Ok(EdgeLaplacian {
        matrix: SparseMatrix::from_triplets(g.n_edges(), triplets),
        nu: nu.clone(),
    })
}

pub fn edge_differential(le: &EdgeLaplacian, w: &[f64]) -> Result<Vec<f64>> {
    le.differential(w)
}

/// Signed undirected graph on the digraph's edges.
///
/// A dual edge has weight `-ν_i` when its two digraph edges form a directed
/// path through `v_i` and `+ν_i` when they converge on or diverge from `v_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualGraph {
    /// `W'`, zero diagonal.
    pub weights: SparseMatrix,
    /// Diagonal of `D_|W'|`.
    pub abs_degree: Vec<f64>,
}

impl DualGraph {
    pub fn from_signed_weights(weights: SparseMatrix) -> Self {
        let weights = weights.off_diagonal();
        let abs_degree = weights.map(|_, _, v| v.abs()).row_sums();
        DualGraph {
            weights,
            abs_degree,
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.weights.dim()
    }

    /// Number of nonzero dual edges.
    pub fn n_edges(&self) -> usize {
        self.weights.nonzero_upper()
    }
}

pub fn build_dual_graph(le: &EdgeLaplacian) -> DualGraph {
    DualGraph::from_signed_weights(le.matrix.off_diagonal())
}

/// Symmetric PSD `M x M` operator whose quadratic form is the clustering cost.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowLaplacian {
    pub matrix: SparseMatrix,
    pub kind: AffinityKind,
    pub path: ConstructionPath,
}

pub fn build_flow_laplacian(
    g: &Digraph,
    nu: &VertexVector,
    kind: AffinityKind,
    path: ConstructionPath,
) -> Result<FlowLaplacian> {
    nu.check_len(g)?;
    match path {
        ConstructionPath::PsiPhi => {
            let phi = build_phi(g, nu)?;
            Ok(assemble_psi_phi(&build_psi(g, kind), &phi))
        }
        ConstructionPath::EdgeLaplacian => {
            nu.check_positive_on_edges(g)?;
            let dual = build_dual_graph(&build_edge_laplacian(g, nu)?);
            Ok(flow_laplacian_from_dual(&dual, kind))
        }
    }
}

/// `D_|W'| - W'`, `D_|W'| + W'` or `D_|W'| - |W'|`.
pub fn flow_laplacian_from_dual(dual: &DualGraph, kind: AffinityKind) -> FlowLaplacian {
    let off = dual.weights.map(|_, _, v| match kind {
        AffinityKind::Pre => -v,
        AffinityKind::Dpe => v,
        AffinityKind::Rge => -v.abs(),
    });
    FlowLaplacian {
        matrix: off.with_diagonal(&dual.abs_degree),
        kind,
        path: ConstructionPath::EdgeLaplacian,
    }
}

/// Flow Laplacian from a caller-supplied `Φ`.
pub fn build_flow_laplacian_general(
    g: &Digraph,
    phi: &PhiMatrix,
    kind: AffinityKind,
) -> Result<FlowLaplacian> {
    let phi = PhiMatrix::from_user(g, phi.matrix.clone())?;
    Ok(assemble_psi_phi(&build_psi(g, kind), &phi))
}

/// `L = D_ΨΦ - Ψ ⊙ Φ` with `d_ΨΦ(p) = ½ Σ_q φ_pq (1 + ψ_pq²)`, which is
/// `Σ_q φ_pq` whenever `Φ` is supported on `Ψ`.
fn assemble_psi_phi(psi: &PsiMatrix, phi: &PhiMatrix) -> FlowLaplacian {
    let n = phi.matrix.dim();
    let mut diag = vec![0.0; n];
    let rows = (0..n)
        .map(|p| {
            let mut d = 0.0;
            let row = phi
                .matrix
                .row(p)
                .iter()
                .filter(|&&(q, _)| q != p)
                .map(|&(q, f)| {
                    let s = psi.matrix.get(p, q);
                    d += 0.5 * f * (1.0 + s * s);
                    (q, -s * f)
                })
                .collect();
            diag[p] = d;
            row
        })
        .collect();
    FlowLaplacian {
        matrix: SparseMatrix::from_rows(n, rows).with_diagonal(&diag),
        kind: psi.kind,
        path: ConstructionPath::PsiPhi,
    }
}

/// `D_Φ = diag(Φ 1)`.
pub fn phi_degree(phi: &PhiMatrix) -> Vec<f64> {
    phi.matrix.row_sums()
}
