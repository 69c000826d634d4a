use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cuts::CutReport;
use crate::error::{Error, Result};
use crate::graph::{Digraph, NuSource};
use crate::laplacian::AffinityKind;
use crate::sparse::SparseMatrix;
use crate::spectral::Clustering;

use super::InputFormat;

/// Settings of one run, echoed into the result document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub tool: String,
    pub version: String,
    pub method: AffinityKind,
    pub k: usize,
    pub k_used: usize,
    pub input: Option<String>,
    pub format: Option<InputFormat>,
    pub synthetic: Option<String>,
    pub one_based: bool,
    pub undirected: bool,
    pub nu_source: NuSource,
    pub nu_file: Option<String>,
    pub normalized: bool,
    pub seed: u64,
    pub restarts: usize,
    pub n_vertices: usize,
    pub n_edges: usize,
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

/// Wall-clock seconds per stage. Only written on request, since it breaks
/// byte-identical output.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Timings {
    pub stages: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub edge_index: usize,
    pub src: usize,
    pub dst: usize,
    pub weight: f64,
    pub volume: f64,
    pub cluster: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub metadata: RunMetadata,
    pub edges: Vec<EdgeRecord>,
    pub clusters: CutReport,
    pub eigenvalues: Vec<f64>,
    pub kmeans_objective: f64,
}

impl ResultDocument {
    pub fn new(metadata: RunMetadata, g: &Digraph, c: &Clustering, clusters: CutReport) -> Self {
        let edges = g
            .edges()
            .iter()
            .enumerate()
            .map(|(p, e)| EdgeRecord {
                edge_index: p,
                src: e.source,
                dst: e.target,
                weight: e.weight,
                volume: c.volumes.values[p],
                cluster: c.labels[p],
            })
            .collect();
        ResultDocument {
            metadata,
            edges,
            clusters,
            eigenvalues: c.eigen.values.clone(),
            kmeans_objective: c.kmeans_objective,
        }
    }

    pub fn labels(&self) -> Vec<usize> {
        self.edges.iter().map(|e| e.cluster).collect()
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

pub fn write_csv(doc: &ResultDocument, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in &doc.edges {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_json(doc: &ResultDocument, path: &Path) -> Result<()> {
    let mut s = serde_json::to_string_pretty(doc)?;
    s.push('\n');
    write_file(path, &s)
}

pub fn read_json(path: &Path) -> Result<ResultDocument> {
    let s = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&s)?)
}

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

/// Graphviz digraph with every edge colored by cluster.
pub fn dot_string(doc: &ResultDocument) -> String {
    let mut s = String::from("digraph flowlap {\n  node [shape=circle];\n");
    for v in 0..doc.metadata.n_vertices {
        let _ = writeln!(s, "  {v};");
    }
    for e in &doc.edges {
        let _ = writeln!(
            s,
            "  {} -> {} [dir=forward, color=\"{}\", label=\"{}\", edge_index={}, cluster={}];",
            e.src,
            e.dst,
            PALETTE[e.cluster % PALETTE.len()],
            e.cluster,
            e.edge_index,
            e.cluster
        );
    }
    s.push_str("}\n");
    s
}

pub fn write_dot(doc: &ResultDocument, path: &Path) -> Result<()> {
    write_file(path, &dot_string(doc))
}

/// Coordinate MatrixMarket text of all stored entries, one-based.
pub fn matrix_market_string(a: &SparseMatrix) -> String {
    let mut s = String::from("%%MatrixMarket matrix coordinate real general\n");
    let _ = writeln!(s, "{} {} {}", a.dim(), a.dim(), a.nnz());
    for (i, j, v) in a.iter() {
        let _ = writeln!(s, "{} {} {:e}", i + 1, j + 1, v);
    }
    s
}

pub fn write_matrix_market(a: &SparseMatrix, path: &Path) -> Result<()> {
    write_file(path, &matrix_market_string(a))
}

/// Writes each named matrix to `dir/<name>.mtx`, creating `dir`.
pub fn dump_matrices(dir: &Path, matrices: &[(&str, &SparseMatrix)]) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for (name, a) in matrices {
        write_matrix_market(a, &dir.join(format!("{name}.mtx")))?;
    }
    Ok(())
}
