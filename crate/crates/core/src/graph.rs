//! Weighted digraphs with a fixed edge enumeration.
//!
//! Edge `p` always refers to the `p`-th record of the input (after undirected
//! expansion), and every downstream matrix is indexed by that enumeration.

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A directed edge `source -> target`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub weight: f64,
}

impl Edge {
    pub fn is_self_edge(&self) -> bool {
        self.source == self.target
    }
}

/// Immutable weighted digraph. Multi-edges and self-edges are kept as
/// distinct edges.
#[derive(Debug, Clone, PartialEq)]
pub struct Digraph {
    n_vertices: usize,
    edges: Vec<Edge>,
    directed: bool,
    warnings: Vec<String>,
}

impl Digraph {
    /// Builds a digraph from `(source, target, weight)` triples.
    ///
    /// With `directed == false` every input edge `{i, j}` becomes the two
    /// directed edges `i -> j` and `j -> i`, emitted consecutively. Negative
    /// weights are replaced by their absolute values and a warning is recorded.
    pub fn new<I>(n_vertices: usize, edge_list: I, directed: bool) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut edges = Vec::new();
        let mut n_negative = 0usize;
        for (input_index, (source, target, weight)) in edge_list.into_iter().enumerate() {
            for index in [source, target] {
                if index >= n_vertices {
                    return Err(Error::VertexOutOfRange {
                        edge: input_index,
                        index,
                        n_vertices,
                    });
                }
            }
            if !weight.is_finite() {
                return Err(Error::NonFiniteWeight {
                    edge: input_index,
                    weight,
                });
            }
            if weight == 0.0 {
                return Err(Error::ZeroWeight { edge: input_index });
            }
            if weight < 0.0 {
                n_negative += 1;
            }
            let weight = weight.abs();
            edges.push(Edge {
                source,
                target,
                weight,
            });
            if !directed {
                edges.push(Edge {
                    source: target,
                    target: source,
                    weight,
                });
            }
        }

        let mut warnings = Vec::new();
        if n_negative > 0 {
            let msg = format!(
                "{n_negative} signed edge weight(s) replaced by absolute values; edge signs are ignored"
            );
            warn!("{msg}");
            warnings.push(msg);
        }
        Ok(Digraph {
            n_vertices,
            edges,
            directed,
            warnings,
        })
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, p: usize) -> &Edge {
        &self.edges[p]
    }

    /// False when the graph was built from undirected input.
    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn weights(&self) -> Vec<f64> {
        self.edges.iter().map(|e| e.weight).collect()
    }

    /// `‖w‖₁` over the (expanded) directed edges.
    pub fn total_abs_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight.abs()).sum()
    }

    /// Copy of the graph with edge `p` reweighted.
    pub fn with_edge_weight(&self, p: usize, weight: f64) -> Result<Digraph> {
        if p >= self.edges.len() {
            return Err(Error::DimensionMismatch {
                what: "edge index",
                expected: self.edges.len(),
                actual: p,
            });
        }
        if !weight.is_finite() {
            return Err(Error::NonFiniteWeight { edge: p, weight });
        }
        if weight == 0.0 {
            return Err(Error::ZeroWeight { edge: p });
        }
        let mut g = self.clone();
        g.edges[p].weight = weight.abs();
        Ok(g)
    }

    pub fn incidence(&self) -> IncidenceMatrix {
        IncidenceMatrix::new(self)
    }

    pub fn vertex_stats(&self) -> VertexStats {
        VertexStats::new(self)
    }

    /// Weakly connected component of every vertex, numbered by first
    /// appearance in vertex order.
    pub fn weak_components(&self) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.n_vertices).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for e in &self.edges {
            let a = find(&mut parent, e.source);
            let b = find(&mut parent, e.target);
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut ids = vec![usize::MAX; self.n_vertices];
        let mut out = vec![0; self.n_vertices];
        let mut next = 0;
        for v in 0..self.n_vertices {
            let r = find(&mut parent, v);
            if ids[r] == usize::MAX {
                ids[r] = next;
                next += 1;
            }
            out[v] = ids[r];
        }
        out
    }
}

/// Per-vertex degree statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexStats {
    /// Social participation: incident edge endpoints (a self-edge counts twice).
    pub social_participation: Vec<usize>,
    pub out_count: Vec<usize>,
    pub in_count: Vec<usize>,
    /// `⟨d_out⟩`: sum of absolute outgoing weights.
    pub abs_out_degree: Vec<f64>,
    /// `⟨d_in⟩`: sum of absolute incoming weights.
    pub abs_in_degree: Vec<f64>,
    pub abs_degree: Vec<f64>,
    pub out_degree: Vec<f64>,
    pub in_degree: Vec<f64>,
    /// `d_out - d_in`.
    pub net_degree: Vec<f64>,
}

impl VertexStats {
    fn new(g: &Digraph) -> Self {
        Self::with_weights(g, &g.weights())
    }

    /// Statistics for the topology of `g` under an arbitrary edge weight vector.
    pub fn with_weights(g: &Digraph, weights: &[f64]) -> Self {
        let n = g.n_vertices();
        let mut s = VertexStats {
            social_participation: vec![0; n],
            out_count: vec![0; n],
            in_count: vec![0; n],
            abs_out_degree: vec![0.0; n],
            abs_in_degree: vec![0.0; n],
            abs_degree: vec![0.0; n],
            out_degree: vec![0.0; n],
            in_degree: vec![0.0; n],
            net_degree: vec![0.0; n],
        };
        for (e, &w) in g.edges().iter().zip(weights) {
            s.social_participation[e.source] += 1;
            s.social_participation[e.target] += 1;
            s.out_count[e.source] += 1;
            s.in_count[e.target] += 1;
            s.abs_out_degree[e.source] += w.abs();
            s.abs_in_degree[e.target] += w.abs();
            s.out_degree[e.source] += w;
            s.in_degree[e.target] += w;
        }
        for i in 0..n {
            s.abs_degree[i] = s.abs_out_degree[i] + s.abs_in_degree[i];
            s.net_degree[i] = s.out_degree[i] - s.in_degree[i];
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NuSource {
    WeightedDegree,
    UserSupplied,
}

/// Vertex importance vector `ν`.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexVector {
    values: Vec<f64>,
    source: NuSource,
}

impl VertexVector {
    pub fn user(values: Vec<f64>) -> Self {
        VertexVector {
            values,
            source: NuSource::UserSupplied,
        }
    }

    /// `ν_i = ⟨d_i⟩ / ‖w‖₁`. Isolated vertices get zero.
    pub fn weighted_degree(g: &Digraph) -> Result<Self> {
        let total = g.total_abs_weight();
        if g.n_edges() == 0 || total <= 0.0 {
            return Err(Error::EmptyEdgeSet);
        }
        let stats = g.vertex_stats();
        Ok(VertexVector {
            values: stats.abs_degree.iter().map(|d| d / total).collect(),
            source: NuSource::WeightedDegree,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn source(&self) -> NuSource {
        self.source
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn scaled(&self, c: f64) -> Self {
        VertexVector {
            values: self.values.iter().map(|v| v * c).collect(),
            source: self.source,
        }
    }

    pub(crate) fn check_len(&self, g: &Digraph) -> Result<()> {
        if self.values.len() != g.n_vertices() {
            return Err(Error::DimensionMismatch {
                what: "vertex vector length",
                expected: g.n_vertices(),
                actual: self.values.len(),
            });
        }
        Ok(())
    }

    pub(crate) fn check_non_negative(&self) -> Result<()> {
        match self.values.iter().position(|&v| !(v >= 0.0)) {
            Some(i) => Err(Error::NegativeNu {
                vertex: i,
                value: self.values[i],
            }),
            None => Ok(()),
        }
    }

    /// Every vertex touched by an edge must have `ν > 0`.
    pub(crate) fn check_positive_on_edges(&self, g: &Digraph) -> Result<()> {
        for e in g.edges() {
            for v in [e.source, e.target] {
                if !(self.values[v] > 0.0) {
                    return Err(Error::NonPositiveNu {
                        vertex: v,
                        value: self.values[v],
                    });
                }
            }
        }
        Ok(())
    }
}

/// `ν` per the weighted-degree rule.
pub fn default_nu(g: &Digraph) -> Result<VertexVector> {
    VertexVector::weighted_degree(g)
}

/// Unweighted `N x M` incidence matrix with `b_ip = δ(i, source) - δ(i, target)`.
///
/// Stored by column; a self-edge column is identically zero.
#[derive(Debug, Clone, PartialEq)]
pub struct IncidenceMatrix {
    n_rows: usize,
    columns: Vec<Option<(usize, usize)>>,
    /// Nonzero `(edge, sign)` entries of each row, in edge order.
    rows: Vec<Vec<(usize, i8)>>,
}

impl IncidenceMatrix {
    fn new(g: &Digraph) -> Self {
        let mut rows = vec![Vec::new(); g.n_vertices()];
        let columns = g
            .edges()
            .iter()
            .enumerate()
            .map(|(p, e)| {
                if e.is_self_edge() {
                    None
                } else {
                    rows[e.source].push((p, 1));
                    rows[e.target].push((p, -1));
                    Some((e.source, e.target))
                }
            })
            .collect();
        IncidenceMatrix {
            n_rows: g.n_vertices(),
            columns,
            rows,
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn get(&self, i: usize, p: usize) -> i8 {
        match self.columns[p] {
            Some((s, _)) if s == i => 1,
            Some((_, t)) if t == i => -1,
            _ => 0,
        }
    }

    /// Nonzero entries of row `i`.
    pub fn row(&self, i: usize) -> &[(usize, i8)] {
        &self.rows[i]
    }

    pub fn to_dense(&self) -> Vec<Vec<i8>> {
        (0..self.n_rows)
            .map(|i| (0..self.n_cols()).map(|p| self.get(i, p)).collect())
            .collect()
    }
}
