//! File readers and result writers.

mod output;

pub use output::{
    dot_string, dump_matrices, matrix_market_string, read_json, write_csv, write_dot, write_json,
    write_matrix_market, EdgeRecord, ResultDocument, RunMetadata, Timings,
};

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Digraph, VertexVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputFormat {
    /// `src dst [weight]` per line.
    Edgelist,
    /// Coordinate MatrixMarket file holding `W`.
    Mtx,
}

impl fmt::Display for InputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InputFormat::Edgelist => "edgelist",
            InputFormat::Mtx => "mtx",
        })
    }
}

impl FromStr for InputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "edgelist" | "edges" | "txt" => Ok(InputFormat::Edgelist),
            "mtx" | "matrixmarket" => Ok(InputFormat::Mtx),
            other => Err(Error::Config(format!("unknown input format `{other}`"))),
        }
    }
}

impl InputFormat {
    /// Guess from the file extension; anything but `.mtx` is an edge list.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("mtx") => InputFormat::Mtx,
            _ => InputFormat::Edgelist,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ReadOptions {
    pub one_based: bool,
    pub undirected: bool,
}

fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn read_graph(path: &Path, format: InputFormat, opts: ReadOptions) -> Result<Digraph> {
    let text = read_to_string(path)?;
    match format {
        InputFormat::Edgelist => parse_edge_list(&text, path, opts),
        InputFormat::Mtx => parse_matrix_market(&text, path, opts),
    }
}

pub fn read_edge_list(path: &Path, opts: ReadOptions) -> Result<Digraph> {
    read_graph(path, InputFormat::Edgelist, opts)
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn fields(line: &str) -> impl Iterator<Item = &str> {
    line.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty())
}

fn parse_index(tok: &str, one_based: bool, path: &Path, line: usize) -> Result<usize> {
    let v: usize = tok
        .parse()
        .map_err(|_| parse_err(path, line, format!("invalid vertex index `{tok}`")))?;
    if one_based {
        v.checked_sub(1)
            .ok_or_else(|| parse_err(path, line, "vertex index 0 in a one-based file"))
    } else {
        Ok(v)
    }
}

fn parse_weight(tok: &str, path: &Path, line: usize) -> Result<f64> {
    tok.parse()
        .map_err(|_| parse_err(path, line, format!("invalid weight `{tok}`")))
}

/// Parses `src dst [weight]` lines separated by whitespace or commas. `#`
/// starts a comment; a missing weight means 1. The vertex count is one past
/// the largest index.
pub fn parse_edge_list(text: &str, path: &Path, opts: ReadOptions) -> Result<Digraph> {
    let mut edges = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line_no = no + 1;
        let line = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = fields(line).collect();
        if toks.is_empty() {
            continue;
        }
        if toks.len() < 2 || toks.len() > 3 {
            return Err(parse_err(
                path,
                line_no,
                format!("expected `src dst [weight]`, found {} fields", toks.len()),
            ));
        }
        let s = parse_index(toks[0], opts.one_based, path, line_no)?;
        let t = parse_index(toks[1], opts.one_based, path, line_no)?;
        let w = match toks.get(2) {
            Some(tok) => parse_weight(tok, path, line_no)?,
            None => 1.0,
        };
        edges.push((s, t, w));
    }
    let n = edges.iter().map(|&(s, t, _)| s.max(t) + 1).max().unwrap_or(0);
    Digraph::new(n, edges, !opts.undirected)
}

/// Reads a coordinate MatrixMarket file as `W`, where entry `(i, j)` is an
/// edge from `j` to `i`. Symmetric files contribute both orientations of
/// every off-diagonal entry; pattern files have unit weights. Explicit zeros
/// are skipped. Indices are always one-based here.
pub fn parse_matrix_market(text: &str, path: &Path, opts: ReadOptions) -> Result<Digraph> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_err(path, 1, "empty file"))?;
    let h: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if h.len() != 5 || h[0] != "%%matrixmarket" || h[1] != "matrix" || h[2] != "coordinate" {
        return Err(parse_err(
            path,
            1,
            "expected `%%MatrixMarket matrix coordinate <field> <symmetry>`",
        ));
    }
    let pattern = match h[3].as_str() {
        "real" | "integer" => false,
        "pattern" => true,
        f => return Err(parse_err(path, 1, format!("unsupported field `{f}`"))),
    };
    let symmetric = match h[4].as_str() {
        "general" => false,
        "symmetric" => true,
        s => return Err(parse_err(path, 1, format!("unsupported symmetry `{s}`"))),
    };

    let mut size: Option<(usize, usize)> = None;
    let mut seen = 0usize;
    let mut edges = Vec::new();
    for (no, raw) in lines {
        let line_no = no + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let Some((n, nnz)) = size else {
            if toks.len() != 3 {
                return Err(parse_err(path, line_no, "expected `rows cols entries` size line"));
            }
            let dims: Vec<usize> = toks
                .iter()
                .map(|t| t.parse().map_err(|_| parse_err(path, line_no, format!("invalid size `{t}`"))))
                .collect::<Result<_>>()?;
            if dims[0] != dims[1] {
                return Err(parse_err(
                    path,
                    line_no,
                    format!("adjacency matrix must be square, found {} x {}", dims[0], dims[1]),
                ));
            }
            size = Some((dims[0], dims[2]));
            continue;
        };
        let want = if pattern { 2 } else { 3 };
        if toks.len() != want {
            return Err(parse_err(path, line_no, format!("expected {want} fields, found {}", toks.len())));
        }
        seen += 1;
        if seen > nnz {
            return Err(parse_err(path, line_no, format!("more than the declared {nnz} entries")));
        }
        let i = parse_index(toks[0], true, path, line_no)?;
        let j = parse_index(toks[1], true, path, line_no)?;
        if i >= n || j >= n {
            return Err(parse_err(path, line_no, format!("entry ({}, {}) outside a {n} x {n} matrix", i + 1, j + 1)));
        }
        let w = if pattern { 1.0 } else { parse_weight(toks[2], path, line_no)? };
        if w == 0.0 {
            continue;
        }
        edges.push((j, i, w));
        if symmetric && i != j {
            edges.push((i, j, w));
        }
    }
    let (n, nnz) = size.ok_or_else(|| parse_err(path, 1, "missing size line"))?;
    if seen != nnz {
        return Err(parse_err(
            path,
            text.lines().count(),
            format!("declared {nnz} entries but found {seen}"),
        ));
    }
    Digraph::new(n, edges, !opts.undirected)
}

/// One real per line; blank lines and `#` comments are ignored.
pub fn read_nu(path: &Path) -> Result<VertexVector> {
    parse_nu(&read_to_string(path)?, path)
}

pub fn parse_nu(text: &str, path: &Path) -> Result<VertexVector> {
    let mut values = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let v: f64 = line
            .parse()
            .map_err(|_| parse_err(path, no + 1, format!("invalid value `{line}`")))?;
        if !v.is_finite() {
            return Err(parse_err(path, no + 1, "non-finite value"));
        }
        values.push(v);
    }
    Ok(VertexVector::user(values))
}
