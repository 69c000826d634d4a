//! Command-line front end.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{ArgGroup, Parser};

use crate::cuts::cost_report;
use crate::error::{Error, Result};
use crate::graph::{Digraph, NuSource};
use crate::io::{self, InputFormat, ReadOptions, ResultDocument, RunMetadata, Timings};
use crate::laplacian::{build_edge_laplacian, build_phi, build_psi, AffinityKind, ConstructionPath};
use crate::spectral::eigen::DEFAULT_DENSE_CUTOFF;
use crate::spectral::kmeans::DEFAULT_RESTARTS;
use crate::spectral::{cluster_edges, ClusterOptions};
use crate::synth::generate_synthetic;

#[derive(Debug, Clone, Parser)]
#[command(name = "flowlap", version, about = "Cluster the edges of a weighted digraph")]
#[command(group(ArgGroup::new("source").required(true).args(["input", "synthetic"])))]
pub struct Cli {
    /// Edge affinity: pre, dpe or rge.
    #[arg(long)]
    pub method: AffinityKind,

    /// Number of clusters.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub k: u64,

    /// Edge list or MatrixMarket file.
    #[arg(long)]
    pub input: Option<PathBuf>,

    /// Built-in generator, e.g. `lai7`, `inout-star(2,2)`, `planted(2500,6)`.
    #[arg(long)]
    pub synthetic: Option<String>,

    /// edgelist or mtx; guessed from the extension when omitted.
    #[arg(long)]
    pub format: Option<InputFormat>,

    /// File with one vertex weight per line.
    #[arg(long)]
    pub nu: Option<PathBuf>,

    /// Use the raw Flow Laplacian instead of the volume-normalized one.
    #[arg(long)]
    pub unnormalized: bool,

    /// Treat every input edge as a pair of opposite directed edges.
    #[arg(long)]
    pub undirected: bool,

    /// Edge-list vertex indices start at 1.
    #[arg(long)]
    pub one_based: bool,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// k-means restarts.
    #[arg(long, default_value_t = DEFAULT_RESTARTS as u64, value_parser = clap::value_parser!(u64).range(1..))]
    pub restarts: u64,

    /// Largest operator handed to the dense eigensolver.
    #[arg(long, default_value_t = DEFAULT_DENSE_CUTOFF)]
    pub dense_cutoff: usize,

    #[arg(long)]
    pub out_csv: Option<PathBuf>,

    #[arg(long)]
    pub out_json: Option<PathBuf>,

    #[arg(long)]
    pub out_dot: Option<PathBuf>,

    /// Directory for Ψ, Φ, L_e, W', L and the normalized L as .mtx files.
    #[arg(long)]
    pub dump_matrices: Option<PathBuf>,

    /// Record stage timings in the JSON document.
    #[arg(long)]
    pub timings: bool,
}

fn path_string(p: &Option<PathBuf>) -> Option<String> {
    p.as_ref().map(|p| p.display().to_string())
}

fn load_graph(cli: &Cli) -> Result<Digraph> {
    match (&cli.input, &cli.synthetic) {
        (Some(path), _) => {
            let format = cli.format.unwrap_or_else(|| InputFormat::from_path(path));
            let opts = ReadOptions {
                one_based: cli.one_based,
                undirected: cli.undirected,
            };
            io::read_graph(path, format, opts)
        }
        (None, Some(spec)) => {
            let g = generate_synthetic(spec, cli.seed)?;
            if cli.undirected {
                let edges: Vec<_> = g.edges().iter().map(|e| (e.source, e.target, e.weight)).collect();
                Digraph::new(g.n_vertices(), edges, false)
            } else {
                Ok(g)
            }
        }
        (None, None) => Err(Error::Config("one of --input or --synthetic is required".into())),
    }
}

/// Runs one clustering job and writes the requested outputs.
pub fn execute(cli: &Cli) -> Result<ResultDocument> {
    let start = Instant::now();
    let mut timings = Timings::default();
    let mut lap = |name: &str, t: &mut Instant| {
        timings.stages.insert(name.to_string(), t.elapsed().as_secs_f64());
        *t = Instant::now();
    };
    let mut t = Instant::now();

    let g = load_graph(cli)?;
    let nu = cli.nu.as_deref().map(io::read_nu).transpose()?;
    lap("load", &mut t);
    log::info!("{} vertices, {} edges", g.n_vertices(), g.n_edges());

    let k = usize::try_from(cli.k).map_err(|_| Error::Config("--k is too large".into()))?;
    let opts = ClusterOptions {
        nu,
        phi: None,
        normalized: !cli.unnormalized,
        seed: cli.seed,
        restarts: cli.restarts as usize,
        dense_cutoff: cli.dense_cutoff,
        path: ConstructionPath::EdgeLaplacian,
    };
    let c = cluster_edges(&g, cli.method, k, &opts)?;
    lap("cluster", &mut t);
    let report = cost_report(&c.dual, &c.labels, c.k_used, c.kind, &c.volumes)?;
    lap("costs", &mut t);

    let timings = if cli.timings {
        timings.stages.insert("total".into(), start.elapsed().as_secs_f64());
        Some(timings)
    } else {
        None
    };
    let metadata = RunMetadata {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        method: cli.method,
        k,
        k_used: c.k_used,
        input: path_string(&cli.input),
        format: cli
            .input
            .as_ref()
            .map(|p| cli.format.unwrap_or_else(|| InputFormat::from_path(p))),
        synthetic: cli.synthetic.clone(),
        one_based: cli.one_based,
        undirected: cli.undirected,
        nu_source: c.nu.source(),
        nu_file: path_string(&cli.nu),
        normalized: !cli.unnormalized,
        seed: cli.seed,
        restarts: cli.restarts as usize,
        n_vertices: g.n_vertices(),
        n_edges: g.n_edges(),
        warnings: c.warnings.clone(),
        timings,
    };
    let doc = ResultDocument::new(metadata, &g, &c, report);

    if let Some(p) = &cli.out_csv {
        io::write_csv(&doc, p)?;
    }
    if let Some(p) = &cli.out_json {
        io::write_json(&doc, p)?;
    }
    if let Some(p) = &cli.out_dot {
        io::write_dot(&doc, p)?;
    }
    if let Some(dir) = &cli.dump_matrices {
        dump(dir, &g, &c)?;
    }
    Ok(doc)
}

fn dump(dir: &Path, g: &Digraph, c: &crate::spectral::Clustering) -> Result<()> {
    let psi = build_psi(g, c.kind);
    let phi = build_phi(g, &c.nu)?;
    let le = build_edge_laplacian(g, &c.nu)?;
    io::dump_matrices(
        dir,
        &[
            ("psi", &psi.matrix),
            ("phi", &phi.matrix),
            ("edge_laplacian", &le.matrix),
            ("dual_weights", &c.dual.weights),
            ("flow_laplacian", &c.laplacian.matrix),
            ("normalized_flow_laplacian", &c.operator.matrix),
        ],
    )
}

fn summary(doc: &ResultDocument) -> String {
    let m = &doc.metadata;
    let mut s = format!(
        "{} edges, method {}, {} clusters{}\n",
        m.n_edges,
        m.method,
        m.k_used,
        if m.nu_source == NuSource::UserSupplied { ", user nu" } else { "" }
    );
    for c in &doc.clusters.clusters {
        s.push_str(&format!(
            "cluster {}: {} edges, ucost {:.6}, volume {:.6}, ncost {:.6}\n",
            c.cluster,
            c.size,
            c.unscaled_cost.unwrap_or(f64::NAN),
            c.volume.unwrap_or(f64::NAN),
            c.normalized_cost.unwrap_or(f64::NAN)
        ));
    }
    s.push_str(&format!(
        "total ncost {:.6}\n",
        doc.clusters.total_normalized_cost.unwrap_or(f64::NAN)
    ));
    s
}

/// Parses `argv` (program name first) and runs. Returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).try_init();
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(doc) => {
            print!("{}", summary(&doc));
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_zero_is_rejected() {
        let r = Cli::try_parse_from(["flowlap", "--method", "rge", "--k", "0", "--synthetic", "lai7"]);
        assert!(r.is_err());
        assert_ne!(run(["flowlap", "--method", "rge", "--k", "0", "--synthetic", "lai7"]), 0);
    }

    #[test]
    fn needs_a_source() {
        assert!(Cli::try_parse_from(["flowlap", "--method", "rge", "--k", "2"]).is_err());
        assert!(Cli::try_parse_from([
            "flowlap", "--method", "rge", "--k", "2", "--synthetic", "lai7", "--input", "x.txt"
        ])
        .is_err());
    }

    #[test]
    fn method_parse() {
        let cli = Cli::try_parse_from(["flowlap", "--method", "DPE", "--k", "2", "--synthetic", "lai7"]).unwrap();
        assert_eq!(cli.method, AffinityKind::Dpe);
        assert_eq!(cli.seed, 0);
        assert_eq!(cli.restarts, 20);
        assert!(Cli::try_parse_from(["flowlap", "--method", "xyz", "--k", "2", "--synthetic", "lai7"]).is_err());
    }

    #[test]
    fn synthetic_run() {
        let cli = Cli::try_parse_from(["flowlap", "--method", "rge", "--k", "2", "--synthetic", "two-triangles"]).unwrap();
        let doc = execute(&cli).unwrap();
        assert_eq!(doc.labels(), vec![0, 0, 0, 1, 1, 1]);
        assert!(doc.clusters.total_normalized_cost.unwrap().abs() < 1e-12);
        assert!(doc.metadata.timings.is_none());
    }
}
