#![allow(dead_code)]

use flowlap::graph::Digraph;
use flowlap::synth::{random_digraph, RandomGraphOptions, WeightDist};
use rand::Rng;

/// Random digraph with `2..=max_n` vertices and `1..=max_m` edges; self,
/// parallel and reciprocal edges allowed.
pub fn any_digraph<R: Rng>(rng: &mut R, max_n: usize, max_m: usize, weights: WeightDist) -> Digraph {
    let n = rng.random_range(2..=max_n);
    let m = rng.random_range(1..=max_m);
    random_digraph(
        &RandomGraphOptions {
            n,
            m,
            weights,
            self_edges: true,
            multi_edges: true,
            reciprocal: true,
        },
        rng,
    )
    .unwrap()
}

/// No self, parallel or reciprocal edges.
pub fn simple_digraph<R: Rng>(rng: &mut R, max_n: usize, max_m: usize, weights: WeightDist) -> Digraph {
    let n = rng.random_range(3..=max_n);
    let cap = n * (n - 1) / 2;
    let m = rng.random_range(1..=max_m.min(cap));
    random_digraph(
        &RandomGraphOptions {
            weights,
            ..RandomGraphOptions::simple(n, m)
        },
        rng,
    )
    .unwrap()
}

/// Canonical form of a labeling: clusters renumbered by first appearance.
pub fn canonical(labels: &[usize]) -> Vec<usize> {
    flowlap::spectral::kmeans::relabel_by_first_appearance(labels)
}

/// `Σ_i |ν_i| (Σ_{p ∋ i} |w_p|)²`, a magnitude bound for vertex sums of
/// squared net flows.
pub fn flow_scale(g: &Digraph, nu: &[f64], w: &[f64]) -> f64 {
    let mut touch = vec![0.0; g.n_vertices()];
    for (e, x) in g.edges().iter().zip(w) {
        touch[e.source] += x.abs();
        touch[e.target] += x.abs();
    }
    nu.iter().zip(&touch).map(|(v, t)| v.abs() * t * t).sum::<f64>().max(1.0)
}
