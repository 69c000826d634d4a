//! Synthetic digraphs for examples, tests and benchmarks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Digraph;

/// The 7-vertex, 9-edge "bottleneck" digraph (0-based).
pub const LAI7_EDGES: [(usize, usize); 9] = [
    (0, 1),
    (0, 2),
    (3, 0),
    (3, 1),
    (3, 2),
    (3, 4),
    (4, 5),
    (4, 6),
    (6, 5),
];

pub fn lai7() -> Digraph {
    Digraph::new(7, LAI7_EDGES.iter().map(|&(s, t)| (s, t, 1.0)), true).expect("valid edge set")
}

/// Two disjoint directed triangles, edges `0..3` and `3..6`.
pub fn two_triangles() -> Digraph {
    Digraph::new(
        6,
        [(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0), (3, 4, 1.0), (4, 5, 1.0), (5, 3, 1.0)],
        true,
    )
    .expect("valid edge set")
}

/// Center `0` with `n_in` edges pointing into it followed by `n_out` edges
/// leaving it.
pub fn inout_star(n_in: usize, n_out: usize) -> Result<Digraph> {
    if n_in + n_out == 0 {
        return Err(Error::InvalidGeneratorParams("star needs at least one edge".into()));
    }
    let edges = (1..=n_in)
        .map(|i| (i, 0, 1.0))
        .chain((0..n_out).map(|j| (0, n_in + 1 + j, 1.0)));
    Digraph::new(1 + n_in + n_out, edges, true)
}

/// Directed path `0 -> 1 -> ... -> m`.
pub fn directed_path(m: usize) -> Result<Digraph> {
    if m == 0 {
        return Err(Error::InvalidGeneratorParams("path needs at least one edge".into()));
    }
    Digraph::new(m + 1, (0..m).map(|i| (i, i + 1, 1.0)), true)
}

/// Cockroach-shaped digraph on `4k` vertices: an upper directed path
/// `u_0 -> ... -> u_{2k-1}`, a lower path running the opposite way, and rungs
/// `u_i -> v_i` along the second half. `5k - 2` edges.
pub fn cockroach(k: usize) -> Result<Digraph> {
    if k == 0 {
        return Err(Error::InvalidGeneratorParams("cockroach needs k >= 1".into()));
    }
    let half = 2 * k;
    let u = |i: usize| i;
    let v = |i: usize| half + i;
    let mut edges = Vec::new();
    for i in 0..half - 1 {
        edges.push((u(i), u(i + 1), 1.0));
    }
    for i in (1..half).rev() {
        edges.push((v(i), v(i - 1), 1.0));
    }
    for i in k..half {
        edges.push((u(i), v(i), 1.0));
    }
    Digraph::new(2 * half, edges, true)
}

/// Two directed `n`-cycles joined by a single edge from the first to the
/// second.
pub fn bottleneck(n: usize) -> Result<Digraph> {
    if n < 2 {
        return Err(Error::InvalidGeneratorParams("bottleneck needs n >= 2".into()));
    }
    let mut edges = Vec::new();
    for c in 0..2 {
        for i in 0..n {
            edges.push((c * n + i, c * n + (i + 1) % n, 1.0));
        }
    }
    edges.push((0, n, 1.0));
    Digraph::new(2 * n, edges, true)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightDist {
    Binary,
    /// Uniform on `(0, hi]`.
    Uniform(f64),
}

impl WeightDist {
    fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        match *self {
            WeightDist::Binary => 1.0,
            WeightDist::Uniform(hi) => hi * (1.0 - rng.random::<f64>()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomGraphOptions {
    pub n: usize,
    pub m: usize,
    pub weights: WeightDist,
    pub self_edges: bool,
    /// Allow two edges with the same source and target.
    pub multi_edges: bool,
    /// Allow both `i -> j` and `j -> i`.
    pub reciprocal: bool,
}

impl RandomGraphOptions {
    pub fn simple(n: usize, m: usize) -> Self {
        RandomGraphOptions {
            n,
            m,
            weights: WeightDist::Binary,
            self_edges: false,
            multi_edges: false,
            reciprocal: false,
        }
    }
}

fn max_edges(o: &RandomGraphOptions) -> Option<usize> {
    if o.multi_edges {
        return None;
    }
    let pairs = o.n * o.n.saturating_sub(1);
    let arcs = if o.reciprocal { pairs } else { pairs / 2 };
    Some(arcs + if o.self_edges { o.n } else { 0 })
}

/// Uniformly placed edges subject to the constraints in `opts`.
pub fn random_digraph<R: Rng>(opts: &RandomGraphOptions, rng: &mut R) -> Result<Digraph> {
    if opts.n == 0 || (opts.n == 1 && !opts.self_edges) {
        return Err(Error::InvalidGeneratorParams(format!("cannot place edges on {} vertices", opts.n)));
    }
    if max_edges(opts).is_some_and(|cap| opts.m > cap) {
        return Err(Error::InvalidGeneratorParams(format!(
            "{} edges do not fit on {} vertices under the requested constraints",
            opts.m, opts.n
        )));
    }
    let mut used = std::collections::HashSet::new();
    let mut edges = Vec::with_capacity(opts.m);
    while edges.len() < opts.m {
        let s = rng.random_range(0..opts.n);
        let t = rng.random_range(0..opts.n);
        if s == t && !opts.self_edges {
            continue;
        }
        if !opts.multi_edges && used.contains(&(s, t)) {
            continue;
        }
        if !opts.reciprocal && s != t && used.contains(&(t, s)) {
            continue;
        }
        used.insert((s, t));
        edges.push((s, t, opts.weights.sample(rng)));
    }
    Digraph::new(opts.n, edges, true)
}

/// A weakly connected random digraph: a random spanning tree with random
/// orientations plus extra simple edges. Needs `n - 1 <= m`.
fn connected_component<R: Rng>(
    n: usize,
    m: usize,
    offset: usize,
    weights: WeightDist,
    rng: &mut R,
) -> Result<Vec<(usize, usize, f64)>> {
    if n < 2 || m + 1 < n || m > n * (n - 1) / 2 {
        return Err(Error::InvalidGeneratorParams(format!(
            "no simple connected digraph with {n} vertices and {m} edges"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut used = std::collections::HashSet::new();
    let mut edges = Vec::with_capacity(m);
    let mut push = |a: usize, b: usize, rng: &mut R, edges: &mut Vec<(usize, usize, f64)>| {
        let (s, t) = if rng.random::<bool>() { (a, b) } else { (b, a) };
        used.insert((s.min(t), s.max(t)));
        edges.push((offset + s, offset + t, weights.sample(rng)));
    };
    for i in 1..n {
        let parent = order[rng.random_range(0..i)];
        push(order[i], parent, rng, &mut edges);
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            pairs.push((a, b));
        }
    }
    pairs.retain(|&(a, b)| !used.contains(&(a, b)));
    pairs.shuffle(rng);
    for &(a, b) in pairs.iter().take(m - edges.len()) {
        let (s, t) = if rng.random::<bool>() { (a, b) } else { (b, a) };
        edges.push((offset + s, offset + t, weights.sample(rng)));
    }
    Ok(edges)
}

/// Disjoint weakly connected components with the given `(vertices, edges)`
/// sizes. Edge order is shuffled; the second value is the component of every
/// edge.
pub fn random_components<R: Rng>(
    sizes: &[(usize, usize)],
    weights: WeightDist,
    rng: &mut R,
) -> Result<(Digraph, Vec<usize>)> {
    let mut tagged = Vec::new();
    let mut offset = 0;
    for (c, &(n, m)) in sizes.iter().enumerate() {
        for e in connected_component(n, m, offset, weights, rng)? {
            tagged.push((e, c));
        }
        offset += n;
    }
    tagged.shuffle(rng);
    let membership = tagged.iter().map(|t| t.1).collect();
    let g = Digraph::new(offset, tagged.into_iter().map(|t| t.0), true)?;
    Ok((g, membership))
}

/// Planted partition with `k` vertex communities and about `m` edges, a
/// small share of them between communities. Returns the community of the
/// source of every edge.
pub fn planted<R: Rng>(m: usize, k: usize, rng: &mut R) -> Result<(Digraph, Vec<usize>)> {
    if k == 0 || m < 2 * k {
        return Err(Error::InvalidGeneratorParams(format!("planted({m}, {k}) is too small")));
    }
    let per = ((m / k) as f64 / 6.0).ceil().max(4.0) as usize;
    let n = per * k;
    let inter = m / 50;
    let intra = m - inter;
    let mut used = std::collections::HashSet::new();
    let mut edges = Vec::with_capacity(m);
    let mut community = Vec::with_capacity(m);
    while edges.len() < intra {
        let c = edges.len() % k;
        let s = c * per + rng.random_range(0..per);
        let t = c * per + rng.random_range(0..per);
        if s == t || !used.insert((s, t)) {
            continue;
        }
        edges.push((s, t, 1.0));
        community.push(c);
    }
    while edges.len() < m {
        let s = rng.random_range(0..n);
        let t = rng.random_range(0..n);
        if s / per == t / per || !used.insert((s, t)) {
            continue;
        }
        edges.push((s, t, 1.0));
        community.push(s / per);
    }
    Ok((Digraph::new(n, edges, true)?, community))
}

fn parse_args(name: &str, args: &str) -> Result<Vec<usize>> {
    if args.trim().is_empty() {
        return Ok(Vec::new());
    }
    args.split(',')
        .map(|a| {
            a.trim()
                .parse()
                .map_err(|_| Error::InvalidGeneratorParams(format!("{name}: `{a}` is not a non-negative integer")))
        })
        .collect()
}

fn arity(name: &str, args: &[usize], defaults: &[usize]) -> Result<Vec<usize>> {
    match args.len() {
        0 => Ok(defaults.to_vec()),
        l if l == defaults.len() => Ok(args.to_vec()),
        l => Err(Error::InvalidGeneratorParams(format!(
            "{name} takes {} parameters, got {l}",
            defaults.len()
        ))),
    }
}

/// Builds a generator from a string such as `lai7`, `inout-star(2,2)` or
/// `planted(2500,6)`. Randomized generators draw from a ChaCha8 stream
/// seeded with `seed`.
pub fn generate_synthetic(spec: &str, seed: u64) -> Result<Digraph> {
    let spec = spec.trim();
    let (name, args) = match spec.find('(') {
        Some(i) if spec.ends_with(')') => (&spec[..i], &spec[i + 1..spec.len() - 1]),
        Some(_) => return Err(Error::InvalidGeneratorParams(format!("unbalanced parentheses in `{spec}`"))),
        None => (spec, ""),
    };
    let name = name.trim().to_ascii_lowercase();
    let args = parse_args(&name, args)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match name.as_str() {
        "lai7" => {
            arity(&name, &args, &[])?;
            Ok(lai7())
        }
        "two-triangles" => {
            arity(&name, &args, &[])?;
            Ok(two_triangles())
        }
        "inout-star" => {
            let a = arity(&name, &args, &[2, 2])?;
            inout_star(a[0], a[1])
        }
        "path" => {
            let a = arity(&name, &args, &[2])?;
            directed_path(a[0])
        }
        "cockroach" => {
            let a = arity(&name, &args, &[3])?;
            cockroach(a[0])
        }
        "bottleneck" => {
            let a = arity(&name, &args, &[4])?;
            bottleneck(a[0])
        }
        "random" => {
            let a = arity(&name, &args, &[15, 40])?;
            random_digraph(
                &RandomGraphOptions {
                    weights: WeightDist::Uniform(10.0),
                    ..RandomGraphOptions::simple(a[0], a[1])
                },
                &mut rng,
            )
        }
        "planted" => {
            let a = arity(&name, &args, &[2500, 6])?;
            Ok(planted(a[0], a[1], &mut rng)?.0)
        }
        _ => Err(Error::UnknownGenerator(spec.to_string())),
    }
}
