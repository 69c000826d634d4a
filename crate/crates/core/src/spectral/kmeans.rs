//! Row normalization of spectral embeddings and k-means++ with restarts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::eigen::EigenBasis;
use crate::error::{Error, Result};

pub const DEFAULT_RESTARTS: usize = 20;
const MAX_LLOYD_ITERATIONS: usize = 300;
const REL_OBJECTIVE_TOL: f64 = 1e-9;
const ZERO_ROW_TOL: f64 = 1e-12;
const DISTINCT_TOL: f64 = 1e-10;

/// `M x K` embedding, one row per edge.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub rows: Vec<Vec<f64>>,
    /// Rows whose norm was too small to normalize; they stay at the origin.
    pub zero_rows: Vec<usize>,
}

impl FeatureMatrix {
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }
}

/// Scales every row of the eigenvector matrix to unit Euclidean norm.
pub fn row_normalize(basis: &EigenBasis) -> FeatureMatrix {
    let mut zero_rows = Vec::new();
    let rows = (0..basis.dim())
        .map(|p| {
            let mut r = basis.row(p);
            let n = r.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n < ZERO_ROW_TOL {
                zero_rows.push(p);
                r.iter_mut().for_each(|x| *x = 0.0);
            } else {
                r.iter_mut().for_each(|x| *x /= n);
            }
            r
        })
        .collect();
    if !zero_rows.is_empty() {
        log::warn!("{} embedding rows have zero norm", zero_rows.len());
    }
    FeatureMatrix { rows, zero_rows }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansResult {
    /// Labels in `0..k_used`, numbered by first appearance.
    pub labels: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    pub objective: f64,
    pub k_used: usize,
    pub warnings: Vec<String>,
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn count_distinct(rows: &[Vec<f64>], limit: usize) -> usize {
    let mut reps: Vec<&[f64]> = Vec::new();
    for r in rows {
        if reps.iter().all(|q| dist2(q, r) > DISTINCT_TOL * DISTINCT_TOL) {
            reps.push(r);
            if reps.len() >= limit {
                break;
            }
        }
    }
    reps.len()
}

/// Nearest center, lowest index on ties.
fn nearest(row: &[f64], centers: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, z) in centers.iter().enumerate() {
        let d = dist2(row, z);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

fn seed_centers(rows: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let m = rows.len();
    let mut centers = vec![rows[rng.random_range(0..m)].clone()];
    let mut d2: Vec<f64> = rows.iter().map(|r| dist2(r, &centers[0])).collect();
    while centers.len() < k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let mut t = rng.random::<f64>() * total;
            let mut chosen = None;
            for (i, &d) in d2.iter().enumerate() {
                if d > 0.0 {
                    chosen = Some(i);
                    if t < d {
                        break;
                    }
                    t -= d;
                }
            }
            chosen.expect("positive total has a positive entry")
        } else {
            rng.random_range(0..m)
        };
        centers.push(rows[pick].clone());
        for (i, r) in rows.iter().enumerate() {
            d2[i] = d2[i].min(dist2(r, &centers[centers.len() - 1]));
        }
    }
    centers
}

/// One seeded Lloyd run; `None` if a cluster empties.
fn lloyd(rows: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> Option<(Vec<usize>, Vec<Vec<f64>>, f64)> {
    let dim = rows.first().map_or(0, Vec::len);
    let mut centers = seed_centers(rows, k, rng);
    let mut labels = vec![0usize; rows.len()];
    let mut prev = f64::INFINITY;
    for _ in 0..MAX_LLOYD_ITERATIONS {
        let mut obj = 0.0;
        for (i, r) in rows.iter().enumerate() {
            let (c, d) = nearest(r, &centers);
            labels[i] = c;
            obj += d;
        }
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (r, &c) in rows.iter().zip(&labels) {
            counts[c] += 1;
            sums[c].iter_mut().zip(r).for_each(|(s, x)| *s += x);
        }
        if counts.contains(&0) {
            return None;
        }
        for ((z, s), n) in centers.iter_mut().zip(sums).zip(&counts) {
            *z = s.into_iter().map(|x| x / *n as f64).collect();
        }
        let done = prev.is_finite() && (prev - obj).abs() <= REL_OBJECTIVE_TOL * prev.max(f64::MIN_POSITIVE);
        prev = obj;
        if done || obj == 0.0 {
            break;
        }
    }
    // Final assignment against the last centroids.
    let mut obj = 0.0;
    for (i, r) in rows.iter().enumerate() {
        let (c, d) = nearest(r, &centers);
        labels[i] = c;
        obj += d;
    }
    let mut counts = vec![0usize; k];
    labels.iter().for_each(|&c| counts[c] += 1);
    if counts.contains(&0) {
        return None;
    }
    Some((labels, centers, obj))
}

/// Renumbers labels in order of first appearance.
pub fn relabel_by_first_appearance(labels: &[usize]) -> Vec<usize> {
    let mut map: Vec<Option<usize>> = Vec::new();
    let mut next = 0;
    labels
        .iter()
        .map(|&c| {
            if c >= map.len() {
                map.resize(c + 1, None);
            }
            *map[c].get_or_insert_with(|| {
                next += 1;
                next - 1
            })
        })
        .collect()
}

/// k-means++ seeding followed by Lloyd iterations, best of `restarts` runs.
///
/// All randomness comes from a ChaCha8 stream seeded with `seed`. If every
/// run for `k` leaves a cluster empty, `k` is lowered and a warning recorded.
pub fn kmeans_pp(features: &FeatureMatrix, k: usize, seed: u64, restarts: usize) -> Result<KMeansResult> {
    let rows = &features.rows;
    let m = rows.len();
    if k == 0 || k > m {
        return Err(Error::InvalidClusterCount { k, m });
    }
    let distinct = count_distinct(rows, k);
    if distinct < k {
        return Err(Error::TooFewDistinctRows { k, distinct });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut warnings = Vec::new();
    for k_try in (1..=k).rev() {
        let mut best: Option<(Vec<usize>, Vec<Vec<f64>>, f64)> = None;
        for _ in 0..restarts.max(1) {
            if let Some(run) = lloyd(rows, k_try, &mut rng) {
                if best.as_ref().is_none_or(|b| run.2 < b.2) {
                    best = Some(run);
                }
            }
        }
        if let Some((labels, centers, objective)) = best {
            let relabeled = relabel_by_first_appearance(&labels);
            let mut centroids = vec![Vec::new(); k_try];
            for (old, new) in labels.iter().zip(&relabeled) {
                if centroids[*new].is_empty() {
                    centroids[*new] = centers[*old].clone();
                }
            }
            return Ok(KMeansResult {
                labels: relabeled,
                centroids,
                objective,
                k_used: k_try,
                warnings,
            });
        }
        let msg = format!("every k-means run with k = {k_try} left a cluster empty; retrying with k = {}", k_try - 1);
        log::warn!("{msg}");
        warnings.push(msg);
    }
    unreachable!("k = 1 never leaves a cluster empty")
}
