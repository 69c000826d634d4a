//! Smallest eigenpairs of symmetric operators.
//!
//! Small and medium problems go through a dense solver. Past a size cutoff a
//! block Krylov iteration with Rayleigh-Ritz extraction runs directly on the
//! sparse matrix.

use faer::{Mat, Side};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::sparse::SparseMatrix;

pub const DEFAULT_DENSE_CUTOFF: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenOptions {
    /// Matrices of dimension at most this use the dense solver.
    pub dense_cutoff: usize,
    /// Residual tolerance of the iterative solver, relative to `‖A‖∞`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions {
            dense_cutoff: DEFAULT_DENSE_CUTOFF,
            tol: 1e-8,
            max_iter: 2000,
        }
    }
}

/// `K` eigenpairs in ascending eigenvalue order. `vectors[c]` is the `c`-th
/// eigenvector, of length `M`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenBasis {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    pub iterative: bool,
}

impl EigenBasis {
    pub fn k(&self) -> usize {
        self.values.len()
    }

    pub fn dim(&self) -> usize {
        self.vectors.first().map_or(0, Vec::len)
    }

    /// Row `p` of the `M x K` eigenvector matrix.
    pub fn row(&self, p: usize) -> Vec<f64> {
        self.vectors.iter().map(|v| v[p]).collect()
    }
}

fn check_finite(a: &SparseMatrix) -> Result<()> {
    if a.iter().any(|(_, _, v)| !v.is_finite()) {
        return Err(Error::EigenNonConvergence(
            "matrix has non-finite entries".into(),
        ));
    }
    Ok(())
}

fn to_faer(a: &SparseMatrix) -> Mat<f64> {
    let n = a.dim();
    let mut m = Mat::<f64>::zeros(n, n);
    for (i, j, v) in a.iter() {
        m[(i, j)] = v;
    }
    m
}

/// Flips `v` so that its largest-magnitude entry (first on ties) is positive.
fn canonical_sign(v: &mut [f64]) {
    let mut best = 0usize;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v.get(best).is_some_and(|&x| x < 0.0) {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// The `k` algebraically smallest eigenpairs of the symmetric matrix `a`.
pub fn smallest_eigenpairs(a: &SparseMatrix, k: usize, opts: &EigenOptions) -> Result<EigenBasis> {
    let m = a.dim();
    if k == 0 || k > m {
        return Err(Error::InvalidClusterCount { k, m });
    }
    check_finite(a)?;
    let mut basis = if m <= opts.dense_cutoff {
        dense_smallest(a, k)?
    } else {
        block_krylov_smallest(a, k, opts)?
    };
    basis.vectors.iter_mut().for_each(|v| canonical_sign(v));
    Ok(basis)
}

fn dense_smallest(a: &SparseMatrix, k: usize) -> Result<EigenBasis> {
    let (values, vectors) = dense_eigen(&to_faer(a))?;
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let order = &order[..k];
    Ok(EigenBasis {
        values: order.iter().map(|&i| values[i]).collect(),
        vectors: order.iter().map(|&i| vectors[i].clone()).collect(),
        iterative: false,
    })
}

/// Full dense decomposition, eigenvectors returned as columns.
fn dense_eigen(a: &Mat<f64>) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = a.nrows();
    let evd = a
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::EigenNonConvergence(format!("{e:?}")))?;
    let s = evd.S().column_vector();
    let u = evd.U();
    let values = (0..n).map(|i| s[i]).collect();
    let vectors = (0..n).map(|c| (0..n).map(|r| u[(r, c)]).collect()).collect();
    Ok((values, vectors))
}

/// Every eigenvalue of `a`, ascending.
pub fn all_eigenvalues(a: &SparseMatrix) -> Result<Vec<f64>> {
    check_finite(a)?;
    if a.dim() == 0 {
        return Ok(Vec::new());
    }
    let mut v = to_faer(a)
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::EigenNonConvergence(format!("{e:?}")))?;
    v.sort_by(f64::total_cmp);
    Ok(v)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(y, x)| *y += alpha * x);
}

/// Appends `v` to the orthonormal set `q` after two Gram-Schmidt passes,
/// unless it is numerically dependent on it.
fn push_orthonormal(q: &mut Vec<Vec<f64>>, mut v: Vec<f64>) -> bool {
    let norm0 = dot(&v, &v).sqrt();
    if norm0 == 0.0 {
        return false;
    }
    for _ in 0..2 {
        for b in q.iter() {
            let c = dot(b, &v);
            axpy(-c, b, &mut v);
        }
    }
    let norm = dot(&v, &v).sqrt();
    if norm <= 1e-10 * norm0 {
        return false;
    }
    v.iter_mut().for_each(|x| *x /= norm);
    q.push(v);
    true
}

/// Restarted block Krylov iteration on `σI - A` (σ bounds the spectrum),
/// whose dominant subspace is the bottom of the spectrum of `A`.
fn block_krylov_smallest(a: &SparseMatrix, k: usize, opts: &EigenOptions) -> Result<EigenBasis> {
    let m = a.dim();
    let norm = a.inf_norm().max(f64::MIN_POSITIVE);
    let shift = norm;
    let block = (k + 4).min(m);
    let depth = 8;
    if block * (depth + 1) >= m {
        return dense_smallest(a, k);
    }
    let apply = |x: &[f64]| -> Vec<f64> {
        let ax = a.mul_vec(x);
        x.iter().zip(ax).map(|(x, y)| shift * x - y).collect()
    };

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut x: Vec<Vec<f64>> = Vec::with_capacity(block);
    while x.len() < block {
        let v: Vec<f64> = (0..m).map(|_| rng.random::<f64>() - 0.5).collect();
        push_orthonormal(&mut x, v);
    }

    let mut worst = f64::INFINITY;
    for _ in 0..opts.max_iter {
        // Krylov basis [X, BX, ..., B^depth X].
        let mut q: Vec<Vec<f64>> = Vec::with_capacity(block * (depth + 1));
        for v in &x {
            push_orthonormal(&mut q, v.clone());
        }
        let mut frontier = q.clone();
        for _ in 0..depth {
            let mut next = Vec::with_capacity(frontier.len());
            for v in &frontier {
                let w = apply(v);
                if push_orthonormal(&mut q, w) {
                    next.push(q.last().expect("just pushed").clone());
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }

        // Rayleigh-Ritz on A.
        let aq: Vec<Vec<f64>> = q.iter().map(|v| a.mul_vec(v)).collect();
        let s = q.len();
        let h = Mat::<f64>::from_fn(s, s, |i, j| 0.5 * (dot(&q[i], &aq[j]) + dot(&q[j], &aq[i])));
        let (theta, y) = dense_eigen(&h)?;
        let mut order: Vec<usize> = (0..s).collect();
        order.sort_by(|&i, &j| theta[i].total_cmp(&theta[j]));

        let ritz = |c: usize| -> (Vec<f64>, Vec<f64>) {
            let mut v = vec![0.0; m];
            let mut av = vec![0.0; m];
            for (t, coef) in y[c].iter().enumerate() {
                axpy(*coef, &q[t], &mut v);
                axpy(*coef, &aq[t], &mut av);
            }
            (v, av)
        };

        let mut values = Vec::with_capacity(k);
        let mut vectors = Vec::with_capacity(k);
        worst = 0.0f64;
        let mut new_x = Vec::with_capacity(block);
        for (rank, &c) in order.iter().take(block).enumerate() {
            let (v, av) = ritz(c);
            if rank < k {
                let r: f64 = av
                    .iter()
                    .zip(&v)
                    .map(|(ay, y)| (ay - theta[c] * y).powi(2))
                    .sum::<f64>()
                    .sqrt();
                worst = worst.max(r);
                values.push(theta[c]);
                vectors.push(v.clone());
            }
            new_x.push(v);
        }
        if worst <= opts.tol * norm {
            return Ok(EigenBasis {
                values,
                vectors,
                iterative: true,
            });
        }
        x = new_x;
    }
    Err(Error::EigenNonConvergence(format!(
        "block Krylov solver stopped after {} restarts with residual {worst:.3e}",
        opts.max_iter
    )))
}
