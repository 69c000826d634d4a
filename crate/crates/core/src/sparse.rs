//! Square sparse matrices stored by row, used for every `M x M` operator.

use std::collections::BTreeMap;

/// Row-compressed square matrix. Both triangles are stored; rows are sorted
/// by column and contain only structurally present entries.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    n: usize,
    rows: Vec<Vec<(usize, f64)>>,
}

impl SparseMatrix {
    pub fn zeros(n: usize) -> Self {
        SparseMatrix {
            n,
            rows: vec![Vec::new(); n],
        }
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed in
    /// input order.
    pub fn from_triplets<I>(n: usize, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut acc: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); n];
        for (i, j, v) in triplets {
            *acc[i].entry(j).or_insert(0.0) += v;
        }
        SparseMatrix {
            n,
            rows: acc.into_iter().map(|r| r.into_iter().collect()).collect(),
        }
    }

    pub fn from_rows(n: usize, rows: Vec<Vec<(usize, f64)>>) -> Self {
        debug_assert_eq!(rows.len(), n);
        debug_assert!(rows
            .iter()
            .all(|r| r.windows(2).all(|w| w[0].0 < w[1].0)));
        SparseMatrix { n, rows }
    }

    pub fn from_dense(a: &[Vec<f64>]) -> Self {
        let n = a.len();
        let rows = a
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, v)| **v != 0.0)
                    .map(|(j, v)| (j, *v))
                    .collect()
            })
            .collect();
        SparseMatrix { n, rows }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let r = &self.rows[i];
        match r.binary_search_by_key(&j, |e| e.0) {
            Ok(k) => r[k].1,
            Err(_) => 0.0,
        }
    }

    /// All stored entries in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |&(j, v)| (i, j, v)))
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Stored entries strictly above the diagonal whose value is nonzero.
    pub fn nonzero_upper(&self) -> usize {
        self.iter().filter(|&(i, j, v)| j > i && v != 0.0).count()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|e| e.1).sum())
            .collect()
    }

    pub fn map(&self, f: impl Fn(usize, usize, f64) -> f64) -> Self {
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| r.iter().map(|&(j, v)| (j, f(i, j, v))).collect())
            .collect();
        SparseMatrix { n: self.n, rows }
    }

    /// Drops the diagonal entries.
    pub fn off_diagonal(&self) -> Self {
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| r.iter().copied().filter(|&(j, _)| j != i).collect())
            .collect();
        SparseMatrix { n: self.n, rows }
    }

    /// `diag(d) + self`, inserting diagonal entries where absent.
    pub fn with_diagonal(&self, d: &[f64]) -> Self {
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut out = Vec::with_capacity(r.len() + 1);
                let mut placed = false;
                for &(j, v) in r {
                    if j == i {
                        out.push((j, v + d[i]));
                        placed = true;
                    } else {
                        if !placed && j > i {
                            out.push((i, d[i]));
                            placed = true;
                        }
                        out.push((j, v));
                    }
                }
                if !placed {
                    out.push((i, d[i]));
                }
                out
            })
            .collect();
        SparseMatrix { n: self.n, rows }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|&(j, v)| v * x[j]).sum())
            .collect()
    }

    pub fn quad_form(&self, x: &[f64]) -> f64 {
        self.iter().map(|(i, j, v)| x[i] * v * x[j]).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.iter().all(|(i, j, v)| self.get(j, i) == v)
    }

    pub fn max_abs_diff(&self, other: &SparseMatrix) -> f64 {
        let a = self.iter().map(|(i, j, v)| (v - other.get(i, j)).abs());
        let b = other.iter().map(|(i, j, v)| (v - self.get(i, j)).abs());
        a.chain(b).fold(0.0, f64::max)
    }

    /// Largest absolute row sum; an upper bound on the spectral norm of a
    /// symmetric matrix.
    pub fn inf_norm(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.iter().map(|e| e.1.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut a = vec![vec![0.0; self.n]; self.n];
        for (i, j, v) in self.iter() {
            a[i][j] = v;
        }
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_accumulate() {
        let a = SparseMatrix::from_triplets(2, [(0, 1, 1.0), (0, 1, 2.0), (1, 0, 3.0)]);
        assert_eq!(a.get(0, 1), 3.0);
        assert_eq!(a.get(1, 1), 0.0);
        assert_eq!(a.nnz(), 2);
    }

    #[test]
    fn with_diagonal_keeps_order() {
        let a = SparseMatrix::from_triplets(3, [(1, 0, -1.0), (1, 2, -1.0), (0, 1, -1.0)]);
        let b = a.with_diagonal(&[1.0, 2.0, 3.0]);
        assert_eq!(b.row(1), &[(0, -1.0), (1, 2.0), (2, -1.0)]);
        assert_eq!(b.row(0), &[(0, 1.0), (1, -1.0)]);
        assert_eq!(b.row(2), &[(2, 3.0)]);
        assert_eq!(b.quad_form(&[1.0, 1.0, 1.0]), 3.0 + 2.0 - 3.0 + 1.0);
    }

    #[test]
    fn dense_round_trip() {
        let d = vec![vec![2.0, -1.0], vec![-1.0, 2.0]];
        let a = SparseMatrix::from_dense(&d);
        assert_eq!(a.to_dense(), d);
        assert!(a.is_symmetric());
        assert_eq!(a.mul_vec(&[1.0, 0.0]), vec![2.0, -1.0]);
    }
}
