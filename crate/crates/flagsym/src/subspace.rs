//! Linear subspaces of matrix spaces.

use crate::exact::sparse::{self, Coordinates, RowReducer, SparseVec};
use crate::exact::{RatMatrix, Rational};

#[derive(Debug, Clone)]
pub struct MatrixSubspace {
    pub rows: usize,
    pub cols: usize,
    pub basis: Vec<RatMatrix>,
}

impl MatrixSubspace {
    pub fn zero(rows: usize, cols: usize) -> Self {
        MatrixSubspace {
            rows,
            cols,
            basis: Vec::new(),
        }
    }

    /// Keeps the independent members of `mats`, in order.
    pub fn from_spanning(rows: usize, cols: usize, mats: impl IntoIterator<Item = RatMatrix>) -> Self {
        let mut red = RowReducer::new(rows * cols);
        let mut basis = Vec::new();
        for m in mats {
            assert_eq!((m.rows(), m.cols()), (rows, cols));
            if red.insert(m.to_sparse()) {
                basis.push(m);
            }
        }
        MatrixSubspace { rows, cols, basis }
    }

    pub fn from_flat(rows: usize, cols: usize, vecs: &[SparseVec]) -> Self {
        Self::from_spanning(rows, cols, vecs.iter().map(|v| RatMatrix::from_sparse(rows, cols, v)))
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn flat(&self) -> Vec<SparseVec> {
        self.basis.iter().map(|m| m.to_sparse()).collect()
    }

    fn reducer(&self) -> RowReducer {
        let mut red = RowReducer::new(self.rows * self.cols);
        for m in &self.basis {
            red.insert(m.to_sparse());
        }
        red
    }

    pub fn contains(&self, m: &RatMatrix) -> bool {
        self.reducer().contains(m.to_sparse())
    }

    pub fn is_subspace_of(&self, other: &MatrixSubspace) -> bool {
        let red = other.reducer();
        self.basis.iter().all(|m| red.contains(m.to_sparse()))
    }

    pub fn same_as(&self, other: &MatrixSubspace) -> bool {
        self.dim() == other.dim() && self.is_subspace_of(other)
    }

    pub fn sum(&self, other: &MatrixSubspace) -> MatrixSubspace {
        Self::from_spanning(self.rows, self.cols, self.basis.iter().chain(&other.basis).cloned())
    }

    pub fn intersect(&self, other: &MatrixSubspace) -> MatrixSubspace {
        // Solve Σ a_i A_i = Σ b_j B_j.
        let n = self.rows * self.cols;
        let (p, q) = (self.dim(), other.dim());
        let mut cols_of: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); n];
        for (i, m) in self.basis.iter().enumerate() {
            for (k, v) in m.to_sparse() {
                cols_of[k].push((i, v));
            }
        }
        for (j, m) in other.basis.iter().enumerate() {
            for (k, v) in m.to_sparse() {
                cols_of[k].push((p + j, -v));
            }
        }
        let kernel = sparse::kernel_of_rows(p + q, cols_of.into_iter().map(sparse::normalize));
        Self::from_spanning(
            self.rows,
            self.cols,
            kernel.iter().map(|k| {
                let mut acc = RatMatrix::zeros(self.rows, self.cols);
                for (i, c) in k {
                    if *i < p {
                        acc = &acc + &self.basis[*i].scale(c);
                    }
                }
                acc
            }),
        )
    }

    /// Coordinates relative to the stored basis.
    pub fn coordinates(&self, m: &RatMatrix) -> Option<Vec<Rational>> {
        Coordinates::new(self.rows * self.cols, &self.flat()).solve(&m.to_sparse())
    }

    pub fn combination(&self, coeffs: &[Rational]) -> RatMatrix {
        let mut acc = RatMatrix::zeros(self.rows, self.cols);
        for (m, c) in self.basis.iter().zip(coeffs) {
            if !c.is_zero() {
                acc = &acc + &m.scale(c);
            }
        }
        acc
    }

    /// Image under a linear map on matrices.
    pub fn map(&self, f: impl Fn(&RatMatrix) -> RatMatrix) -> MatrixSubspace {
        let imgs: Vec<RatMatrix> = self.basis.iter().map(f).collect();
        let (r, c) = imgs.first().map_or((self.rows, self.cols), |m| (m.rows(), m.cols()));
        Self::from_spanning(r, c, imgs)
    }

    /// `{A ∈ self : f(A) ∈ target}` for a linear `f`.
    pub fn preimage_in(&self, target: &MatrixSubspace, f: impl Fn(&RatMatrix) -> RatMatrix) -> MatrixSubspace {
        let p = self.dim();
        let q = target.dim();
        let n = target.rows * target.cols;
        let mut cols_of: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); n];
        for (i, m) in self.basis.iter().enumerate() {
            for (k, v) in f(m).to_sparse() {
                cols_of[k].push((i, v));
            }
        }
        for (j, m) in target.basis.iter().enumerate() {
            for (k, v) in m.to_sparse() {
                cols_of[k].push((p + j, -v));
            }
        }
        let kernel = sparse::kernel_of_rows(p + q, cols_of.into_iter().map(sparse::normalize));
        Self::from_spanning(
            self.rows,
            self.cols,
            kernel.iter().map(|k| {
                let coeffs: Vec<Rational> = (0..p)
                    .map(|i| k.iter().find(|e| e.0 == i).map(|e| e.1.clone()).unwrap_or_default())
                    .collect();
                self.combination(&coeffs)
            }),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(i: usize, j: usize) -> RatMatrix {
        let mut m = RatMatrix::zeros(2, 2);
        m[(i, j)] = Rational::one();
        m
    }

    #[test]
    fn intersection_and_sum() {
        let a = MatrixSubspace::from_spanning(2, 2, [unit(0, 0), unit(0, 1)]);
        let b = MatrixSubspace::from_spanning(2, 2, [&unit(0, 0) + &unit(1, 1), unit(0, 1)]);
        assert_eq!(a.intersect(&b).dim(), 1);
        assert_eq!(a.sum(&b).dim(), 3);
        assert!(a.intersect(&b).contains(&unit(0, 1)));
    }

    #[test]
    fn preimage_of_commutator() {
        // Matrices commuting with diag(1, 2): preimage of 0 under ad.
        let all = MatrixSubspace::from_spanning(2, 2, [unit(0, 0), unit(0, 1), unit(1, 0), unit(1, 1)]);
        let d = RatMatrix::from_ints(&[&[1, 0], &[0, 2]]);
        let c = all.preimage_in(&MatrixSubspace::zero(2, 2), |m| m.commutator(&d));
        assert_eq!(c.dim(), 2);
    }
}
