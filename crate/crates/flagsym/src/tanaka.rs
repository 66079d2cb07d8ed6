//! Degree-zero derivations and Tanaka prolongations of negatively graded
//! Lie algebras.
//!
//! Every element of a non-negative degree `p` is stored as its action on the
//! basis of the negative part `m`: the image of a basis vector of degree `d`
//! lies in the piece of degree `p + d`, which is either a piece of `m` or an
//! earlier level. Brackets of two non-negative elements are computed
//! recursively from `[f1, f2](v) = [f1(v), f2] + [f1, f2(v)]`.

use std::collections::HashMap;
use std::sync::Mutex;

use rand::Rng;

use crate::exact::sparse::{self, Coordinates, RowReducer, SparseVec};
use crate::exact::{HalfWeight, RatMatrix, Rational};
use crate::lie::{GradedLieAlgebra, LieError};
use crate::subspace::MatrixSubspace;
use crate::symbol::GradedSymplecticSpace;

pub const DEFAULT_KMAX: usize = 6;

#[derive(Debug, thiserror::Error)]
pub enum TanakaError {
    #[error("basis vector {0} does not have a negative integer weight")]
    NotNegative(String),
    #[error("g0 basis element {0} is not a grade-preserving derivation")]
    NotDerivation(usize),
    #[error("no vanishing degree up to k_max = {}", .0.levels.len() - 1)]
    CapReached(Box<TanakaProlongation>),
    #[error("degree {0} is nonzero although degree {} vanished", .0 - 1)]
    NonVanishingAfterZero(usize),
    #[error(transparent)]
    Jacobi(#[from] LieError),
}

/// All grade-preserving derivations of `t`.
pub fn deg0_derivations(t: &GradedLieAlgebra) -> MatrixSubspace {
    let n = t.dim();
    let mut var = vec![vec![usize::MAX; n]; n];
    let mut nvars = 0;
    for k in 0..n {
        for j in 0..n {
            if t.weights[k] == t.weights[j] {
                var[k][j] = nvars;
                nvars += 1;
            }
        }
    }
    let mut red = RowReducer::new(nvars);
    for i in 0..n {
        for j in i + 1..n {
            // a[b_i,b_j] - [a b_i, b_j] - [b_i, a b_j] = 0, component k.
            let mut rows: HashMap<usize, Vec<(usize, Rational)>> = HashMap::new();
            for (m, c) in t.bracket_basis(i, j) {
                for k in 0..n {
                    if var[k][*m] != usize::MAX {
                        rows.entry(k).or_default().push((var[k][*m], c.clone()));
                    }
                }
            }
            for p in 0..n {
                if var[p][i] != usize::MAX {
                    for (k, c) in t.bracket_basis(p, j) {
                        rows.entry(*k).or_default().push((var[p][i], -c));
                    }
                }
                if var[p][j] != usize::MAX {
                    for (k, c) in t.bracket_basis(i, p) {
                        rows.entry(*k).or_default().push((var[p][j], -c));
                    }
                }
            }
            let mut keys: Vec<usize> = rows.keys().copied().collect();
            keys.sort();
            for k in keys {
                red.insert(sparse::normalize(rows.remove(&k).unwrap()));
            }
        }
    }
    let mut mats = Vec::new();
    for v in red.kernel() {
        let mut m = RatMatrix::zeros(n, n);
        for (idx, c) in v {
            let (k, j) = index_pair(&var, idx);
            m[(k, j)] = c;
        }
        mats.push(m);
    }
    MatrixSubspace::from_spanning(n, n, mats)
}

fn index_pair(var: &[Vec<usize>], idx: usize) -> (usize, usize) {
    for (k, row) in var.iter().enumerate() {
        if let Some(j) = row.iter().position(|&v| v == idx) {
            return (k, j);
        }
    }
    unreachable!()
}

/// Whether `a` is a grade-preserving derivation of `t`.
pub fn is_derivation(t: &GradedLieAlgebra, a: &RatMatrix) -> bool {
    let n = t.dim();
    for k in 0..n {
        for j in 0..n {
            if !a[(k, j)].is_zero() && t.weights[k] != t.weights[j] {
                return false;
            }
        }
    }
    let col = |j: usize| sparse::from_dense(&a.column(j));
    for i in 0..n {
        for j in i + 1..n {
            let lhs = sparse::from_dense(&a.mul_vec(&sparse::to_dense(t.bracket_basis(i, j), n)));
            let r1 = t.bracket_sparse(&col(i), &vec![(j, Rational::one())]);
            let r2 = t.bracket_sparse(&vec![(i, Rational::one())], &col(j));
            let rhs = sparse::axpy(&r1, &Rational::one(), &r2);
            if sparse::axpy(&lhs, &-Rational::one(), &rhs).is_empty() == false {
                return false;
            }
        }
    }
    true
}

/// Extends `A ∈ csp(X)` to a derivation of the Heisenberg algebra of `x`
/// (basis `X` then `z`), acting on `z` by the conformal factor.
pub fn csp_to_derivation(x: &GradedSymplecticSpace, a: &RatMatrix) -> RatMatrix {
    let n = x.dim();
    let lhs = &(&a.transpose() * &x.sigma) + &(&x.sigma * a);
    let (i, j) = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .find(|&(i, j)| !x.sigma[(i, j)].is_zero())
        .expect("nondegenerate form");
    let c = &lhs[(i, j)] / &x.sigma[(i, j)];
    let mut m = RatMatrix::zeros(n + 1, n + 1);
    for r in 0..n {
        for s in 0..n {
            m[(r, s)] = a[(r, s)].clone();
        }
    }
    m[(n, n)] = c;
    m
}

#[derive(Debug)]
pub struct Level {
    /// `maps[q][b]`: image of the negative basis vector `b`, in local
    /// coordinates of the piece of degree `p + deg(b)`.
    pub maps: Vec<Vec<SparseVec>>,
    offsets: Vec<usize>,
    coords: Coordinates,
}

impl Level {
    pub fn dim(&self) -> usize {
        self.maps.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct DegreeDim {
    pub k: i64,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct ProlongationReport {
    pub negative: Vec<DegreeDim>,
    pub g0_dim: usize,
    pub degrees: Vec<DegreeDim>,
    pub terminated: bool,
    pub termination_degree: Option<usize>,
    pub total_dim: usize,
}

#[derive(Debug)]
pub struct TanakaProlongation {
    pub neg: GradedLieAlgebra,
    deg: Vec<i64>,
    local: Vec<usize>,
    neg_pieces: Vec<Vec<usize>>,
    /// `levels[0] = g0`, `levels[k] = u^k`; the first vanishing degree is not stored.
    pub levels: Vec<Level>,
    pub termination_degree: Option<usize>,
    cache: Mutex<HashMap<(usize, usize, usize, usize), SparseVec>>,
}

fn unit(i: usize) -> SparseVec {
    vec![(i, Rational::one())]
}

impl TanakaProlongation {
    fn new(neg: GradedLieAlgebra) -> Result<Self, TanakaError> {
        let mut deg = Vec::new();
        for (i, w) in neg.weights.iter().enumerate() {
            match w.as_int() {
                Some(d) if d < 0 => deg.push(d),
                _ => return Err(TanakaError::NotNegative(neg.labels[i].clone())),
            }
        }
        let mu = deg.iter().map(|d| -d).max().unwrap_or(0) as usize;
        let mut neg_pieces = vec![Vec::new(); mu];
        let mut local = vec![0; deg.len()];
        for (i, &d) in deg.iter().enumerate() {
            let piece = &mut neg_pieces[(-d - 1) as usize];
            local[i] = piece.len();
            piece.push(i);
        }
        Ok(TanakaProlongation {
            neg,
            deg,
            local,
            neg_pieces,
            levels: Vec::new(),
            termination_degree: None,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn neg_dim(&self) -> usize {
        self.deg.len()
    }

    pub fn depth(&self) -> usize {
        self.neg_pieces.len()
    }

    /// Global indices of the negative piece of degree `d < 0`.
    pub fn neg_piece(&self, d: i64) -> &[usize] {
        &self.neg_pieces[(-d - 1) as usize]
    }

    pub fn degree_of(&self, b: usize) -> i64 {
        self.deg[b]
    }

    pub fn piece_dim(&self, d: i64) -> usize {
        if d < 0 {
            self.neg_pieces.get((-d - 1) as usize).map_or(0, |p| p.len())
        } else {
            self.levels.get(d as usize).map_or(0, |l| l.dim())
        }
    }

    pub fn terminated(&self) -> bool {
        self.termination_degree.is_some()
    }

    fn to_global(&self, d: i64, v: &SparseVec) -> SparseVec {
        let piece = self.neg_piece(d);
        v.iter().map(|(i, c)| (piece[*i], c.clone())).collect::<Vec<_>>()
    }

    fn to_local(&self, v: SparseVec) -> SparseVec {
        sparse::normalize(v.into_iter().map(|(g, c)| (self.local[g], c)).collect())
    }

    /// Bracket of homogeneous elements given in local coordinates.
    pub fn bracket(&self, d1: i64, v1: &SparseVec, d2: i64, v2: &SparseVec) -> SparseVec {
        if v1.is_empty() || v2.is_empty() || self.piece_dim(d1 + d2) == 0 && d1 + d2 < 0 {
            return Vec::new();
        }
        match (d1 < 0, d2 < 0) {
            (true, true) => {
                let g = self.neg.bracket_sparse(&self.to_global(d1, v1), &self.to_global(d2, v2));
                self.to_local(g)
            }
            (false, true) => {
                let piece = self.neg_piece(d2);
                let mut acc = Vec::new();
                for (q, a) in v1 {
                    for (lb, b) in v2 {
                        let ab = a * b;
                        for (k, c) in &self.levels[d1 as usize].maps[*q][piece[*lb]] {
                            acc.push((*k, &ab * c));
                        }
                    }
                }
                sparse::normalize(acc)
            }
            (true, false) => sparse::scale(&self.bracket(d2, v2, d1, v1), &-Rational::one()),
            (false, false) => {
                let mut acc = Vec::new();
                for (q1, a) in v1 {
                    for (q2, b) in v2 {
                        let ab = a * b;
                        for (k, c) in self.pos_bracket(d1 as usize, *q1, d2 as usize, *q2) {
                            acc.push((k, &ab * &c));
                        }
                    }
                }
                sparse::normalize(acc)
            }
        }
    }

    fn pos_bracket(&self, p1: usize, q1: usize, p2: usize, q2: usize) -> SparseVec {
        let key = (p1, q1, p2, q2);
        if let Some(v) = self.cache.lock().unwrap().get(&key) {
            return v.clone();
        }
        let p = p1 + p2;
        let mut images = Vec::with_capacity(self.neg_dim());
        for b in 0..self.neg_dim() {
            let db = self.deg[b];
            let xb = &self.levels[p1].maps[q1][b];
            let yb = &self.levels[p2].maps[q2][b];
            let t1 = self.bracket(p1 as i64 + db, xb, p2 as i64, &unit(q2));
            let t2 = self.bracket(p1 as i64, &unit(q1), p2 as i64 + db, yb);
            images.push(sparse::axpy(&t1, &Rational::one(), &t2));
        }
        let out = if p < self.levels.len() {
            let lvl = &self.levels[p];
            let mut flat = Vec::new();
            for (b, img) in images.iter().enumerate() {
                for (k, c) in img {
                    flat.push((lvl.offsets[b] + k, c.clone()));
                }
            }
            lvl.coords
                .solve(&sparse::normalize(flat))
                .map(|c| sparse::from_dense(&c))
                .expect("bracket leaves the prolongation")
        } else {
            assert!(images.iter().all(|v| v.is_empty()), "bracket beyond the last nonzero degree");
            Vec::new()
        };
        self.cache.lock().unwrap().insert(key, out.clone());
        out
    }

    fn offsets_for(&self, k: i64) -> (Vec<usize>, usize) {
        let mut offsets = Vec::with_capacity(self.neg_dim());
        let mut acc = 0;
        for b in 0..self.neg_dim() {
            offsets.push(acc);
            acc += self.piece_dim(k + self.deg[b]);
        }
        (offsets, acc)
    }

    fn level_from_flat(&self, k: i64, flat: Vec<SparseVec>) -> Level {
        let (offsets, len) = self.offsets_for(k);
        let maps = flat
            .iter()
            .map(|v| {
                (0..self.neg_dim())
                    .map(|b| {
                        let lo = offsets[b];
                        let hi = lo + self.piece_dim(k + self.deg[b]);
                        v.iter()
                            .filter(|(i, _)| *i >= lo && *i < hi)
                            .map(|(i, c)| (i - lo, c.clone()))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Level {
            maps,
            offsets,
            coords: Coordinates::new(len, &flat),
        }
    }

    fn push_g0(&mut self, g0: &MatrixSubspace) -> Result<(), TanakaError> {
        let n = self.neg_dim();
        let (offsets, _) = self.offsets_for(0);
        let mut flat = Vec::new();
        for (q, a) in g0.basis.iter().enumerate() {
            if a.rows() != n || a.cols() != n || !is_derivation(&self.neg, a) {
                return Err(TanakaError::NotDerivation(q));
            }
            let mut v = Vec::new();
            for b in 0..n {
                for r in 0..n {
                    if !a[(r, b)].is_zero() {
                        v.push((offsets[b] + self.local[r], a[(r, b)].clone()));
                    }
                }
            }
            flat.push(sparse::normalize(v));
        }
        let lvl = self.level_from_flat(0, flat);
        self.levels.push(lvl);
        Ok(())
    }

    /// Solves the Leibniz system for degree `k = levels.len()`.
    fn solve_level(&self, k: i64) -> Vec<SparseVec> {
        let n = self.neg_dim();
        let (off, len) = self.offsets_for(k);
        let mut red = RowReducer::new(len);
        for a in 0..n {
            for b in a + 1..n {
                let t = k + self.deg[a] + self.deg[b];
                let dim_t = self.piece_dim(t);
                if dim_t == 0 {
                    continue;
                }
                let mut rows: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); dim_t];
                for (c, coef) in self.neg.bracket_basis(a, b) {
                    for r in 0..self.piece_dim(k + self.deg[*c]) {
                        rows[r].push((off[*c] + r, coef.clone()));
                    }
                }
                let da = k + self.deg[a];
                for r in 0..self.piece_dim(da) {
                    for (comp, v) in self.bracket(da, &unit(r), self.deg[b], &unit(self.local[b])) {
                        rows[comp].push((off[a] + r, -v));
                    }
                }
                let db = k + self.deg[b];
                for r in 0..self.piece_dim(db) {
                    for (comp, v) in self.bracket(self.deg[a], &unit(self.local[a]), db, &unit(r)) {
                        rows[comp].push((off[b] + r, -v));
                    }
                }
                for row in rows {
                    red.insert(sparse::normalize(row));
                }
            }
        }
        red.kernel()
    }

    /// Re-checks the Leibniz identity for `samples` random elements of
    /// degree `k` on all pairs of negative basis vectors.
    pub fn leibniz_recheck<R: Rng>(&self, k: usize, samples: usize, rng: &mut R) -> bool {
        let Some(lvl) = self.levels.get(k) else {
            return true;
        };
        let n = self.neg_dim();
        for _ in 0..samples {
            let coeffs: SparseVec = sparse::normalize(
                (0..lvl.dim())
                    .map(|q| (q, Rational::from_int(rng.gen_range(-5..=5))))
                    .collect(),
            );
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            let (da, db) = (self.deg[a], self.deg[b]);
            let ki = k as i64;
            let ab = self.to_local(self.neg.bracket_basis(a, b).clone());
            let lhs = if ab.is_empty() {
                Vec::new()
            } else {
                self.bracket(ki, &coeffs, da + db, &ab)
            };
            let fa = self.bracket(ki, &coeffs, da, &unit(self.local[a]));
            let fb = self.bracket(ki, &coeffs, db, &unit(self.local[b]));
            let r1 = self.bracket(ki + da, &fa, db, &unit(self.local[b]));
            let r2 = self.bracket(da, &unit(self.local[a]), ki + db, &fb);
            let rhs = sparse::axpy(&r1, &Rational::one(), &r2);
            if !sparse::axpy(&lhs, &-Rational::one(), &rhs).is_empty() {
                return false;
            }
        }
        true
    }

    pub fn report(&self) -> ProlongationReport {
        let negative = (1..=self.depth())
            .rev()
            .map(|d| DegreeDim {
                k: -(d as i64),
                dim: self.neg_pieces[d - 1].len(),
            })
            .collect();
        let mut degrees: Vec<DegreeDim> = (1..self.levels.len())
            .map(|k| DegreeDim {
                k: k as i64,
                dim: self.levels[k].dim(),
            })
            .collect();
        if let Some(t) = self.termination_degree {
            degrees.push(DegreeDim { k: t as i64, dim: 0 });
        }
        ProlongationReport {
            negative,
            g0_dim: self.levels.first().map_or(0, |l| l.dim()),
            degrees,
            terminated: self.terminated(),
            termination_degree: self.termination_degree,
            total_dim: self.total_dim(),
        }
    }

    pub fn total_dim(&self) -> usize {
        self.neg_dim() + self.levels.iter().map(|l| l.dim()).sum::<usize>()
    }

    pub fn dim_at(&self, k: usize) -> usize {
        self.levels.get(k).map_or(0, |l| l.dim())
    }

    /// Structure constants of the whole prolongation. Basis: the negative
    /// part, then each level in order.
    pub fn assemble(&self) -> Result<GradedLieAlgebra, TanakaError> {
        let n = self.neg_dim();
        let mut labels = self.neg.labels.clone();
        let mut weights = self.neg.weights.clone();
        let mut start = vec![0usize; self.levels.len()];
        for (p, l) in self.levels.iter().enumerate() {
            start[p] = labels.len();
            for q in 0..l.dim() {
                labels.push(format!("u{p}_{q}"));
                weights.push(HalfWeight::from_int(p as i64));
            }
        }
        let total = labels.len();
        // (degree, local index) of each global basis element
        let mut home = Vec::with_capacity(total);
        for b in 0..n {
            home.push((self.deg[b], self.local[b]));
        }
        for (p, l) in self.levels.iter().enumerate() {
            for q in 0..l.dim() {
                home.push((p as i64, q));
            }
        }
        let globalize = |d: i64, v: SparseVec| -> SparseVec {
            if d < 0 {
                let piece = self.neg_piece(d);
                sparse::normalize(v.into_iter().map(|(i, c)| (piece[i], c)).collect())
            } else {
                v.into_iter().map(|(i, c)| (start[d as usize] + i, c)).collect()
            }
        };
        let mut g = GradedLieAlgebra::abelian(labels, weights);
        for i in 0..total {
            for j in i + 1..total {
                let (d1, l1) = home[i];
                let (d2, l2) = home[j];
                let r = self.bracket(d1, &unit(l1), d2, &unit(l2));
                if !r.is_empty() {
                    g.set_bracket(i, j, globalize(d1 + d2, r));
                }
            }
        }
        g.check_jacobi()?;
        Ok(g)
    }
}

/// Tanaka prolongation of `(t, g0)` up to degree `k_max`.
pub fn tanaka_prolong(t: &GradedLieAlgebra, g0: &MatrixSubspace, k_max: usize) -> Result<TanakaProlongation, TanakaError> {
    let mut tp = TanakaProlongation::new(t.clone())?;
    tp.push_g0(g0)?;
    for k in 1..=k_max {
        let flat = tp.solve_level(k as i64);
        if flat.is_empty() {
            tp.termination_degree = Some(k);
            if !tp.solve_level(k as i64 + 1).is_empty() {
                return Err(TanakaError::NonVanishingAfterZero(k + 1));
            }
            return Ok(tp);
        }
        let lvl = tp.level_from_flat(k as i64, flat);
        tp.levels.push(lvl);
    }
    Err(TanakaError::CapReached(Box::new(tp)))
}

/// `g0 = u^F(δ)` as derivations of the Heisenberg algebra of `x`.
pub fn flag_g0(x: &GradedSymplecticSpace) -> MatrixSubspace {
    let n = x.dim() + 1;
    let u = crate::flag::flag_prolong(x).algebra();
    MatrixSubspace::from_spanning(n, n, u.basis.iter().map(|a| csp_to_derivation(x, a)))
}

/// Tanaka prolongation of `(η, u^F(δ))` for the model space of a symbol.
pub fn prolong_symbol(x: &GradedSymplecticSpace, k_max: usize) -> Result<TanakaProlongation, TanakaError> {
    tanaka_prolong(&crate::lie::heisenberg_of(x), &flag_g0(x), k_max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct KillingSignature {
    pub rank: usize,
    pub positive: usize,
    pub negative: usize,
}

/// Inertia of the Killing form by exact symmetric congruence.
pub fn killing_signature(a: &GradedLieAlgebra) -> KillingSignature {
    let n = a.dim();
    let ads: Vec<RatMatrix> = (0..n).map(|i| a.ad(i)).collect();
    let mut b = RatMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut t = Rational::zero();
            for k in 0..n {
                for l in 0..n {
                    let x = &ads[i][(k, l)];
                    if x.is_zero() {
                        continue;
                    }
                    let y = &ads[j][(l, k)];
                    if !y.is_zero() {
                        t += &(x * y);
                    }
                }
            }
            b[(i, j)] = t.clone();
            b[(j, i)] = t;
        }
    }
    symmetric_inertia(b)
}

/// Signs of a diagonalization of a symmetric matrix by congruence.
pub fn symmetric_inertia(mut b: RatMatrix) -> KillingSignature {
    let n = b.rows();
    let (mut pos, mut neg) = (0, 0);
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        let piv = active.iter().copied().find(|&i| !b[(i, i)].is_zero());
        let p = match piv {
            Some(p) => p,
            None => {
                let pair = active
                    .iter()
                    .flat_map(|&i| active.iter().map(move |&j| (i, j)))
                    .find(|&(i, j)| i != j && !b[(i, j)].is_zero());
                let Some((i, j)) = pair else { break };
                // e_i <- e_i + e_j makes the diagonal entry 2 b_ij.
                for &k in &active {
                    let v = &b[(i, k)] + &b[(j, k)];
                    b[(i, k)] = v;
                }
                for &k in &active {
                    let v = &b[(k, i)] + &b[(k, j)];
                    b[(k, i)] = v;
                }
                i
            }
        };
        let d = b[(p, p)].clone();
        if d.signum() > 0 {
            pos += 1;
        } else {
            neg += 1;
        }
        active.retain(|&i| i != p);
        for &i in &active {
            if b[(i, p)].is_zero() {
                continue;
            }
            let f = &b[(i, p)] / &d;
            for &k in &active {
                let v = &b[(i, k)] - &(&f * &b[(p, k)]);
                b[(i, k)] = v;
            }
            b[(i, p)] = Rational::zero();
        }
        for &i in &active {
            b[(p, i)] = Rational::zero();
        }
    }
    KillingSignature {
        rank: pos + neg,
        positive: pos,
        negative: neg,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::heisenberg;

    #[test]
    fn heisenberg_derivations_are_csp() {
        for dx in [2usize, 4, 6] {
            let h = heisenberg(dx).unwrap();
            assert_eq!(deg0_derivations(&h).dim(), dx * (dx + 1) / 2 + 1);
        }
    }

    #[test]
    fn abelian_line() {
        let a = GradedLieAlgebra::abelian(vec!["v".into()], vec![HalfWeight::from_int(-1)]);
        assert_eq!(deg0_derivations(&a).dim(), 1);
    }

    #[test]
    fn heisenberg_killing_is_zero() {
        let h = heisenberg(4).unwrap();
        assert_eq!(killing_signature(&h).rank, 0);
    }

    #[test]
    fn contact_prolongation_is_infinite() {
        let h = heisenberg(2).unwrap();
        let g0 = deg0_derivations(&h);
        match tanaka_prolong(&h, &g0, 2) {
            Err(TanakaError::CapReached(tp)) => {
                assert!(tp.dim_at(1) > 0 && tp.dim_at(2) > 0);
            }
            other => panic!("expected cap, got {other:?}"),
        }
    }

    #[test]
    fn trivial_g0_keeps_brackets() {
        let h = heisenberg(2).unwrap();
        let tp = tanaka_prolong(&h, &MatrixSubspace::zero(3, 3), 3).unwrap();
        assert_eq!(tp.termination_degree, Some(1));
        let g = tp.assemble().unwrap();
        assert_eq!(g, h);
    }

    #[test]
    fn g2_from_rank_two_symbol() {
        let x = crate::symbol::build_model_space(&crate::symbol::parse_symbol("R(3/2)").unwrap());
        let tp = prolong_symbol(&x, 6).unwrap();
        assert_eq!(tp.total_dim(), 14);
        let g = tp.assemble().unwrap();
        assert_eq!(killing_signature(&g).rank, 14);
    }

    #[test]
    fn sl2_inertia() {
        // Killing form of sl2 in the basis e, h, f: [[0,0,4],[0,8,0],[4,0,0]].
        let b = RatMatrix::from_ints(&[&[0, 0, 4], &[0, 8, 0], &[4, 0, 0]]);
        let s = symmetric_inertia(b);
        assert_eq!((s.rank, s.positive, s.negative), (3, 2, 1));
    }
}
