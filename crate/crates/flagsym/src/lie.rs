//! Graded Lie algebras given by structure constants; Heisenberg algebras and
//! the symplectically flat models of flag symbols.

use crate::exact::sparse::{self, SparseVec};
use crate::exact::{HalfWeight, RatMatrix, Rational};
use crate::symbol::{build_model_space, FlagSymbol, GradedSymplecticSpace, RowKind};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LieError {
    #[error("Heisenberg algebra needs an even positive dimension, got {0}")]
    OddDimension(usize),
    #[error("Jacobi identity fails on basis triple ({i}, {j}, {k})")]
    Jacobi { i: usize, j: usize, k: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedLieAlgebra {
    pub labels: Vec<String>,
    pub weights: Vec<HalfWeight>,
    brackets: Vec<Vec<SparseVec>>,
}

impl GradedLieAlgebra {
    /// Abelian algebra on the given basis.
    pub fn abelian(labels: Vec<String>, weights: Vec<HalfWeight>) -> Self {
        assert_eq!(labels.len(), weights.len());
        let n = labels.len();
        GradedLieAlgebra {
            labels,
            weights,
            brackets: vec![vec![Vec::new(); n]; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// Sets `[b_i, b_j] = v` and `[b_j, b_i] = -v`.
    pub fn set_bracket(&mut self, i: usize, j: usize, v: SparseVec) {
        if i == j {
            assert!(v.is_empty(), "[b, b] must vanish");
            return;
        }
        self.brackets[j][i] = sparse::scale(&v, &-Rational::one());
        self.brackets[i][j] = v;
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &SparseVec {
        &self.brackets[i][j]
    }

    pub fn bracket_sparse(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut acc: Vec<(usize, Rational)> = Vec::new();
        for (i, a) in x {
            for (j, b) in y {
                let c = &self.brackets[*i][*j];
                if c.is_empty() {
                    continue;
                }
                let ab = a * b;
                for (k, v) in c {
                    acc.push((*k, &ab * v));
                }
            }
        }
        sparse::normalize(acc)
    }

    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let r = self.bracket_sparse(&sparse::from_dense(x), &sparse::from_dense(y));
        sparse::to_dense(&r, self.dim())
    }

    /// Matrix of `ad b_i`.
    pub fn ad(&self, i: usize) -> RatMatrix {
        let n = self.dim();
        let mut m = RatMatrix::zeros(n, n);
        for j in 0..n {
            for (k, v) in &self.brackets[i][j] {
                m[(*k, j)] = v.clone();
            }
        }
        m
    }

    /// Nonzero `c_ij^k` with `i < j`.
    pub fn structure_constants(&self) -> Vec<(usize, usize, usize, Rational)> {
        let mut out = Vec::new();
        for i in 0..self.dim() {
            for j in i + 1..self.dim() {
                for (k, v) in &self.brackets[i][j] {
                    out.push((i, j, *k, v.clone()));
                }
            }
        }
        out
    }

    pub fn check_antisymmetry(&self) -> bool {
        (0..self.dim()).all(|i| {
            self.brackets[i][i].is_empty()
                && (0..self.dim()).all(|j| {
                    sparse::axpy(&self.brackets[i][j], &Rational::one(), &self.brackets[j][i]).is_empty()
                })
        })
    }

    pub fn check_grading(&self) -> bool {
        (0..self.dim()).all(|i| {
            (0..self.dim()).all(|j| {
                self.brackets[i][j]
                    .iter()
                    .all(|(k, _)| self.weights[*k] == self.weights[i] + self.weights[j])
            })
        })
    }

    /// First basis triple violating the Jacobi identity.
    pub fn check_jacobi(&self) -> Result<(), LieError> {
        let n = self.dim();
        let unit = |i: usize| vec![(i, Rational::one())];
        for i in 0..n {
            for j in i..n {
                let bij = &self.brackets[i][j];
                for k in j..n {
                    let t1 = self.bracket_sparse(bij, &unit(k));
                    let t2 = self.bracket_sparse(&self.brackets[j][k], &unit(i));
                    let t3 = self.bracket_sparse(&self.brackets[k][i], &unit(j));
                    let s = sparse::axpy(&sparse::axpy(&t1, &Rational::one(), &t2), &Rational::one(), &t3);
                    if !s.is_empty() {
                        return Err(LieError::Jacobi { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }

    /// Basis (echelon) of the subalgebra generated by `gens`.
    pub fn generated_subalgebra(&self, gens: &[SparseVec]) -> Vec<SparseVec> {
        let n = self.dim();
        let mut red = sparse::RowReducer::new(n);
        let mut span: Vec<SparseVec> = Vec::new();
        for g in gens {
            if red.insert(g.clone()) {
                span.push(g.clone());
            }
        }
        let mut frontier = span.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for a in &frontier {
                for g in gens {
                    let b = self.bracket_sparse(g, a);
                    if red.insert(b.clone()) {
                        next.push(b.clone());
                        span.push(b);
                    }
                }
            }
            frontier = next;
        }
        span
    }

    /// Depth layers `g^{-1} = D`, `g^{-k-1} = [D, g^{-k}]`, if every basis
    /// vector lies in exactly one layer and brackets respect the depth.
    pub fn fundamental_depths(&self, dist: &[usize]) -> Option<Vec<i64>> {
        let n = self.dim();
        let mut depth = vec![0i64; n];
        let mut layer: Vec<usize> = dist.to_vec();
        let mut seen = vec![false; n];
        let mut d = 1;
        while !layer.is_empty() {
            for &i in &layer {
                if seen[i] {
                    return None;
                }
                seen[i] = true;
                depth[i] = -d;
            }
            let mut next: Vec<usize> = Vec::new();
            for &g in dist {
                for &a in &layer {
                    for (k, _) in &self.brackets[g][a] {
                        if !next.contains(k) {
                            next.push(*k);
                        }
                    }
                }
            }
            // Layers must be spanned by basis vectors and stay disjoint.
            next.sort();
            if next.iter().any(|&k| seen[k]) {
                return None;
            }
            layer = next;
            d += 1;
        }
        if seen.iter().any(|s| !s) {
            return None;
        }
        for i in 0..n {
            for j in 0..n {
                if self.brackets[i][j].iter().any(|(k, _)| depth[*k] != depth[i] + depth[j]) {
                    return None;
                }
            }
        }
        Some(depth)
    }
}

impl serde::Serialize for GradedLieAlgebra {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        #[derive(serde::Serialize)]
        struct B<'a> {
            label: &'a str,
            weight: HalfWeight,
        }
        let basis: Vec<B> = self
            .labels
            .iter()
            .zip(&self.weights)
            .map(|(l, w)| B { label: l, weight: *w })
            .collect();
        let brackets: Vec<(usize, usize, usize, Rational)> = self.structure_constants();
        let mut st = s.serialize_struct("GradedLieAlgebra", 3)?;
        st.serialize_field("dim", &self.dim())?;
        st.serialize_field("basis", &basis)?;
        st.serialize_field("brackets", &brackets)?;
        st.end()
    }
}

/// `X ⊕ ℝz` with `[v_i, v_j] = σ(v_i, v_j) z`, `X` at weight −1, `z` at −2.
pub fn heisenberg_from_sigma(labels: Vec<String>, sigma: &RatMatrix) -> GradedLieAlgebra {
    let n = labels.len();
    assert!(sigma.is_square() && sigma.rows() == n);
    let mut all = labels;
    all.push("z".to_string());
    let mut weights = vec![HalfWeight::from_int(-1); n];
    weights.push(HalfWeight::from_int(-2));
    let mut g = GradedLieAlgebra::abelian(all, weights);
    for i in 0..n {
        for j in i + 1..n {
            let c = &sigma[(i, j)];
            if !c.is_zero() {
                g.set_bracket(i, j, vec![(n, c.clone())]);
            }
        }
    }
    g
}

/// Heisenberg algebra of a model space.
pub fn heisenberg_of(x: &GradedSymplecticSpace) -> GradedLieAlgebra {
    heisenberg_from_sigma(x.basis.iter().map(|b| b.label.clone()).collect(), &x.sigma)
}

/// Heisenberg algebra on `p_1..p_k, q_1..q_k` with `σ(p_i, q_i) = 1`.
pub fn heisenberg(dim_x: usize) -> Result<GradedLieAlgebra, LieError> {
    if dim_x == 0 || dim_x % 2 == 1 {
        return Err(LieError::OddDimension(dim_x));
    }
    let k = dim_x / 2;
    let mut sigma = RatMatrix::zeros(dim_x, dim_x);
    for i in 0..k {
        sigma[(i, k + i)] = Rational::one();
        sigma[(k + i, i)] = -Rational::one();
    }
    let labels = (1..=k)
        .map(|i| format!("p{i}"))
        .chain((1..=k).map(|i| format!("q{i}")))
        .collect();
    Ok(heisenberg_from_sigma(labels, &sigma))
}

#[derive(Debug, Clone)]
pub struct FlatModel {
    pub algebra: GradedLieAlgebra,
    /// Basis indices spanning the distribution.
    pub distribution: Vec<usize>,
    pub symbol: FlagSymbol,
    /// For each tableau vector of the algebra, its index in the model space.
    pub tableau_index: Vec<Option<usize>>,
}

/// The flat model: `x`, the tableau vectors of weight at most 1/2, and `z`.
pub fn flat_model(sym: &FlagSymbol) -> FlatModel {
    let x = build_model_space(sym);
    let keep: Vec<usize> = (0..x.dim())
        .filter(|&i| x.weight(i) <= HalfWeight::HALF)
        .collect();
    let n = keep.len() + 2;
    let z = n - 1;
    let mut labels = vec!["x".to_string()];
    let mut weights = vec![HalfWeight::from_int(-1)];
    let mut pos = vec![usize::MAX; x.dim()];
    let mut tableau_index = vec![None];
    for (k, &i) in keep.iter().enumerate() {
        pos[i] = k + 1;
        labels.push(x.basis[i].label.clone());
        weights.push(x.weight(i));
        tableau_index.push(Some(i));
    }
    labels.push("z".to_string());
    weights.push(HalfWeight::ZERO);
    tableau_index.push(None);
    let mut g = GradedLieAlgebra::abelian(labels, weights);
    for members in &x.row_members {
        for pair in members.windows(2) {
            if pos[pair[0]] != usize::MAX {
                g.set_bracket(0, pos[pair[0]], vec![(pos[pair[1]], Rational::one())]);
            }
        }
    }
    for (ci, _) in sym.components().iter().enumerate() {
        let rows: Vec<usize> = (0..x.rows.len()).filter(|&r| x.rows[r].component == ci).collect();
        let find = |r: usize, w: HalfWeight| x.row_members[r].iter().copied().find(|&i| x.weight(i) == w);
        match x.rows[rows[0]].kind {
            RowKind::E => {
                if let (Some(e0), Some(f0)) = (find(rows[0], HalfWeight::ZERO), find(rows[1], HalfWeight::ZERO)) {
                    g.set_bracket(pos[e0], pos[f0], vec![(z, Rational::one())]);
                }
            }
            RowKind::R => {
                let a = find(rows[0], HalfWeight::HALF).unwrap();
                let b = find(rows[0], -HalfWeight::HALF).unwrap();
                g.set_bracket(pos[a], pos[b], vec![(z, Rational::one())]);
            }
            RowKind::F => unreachable!("components start with an e-row or an R-row"),
        }
    }
    let distribution: Vec<usize> = (0..n)
        .filter(|&i| i == 0 || (i != z && (g.weights[i] == HalfWeight::ZERO || g.weights[i] == HalfWeight::HALF)))
        .collect();
    FlatModel {
        algebra: g,
        distribution,
        symbol: sym.clone(),
        tableau_index,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::parse_symbol;

    fn fm(s: &str) -> FlatModel {
        flat_model(&parse_symbol(s).unwrap())
    }

    #[test]
    fn heisenberg_examples() {
        let h = heisenberg(4).unwrap();
        assert_eq!(h.dim(), 5);
        assert!(h.check_jacobi().is_ok());
        assert!(h.check_grading());
        let centre: Vec<usize> = (0..5).filter(|&i| (0..5).all(|j| h.bracket_basis(i, j).is_empty())).collect();
        assert_eq!(centre, vec![4]);
        let h2 = heisenberg(2).unwrap();
        assert_eq!(h2.bracket_basis(0, 1), &vec![(2, Rational::one())]);
        assert_eq!(heisenberg(3), Err(LieError::OddDimension(3)));
    }

    #[test]
    fn flat_model_dimensions() {
        assert_eq!(fm("D(2,3)").algebra.dim(), 7);
        assert_eq!(fm("R(5/2)").algebra.dim(), 6);
        assert_eq!(fm("D(2,3)+R(5/2)").algebra.dim(), 11);
    }

    #[test]
    fn flat_models_are_lie_algebras() {
        for s in ["D(2,3)", "R(5/2)", "D(2,3)+R(5/2)", "D(1,2)+D(3,4)", "D(2,1)"] {
            let m = fm(s);
            assert!(m.algebra.check_antisymmetry(), "{s}");
            assert!(m.algebra.check_grading(), "{s}");
            assert_eq!(m.algebra.check_jacobi(), Ok(()), "{s}");
        }
    }

    #[test]
    fn fundamental_only_without_mixing() {
        let d = fm("D(2,3)");
        assert_eq!(d.distribution.len(), 3);
        assert!(d.algebra.fundamental_depths(&d.distribution).is_some());
        let r = fm("R(5/2)");
        assert_eq!(r.distribution.len(), 2);
        assert!(r.algebra.fundamental_depths(&r.distribution).is_some());
        let m = fm("D(2,3)+R(5/2)");
        assert_eq!(m.distribution.len(), 4);
        assert!(m.algebra.fundamental_depths(&m.distribution).is_none());
        let gens: Vec<SparseVec> = m.distribution.iter().map(|&i| vec![(i, Rational::one())]).collect();
        assert_eq!(m.algebra.generated_subalgebra(&gens).len(), m.algebra.dim());
    }

    #[test]
    fn corrupted_constant_is_caught() {
        let mut m = fm("D(2,3)").algebra;
        // Basis: x, e_0, e_-1, f_0, f_-1, f_-2, z. Setting [e_0, f_-1] = z
        // breaks the triple (x, e_0, f_0).
        m.set_bracket(1, 4, vec![(6, Rational::one())]);
        assert_eq!(m.check_jacobi(), Err(LieError::Jacobi { i: 0, j: 1, k: 3 }));
    }
}
