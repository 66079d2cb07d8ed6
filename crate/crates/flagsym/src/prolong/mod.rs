//! Standard prolongations of subspaces of `sp(X)` as spaces of polynomials,
//! secant ideals, Hankel minors and the comparison with Tanaka prolongations.

pub mod hankel;
pub mod secant;
pub mod verify;

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::exact::poly::monomials_of_degree;
use crate::exact::sparse::{self, RowReducer, SparseVec};
use crate::exact::{Monomial, MultiPoly, RatMatrix, Rational};
use crate::subspace::MatrixSubspace;

pub use hankel::{hankel_minor_space, HankelError};
pub use secant::{secant_ideal, CertificateKind, SecantError, SecantIdeal, VarietySampler};
pub use verify::{psi_space, verify_prolongation_theorems, VerifyReport};

/// Linearly independent homogeneous polynomials of one degree.
#[derive(Debug, Clone)]
pub struct PolySpace {
    pub vars: Arc<Vec<String>>,
    pub degree: u32,
    pub basis: Vec<MultiPoly>,
}

pub fn monomial_index(n: usize, d: u32) -> BTreeMap<Monomial, usize> {
    monomials_of_degree(n, d).into_iter().enumerate().map(|(i, m)| (m, i)).collect()
}

impl PolySpace {
    pub fn zero(vars: Arc<Vec<String>>, degree: u32) -> Self {
        PolySpace {
            vars,
            degree,
            basis: Vec::new(),
        }
    }

    /// Keeps the independent members, in order.
    pub fn from_spanning(vars: Arc<Vec<String>>, degree: u32, polys: impl IntoIterator<Item = MultiPoly>) -> Self {
        let index = monomial_index(vars.len(), degree);
        let mut red = RowReducer::new(index.len());
        let mut basis = Vec::new();
        for p in polys {
            assert!(p.is_homogeneous(degree), "inhomogeneous polynomial {p}");
            if red.insert(p.coefficients(&index)) {
                basis.push(p.with_vars(vars.clone()));
            }
        }
        PolySpace { vars, degree, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    fn reducer(&self) -> (BTreeMap<Monomial, usize>, RowReducer) {
        let index = monomial_index(self.nvars(), self.degree);
        let mut red = RowReducer::new(index.len());
        for p in &self.basis {
            red.insert(p.coefficients(&index));
        }
        (index, red)
    }

    pub fn contains(&self, p: &MultiPoly) -> bool {
        if p.is_zero() {
            return true;
        }
        if !p.is_homogeneous(self.degree) {
            return false;
        }
        let (index, red) = self.reducer();
        red.contains(p.coefficients(&index))
    }

    pub fn is_subspace_of(&self, other: &PolySpace) -> bool {
        if self.dim() == 0 {
            return true;
        }
        if self.degree != other.degree || self.nvars() != other.nvars() {
            return false;
        }
        let (index, red) = other.reducer();
        self.basis.iter().all(|p| red.contains(p.coefficients(&index)))
    }

    pub fn same_as(&self, other: &PolySpace) -> bool {
        self.dim() == other.dim() && self.is_subspace_of(other)
    }

    /// Variables occurring in some basis element.
    pub fn support(&self) -> Vec<usize> {
        let mut used = vec![false; self.nvars()];
        for p in &self.basis {
            for i in p.support() {
                used[i] = true;
            }
        }
        (0..self.nvars()).filter(|&i| used[i]).collect()
    }

    /// Renames into a ring of `n` variables, variable `i` going to `map[i]`.
    pub fn embed(&self, vars: Arc<Vec<String>>, map: &[usize]) -> PolySpace {
        let n = vars.len();
        let polys = self.basis.iter().map(|p| embed_poly(p, &vars, map, n)).collect::<Vec<_>>();
        PolySpace::from_spanning(vars, self.degree, polys)
    }

    /// Coefficient rows of the basis over the monomials of its degree.
    pub fn rows(&self) -> Vec<SparseVec> {
        let index = monomial_index(self.nvars(), self.degree);
        self.basis.iter().map(|p| p.coefficients(&index)).collect()
    }
}

pub fn embed_poly(p: &MultiPoly, vars: &Arc<Vec<String>>, map: &[usize], n: usize) -> MultiPoly {
    MultiPoly::from_terms(
        vars.clone(),
        p.terms().map(|(m, c)| {
            let mut e = vec![0; n];
            for (i, &k) in m.0.iter().enumerate() {
                e[map[i]] += k;
            }
            (Monomial(e), c.clone())
        }),
    )
}

/// Coordinate names of the model space basis.
pub fn coordinate_vars(labels: &[String]) -> Arc<Vec<String>> {
    Arc::new(labels.iter().map(|l| format!("x[{l}]")).collect())
}

/// `v ↦ σ(v, Av)`.
pub fn quadratic_form(sigma: &RatMatrix, vars: &Arc<Vec<String>>, a: &RatMatrix) -> MultiPoly {
    let b = sigma * a;
    let n = sigma.rows();
    let mut terms = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if !b[(i, j)].is_zero() {
                let mut e = vec![0; n];
                e[i] += 1;
                e[j] += 1;
                terms.push((Monomial(e), b[(i, j)].clone()));
            }
        }
    }
    MultiPoly::from_terms(vars.clone(), terms)
}

pub fn quadratic_forms(sigma: &RatMatrix, vars: &Arc<Vec<String>>, w: &MatrixSubspace) -> PolySpace {
    PolySpace::from_spanning(vars.clone(), 2, w.basis.iter().map(|a| quadratic_form(sigma, vars, a)))
}

/// Functionals on degree-`d` polynomials vanishing on `space`.
fn annihilator(space: &PolySpace) -> Vec<SparseVec> {
    let index = monomial_index(space.nvars(), space.degree);
    let mut red = RowReducer::new(index.len());
    for r in space.rows() {
        red.insert(r);
    }
    red.kernel()
}

fn falling(e: u32, k: u32) -> i64 {
    (0..k).map(|i| (e - i) as i64).product()
}

/// All degree-`k+2` polynomials whose order-`k` partials lie in `w̃`, as one
/// kernel problem. Every such polynomial only involves variables that occur
/// in `w̃`, so the problem is posed on those.
pub fn standard_prolong(sigma: &RatMatrix, vars: &Arc<Vec<String>>, w: &MatrixSubspace, k: u32) -> PolySpace {
    let q = quadratic_forms(sigma, vars, w);
    prolong_quadrics(&q, k)
}

pub fn prolong_quadrics(q: &PolySpace, k: u32) -> PolySpace {
    let vars = q.vars.clone();
    if k == 0 || q.dim() == 0 {
        return if k == 0 { q.clone() } else { PolySpace::zero(vars, k + 2) };
    }
    let supp = q.support();
    let m = supp.len();
    let local_vars: Arc<Vec<String>> = Arc::new(supp.iter().map(|&i| vars[i].clone()).collect());
    let local_q = PolySpace::from_spanning(
        local_vars.clone(),
        2,
        q.basis.iter().map(|p| {
            MultiPoly::from_terms(
                local_vars.clone(),
                p.terms().map(|(mon, c)| (Monomial(supp.iter().map(|&i| mon.0[i]).collect()), c.clone())),
            )
        }),
    );
    let ann = annihilator(&local_q);
    let quads = monomials_of_degree(m, 2);
    let target = monomial_index(m, k + 2);
    let mut red = RowReducer::new(target.len());
    for alpha in monomials_of_degree(m, k) {
        for phi in &ann {
            let mut row = Vec::new();
            for (qi, c) in phi {
                let mu = alpha.mul(&quads[*qi]);
                let coef: i64 = mu.0.iter().zip(&alpha.0).map(|(&e, &a)| falling(e, a)).product();
                row.push((target[&mu], c * &Rational::from_int(coef)));
            }
            red.insert(sparse::normalize(row));
        }
    }
    let monos: Vec<&Monomial> = target.keys().collect();
    let polys: Vec<MultiPoly> = red.kernel().into_iter().map(|v| {
        MultiPoly::from_terms(
            vars.clone(),
            v.into_iter().map(|(i, c)| {
                let mut e = vec![0; vars.len()];
                for (j, &x) in monos[i].0.iter().enumerate() {
                    e[supp[j]] = x;
                }
                (Monomial(e), c)
            }),
        )
    }).collect();
    PolySpace::from_spanning(vars, k + 2, polys)
}

/// `W^(k) = {F : ∂_i F ∈ W^(k-1) for all i}` on all variables, one degree
/// at a time.
pub fn recursive_prolong(q: &PolySpace, k: u32) -> PolySpace {
    let mut cur = q.clone();
    let n = q.nvars();
    for step in 1..=k {
        let d = 2 + step;
        let ann = annihilator(&cur);
        let lower = monomial_index(n, d - 1);
        let target = monomial_index(n, d);
        let monos: Vec<&Monomial> = target.keys().collect();
        let mut red = RowReducer::new(target.len());
        for i in 0..n {
            // ∂_i maps the monomial μ to μ_i · (μ - e_i).
            let mut image: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); lower.len()];
            for (col, mu) in monos.iter().enumerate() {
                if mu.0[i] > 0 {
                    let mut nu = (*mu).clone();
                    nu.0[i] -= 1;
                    image[lower[&nu]].push((col, Rational::from_int(mu.0[i] as i64)));
                }
            }
            for phi in &ann {
                let mut row = Vec::new();
                for (li, c) in phi {
                    for (col, v) in &image[*li] {
                        row.push((*col, c * v));
                    }
                }
                red.insert(sparse::normalize(row));
            }
        }
        let polys: Vec<MultiPoly> = red
            .kernel()
            .into_iter()
            .map(|v| MultiPoly::from_terms(q.vars.clone(), v.into_iter().map(|(i, c)| (monos[i].clone(), c))))
            .collect();
        cur = PolySpace::from_spanning(q.vars.clone(), d, polys);
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::poly::var_names;

    fn space(vars: &Arc<Vec<String>>, d: u32, polys: Vec<MultiPoly>) -> PolySpace {
        PolySpace::from_spanning(vars.clone(), d, polys)
    }

    #[test]
    fn twisted_cubic_quadrics_have_no_cubic_prolongation() {
        let v = var_names("x", 4);
        let x = |i| MultiPoly::var(v.clone(), i);
        let q = space(
            &v,
            2,
            vec![
                x(0).mul(&x(2)).sub(&x(1).mul(&x(1))),
                x(0).mul(&x(3)).sub(&x(1).mul(&x(2))),
                x(1).mul(&x(3)).sub(&x(2).mul(&x(2))),
            ],
        );
        assert_eq!(prolong_quadrics(&q, 1).dim(), 0);
        assert_eq!(recursive_prolong(&q, 1).dim(), 0);
    }

    #[test]
    fn full_quadrics_prolong_to_all_cubics() {
        let v = var_names("x", 3);
        let all = space(&v, 2, monomials_of_degree(3, 2).into_iter().map(|m| MultiPoly::monomial(v.clone(), m, Rational::one())).collect());
        assert_eq!(prolong_quadrics(&all, 1).dim(), 10);
        assert_eq!(prolong_quadrics(&all, 2).dim(), 15);
        assert!(prolong_quadrics(&all, 2).same_as(&recursive_prolong(&all, 2)));
    }

    #[test]
    fn zero_space() {
        let v = var_names("x", 3);
        assert_eq!(prolong_quadrics(&PolySpace::zero(v, 2), 3).dim(), 0);
    }
}
