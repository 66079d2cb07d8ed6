//! Goh matrices of flat models as matrices of linear forms on the dual of
//! the algebra, their degeneracy loci and characteristic directions.
//!
//! A covector `λ` is a vector of dual coordinates `λ_k = λ(b_k)`. The
//! Hamiltonian `H_Y` of a vector `Y` is the linear form `λ(Y)`, and
//! `d H_Y(H⃗_X) = H_{[X,Y]}`, so every derivative below reduces to structure
//! constants.

use std::sync::Arc;

use crate::exact::pfaffian::{alt_sign, pfaffian_poly, sub_pfaffians_with_unit, SubPfaffians};
use crate::exact::sparse::{self, RowReducer, SparseVec};
use crate::exact::{MultiPoly, RatMatrix, Rational};
use crate::lie::{FlatModel, GradedLieAlgebra};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AbnormalError {
    #[error("covector does not annihilate distribution vector {0}")]
    NotInAnnihilator(String),
    #[error("covector has {got} coordinates, the algebra has dimension {expected}")]
    WrongLength { expected: usize, got: usize },
}

/// `G_ij = λ([X_i, X_j])` over the distribution basis `X_1..X_r`.
#[derive(Debug, Clone)]
pub struct GohMatrix {
    pub vars: Arc<Vec<String>>,
    /// Algebra indices of `X_1..X_r`.
    pub distribution: Vec<usize>,
    pub entries: Vec<Vec<MultiPoly>>,
}

impl GohMatrix {
    pub fn size(&self) -> usize {
        self.distribution.len()
    }

    pub fn is_skew(&self) -> bool {
        let r = self.size();
        (0..r).all(|i| (0..r).all(|j| self.entries[i][j].add(&self.entries[j][i]).is_zero()))
    }

    pub fn eval(&self, lambda: &[Rational]) -> RatMatrix {
        let r = self.size();
        let mut m = RatMatrix::zeros(r, r);
        for i in 0..r {
            for j in 0..r {
                m[(i, j)] = self.entries[i][j].eval(lambda);
            }
        }
        m
    }

    fn unit(&self) -> MultiPoly {
        MultiPoly::one(self.vars.clone())
    }
}

pub fn dual_vars(g: &GradedLieAlgebra) -> Arc<Vec<String>> {
    Arc::new(g.labels.iter().map(|l| format!("λ[{l}]")).collect())
}

/// `H_v`, the linear form `λ ↦ λ(v)`.
pub fn hamiltonian(vars: &Arc<Vec<String>>, v: &SparseVec) -> MultiPoly {
    let mut coeffs = vec![Rational::zero(); vars.len()];
    for (k, c) in v {
        coeffs[*k] = c.clone();
    }
    MultiPoly::linear(vars.clone(), &coeffs)
}

/// The vector `v` with `p = H_v`, if `p` is a linear form.
pub fn linear_form_vector(p: &MultiPoly) -> Option<SparseVec> {
    let mut out = Vec::new();
    for (m, c) in p.terms() {
        let i = m.0.iter().position(|&e| e == 1)?;
        if m.degree() != 1 {
            return None;
        }
        out.push((i, c.clone()));
    }
    Some(sparse::normalize(out))
}

fn unit_vec(i: usize) -> SparseVec {
    vec![(i, Rational::one())]
}

pub fn goh_matrix(fm: &FlatModel) -> GohMatrix {
    let g = &fm.algebra;
    let vars = dual_vars(g);
    let d = &fm.distribution;
    let entries = d
        .iter()
        .map(|&i| d.iter().map(|&j| hamiltonian(&vars, g.bracket_basis(i, j))).collect())
        .collect();
    GohMatrix {
        vars,
        distribution: d.clone(),
        entries,
    }
}

/// `λ([[X_i,X_j],X_k]) + cyclic` for every triple of distribution vectors.
pub fn jacobi_forms_vanish(fm: &FlatModel) -> bool {
    let g = &fm.algebra;
    let vars = dual_vars(g);
    let d = &fm.distribution;
    for &i in d {
        for &j in d {
            for &k in d {
                let t1 = g.bracket_sparse(g.bracket_basis(i, j), &unit_vec(k));
                let t2 = g.bracket_sparse(g.bracket_basis(j, k), &unit_vec(i));
                let t3 = g.bracket_sparse(g.bracket_basis(k, i), &unit_vec(j));
                let sum = hamiltonian(&vars, &t1).add(&hamiltonian(&vars, &t2)).add(&hamiltonian(&vars, &t3));
                if !sum.is_zero() {
                    return false;
                }
            }
        }
    }
    true
}

#[derive(Debug, Clone)]
pub enum DegeneracyLocus {
    /// Odd rank: the Goh matrix is degenerate everywhere; the regular part
    /// is where some `G_i` is nonzero.
    AlwaysDegenerate { sub_pfaffians: Vec<MultiPoly> },
    /// Even rank: degenerate exactly where `pf G` vanishes.
    Pfaffian {
        pfaffian: MultiPoly,
        sub_pfaffians: Vec<Vec<MultiPoly>>,
    },
}

pub fn degeneracy_locus(fm: &FlatModel) -> DegeneracyLocus {
    let g = goh_matrix(fm);
    let unit = g.unit();
    match sub_pfaffians_with_unit(&g.entries, &unit).expect("Goh matrices are skew") {
        SubPfaffians::Odd(v) => DegeneracyLocus::AlwaysDegenerate { sub_pfaffians: v },
        SubPfaffians::Even(t) => DegeneracyLocus::Pfaffian {
            pfaffian: pfaffian_poly(&g.entries, &unit).expect("Goh matrices are skew"),
            sub_pfaffians: t,
        },
    }
}

/// Echelon bases of `D = D^{-1} ⊆ D^{-2} ⊆ …`, with
/// `D^{-j-1} = D^{-j} + [D, D^{-j}]`, until the flag stabilizes.
pub fn derived_flag(fm: &FlatModel) -> Vec<Vec<SparseVec>> {
    let g = &fm.algebra;
    let gens: Vec<SparseVec> = fm.distribution.iter().map(|&i| unit_vec(i)).collect();
    let mut cur = gens.clone();
    let mut out = vec![cur.clone()];
    loop {
        let mut next = cur.clone();
        for a in &gens {
            for b in &cur {
                next.push(g.bracket_sparse(a, b));
            }
        }
        let next = echelon(g.dim(), next);
        if next.len() == cur.len() {
            return out;
        }
        out.push(next.clone());
        cur = next;
    }
}

fn echelon(n: usize, vs: impl IntoIterator<Item = SparseVec>) -> Vec<SparseVec> {
    let mut red = RowReducer::new(n);
    for v in vs {
        red.insert(v);
    }
    red.rref_rows()
}

fn same_span(n: usize, a: &[SparseVec], b: &[SparseVec]) -> bool {
    let ea = echelon(n, a.iter().cloned());
    let eb = echelon(n, b.iter().cloned());
    ea == eb
}

/// An identity between zero sets of linear forms, checked as an equality of
/// spans in the algebra: `{λ ∈ A^⊥ : H_v(λ) = 0 ∀v ∈ V} = B^⊥` holds
/// exactly when `A + V = B`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct LocusCheck {
    pub name: String,
    pub statement: String,
    pub holds: bool,
}

fn locus(name: &str, statement: &str, n: usize, base: &[SparseVec], forms: &[SparseVec], target: &[SparseVec]) -> LocusCheck {
    let lhs: Vec<SparseVec> = base.iter().chain(forms).cloned().collect();
    LocusCheck {
        name: name.into(),
        statement: statement.into(),
        holds: same_span(n, &lhs, target),
    }
}

/// The locus identities that apply to the rank of `fm`: for rank 3, the
/// common zeros of `G_1, G_2, G_3` in `D^⊥` form `(D^{-2})^⊥`; for rank 2,
/// `pf G` cuts `(D^{-2})^⊥` out of `D^⊥`, and the two forms of the
/// characteristic direction cut `(D^{-3})^⊥` out of `(D^{-2})^⊥`.
pub fn locus_checks(fm: &FlatModel) -> Vec<LocusCheck> {
    let g = &fm.algebra;
    let n = g.dim();
    let flag = derived_flag(fm);
    let level = |j: usize| flag.get(j - 1).or(flag.last()).cloned().unwrap_or_default();
    let d = &fm.distribution;
    let mut out = Vec::new();
    match (d.len(), degeneracy_locus(fm)) {
        (3, DegeneracyLocus::AlwaysDegenerate { sub_pfaffians }) => {
            let forms: Vec<SparseVec> = sub_pfaffians.iter().filter_map(linear_form_vector).collect();
            out.push(locus(
                "rank3_regular_locus",
                "zeros of G_1, G_2, G_3 on D^⊥ = (D^-2)^⊥",
                n,
                &level(1),
                &forms,
                &level(2),
            ));
        }
        (2, DegeneracyLocus::Pfaffian { pfaffian, .. }) => {
            let forms: Vec<SparseVec> = linear_form_vector(&pfaffian).into_iter().collect();
            out.push(locus("rank2_pfaffian_locus", "zeros of pf G on D^⊥ = (D^-2)^⊥", n, &level(1), &forms, &level(2)));
            let x12 = g.bracket_basis(d[0], d[1]).clone();
            let forms = vec![g.bracket_sparse(&unit_vec(d[0]), &x12), g.bracket_sparse(&unit_vec(d[1]), &x12)];
            out.push(locus(
                "rank2_direction_locus",
                "zeros of H_[X1,[X1,X2]], H_[X2,[X1,X2]] on (D^-2)^⊥ = (D^-3)^⊥",
                n,
                &level(2),
                &forms,
                &level(3),
            ));
        }
        _ => {}
    }
    out
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub enum Direction {
    /// `coeffs` in the distribution basis and the same vector in the algebra.
    Defined { coeffs: Vec<Rational>, vector: Vec<Rational> },
    Undefined(String),
}

impl Direction {
    pub fn coeffs(&self) -> Option<&[Rational]> {
        match self {
            Direction::Defined { coeffs, .. } => Some(coeffs),
            Direction::Undefined(_) => None,
        }
    }
}

fn defined(fm: &FlatModel, coeffs: Vec<Rational>) -> Direction {
    if coeffs.iter().all(|c| c.is_zero()) {
        return Direction::Undefined("all coefficients vanish".into());
    }
    let mut vector = vec![Rational::zero(); fm.algebra.dim()];
    for (c, &i) in coeffs.iter().zip(&fm.distribution) {
        vector[i] = c.clone();
    }
    Direction::Defined { coeffs, vector }
}

fn pair(lambda: &[Rational], v: &SparseVec) -> Rational {
    let mut acc = Rational::zero();
    for (k, c) in v {
        acc += &(c * &lambda[*k]);
    }
    acc
}

/// `dF(H⃗_X)(λ) = Σ_k ∂F/∂λ_k(λ) · λ([X, b_k])`.
fn derivative_along(g: &GradedLieAlgebra, f: &MultiPoly, x: usize, lambda: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for k in 0..g.dim() {
        let flow = pair(lambda, g.bracket_basis(x, k));
        if flow.is_zero() {
            continue;
        }
        acc += &(&f.partial(k).eval(lambda) * &flow);
    }
    acc
}

/// Direction of the abnormal extremal through `λ ∈ D^⊥` over the identity.
pub fn characteristic_direction(fm: &FlatModel, lambda: &[Rational]) -> Result<Direction, AbnormalError> {
    let g = &fm.algebra;
    if lambda.len() != g.dim() {
        return Err(AbnormalError::WrongLength {
            expected: g.dim(),
            got: lambda.len(),
        });
    }
    let d = &fm.distribution;
    if let Some(&i) = d.iter().find(|&&i| !lambda[i].is_zero()) {
        return Err(AbnormalError::NotInAnnihilator(g.labels[i].clone()));
    }
    let r = d.len();
    let goh = goh_matrix(fm);
    let at = goh.eval(lambda);
    if r % 2 == 1 {
        let unit = Rational::one();
        let rows: Vec<Vec<Rational>> = (0..r).map(|i| at.row(i).to_vec()).collect();
        let SubPfaffians::Odd(gi) = sub_pfaffians_with_unit(&rows, &unit).expect("skew") else {
            unreachable!("odd size")
        };
        if gi.iter().all(|x| x.is_zero()) {
            return Ok(Direction::Undefined("all G_i vanish".into()));
        }
        let coeffs = gi.iter().enumerate().map(|(i, x)| if i % 2 == 0 { x.clone() } else { -x }).collect();
        return Ok(defined(fm, coeffs));
    }
    if r == 2 {
        let x12 = g.bracket_basis(d[0], d[1]).clone();
        if !pair(lambda, &x12).is_zero() {
            return Ok(Direction::Undefined("H_[X1,X2] ≠ 0, the Goh matrix is nondegenerate".into()));
        }
        let a = pair(lambda, &g.bracket_sparse(&unit_vec(d[0]), &x12));
        let b = pair(lambda, &g.bracket_sparse(&unit_vec(d[1]), &x12));
        if a.is_zero() && b.is_zero() {
            return Ok(Direction::Undefined("λ annihilates D^-3".into()));
        }
        return Ok(defined(fm, vec![-b, a]));
    }
    let locus = degeneracy_locus(fm);
    let DegeneracyLocus::Pfaffian { pfaffian, sub_pfaffians } = locus else {
        unreachable!("even size")
    };
    if !pfaffian.eval(lambda).is_zero() {
        return Ok(Direction::Undefined("pf G(λ) ≠ 0".into()));
    }
    let table: Vec<Vec<Rational>> = sub_pfaffians.iter().map(|row| row.iter().map(|p| p.eval(lambda)).collect()).collect();
    let Some((i0, j0)) = (0..r).flat_map(|i| (i + 1..r).map(move |j| (i, j))).find(|&(i, j)| !table[i][j].is_zero()) else {
        return Ok(Direction::Undefined("all G_ij vanish".into()));
    };
    // 𝒴_i = Σ_j (-1)^j G_ij H⃗_{X_j}.
    let y = |i: usize| -> Vec<Rational> {
        (0..r).map(|j| &table[i][j] * &Rational::from_int(alt_sign(j))).collect()
    };
    let dpf_x: Vec<Rational> = d.iter().map(|&x| derivative_along(g, &pfaffian, x, lambda)).collect();
    let dpf = |yi: &[Rational]| -> Rational {
        let mut acc = Rational::zero();
        for (c, v) in yi.iter().zip(&dpf_x) {
            acc += &(c * v);
        }
        acc
    };
    let (yi, yj) = (y(i0), y(j0));
    let (a, b) = (dpf(&yi), dpf(&yj));
    if a.is_zero() && b.is_zero() {
        return Ok(Direction::Undefined("pf G is stationary along the kernel".into()));
    }
    let coeffs = (0..r).map(|j| &(&a * &yj[j]) - &(&b * &yi[j])).collect();
    Ok(defined(fm, coeffs))
}

/// Whether `Σ_j a_sj (-1)^j A_ij = -(-1)^i δ_si pf(A)` holds entrywise, for a
/// skew matrix of even size with polynomial entries.
pub fn even_kernel_identity(a: &[Vec<MultiPoly>], unit: &MultiPoly) -> bool {
    let n = a.len();
    let pf = pfaffian_poly(a, unit).expect("skew");
    let SubPfaffians::Even(t) = sub_pfaffians_with_unit(a, unit).expect("skew") else {
        return n % 2 == 0;
    };
    for i in 0..n {
        for s in 0..n {
            let mut acc = unit.zero_like_poly();
            for j in 0..n {
                let term = a[s][j].mul(&t[i][j]);
                acc = if alt_sign(j) > 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            let expect = if s == i {
                if alt_sign(i) > 0 {
                    pf.neg()
                } else {
                    pf.clone()
                }
            } else {
                unit.zero_like_poly()
            };
            if acc != expect {
                return false;
            }
        }
    }
    true
}

trait ZeroLike {
    fn zero_like_poly(&self) -> MultiPoly;
}

impl ZeroLike for MultiPoly {
    fn zero_like_poly(&self) -> MultiPoly {
        MultiPoly::zero(self.vars().clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::flat_model;
    use crate::symbol::parse_symbol;

    fn fm(s: &str) -> FlatModel {
        flat_model(&parse_symbol(s).unwrap())
    }

    fn dual(fm: &FlatModel, label: &str) -> Vec<Rational> {
        let g = &fm.algebra;
        let i = g.labels.iter().position(|l| l == label).unwrap_or_else(|| panic!("{label} in {:?}", g.labels));
        let mut v = vec![Rational::zero(); g.dim()];
        v[i] = Rational::one();
        v
    }

    fn kernel_check(fm: &FlatModel, lambda: &[Rational], dir: &Direction) {
        let c = dir.coeffs().unwrap();
        let m = goh_matrix(fm).eval(lambda);
        assert!(m.mul_vec(c).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn d23_goh_and_sub_pfaffians() {
        let m = fm("D(2,3)");
        let g = goh_matrix(&m);
        assert_eq!(g.size(), 3);
        assert!(g.is_skew());
        assert!(jacobi_forms_vanish(&m));
        let DegeneracyLocus::AlwaysDegenerate { sub_pfaffians } = degeneracy_locus(&m) else {
            panic!("odd rank")
        };
        // G_1 = H_[X2,X3], G_2 = H_[X1,X3], G_3 = H_[X1,X2].
        assert_eq!(sub_pfaffians[0], g.entries[1][2]);
        assert_eq!(sub_pfaffians[1], g.entries[0][2]);
        assert_eq!(sub_pfaffians[2], g.entries[0][1]);
        let checks = locus_checks(&m);
        assert_eq!(checks.len(), 1);
        assert!(checks[0].holds);
    }

    #[test]
    fn r52_pfaffian_locus() {
        let m = fm("R(5/2)");
        let DegeneracyLocus::Pfaffian { pfaffian, .. } = degeneracy_locus(&m) else {
            panic!("even rank")
        };
        let g = goh_matrix(&m);
        assert_eq!(pfaffian, g.entries[0][1]);
        let checks = locus_checks(&m);
        assert_eq!(checks.len(), 2);
        assert!(checks.iter().all(|c| c.holds), "{checks:?}");
    }

    #[test]
    fn abelian_goh_is_zero() {
        let mut m = fm("D(2,3)");
        m.algebra = GradedLieAlgebra::abelian(m.algebra.labels.clone(), m.algebra.weights.clone());
        let g = goh_matrix(&m);
        assert!(g.entries.iter().flatten().all(|p| p.is_zero()));
    }

    #[test]
    fn d23_directions() {
        let m = fm("D(2,3)");
        assert!(matches!(characteristic_direction(&m, &dual(&m, "f_-2")).unwrap(), Direction::Undefined(_)));
        let lam = dual(&m, "f_-1");
        let dir = characteristic_direction(&m, &lam).unwrap();
        kernel_check(&m, &lam, &dir);
        let e0 = m.algebra.labels.iter().position(|l| l == "e_0").unwrap();
        let Direction::Defined { vector, .. } = &dir else { panic!() };
        assert!(vector.iter().enumerate().all(|(i, c)| (i == e0) != c.is_zero()));
        assert_eq!(
            characteristic_direction(&m, &dual(&m, "e_0")),
            Err(AbnormalError::NotInAnnihilator("e_0".into()))
        );
    }

    #[test]
    fn r52_directions() {
        let m = fm("R(5/2)");
        let lam = dual(&m, "z");
        let dir = characteristic_direction(&m, &lam).unwrap();
        assert!(matches!(dir, Direction::Defined { .. }));
        kernel_check(&m, &lam, &dir);
        let low = m.algebra.labels.iter().find(|l| l.contains("5/2")).unwrap().clone();
        assert!(matches!(characteristic_direction(&m, &dual(&m, &low)).unwrap(), Direction::Undefined(_)));
    }

    #[test]
    fn mixed_rank_four() {
        let m = fm("D(2,3)+R(5/2)");
        let DegeneracyLocus::Pfaffian { pfaffian, .. } = degeneracy_locus(&m) else {
            panic!("even rank")
        };
        assert_eq!(pfaffian.degree(), Some(2));
        let g = goh_matrix(&m);
        assert!(even_kernel_identity(&g.entries, &MultiPoly::one(g.vars.clone())));
    }
}
