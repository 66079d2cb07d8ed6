//! Pfaffians, sub-Pfaffians and closed-form kernels of skew matrices.
//!
//! Sub-Pfaffian convention: for odd size, `A_i` is the Pfaffian with row and
//! column `i` removed; for even size, `A_ij` (i < j) removes rows/columns `i`
//! and `j`, with `A_ji = -A_ij` and `A_ii = 0`. Indices in sign formulas are
//! 1-based.

use std::collections::HashMap;

use super::matrix::RatMatrix;
use super::poly::MultiPoly;
use super::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PfaffError {
    #[error("matrix is not skew-symmetric")]
    NonSkew,
    #[error("all sub-Pfaffians vanish; the closed-form kernel does not apply")]
    DegenerateBranch,
    #[error("matrix too large for subset memoization ({0} > 64)")]
    TooLarge(usize),
}

/// The arithmetic needed by the Pfaffian expansion.
pub trait PfRing: Clone {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
}

impl PfRing for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl PfRing for MultiPoly {
    fn zero_like(&self) -> Self {
        MultiPoly::zero(self.vars().clone())
    }
    fn one_like(&self) -> Self {
        MultiPoly::one(self.vars().clone())
    }
    fn is_zero(&self) -> bool {
        MultiPoly::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        MultiPoly::add(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        MultiPoly::mul(self, o)
    }
    fn neg(&self) -> Self {
        MultiPoly::neg(self)
    }
}

fn check_skew<T: PfRing>(a: &[Vec<T>]) -> Result<(), PfaffError> {
    let n = a.len();
    for (i, row) in a.iter().enumerate() {
        if row.len() != n {
            return Err(PfaffError::NonSkew);
        }
        for j in 0..=i {
            if !row[j].add(&a[j][i]).is_zero() {
                return Err(PfaffError::NonSkew);
            }
        }
    }
    if n > 64 {
        return Err(PfaffError::TooLarge(n));
    }
    Ok(())
}

struct Expander<'a, T: PfRing> {
    a: &'a [Vec<T>],
    unit: T,
    memo: HashMap<u64, T>,
}

impl<T: PfRing> Expander<'_, T> {
    fn pf(&mut self, mask: u64) -> T {
        if mask == 0 {
            return self.unit.one_like();
        }
        if mask.count_ones() % 2 == 1 {
            return self.unit.zero_like();
        }
        if let Some(v) = self.memo.get(&mask) {
            return v.clone();
        }
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1u64 << i);
        let mut acc = self.unit.zero_like();
        let mut pos = 0;
        let mut bits = rest;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let aij = &self.a[i][j];
            if !aij.is_zero() {
                let sub = self.pf(rest & !(1u64 << j));
                if !sub.is_zero() {
                    let term = aij.mul(&sub);
                    acc = if pos % 2 == 0 { acc.add(&term) } else { acc.add(&term.neg()) };
                }
            }
            pos += 1;
        }
        self.memo.insert(mask, acc.clone());
        acc
    }
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Pfaffian by first-row expansion; zero for odd size.
///
/// `unit` supplies the ring for the empty matrix.
pub fn pfaffian_with_unit<T: PfRing>(a: &[Vec<T>], unit: &T) -> Result<T, PfaffError> {
    check_skew(a)?;
    let mut ex = Expander {
        a,
        unit: unit.clone(),
        memo: HashMap::new(),
    };
    Ok(ex.pf(full_mask(a.len())))
}

pub fn pfaffian(a: &RatMatrix) -> Result<Rational, PfaffError> {
    pfaffian_with_unit(&to_rows(a), &Rational::one())
}

pub fn pfaffian_poly(a: &[Vec<MultiPoly>], unit: &MultiPoly) -> Result<MultiPoly, PfaffError> {
    pfaffian_with_unit(a, unit)
}

fn to_rows(a: &RatMatrix) -> Vec<Vec<Rational>> {
    (0..a.rows()).map(|i| a.row(i).to_vec()).collect()
}

/// Sub-Pfaffians of a skew matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum SubPfaffians<T> {
    /// `A_i`, i = 1..n.
    Odd(Vec<T>),
    /// Full antisymmetric table `A_ij`.
    Even(Vec<Vec<T>>),
}

pub fn sub_pfaffians_with_unit<T: PfRing>(a: &[Vec<T>], unit: &T) -> Result<SubPfaffians<T>, PfaffError> {
    check_skew(a)?;
    let n = a.len();
    let mut ex = Expander {
        a,
        unit: unit.clone(),
        memo: HashMap::new(),
    };
    let full = full_mask(n);
    if n % 2 == 1 {
        Ok(SubPfaffians::Odd((0..n).map(|i| ex.pf(full & !(1u64 << i))).collect()))
    } else {
        let mut t = vec![vec![unit.zero_like(); n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let v = ex.pf(full & !(1u64 << i) & !(1u64 << j));
                t[j][i] = v.neg();
                t[i][j] = v;
            }
        }
        Ok(SubPfaffians::Even(t))
    }
}

pub fn sub_pfaffians(a: &RatMatrix) -> Result<SubPfaffians<Rational>, PfaffError> {
    sub_pfaffians_with_unit(&to_rows(a), &Rational::one())
}

/// `(-1)^j` for a 1-based index stored 0-based.
pub fn alt_sign(j0: usize) -> i64 {
    if (j0 + 1) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The vector `v_i = ((-1)^j A_ij)_j` of the even-size kernel formula.
pub fn even_kernel_vector<T: PfRing>(table: &[Vec<T>], i: usize) -> Vec<T> {
    table[i]
        .iter()
        .enumerate()
        .map(|(j, x)| if alt_sign(j) > 0 { x.clone() } else { x.neg() })
        .collect()
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub enum KernelSource {
    SubPfaffians,
    Elimination,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkewKernel {
    pub kernel_dim: usize,
    pub basis: Vec<Vec<Rational>>,
    pub sub_pfaffians: SubPfaffians<Rational>,
    pub source: KernelSource,
}

/// Kernel from the sub-Pfaffian formulas only.
///
/// Odd size: `(A_1, -A_2, ...)` when some `A_i` is nonzero. Even size with
/// nonzero Pfaffian: trivial kernel. Even size with zero Pfaffian: `v_{i0}`,
/// `v_{j0}` for the first nonzero `A_{i0 j0}`.
pub fn closed_form_kernel(a: &RatMatrix) -> Result<(Vec<Vec<Rational>>, SubPfaffians<Rational>), PfaffError> {
    let subs = sub_pfaffians(a)?;
    let n = a.rows();
    let basis = match &subs {
        SubPfaffians::Odd(v) => {
            if v.iter().all(|x| x.is_zero()) {
                return Err(PfaffError::DegenerateBranch);
            }
            vec![v
                .iter()
                .enumerate()
                .map(|(i, x)| if i % 2 == 0 { x.clone() } else { -x })
                .collect()]
        }
        SubPfaffians::Even(t) => {
            if n == 0 || !pfaffian(a)?.is_zero() {
                Vec::new()
            } else {
                let pair = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| !t[i][j].is_zero());
                let Some((i0, j0)) = pair else {
                    return Err(PfaffError::DegenerateBranch);
                };
                vec![even_kernel_vector(t, i0), even_kernel_vector(t, j0)]
            }
        }
    };
    Ok((basis, subs))
}

/// Kernel of a skew matrix, via sub-Pfaffians when they apply and by
/// elimination otherwise.
pub fn skew_kernel(a: &RatMatrix) -> Result<SkewKernel, PfaffError> {
    if !a.is_skew() {
        return Err(PfaffError::NonSkew);
    }
    match closed_form_kernel(a) {
        Ok((basis, sub_pfaffians)) => {
            debug_assert!(same_span(&basis, &a.kernel_basis()));
            Ok(SkewKernel {
                kernel_dim: basis.len(),
                basis,
                sub_pfaffians,
                source: KernelSource::SubPfaffians,
            })
        }
        Err(PfaffError::DegenerateBranch) => {
            let basis = a.kernel_basis();
            Ok(SkewKernel {
                kernel_dim: basis.len(),
                basis,
                sub_pfaffians: sub_pfaffians(a)?,
                source: KernelSource::Elimination,
            })
        }
        Err(e) => Err(e),
    }
}

/// Whether two families of vectors span the same subspace.
pub fn same_span(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> bool {
    let rank = |vs: Vec<Vec<Rational>>| -> usize {
        if vs.is_empty() {
            0
        } else {
            RatMatrix::from_rows(vs).rank()
        }
    };
    let ra = rank(a.to_vec());
    let rb = rank(b.to_vec());
    let rab = rank(a.iter().chain(b.iter()).cloned().collect());
    ra == rb && ra == rab
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::poly::var_names;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn two_by_two_symbolic() {
        let v = var_names("a", 1);
        let a = MultiPoly::var(v.clone(), 0);
        let m = vec![vec![a.zero_like(), a.clone()], vec![a.neg(), a.zero_like()]];
        assert_eq!(pfaffian_poly(&m, &a.one_like()).unwrap(), a);
    }

    #[test]
    fn generic_four_by_four() {
        let v = var_names("a", 6);
        let x = |i| MultiPoly::var(v.clone(), i);
        let z = MultiPoly::zero(v.clone());
        // a12 a13 a14 a23 a24 a34
        let e = [[None, Some(0), Some(1), Some(2)], [None, None, Some(3), Some(4)], [None, None, None, Some(5)], [None; 4]];
        let mut m = vec![vec![z.clone(); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                if let Some(k) = e[i][j] {
                    m[i][j] = x(k);
                    m[j][i] = x(k).neg();
                }
            }
        }
        let pf = pfaffian_poly(&m, &z.one_like()).unwrap();
        let expect = x(0).mul(&x(5)).sub(&x(1).mul(&x(4))).add(&x(2).mul(&x(3)));
        assert_eq!(pf, expect);
    }

    #[test]
    fn odd_size_is_zero_and_nonskew_rejected() {
        let m = RatMatrix::from_ints(&[&[0, 1, 2], &[-1, 0, 3], &[-2, -3, 0]]);
        assert_eq!(pfaffian(&m).unwrap(), q(0));
        let bad = RatMatrix::from_ints(&[&[0, 1], &[1, 0]]);
        assert_eq!(pfaffian(&bad), Err(PfaffError::NonSkew));
    }

    #[test]
    fn three_by_three_kernel_pattern() {
        // entries (p, q, r) = (a12, a13, a23)
        let (p, qq, r) = (2, 3, 5);
        let m = RatMatrix::from_ints(&[&[0, p, qq], &[-p, 0, r], &[-qq, -r, 0]]);
        let k = skew_kernel(&m).unwrap();
        assert_eq!(k.basis, vec![vec![q(r), q(-qq), q(p)]]);
        assert_eq!(k.source, KernelSource::SubPfaffians);
    }

    #[test]
    fn zero_matrix_falls_back() {
        let m = RatMatrix::zeros(3, 3);
        let k = skew_kernel(&m).unwrap();
        assert_eq!(k.kernel_dim, 3);
        assert_eq!(k.source, KernelSource::Elimination);
        assert_eq!(closed_form_kernel(&m).unwrap_err(), PfaffError::DegenerateBranch);
    }
}
