//! Minors of Hankel matrices, which cut out secant varieties of the
//! rational normal curve.

use std::sync::Arc;

use crate::exact::poly::var_names;
use crate::exact::MultiPoly;

use super::PolySpace;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HankelError {
    #[error("no admissible alpha for s = {s}, k = {k}")]
    NoAdmissibleAlpha { s: i64, k: i64 },
    #[error("alpha = {alpha} outside the admissible range {lo}..={hi} for s = {s}, k = {k}")]
    AlphaOutOfRange { s: i64, k: i64, alpha: i64, lo: i64, hi: i64 },
}

/// Values of `α` for which the `(α+1) × (s+2−α)` Hankel matrix has
/// `(k+2)`-minors.
pub fn admissible_alphas(s: i64, k: i64) -> std::ops::RangeInclusive<i64> {
    (k + 1)..=(s - k)
}

/// Variables `x1..x_{s+2}`.
pub fn hankel_vars(s: i64) -> Arc<Vec<String>> {
    var_names("x", (s + 2) as usize)
}

/// The Hankel matrix with `H[i][j] = x_{i+j+1}`.
pub fn hankel_matrix(s: i64, alpha: i64) -> Vec<Vec<MultiPoly>> {
    let vars = hankel_vars(s);
    (0..=alpha as usize)
        .map(|i| (0..(s + 2 - alpha) as usize).map(|j| MultiPoly::var(vars.clone(), i + j)).collect())
        .collect()
}

fn det(m: &[Vec<MultiPoly>], rows: &[usize], cols: &[usize]) -> MultiPoly {
    if rows.len() == 1 {
        return m[rows[0]][cols[0]].clone();
    }
    let mut acc = MultiPoly::zero(m[0][0].vars().clone());
    for (j, &c) in cols.iter().enumerate() {
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = m[rows[0]][c].mul(&det(m, &rows[1..], &rest));
        acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Span of all `(k+2)`-minors of the Hankel matrix of shape
/// `(α+1) × (s+2−α)`.
pub fn hankel_minor_space(s: i64, k: i64, alpha: i64) -> Result<PolySpace, HankelError> {
    let range = admissible_alphas(s, k);
    if k < 0 || range.is_empty() {
        return Err(HankelError::NoAdmissibleAlpha { s, k });
    }
    if !range.contains(&alpha) {
        return Err(HankelError::AlphaOutOfRange {
            s,
            k,
            alpha,
            lo: *range.start(),
            hi: *range.end(),
        });
    }
    let m = hankel_matrix(s, alpha);
    let size = (k + 2) as usize;
    let mut minors = Vec::new();
    for rows in subsets(m.len(), size) {
        for cols in subsets(m[0].len(), size) {
            minors.push(det(&m, &rows, &cols));
        }
    }
    Ok(PolySpace::from_spanning(hankel_vars(s), size as u32, minors))
}

/// The moment curve `x_j = t^{j-1}` in the variables of `hankel_vars(s)`.
pub fn moment_curve(s: i64) -> Vec<MultiPoly> {
    let t = var_names("t", 1);
    (0..(s + 2) as u32).map(|j| MultiPoly::var(t.clone(), 0).pow(j)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twisted_cubic_minors() {
        let q = hankel_minor_space(2, 0, 1).unwrap();
        assert_eq!(q.dim(), 3);
        let curve = moment_curve(2);
        for p in &q.basis {
            assert!(p.substitute(&curve).is_zero());
        }
    }

    #[test]
    fn quartic_catalecticant() {
        let q = hankel_minor_space(3, 1, 2).unwrap();
        assert_eq!(q.dim(), 1);
        assert!(q.basis[0].substitute(&moment_curve(3)).is_zero());
    }

    #[test]
    fn range_errors() {
        assert_eq!(hankel_minor_space(2, 1, 1).unwrap_err(), HankelError::NoAdmissibleAlpha { s: 2, k: 1 });
        assert!(matches!(hankel_minor_space(4, 0, 0), Err(HankelError::AlphaOutOfRange { .. })));
        // Every admissible alpha gives the same space.
        let a = hankel_minor_space(5, 1, 2).unwrap();
        let b = hankel_minor_space(5, 1, 3).unwrap();
        assert!(a.same_as(&b));
    }
}
