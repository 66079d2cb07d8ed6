//! Sparse exact row reduction.
//!
//! The Leibniz and prolongation systems are large but very sparse, so rows are
//! reduced one at a time against an echelon basis and only the final kernel
//! needs a reduced echelon form.

use super::rational::Rational;

/// Sorted `(column, value)` pairs with no stored zeros.
pub type SparseVec = Vec<(usize, Rational)>;

pub fn from_dense(v: &[Rational]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn to_dense(v: &SparseVec, n: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); n];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

/// Sorts and merges an unordered list of entries.
pub fn normalize(mut v: Vec<(usize, Rational)>) -> SparseVec {
    v.sort_by_key(|e| e.0);
    let mut out: SparseVec = Vec::with_capacity(v.len());
    for (i, x) in v {
        match out.last_mut() {
            Some((j, y)) if *j == i => *y += &x,
            _ => out.push((i, x)),
        }
    }
    out.retain(|(_, x)| !x.is_zero());
    out
}

/// `y + a·x`.
pub fn axpy(y: &SparseVec, a: &Rational, x: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(y.len() + x.len());
    let (mut i, mut j) = (0, 0);
    while i < y.len() || j < x.len() {
        let take_y = j >= x.len() || (i < y.len() && y[i].0 < x[j].0);
        let take_x = i >= y.len() || (j < x.len() && x[j].0 < y[i].0);
        if take_y {
            out.push(y[i].clone());
            i += 1;
        } else if take_x {
            out.push((x[j].0, a * &x[j].1));
            j += 1;
        } else {
            let v = &y[i].1 + &(a * &x[j].1);
            if !v.is_zero() {
                out.push((y[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale(v: &SparseVec, a: &Rational) -> SparseVec {
    if a.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, x * a)).collect()
}

/// Incremental echelon basis of a row space.
#[derive(Clone, Debug)]
pub struct RowReducer {
    ncols: usize,
    rows: Vec<SparseVec>,
    pivot_row: Vec<Option<usize>>,
}

impl RowReducer {
    pub fn new(ncols: usize) -> Self {
        RowReducer {
            ncols,
            rows: Vec::new(),
            pivot_row: vec![None; ncols],
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Removes every pivot-column entry of `v`.
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        let mut idx = 0;
        while idx < v.len() {
            let (c, ref coef) = v[idx];
            match self.pivot_row[c] {
                Some(r) => {
                    let f = -coef;
                    v = axpy(&v, &f, &self.rows[r]);
                }
                None => idx += 1,
            }
        }
        v
    }

    /// Adds a row; returns whether it enlarged the row space.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        debug_assert!(v.iter().all(|(i, _)| *i < self.ncols));
        let v = self.reduce(v);
        if v.is_empty() {
            return false;
        }
        let inv = v[0].1.recip();
        let v = scale(&v, &inv);
        self.pivot_row[v[0].0] = Some(self.rows.len());
        self.rows.push(v);
        true
    }

    pub fn contains(&self, v: SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    pub fn pivots(&self) -> Vec<usize> {
        (0..self.ncols).filter(|&c| self.pivot_row[c].is_some()).collect()
    }

    /// Reduced echelon rows ordered by pivot column.
    pub fn rref_rows(&self) -> Vec<SparseVec> {
        let pivots = self.pivots();
        let mut reduced: Vec<Option<SparseVec>> = vec![None; self.ncols];
        for &p in pivots.iter().rev() {
            let mut row = self.rows[self.pivot_row[p].unwrap()].clone();
            let mut idx = 1;
            while idx < row.len() {
                let c = row[idx].0;
                if let Some(r) = &reduced[c] {
                    let f = -&row[idx].1;
                    row = axpy(&row, &f, r);
                } else {
                    idx += 1;
                }
            }
            reduced[p] = Some(row);
        }
        pivots.iter().map(|&p| reduced[p].take().unwrap()).collect()
    }

    /// Basis of the null space of the row space, one vector per free column.
    pub fn kernel(&self) -> Vec<SparseVec> {
        let rref = self.rref_rows();
        let mut free_index = vec![usize::MAX; self.ncols];
        let mut free = Vec::new();
        for c in 0..self.ncols {
            if self.pivot_row[c].is_none() {
                free_index[c] = free.len();
                free.push(c);
            }
        }
        let mut out: Vec<Vec<(usize, Rational)>> = free.iter().map(|&c| vec![(c, Rational::one())]).collect();
        for row in &rref {
            let p = row[0].0;
            for (c, x) in &row[1..] {
                out[free_index[*c]].push((p, -x));
            }
        }
        out.into_iter().map(normalize).collect()
    }
}

/// Null space of a sparse system given as rows.
pub fn kernel_of_rows(ncols: usize, rows: impl IntoIterator<Item = SparseVec>) -> Vec<SparseVec> {
    let mut red = RowReducer::new(ncols);
    for r in rows {
        if red.rank() == ncols {
            break;
        }
        red.insert(r);
    }
    red.kernel()
}

/// Expresses vectors in terms of a fixed independent family.
#[derive(Clone, Debug)]
pub struct Coordinates {
    len: usize,
    count: usize,
    rows: Vec<SparseVec>,
    pivots: Vec<usize>,
}

impl Coordinates {
    /// Panics if `basis` is linearly dependent.
    pub fn new(len: usize, basis: &[SparseVec]) -> Self {
        let count = basis.len();
        let mut red = RowReducer::new(len + count);
        for (j, b) in basis.iter().enumerate() {
            let mut row = b.clone();
            row.push((len + j, Rational::one()));
            red.insert(row);
        }
        let rows: Vec<SparseVec> = red.rref_rows();
        let pivots: Vec<usize> = rows.iter().map(|r| r[0].0).collect();
        assert!(pivots.iter().all(|&p| p < len), "dependent basis");
        Coordinates { len, count, rows, pivots }
    }

    pub fn dim(&self) -> usize {
        self.count
    }

    pub fn ambient(&self) -> usize {
        self.len
    }

    /// Coefficients `c` with `v = Σ c_j basis_j`, or `None` if `v` is outside the span.
    pub fn solve(&self, v: &SparseVec) -> Option<Vec<Rational>> {
        let mut coords = vec![Rational::zero(); self.count];
        let mut residual = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let Ok(pos) = residual.binary_search_by_key(&p, |e| e.0) else {
                continue;
            };
            let a = residual[pos].1.clone();
            residual = axpy(&residual, &-&a, row);
        }
        // Rows are [R_i | T_i]; the residual carries -Σ a_i T_i in the tail.
        for (c, x) in &residual {
            if *c < self.len {
                return None;
            }
            coords[c - self.len] = -x;
        }
        Some(coords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn kernel_of_rank_one_system() {
        let rows = vec![from_dense(&[q(1), q(2)]), from_dense(&[q(2), q(4)])];
        let k = kernel_of_rows(2, rows);
        assert_eq!(k, vec![vec![(0, q(-2)), (1, q(1))]]);
    }

    #[test]
    fn coordinates_recover_combination() {
        let b1 = from_dense(&[q(1), q(1), q(0)]);
        let b2 = from_dense(&[q(0), q(1), q(1)]);
        let c = Coordinates::new(3, &[b1.clone(), b2.clone()]);
        let v = axpy(&scale(&b1, &q(3)), &q(-2), &b2);
        assert_eq!(c.solve(&v), Some(vec![q(3), q(-2)]));
        assert_eq!(c.solve(&from_dense(&[q(1), q(0), q(0)])), None);
    }

    #[test]
    fn reducer_detects_dependence() {
        let mut r = RowReducer::new(3);
        assert!(r.insert(from_dense(&[q(0), q(1), q(2)])));
        assert!(r.insert(from_dense(&[q(1), q(1), q(0)])));
        assert!(!r.insert(from_dense(&[q(2), q(5), q(6)])));
        assert_eq!(r.rank(), 2);
        for k in r.kernel() {
            let k = to_dense(&k, 3);
            assert!((&q(0) * &k[0] + &k[1] + &(&q(2) * &k[2])).is_zero());
        }
    }
}
