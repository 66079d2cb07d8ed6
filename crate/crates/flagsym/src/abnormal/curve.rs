//! Flat curves of flags and the recovery of a flag symbol from a curve of
//! coisotropic subspaces.
//!
//! Curves are polynomial matrices in `t` whose columns span the subspace.
//! Near `t = 0` every derived curve (osculating spaces, skew-orthogonal
//! complements) is handled as a truncated matrix power series with a basis
//! that stays independent at `t = 0`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact::sparse::{self, Coordinates, RowReducer};
use crate::exact::{HalfWeight, RatMatrix, Rational};
use crate::flag::exp_t_delta;
use crate::symbol::{FlagSymbol, GradedSymplecticSpace, IndexSet, RankCase, SymbolComponent, SymbolError};

/// Coefficients of `t^0, t^1, …` of a matrix polynomial.
pub type PolyMatrix = Vec<RatMatrix>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtractError {
    #[error("t = 0 is not a regular point: dimensions {at_zero:?} there, {generic:?} nearby")]
    NonRegularPoint { at_zero: Vec<usize>, generic: Vec<usize> },
    #[error("J^{index} fails the symplectic pattern: {reason}")]
    NonSymplecticFlag { index: HalfWeight, reason: String },
    #[error("rows {0} do not form a symbol")]
    Unrecognized(String),
    #[error("curve data: {0}")]
    Shape(String),
}

pub fn rank_case_of(index_set: IndexSet) -> RankCase {
    match index_set {
        IndexSet::Integer => RankCase::Odd,
        IndexSet::HalfOdd => RankCase::Two,
        IndexSet::Half => RankCase::Even,
    }
}

/// `t ↦ {e^{tδ} X_i}`, with `X_i` the sum of the weight spaces of weight
/// at least `i`.
#[derive(Debug, Clone)]
pub struct FlagCurve {
    pub sigma: RatMatrix,
    pub index_set: IndexSet,
    /// `(i, e^{tδ} X_i)` for decreasing `i`, from the top weight to the bottom.
    pub blocks: Vec<(HalfWeight, PolyMatrix)>,
}

/// A curve `t ↦ J(t)` of coisotropic subspaces of `(ℚ^n, σ)`.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct JacobiCurve {
    #[serde(with = "matrix_serde")]
    pub sigma: RatMatrix,
    pub case: RankCase,
    #[serde(with = "poly_matrix_serde")]
    pub columns: PolyMatrix,
}

pub fn flat_curve(x: &GradedSymplecticSpace) -> FlagCurve {
    let n = x.dim();
    let exp = exp_t_delta(&x.delta);
    let step = match x.symbol.index_set() {
        IndexSet::Half => HalfWeight::HALF,
        _ => HalfWeight::ONE,
    };
    let weights = x.weights_desc();
    let (top, bottom) = (weights[0], *weights.last().unwrap());
    let mut blocks = Vec::new();
    let mut i = top;
    while i >= bottom {
        let cols: Vec<usize> = (0..n).filter(|&b| x.weight(b) >= i).collect();
        let all: Vec<usize> = (0..n).collect();
        blocks.push((i, exp.iter().map(|e| e.select(&all, &cols)).collect()));
        i = i - step;
    }
    FlagCurve {
        sigma: x.sigma.clone(),
        index_set: x.symbol.index_set(),
        blocks,
    }
}

pub fn eval_poly_matrix(p: &PolyMatrix, t: &Rational) -> RatMatrix {
    let mut acc = p[0].clone();
    let mut pow = Rational::one();
    for c in &p[1..] {
        pow = &pow * t;
        acc = &acc + &c.scale(&pow);
    }
    acc
}

impl FlagCurve {
    pub fn rank_case(&self) -> RankCase {
        rank_case_of(self.index_set)
    }

    pub fn block(&self, i: HalfWeight) -> Option<&PolyMatrix> {
        self.blocks.iter().find(|(j, _)| *j == i).map(|(_, b)| b)
    }

    /// The block that plays the role of `J`: `X_{1/2}` for rank 2, `X_0`
    /// otherwise.
    pub fn jacobi_curve(&self) -> JacobiCurve {
        let case = self.rank_case();
        let idx = if case == RankCase::Two { HalfWeight::HALF } else { HalfWeight::ZERO };
        JacobiCurve {
            sigma: self.sigma.clone(),
            case,
            columns: self.block(idx).expect("every row crosses weight zero").clone(),
        }
    }
}

fn binomial(n: usize, k: usize) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k {
        acc = &(&acc * &Rational::from_int((n - i) as i64)) / &Rational::from_int((i + 1) as i64);
    }
    acc
}

impl JacobiCurve {
    pub fn dim(&self) -> usize {
        self.sigma.rows()
    }

    /// `g J(t)`.
    pub fn conjugate(&self, g: &RatMatrix) -> JacobiCurve {
        JacobiCurve {
            sigma: self.sigma.clone(),
            case: self.case,
            columns: self.columns.iter().map(|c| g * c).collect(),
        }
    }

    /// `J(t + t0)`.
    pub fn shift(&self, t0: &Rational) -> JacobiCurve {
        let d = self.columns.len();
        let mut out = vec![RatMatrix::zeros(self.columns[0].rows(), self.columns[0].cols()); d];
        for (k, c) in self.columns.iter().enumerate() {
            let mut pow = Rational::one();
            for j in (0..=k).rev() {
                out[j] = &out[j] + &c.scale(&(&binomial(k, j) * &pow));
                pow = &pow * t0;
            }
        }
        JacobiCurve {
            sigma: self.sigma.clone(),
            case: self.case,
            columns: out,
        }
    }

    /// `J(t + c t²)`, composed exactly.
    pub fn reparametrize(&self, c: &Rational) -> JacobiCurve {
        let d = self.columns.len();
        let zero = RatMatrix::zeros(self.columns[0].rows(), self.columns[0].cols());
        let mut out = vec![zero; 2 * d - 1];
        for (k, m) in self.columns.iter().enumerate() {
            // t^k (1 + ct)^k
            let mut pow = Rational::one();
            for i in 0..=k {
                out[k + i] = &out[k + i] + &m.scale(&(&binomial(k, i) * &pow));
                pow = &pow * c;
            }
        }
        while out.len() > 1 && out.last().unwrap().is_zero() {
            out.pop();
        }
        JacobiCurve {
            sigma: self.sigma.clone(),
            case: self.case,
            columns: out,
        }
    }
}

/// Product of seeded random transvections `x ↦ x + c σ(v,x) v`.
pub fn random_symplectic(sigma: &RatMatrix, seed: u64, steps: usize) -> RatMatrix {
    let n = sigma.rows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = RatMatrix::identity(n);
    for _ in 0..steps {
        let v: Vec<Rational> = (0..n).map(|_| Rational::from_int(rng.gen_range(-3..=3))).collect();
        let c = Rational::new(rng.gen_range(1..=5), rng.gen_range(1..=3));
        let sv: Vec<Rational> = sigma.transpose().mul_vec(&v);
        let mut t = RatMatrix::identity(n);
        for i in 0..n {
            for j in 0..n {
                t[(i, j)] = &t[(i, j)] + &(&c * &(&v[i] * &sv[j]));
            }
        }
        g = &t * &g;
    }
    g
}

/// Truncated matrix power series; every stored coefficient is exact.
#[derive(Debug, Clone)]
struct Series {
    terms: Vec<RatMatrix>,
}

impl Series {
    fn from_poly(p: &PolyMatrix, len: usize) -> Series {
        let (r, c) = (p[0].rows(), p[0].cols());
        let terms = (0..len).map(|k| p.get(k).cloned().unwrap_or_else(|| RatMatrix::zeros(r, c))).collect();
        Series { terms }
    }

    fn len(&self) -> usize {
        self.terms.len()
    }

    fn rows(&self) -> usize {
        self.terms[0].rows()
    }

    fn cols(&self) -> usize {
        self.terms[0].cols()
    }

    fn at0(&self) -> &RatMatrix {
        &self.terms[0]
    }

    fn derivative(&self) -> Series {
        let terms = (1..self.len()).map(|k| self.terms[k].scale(&Rational::from_int(k as i64))).collect();
        Series { terms }
    }

    fn select_cols(&self, cols: &[usize]) -> Series {
        let rows: Vec<usize> = (0..self.rows()).collect();
        Series {
            terms: self.terms.iter().map(|m| m.select(&rows, cols)).collect(),
        }
    }

    fn hcat(&self, other: &Series) -> Series {
        let len = self.len().min(other.len());
        let n = self.rows();
        let terms = (0..len)
            .map(|k| {
                let mut cols: Vec<Vec<Rational>> = (0..self.cols()).map(|j| self.terms[k].column(j)).collect();
                cols.extend((0..other.cols()).map(|j| other.terms[k].column(j)));
                RatMatrix::from_columns(n, &cols)
            })
            .collect();
        Series { terms }
    }

    fn mul(&self, other: &Series) -> Series {
        let len = self.len().min(other.len());
        let terms = (0..len)
            .map(|k| {
                let mut acc = RatMatrix::zeros(self.rows(), other.cols());
                for j in 0..=k {
                    if !self.terms[j].is_zero() && !other.terms[k - j].is_zero() {
                        acc = &acc + &(&self.terms[j] * &other.terms[k - j]);
                    }
                }
                acc
            })
            .collect();
        Series { terms }
    }

    fn inverse(&self) -> Option<Series> {
        let b = self.at0().inverse()?;
        let mut terms: Vec<RatMatrix> = vec![b.clone()];
        for k in 1..self.len() {
            let mut acc = RatMatrix::zeros(self.rows(), self.cols());
            for j in 1..=k {
                if !self.terms[j].is_zero() {
                    acc = &acc + &(&self.terms[j] * &terms[k - j]);
                }
            }
            terms.push(-&(&b * &acc));
        }
        Some(Series { terms })
    }

    /// Columns independent at `t = 0`, greedily from the left.
    fn independent_cols(&self) -> Series {
        let m = self.at0();
        let mut red = RowReducer::new(m.rows());
        let keep: Vec<usize> = (0..m.cols()).filter(|&j| red.insert(sparse::from_dense(&m.column(j)))).collect();
        self.select_cols(&keep)
    }

    /// `span(C, C')`.
    fn osculate(&self) -> Series {
        let d = self.derivative();
        let mut base = self.clone();
        base.terms.truncate(d.len());
        base.hcat(&d).independent_cols()
    }

    fn sum(&self, other: &Series) -> Series {
        self.hcat(other).independent_cols()
    }

    /// Skew-orthogonal complement: the kernel of `Cᵀ Σ`.
    fn perp(&self, sigma: &RatMatrix) -> Series {
        let n = self.rows();
        let r = self.cols();
        if r == 0 {
            return Series {
                terms: (0..self.len())
                    .map(|k| if k == 0 { RatMatrix::identity(n) } else { RatMatrix::zeros(n, n) })
                    .collect(),
            };
        }
        let st = sigma.transpose();
        let a = Series {
            terms: self.terms.iter().map(|c| &c.transpose() * &st.transpose()).collect(),
        };
        let (_, pivots) = a.at0().rref();
        assert_eq!(pivots.len(), r, "basis columns are independent at 0");
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let all_rows: Vec<usize> = (0..r).collect();
        let ap = Series {
            terms: a.terms.iter().map(|m| m.select(&all_rows, &pivots)).collect(),
        };
        let af = Series {
            terms: a.terms.iter().map(|m| m.select(&all_rows, &free)).collect(),
        };
        let m = ap.inverse().expect("pivot block invertible at 0").mul(&af);
        let terms = (0..m.len())
            .map(|k| {
                let mut out = RatMatrix::zeros(n, free.len());
                for (q, &f) in free.iter().enumerate() {
                    if k == 0 {
                        out[(f, q)] = Rational::one();
                    }
                    for (p, &row) in pivots.iter().enumerate() {
                        out[(row, q)] = -&m.terms[k][(p, q)];
                    }
                }
                out
            })
            .collect();
        Series { terms }
    }
}

/// `J^i` for every index from the top (first nonzero) to the bottom (first
/// equal to the whole space), by the osculation and complement recipes of
/// the rank case.
fn extended_flag_series(j: &JacobiCurve) -> Result<BTreeMap<HalfWeight, Series>, ExtractError> {
    let n = j.dim();
    if j.columns.is_empty() || j.columns.iter().any(|c| c.rows() != n || c.cols() != j.columns[0].cols()) {
        return Err(ExtractError::Shape("column matrices must share one n × r shape".into()));
    }
    // Coefficients grow quickly, so start short and lengthen only when an
    // osculation runs out of terms.
    let mut len = 4;
    loop {
        if let Some(levels) = flag_series_truncated(j, len) {
            return Ok(levels);
        }
        if len > 2 * n + 4 {
            return Err(ExtractError::Shape("osculating spaces never fill the space".into()));
        }
        len += 2;
    }
}

fn flag_series_truncated(j: &JacobiCurve, len: usize) -> Option<BTreeMap<HalfWeight, Series>> {
    let n = j.dim();
    let base = Series::from_poly(&j.columns, len).independent_cols();
    let (start, step, offset) = match j.case {
        RankCase::Odd => (HalfWeight::ZERO, HalfWeight::ONE, HalfWeight::ONE),
        RankCase::Two => (HalfWeight::HALF, HalfWeight::ONE, HalfWeight::ONE),
        RankCase::Even => (HalfWeight::ZERO, HalfWeight::HALF, HalfWeight::HALF),
    };
    let mut levels: BTreeMap<HalfWeight, Series> = BTreeMap::new();
    levels.insert(start, base.clone());
    if j.case == RankCase::Even {
        let half = base.perp(&j.sigma);
        let below = half.osculate().sum(&base);
        levels.insert(HalfWeight::HALF, half);
        levels.insert(-HalfWeight::HALF, below);
    }
    // Downward: J^{i-1} = (J^i)^(1); rank 2 and odd rank step by one.
    let mut i = start;
    loop {
        let cur = &levels[&i];
        if cur.cols() == n {
            break;
        }
        let lower = i - step;
        if !levels.contains_key(&lower) {
            let src = i - step + HalfWeight::ONE;
            let next = levels[&src].osculate();
            if next.len() < 2 {
                return None;
            }
            levels.insert(lower, next);
        }
        i = lower;
    }
    let bottom = i;
    // Upward: J^k = (J^{offset-k})^∠.
    let mut k = start + step;
    if j.case == RankCase::Even {
        k = HalfWeight::ONE;
    }
    loop {
        let src = offset - k;
        let src = if src < bottom { bottom } else { src };
        let up = levels[&src].perp(&j.sigma);
        let dim = up.cols();
        levels.insert(k, up);
        if dim == 0 {
            break;
        }
        k = k + step;
    }
    Some(levels)
}

fn span_rank(cols: &[Vec<Rational>], n: usize) -> usize {
    let mut red = RowReducer::new(n);
    cols.iter().filter(|c| red.insert(sparse::from_dense(c))).count()
}

fn columns(m: &RatMatrix) -> Vec<Vec<Rational>> {
    (0..m.cols()).map(|j| m.column(j)).collect()
}

/// `J^i(0)` for all indices, decreasing, with the symplectic pattern and
/// nesting checked.
pub fn extended_flag_at_zero(j: &JacobiCurve) -> Result<Vec<(HalfWeight, RatMatrix)>, ExtractError> {
    let levels = extended_flag_series(j)?;
    let n = j.dim();
    let mut out: Vec<(HalfWeight, RatMatrix)> = levels.iter().rev().map(|(i, s)| (*i, s.at0().clone())).collect();
    for (i, m) in &out {
        let gram = &(&m.transpose() * &j.sigma) * m;
        if *i > HalfWeight::ZERO {
            if !gram.is_zero() {
                return Err(ExtractError::NonSymplecticFlag {
                    index: *i,
                    reason: "not isotropic".into(),
                });
            }
        } else {
            let perp = RatMatrix::from_columns(n, &(&m.transpose() * &j.sigma).kernel_basis());
            let mut cols = columns(m);
            let r = span_rank(&cols, n);
            cols.extend(columns(&perp));
            if span_rank(&cols, n) != r {
                return Err(ExtractError::NonSymplecticFlag {
                    index: *i,
                    reason: "not coisotropic".into(),
                });
            }
        }
    }
    for w in out.windows(2) {
        let mut cols = columns(&w[1].1);
        let r = span_rank(&cols, n);
        cols.extend(columns(&w[0].1));
        if span_rank(&cols, n) != r {
            return Err(ExtractError::NonSymplecticFlag {
                index: w[0].0,
                reason: format!("not contained in J^{}", w[1].0),
            });
        }
    }
    out.retain(|(_, m)| m.cols() > 0);
    Ok(out)
}

/// Rows `(top, bottom)` of the symbol, one entry per row.
fn rows_of(j: &JacobiCurve) -> Result<Vec<(HalfWeight, HalfWeight)>, ExtractError> {
    let n = j.dim();
    let levels = extended_flag_series(j)?;
    let idx: Vec<HalfWeight> = levels.keys().rev().copied().filter(|i| levels[i].cols() > 0).collect();
    // Adapted basis: B_i completes J^{next}(0) to J^i(0).
    let mut red = RowReducer::new(n);
    let mut all: Vec<sparse::SparseVec> = Vec::new();
    let mut owner: Vec<HalfWeight> = Vec::new();
    let mut gr: BTreeMap<HalfWeight, Vec<usize>> = BTreeMap::new();
    for &i in &idx {
        let m = levels[&i].at0();
        for c in columns(m) {
            let v = sparse::from_dense(&c);
            if red.insert(v.clone()) {
                gr.entry(i).or_default().push(all.len());
                all.push(v);
                owner.push(i);
            }
        }
    }
    if all.len() != n {
        return Err(ExtractError::NonSymplecticFlag {
            index: *idx.last().unwrap(),
            reason: "the flag does not exhaust the space".into(),
        });
    }
    let coords = Coordinates::new(n, &all);
    // δ̄: gr^i → gr^{i-1} from the first derivative of the basis of J^i.
    let mut maps: BTreeMap<HalfWeight, RatMatrix> = BTreeMap::new();
    for &i in &idx {
        let s = &levels[&i];
        let local = Coordinates::new(n, &columns(s.at0()).iter().map(|c| sparse::from_dense(c)).collect::<Vec<_>>());
        let d1 = &s.terms[1];
        let target = i - HalfWeight::ONE;
        let tgt: Vec<usize> = gr.get(&target).cloned().unwrap_or_default();
        let src = gr.get(&i).cloned().unwrap_or_default();
        let mut m = RatMatrix::zeros(tgt.len(), src.len());
        for (q, &b) in src.iter().enumerate() {
            let a = local.solve(&all[b]).expect("adapted vector lies in J^i(0)");
            let w = d1.mul_vec(&a);
            let cw = coords.solve(&sparse::from_dense(&w)).expect("basis of the space");
            for (p, c) in cw.iter().enumerate() {
                if !c.is_zero() && owner[p] < target {
                    return Err(ExtractError::NonSymplecticFlag {
                        index: i,
                        reason: format!("derivative leaves J^{target}"),
                    });
                }
            }
            for (row, &p) in tgt.iter().enumerate() {
                m[(row, q)] = cw[p].clone();
            }
        }
        maps.insert(i, m);
    }
    let dim = |i: HalfWeight| gr.get(&i).map_or(0, |v| v.len());
    // r(a, b): rank of δ̄^{a-b} from gr^a to gr^b.
    let rank = |a: HalfWeight, b: HalfWeight| -> usize {
        if dim(a) == 0 || dim(b) == 0 || b > a {
            return 0;
        }
        let mut m = RatMatrix::identity(dim(a));
        let mut i = a;
        while i > b {
            m = &maps[&i] * &m;
            i = i - HalfWeight::ONE;
        }
        m.rank()
    };
    let mut rows = Vec::new();
    for &a in &idx {
        for &b in &idx {
            if b > a || (a - b).twice() % 2 != 0 {
                continue;
            }
            let one = HalfWeight::ONE;
            let count = rank(a, b) as i64 - rank(a + one, b) as i64 - rank(a, b - one) as i64 + rank(a + one, b - one) as i64;
            if count < 0 {
                return Err(ExtractError::Unrecognized(format!("negative row count at ({a}, {b})")));
            }
            rows.extend(std::iter::repeat((a, b)).take(count as usize));
        }
    }
    Ok(rows)
}

fn symbol_from_rows(rows: &[(HalfWeight, HalfWeight)]) -> Result<FlagSymbol, ExtractError> {
    let describe = || format!("{:?}", rows.iter().map(|(a, b)| format!("{a}..{b}")).collect::<Vec<_>>());
    let mut left: Vec<(HalfWeight, HalfWeight)> = rows.to_vec();
    let mut comps = Vec::new();
    while let Some((a, b)) = left.pop() {
        if !a.is_integral() {
            if a != -b {
                return Err(ExtractError::Unrecognized(describe()));
            }
            comps.push(SymbolComponent::OneRow { m: a });
            continue;
        }
        let partner = (-b, -a);
        let Some(pos) = left.iter().position(|r| *r == partner) else {
            return Err(ExtractError::Unrecognized(describe()));
        };
        left.remove(pos);
        // The e row is the one with the higher top.
        let (top, bottom) = if a >= partner.0 { (a, b) } else { partner };
        let s = top.as_int().unwrap();
        let l = (top - bottom).as_int().unwrap();
        comps.push(SymbolComponent::two_row(s, l).map_err(|e: SymbolError| ExtractError::Unrecognized(e.to_string()))?);
    }
    FlagSymbol::new(comps).map_err(|e| ExtractError::Unrecognized(e.to_string()))
}

/// Dimensions of the iterated osculating spaces of `J` (and of `J^∠` for
/// even rank) at `t = 0`, up to the first step that does not grow.
fn osculation_profile(j: &JacobiCurve) -> Result<Vec<usize>, ExtractError> {
    let n = j.dim();
    let chain = |start: Series| -> Option<Vec<usize>> {
        let mut cur = start;
        let mut dims = vec![cur.cols()];
        while cur.cols() < n {
            if cur.len() < 2 {
                return None;
            }
            let next = cur.osculate();
            if next.cols() == cur.cols() {
                break;
            }
            dims.push(next.cols());
            cur = next;
        }
        Some(dims)
    };
    let mut len = 4;
    while len <= 2 * n + 4 {
        let base = Series::from_poly(&j.columns, len).independent_cols();
        let mut starts = vec![base.clone()];
        if j.case == RankCase::Even {
            starts.push(base.perp(&j.sigma));
        }
        let dims: Option<Vec<Vec<usize>>> = starts.into_iter().map(chain).collect();
        if let Some(d) = dims {
            return Ok(d.concat());
        }
        len += 2;
    }
    Err(ExtractError::Shape("osculating spaces never stabilize".into()))
}

/// The flag symbol of `J` at `t = 0`.
pub fn extract_flag_symbol(j: &JacobiCurve) -> Result<FlagSymbol, ExtractError> {
    let at_zero = osculation_profile(j)?;
    // Osculating dimensions are lower semicontinuous, so the generic profile
    // is the largest one seen; a few sample points guard against hitting a
    // singular one.
    let mut generic = at_zero.clone();
    for t0 in [1, -2, 3] {
        let p = osculation_profile(&j.shift(&Rational::from_int(t0)))?;
        if p > generic {
            generic = p;
        }
    }
    if at_zero != generic {
        return Err(ExtractError::NonRegularPoint { at_zero, generic });
    }
    extended_flag_at_zero(j)?;
    symbol_from_rows(&rows_of(j)?)
}

pub fn extract_from_flag_curve(c: &FlagCurve) -> Result<FlagSymbol, ExtractError> {
    extract_flag_symbol(&c.jacobi_curve())
}

mod matrix_serde {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &RatMatrix, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..m.rows()).map(|i| m.row(i).iter().map(|x| x.to_string()).collect()).collect();
        serde::Serialize::serialize(&rows, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<RatMatrix, D::Error> {
        let rows: Vec<Vec<String>> = Vec::deserialize(d)?;
        parse(rows).map_err(serde::de::Error::custom)
    }

    pub fn parse(rows: Vec<Vec<String>>) -> Result<RatMatrix, String> {
        let width = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != width) {
            return Err("ragged matrix".into());
        }
        let parsed: Result<Vec<Vec<Rational>>, String> = rows
            .into_iter()
            .map(|r| r.into_iter().map(|x| x.parse::<Rational>().map_err(|e| format!("{x:?}: {e:?}"))).collect())
            .collect();
        Ok(RatMatrix::from_rows(parsed?))
    }
}

mod poly_matrix_serde {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(p: &PolyMatrix, s: S) -> Result<S::Ok, S::Error> {
        let all: Vec<Vec<Vec<String>>> = p
            .iter()
            .map(|m| (0..m.rows()).map(|i| m.row(i).iter().map(|x| x.to_string()).collect()).collect())
            .collect();
        serde::Serialize::serialize(&all, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<PolyMatrix, D::Error> {
        let all: Vec<Vec<Vec<String>>> = Vec::deserialize(d)?;
        all.into_iter().map(|m| matrix_serde::parse(m).map_err(serde::de::Error::custom)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::MultiPoly;
    use crate::symbol::{build_model_space, parse_symbol};

    fn round_trip(s: &str) -> FlagSymbol {
        let sym = parse_symbol(s).unwrap();
        extract_from_flag_curve(&flat_curve(&build_model_space(&sym))).unwrap()
    }

    #[test]
    fn flat_curve_at_zero_is_the_model_filtration() {
        let x = build_model_space(&parse_symbol("D(2,3)+R(5/2)").unwrap());
        let c = flat_curve(&x);
        for (i, b) in &c.blocks {
            let m = eval_poly_matrix(b, &Rational::zero());
            assert_eq!(m.cols(), (0..x.dim()).filter(|&k| x.weight(k) >= *i).count());
            for j in 0..m.cols() {
                let col = m.column(j);
                let k = col.iter().position(|v| !v.is_zero()).unwrap();
                assert!(x.weight(k) >= *i);
                assert_eq!(col.iter().filter(|v| !v.is_zero()).count(), 1);
            }
        }
    }

    #[test]
    fn r32_top_line_is_a_twisted_cubic() {
        let c = flat_curve(&build_model_space(&parse_symbol("R(3/2)").unwrap()));
        let top = c.block(HalfWeight::from_twice(3)).unwrap();
        // Coefficients of e^{tδ} ε_{3/2}: t^k/k! in slot k.
        for (k, m) in top.iter().enumerate() {
            let fact: i64 = (1..=k as i64).product();
            let col = m.column(0);
            for (i, v) in col.iter().enumerate() {
                let expect = if i == k { Rational::new(1, fact) } else { Rational::zero() };
                assert_eq!(*v, expect);
            }
        }
    }

    #[test]
    fn d23_positive_block_isotropic_in_t() {
        let x = build_model_space(&parse_symbol("D(2,3)").unwrap());
        let c = flat_curve(&x);
        let b = c.block(HalfWeight::ONE).unwrap();
        let t = crate::exact::poly::var_names("t", 1);
        let n = x.dim();
        let col = |j: usize| -> Vec<MultiPoly> {
            (0..n)
                .map(|i| {
                    let mut p = MultiPoly::zero(t.clone());
                    for (k, m) in b.iter().enumerate() {
                        p = p.add(&MultiPoly::var(t.clone(), 0).pow(k as u32).scale(&m[(i, j)]));
                    }
                    p
                })
                .collect()
        };
        for a in 0..b[0].cols() {
            for bb in 0..b[0].cols() {
                let (u, v) = (col(a), col(bb));
                let mut acc = MultiPoly::zero(t.clone());
                for i in 0..n {
                    for k in 0..n {
                        acc = acc.add(&u[i].mul(&v[k]).scale(&x.sigma[(i, k)]));
                    }
                }
                assert!(acc.is_zero());
            }
        }
    }

    #[test]
    fn round_trips() {
        for s in ["D(2,3)", "R(5/2)", "R(3/2)", "D(1,2)", "D(3,4)+R(5/2)", "D(2,3)+D(3,5)", "2*D(2,3)"] {
            assert_eq!(round_trip(s), parse_symbol(s).unwrap(), "{s}");
        }
    }

    #[test]
    fn conjugated_and_reparametrized() {
        for s in ["R(5/2)", "D(2,3)+R(5/2)", "D(2,4)"] {
            let sym = parse_symbol(s).unwrap();
            let j = flat_curve(&build_model_space(&sym)).jacobi_curve();
            let g = random_symplectic(&j.sigma, 42, 3);
            assert_eq!(&(&g.transpose() * &j.sigma) * &g, j.sigma);
            let moved = j.conjugate(&g).reparametrize(&Rational::new(2, 3));
            assert_eq!(extract_flag_symbol(&moved).unwrap(), sym, "{s}");
            let flag = extended_flag_at_zero(&moved).unwrap();
            assert_eq!(flag.last().unwrap().1.rank(), j.dim());
            for (i, m) in flag {
                if i > HalfWeight::ZERO {
                    assert!((&(&m.transpose() * &j.sigma) * &m).is_zero(), "{s} {i}");
                }
            }
        }
    }

    #[test]
    fn singular_point_detected() {
        // J(t) spanned by t·e^{tδ}(...) loses rank at 0.
        let j = flat_curve(&build_model_space(&parse_symbol("R(5/2)").unwrap())).jacobi_curve();
        let mut shifted = vec![RatMatrix::zeros(j.columns[0].rows(), j.columns[0].cols())];
        shifted.extend(j.columns.iter().cloned());
        let bad = JacobiCurve { columns: shifted, ..j };
        assert!(extract_flag_symbol(&bad).is_err());
    }

    #[test]
    fn json_round_trip() {
        let j = flat_curve(&build_model_space(&parse_symbol("R(5/2)").unwrap())).jacobi_curve();
        let text = serde_json::to_string(&j).unwrap();
        let back: JacobiCurve = serde_json::from_str(&text).unwrap();
        assert_eq!(back.columns, j.columns);
        assert_eq!(extract_flag_symbol(&back).unwrap(), parse_symbol("R(5/2)").unwrap());
    }
}
