//! The flag prolongation `u^F(δ)` inside `csp(X)`, the `sl2`-triple of `δ`,
//! the maximal non-negative `sl2`-submodule `l(X)` of `sp(X)` and its
//! closed-form dimension count.

use crate::exact::sparse::{self, RowReducer};
use crate::exact::{HalfWeight, RatMatrix, Rational};
use crate::subspace::MatrixSubspace;
use crate::symbol::{FlagSymbol, GradedSymplecticSpace, Row, RowKind, SymbolComponent};
use crate::tanaka::symmetric_inertia;

/// Degree of the matrix unit sending basis vector `s` to `r`.
fn unit_degree(x: &GradedSymplecticSpace, r: usize, s: usize) -> HalfWeight {
    x.weight(r) - x.weight(s)
}

/// All degrees carried by `gl(X)`, ascending.
pub fn degree_range(x: &GradedSymplecticSpace) -> Vec<HalfWeight> {
    let ws = x.weights_desc();
    let mut d: Vec<HalfWeight> = ws.iter().flat_map(|&a| ws.iter().map(move |&b| a - b)).collect();
    d.sort();
    d.dedup();
    d
}

/// `sp(X)` in degree `d`.
pub fn sp_degree(x: &GradedSymplecticSpace, d: HalfWeight) -> MatrixSubspace {
    let n = x.dim();
    let mut var = vec![vec![usize::MAX; n]; n];
    let mut slots = Vec::new();
    for r in 0..n {
        for s in 0..n {
            if unit_degree(x, r, s) == d {
                var[r][s] = slots.len();
                slots.push((r, s));
            }
        }
    }
    if slots.is_empty() {
        return MatrixSubspace::zero(n, n);
    }
    // partner[k] = (j, σ_kj) for the single nonzero entry of row k.
    let partner: Vec<(usize, Rational)> = (0..n)
        .map(|k| {
            let j = (0..n).find(|&j| !x.sigma[(k, j)].is_zero()).expect("nondegenerate");
            (j, x.sigma[(k, j)].clone())
        })
        .collect();
    // (Aᵀσ + σA)_ij = A_ki σ_kj + σ_ik' A_k'j with k the partner of j, k' of i.
    let mut red = RowReducer::new(slots.len());
    for i in 0..n {
        for j in i..n {
            let mut row = Vec::new();
            let (k, skj) = (partner[j].0, -&partner[j].1);
            if var[k][i] != usize::MAX {
                row.push((var[k][i], skj));
            }
            let (k2, sik) = partner[i].clone();
            if var[k2][j] != usize::MAX {
                row.push((var[k2][j], sik));
            }
            let row = sparse::normalize(row);
            if !row.is_empty() {
                red.insert(row);
            }
        }
    }
    let mats = red.kernel().into_iter().map(|v| {
        let mut m = RatMatrix::zeros(n, n);
        for (idx, c) in v {
            let (r, s) = slots[idx];
            m[(r, s)] = c;
        }
        m
    });
    MatrixSubspace::from_spanning(n, n, mats)
}

/// `csp(X)` in degree `d`; the conformal factor only lives in degree 0.
pub fn csp_degree(x: &GradedSymplecticSpace, d: HalfWeight) -> MatrixSubspace {
    let sp = sp_degree(x, d);
    if d == HalfWeight::ZERO {
        let n = x.dim();
        sp.sum(&MatrixSubspace::from_spanning(n, n, [RatMatrix::identity(n)]))
    } else {
        sp
    }
}

pub fn sp_all(x: &GradedSymplecticSpace) -> MatrixSubspace {
    sum_all(x, degree_range(x).into_iter().map(|d| sp_degree(x, d)))
}

/// `sp(X)` in non-negative degrees.
pub fn sp_nonneg(x: &GradedSymplecticSpace) -> MatrixSubspace {
    sum_all(
        x,
        degree_range(x)
            .into_iter()
            .filter(|d| *d >= HalfWeight::ZERO)
            .map(|d| sp_degree(x, d)),
    )
}

fn sum_all(x: &GradedSymplecticSpace, parts: impl Iterator<Item = MatrixSubspace>) -> MatrixSubspace {
    let n = x.dim();
    MatrixSubspace::from_spanning(n, n, parts.flat_map(|p| p.basis))
}

#[derive(Debug, Clone)]
pub struct FlagProlongation {
    /// `(degree, u_degree)` in ascending degree, starting at −1.
    pub pieces: Vec<(HalfWeight, MatrixSubspace)>,
}

impl FlagProlongation {
    pub fn total_dim(&self) -> usize {
        self.pieces.iter().map(|(_, p)| p.dim()).sum()
    }

    pub fn dim_at(&self, d: HalfWeight) -> usize {
        self.pieces.iter().find(|(k, _)| *k == d).map_or(0, |(_, p)| p.dim())
    }

    /// The whole algebra as one subspace of `gl(X)`.
    pub fn algebra(&self) -> MatrixSubspace {
        let (r, c) = (self.pieces[0].1.rows, self.pieces[0].1.cols);
        MatrixSubspace::from_spanning(r, c, self.pieces.iter().flat_map(|(_, p)| p.basis.clone()))
    }
}

/// `u_{-1} = Rδ`, `u_d = {v ∈ csp^d : [v, δ] ∈ u_{d-1}}`. For half-integer
/// steps `u_{-1/2} = 0`. Degrees run up to the weight span, beyond which
/// `csp^d` vanishes.
pub fn flag_prolong(x: &GradedSymplecticSpace) -> FlagProlongation {
    let n = x.dim();
    let step = if degree_range(x).iter().any(|d| !d.is_integral()) {
        HalfWeight::HALF
    } else {
        HalfWeight::ONE
    };
    let top = *degree_range(x).last().unwrap();
    let mut pieces = vec![(
        -HalfWeight::ONE,
        MatrixSubspace::from_spanning(n, n, [x.delta.clone()]),
    )];
    if step == HalfWeight::HALF {
        pieces.push((-HalfWeight::HALF, MatrixSubspace::zero(n, n)));
    }
    let mut d = HalfWeight::ZERO;
    while d <= top {
        let below = pieces
            .iter()
            .find(|(k, _)| *k == d - HalfWeight::ONE)
            .map(|(_, p)| p.clone())
            .unwrap_or_else(|| MatrixSubspace::zero(n, n));
        let u = csp_degree(x, d).preimage_in(&below, |v| v.commutator(&x.delta));
        pieces.push((d, u));
        d = d + step;
    }
    FlagProlongation { pieces }
}

#[derive(Debug, Clone)]
pub struct Sl2Triple {
    pub e: RatMatrix,
    pub h: RatMatrix,
    pub f: RatMatrix,
}

impl Sl2Triple {
    /// `[e,f] = h`, `[h,e] = -2e`, `[h,f] = 2f`.
    pub fn relations_hold(&self) -> bool {
        let two = Rational::from_int(2);
        self.e.commutator(&self.f) == self.h
            && self.h.commutator(&self.e) == self.e.scale(&-&two)
            && self.h.commutator(&self.f) == self.f.scale(&two)
    }

    pub fn span(&self) -> MatrixSubspace {
        let n = self.e.rows();
        MatrixSubspace::from_spanning(n, n, [self.e.clone(), self.h.clone(), self.f.clone()])
    }
}

/// `e = δ`; `h` is twice the weight measured from the centre of each row;
/// `f` is the matching raising operator.
pub fn sl2_triple(x: &GradedSymplecticSpace) -> Sl2Triple {
    let n = x.dim();
    let mut h = RatMatrix::zeros(n, n);
    let mut f = RatMatrix::zeros(n, n);
    for (row, members) in x.rows.iter().zip(&x.row_members) {
        let len = members.len() as i64;
        for (pos, &b) in members.iter().enumerate() {
            h[(b, b)] = Rational::from_int(x.weight(b).twice() - row.centre_twice());
            let i = pos as i64 + 1;
            if i > 1 {
                f[(members[pos - 1], b)] = Rational::from_int(-(i - 1) * (len - i + 1));
            }
        }
    }
    Sl2Triple {
        e: x.delta.clone(),
        h,
        f,
    }
}

/// Greatest subspace of `sp(X)_{≥0}` stable under `ad e` and `ad f`, by
/// degree. `ad e` lowers the degree by one and `ad f` raises it.
pub fn l_of_x_graded(x: &GradedSymplecticSpace, t: &Sl2Triple) -> Vec<(HalfWeight, MatrixSubspace)> {
    let n = x.dim();
    let mut pieces: Vec<(HalfWeight, MatrixSubspace)> = degree_range(x)
        .into_iter()
        .filter(|d| *d >= HalfWeight::ZERO)
        .map(|d| (d, sp_degree(x, d)))
        .collect();
    let zero = MatrixSubspace::zero(n, n);
    loop {
        let mut changed = false;
        for i in 0..pieces.len() {
            let d = pieces[i].0;
            let find = |w: HalfWeight| pieces.iter().find(|(k, _)| *k == w).map_or(&zero, |(_, p)| p);
            let below = find(d - HalfWeight::ONE);
            let above = find(d + HalfWeight::ONE);
            let cur = &pieces[i].1;
            let next = cur
                .preimage_in(below, |v| t.e.commutator(v))
                .intersect(&cur.preimage_in(above, |v| t.f.commutator(v)));
            if next.dim() != cur.dim() {
                pieces[i].1 = next;
                changed = true;
            }
        }
        if !changed {
            return pieces;
        }
    }
}

pub fn l_of_x(x: &GradedSymplecticSpace, t: &Sl2Triple) -> MatrixSubspace {
    sum_all(x, l_of_x_graded(x, t).into_iter().map(|(_, p)| p))
}

/// Matrices of degree `d` preserving every tableau row.
fn row_block_diagonal(x: &GradedSymplecticSpace, d: HalfWeight) -> MatrixSubspace {
    let n = x.dim();
    let mut mats = Vec::new();
    for r in 0..n {
        for s in 0..n {
            if x.basis[r].row == x.basis[s].row && unit_degree(x, r, s) == d {
                let mut m = RatMatrix::zeros(n, n);
                m[(r, s)] = Rational::one();
                mats.push(m);
            }
        }
    }
    MatrixSubspace::from_spanning(n, n, mats)
}

/// Zeroes the diagonal row blocks.
pub fn off_row_projection(x: &GradedSymplecticSpace, a: &RatMatrix) -> RatMatrix {
    let mut out = a.clone();
    for r in 0..x.dim() {
        for s in 0..x.dim() {
            if x.basis[r].row == x.basis[s].row {
                out[(r, s)] = Rational::zero();
            }
        }
    }
    out
}

/// `Z_i`: identity on the e-row and minus identity on the f-row of the
/// `i`-th two-row component.
pub fn z_generators(x: &GradedSymplecticSpace) -> Vec<RatMatrix> {
    let n = x.dim();
    let mut out = Vec::new();
    for (ci, c) in x.symbol.components().iter().enumerate() {
        if !matches!(c, SymbolComponent::TwoRow { .. }) {
            continue;
        }
        let mut m = RatMatrix::zeros(n, n);
        for (ri, row) in x.rows.iter().enumerate() {
            if row.component != ci {
                continue;
            }
            let v = if row.kind == RowKind::E { 1 } else { -1 };
            for &b in &x.row_members[ri] {
                m[(b, b)] = Rational::from_int(v);
            }
        }
        out.push(m);
    }
    out
}

#[derive(Debug, Clone)]
pub struct AzpDecomposition {
    pub sl2: Sl2Triple,
    pub u_f: MatrixSubspace,
    /// `r(u^F) = u^F ∩ sp(X)`.
    pub r: MatrixSubspace,
    pub l_of_x: MatrixSubspace,
    pub a: MatrixSubspace,
    pub z: MatrixSubspace,
    pub p: MatrixSubspace,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct AzpDims {
    pub u_f: usize,
    pub r: usize,
    pub l_of_x: usize,
    pub a: usize,
    pub z: usize,
    pub p: usize,
}

impl AzpDecomposition {
    pub fn dims(&self) -> AzpDims {
        AzpDims {
            u_f: self.u_f.dim(),
            r: self.r.dim(),
            l_of_x: self.l_of_x.dim(),
            a: self.a.dim(),
            z: self.z.dim(),
            p: self.p.dim(),
        }
    }

    /// Structural identities between the pieces; returns the failures.
    pub fn check(&self, x: &GradedSymplecticSpace) -> Vec<String> {
        let n = x.dim();
        let mut bad = Vec::new();
        let sl2 = self.sl2.span();
        if !self.sl2.relations_hold() {
            bad.push("sl2 relations".into());
        }
        if !self.r.same_as(&self.l_of_x.sum(&sl2)) {
            bad.push("r != l(X) + sl2".into());
        }
        if self.l_of_x.intersect(&sl2).dim() != 0 {
            bad.push("l(X) meets sl2".into());
        }
        let id = MatrixSubspace::from_spanning(n, n, [RatMatrix::identity(n)]);
        if !self.u_f.same_as(&self.r.sum(&id)) || self.r.contains(&RatMatrix::identity(n)) {
            bad.push("u^F != r + R Id".into());
        }
        if self.l_of_x.dim() != self.z.dim() + self.p.dim() {
            bad.push("l(X) != z + p".into());
        }
        if !self.a.same_as(&sl2.intersect(&self.a).sum(&self.z)) {
            bad.push("a != sl2 ∩ a + z".into());
        }
        let zs = MatrixSubspace::from_spanning(n, n, z_generators(x));
        if !self.z.same_as(&zs) {
            bad.push("z is not spanned by the Z_i".into());
        }
        bad
    }
}

pub fn decompose_azp(x: &GradedSymplecticSpace) -> AzpDecomposition {
    let n = x.dim();
    let sl2 = sl2_triple(x);
    let flag = flag_prolong(x);
    let l_pieces = l_of_x_graded(x, &sl2);
    let zero = MatrixSubspace::zero(n, n);
    let (mut r, mut a, mut z) = (Vec::new(), Vec::new(), Vec::new());
    for (d, u) in &flag.pieces {
        // Off degree zero, csp and sp agree.
        let r_d = if *d == HalfWeight::ZERO {
            u.intersect(&sp_degree(x, *d))
        } else {
            u.clone()
        };
        let a_d = row_block_diagonal(x, *d).intersect(&r_d);
        let l_d = l_pieces.iter().find(|(k, _)| k == d).map_or(&zero, |(_, p)| p);
        z.extend(a_d.intersect(l_d).basis.clone());
        a.extend(a_d.basis);
        r.extend(r_d.basis);
    }
    let l = sum_all(x, l_pieces.into_iter().map(|(_, p)| p));
    let p = MatrixSubspace::from_spanning(n, n, l.basis.iter().map(|m| off_row_projection(x, m)));
    AzpDecomposition {
        sl2,
        u_f: flag.algebra(),
        r: MatrixSubspace::from_spanning(n, n, r),
        l_of_x: l,
        a: MatrixSubspace::from_spanning(n, n, a),
        z: MatrixSubspace::from_spanning(n, n, z),
        p,
    }
}

/// `Σ dim Π_{l1+l2-2i}` over `max(0, s1-r2) ≤ i ≤ min(l1,l2)` when
/// `s2 ≥ s1` and `r2 ≥ r1`, in doubled weights.
pub fn n_dim(y1: &Row, y2: &Row) -> usize {
    let (s1, r1) = (y1.top.twice(), y1.bottom.twice());
    let (s2, r2) = (y2.top.twice(), y2.bottom.twice());
    if s2 < s1 || r2 < r1 {
        return 0;
    }
    let (l1, l2) = ((s1 - r1) / 2, (s2 - r2) / 2);
    // s1 - r2 is a weight difference; only integral values of i count
    let lo = {
        let d = s1 - r2;
        if d <= 0 {
            0
        } else {
            (d + 1) / 2
        }
    };
    (lo..=l1.min(l2)).map(|i| (l1 + l2 - 2 * i + 1) as usize).sum()
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct ComponentPrediction {
    pub component: String,
    pub s_e: usize,
    pub s_f: usize,
    pub n_e: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct PairPrediction {
    pub left: usize,
    pub right: usize,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct PredictedDims {
    pub components: Vec<ComponentPrediction>,
    pub pairs: Vec<PairPrediction>,
    pub l_of_x: usize,
    pub z: usize,
    pub p: usize,
    pub u_f: usize,
}

/// Dimensions from the `sl2` decomposition formulas alone.
pub fn predicted_dims(sym: &FlagSymbol) -> PredictedDims {
    let rows = sym.rows();
    let mut components = Vec::new();
    let mut l_total = 0;
    let mut z = 0;
    for c in sym.components() {
        match *c {
            SymbolComponent::TwoRow { s, l } => {
                let s_e: usize = ((l - s).max(0)..=l / 2).map(|i| (2 * l - 4 * i + 1) as usize).sum();
                let s_f = usize::from(l % 2 == 0 && 2 * s == l);
                components.push(ComponentPrediction {
                    component: c.to_string(),
                    s_e,
                    s_f,
                    n_e: 1,
                });
                l_total += 1 + s_e + s_f;
                z += 1;
            }
            SymbolComponent::OneRow { .. } => components.push(ComponentPrediction {
                component: c.to_string(),
                s_e: 0,
                s_f: 0,
                n_e: 0,
            }),
        }
    }
    let mut pairs = Vec::new();
    let ncomp = sym.components().len();
    for i in 0..ncomp {
        for j in i + 1..ncomp {
            let mut dim = 0;
            for y1 in rows.iter().filter(|r| r.component == i) {
                for y2 in rows.iter().filter(|r| r.component == j) {
                    dim += n_dim(y1, y2);
                }
            }
            l_total += dim;
            pairs.push(PairPrediction { left: i, right: j, dim });
        }
    }
    let sl2 = if rows.iter().any(|r| r.len() >= 2) { 3 } else { 0 };
    PredictedDims {
        components,
        pairs,
        l_of_x: l_total,
        z,
        p: l_total - z,
        u_f: l_total + sl2 + 1,
    }
}

/// `e^{tδ}` as its coefficient matrices in `t`.
pub fn exp_t_delta(delta: &RatMatrix) -> Vec<RatMatrix> {
    let n = delta.rows();
    let mut out = vec![RatMatrix::identity(n)];
    let mut pow = RatMatrix::identity(n);
    let mut k = 1i64;
    loop {
        pow = &pow * delta;
        if pow.is_zero() {
            return out;
        }
        let fact: i64 = (1..=k).product();
        out.push(pow.scale(&Rational::new(1, fact)));
        k += 1;
    }
}

/// Whether `A(e^{tδ} X_i) ⊆ e^{tδ} X_i` for every filtration step `X_i`
/// (sum of weights ≥ i), identically in `t`: every coefficient of
/// `e^{-tδ} A e^{tδ}` must have non-negative degree.
pub fn preserves_flat_curve(x: &GradedSymplecticSpace, a: &RatMatrix) -> bool {
    let plus = exp_t_delta(&x.delta);
    let minus: Vec<RatMatrix> = plus
        .iter()
        .enumerate()
        .map(|(k, m)| if k % 2 == 1 { -m } else { m.clone() })
        .collect();
    preserves_by_degree(x, a, &minus, &plus)
}

fn preserves_by_degree(x: &GradedSymplecticSpace, a: &RatMatrix, minus: &[RatMatrix], plus: &[RatMatrix]) -> bool {
    let n = x.dim();
    let top = minus.len() + plus.len();
    for k in 0..top {
        let mut acc = RatMatrix::zeros(n, n);
        for i in 0..=k {
            if i < minus.len() && k - i < plus.len() {
                acc = &acc + &(&(&minus[i] * a) * &plus[k - i]);
            }
        }
        for r in 0..n {
            for s in 0..n {
                if !acc[(r, s)].is_zero() && unit_degree(x, r, s) < HalfWeight::ZERO {
                    return false;
                }
            }
        }
    }
    true
}

#[derive(Debug, Clone)]
pub enum Rank1Search {
    /// No element of rank one.
    Absent,
    /// A rational rank-one element.
    Witness(RatMatrix),
    /// Rank-one elements exist but none found with rational entries.
    Irrational { degree: HalfWeight },
    /// The search could not decide.
    Undecided { degree: HalfWeight },
}

/// Rank-one elements of a graded subspace `p ⊆ sp(X)`.
///
/// A rank-one element of `sp(X)` is `x ↦ σ(u, x) u`. The torus limit of a
/// rank-one element is a homogeneous rank-one element, and homogeneity of
/// degree `d` forces `u ∈ X^{d/2}`. So it suffices to solve the quadratic
/// system `A_u ∈ p` on each weight piece of non-negative weight.
pub fn rank_one_search(x: &GradedSymplecticSpace, p: &MatrixSubspace) -> Rank1Search {
    let n = x.dim();
    let mut undecided = None;
    for w in x.weights_desc() {
        if w < HalfWeight::ZERO {
            continue;
        }
        let d = w + w;
        let piece = x.piece(w);
        let p_d = p.intersect(&sp_degree(x, d));
        // Linear functionals on sp^d vanishing on p^d, as flat row vectors.
        let sp_d = sp_degree(x, d);
        let quotient = annihilator_rows(&sp_d, &p_d, n);
        let au = |u: &[Rational]| -> RatMatrix {
            let full: Vec<Rational> = {
                let mut v = vec![Rational::zero(); n];
                for (k, &b) in piece.iter().enumerate() {
                    v[b] = u[k].clone();
                }
                v
            };
            let su: Vec<Rational> = x.sigma.transpose().mul_vec(&full);
            // x ↦ σ(u, x) u, i.e. u (σᵀ u)ᵀ
            let mut m = RatMatrix::zeros(n, n);
            for r in 0..n {
                for s in 0..n {
                    if !full[r].is_zero() && !su[s].is_zero() {
                        m[(r, s)] = &full[r] * &su[s];
                    }
                }
            }
            m
        };
        let in_p = |m: &RatMatrix| quotient.iter().all(|q| dot(q, &m.to_sparse()).is_zero());
        let k = piece.len();
        let unit = |i: usize| -> Vec<Rational> { (0..k).map(|j| Rational::from_int(i64::from(i == j))).collect() };
        match k {
            1 => {
                let m = au(&unit(0));
                if in_p(&m) {
                    return Rank1Search::Witness(m);
                }
            }
            2 => {
                // A_{(a,b)} = a² P + ab Q + b² R on the quotient.
                let m11 = au(&unit(0));
                let m22 = au(&unit(1));
                let both = au(&[Rational::one(), Rational::one()]);
                let m12 = &(&both - &m11) - &m22;
                let coords = |m: &RatMatrix| -> Vec<Rational> { quotient.iter().map(|q| dot(q, &m.to_sparse())).collect() };
                let (pp, qq, rr) = (coords(&m11), coords(&m12), coords(&m22));
                if pp.iter().all(|c| c.is_zero()) {
                    return Rank1Search::Witness(m11);
                }
                match common_real_root(&pp, &qq, &rr) {
                    RootKind::None => {}
                    RootKind::Rational(t) => return Rank1Search::Witness(au(&[t, Rational::one()])),
                    RootKind::Irrational => return Rank1Search::Irrational { degree: d },
                }
            }
            _ => {
                // Basis and pairwise-sum candidates, then a definiteness certificate.
                let mut cands: Vec<Vec<Rational>> = (0..k).map(unit).collect();
                for i in 0..k {
                    for j in i + 1..k {
                        for sgn in [1, -1] {
                            let mut v = unit(i);
                            v[j] = Rational::from_int(sgn);
                            cands.push(v);
                        }
                    }
                }
                if let Some(m) = cands.iter().map(|u| au(u)).find(|m| in_p(m)) {
                    return Rank1Search::Witness(m);
                }
                if !definite_combination(&quotient, &au, k) {
                    undecided.get_or_insert(d);
                }
            }
        }
    }
    match undecided {
        Some(d) => Rank1Search::Undecided { degree: d },
        None => Rank1Search::Absent,
    }
}

fn dot(a: &sparse::SparseVec, b: &sparse::SparseVec) -> Rational {
    let mut acc = Rational::zero();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                acc += &(&a[i].1 * &b[j].1);
                i += 1;
                j += 1;
            }
        }
    }
    acc
}

/// Functionals on `gl` that vanish on `sub` but not identically on `ambient`.
fn annihilator_rows(ambient: &MatrixSubspace, sub: &MatrixSubspace, n: usize) -> Vec<sparse::SparseVec> {
    let mut red = RowReducer::new(n * n);
    for m in &sub.basis {
        red.insert(m.to_sparse());
    }
    // Functionals vanishing on sub: kernel of the matrix whose rows are sub's basis.
    let ann = red.kernel();
    // Keep those independent on the ambient space.
    let mut keep = Vec::new();
    let mut seen = RowReducer::new(ambient.dim());
    for f in ann {
        let v = sparse::normalize(ambient.basis.iter().enumerate().map(|(i, m)| (i, dot(&f, &m.to_sparse()))).collect());
        if seen.insert(v) {
            keep.push(f);
        }
    }
    keep
}

enum RootKind {
    None,
    Rational(Rational),
    Irrational,
}

/// Common real roots `t` of `t² p_i + t q_i + r_i` over all coordinates `i`.
fn common_real_root(p: &[Rational], q: &[Rational], r: &[Rational]) -> RootKind {
    let mut g: Option<Vec<Rational>> = None;
    for i in 0..p.len() {
        let poly = vec![r[i].clone(), q[i].clone(), p[i].clone()];
        g = Some(match g {
            None => trim(poly),
            Some(h) => poly_gcd(h, trim(poly)),
        });
    }
    let g = g.unwrap_or_default();
    match g.len() {
        0 => RootKind::Rational(Rational::zero()),
        1 => RootKind::None,
        2 => RootKind::Rational(-&(&g[0] / &g[1])),
        _ => {
            let (c, b, a) = (&g[0], &g[1], &g[2]);
            let disc = &(b * b) - &(&(a * c) * &Rational::from_int(4));
            if disc.signum() < 0 {
                RootKind::None
            } else if let Some(sq) = rational_sqrt(&disc) {
                RootKind::Rational(&(&-b + &sq) / &(a * &Rational::from_int(2)))
            } else {
                RootKind::Irrational
            }
        }
    }
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_gcd(mut a: Vec<Rational>, mut b: Vec<Rational>) -> Vec<Rational> {
    if a.is_empty() {
        return b;
    }
    while !b.is_empty() {
        // a mod b
        while a.len() >= b.len() && !a.is_empty() {
            let f = a.last().unwrap() / b.last().unwrap();
            let shift = a.len() - b.len();
            for (i, c) in b.iter().enumerate() {
                a[i + shift] = &a[i + shift] - &(&f * c);
            }
            a = trim(a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a
}

fn rational_sqrt(x: &Rational) -> Option<Rational> {
    let (n, d) = (x.numer(), x.denom());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    (&rn * &rn == n && &rd * &rd == d).then(|| Rational::from_big(num_rational::BigRational::new(rn, rd)))
}

/// Looks for a definite combination of the restricted quadratic forms; its
/// existence rules out common real zeros.
fn definite_combination(quotient: &[sparse::SparseVec], au: &dyn Fn(&[Rational]) -> RatMatrix, k: usize) -> bool {
    let unit = |i: usize| -> Vec<Rational> { (0..k).map(|j| Rational::from_int(i64::from(i == j))).collect() };
    let forms: Vec<RatMatrix> = quotient
        .iter()
        .map(|q| {
            let val = |u: &[Rational]| dot(q, &au(u).to_sparse());
            let mut b = RatMatrix::zeros(k, k);
            for i in 0..k {
                b[(i, i)] = val(&unit(i));
            }
            for i in 0..k {
                for j in i + 1..k {
                    let mut u = unit(i);
                    u[j] = Rational::one();
                    let v = &(&val(&u) - &b[(i, i)]) - &b[(j, j)];
                    let half = &v / &Rational::from_int(2);
                    b[(i, j)] = half.clone();
                    b[(j, i)] = half;
                }
            }
            b
        })
        .collect();
    let definite = |b: &RatMatrix| {
        let s = symmetric_inertia(b.clone());
        s.rank == k && (s.positive == k || s.negative == k)
    };
    if forms.iter().any(definite) {
        return true;
    }
    for i in 0..forms.len() {
        for j in i + 1..forms.len() {
            for c in [1, -1, 2, -2] {
                if definite(&(&forms[i] + &forms[j].scale(&Rational::from_int(c)))) {
                    return true;
                }
            }
        }
    }
    false
}
