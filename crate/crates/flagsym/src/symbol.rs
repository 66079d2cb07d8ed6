//! Symplectic flag symbols as skew Young diagrams, and their model spaces.
//!
//! A symbol is a multiset of indecomposable pieces: two-row pieces `D(s,l)`
//! with boxes at weights `s-l..s` (the `e` row) and `-s..l-s` (the `f` row),
//! and one-row pieces `R(m)` with boxes at weights `-m..m`, `m` half-odd.

use std::fmt;

use crate::exact::{HalfWeight, RatMatrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymbolError {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("constraint violated: {0}")]
    Constraint(String),
    #[error("unsupported rank {0}: closed enumeration exists only for ranks 2 and 3")]
    UnsupportedRank(i64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymbolComponent {
    TwoRow { s: i64, l: i64 },
    OneRow { m: HalfWeight },
}

impl SymbolComponent {
    pub fn two_row(s: i64, l: i64) -> Result<Self, SymbolError> {
        if s < 0 || l < 0 || l > 2 * s {
            return Err(SymbolError::Constraint(format!(
                "D({s},{l}) needs 0 <= l <= 2s"
            )));
        }
        Ok(SymbolComponent::TwoRow { s, l })
    }

    pub fn one_row(m: HalfWeight) -> Result<Self, SymbolError> {
        if m.is_integral() || m.twice() < 1 {
            return Err(SymbolError::Constraint(format!(
                "R({m}) needs a positive half-odd m"
            )));
        }
        Ok(SymbolComponent::OneRow { m })
    }

    pub fn dim(&self) -> usize {
        match *self {
            SymbolComponent::TwoRow { l, .. } => 2 * (l as usize + 1),
            SymbolComponent::OneRow { m } => m.twice() as usize + 1,
        }
    }

    /// Rows as (kind, top weight, bottom weight).
    pub fn rows(&self) -> Vec<(RowKind, HalfWeight, HalfWeight)> {
        match *self {
            SymbolComponent::TwoRow { s, l } => vec![
                (RowKind::E, HalfWeight::from_int(s), HalfWeight::from_int(s - l)),
                (RowKind::F, HalfWeight::from_int(l - s), HalfWeight::from_int(-s)),
            ],
            SymbolComponent::OneRow { m } => vec![(RowKind::R, m, -m)],
        }
    }
}

impl fmt::Display for SymbolComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolComponent::TwoRow { s, l } => write!(f, "D({s},{l})"),
            SymbolComponent::OneRow { m } => write!(f, "R({}/2)", m.twice()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum IndexSet {
    /// ℤ
    Integer,
    /// ½ℤ_odd
    HalfOdd,
    /// ½ℤ
    Half,
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IndexSet::Integer => "Z",
            IndexSet::HalfOdd => "1/2 Z_odd",
            IndexSet::Half => "1/2 Z",
        })
    }
}

/// Parity of the distribution rank; fixes ε and the extension recipe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum RankCase {
    Odd,
    Two,
    Even,
}

impl RankCase {
    pub fn epsilon(self) -> HalfWeight {
        match self {
            RankCase::Odd => HalfWeight::ONE,
            RankCase::Two | RankCase::Even => HalfWeight::HALF,
        }
    }

    /// Weight step between consecutive filtration indices.
    pub fn step(self) -> HalfWeight {
        match self {
            RankCase::Odd | RankCase::Two => HalfWeight::ONE,
            RankCase::Even => HalfWeight::HALF,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FlagSymbol {
    components: Vec<SymbolComponent>,
}

impl FlagSymbol {
    /// Canonicalizes the order; rejects more than one one-row piece.
    pub fn new(mut components: Vec<SymbolComponent>) -> Result<Self, SymbolError> {
        if components.is_empty() {
            return Err(SymbolError::Constraint("empty symbol".into()));
        }
        let n_r = components
            .iter()
            .filter(|c| matches!(c, SymbolComponent::OneRow { .. }))
            .count();
        if n_r > 1 {
            return Err(SymbolError::Constraint(
                "at most one R component is allowed".into(),
            ));
        }
        components.sort();
        Ok(FlagSymbol { components })
    }

    pub fn components(&self) -> &[SymbolComponent] {
        &self.components
    }

    pub fn index_set(&self) -> IndexSet {
        let has_d = self
            .components
            .iter()
            .any(|c| matches!(c, SymbolComponent::TwoRow { .. }));
        let has_r = self
            .components
            .iter()
            .any(|c| matches!(c, SymbolComponent::OneRow { .. }));
        match (has_d, has_r) {
            (true, false) => IndexSet::Integer,
            (false, true) => IndexSet::HalfOdd,
            _ => IndexSet::Half,
        }
    }

    pub fn dim(&self) -> usize {
        self.components.iter().map(|c| c.dim()).sum()
    }

    /// All rows in canonical component order.
    pub fn rows(&self) -> Vec<Row> {
        let mut out = Vec::new();
        for (ci, c) in self.components.iter().enumerate() {
            for (kind, top, bottom) in c.rows() {
                out.push(Row {
                    component: ci,
                    kind,
                    top,
                    bottom,
                });
            }
        }
        out
    }

    pub fn two_row_count(&self) -> usize {
        self.components
            .iter()
            .filter(|c| matches!(c, SymbolComponent::TwoRow { .. }))
            .count()
    }
}

impl fmt::Display for FlagSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.components.len() {
            let c = self.components[i];
            let mut k = 1;
            while i + k < self.components.len() && self.components[i + k] == c {
                k += 1;
            }
            if k == 1 {
                parts.push(c.to_string());
            } else {
                parts.push(format!("{k}*{c}"));
            }
            i += k;
        }
        f.write_str(&parts.join("+"))
    }
}

impl serde::Serialize for FlagSymbol {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        #[derive(serde::Serialize)]
        #[serde(tag = "type")]
        enum Comp {
            D { s: i64, l: i64 },
            R { m2: i64 },
        }
        let comps: Vec<Comp> = self
            .components
            .iter()
            .map(|c| match *c {
                SymbolComponent::TwoRow { s, l } => Comp::D { s, l },
                SymbolComponent::OneRow { m } => Comp::R { m2: m.twice() },
            })
            .collect();
        let mut st = s.serialize_struct("FlagSymbol", 1)?;
        st.serialize_field("components", &comps)?;
        st.end()
    }
}

impl<'de> serde::Deserialize<'de> for FlagSymbol {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        #[serde(tag = "type")]
        enum Comp {
            D { s: i64, l: i64 },
            R { m2: i64 },
        }
        #[derive(serde::Deserialize)]
        struct Raw {
            components: Vec<Comp>,
        }
        let raw = Raw::deserialize(d)?;
        let comps: Result<Vec<SymbolComponent>, SymbolError> = raw
            .components
            .into_iter()
            .map(|c| match c {
                Comp::D { s, l } => SymbolComponent::two_row(s, l),
                Comp::R { m2 } => SymbolComponent::one_row(HalfWeight::from_twice(m2)),
            })
            .collect();
        comps.and_then(FlagSymbol::new).map_err(serde::de::Error::custom)
    }
}

fn parse_int(s: &str, whole: &str) -> Result<i64, SymbolError> {
    s.trim()
        .parse::<i64>()
        .map_err(|_| SymbolError::Syntax(format!("expected an integer, got {:?} in {whole:?}", s.trim())))
}

fn parse_component(text: &str, whole: &str) -> Result<Vec<SymbolComponent>, SymbolError> {
    let text = text.trim();
    let (mult, body) = match text.split_once('*') {
        Some((k, rest)) => (parse_int(k, whole)?, rest.trim()),
        None => (1, text),
    };
    if mult < 1 {
        return Err(SymbolError::Constraint(format!("multiplicity {mult} < 1")));
    }
    let syntax = || SymbolError::Syntax(format!("cannot read component {text:?} in {whole:?}"));
    let inner = |prefix: char| -> Option<&str> {
        let b = body.strip_prefix(prefix)?.trim_start();
        b.strip_prefix('(')?.strip_suffix(')')
    };
    let comp = if let Some(args) = inner('D') {
        let (s, l) = args.split_once(',').ok_or_else(syntax)?;
        SymbolComponent::two_row(parse_int(s, whole)?, parse_int(l, whole)?)?
    } else if let Some(arg) = inner('R') {
        let (p, q) = arg.split_once('/').ok_or_else(|| {
            SymbolError::Constraint(format!("R({}) must be written as p/2 with odd p", arg.trim()))
        })?;
        let (p, q) = (parse_int(p, whole)?, parse_int(q, whole)?);
        if q != 2 || p % 2 == 0 {
            return Err(SymbolError::Constraint(format!(
                "R({p}/{q}) is not a positive half-odd weight"
            )));
        }
        SymbolComponent::one_row(HalfWeight::from_twice(p))?
    } else {
        return Err(syntax());
    };
    Ok(vec![comp; mult as usize])
}

/// Parses `D(s,l)`, `k*D(s,l)` and `R(p/2)` pieces joined by `+`.
pub fn parse_symbol(spec: &str) -> Result<FlagSymbol, SymbolError> {
    if spec.trim().is_empty() {
        return Err(SymbolError::Syntax("empty symbol".into()));
    }
    let mut comps = Vec::new();
    for part in spec.split('+') {
        if part.trim().is_empty() {
            return Err(SymbolError::Syntax(format!("empty component in {spec:?}")));
        }
        comps.extend(parse_component(part, spec)?);
    }
    FlagSymbol::new(comps)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum RowKind {
    E,
    F,
    R,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct Row {
    pub component: usize,
    pub kind: RowKind,
    pub top: HalfWeight,
    pub bottom: HalfWeight,
}

impl Row {
    pub fn len(&self) -> usize {
        ((self.top - self.bottom).twice() / 2) as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Midpoint of the weight interval.
    pub fn centre_twice(&self) -> i64 {
        (self.top.twice() + self.bottom.twice()) / 2
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub enum Finiteness {
    Finite,
    Infinite(Violation),
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub enum Violation {
    /// The leftmost box of row `right` is in the column of, or right of, the
    /// rightmost box of row `left`.
    RowOverlap { left: usize, right: usize },
    /// The whole diagram is one row with two boxes.
    SingleTwoBoxRow,
}

impl fmt::Display for Finiteness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finiteness::Finite => write!(f, "Finite"),
            Finiteness::Infinite(Violation::SingleTwoBoxRow) => {
                write!(f, "Infinite (one row with two boxes)")
            }
            Finiteness::Infinite(Violation::RowOverlap { left, right }) => write!(
                f,
                "Infinite (row {right} starts in the column of or right of the end of row {left})"
            ),
        }
    }
}

/// Diagram criterion for finite type.
pub fn classify_finiteness(sym: &FlagSymbol) -> Finiteness {
    let rows = sym.rows();
    if rows.len() == 1 && rows[0].len() == 2 {
        return Finiteness::Infinite(Violation::SingleTwoBoxRow);
    }
    for (i, a) in rows.iter().enumerate() {
        for (j, b) in rows.iter().enumerate() {
            // Columns are weights, decreasing to the right.
            if i != j && b.top <= a.bottom {
                return Finiteness::Infinite(Violation::RowOverlap { left: i, right: j });
            }
        }
    }
    Finiteness::Finite
}

/// Pads `sym` with `pad_count` copies of `D(ε-ν, 0)`.
pub fn modify_symbol(
    sym: &FlagSymbol,
    pad_count: usize,
    case: RankCase,
    nu: HalfWeight,
) -> Result<FlagSymbol, SymbolError> {
    if pad_count == 0 {
        return Ok(sym.clone());
    }
    let w = case.epsilon() - nu;
    if w < HalfWeight::ZERO {
        return Err(SymbolError::Constraint(format!("epsilon - nu = {w} < 0")));
    }
    let Some(s) = w.as_int() else {
        return Err(SymbolError::Constraint(format!(
            "epsilon - nu = {w} is not an integer; padded rows would need a half-odd two-row piece"
        )));
    };
    let mut comps = sym.components.clone();
    comps.extend(std::iter::repeat(SymbolComponent::TwoRow { s, l: 0 }).take(pad_count));
    FlagSymbol::new(comps)
}

/// Symbols of rank-2 or rank-3 distributions on an `n`-manifold.
pub fn enumerate_symbols(rank: i64, n: i64) -> Result<Vec<FlagSymbol>, SymbolError> {
    if 2 * n - 6 <= 0 {
        return Err(SymbolError::Constraint(format!("n = {n} gives dim X = {} <= 0", 2 * n - 6)));
    }
    match rank {
        2 => {
            let m = HalfWeight::from_twice(2 * n - 7);
            Ok(vec![FlagSymbol::new(vec![SymbolComponent::one_row(m)?])?])
        }
        3 => {
            let l = n - 4;
            let lo = (l + 1) / 2;
            (lo..=l)
                .map(|s| FlagSymbol::new(vec![SymbolComponent::two_row(s, l)?]))
                .collect()
        }
        r => Err(SymbolError::UnsupportedRank(r)),
    }
}

/// Every symbol of dimension at most `max_dim` whose two-row pieces have
/// `s <= max_s`, with at most one one-row piece.
pub fn symbols_up_to_dim(max_dim: usize, max_s: i64) -> Vec<FlagSymbol> {
    let mut pool = Vec::new();
    for s in 0..=max_s {
        for l in 0..=2 * s {
            let c = SymbolComponent::TwoRow { s, l };
            if c.dim() <= max_dim {
                pool.push(c);
            }
        }
    }
    let mut ones = vec![None];
    let mut m2 = 1;
    while m2 as usize + 1 <= max_dim {
        ones.push(Some(SymbolComponent::OneRow { m: HalfWeight::from_twice(m2) }));
        m2 += 2;
    }
    let mut out = Vec::new();
    for r in ones {
        let base = r.map_or(0, |c| c.dim());
        let mut stack: Vec<SymbolComponent> = r.into_iter().collect();
        multisets(&pool, 0, max_dim - base, &mut stack, &mut out);
    }
    out
}

fn multisets(
    pool: &[SymbolComponent],
    from: usize,
    budget: usize,
    stack: &mut Vec<SymbolComponent>,
    out: &mut Vec<FlagSymbol>,
) {
    if !stack.is_empty() {
        out.push(FlagSymbol::new(stack.clone()).expect("valid by construction"));
    }
    for i in from..pool.len() {
        if pool[i].dim() <= budget {
            stack.push(pool[i]);
            multisets(pool, i, budget - pool[i].dim(), stack, out);
            stack.pop();
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct BasisVector {
    pub label: String,
    pub weight: HalfWeight,
    pub row: usize,
}

/// The model space `(X, σ, δ)` of a symbol.
#[derive(Debug, Clone)]
pub struct GradedSymplecticSpace {
    pub symbol: FlagSymbol,
    pub basis: Vec<BasisVector>,
    pub sigma: RatMatrix,
    pub delta: RatMatrix,
    pub rows: Vec<Row>,
    /// Basis indices of each row, from the leftmost box.
    pub row_members: Vec<Vec<usize>>,
}

fn sign(e: i64) -> Rational {
    Rational::from_int(if e.rem_euclid(2) == 0 { 1 } else { -1 })
}

pub fn build_model_space(sym: &FlagSymbol) -> GradedSymplecticSpace {
    let rows = sym.rows();
    let multi_d = sym.two_row_count() > 1;
    let mut basis = Vec::new();
    let mut row_members = Vec::new();
    let mut d_index = 0;
    let mut comp_d_index = vec![0; sym.components.len()];
    for (ci, c) in sym.components.iter().enumerate() {
        if matches!(c, SymbolComponent::TwoRow { .. }) {
            d_index += 1;
            comp_d_index[ci] = d_index;
        }
    }
    for (ri, row) in rows.iter().enumerate() {
        let mut members = Vec::new();
        let mut w = row.top;
        while w >= row.bottom {
            let letter = match row.kind {
                RowKind::E => "e",
                RowKind::F => "f",
                RowKind::R => "eps",
            };
            let label = if multi_d && row.kind != RowKind::R {
                format!("{letter}{}_{w}", comp_d_index[row.component])
            } else {
                format!("{letter}_{w}")
            };
            members.push(basis.len());
            basis.push(BasisVector {
                label,
                weight: w,
                row: ri,
            });
            w = w - HalfWeight::ONE;
        }
        row_members.push(members);
    }
    let n = basis.len();
    let mut sigma = RatMatrix::zeros(n, n);
    let mut delta = RatMatrix::zeros(n, n);
    for members in &row_members {
        for pair in members.windows(2) {
            delta[(pair[1], pair[0])] = Rational::one();
        }
    }
    for (ci, c) in sym.components.iter().enumerate() {
        let comp_rows: Vec<usize> = (0..rows.len()).filter(|&r| rows[r].component == ci).collect();
        match *c {
            SymbolComponent::TwoRow { s, .. } => {
                let (er, fr) = (comp_rows[0], comp_rows[1]);
                for &a in &row_members[er] {
                    let i = basis[a].weight;
                    let b = *row_members[fr]
                        .iter()
                        .find(|&&b| basis[b].weight == -i)
                        .expect("paired box");
                    let v = sign(s - i.as_int().unwrap());
                    sigma[(b, a)] = -&v;
                    sigma[(a, b)] = v;
                }
            }
            SymbolComponent::OneRow { m } => {
                let members = &row_members[comp_rows[0]];
                for &a in members {
                    let i = basis[a].weight;
                    if i <= HalfWeight::ZERO {
                        continue;
                    }
                    let b = *members.iter().find(|&&b| basis[b].weight == -i).unwrap();
                    let v = sign((m - i).as_int().unwrap());
                    sigma[(b, a)] = -&v;
                    sigma[(a, b)] = v;
                }
            }
        }
    }
    GradedSymplecticSpace {
        symbol: sym.clone(),
        basis,
        sigma,
        delta,
        rows,
        row_members,
    }
}

impl GradedSymplecticSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn weight(&self, i: usize) -> HalfWeight {
        self.basis[i].weight
    }

    /// Distinct weights, descending.
    pub fn weights_desc(&self) -> Vec<HalfWeight> {
        let mut w: Vec<HalfWeight> = self.basis.iter().map(|b| b.weight).collect();
        w.sort();
        w.dedup();
        w.reverse();
        w
    }

    pub fn piece(&self, w: HalfWeight) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.basis[i].weight == w).collect()
    }

    pub fn sigma_pair(&self, x: &[Rational], y: &[Rational]) -> Rational {
        let sy = self.sigma.mul_vec(y);
        let mut acc = Rational::zero();
        for (a, b) in x.iter().zip(&sy) {
            if !a.is_zero() && !b.is_zero() {
                acc += &(a * b);
            }
        }
        acc
    }

    /// Whether `A` satisfies `σ(Ax,y) + σ(x,Ay) = c σ(x,y)`.
    pub fn is_conformal(&self, a: &RatMatrix, c: &Rational) -> bool {
        // Aᵀσ + σA = cσ
        let lhs = &(&a.transpose() * &self.sigma) + &(&self.sigma * a);
        lhs == self.sigma.scale(c)
    }

    /// Structural checks; returns the list of failures.
    pub fn check(&self) -> Vec<String> {
        let mut bad = Vec::new();
        let n = self.dim();
        if !self.sigma.is_skew() {
            bad.push("sigma is not skew".to_string());
        }
        if self.sigma.det().is_zero() {
            bad.push("sigma is degenerate".to_string());
        }
        for i in 0..n {
            for j in 0..n {
                if !self.sigma[(i, j)].is_zero() && self.weight(i) + self.weight(j) != HalfWeight::ZERO {
                    bad.push(format!("sigma pairs {} with {}", self.basis[i].label, self.basis[j].label));
                }
                if !self.delta[(i, j)].is_zero() && self.weight(i) != self.weight(j) - HalfWeight::ONE {
                    bad.push(format!("delta does not lower weight at ({i},{j})"));
                }
            }
        }
        if !self.is_conformal(&self.delta, &Rational::zero()) {
            bad.push("delta is not in sp".to_string());
        }
        bad
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(s: &str) -> FlagSymbol {
        parse_symbol(s).unwrap()
    }

    #[test]
    fn parse_examples() {
        let a = sym("D(2,3)");
        assert_eq!(a.components(), &[SymbolComponent::TwoRow { s: 2, l: 3 }]);
        assert_eq!(a.index_set(), IndexSet::Integer);
        assert_eq!(sym("R(5/2)").index_set(), IndexSet::HalfOdd);
        assert_eq!(sym("D(3,4)+R(5/2)").index_set(), IndexSet::Half);
        assert_eq!(sym("R(1/2) + 2*D(1,2)").to_string(), "2*D(1,2)+R(1/2)");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_symbol("D(1,3)"), Err(SymbolError::Constraint(_))));
        assert!(matches!(parse_symbol("D(1,-1)"), Err(SymbolError::Constraint(_))));
        assert!(matches!(parse_symbol("R(2/2)"), Err(SymbolError::Constraint(_))));
        assert!(matches!(parse_symbol("R(1/2)+R(3/2)"), Err(SymbolError::Constraint(_))));
        assert!(matches!(parse_symbol("Q(1,2)"), Err(SymbolError::Syntax(_))));
        assert!(matches!(parse_symbol(""), Err(SymbolError::Syntax(_))));
        assert!(matches!(parse_symbol("D(1,2)+"), Err(SymbolError::Syntax(_))));
    }

    #[test]
    fn model_space_examples() {
        let x = build_model_space(&sym("D(2,3)"));
        assert_eq!(x.dim(), 8);
        let w: Vec<String> = x.basis.iter().map(|b| b.weight.to_string()).collect();
        assert_eq!(w, ["2", "1", "0", "-1", "1", "0", "-1", "-2"]);
        assert!(x.check().is_empty());

        let r = build_model_space(&sym("R(3/2)"));
        assert_eq!(r.dim(), 4);
        assert_eq!(r.sigma[(0, 3)], Rational::one());
        assert!(r.check().is_empty());

        let m = build_model_space(&sym("D(3,4)+R(5/2)"));
        assert_eq!(m.dim(), 16);
        assert!(m.check().is_empty());
        // Components are σ-orthogonal.
        for a in 0..10 {
            for b in 10..16 {
                assert!(m.sigma[(a, b)].is_zero());
            }
        }
    }

    #[test]
    fn finiteness_examples() {
        assert_eq!(classify_finiteness(&sym("D(2,3)")), Finiteness::Finite);
        assert_eq!(
            classify_finiteness(&sym("R(1/2)")),
            Finiteness::Infinite(Violation::SingleTwoBoxRow)
        );
        assert!(matches!(
            classify_finiteness(&sym("D(2,2)")),
            Finiteness::Infinite(Violation::RowOverlap { .. })
        ));
        assert_eq!(classify_finiteness(&sym("D(1,2)+R(1/2)")), Finiteness::Finite);
        for s in 0..6 {
            for l in 0..=2 * s {
                let f = classify_finiteness(&sym(&format!("D({s},{l})")));
                assert_eq!(f == Finiteness::Finite, s < l && l <= 2 * s, "D({s},{l})");
            }
        }
    }

    #[test]
    fn modify_examples() {
        let a = sym("D(2,3)");
        assert_eq!(modify_symbol(&a, 0, RankCase::Odd, HalfWeight::ZERO).unwrap(), a);
        assert_eq!(
            modify_symbol(&a, 1, RankCase::Odd, HalfWeight::from_int(-1)).unwrap(),
            sym("D(2,3)+D(2,0)")
        );
        assert!(modify_symbol(&a, 1, RankCase::Odd, HalfWeight::from_int(2)).is_err());
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(enumerate_symbols(2, 5).unwrap(), vec![sym("R(3/2)")]);
        assert_eq!(enumerate_symbols(3, 7).unwrap(), vec![sym("D(2,3)"), sym("D(3,3)")]);
        assert_eq!(enumerate_symbols(3, 6).unwrap(), vec![sym("D(1,2)"), sym("D(2,2)")]);
        assert_eq!(enumerate_symbols(4, 8), Err(SymbolError::UnsupportedRank(4)));
        for n in 4..12 {
            for r in [2, 3] {
                for s in enumerate_symbols(r, n).unwrap() {
                    assert_eq!(s.dim() as i64, 2 * n - 6);
                }
            }
        }
    }

    #[test]
    fn render_parse_roundtrip() {
        for s in ["D(0,0)", "2*D(1,2)+R(1/2)", "D(1,1)+D(3,5)+R(9/2)", "R(3/2)"] {
            let a = sym(s);
            assert_eq!(parse_symbol(&a.to_string()).unwrap(), a);
            assert_eq!(a.to_string(), s);
        }
    }

    #[test]
    fn json_form() {
        let a = parse_symbol("D(2,3)+R(5/2)").unwrap();
        let text = serde_json::to_string(&a).unwrap();
        assert_eq!(text, r#"{"components":[{"type":"D","s":2,"l":3},{"type":"R","m2":5}]}"#);
        assert_eq!(serde_json::from_str::<FlagSymbol>(&text).unwrap(), a);
        assert!(serde_json::from_str::<FlagSymbol>(r#"{"components":[{"type":"R","m2":4}]}"#).is_err());
    }
}
