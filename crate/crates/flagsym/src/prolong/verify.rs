//! Polynomial realization of Tanaka prolongations and the comparison with
//! standard prolongations and secant ideals.

use std::sync::Arc;

use crate::exact::{MultiPoly, Rational};
use crate::flag::{decompose_azp, exp_t_delta};
use crate::symbol::{
    build_model_space, classify_finiteness, FlagSymbol, Finiteness, GradedSymplecticSpace, RowKind, SymbolComponent,
};
use crate::tanaka::{prolong_symbol, TanakaError, TanakaProlongation};

use super::hankel::{admissible_alphas, hankel_minor_space};
use super::secant::{
    certificate_kind, secant_dim_upper_bound, secant_ideal, vanishes_on_secant, CertificateKind, SecantError,
    VarietySampler,
};
use super::{coordinate_vars, monomial_index, quadratic_forms, standard_prolong, PolySpace};

/// Monomial count above which the modular upper bound for an ideal slice is
/// not attempted.
pub const BOUND_MONOMIAL_LIMIT: usize = 1500;

/// `Ψ(u^k)`: each `U ∈ u^k` evaluated `k` times on `v ∈ X` gives `A(v) ∈ u^0`,
/// and `v ↦ σ(v, A(v)v)` is a polynomial of degree `k+2`.
pub fn psi_space(x: &GradedSymplecticSpace, tp: &TanakaProlongation, k: usize) -> PolySpace {
    let vars = coordinate_vars(&x.basis.iter().map(|b| b.label.clone()).collect::<Vec<_>>());
    let n = x.dim();
    let zero = MultiPoly::zero(vars.clone());
    let w: Vec<MultiPoly> = (0..n).map(|i| MultiPoly::var(vars.clone(), i)).collect();
    let Some(top) = tp.levels.get(k) else {
        return PolySpace::zero(vars, k as u32 + 2);
    };
    let apply = |level: usize, state: &[MultiPoly], out_dim: usize| -> Vec<MultiPoly> {
        let mut out = vec![zero.clone(); out_dim];
        for (q, sq) in state.iter().enumerate() {
            if sq.is_zero() {
                continue;
            }
            for (b, wb) in w.iter().enumerate() {
                let img = &tp.levels[level].maps[q][b];
                if img.is_empty() {
                    continue;
                }
                let base = sq.mul(wb);
                for (r, c) in img {
                    out[*r].add_scaled(c, &base);
                }
            }
        }
        out
    };
    let mut polys = Vec::new();
    for q in 0..top.dim() {
        let mut state = vec![zero.clone(); top.dim()];
        state[q] = MultiPoly::one(vars.clone());
        for p in (1..=k).rev() {
            state = apply(p, &state, tp.levels[p - 1].dim());
        }
        let av = apply(0, &state, n);
        let mut psi = zero.clone();
        for i in 0..n {
            for j in 0..n {
                if !x.sigma[(i, j)].is_zero() && !av[j].is_zero() {
                    psi.add_scaled(&x.sigma[(i, j)], &w[i].mul(&av[j]));
                }
            }
        }
        polys.push(psi);
    }
    PolySpace::from_spanning(vars, k as u32 + 2, polys)
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct IdealColumn {
    pub name: String,
    pub dim: usize,
    /// `false` when `dim` is only an upper bound.
    pub exact: bool,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct VerifyRow {
    pub k: usize,
    pub u: usize,
    pub psi: usize,
    pub p: usize,
    pub l: usize,
    pub ideals: Vec<IdealColumn>,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct TheoremCheck {
    pub theorem: String,
    pub applies: bool,
    pub reason: String,
    /// `None` when skipped.
    pub pass: Option<bool>,
    pub failures: Vec<String>,
}

impl TheoremCheck {
    fn skipped(theorem: &str, reason: String) -> Self {
        TheoremCheck {
            theorem: theorem.into(),
            applies: false,
            reason,
            pass: None,
            failures: Vec::new(),
        }
    }

    fn run(theorem: &str, reason: String, failures: Vec<String>) -> Self {
        TheoremCheck {
            theorem: theorem.into(),
            applies: true,
            reason,
            pass: Some(failures.is_empty()),
            failures,
        }
    }
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct VerifyReport {
    pub symbol: String,
    pub seed: u64,
    pub finite: bool,
    pub termination_degree: Option<usize>,
    pub rows: Vec<VerifyRow>,
    pub theorems: Vec<TheoremCheck>,
}

impl VerifyReport {
    /// Whether every applicable check passed.
    pub fn passed(&self) -> bool {
        self.theorems.iter().all(|t| t.pass != Some(false))
    }

    pub fn theorem(&self, name: &str) -> Option<&TheoremCheck> {
        self.theorems.iter().find(|t| t.theorem == name)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Tanaka(#[from] TanakaError),
    #[error(transparent)]
    Secant(#[from] SecantError),
}

fn standard_hypotheses(sym: &FlagSymbol) -> Result<String, String> {
    if let Finiteness::Infinite(v) = classify_finiteness(sym) {
        return Err(format!("not of finite type ({v:?})"));
    }
    for c in sym.components() {
        match *c {
            SymbolComponent::TwoRow { s, l } if l + 1 < 4 => {
                return Err(format!("row of D({s},{l}) has {} < 4 boxes", l + 1));
            }
            SymbolComponent::OneRow { m } if m.twice() + 1 < 6 => {
                return Err(format!("row of R({m}) has {} < 6 boxes", m.twice() + 1));
            }
            _ => {}
        }
    }
    Ok("finite type, every ℤ-row has ≥ 4 boxes, the odd row (if any) ≥ 6".into())
}

fn exact_hypotheses(sym: &FlagSymbol) -> Result<String, String> {
    let d: Vec<(i64, i64)> = sym
        .components()
        .iter()
        .filter_map(|c| match *c {
            SymbolComponent::TwoRow { s, l } => Some((s, l)),
            _ => None,
        })
        .collect();
    if let Some((s, l)) = d.iter().find(|(s, l)| *l == 2 * s) {
        return Err(format!("rectangular component D({s},{l})"));
    }
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let ((s1, l1), (s2, l2)) = (d[i], d[j]);
            if s1 + s2 <= l1.max(l2) {
                return Err(format!("D({s1},{l1}) and D({s2},{l2}) have s1+s2 ≤ max(l1,l2)"));
            }
        }
    }
    Ok("no rectangular D component and s1+s2 > max(l1,l2) for every pair".into())
}

fn unit(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

/// Basis indices of `X_{j0}`, the sum of the positive weight spaces.
pub fn positive_part(x: &GradedSymplecticSpace) -> Vec<usize> {
    (0..x.dim()).filter(|&i| x.weight(i).twice() > 0).collect()
}

/// The weight-0 box of the E row of a non-rectangular D component.
fn e_zero(x: &GradedSymplecticSpace, component: usize) -> Option<usize> {
    match x.symbol.components()[component] {
        SymbolComponent::TwoRow { s, l } if l != 2 * s => {}
        _ => return None,
    }
    (0..x.dim()).find(|&i| {
        let row = &x.rows[x.basis[i].row];
        row.component == component && row.kind == RowKind::E && x.weight(i).twice() == 0
    })
}

/// Spanning vectors of `𝔏_i` for every D component, plus `X_{j0}` alone when
/// an R component is present.
pub fn l_subspaces(x: &GradedSymplecticSpace) -> Vec<(String, Vec<usize>)> {
    let pos = positive_part(x);
    let mut out = Vec::new();
    for (ci, c) in x.symbol.components().iter().enumerate() {
        let mut idx = pos.clone();
        if let Some(e0) = e_zero(x, ci) {
            idx.push(e0);
        }
        match c {
            SymbolComponent::TwoRow { s, l } => out.push((format!("E_{}(D({s},{l}))", ci + 1), idx)),
            SymbolComponent::OneRow { .. } => out.push((format!("E_{}(X_j0)", ci + 1), idx)),
        }
    }
    out
}

pub fn orbit_variety(x: &GradedSymplecticSpace, name: &str, idx: &[usize]) -> VarietySampler {
    let vars = coordinate_vars(&x.basis.iter().map(|b| b.label.clone()).collect::<Vec<_>>());
    let basis: Vec<Vec<Rational>> = idx.iter().map(|&i| unit(x.dim(), i)).collect();
    VarietySampler::orbit(name, vars, &exp_t_delta(&x.delta), &basis)
}

/// `T^{l-s-1}ℭ` in the coordinates of the F row of a single `D(s,l)`, with
/// `ℭ: t ↦ e^{tδ} f_{l-s}`, plus the X indices of the F row.
pub fn f_row_variety(x: &GradedSymplecticSpace) -> Option<(VarietySampler, Vec<usize>)> {
    let [SymbolComponent::TwoRow { s, l }] = *x.symbol.components() else {
        return None;
    };
    let fr = x.rows.iter().position(|r| r.kind == RowKind::F)?;
    let members = x.row_members[fr].clone();
    let vars = Arc::new(members.iter().map(|&i| format!("x[{}]", x.basis[i].label)).collect::<Vec<_>>());
    let t = Arc::new(vec!["t".to_string()]);
    let mut fact = Rational::one();
    let mut coords = Vec::new();
    for j in 0..members.len() as u32 {
        if j > 0 {
            fact = &fact * &Rational::from_int(j as i64);
        }
        coords.push(MultiPoly::var(t.clone(), 0).pow(j).scale(&fact.recip()));
    }
    let curve = VarietySampler::new(format!("C(D({s},{l}))"), vars, coords, false);
    let j = (l - s - 1).max(0) as usize;
    Some((curve.tangential_developable(j), members))
}

fn describe(ok: bool, what: String) -> Option<String> {
    (!ok).then_some(what)
}

/// Compares, for `1 ≤ k ≤ k_max`, the Tanaka prolongation `u^k` (through
/// `Ψ`) with standard prolongations of `p` and `l(X)` and with secant ideals.
pub fn verify_prolongation_theorems(sym: &FlagSymbol, k_max: usize, seed: u64) -> Result<VerifyReport, VerifyError> {
    let x = build_model_space(sym);
    let tp = match prolong_symbol(&x, k_max) {
        Ok(tp) => tp,
        Err(TanakaError::CapReached(tp)) => *tp,
        Err(e) => return Err(e.into()),
    };
    let finite = matches!(classify_finiteness(sym), Finiteness::Finite);
    let azp = decompose_azp(&x);
    let vars = coordinate_vars(&x.basis.iter().map(|b| b.label.clone()).collect::<Vec<_>>());
    let p_tilde = quadratic_forms(&x.sigma, &vars, &azp.p);
    let k_top = tp.termination_degree.map_or(k_max, |t| t.min(k_max));

    let standard = standard_hypotheses(sym);
    let exact = standard.clone().and_then(|g| exact_hypotheses(sym).map(|e| format!("{g}; {e}")));
    let single_pair = match *sym.components() {
        [SymbolComponent::TwoRow { s, l }] if s < l && l < 2 * s => Ok(format!("single D({s},{l}) with s < l < 2s")),
        _ => Err("not a single D(s,l) with s < l < 2s".to_string()),
    };
    let li = l_subspaces(&x);
    let e_i: Vec<VarietySampler> = li.iter().map(|(name, idx)| orbit_variety(&x, name, idx)).collect();
    let e_all = {
        let mut idx: Vec<usize> = li.iter().flat_map(|(_, v)| v.clone()).collect();
        idx.sort_unstable();
        idx.dedup();
        orbit_variety(&x, "E", &idx)
    };
    let f_row = if single_pair.is_ok() { f_row_variety(&x) } else { None };

    let mut rows = Vec::new();
    let (mut f_std_p, mut f_std_l, mut f_incl, mut f_eq, mut f_tan) = (vec![], vec![], vec![], vec![], vec![]);
    for k in 1..=k_top {
        let ku = k as u32;
        let psi = psi_space(&x, &tp, k);
        let u = tp.dim_at(k);
        let pk = standard_prolong(&x.sigma, &vars, &azp.p, ku);
        let lk = standard_prolong(&x.sigma, &vars, &azp.l_of_x, ku);
        let mut ideals = Vec::new();
        if psi.dim() != u {
            f_std_p.push(format!("k={k}: Ψ is not injective ({} < {u})", psi.dim()));
        }
        if standard.is_ok() {
            if let Some(e) = describe(psi.same_as(&pk), format!("k={k}: Ψ(u^k) has dim {}, p^(k) has dim {}", psi.dim(), pk.dim())) {
                f_std_p.push(e);
            }
            if let Some(e) = describe(psi.same_as(&lk), format!("k={k}: Ψ(u^k) has dim {}, l(X)^(k) has dim {}", psi.dim(), lk.dim())) {
                f_std_l.push(e);
            }
            let small = monomial_index(x.dim(), ku + 2).len() <= BOUND_MONOMIAL_LIMIT;
            for v in &e_i {
                let kind = certificate_kind(v, ku + 2, ku);
                let bad = psi.basis.iter().filter(|f| !vanishes_on_secant(v, ku, f, kind)).count();
                if bad > 0 {
                    f_incl.push(format!("k={k}: {bad} elements of Ψ(u^k) do not vanish on S^k {}", v.name));
                }
                if small {
                    ideals.push(IdealColumn {
                        name: format!("I_{}(S^{k} {})", k + 2, v.name),
                        dim: secant_dim_upper_bound(v, ku + 2, ku, seed),
                        exact: false,
                    });
                }
            }
        }
        if exact.is_ok() {
            let kind = CertificateKind::Partials;
            if !psi.basis.iter().all(|f| vanishes_on_secant(&e_all, ku, f, kind)) {
                f_eq.push(format!("k={k}: Ψ(u^k) does not vanish on S^k E"));
            }
            if monomial_index(x.dim(), ku + 2).len() <= BOUND_MONOMIAL_LIMIT {
                let bound = secant_dim_upper_bound(&e_all, ku + 2, ku, seed);
                ideals.push(IdealColumn {
                    name: format!("I_{}(S^{k} E)", k + 2),
                    dim: bound,
                    exact: bound == psi.dim(),
                });
                if bound != psi.dim() {
                    f_eq.push(format!("k={k}: I_{}(S^k E) may have dim up to {bound}, Ψ(u^k) has {}", k + 2, psi.dim()));
                }
            } else {
                f_eq.push(format!("k={k}: ideal slice too large to bound"));
            }
        }
        if let Some((v, members)) = &f_row {
            let ideal = secant_ideal(v, ku + 2, ku, seed)?;
            let embedded = ideal.space.embed(vars.clone(), members);
            ideals.push(IdealColumn {
                name: format!("I_{}(S^{k} {})", k + 2, v.name),
                dim: ideal.space.dim(),
                exact: true,
            });
            if !psi.same_as(&embedded) {
                f_tan.push(format!("k={k}: Ψ(u^k) has dim {}, the embedded ideal {}", psi.dim(), embedded.dim()));
            }
            if let [SymbolComponent::TwoRow { s, l }] = *sym.components() {
                if l == s + 1 {
                    let h = hankel_in_f_coords(s, k as i64, &ideal.space.vars);
                    let hd = h.as_ref().map_or(0, |h| h.dim());
                    ideals.push(IdealColumn {
                        name: format!("hankel({s},{k})"),
                        dim: hd,
                        exact: true,
                    });
                    let same = match &h {
                        Some(h) => h.same_as(&ideal.space),
                        None => ideal.space.dim() == 0,
                    };
                    if !same {
                        f_tan.push(format!("k={k}: Hankel minors ({hd}) differ from the secant ideal ({})", ideal.space.dim()));
                    }
                }
            }
        }
        rows.push(VerifyRow {
            k,
            u,
            psi: psi.dim(),
            p: pk.dim(),
            l: lk.dim(),
            ideals,
        });
    }

    let mut theorems = Vec::new();
    let mut push = |name: &str, hyp: &Result<String, String>, fails: Vec<String>| {
        theorems.push(match hyp {
            Ok(r) => TheoremCheck::run(name, r.clone(), fails),
            Err(r) => TheoremCheck::skipped(name, r.clone()),
        });
    };
    push("tanaka_is_standard_p", &standard, f_std_p);
    push("tanaka_is_standard_l", &standard, f_std_l);
    push("tanaka_in_secant_ideals", &standard, f_incl);
    push("tanaka_is_secant_ideal", &exact, f_eq);
    push("tanaka_is_tangential_secant_ideal", &single_pair, f_tan);

    // p̃ ⊆ I_2(E_i).
    let orbit_hyp = standard.clone().map(|_| "p̃ vanishes on every E_i".to_string());
    let mut f_orbit = Vec::new();
    if orbit_hyp.is_ok() {
        for v in &e_i {
            let bad = p_tilde.basis.iter().filter(|f| !v.pull_back(f).is_zero()).count();
            if bad > 0 {
                f_orbit.push(format!("{bad} quadrics of p̃ do not vanish on {}", v.name));
            }
        }
    }
    push("p_vanishes_on_orbits", &orbit_hyp, f_orbit);

    // p̃ = I_2(T^{l-s-1}ℭ).
    let mut f_tan_quad = Vec::new();
    if let Some((v, members)) = &f_row {
        let ideal = secant_ideal(v, 2, 0, seed)?;
        let embedded = ideal.space.embed(vars.clone(), members);
        if !p_tilde.same_as(&embedded) {
            f_tan_quad.push(format!("p̃ has dim {}, I_2 of {} has dim {}", p_tilde.dim(), v.name, embedded.dim()));
        }
    }
    push("p_is_tangential_quadrics", &single_pair, f_tan_quad);

    Ok(VerifyReport {
        symbol: sym.to_string(),
        seed,
        finite,
        termination_degree: tp.termination_degree,
        rows,
        theorems,
    })
}

/// The Hankel minors for `S^k ℭ` rewritten in F-row coordinates
/// `y_j = x_{j+1}/j!`; `None` when no admissible `α` exists.
pub fn hankel_in_f_coords(s: i64, k: i64, f_vars: &Arc<Vec<String>>) -> Option<PolySpace> {
    let alpha = *admissible_alphas(s, k).start();
    let h = hankel_minor_space(s, k, alpha).ok()?;
    let mut fact = Rational::one();
    let subs: Vec<MultiPoly> = (0..f_vars.len())
        .map(|j| {
            if j > 0 {
                fact = &fact * &Rational::from_int(j as i64);
            }
            MultiPoly::var(f_vars.clone(), j).scale(&fact)
        })
        .collect();
    Some(PolySpace::from_spanning(f_vars.clone(), h.degree, h.basis.iter().map(|p| p.substitute(&subs)).collect::<Vec<_>>()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::parse_symbol;

    #[test]
    fn d23_everything_vanishes_at_k1() {
        let r = verify_prolongation_theorems(&parse_symbol("D(2,3)").unwrap(), 6, 42).unwrap();
        let row = &r.rows[0];
        assert_eq!((row.k, row.u, row.psi, row.p, row.l), (1, 0, 0, 0, 0));
        assert!(r.passed(), "{:#?}", r.theorems);
    }

    #[test]
    fn r32_skips_standard_comparison() {
        let r = verify_prolongation_theorems(&parse_symbol("R(3/2)").unwrap(), 6, 42).unwrap();
        let g = r.theorem("tanaka_is_standard_p").unwrap();
        assert!(!g.applies);
        assert!(r.rows[0].u > 0);
    }
}
