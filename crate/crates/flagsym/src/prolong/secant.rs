//! Parametrized varieties and fixed-degree slices of the ideals of their
//! secant varieties.
//!
//! Kernels are found from random rational sample points and every kernel
//! element is then certified exactly, so the sampling only affects running
//! time, never the answer.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact::modp::{self, PRIME};
use crate::exact::poly::{monomials_of_degree, var_names};
use crate::exact::sparse::RowReducer;
use crate::exact::{Monomial, MultiPoly, RatMatrix, Rational};

use super::{embed_poly, monomial_index, PolySpace};

/// Above this many secant parameters full substitution is replaced by the
/// partials certificate whenever the latter is valid.
pub const SUBSTITUTION_PARAM_LIMIT: usize = 8;

/// A polynomial map from parameters onto (a dense subset of the cone over)
/// a projective variety.
#[derive(Debug, Clone)]
pub struct VarietySampler {
    pub name: String,
    pub ambient: Arc<Vec<String>>,
    pub params: Arc<Vec<String>>,
    pub coords: Vec<MultiPoly>,
    /// Whether the image is closed under scaling.
    pub cone: bool,
}

pub fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    Rational::new(rng.gen_range(-20..=20), rng.gen_range(1..=7))
}

impl VarietySampler {
    pub fn new(name: impl Into<String>, ambient: Arc<Vec<String>>, coords: Vec<MultiPoly>, cone: bool) -> Self {
        assert_eq!(ambient.len(), coords.len());
        let params = coords.first().map(|p| p.vars().clone()).unwrap_or_default();
        VarietySampler {
            name: name.into(),
            ambient,
            params,
            coords,
            cone,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.coords.len()
    }

    pub fn nparams(&self) -> usize {
        self.params.len()
    }

    /// Largest degree of a coordinate in the parameters.
    pub fn param_degree(&self) -> u32 {
        self.coords.iter().filter_map(|p| p.degree()).max().unwrap_or(0)
    }

    /// `t ↦ (1, t, …, t^deg)`.
    pub fn rational_normal_curve(deg: usize) -> Self {
        let t = var_names("t", 1);
        let coords = (0..=deg as u32).map(|j| MultiPoly::var(t.clone(), 0).pow(j)).collect();
        Self::new(format!("rational normal curve of degree {deg}"), var_names("x", deg + 1), coords, false)
    }

    /// `(t, u_0, …, u_j) ↦ Σ u_i c^(i)(t)` for a curve `c` with one parameter.
    pub fn tangential_developable(&self, j: usize) -> Self {
        assert_eq!(self.nparams(), 1, "tangential developable of a curve");
        let mut names = vec![self.params[0].clone()];
        names.extend((0..=j).map(|i| format!("u{i}")));
        let params = Arc::new(names);
        let np = params.len();
        let coords = self
            .coords
            .iter()
            .map(|c| {
                let mut acc = MultiPoly::zero(params.clone());
                let mut der = c.clone();
                for i in 0..=j {
                    let lifted = embed_poly(&der, &params, &[0], np);
                    acc = acc.add(&lifted.mul(&MultiPoly::var(params.clone(), i + 1)));
                    der = der.partial(0);
                }
                acc
            })
            .collect();
        VarietySampler {
            name: format!("T^{j} of {}", self.name),
            ambient: self.ambient.clone(),
            params,
            coords,
            cone: true,
        }
    }

    /// `(t, c_1, …, c_m) ↦ e^{tδ} Σ c_j b_j`, the union of the lines in the
    /// orbit of `span(b_j)`. `exp` is the output of `exp_t_delta`.
    pub fn orbit(name: impl Into<String>, ambient: Arc<Vec<String>>, exp: &[RatMatrix], basis: &[Vec<Rational>]) -> Self {
        let mut names = vec!["t".to_string()];
        names.extend((1..=basis.len()).map(|j| format!("c{j}")));
        let params = Arc::new(names);
        let np = params.len();
        let n = ambient.len();
        let mut coords = vec![MultiPoly::zero(params.clone()); n];
        for (p, e) in exp.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                let img = e.mul_vec(b);
                for (i, c) in img.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let mut m = vec![0; np];
                    m[0] = p as u32;
                    m[j + 1] = 1;
                    coords[i] = coords[i].add(&MultiPoly::monomial(params.clone(), Monomial(m), c.clone()));
                }
            }
        }
        VarietySampler {
            name: name.into(),
            ambient,
            params,
            coords,
            cone: true,
        }
    }

    /// Parametrization of the union of the secant `k`-planes, from `k+1`
    /// copies of the parameters (and mixing coefficients if not a cone).
    pub fn secant(&self, k: usize) -> Self {
        if k == 0 && self.cone {
            return self.clone();
        }
        let np = self.nparams();
        let mut names = Vec::new();
        for j in 0..=k {
            names.extend(self.params.iter().map(|p| format!("{p}#{j}")));
        }
        if !self.cone {
            names.extend((0..=k).map(|j| format!("lambda{j}")));
        }
        let params = Arc::new(names);
        let total = params.len();
        let mut coords = vec![MultiPoly::zero(params.clone()); self.ambient_dim()];
        for j in 0..=k {
            let map: Vec<usize> = (0..np).map(|i| j * np + i).collect();
            for (i, c) in self.coords.iter().enumerate() {
                let mut term = embed_poly(c, &params, &map, total);
                if !self.cone {
                    term = term.mul(&MultiPoly::var(params.clone(), (k + 1) * np + j));
                }
                coords[i] = coords[i].add(&term);
            }
        }
        VarietySampler {
            name: format!("S^{k} of {}", self.name),
            ambient: self.ambient.clone(),
            params,
            coords,
            cone: true,
        }
    }

    pub fn point<R: Rng>(&self, rng: &mut R) -> Vec<Rational> {
        let t: Vec<Rational> = (0..self.nparams()).map(|_| random_rational(rng)).collect();
        self.coords.iter().map(|c| c.eval(&t)).collect()
    }

    /// Image of small random integer parameters, which keeps exact
    /// elimination on sample rows cheap.
    pub fn integer_point<R: Rng>(&self, rng: &mut R) -> Vec<Rational> {
        let t: Vec<Rational> = (0..self.nparams()).map(|_| Rational::from_int(rng.gen_range(-9..=9))).collect();
        self.coords.iter().map(|c| c.eval(&t)).collect()
    }

    /// Ambient polynomial pulled back along the parametrization.
    pub fn pull_back(&self, f: &MultiPoly) -> MultiPoly {
        f.substitute(&self.coords)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum CertificateKind {
    /// The secant parametrization substituted into the polynomial is zero.
    Substitution,
    /// Every order-`k` partial derivative vanishes on the variety. For
    /// degree `d` this implies vanishing on the `k`th secant variety when
    /// `⌈d/(k+1)⌉ ≥ d−k`, since every term of the expansion along `k+1`
    /// points repeats some point at least `d−k` times.
    Partials,
}

/// Whether the partials certificate proves vanishing on `S^k` in degree `d`.
pub fn partials_certificate_valid(d: u32, k: u32) -> bool {
    d.div_ceil(k + 1) >= d.saturating_sub(k)
}

pub fn certificate_kind(v: &VarietySampler, degree: u32, k: u32) -> CertificateKind {
    let secant_params = (k as usize + 1) * (v.nparams() + usize::from(!v.cone));
    if secant_params > SUBSTITUTION_PARAM_LIMIT && partials_certificate_valid(degree, k) {
        CertificateKind::Partials
    } else {
        CertificateKind::Substitution
    }
}

/// Basis of the span of all order-`k` partial derivatives of `f`.
pub fn partials_of_order(f: &MultiPoly, k: u32) -> Vec<MultiPoly> {
    let d = f.degree().unwrap_or(0);
    if f.is_zero() || k > d {
        return Vec::new();
    }
    let mut cur = vec![f.clone()];
    for step in 1..=k {
        let next = cur.iter().flat_map(|p| (0..p.nvars()).map(move |i| p.partial(i))).filter(|p| !p.is_zero());
        cur = PolySpace::from_spanning(f.vars().clone(), d - step, next.collect::<Vec<_>>()).basis;
    }
    cur
}

/// Exact test that `f` vanishes on the `k`th secant variety of `v`.
pub fn vanishes_on_secant(v: &VarietySampler, k: u32, f: &MultiPoly, kind: CertificateKind) -> bool {
    if f.is_zero() {
        return true;
    }
    match kind {
        CertificateKind::Substitution => v.secant(k as usize).pull_back(f).is_zero(),
        CertificateKind::Partials => {
            assert!(partials_certificate_valid(f.degree().unwrap(), k));
            partials_of_order(f, k).iter().all(|p| v.pull_back(p).is_zero())
        }
    }
}

#[derive(Debug, Clone)]
pub struct SecantIdeal {
    pub space: PolySpace,
    pub certificate: CertificateKind,
    pub samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SecantError {
    #[error("sampled kernel element of {variety} did not vanish after {attempts} attempts")]
    CertificationFailure { variety: String, attempts: usize },
}

const ATTEMPTS: usize = 3;
const MARGIN: usize = 8;

fn monomial_values(point: &[Rational], monos: &[Monomial]) -> Vec<(usize, Rational)> {
    let d = monos.first().map_or(0, |m| m.degree()) as usize;
    let powers: Vec<Vec<Rational>> = point
        .iter()
        .map(|x| {
            let mut p = vec![Rational::one()];
            for _ in 0..d {
                let next = p.last().unwrap() * x;
                p.push(next);
            }
            p
        })
        .collect();
    let mut row = Vec::new();
    for (j, m) in monos.iter().enumerate() {
        let mut acc = Rational::one();
        for (i, &e) in m.0.iter().enumerate() {
            if e > 0 {
                acc = &acc * &powers[i][e as usize];
                if acc.is_zero() {
                    break;
                }
            }
        }
        if !acc.is_zero() {
            row.push((j, acc));
        }
    }
    row
}

/// Degree-`degree` polynomials vanishing on the `k`th secant variety of `v`.
///
/// The kernel of an evaluation matrix is found mod p and lifted by rational
/// reconstruction; if every lift is certified, the family is complete
/// because the modular corank bounds the true dimension. Otherwise the
/// kernel is recomputed by exact elimination on sample rows.
pub fn secant_ideal(v: &VarietySampler, degree: u32, k: u32, seed: u64) -> Result<SecantIdeal, SecantError> {
    let n = v.ambient_dim();
    let monos = monomials_of_degree(n, degree);
    let sec = v.secant(k as usize);
    let kind = certificate_kind(v, degree, k);
    let (pivots, taken) = modular_echelon(&sec, &monos, seed);
    let done = |polys: Vec<MultiPoly>, samples: usize| SecantIdeal {
        space: PolySpace::from_spanning(v.ambient.clone(), degree, polys),
        certificate: kind,
        samples,
        seed,
    };
    if pivots.len() == monos.len() {
        return Ok(done(Vec::new(), taken));
    }
    let to_poly = |c: Vec<(usize, Rational)>| {
        MultiPoly::from_terms(v.ambient.clone(), c.into_iter().map(|(i, x)| (monos[i].clone(), x)))
    };
    let lifted: Option<Vec<MultiPoly>> = modular_kernel(&pivots, monos.len())
        .into_iter()
        .map(|row| {
            let c: Option<Vec<(usize, Rational)>> = row
                .into_iter()
                .enumerate()
                .filter(|(_, x)| *x != 0)
                .map(|(i, x)| modp::rational_reconstruct(x, PRIME).map(|r| (i, r)))
                .collect();
            c.map(to_poly)
        })
        .collect();
    if let Some(polys) = lifted {
        if polys.iter().all(|f| vanishes_on_secant(v, k, f, kind)) {
            return Ok(done(polys, taken));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = monos.len() + MARGIN;
    let mut red = RowReducer::new(monos.len());
    let mut taken = 0;
    for _ in 0..ATTEMPTS {
        while taken < samples && red.rank() < monos.len() {
            red.insert(monomial_values(&sec.integer_point(&mut rng), &monos));
            taken += 1;
        }
        let polys: Vec<MultiPoly> = red.kernel().into_iter().map(to_poly).collect();
        if polys.iter().all(|f| vanishes_on_secant(v, k, f, kind)) {
            return Ok(done(polys, taken));
        }
        samples *= 2;
    }
    Err(SecantError::CertificationFailure {
        variety: sec.name,
        attempts: ATTEMPTS,
    })
}

/// Echelon rows mod p of the evaluation matrix of `monos` at sample points
/// of `sec`, keyed by pivot column, and the number of samples drawn.
fn modular_echelon(sec: &VarietySampler, monos: &[Monomial], seed: u64) -> (Vec<(usize, Vec<u64>)>, usize) {
    let ncols = monos.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pivots: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut taken = 0;
    while taken < ncols + MARGIN && pivots.len() < ncols {
        taken += 1;
        let params: Vec<u64> = (0..sec.nparams())
            .map(|_| random_rational(&mut rng).mod_p(PRIME).expect("denominator below p"))
            .collect();
        let point: Vec<u64> = sec.coords.iter().map(|c| eval_mod_p(c, &params)).collect();
        let mut row: Vec<u64> = monos.iter().map(|m| monomial_mod_p(m, &point)).collect();
        for (col, prow) in &pivots {
            let f = row[*col];
            if f != 0 {
                for (x, y) in row.iter_mut().zip(prow).skip(*col) {
                    *x = (*x + PRIME - modp::mul(f, *y, PRIME)) % PRIME;
                }
            }
        }
        if let Some(col) = row.iter().position(|&x| x != 0) {
            let iv = modp::inv(row[col], PRIME);
            for x in row.iter_mut() {
                *x = modp::mul(*x, iv, PRIME);
            }
            pivots.push((col, row));
        }
    }
    (pivots, taken)
}

/// Kernel basis mod p of a matrix in echelon form, one vector per free
/// column with that entry 1.
fn modular_kernel(pivots: &[(usize, Vec<u64>)], ncols: usize) -> Vec<Vec<u64>> {
    let mut rows: Vec<(usize, Vec<u64>)> = pivots.to_vec();
    rows.sort_by_key(|r| r.0);
    for i in (0..rows.len()).rev() {
        let (col, prow) = rows[i].clone();
        for (_, row) in rows.iter_mut().take(i) {
            let f = row[col];
            if f != 0 {
                for (x, y) in row.iter_mut().zip(&prow).skip(col) {
                    *x = (*x + PRIME - modp::mul(f, *y, PRIME)) % PRIME;
                }
            }
        }
    }
    let mut is_pivot = vec![false; ncols];
    for (c, _) in &rows {
        is_pivot[*c] = true;
    }
    (0..ncols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![0u64; ncols];
            v[f] = 1;
            for (c, row) in &rows {
                v[*c] = (PRIME - row[f]) % PRIME;
            }
            v
        })
        .collect()
}

/// An upper bound for the dimension of the degree-`degree` slice of the
/// ideal of `S^k v`: the corank mod p of an evaluation matrix at sample
/// points. Reduction mod p and sampling can only lower the rank.
pub fn secant_dim_upper_bound(v: &VarietySampler, degree: u32, k: u32, seed: u64) -> usize {
    let monos = monomials_of_degree(v.ambient_dim(), degree);
    let (pivots, _) = modular_echelon(&v.secant(k as usize), &monos, seed);
    monos.len() - pivots.len()
}

fn monomial_mod_p(m: &Monomial, point: &[u64]) -> u64 {
    let mut acc = 1;
    for (i, &e) in m.0.iter().enumerate() {
        if e > 0 {
            acc = modp::mul(acc, modp::pow(point[i], e as u64, PRIME), PRIME);
        }
    }
    acc
}

fn eval_mod_p(p: &MultiPoly, params: &[u64]) -> u64 {
    let mut acc = 0;
    for (m, c) in p.terms() {
        let c = c.mod_p(PRIME).expect("denominator below p");
        acc = (acc + modp::mul(c, monomial_mod_p(m, params), PRIME)) % PRIME;
    }
    acc
}

pub fn monomial_count(n: usize, d: u32) -> usize {
    monomial_index(n, d).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::RatMatrix;

    #[test]
    fn twisted_cubic_slices() {
        let c = VarietySampler::rational_normal_curve(3);
        let q = secant_ideal(&c, 2, 0, 42).unwrap();
        assert_eq!(q.space.dim(), 3);
        assert_eq!(q.certificate, CertificateKind::Substitution);
        assert_eq!(secant_ideal(&c, 3, 1, 42).unwrap().space.dim(), 0);
        assert_eq!(secant_dim_upper_bound(&c, 2, 0, 7), 3);
        assert_eq!(secant_dim_upper_bound(&c, 3, 1, 7), 0);
    }

    #[test]
    fn quartic_secant_cubic() {
        let c = VarietySampler::rational_normal_curve(4);
        let s = secant_ideal(&c, 3, 1, 42).unwrap();
        assert_eq!(s.space.dim(), 1);
        for f in &s.space.basis {
            assert!(c.secant(1).pull_back(f).is_zero());
        }
    }

    #[test]
    fn partials_certificate_range() {
        assert!(partials_certificate_valid(3, 1));
        assert!(partials_certificate_valid(4, 2));
        assert!(partials_certificate_valid(5, 0));
        assert!(!partials_certificate_valid(4, 1));
        // The two certificates agree on the quartic's secant cubic.
        let c = VarietySampler::rational_normal_curve(4);
        let s = secant_ideal(&c, 3, 1, 1).unwrap();
        assert!(vanishes_on_secant(&c, 1, &s.space.basis[0], CertificateKind::Partials));
        let x = var_names("x", 5);
        let not_in = MultiPoly::var(x.clone(), 0).pow(3);
        assert!(!vanishes_on_secant(&c, 1, &not_in, CertificateKind::Partials));
        assert!(!vanishes_on_secant(&c, 1, &not_in, CertificateKind::Substitution));
    }

    #[test]
    fn orbit_of_top_vector_is_scaled_moment_curve() {
        // δ shifts e_0 → e_1 → e_2.
        let mut d = RatMatrix::zeros(3, 3);
        d[(1, 0)] = Rational::one();
        d[(2, 1)] = Rational::one();
        let exp = crate::flag::exp_t_delta(&d);
        let top = vec![Rational::one(), Rational::zero(), Rational::zero()];
        let v = VarietySampler::orbit("orbit", var_names("x", 3), &exp, &[top]);
        let q = secant_ideal(&v, 2, 0, 3).unwrap();
        assert_eq!(q.space.dim(), 1);
        // x1 x3 = x2² / 2 on (c, ct, ct²/2).
        let x = var_names("x", 3);
        let f = MultiPoly::var(x.clone(), 0)
            .mul(&MultiPoly::var(x.clone(), 2))
            .scale(&Rational::from_int(2))
            .sub(&MultiPoly::var(x.clone(), 1).pow(2));
        assert!(q.space.contains(&f));
    }

    #[test]
    fn tangent_developable_exact_and_modular_agree() {
        let c = VarietySampler::rational_normal_curve(4);
        let t = c.tangential_developable(1);
        let exact = secant_ideal(&t, 2, 0, 5).unwrap();
        assert_eq!(exact.space.dim(), secant_dim_upper_bound(&t, 2, 0, 6));
        assert!(exact.space.is_subspace_of(&secant_ideal(&c, 2, 0, 5).unwrap().space));
    }
}
