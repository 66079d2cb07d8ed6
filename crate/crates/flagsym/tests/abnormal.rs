use flagsym::abnormal::curve::{extract_flag_symbol, flat_curve, random_symplectic, ExtractError, JacobiCurve};
use flagsym::abnormal::goh::jacobi_forms_vanish;
use flagsym::abnormal::{characteristic_direction, goh_matrix, locus_checks, Direction};
use flagsym::exact::{RatMatrix, Rational};
use flagsym::lie::flat_model;
use flagsym::symbol::{build_model_space, parse_symbol};
use proptest::prelude::*;

const MODELS: [&str; 6] = ["D(1,2)", "D(2,3)", "D(3,4)", "R(5/2)", "R(7/2)", "D(2,3)+R(5/2)"];

#[test]
fn goh_matrices_are_consistent() {
    for s in MODELS {
        let fm = flat_model(&parse_symbol(s).unwrap());
        let g = goh_matrix(&fm);
        assert!(g.is_skew(), "{s}");
        assert!(jacobi_forms_vanish(&fm), "{s}");
        for c in locus_checks(&fm) {
            assert!(c.holds, "{s}: {}", c.name);
        }
    }
}

fn check_kernel(spec: &str, raw: &[i64]) {
    let fm = flat_model(&parse_symbol(spec).unwrap());
    let n = fm.algebra.dim();
    let mut lambda: Vec<Rational> = (0..n).map(|i| Rational::from_int(raw[i % raw.len()])).collect();
    for &i in &fm.distribution {
        lambda[i] = Rational::zero();
    }
    let g = goh_matrix(&fm).eval(&lambda);
    if let Direction::Defined { coeffs, vector } = characteristic_direction(&fm, &lambda).unwrap() {
        assert!(g.mul_vec(&coeffs).iter().all(|v| v.is_zero()), "{spec} at {lambda:?}");
        for (i, v) in vector.iter().enumerate() {
            assert!(v.is_zero() || fm.distribution.contains(&i));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn directions_lie_in_the_goh_kernel(raw in proptest::collection::vec(-4i64..=4, 16), which in 0usize..5) {
        check_kernel(MODELS[which], &raw);
    }
}

#[test]
fn directions_off_the_annihilator_are_rejected() {
    let fm = flat_model(&parse_symbol("R(5/2)").unwrap());
    let mut lambda = vec![Rational::zero(); fm.algebra.dim()];
    lambda[fm.distribution[0]] = Rational::one();
    assert!(characteristic_direction(&fm, &lambda).is_err());
}

fn substitute_t_squared(j: &JacobiCurve) -> JacobiCurve {
    let zero = RatMatrix::zeros(j.columns[0].rows(), j.columns[0].cols());
    let mut columns = vec![zero; 2 * j.columns.len() - 1];
    for (k, c) in j.columns.iter().enumerate() {
        columns[2 * k] = c.clone();
    }
    JacobiCurve { columns, ..j.clone() }
}

#[test]
fn round_trip_survives_conjugation_and_reparametrization() {
    for (seed, s) in ["D(2,3)", "D(2,4)", "R(7/2)", "D(1,2)+R(3/2)"].iter().enumerate() {
        let sym = parse_symbol(s).unwrap();
        let j = flat_curve(&build_model_space(&sym)).jacobi_curve();
        let g = random_symplectic(&j.sigma, seed as u64, 3);
        let moved = j.reparametrize(&Rational::new(-1, 2)).conjugate(&g);
        assert_eq!(extract_flag_symbol(&moved).unwrap(), sym, "{s}");
    }
}

#[test]
fn t_squared_makes_zero_singular() {
    let j = flat_curve(&build_model_space(&parse_symbol("D(2,3)").unwrap())).jacobi_curve();
    match extract_flag_symbol(&substitute_t_squared(&j)) {
        Err(ExtractError::NonRegularPoint { at_zero, generic }) => assert!(at_zero.len() != generic.len() || at_zero != generic),
        other => panic!("expected a singular point, got {other:?}"),
    }
}
