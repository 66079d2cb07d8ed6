use flagsym::flag::{decompose_azp, flag_prolong, predicted_dims};
use flagsym::symbol::{build_model_space, parse_symbol, symbols_up_to_dim, FlagSymbol, SymbolComponent};

fn compare(sym: &FlagSymbol) -> Result<(), String> {
    let x = build_model_space(sym);
    let got = decompose_azp(&x).dims();
    let want = predicted_dims(sym);
    let fp = flag_prolong(&x).total_dim();
    if (got.l_of_x, got.z, got.p, got.u_f, fp) != (want.l_of_x, want.z, want.p, want.u_f, want.u_f) {
        return Err(format!("{sym}: computed {got:?} (flag prolongation {fp}), predicted {want:?}"));
    }
    Ok(())
}

#[test]
fn single_two_row_pieces() {
    for s in 0..=4 {
        for l in 0..=2 * s {
            let sym = FlagSymbol::new(vec![SymbolComponent::two_row(s, l).unwrap()]).unwrap();
            compare(&sym).unwrap();
        }
    }
}

#[test]
fn every_symbol_up_to_dimension_10() {
    let failures: Vec<String> = symbols_up_to_dim(10, 4).iter().filter_map(|s| compare(s).err()).collect();
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn d23_by_hand() {
    // One E-row module of dimension 2*3 - 4*1 + 1 = 3, plus z: l(X) = 4, p = 3,
    // and u^F adds sl2 and the grading element.
    let p = predicted_dims(&parse_symbol("D(2,3)").unwrap());
    assert_eq!((p.l_of_x, p.z, p.p, p.u_f), (4, 1, 3, 8));
    let fp = flag_prolong(&build_model_space(&parse_symbol("D(2,3)").unwrap()));
    let dims: Vec<usize> = fp.pieces.iter().map(|(_, u)| u.dim()).filter(|&d| d > 0).collect();
    assert_eq!(dims, vec![1, 4, 2, 1]);
}
