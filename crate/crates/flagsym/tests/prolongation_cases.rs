use flagsym::symbol::{build_model_space, parse_symbol};
use flagsym::tanaka::{killing_signature, prolong_symbol};

fn dims(spec: &str) -> (Vec<usize>, usize) {
    let x = build_model_space(&parse_symbol(spec).unwrap());
    let tp = prolong_symbol(&x, 6).unwrap();
    let levels = (1..tp.levels.len()).map(|k| tp.dim_at(k)).collect();
    (levels, tp.total_dim())
}

#[test]
fn rank_two_rigidity() {
    for (spec, n) in [("R(5/2)", 6), ("R(7/2)", 7), ("R(9/2)", 8)] {
        let (levels, total) = dims(spec);
        assert!(levels.is_empty(), "{spec}: {levels:?}");
        assert_eq!(total, 2 * n - 1, "{spec}");
    }
}

#[test]
fn so43_from_d12() {
    let x = build_model_space(&parse_symbol("D(1,2)").unwrap());
    let tp = prolong_symbol(&x, 6).unwrap();
    assert_eq!(tp.total_dim(), 21);
    let g = tp.assemble().unwrap();
    assert_eq!(killing_signature(&g).rank, 21);
}

#[test]
fn rank_three_towers() {
    assert_eq!(dims("D(2,4)"), (vec![], 18));
    assert_eq!(dims("D(2,3)"), (vec![], 17));
    assert_eq!(dims("D(3,4)"), (vec![1], 23));
}
