//! Values frozen from the independent rational reference in
//! `tools/oracle.py`.

use dirbandit::index::{break_even_observation, break_even_value, IndexOptions};
use dirbandit::{value, BanditState, DiscountSeq, DiscreteMeasure, Exact, Scalar, SolverOptions};

fn q(s: &str) -> Exact {
    Exact::parse_number(s).unwrap()
}

fn exact_arm(pairs: &[(&str, &str)]) -> DiscreteMeasure<Exact> {
    DiscreteMeasure::new(pairs.iter().map(|(x, w)| (q(x), q(w)))).unwrap()
}

fn exact_discount(values: &[&str]) -> DiscountSeq<Exact> {
    DiscountSeq::new(values.iter().map(|v| q(v)).collect()).unwrap()
}

#[test]
fn coin_against_half() {
    let state = BanditState::new(
        exact_arm(&[("0", "1"), ("1", "1")]),
        exact_arm(&[("1/2", "1")]),
        exact_discount(&["1", "1"]),
    );
    let r = value(&state, &SolverOptions::default()).unwrap();
    assert_eq!(r.w, q("13/12"));
    assert_eq!(r.w1, q("13/12"));
    assert_eq!(r.w2, q("1"));
}

#[test]
fn three_atom_arms_geometric() {
    let state = BanditState::new(
        exact_arm(&[("0", "1/2"), ("1/2", "1"), ("1", "1/2")]),
        exact_arm(&[("1/4", "1"), ("5/8", "1"), ("3/4", "2")]),
        exact_discount(&["1", "3/4", "9/16", "27/64"]),
    );
    let r = value(&state, &SolverOptions::default()).unwrap();
    assert_eq!(r.w, q("26675/16384"));
    assert_eq!(r.w1, q("513179/327680"));
    assert_eq!(r.w2, q("26675/16384"));
    let float = value(&state.to_f64(), &SolverOptions::default()).unwrap();
    assert!((float.w - 26675.0 / 16384.0).abs() < 1e-12);
}

#[test]
fn three_atom_arms_eight_stages() {
    let state = BanditState::new(
        exact_arm(&[("0", "1"), ("1/2", "1"), ("1", "1")]),
        exact_arm(&[("1/8", "1"), ("1/2", "2"), ("7/8", "1")]),
        DiscountSeq::uniform(8).unwrap(),
    );
    let r = value(&state, &SolverOptions::default()).unwrap();
    assert_eq!(r.w, q("760733/172800"));
}

#[test]
fn break_even_values() {
    let opts = IndexOptions::default();
    let coin = DiscreteMeasure::new([(0.0, 1.0), (1.0, 1.0)]).unwrap();
    let a2 = DiscountSeq::uniform(2).unwrap();
    let lam = break_even_value(&coin, &a2, &opts).unwrap();
    assert!((lam.value - 5.0 / 9.0).abs() <= 1e-9);
    let b = break_even_observation(&coin, &a2, &opts).unwrap();
    assert!((b.value - 2.0 / 3.0).abs() <= 1e-8);

    let lean = DiscreteMeasure::new([(0.0, 2.0), (1.0, 1.0)]).unwrap();
    let lam = break_even_value(&lean, &DiscountSeq::uniform(3).unwrap(), &opts).unwrap();
    assert!((lam.value - 0.4).abs() <= 1e-9);

    let skew = DiscreteMeasure::new([(0.0, 1.0), (0.5, 1.0), (2.0, 1.0)]).unwrap();
    let geo = DiscountSeq::truncated_geometric(0.5, 3).unwrap();
    let lam = break_even_value(&skew, &geo, &opts).unwrap();
    assert!((lam.value - 107.0 / 120.0).abs() <= 1e-9);
}
