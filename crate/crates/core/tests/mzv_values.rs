mod common;

use common::{comp, int, zeta_nested};
use mes_core::mzv::{
    bernoulli_numbers, exact_table, mzv_eval, rational_to_f64, shuffle_regularize, zeta_sh_lin, zeta_sh_symbol,
    zeta_tilde_exact, MAX_NUMERIC_WEIGHT,
};
use mes_core::words::{harmonic, rat, shuffle_compositions, Composition, LinComb};
use mes_core::Error;
use proptest::prelude::*;

fn eval(x: &LinComb<Composition>) -> f64 {
    x.iter()
        .map(|(c, a)| {
            let v = if c.is_empty() { 1.0 } else { mzv_eval(c, 1e-12).unwrap().value.re };
            rational_to_f64(a) * v
        })
        .sum()
}

fn composition(max_weight: u32) -> impl Strategy<Value = Composition> {
    (1..=max_weight).prop_flat_map(|w| {
        let all = Composition::all_of_weight(w, 1);
        (0..all.len()).prop_map(move |i| all[i].clone())
    })
}

fn admissible(max_weight: u32) -> impl Strategy<Value = Composition> {
    (2..=max_weight).prop_flat_map(|w| {
        let all = Composition::admissible_of_weight(w);
        (0..all.len()).prop_map(move |i| all[i].clone())
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn regularized_shuffle_is_multiplicative(a in composition(6), b in composition(6)) {
        prop_assume!(a.weight() + b.weight() <= MAX_NUMERIC_WEIGHT);
        let lhs = eval(&zeta_sh_lin(&shuffle_compositions(&a, &b)));
        let rhs = eval(&zeta_sh_symbol(&a)) * eval(&zeta_sh_symbol(&b));
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + rhs.abs()), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn harmonic_is_multiplicative(a in admissible(6), b in admissible(6)) {
        let lhs = eval(&harmonic(&a, &b));
        let rhs = eval(&LinComb::basis(a)) * eval(&LinComb::basis(b));
        prop_assert!((lhs - rhs).abs() <= 1e-11 * (1.0 + rhs.abs()));
    }

    #[test]
    fn admissible_is_fixed(c in admissible(8)) {
        let p = shuffle_regularize(&c);
        prop_assert_eq!(p.degree(), Some(0));
        prop_assert_eq!(p.constant_term(), LinComb::basis(c));
    }
}

#[test]
fn matches_nested_sum_oracle() {
    for w in 2..=8 {
        for c in Composition::admissible_of_weight(w).into_iter().filter(|c| c.depth() <= 2) {
            let got = mzv_eval(&c, 1e-12).unwrap();
            let want = zeta_nested(&c);
            assert!((got.value.re - want).abs() <= 1e-10, "{c}: {} vs {want}", got.value.re);
            assert!(got.abs_error_bound <= 1e-12);
        }
    }
}

#[test]
fn classical_values() {
    let pi = std::f64::consts::PI;
    let z = |p: &[u32]| mzv_eval(&comp(p), 1e-12).unwrap().value.re;
    assert!((z(&[2]) - pi * pi / 6.0).abs() < 1e-13);
    assert!((z(&[6]) - pi.powi(6) / 945.0).abs() < 1e-13);
    assert!((z(&[1, 2]) - z(&[3])).abs() < 1e-13);
    assert!((z(&[1, 3]) - pi.powi(4) / 360.0).abs() < 1e-13);
    assert!((z(&[1, 1, 3]) - z(&[1, 4])).abs() < 1e-12);
    assert!((z(&[1, 1, 1, 2]) - z(&[5])).abs() < 1e-12);
    assert!((z(&[2, 2, 2]) - pi.powi(6) / 5040.0).abs() < 1e-12);
}

#[test]
fn regularization_examples() {
    assert_eq!(zeta_sh_symbol(&comp(&[2, 1])), LinComb::term(comp(&[1, 2]), int(-2)));
    assert!(zeta_sh_symbol(&comp(&[1])).is_zero());
    let p = shuffle_regularize(&comp(&[1]));
    assert_eq!(p.degree(), Some(1));
    assert_eq!(p.coeff(1), LinComb::basis(Composition::empty()));
    let p = shuffle_regularize(&comp(&[1, 1]));
    assert_eq!(p.coeff(2), LinComb::term(Composition::empty(), rat(1, 2)));
    assert_eq!(zeta_sh_symbol(&Composition::empty()), LinComb::basis(Composition::empty()));
    let v = eval(&zeta_sh_symbol(&comp(&[2, 1])));
    assert!((v + 2.0 * zeta_nested(&comp(&[1, 2]))).abs() < 2e-9);
}

#[test]
fn range_errors() {
    assert!(matches!(mzv_eval(&comp(&[2, 1]), 1e-12), Err(Error::Unsupported(_))));
    assert!(matches!(mzv_eval(&comp(&[13]), 1e-12), Err(Error::Unsupported(_))));
    assert!(matches!(mzv_eval(&comp(&[2]), 1e-30), Err(Error::Tolerance(_))));
}

#[test]
fn exact_constants() {
    let b = bernoulli_numbers(8);
    assert_eq!(b[1], rat(-1, 2));
    assert_eq!(b[2], rat(1, 6));
    assert_eq!(b[4], rat(-1, 30));
    assert_eq!(b[8], rat(-1, 30));
    assert_eq!(zeta_tilde_exact(&comp(&[2])), Some(rat(-1, 24)));
    assert_eq!(zeta_tilde_exact(&comp(&[4])), Some(rat(1, 1440)));
    assert_eq!(zeta_tilde_exact(&comp(&[6])), Some(rat(-1, 60480)));
    assert_eq!(zeta_tilde_exact(&comp(&[3])), None);
    let table = exact_table();
    assert_eq!(table.len(), 5);
    for (c, v) in table {
        let got = mes_core::mzv::zeta_tilde_eval(&c, 1e-12).unwrap().value;
        assert!((got.re - rational_to_f64(&v)).abs() < 1e-8 && got.im.abs() < 1e-12, "{c}");
    }
}
