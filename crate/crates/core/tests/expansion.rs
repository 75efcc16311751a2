use std::sync::Arc;

use arthur_coeff::coefficients::phi_for_level;
use arthur_coeff::gmfamily::SmoothGerm;
use arthur_coeff::orbits::enumerate_inducing_pairs;
use arthur_coeff::{BlockProfile, Calculator, LinearForm, PlaceSet, Precision, ZetaProvider};
use rug::{Float, Rational};

fn calculator(bits: u32) -> Calculator {
    Calculator::new(Arc::new(ZetaProvider::rationals(Precision::new(bits))), 4, 0)
}

#[test]
fn gl2_expansion_terms() {
    let e = calculator(192).expansion(1, 2, &PlaceSet::empty()).unwrap();
    assert_eq!(e.terms.len(), 2);
    let weights: Vec<String> = e.terms.iter().map(|t| t.result.weyl_weight.to_string()).collect();
    assert_eq!(weights, ["1/2", "1"]);
    assert!((e.terms[0].result.a_tilde_value.to_f64() - 1.0).abs() < 1e-15);
    assert!((e.terms[1].result.a_tilde_value.to_f64() + 0.690775648760).abs() < 1e-11);
}

#[test]
fn keys_follow_enumeration() {
    let calc = calculator(128);
    for (d, r) in [(2, 2), (1, 4), (3, 2), (2, 3)] {
        let e = calc.expansion(d, r, &"2".parse().unwrap()).unwrap();
        let keys: Vec<_> = e.terms.iter().map(|t| t.result.levi.clone()).collect();
        let classes: Vec<_> = enumerate_inducing_pairs(d, r).unwrap().into_iter().map(|c| c.levi).collect();
        assert_eq!(keys, classes);
        let vol = calc.provider().volume_minimal_levi(d, r).unwrap();
        for t in &e.terms {
            let expected = Float::with_val(calc.prec(), &vol * &t.result.a_value);
            assert_eq!(t.result.a_tilde_value, expected);
        }
    }
}

#[test]
fn phi_is_normalized() {
    let provider = Arc::new(ZetaProvider::rationals(Precision::new(128)));
    let places: PlaceSet = "3,5".parse().unwrap();
    let minimal = phi_for_level(provider.clone(), &BlockProfile::minimal(2, 3), &places).unwrap();
    let dir = LinearForm::from_integers(&[1, 1, 0, 0, -1, -1]);
    let jet = minimal.jet_along(&dir, 3).unwrap();
    assert_eq!(jet.constant_term().unwrap(), 1);
    assert!(jet.coeffs()[1..].iter().all(|c| c.is_zero()));
    for comp in [vec![3], vec![2, 1]] {
        let phi = phi_for_level(provider.clone(), &BlockProfile::new(2, comp).unwrap(), &places).unwrap();
        let at0 = phi.jet_along(&dir, 0).unwrap().constant_term().unwrap();
        assert!(Float::with_val(128, at0 - 1u32).abs() < 1e-35);
    }
}

#[test]
fn gl2_phi_is_normalized_ztilde() {
    // φ(s(1/2, -1/2)·2) = Z̃_1(1 + s) / Z̃_1(1) with Z̃_1(1) = 1
    let provider = Arc::new(ZetaProvider::rationals(Precision::new(128)));
    let phi = phi_for_level(provider.clone(), &BlockProfile::group(1, 2), &PlaceSet::empty()).unwrap();
    let jet = phi.jet_along(&LinearForm::from_integers(&[1, -1]), 2).unwrap();
    let zt = provider.ztilde_jet(1, &Rational::from(1), 2).unwrap();
    for k in 0..3 {
        assert!(Float::with_val(128, jet.coeff(k).unwrap() - zt.coeff(k).unwrap()).abs() < 1e-35);
    }
}
