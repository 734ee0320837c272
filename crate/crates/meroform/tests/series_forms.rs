//! q-expansions against classical tables, and algebraic laws of the series ring.

use meroform::series::{
    borcherds_obstruction, canonical_form, cusp_basis, cusp_dim, hecke_on_series, weakly_holomorphic, weight_triple,
    CanonicalForm, FormExpr, FormPoly, Monomial, QSeries,
};
use proptest::prelude::*;
use rug::{Integer, Rational};

// Ramanujan τ(1..12) from the classical table
const TAU: [i64; 12] = [1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920, 534612, -370944];

fn tau(n: usize) -> Integer {
    canonical_form(CanonicalForm::Delta, 40).coeff(n as i64).numer().clone()
}

#[test]
fn delta_matches_ramanujan_table() {
    for (i, t) in TAU.iter().enumerate() {
        assert_eq!(tau(i + 1), *t, "τ({})", i + 1);
    }
}

#[test]
fn j_expansion() {
    let j = canonical_form(CanonicalForm::J, 4);
    assert_eq!(j.valuation(), -1);
    let want = [1i64, 744, 196884, 21493760];
    for (e, w) in (-1..3).zip(want) {
        assert_eq!(j.coeff(e), w);
    }
    assert_eq!(j.to_string(), "q^-1 + 744 + 196884*q + 21493760*q^2 + O(q^3)");
}

#[test]
fn cube_minus_square_is_delta() {
    let e4 = canonical_form(CanonicalForm::E4, 30);
    let e6 = canonical_form(CanonicalForm::E6, 30);
    let lhs = &e4.pow(3).unwrap() - &(&e6 * &e6);
    let delta = canonical_form(CanonicalForm::Delta, 30).scale(&Rational::from(1728));
    assert_eq!(lhs.truncate(30), delta.truncate(30));
}

#[test]
fn delta_is_a_hecke_eigenform() {
    let d = canonical_form(CanonicalForm::Delta, 60);
    for (m, t) in [(2u64, -24i64), (3, 252), (5, 4830)] {
        let h = hecke_on_series(&d, 12, m).unwrap();
        for e in 1..h.trunc_order() {
            assert_eq!(h.coeff(e), d.coeff(e) * Rational::from(t), "T_{m}, q^{e}");
        }
    }
}

#[test]
fn dimensions() {
    let dims: Vec<usize> = (2..=12).map(|k| cusp_dim(2 * k)).collect();
    assert_eq!(dims, vec![0, 0, 0, 0, 1, 0, 1, 1, 1, 1, 2]);
    assert!(weight_triple(2).is_none());
    let b = cusp_basis(24, 5);
    assert_eq!(b.len(), 2);
    // echelon: q + O(q³), q² + O(q³)
    assert_eq!((b[0].coeff(1), b[0].coeff(2)), (Rational::from(1), Rational::new()));
    assert_eq!((b[1].coeff(1), b[1].coeff(2)), (Rational::new(), Rational::from(1)));
}

#[test]
fn weakly_holomorphic_principal_parts() {
    // E4²E6/Δ² = q⁻² + 24q⁻¹ + O(1)
    let g = weakly_holomorphic(-10, &[24, 1], 3).unwrap();
    assert_eq!((g.coeff(-2), g.coeff(-1)), (Rational::from(1), Rational::from(24)));
    let e4 = canonical_form(CanonicalForm::E4, 12);
    let e6 = canonical_form(CanonicalForm::E6, 12);
    let d = canonical_form(CanonicalForm::Delta, 12);
    let want = (&(&e4 * &e4) * &e6).div(&d.pow(2).unwrap()).unwrap();
    for e in -2..3 {
        assert_eq!(g.coeff(e), want.coeff(e));
    }
    // E10/Δ = q⁻¹ − 240 + …
    let g = weakly_holomorphic(-2, &[1], 2).unwrap();
    assert_eq!((g.coeff(-1), g.coeff(0)), (Rational::from(1), Rational::from(-240)));
}

#[test]
fn obstruction_cases() {
    assert!(borcherds_obstruction(6, &[24, 1]).passes());
    assert!(!borcherds_obstruction(6, &[1]).passes());
    assert!(!borcherds_obstruction(6, &[1, 24]).passes());
    for k in [2, 3, 4, 5, 7] {
        assert!(borcherds_obstruction(k, &[1]).passes());
    }
    assert!(weakly_holomorphic(-10, &[1], 3).is_err());
}

#[test]
fn rational_expression_expansion() {
    // −2⁸Δ/E4² = −256q + 129024q² + …
    let e = FormExpr::new(
        FormPoly::rational(&[(Rational::from(-256), Monomial::new(0, 0, 1))]),
        vec![(FormPoly::monomial(Monomial::new(1, 0, 0)), 2)],
    );
    let s = e.expand_rational(4).unwrap();
    assert_eq!(s.coeff(1), -256);
    assert_eq!(s.coeff(2), 129024);
}

fn series_strategy() -> impl Strategy<Value = QSeries> {
    (-2i64..3, prop::collection::vec(-50i64..50, 1..8)).prop_map(|(start, mut c)| {
        if c[0] == 0 {
            c[0] = 1;
        }
        let n = c.len() as i64;
        QSeries::from_integers(start, &c, start + n)
    })
}

proptest! {
    #[test]
    fn tau_is_multiplicative(m in 1usize..12, n in 1usize..12) {
        if gcd(m, n) == 1 && m * n <= 36 {
            prop_assert_eq!(tau(m * n), tau(m) * tau(n));
        }
    }

    #[test]
    fn inverse_is_two_sided(a in series_strategy()) {
        let inv = a.inverse().unwrap();
        let one = &a * &inv;
        prop_assert_eq!(one.valuation(), 0);
        for e in 0..one.trunc_order() {
            prop_assert_eq!(one.coeff(e), if e == 0 { 1 } else { 0 });
        }
    }

    #[test]
    fn multiplication_is_associative(a in series_strategy(), b in series_strategy(), c in series_strategy()) {
        let l = &(&a * &b) * &c;
        let r = &a * &(&b * &c);
        prop_assert_eq!(l.trunc_order(), r.trunc_order());
        for e in l.valuation().min(r.valuation())..l.trunc_order() {
            prop_assert_eq!(l.coeff(e), r.coeff(e));
        }
    }

    #[test]
    fn json_round_trip(a in series_strategy()) {
        let back = QSeries::from_json(&a.to_json()).unwrap();
        prop_assert_eq!(back.to_string(), a.to_string());
    }

    #[test]
    fn hecke_operators_commute(m in 2u64..5, n in 2u64..5) {
        let f = cusp_basis(24, 80).remove(0);
        let mn = hecke_on_series(&hecke_on_series(&f, 24, n).unwrap(), 24, m).unwrap();
        let nm = hecke_on_series(&hecke_on_series(&f, 24, m).unwrap(), 24, n).unwrap();
        let t = mn.trunc_order().min(nm.trunc_order());
        for e in 1..t {
            prop_assert_eq!(mn.coeff(e), nm.coeff(e));
        }
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
