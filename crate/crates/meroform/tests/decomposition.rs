//! Decompositions checked against the defining lattice sum, hand-derived
//! closed forms and the residue pairing.

use meroform::decomp::{
    compare_series, decompose, decompose_class, format_combination, hecke_combination, hecke_on_f,
    pairing_with_weakly_holomorphic, Convention, DecompOptions, Normalization,
};
use meroform::fkd::{f_class_direct, f_direct, FkdSpec};
use meroform::numeric::complex::BigComplex;
use meroform::numeric::eval::modular_values;
use meroform::series::{FormExpr, FormPoly, Monomial};
use meroform::quadforms::Bqf;
use rug::{Integer, Rational};

fn z0(bits: u32) -> BigComplex {
    BigComplex::from_f64(bits, 0.1, 1.2)
}

fn rat_expr(terms: &[(Rational, Monomial)], den: &[(Monomial, u32)]) -> FormExpr {
    FormExpr::new(FormPoly::rational(terms), den.iter().map(|(m, e)| (FormPoly::monomial(*m), *e)).collect())
}

// direct-sum accuracy reachable in reasonable time: the a-tail decays like a^{1−k}
fn direct_tol(k: u32) -> f64 {
    match k {
        2 => 1e-4,
        3 => 1e-7,
        4 => 1e-10,
        5 => 1e-13,
        _ => 1e-16,
    }
}

#[test]
fn algebraic_plus_cusp_reproduces_the_lattice_sum() {
    let bits = 256;
    let z = z0(bits);
    for k in 2..=7 {
        let dec = decompose(k, -3, &DecompOptions::default()).unwrap();
        assert_eq!(dec.normalization, Normalization::Printed);
        assert!(dec.guards.iter().all(|g| g.ok), "k={k} guards");
        let ours = dec.eval(&z, bits).unwrap();
        let tol = direct_tol(k);
        let direct = f_direct(&FkdSpec::new(k, -3).unwrap(), &z, tol).unwrap().value;
        let err = (&ours - &direct).abs_f64();
        assert!(err < 2.0 * tol, "k={k}: |difference| = {err:e}");
    }
}

#[test]
fn weight_eight_closed_form() {
    // derived independently: (2¹⁶·3Δ² − 2⁶E4³Δ)/(3E4⁴)
    let dec = decompose(4, -3, &DecompOptions::default()).unwrap();
    let want = rat_expr(
        &[(Rational::from(65536), Monomial::new(0, 0, 2)), (Rational::from((-64, 3)), Monomial::new(3, 0, 1))],
        &[(Monomial::new(1, 0, 0), 4)],
    );
    assert_eq!(compare_series(&dec.algebraic.expr(), &want, 10).unwrap(), None);
}

#[test]
fn weight_four_closed_form_and_sign() {
    // f_{2,−3} = −2⁸Δ/E4², and the series begins −256q
    let dec = decompose(2, -3, &DecompOptions::default()).unwrap();
    let want = rat_expr(&[(Rational::from(-256), Monomial::new(0, 0, 1))], &[(Monomial::new(1, 0, 0), 2)]);
    assert_eq!(compare_series(&dec.algebraic.expr(), &want, 10).unwrap(), None);
    // odd k: the two sign conventions differ by −1
    let opts = DecompOptions { convention: Convention::Printed, ..Default::default() };
    let a = decompose(3, -3, &DecompOptions::default()).unwrap().algebraic.expr();
    let b = decompose(3, -3, &opts).unwrap().algebraic.expr();
    let neg = FormExpr::new(b.numerator.scale(&Rational::from(-1)), b.denominator.clone());
    assert_eq!(compare_series(&a, &neg, 8).unwrap(), None);
}

#[test]
fn weight_twelve_cusp_constant() {
    let dec = decompose(6, -3, &DecompOptions::default()).unwrap();
    assert_eq!(dec.cusp_dim, 1);
    assert!(!dec.remainder_zero);
    let c = dec.remainder[0].value.to_f64();
    assert!((c + 0.286_311_721_167_287).abs() < 1e-15, "C = {c}");
    assert!(dec.remainder[0].err_log10 < -20.0);
    assert!(dec.guards.iter().all(|g| g.ok));
}

#[test]
fn other_discriminants() {
    let bits = 256;
    let z = BigComplex::from_f64(bits, 0.2, 1.1);
    for (k, d) in [(3, -4), (5, -4), (6, -4), (4, -7), (2, -12), (4, -12), (6, -12)] {
        let dec = decompose(k, d, &DecompOptions::default()).unwrap();
        assert!(dec.guards.iter().all(|g| g.ok), "k={k} D={d}");
        let tol = direct_tol(k);
        let direct = f_direct(&FkdSpec::new(k, d).unwrap(), &z, tol).unwrap().value;
        let err = (&dec.eval(&z, bits).unwrap() - &direct).abs_f64();
        assert!(err < 2.0 * tol, "k={k} D={d}: {err:e}");
    }
    assert_eq!(decompose(4, -12, &DecompOptions::default()).unwrap().normalization, Normalization::Canonical);
}

#[test]
fn class_decomposition_for_a_nontrivial_class() {
    let bits = 256;
    let form = Bqf::new(2, 1, 3);
    let cd = decompose_class(3, &form, 200, Convention::Lattice).unwrap();
    // Q(j_A, √23): three powers of j_A times {1, √23}
    assert_eq!(cd.field.dim(), 6);
    let z = BigComplex::from_f64(bits, 0.05, 1.3);
    let v = modular_values(&z, bits).unwrap();
    let ours = meroform::numeric::eval::eval_expr(&cd.algebraic.expr(), &v);
    let direct = f_class_direct(3, &form, &z, 1e-7).unwrap().value;
    assert!((&ours - &direct).abs_f64() < 2e-7);
}

#[test]
fn hecke_image_matches_the_operator_on_values() {
    // f|T₂(z) = 2¹¹f(2z) + ½(f(z/2) + f((z+1)/2)) in weight 12
    let comb = hecke_on_f(6, -3, 2).unwrap();
    assert_eq!(format_combination(6, &comb), "2048*f_{6,-12} - 32*f_{6,-3}");
    let bits = 192;
    let tol = 1e-14;
    let spec = FkdSpec::new(6, -3).unwrap();
    let f = |x: f64, y: f64| f_direct(&spec, &BigComplex::from_f64(bits, x, y), tol).unwrap().value;
    let (x, y) = (0.13, 2.9);
    // doubled to stay in integers
    let lhs = &f(2.0 * x, 2.0 * y).scale_i64(4096) + &(&f(x / 2.0, y / 2.0) + &f((x + 1.0) / 2.0, y / 2.0));
    let z = BigComplex::from_f64(bits, x, y);
    let mut rhs = BigComplex::zero(bits);
    for (d, c) in &comb {
        let v = f_direct(&FkdSpec::new(6, *d).unwrap(), &z, tol).unwrap().value;
        rhs += &v.scale_i64(2 * c.to_i64().unwrap());
    }
    assert!((&lhs - &rhs).abs_f64() < 1e-12, "2·f|T₂ mismatch");
}

#[test]
fn residue_pairing_gives_the_first_coefficient() {
    // g = E4E6/Δ = q⁻¹ + O(1); const(f_{2,−3}·g) = c₁ = −256
    let g = FormPoly::monomial(Monomial::new(1, 1, 0));
    let v = pairing_with_weakly_holomorphic(2, -3, &g, 1, 256).unwrap();
    assert!((v.re.to_f64() + 256.0).abs() < 1e-40);
    assert!(v.im.to_f64().abs() < 1e-40);
}

#[test]
fn hecke_combination_with_vanishing_obstruction() {
    let h = hecke_combination(6, -3, &[24, 1], &DecompOptions::default()).unwrap();
    assert!(h.obstruction.passes());
    assert_eq!(format_combination(6, &h.constituents), "2048*f_{6,-12} - 8*f_{6,-3}");
    let cusp = h.cusp_algebraic.as_ref().unwrap();
    assert_eq!(cusp[0].to_rational(), Some(Rational::from(8192)));
    assert!(h.decomposition.remainder_zero);
    assert!(h.decomposition.guards.iter().all(|g| g.ok));
    // the residue pairing and the Fourier formula agree on the cusp coefficient
    let res = &h.residue_cusp.as_ref().unwrap()[0];
    assert!((res.re.to_f64() - 8192.0).abs() < 1e-20);
    assert!((h.fourier_cusp[0].value.to_f64() - 8192.0).abs() < 1e-20);

    let json = h.to_json();
    for key in ["k", "D", "algebraic", "coeffs_H", "cusp_remainder", "remainder_zero"] {
        assert!(json.get(key).is_some(), "missing {key}");
    }
    assert_eq!(json["remainder_zero"], true);
}

#[test]
fn hecke_combination_with_obstruction() {
    let h = hecke_combination(6, -3, &[1], &DecompOptions::default()).unwrap();
    assert!(!h.obstruction.passes());
    assert!(!h.decomposition.remainder_zero);
    assert!(h.residue_cusp.is_none());
    // λ = (1) is f itself
    let c = h.decomposition.remainder[0].value.to_f64();
    assert!((c + 0.286_311_721_167_287).abs() < 1e-15);
}

#[test]
fn hecke_constituents_are_linear_in_lambda() {
    let a = hecke_combination(2, -3, &[1, 0, 1], &DecompOptions::default()).unwrap().constituents;
    let b = hecke_combination(2, -3, &[2, 0, 2], &DecompOptions::default()).unwrap().constituents;
    for (d, c) in &a {
        assert_eq!(b[d], Integer::from(c * 2));
    }
}
