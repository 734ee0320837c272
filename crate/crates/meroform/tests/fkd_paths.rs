//! Direct summation against closed forms, the Fourier formula against the
//! discrete Fourier transform of direct sums, and class sums against the full sum.

use meroform::fkd::{
    dft_coefficients, f_class_direct, f_direct, f_direct_truncated, pole_distance, FkdSpec, FourierEngine,
};
use meroform::numeric::complex::{bits_for_digits, BigComplex};
use meroform::numeric::eval::{apply_mat, automorphy, modular_values};
use meroform::quadforms::{class_representatives, Bqf};
use meroform::Error;

#[test]
fn weight_four_value_at_2i() {
    // f_{2,−3} = −2⁸Δ/E4²
    let z = BigComplex::from_f64(128, 0.0, 2.0);
    let v = f_direct(&FkdSpec::new(2, -3).unwrap(), &z, 1e-5).unwrap();
    let m = modular_values(&z, 128).unwrap();
    let expect = (&m.delta / &m.e4.square()).scale_i64(-256);
    assert!((&v.value - &expect).abs_f64() < 1e-5, "{} vs {}", v.value.to_string_digits(20), expect.to_string_digits(20));
    assert!(v.tail_bound < 1e-5);
}

#[test]
fn modular_transformation() {
    let spec = FkdSpec::new(4, -4).unwrap();
    let z = BigComplex::from_f64(128, 0.31, 1.13);
    let g = [[2, 1], [1, 1]];
    let gz = apply_mat(&g, &z);
    let tol = 1e-8;
    let a = f_direct(&spec, &z, tol).unwrap().value;
    let b = f_direct(&spec, &gz, tol).unwrap().value;
    let rhs = &automorphy(&g, &z).powi(-8) * &b;
    assert!((&a - &rhs).abs_f64() < 1e-7 * (1.0 + a.abs_f64()));
}

#[test]
fn fourier_formula_matches_transform_of_direct_sum() {
    // both sides summed over exactly the same forms (a ≤ 48)
    let a_max = 48;
    let digits = 40;
    let r_max = 6;
    let bits = bits_for_digits(digits + 6 * r_max as u32 + 20);
    for (k, d) in [(2u32, -3i64), (3, -4), (5, -7)] {
        let spec = FkdSpec::new(k, d).unwrap();
        let dft = dft_coefficients(|z| f_direct_truncated(&spec, z, a_max, bits), 2.0, 32, r_max, bits).unwrap();
        let eng = FourierEngine::new(spec.clone(), digits);
        let rs: Vec<u64> = (1..=r_max as u64).collect();
        let four = eng.truncated(&rs, a_max);
        for (r, (x, y)) in dft.iter().zip(&four).enumerate() {
            let diff = (&x.re - y.clone()).to_f64().abs();
            assert!(diff < 1e-30 * (1.0 + y.to_f64().abs()), "k={k} D={d} r={} diff={diff:e}", r + 1);
            assert!(x.im.to_f64().abs() < 1e-30 * (1.0 + y.to_f64().abs()));
        }
    }
}

#[test]
fn first_coefficients_weight_four() {
    let eng = FourierEngine::new(FkdSpec::new(2, -3).unwrap(), 30);
    let c = eng.best_effort(&[1, 2], 1e-3, Some(1 << 17));
    let err = 10f64.powf(c[1].err_log10);
    assert!((c[0].value.to_f64() + 256.0).abs() <= 10f64.powf(c[0].err_log10));
    assert!((c[1].value.to_f64() - 129024.0).abs() <= err);
}

#[test]
fn class_sums_add_up() {
    let z = BigComplex::from_f64(160, 0.17, 1.4);
    let bits = 160;
    let total = f_direct_truncated(&FkdSpec::new(3, -23).unwrap(), &z, 300, bits).unwrap();
    let mut sum = BigComplex::zero(bits);
    for f in class_representatives(-23, true).unwrap() {
        sum += &f_direct_truncated(&FkdSpec::with_class(3, &f).unwrap(), &z, 300, bits).unwrap();
    }
    assert!((&total - &sum).abs_f64() < 1e-35);
    let v = f_class_direct(3, &Bqf::new(2, 1, 3), &z, 1e-8).unwrap();
    assert!(v.tail_bound < 1e-8);
}

#[test]
fn poles_are_rejected() {
    let rho = BigComplex::from_f64(128, -0.5, 3f64.sqrt() / 2.0 + 1e-5);
    let spec = FkdSpec::new(2, -3).unwrap();
    assert!(matches!(f_direct(&spec, &rho, 1e-5), Err(Error::PoleProximity { .. })));
    // i√3 is a pole of f_{k,−12}; the imprimitive form [2,2,2] also puts one at ρ
    let z = BigComplex::from_f64(128, 0.0, 3f64.sqrt());
    assert!(pole_distance(-12, &z).unwrap() < 1e-10);
    assert!(pole_distance(-12, &BigComplex::from_f64(128, 0.5, 3f64.sqrt() / 2.0)).unwrap() < 1e-10);
    assert!(pole_distance(-3, &z).unwrap() > 0.1);
}
