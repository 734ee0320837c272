//! Class polynomials H_D(X) by CM evaluation with certified rounding, and
//! the pole-clearing forms Φ_D, Φ_A built from them.

use std::sync::Arc;

use rug::{Float, Integer, Rational};

use super::complex::BigComplex;
use super::eval::modular_values;
use super::hfield::{HField, HNumber};
use crate::error::{Error, Result};
use crate::quadforms::{class_representatives, Bqf};
use crate::series::{FormPoly, Gen, Monomial};

const MAX_BITS: u32 = 1 << 16;

pub fn j_of_form(f: &Bqf, bits: u32) -> Result<BigComplex> {
    Ok(modular_values(&f.root(bits), bits)?.j())
}

fn product_poly(roots: &[BigComplex], bits: u32) -> Vec<BigComplex> {
    let mut p = vec![BigComplex::one(bits)];
    for r in roots {
        let mut next = vec![BigComplex::zero(bits); p.len() + 1];
        for (i, c) in p.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= &(c * r);
        }
        p = next;
    }
    p
}

fn nearest(x: &Float) -> Integer {
    Float::with_val(x.prec(), x.round_ref()).to_integer().unwrap_or_default()
}

/// Monic H_D(X) = ∏ (X − j(z_A)) over primitive classes, coefficients from
/// the constant term up. Each coefficient is accepted only when two
/// evaluations at different precisions agree and lie within 1/4 of the
/// same integer with a wide margin; otherwise precision is doubled.
pub fn class_polynomial(d: i64) -> Result<Vec<Integer>> {
    let forms = class_representatives(d, true)?;
    // size estimate from double precision
    let mut log2_size = 0.0;
    for f in &forms {
        let im = (d.unsigned_abs() as f64).sqrt() / (2.0 * f.a as f64);
        log2_size += (2.0 * std::f64::consts::PI * im).max(12.0) / std::f64::consts::LN_2 + 1.0;
    }
    let mut bits = (log2_size as u32 + 64).max(128);
    while bits <= MAX_BITS {
        let eval = |b: u32| -> Result<Vec<BigComplex>> {
            let roots = forms.iter().map(|f| j_of_form(f, b)).collect::<Result<Vec<_>>>()?;
            Ok(product_poly(&roots, b))
        };
        let lo = eval(bits)?;
        let hi = eval(bits + 64)?;
        let mut out = Vec::with_capacity(lo.len());
        let mut ok = true;
        for (a, b) in lo.iter().zip(&hi) {
            let err = (a - b).abs_f64();
            let n = nearest(&b.re);
            let frac = Float::with_val(bits, &b.re - &n).abs().to_f64();
            if !(err < 1e-6 && frac + err < 0.25 && b.im.to_f64().abs() + err < 0.25 && frac < 1e-3) {
                ok = false;
                break;
            }
            out.push(n);
        }
        if ok {
            return Ok(out);
        }
        bits *= 2;
    }
    Err(Error::Precision(format!("class polynomial of {d} not certified below {MAX_BITS} bits")))
}

/// "X^3 + 3491750*X^2 - 5151296875*X + 12771880859375".
pub fn format_poly(coeffs: &[Integer]) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (i, c) in coeffs.iter().enumerate().rev() {
        if *c == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "X".to_string(),
            _ => format!("X^{i}"),
        };
        let abs = Integer::from(c.abs_ref());
        let body = if mono.is_empty() {
            abs.to_string()
        } else if abs == 1 {
            mono
        } else {
            format!("{abs}*{mono}")
        };
        let sign = if *c < 0 { "-" } else { "+" };
        if parts.is_empty() {
            parts.push(if *c < 0 { format!("-{body}") } else { body });
        } else {
            parts.push(format!("{sign} {body}"));
        }
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" ")
    }
}

/// Φ_D: E4 for D = −3, E6 for D = −4, and H_D(j)Δ^h = Σ h_i E4^{3i} Δ^{h−i} otherwise.
pub fn phi_poly(d: i64) -> Result<FormPoly> {
    match d {
        -3 => return Ok(FormPoly::gen(Gen::E4)),
        -4 => return Ok(FormPoly::gen(Gen::E6)),
        _ => {}
    }
    let h = class_polynomial(d)?;
    let deg = (h.len() - 1) as u32;
    let terms: Vec<(Rational, Monomial)> =
        h.iter().enumerate().map(|(i, c)| (Rational::from(c), Monomial::new(3 * i as u32, 0, deg - i as u32))).collect();
    Ok(FormPoly::rational(&terms))
}

/// Q(j_A, √|D|) with j_A the j-value of the given primitive reduced form.
pub fn class_field_of(form: &Bqf, bits: u32) -> Result<Arc<HField>> {
    let d = form.disc();
    let h = class_polynomial(d)?;
    let theta = j_of_form(form, bits)?;
    Ok(HField::class_field(d, h, theta))
}

/// Φ_A = E4 (D = −3), E6 (D = −4), else E4³ − j(z_A)Δ with j(z_A) exact in `field`.
pub fn phi_class_poly(form: &Bqf, field: &Arc<HField>) -> Result<FormPoly> {
    match form.disc() {
        -3 => Ok(FormPoly::gen(Gen::E4)),
        -4 => Ok(FormPoly::gen(Gen::E6)),
        _ => {
            let mut coords = vec![Rational::new(); field.dim()];
            let step = if field.surd == 1 { 1 } else { 2 };
            if field.degree_theta() == 1 {
                coords[0] = Rational::from(-&field.minpoly[0]);
            } else {
                coords[step] = Rational::from(1);
            }
            let ja = HNumber { field: field.clone(), coords };
            FormPoly::gen(Gen::E4).pow(3)?.sub(&FormPoly::term(ja, Monomial::gen(Gen::Delta)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&x| Integer::from(x)).collect()
    }

    #[test]
    fn small_class_polynomials() {
        assert_eq!(class_polynomial(-3).unwrap(), ints(&[0, 1]));
        assert_eq!(class_polynomial(-4).unwrap(), ints(&[-1728, 1]));
        assert_eq!(class_polynomial(-7).unwrap(), ints(&[3375, 1]));
        assert_eq!(class_polynomial(-8).unwrap(), ints(&[-8000, 1]));
        assert_eq!(class_polynomial(-12).unwrap(), ints(&[-54000, 1]));
    }

    #[test]
    fn degree_three() {
        let h = class_polynomial(-23).unwrap();
        assert_eq!(format_poly(&h), "X^3 + 3491750*X^2 - 5151296875*X + 12771880859375");
    }

    #[test]
    fn phi_of_minus_twelve() {
        assert_eq!(phi_poly(-12).unwrap().to_string(), "-54000*Delta + E4^3");
    }
}
