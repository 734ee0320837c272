//! Certified evaluation of E2, E4, E6, Δ, j and q-series at points of H.

use rug::{Float, Integer};

use super::complex::{pi, BigComplex};
use crate::error::{Error, Result};
use crate::quadforms::{mat_mul, Mat2, IDENTITY};
use crate::series::{FormExpr, FormPoly, QSeries};

/// Moves z into the standard fundamental domain. Returns (γz, γ) with
/// γ = [[a, b], [c, d]] ∈ SL₂(ℤ); the image is recomputed from z and γ at full
/// precision so no rounding accumulates over the steps.
pub fn reduce_point(z: &BigComplex) -> Result<(BigComplex, Mat2)> {
    if z.im.cmp0() != Some(std::cmp::Ordering::Greater) {
        return Err(Error::InvalidArgument("point not in the upper half plane".into()));
    }
    let mut g = IDENTITY;
    let mut w = z.clone();
    for _ in 0..10_000 {
        // floor(x + 1/2) and a slack on |w| < 1 keep boundary points from cycling
        let n = Float::with_val(w.prec(), &w.re + 0.5f64).floor().to_integer().unwrap_or_default();
        let n = n.to_i64().ok_or_else(|| Error::InvalidArgument("real part out of range".into()))?;
        if n != 0 {
            g = mat_mul(&[[1, -n], [0, 1]], &g);
        }
        w = apply_mat(&g, z);
        let slack = Float::with_val(w.prec(), 1) - (Float::with_val(w.prec(), 1) >> (w.prec() - 16));
        if w.norm_sqr() < slack {
            g = mat_mul(&[[0, -1], [1, 0]], &g);
            w = apply_mat(&g, z);
        } else {
            return Ok((w, g));
        }
    }
    Err(Error::Precision("reduction of the evaluation point did not terminate".into()))
}

/// (αz + β)/(γz + δ).
pub fn apply_mat(m: &Mat2, z: &BigComplex) -> BigComplex {
    let num = &z.scale_i64(m[0][0]) + &BigComplex::from_f64(z.prec(), m[0][1] as f64, 0.0);
    let den = &z.scale_i64(m[1][0]) + &BigComplex::from_f64(z.prec(), m[1][1] as f64, 0.0);
    &num / &den
}

/// The automorphy factor cz + d.
pub fn automorphy(m: &Mat2, z: &BigComplex) -> BigComplex {
    &z.scale_i64(m[1][0]) + &BigComplex::from_f64(z.prec(), m[1][1] as f64, 0.0)
}

/// Values of the generators at one point.
#[derive(Clone, Debug)]
pub struct ModularValues {
    pub z: BigComplex,
    pub e2: BigComplex,
    /// E2 − 3/(π y), the weight-2 nonholomorphic completion.
    pub e2star: BigComplex,
    pub e4: BigComplex,
    pub e6: BigComplex,
    pub delta: BigComplex,
    pub bits: u32,
}

impl ModularValues {
    pub fn j(&self) -> BigComplex {
        &self.e4.powi(3) / &self.delta
    }
}

// log2 of Σ_{n≥N} n^{s+1} x^n, using σ_s(n) ≤ n^{s+1}
fn eisenstein_tail_log2(s: u32, n: u64, x: f64) -> f64 {
    let n_f = n as f64;
    let ratio = x * (1.0 + 1.0 / n_f).powi(s as i32 + 1);
    if ratio >= 1.0 {
        return f64::INFINITY;
    }
    (s as f64 + 1.0) * n_f.log2() + n_f * x.log2() - (1.0 - ratio).log2()
}

fn eisenstein_at(q: &BigComplex, s: u32, c: i64, bits: u32) -> BigComplex {
    let x = q.abs_f64();
    let target = -(bits as f64) - 8.0 - (c.unsigned_abs() as f64).log2();
    let mut n = 1u64;
    while eisenstein_tail_log2(s, n, x) > target {
        n += 1;
    }
    let mut acc = BigComplex::zero(bits);
    let mut qn = BigComplex::one(bits);
    for m in 1..n {
        qn = &qn * q;
        let sigma = (1..=m).filter(|d| m % d == 0).fold(Integer::new(), |t, d| t + Integer::from(Integer::u_pow_u(d as u32, s)));
        acc += &qn.scale(&Float::with_val(bits, &sigma));
    }
    &BigComplex::one(bits) + &acc.scale_i64(c)
}

fn delta_at(q: &BigComplex, bits: u32) -> BigComplex {
    // Euler: ∏(1 − qⁿ) = Σ (−1)^k q^{k(3k−1)/2}
    let x = q.abs_f64();
    let mut sum = BigComplex::one(bits);
    let mut k: i64 = 1;
    loop {
        let g1 = k * (3 * k - 1) / 2;
        let tail = (g1 as f64) * x.log2() + 1.0 - (1.0 - x).log2();
        if tail < -(bits as f64) - 16.0 {
            break;
        }
        let g2 = k * (3 * k + 1) / 2;
        let t = &q.powi(g1) + &q.powi(g2);
        if k % 2 == 1 {
            sum -= &t;
        } else {
            sum += &t;
        }
        k += 1;
    }
    q * &sum.powi(24)
}

/// E2, E2*, E4, E6 and Δ at z with relative error below 2^{−bits}.
pub fn modular_values(z: &BigComplex, bits: u32) -> Result<ModularValues> {
    let wb = bits + 32;
    let z = z.with_prec(wb);
    let (zr, g) = reduce_point(&z)?;
    let q = zr.e2pii();
    let e2r = eisenstein_at(&q, 1, -24, wb);
    let e4r = eisenstein_at(&q, 3, 240, wb);
    let e6r = eisenstein_at(&q, 5, -504, wb);
    let dr = delta_at(&q, wb);
    let three_over_piy = |y: &Float| Float::with_val(wb, 3) / (pi(wb) * y);
    let e2sr = &e2r - &BigComplex::from_real(three_over_piy(&zr.im));
    let t = automorphy(&g, &z).recip();
    let t2 = t.square();
    let t4 = t2.square();
    let e2star = &e2sr * &t2;
    let e2 = &e2star + &BigComplex::from_real(three_over_piy(&z.im));
    let e4 = &e4r * &t4;
    let e6 = &(&e6r * &t4) * &t2;
    let delta = &dr * &t4.powi(3);
    let out = |v: BigComplex| v.with_prec(bits);
    Ok(ModularValues { z: out(z), e2: out(e2), e2star: out(e2star), e4: out(e4), e6: out(e6), delta: out(delta), bits })
}

/// Evaluates a q-series at z. The tail beyond the truncation order is
/// estimated from the growth of the last known coefficients; if it is not
/// below 10^{−digits} relative to the value, the needed order is reported.
pub fn eval_qseries(f: &QSeries, z: &BigComplex, digits: u32) -> Result<BigComplex> {
    let bits = super::complex::bits_for_digits(digits);
    let z = z.with_prec(bits);
    let q = z.e2pii();
    let x = q.abs_f64();
    if x >= 1.0 {
        return Err(Error::InvalidArgument("point not in the upper half plane".into()));
    }
    let t = f.trunc_order();
    let mut acc = BigComplex::zero(bits);
    let mut qn = q.powi(f.valuation());
    let mut at = f.valuation();
    for (e, c) in f.terms() {
        while at < e {
            qn = &qn * &q;
            at += 1;
        }
        acc += &qn.scale(&Float::with_val(bits, c));
    }
    // growth estimate: largest |c_n|^{1/n} over the upper half of the known range
    let lo = f.valuation().max(1).max(t / 2);
    let mut growth: f64 = 0.0;
    let mut last_mag: f64 = 0.0;
    for (e, c) in f.terms().filter(|(e, _)| *e >= lo) {
        let m = Float::with_val(64, c).abs().to_f64().max(f64::MIN_POSITIVE);
        growth = growth.max(m.ln() / e as f64);
        last_mag = last_mag.max(m.ln());
    }
    let rho = growth.exp();
    let log10_tail = if x * rho >= 1.0 {
        f64::INFINITY
    } else {
        (last_mag + t as f64 * x.ln() - (1.0 - x * rho).ln()) / std::f64::consts::LN_10
    };
    let scale = acc.log10_abs().max(0.0);
    if log10_tail > scale - digits as f64 {
        let per = -(x * rho.max(1.0)).log10();
        let needed = if per > 0.0 {
            t + ((log10_tail - scale + digits as f64) / per).ceil() as i64 + 1
        } else {
            i64::MAX
        };
        return Err(Error::InsufficientTruncation { needed, have: t });
    }
    Ok(acc)
}

pub fn eval_poly(p: &FormPoly, v: &ModularValues) -> BigComplex {
    let bits = v.bits;
    let j = if p.terms.keys().any(|m| m.j > 0) { Some(v.j()) } else { None };
    let mut acc = BigComplex::zero(bits);
    for (m, c) in &p.terms {
        let mut t = c.embed(bits);
        t = &t * &v.e4.powi(m.e4 as i64);
        t = &t * &v.e6.powi(m.e6 as i64);
        t = &t * &v.delta.powi(m.delta as i64);
        if m.j > 0 {
            t = &t * &j.as_ref().expect("j computed").powi(m.j as i64);
        }
        acc += &t;
    }
    acc
}

pub fn eval_expr(e: &FormExpr, v: &ModularValues) -> BigComplex {
    let mut val = eval_poly(&e.numerator, v);
    for (d, m) in &e.denominator {
        val = &val / &eval_poly(d, v).powi(*m as i64);
    }
    val
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::complex::bits_for_digits;
    use crate::series::{canonical_form, CanonicalForm};

    fn rho(bits: u32) -> BigComplex {
        BigComplex::new(Float::with_val(bits, -0.5), Float::with_val(bits, 3).sqrt() / 2u32)
    }

    #[test]
    fn reduction_lands_in_fundamental_domain() {
        let b = 256;
        for (x, y) in [(0.37, 0.001), (-2.4, 0.05), (0.5, 0.8660254037844386), (10.2, 3.0)] {
            let z = BigComplex::from_f64(b, x, y);
            let (w, g) = reduce_point(&z).unwrap();
            assert_eq!(g[0][0] * g[1][1] - g[0][1] * g[1][0], 1);
            assert!(w.re.to_f64().abs() <= 0.5 + 1e-12);
            assert!(w.norm_sqr().to_f64() >= 1.0 - 1e-12);
            assert!((&apply_mat(&g, &z) - &w).abs_f64() < 1e-60);
        }
    }

    #[test]
    fn j_at_i_is_1728() {
        let b = bits_for_digits(80);
        let v = modular_values(&BigComplex::i(b), b).unwrap();
        let j = v.j();
        assert!((&j - &BigComplex::from_f64(b, 1728.0, 0.0)).abs_f64() < 1e-70);
        assert!(v.e6.abs_f64() < 1e-75);
    }

    #[test]
    fn e4_vanishes_at_rho() {
        let b = bits_for_digits(80);
        let v = modular_values(&rho(b), b).unwrap();
        assert!(v.e4.abs_f64() < 1e-75);
        assert!(v.e2star.abs_f64() < 1e-75);
    }

    #[test]
    fn delta_matches_eisenstein_identity() {
        let b = bits_for_digits(60);
        let z = BigComplex::from_f64(b, 0.123, 0.31);
        let v = modular_values(&z, b).unwrap();
        let lhs = &(&v.e4.powi(3) - &v.e6.square()) / &BigComplex::from_f64(b, 1728.0, 0.0);
        assert!((&lhs - &v.delta).abs_f64() / v.delta.abs_f64() < 1e-50);
    }

    #[test]
    fn weight_twelve_transformation() {
        let b = bits_for_digits(50);
        let z = BigComplex::from_f64(b, 0.2, 1.1);
        let g = [[2, 1], [7, 4]];
        let v1 = modular_values(&z, b).unwrap();
        let v2 = modular_values(&apply_mat(&g, &z), b).unwrap();
        let f = automorphy(&g, &z).powi(12);
        assert!((&v2.delta - &(&v1.delta * &f)).abs_f64() / v2.delta.abs_f64() < 1e-40);
    }

    #[test]
    fn qseries_evaluation_matches_direct() {
        let b = bits_for_digits(40);
        let z = BigComplex::from_f64(b, 0.1, 1.2);
        let e4 = canonical_form(CanonicalForm::E4, 60);
        let s = eval_qseries(&e4, &z, 40).unwrap();
        let v = modular_values(&z, b).unwrap();
        assert!((&s - &v.e4).abs_f64() < 1e-35);
        // zero coefficients must not shift later powers
        let sparse = QSeries::from_integers(0, &[1, 0, 0, 7], 4);
        let z5 = BigComplex::from_f64(b, 0.0, 5.0);
        let s = eval_qseries(&sparse, &z5, 10).unwrap();
        let q3 = (-6.0 * std::f64::consts::PI * 5.0).exp();
        assert!((s.re.to_f64() - (1.0 + 7.0 * q3)).abs() < 1e-30);
        let short = canonical_form(CanonicalForm::E4, 3);
        assert!(matches!(eval_qseries(&short, &z, 40), Err(Error::InsufficientTruncation { .. })));
    }

    #[test]
    fn delta_vanishes_at_infinity() {
        let b = 128;
        let v = modular_values(&BigComplex::from_f64(b, 0.0, 40.0), b).unwrap();
        assert!(v.delta.abs_f64() < 1e-100);
    }
}
