//! Integer-relation detection by exact LLL, and recognition of numbers in a
//! class field from their numeric embedding.

use std::sync::Arc;

use rug::{Float, Integer, Rational};

use super::complex::BigComplex;
use super::hfield::{HField, HNumber};
use crate::error::{Error, Result};

/// LLL-reduces the rows of `b` (δ = 3/4), which must be linearly independent.
/// All-integer variant: d_i are the Gram determinants and λ_{ij} = d_j μ_{ij},
/// updated in place on swaps (Cohen, Algorithm 2.6.7).
pub fn lll(mut b: Vec<Vec<Integer>>) -> Vec<Vec<Integer>> {
    let n = b.len();
    if n < 2 {
        return b;
    }
    let dot = |x: &[Integer], y: &[Integer]| x.iter().zip(y).fold(Integer::new(), |acc, (p, q)| acc + Integer::from(p * q));
    // 1-based as in the algorithm: d[0] = 1, lam[i][j] for j < i
    let mut d = vec![Integer::from(1); n + 1];
    let mut lam = vec![vec![Integer::new(); n + 1]; n + 1];
    d[1] = dot(&b[0], &b[0]);
    let (mut k, mut kmax) = (2usize, 1usize);
    let red = |b: &mut Vec<Vec<Integer>>, lam: &mut Vec<Vec<Integer>>, d: &[Integer], k: usize, l: usize| {
        if Integer::from(lam[k][l].abs_ref()) * 2u32 > d[l] {
            // q = round(λ/d)
            let (q, _) = (Integer::from(&lam[k][l] * 2u32) + &d[l]).div_rem_floor(Integer::from(&d[l] * 2u32));
            let bl = b[l - 1].clone();
            for (x, y) in b[k - 1].iter_mut().zip(&bl) {
                *x -= Integer::from(&q * y);
            }
            lam[k][l] -= Integer::from(&q * &d[l]);
            for i in 1..l {
                let t = Integer::from(&q * &lam[l][i]);
                lam[k][i] -= t;
            }
        }
    };
    while k <= n {
        if k > kmax {
            kmax = k;
            for j in 1..=k {
                let mut u = dot(&b[k - 1], &b[j - 1]);
                for i in 1..j {
                    u = (u * &d[i] - Integer::from(&lam[k][i] * &lam[j][i])).div_exact(&d[i - 1]);
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    assert!(u != 0, "lll: rows are linearly dependent");
                    d[k] = u;
                }
            }
        }
        loop {
            red(&mut b, &mut lam, &d, k, k - 1);
            let lhs = Integer::from(&d[k] * &d[k - 2]) * 4u32;
            let rhs = Integer::from(d[k - 1].square_ref()) * 3u32 - Integer::from(lam[k][k - 1].square_ref()) * 4u32;
            if lhs >= rhs {
                break;
            }
            // swap b_k and b_{k−1}
            b.swap(k - 1, k - 2);
            for j in 1..k - 1 {
                let t = std::mem::take(&mut lam[k][j]);
                lam[k][j] = std::mem::replace(&mut lam[k - 1][j], t);
            }
            let l = lam[k][k - 1].clone();
            let bb = (Integer::from(&d[k - 2] * &d[k]) + Integer::from(l.square_ref())).div_exact(&d[k - 1]);
            for i in k + 1..=kmax {
                let t = lam[i][k].clone();
                lam[i][k] = (Integer::from(&d[k] * &lam[i][k - 1]) - Integer::from(&l * &t)).div_exact(&d[k - 1]);
                lam[i][k - 1] = (Integer::from(&bb * &t) + Integer::from(&l * &lam[i][k])).div_exact(&d[k]);
            }
            d[k - 1] = bb;
            if k > 2 {
                k -= 1;
            }
        }
        for l in (1..k - 1).rev() {
            red(&mut b, &mut lam, &d, k, l);
        }
        k += 1;
    }
    b
}

/// Finds x = Σ c_i·basis_i with rational c_i whose common denominator and
/// numerators stay below `max_height`, using `accuracy_bits` trusted bits of x.
///
/// The relation search only trusts heights up to about 2^{accuracy/(2(n+1))};
/// asking for more is a precision error rather than a silent gamble.
pub fn recognize(x: &BigComplex, basis: &[BigComplex], accuracy_bits: u32, max_height: &Integer) -> Result<Vec<Rational>> {
    let n = basis.len();
    let trusted = accuracy_bits as usize / (2 * (n + 1));
    if max_height.significant_bits() as usize > trusted {
        return Err(Error::Precision(format!(
            "height bound of {} bits needs more than {accuracy_bits} accurate bits",
            max_height.significant_bits()
        )));
    }
    if x.abs_f64() == 0.0 || x.log10_abs() < -(accuracy_bits as f64) * 0.301 + 4.0 {
        return Ok(vec![Rational::new(); n]);
    }
    let bits = accuracy_bits + 64;
    let scale_bits = accuracy_bits.saturating_sub(8);
    let complex = x.im.to_f64() != 0.0 || basis.iter().any(|b| !b.im.is_zero());
    let values: Vec<BigComplex> = std::iter::once(x.with_prec(bits)).chain(basis.iter().map(|b| b.with_prec(bits))).collect();
    // normalize so the largest value has modulus ~1 before scaling
    let mag = values.iter().map(|v| v.abs_f64().max(f64::MIN_POSITIVE)).fold(0.0f64, f64::max);
    let shift = scale_bits as i32 - mag.log2().ceil() as i32;
    let to_int = |f: &Float| -> Integer {
        let s = Float::with_val(bits, f) << shift;
        s.round().to_integer().unwrap_or_default()
    };
    let dim = n + 1;
    let mut rows = Vec::with_capacity(dim);
    for (i, v) in values.iter().enumerate() {
        let mut r: Vec<Integer> = (0..dim).map(|j| Integer::from((i == j) as i32)).collect();
        r.push(to_int(&v.re));
        if complex {
            r.push(to_int(&v.im));
        }
        rows.push(r);
    }
    let reduced = lll(rows);
    for row in &reduced {
        let m0 = &row[0];
        if *m0 == 0 {
            continue;
        }
        if row[..dim].iter().any(|c| Integer::from(c.abs_ref()) > *max_height) {
            continue;
        }
        // x = −Σ m_i b_i / m_0
        let coeffs: Vec<Rational> = row[1..dim].iter().map(|m| Rational::from((Integer::from(-m), m0.clone()))).collect();
        let mut approx = BigComplex::zero(bits);
        for (c, b) in coeffs.iter().zip(&values[1..]) {
            approx += &b.scale(&Float::with_val(bits, c));
        }
        let err = (&approx - &values[0]).abs_f64();
        let tol = 2f64.powi(-(accuracy_bits as i32) + 16) * mag.max(1.0);
        if err <= tol {
            return Ok(coeffs);
        }
    }
    Err(Error::Unrecognized(format!("{} (no relation of height ≤ {max_height})", x.to_string_digits(30))))
}

/// Recognizes x as an element of `field`.
pub fn recognize_in_h(x: &BigComplex, field: &Arc<HField>, accuracy_bits: u32, max_height: &Integer) -> Result<HNumber> {
    let basis = field.basis_values(accuracy_bits + 64);
    let coords = recognize(x, &basis, accuracy_bits, max_height)?;
    Ok(HNumber { field: field.clone(), coords })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::complex::{bits_for_digits, pi};

    #[test]
    fn lll_reduces_known_lattice() {
        let rows = vec![
            vec![Integer::from(1), Integer::from(1), Integer::from(1)],
            vec![Integer::from(-1), Integer::from(0), Integer::from(2)],
            vec![Integer::from(3), Integer::from(5), Integer::from(6)],
        ];
        let r = lll(rows);
        let n0: Integer = r[0].iter().map(|x| Integer::from(x * x)).sum();
        assert!(n0 <= 2);
    }

    #[test]
    fn one_third() {
        let b = bits_for_digits(50);
        let x = BigComplex::from_real(Float::with_val(b, 1) / 3u32);
        let q = recognize_in_h(&x, &HField::rationals(), b - 32, &Integer::from(1_000_000)).unwrap();
        assert_eq!(q.to_rational(), Some(Rational::from((1, 3))));
    }

    #[test]
    fn surd_coefficient() {
        // −2⁹/(3√3) = −(512/9)·√3
        let b = bits_for_digits(100);
        let s3 = Float::with_val(b, 3).sqrt();
        let x = BigComplex::from_real(Float::with_val(b, -512) / (s3 * 3u32));
        let f = HField::quadratic(-3, 3);
        let q = recognize_in_h(&x, &f, b - 32, &Integer::from(1u64 << 30)).unwrap();
        assert_eq!(q.coords, vec![Rational::new(), Rational::from((-512, 9))]);
    }

    #[test]
    fn pi_is_not_recognized() {
        let b = bits_for_digits(60);
        let x = BigComplex::from_real(pi(b));
        let f = HField::quadratic(-3, 3);
        assert!(matches!(recognize_in_h(&x, &f, b - 32, &Integer::from(1u64 << 20)), Err(Error::Unrecognized(_))));
    }

    #[test]
    fn height_beyond_accuracy_is_rejected() {
        let x = BigComplex::from_f64(128, 0.25, 0.0);
        assert!(matches!(recognize(&x, &[BigComplex::one(128)], 64, &(Integer::from(1) << 40)), Err(Error::Precision(_))));
    }
}
