//! The ring ℚ[E2*, E4, E6] closed under the Maass–Shimura operator, and
//! modified Taylor expansions at points of H.
//!
//! On weight-κ forms ∂ = q d/dq − κ/(4πy). With E2* = E2 − 3/(πy):
//!   ∂E2* = (E2*² − E4)/12,  ∂E4 = (E2*E4 − E6)/3,  ∂E6 = (E2*E6 − E4²)/2.

use std::collections::BTreeMap;
use std::fmt;

use rug::{Float, Rational};

use super::complex::{pi, BigComplex};
use super::eval::{modular_values, ModularValues};
use crate::error::{Error, Result};
use crate::series::FormPoly;

/// Exponents of (E2*, E4, E6).
type Exps = [u32; 3];

#[derive(Clone, Debug, PartialEq)]
pub struct QuasiExpr {
    pub weight: i64,
    pub terms: BTreeMap<Exps, Rational>,
}

fn exps_weight(e: &Exps) -> i64 {
    2 * e[0] as i64 + 4 * e[1] as i64 + 6 * e[2] as i64
}

impl QuasiExpr {
    pub fn zero(weight: i64) -> Self {
        QuasiExpr { weight, terms: BTreeMap::new() }
    }

    fn atom(e: Exps) -> Self {
        let mut t = BTreeMap::new();
        t.insert(e, Rational::from(1));
        QuasiExpr { weight: exps_weight(&e), terms: t }
    }

    pub fn one() -> Self {
        Self::atom([0, 0, 0])
    }
    pub fn e2star() -> Self {
        Self::atom([1, 0, 0])
    }
    pub fn e4() -> Self {
        Self::atom([0, 1, 0])
    }
    pub fn e6() -> Self {
        Self::atom([0, 0, 1])
    }

    /// (E4³ − E6²)/1728.
    pub fn delta() -> Self {
        let mut t = BTreeMap::new();
        t.insert([0, 3, 0], Rational::from((1, 1728)));
        t.insert([0, 0, 2], Rational::from((-1, 1728)));
        QuasiExpr { weight: 12, terms: t }
    }

    /// Converts a rational polynomial in E4, E6, Δ (no j).
    pub fn from_poly(p: &FormPoly) -> Result<Self> {
        let w = p.weight().unwrap_or(0);
        let mut out = Self::zero(w);
        let delta = Self::delta();
        for (m, c) in &p.terms {
            if m.j > 0 {
                return Err(Error::InvalidArgument("j is not a polynomial generator".into()));
            }
            let c = c
                .to_rational()
                .ok_or_else(|| Error::InvalidArgument("quasimodular expressions need rational coefficients".into()))?;
            let t = Self::atom([0, m.e4, m.e6]).mul(&delta.pow(m.delta)).scale(&c);
            out = out.add(&t);
        }
        out.weight = w;
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms.keys().all(|e| exps_weight(e) == self.weight)
    }

    pub fn add(&self, o: &QuasiExpr) -> QuasiExpr {
        let mut terms = self.terms.clone();
        for (e, c) in &o.terms {
            let s = terms.get(e).map(|x| Rational::from(x + c)).unwrap_or_else(|| c.clone());
            if s.cmp0().is_eq() {
                terms.remove(e);
            } else {
                terms.insert(*e, s);
            }
        }
        let weight = if self.is_zero() { o.weight } else { self.weight };
        QuasiExpr { weight, terms }
    }

    pub fn scale(&self, r: &Rational) -> QuasiExpr {
        if r.cmp0().is_eq() {
            return Self::zero(self.weight);
        }
        QuasiExpr { weight: self.weight, terms: self.terms.iter().map(|(e, c)| (*e, Rational::from(c * r))).collect() }
    }

    pub fn mul(&self, o: &QuasiExpr) -> QuasiExpr {
        let mut terms: BTreeMap<Exps, Rational> = BTreeMap::new();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                let e = [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
                *terms.entry(e).or_default() += Rational::from(x * y);
            }
        }
        terms.retain(|_, c| c.cmp0().is_ne());
        QuasiExpr { weight: self.weight + o.weight, terms }
    }

    pub fn pow(&self, e: u32) -> QuasiExpr {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// One application of ∂; the weight goes up by 2.
    pub fn derivative(&self) -> QuasiExpr {
        // ∂ is a derivation on the ring, so expand monomial by monomial
        let d_e2 = Self::e2star().pow(2).add(&Self::e4().scale(&Rational::from(-1))).scale(&Rational::from((1, 12)));
        let d_e4 = Self::e2star().mul(&Self::e4()).add(&Self::e6().scale(&Rational::from(-1))).scale(&Rational::from((1, 3)));
        let d_e6 = Self::e2star().mul(&Self::e6()).add(&Self::e4().pow(2).scale(&Rational::from(-1))).scale(&Rational::from((1, 2)));
        let ders = [d_e2, d_e4, d_e6];
        let mut out = Self::zero(self.weight + 2);
        for (e, c) in &self.terms {
            for (i, d) in ders.iter().enumerate() {
                if e[i] == 0 {
                    continue;
                }
                let mut rest = *e;
                rest[i] -= 1;
                let t = Self::atom(rest).mul(d).scale(&Rational::from(c * e[i]));
                out = out.add(&t);
            }
        }
        out.weight = self.weight + 2;
        out
    }

    pub fn eval(&self, v: &ModularValues) -> BigComplex {
        let bits = v.bits;
        let mut acc = BigComplex::zero(bits);
        for (e, c) in &self.terms {
            let t = &(&v.e2star.powi(e[0] as i64) * &v.e4.powi(e[1] as i64)) * &v.e6.powi(e[2] as i64);
            acc += &t.scale(&Float::with_val(bits, c));
        }
        acc
    }
}

impl fmt::Display for QuasiExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let mut s = c.to_string();
                for (name, k) in [("E2*", e[0]), ("E4", e[1]), ("E6", e[2])] {
                    match k {
                        0 => {}
                        1 => s.push_str(&format!("*{name}")),
                        _ => s.push_str(&format!("*{name}^{k}")),
                    }
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + ").replace("+ -", "- "))
    }
}

/// [∂⁰f(z), …, ∂ⁿf(z)] for a rational polynomial f in E4, E6, Δ.
pub fn maass_derivatives(f: &FormPoly, n: usize, z: &BigComplex, bits: u32) -> Result<Vec<BigComplex>> {
    let v = modular_values(z, bits)?;
    let mut e = QuasiExpr::from_poly(f)?;
    let mut out = Vec::with_capacity(n + 1);
    for _ in 0..=n {
        out.push(e.eval(&v));
        e = e.derivative();
    }
    Ok(out)
}

/// Coefficients ∂ⁿf(z)·(4πy)ⁿ/n! for n < n_terms.
///
/// The expansion of (1−w)^{−κ} f((z − z̄w)/(1−w)) in powers of w has these
/// coefficients up to the sign (−1)ⁿ; `Jet` holds that geometric version.
pub fn modified_taylor(f: &FormPoly, z: &BigComplex, n_terms: usize, bits: u32) -> Result<Vec<BigComplex>> {
    if n_terms == 0 {
        return Err(Error::InvalidArgument("n_terms must be at least 1".into()));
    }
    let ders = maass_derivatives(f, n_terms - 1, z, bits)?;
    Ok(scale_to_taylor(ders, &z.im, bits, false))
}

fn scale_to_taylor(ders: Vec<BigComplex>, y: &Float, bits: u32, alternate: bool) -> Vec<BigComplex> {
    let four_pi_y = Float::with_val(bits, pi(bits) * y) * 4u32;
    let mut factor = Float::with_val(bits, 1);
    ders.into_iter()
        .enumerate()
        .map(|(n, d)| {
            if n > 0 {
                factor *= &four_pi_y;
                factor /= n as u32;
            }
            let s = d.scale(&factor);
            if alternate && n % 2 == 1 {
                -&s
            } else {
                s
            }
        })
        .collect()
}

/// Coefficients of (1−w)^{−κ} f((z − z̄w)/(1−w)) in w, truncated at `len`
/// terms. Jets multiply like power series because the weights add.
#[derive(Clone, Debug)]
pub struct Jet {
    pub coeffs: Vec<BigComplex>,
}

impl Jet {
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn constant(c: BigComplex, len: usize) -> Self {
        let bits = c.prec();
        let mut coeffs = vec![BigComplex::zero(bits); len];
        if len > 0 {
            coeffs[0] = c;
        }
        Jet { coeffs }
    }

    pub fn add(&self, o: &Jet) -> Jet {
        Jet { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, c: &BigComplex) -> Jet {
        Jet { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, o: &Jet) -> Jet {
        let n = self.len().min(o.len());
        let bits = self.coeffs.first().map(|c| c.prec()).unwrap_or(64);
        let mut coeffs = vec![BigComplex::zero(bits); n];
        for i in 0..n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..n - i {
                coeffs[i + j] += &(&self.coeffs[i] * &o.coeffs[j]);
            }
        }
        Jet { coeffs }
    }

    pub fn pow(&self, e: u32) -> Jet {
        let bits = self.coeffs.first().map(|c| c.prec()).unwrap_or(64);
        let mut r = Jet::constant(BigComplex::one(bits), self.len());
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        r
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn inverse(&self) -> Result<Jet> {
        if self.coeffs.is_empty() || self.coeffs[0].is_zero() {
            return Err(Error::ZeroLeading);
        }
        let n = self.len();
        let inv0 = self.coeffs[0].recip();
        let mut out: Vec<BigComplex> = vec![inv0.clone()];
        for m in 1..n {
            let mut s = BigComplex::zero(inv0.prec());
            for i in 1..=m {
                s += &(&self.coeffs[i] * &out[m - i]);
            }
            out.push(-&(&s * &inv0));
        }
        Ok(Jet { coeffs: out })
    }
}

/// Jets of the generators at one point, from which the jet of any
/// polynomial in E4, E6, Δ, j follows by series arithmetic.
pub struct JetContext {
    pub z: BigComplex,
    pub bits: u32,
    pub len: usize,
    pub values: ModularValues,
    pub e4: Jet,
    pub e6: Jet,
    pub delta: Jet,
    j: Option<Jet>,
}

impl JetContext {
    pub fn new(z: &BigComplex, len: usize, bits: u32) -> Result<Self> {
        let values = modular_values(z, bits)?;
        let jet = |q: QuasiExpr| {
            let mut e = q;
            let mut ders = Vec::with_capacity(len);
            for _ in 0..len {
                ders.push(e.eval(&values));
                e = e.derivative();
            }
            Jet { coeffs: scale_to_taylor(ders, &values.z.im, bits, true) }
        };
        let e4 = jet(QuasiExpr::e4());
        let e6 = jet(QuasiExpr::e6());
        let delta = jet(QuasiExpr::delta());
        let j = delta.inverse().ok().map(|inv| e4.pow(3).mul(&inv));
        Ok(JetContext { z: values.z.clone(), bits, len, values, e4, e6, delta, j })
    }

    pub fn poly(&self, p: &FormPoly) -> Result<Jet> {
        let mut acc = Jet::constant(BigComplex::zero(self.bits), self.len);
        for (m, c) in &p.terms {
            let mut t = Jet::constant(c.embed(self.bits), self.len);
            if m.e4 > 0 {
                t = t.mul(&self.e4.pow(m.e4));
            }
            if m.e6 > 0 {
                t = t.mul(&self.e6.pow(m.e6));
            }
            if m.delta > 0 {
                t = t.mul(&self.delta.pow(m.delta));
            }
            if m.j > 0 {
                let j = self.j.as_ref().ok_or(Error::ZeroLeading)?;
                t = t.mul(&j.pow(m.j));
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::complex::bits_for_digits;
    use crate::series::{Gen, Monomial};

    #[test]
    fn delta_derivative_is_e2star_delta() {
        let d = QuasiExpr::delta();
        assert_eq!(d.derivative(), QuasiExpr::e2star().mul(&d));
    }

    #[test]
    fn derivative_keeps_homogeneity() {
        let mut e = QuasiExpr::e4().pow(2).mul(&QuasiExpr::e6());
        for _ in 0..6 {
            e = e.derivative();
            assert!(e.is_homogeneous());
        }
        assert_eq!(e.weight, 14 + 12);
    }

    #[test]
    fn leibniz_rule_symbolic() {
        let f = QuasiExpr::e4();
        let g = QuasiExpr::delta();
        let lhs = f.mul(&g).derivative();
        let rhs = f.derivative().mul(&g).add(&f.mul(&g.derivative()));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn geometric_jet_matches_evaluation() {
        // (1−w)^{−4} E4((z − z̄w)/(1−w)) at small w against the jet sum
        let bits = bits_for_digits(40);
        let z = BigComplex::from_f64(bits, 0.1, 1.3);
        let ctx = JetContext::new(&z, 30, bits).unwrap();
        let w = BigComplex::from_f64(bits, 0.01, 0.02);
        let one = BigComplex::one(bits);
        let zw = &(&z - &(&z.conj() * &w)) / &(&one - &w);
        let direct = &modular_values(&zw, bits).unwrap().e4 * &(&one - &w).powi(-4);
        let mut series = BigComplex::zero(bits);
        for (n, c) in ctx.e4.coeffs.iter().enumerate() {
            series += &(c * &w.powi(n as i64));
        }
        assert!((&direct - &series).abs_f64() < 1e-30);
    }

    #[test]
    fn taylor_constant_term_is_value() {
        let bits = 200;
        let z = BigComplex::from_f64(bits, -0.3, 0.9);
        let f = FormPoly::gen(Gen::Delta);
        let t = modified_taylor(&f, &z, 3, bits).unwrap();
        let v = modular_values(&z, bits).unwrap();
        assert!((&t[0] - &v.delta).abs_f64() < 1e-50);
        let jet = JetContext::new(&z, 3, bits).unwrap().poly(&FormPoly::monomial(Monomial::new(0, 0, 1))).unwrap();
        assert!((&jet.coeffs[1] + &t[1]).abs_f64() < 1e-50);
    }
}
