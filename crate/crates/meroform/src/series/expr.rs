//! Symbolic polynomials and rational functions in E4, E6, Δ and j.

use std::collections::BTreeMap;
use std::fmt;

use rug::Rational;

use super::forms::{canonical_form, CanonicalForm};
use super::QSeries;
use crate::error::{Error, Result};
use crate::numeric::hfield::{HField, HNumber};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    E4,
    E6,
    Delta,
    J,
}

/// E4^e4 · E6^e6 · Δ^delta · j^j.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub e4: u32,
    pub e6: u32,
    pub delta: u32,
    pub j: u32,
}

impl Monomial {
    pub fn new(e4: u32, e6: u32, delta: u32) -> Self {
        Monomial { e4, e6, delta, j: 0 }
    }

    pub fn gen(g: Gen) -> Self {
        let mut m = Monomial::default();
        match g {
            Gen::E4 => m.e4 = 1,
            Gen::E6 => m.e6 = 1,
            Gen::Delta => m.delta = 1,
            Gen::J => m.j = 1,
        }
        m
    }

    pub fn weight(&self) -> i64 {
        4 * self.e4 as i64 + 6 * self.e6 as i64 + 12 * self.delta as i64
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial { e4: self.e4 + o.e4, e6: self.e6 + o.e6, delta: self.delta + o.delta, j: self.j + o.j }
    }

    pub fn is_one(&self) -> bool {
        *self == Monomial::default()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (name, e) in [("E4", self.e4), ("E6", self.e6), ("Delta", self.delta), ("j", self.j)] {
            match e {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// A polynomial in the generators with class-field coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct FormPoly {
    pub terms: BTreeMap<Monomial, HNumber>,
}

impl FormPoly {
    pub fn zero() -> Self {
        FormPoly { terms: BTreeMap::new() }
    }

    pub fn constant(c: HNumber) -> Self {
        Self::term(c, Monomial::default())
    }

    pub fn term(c: HNumber, m: Monomial) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn gen(g: Gen) -> Self {
        Self::term(HNumber::integer(1), Monomial::gen(g))
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(HNumber::integer(1), m)
    }

    /// Polynomial with rational coefficients.
    pub fn rational(terms: &[(Rational, Monomial)]) -> Self {
        let mut p = Self::zero();
        for (c, m) in terms {
            p = p.add(&Self::term(HNumber::rational(c.clone()), *m)).expect("rational terms");
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Common weight of the terms; `None` if the polynomial is inhomogeneous or zero.
    pub fn weight(&self) -> Option<i64> {
        let mut w = None;
        for m in self.terms.keys() {
            match w {
                None => w = Some(m.weight()),
                Some(x) if x != m.weight() => return None,
                _ => {}
            }
        }
        w
    }

    pub fn field(&self) -> std::sync::Arc<HField> {
        let mut f = HField::rationals();
        for c in self.terms.values() {
            if c.field.dim() > f.dim() {
                f = c.field.clone();
            }
        }
        f
    }

    pub fn is_rational(&self) -> bool {
        self.terms.values().all(|c| c.to_rational().is_some())
    }

    pub fn add(&self, o: &FormPoly) -> Result<FormPoly> {
        let mut terms = self.terms.clone();
        for (m, c) in &o.terms {
            let s = match terms.get(m) {
                Some(x) => x.add(c)?,
                None => c.clone(),
            };
            if s.is_zero() {
                terms.remove(m);
            } else {
                terms.insert(*m, s);
            }
        }
        Ok(FormPoly { terms })
    }

    pub fn sub(&self, o: &FormPoly) -> Result<FormPoly> {
        self.add(&o.scale(&Rational::from(-1)))
    }

    pub fn scale(&self, r: &Rational) -> FormPoly {
        if r.cmp0().is_eq() {
            return Self::zero();
        }
        FormPoly { terms: self.terms.iter().map(|(m, c)| (*m, c.scale(r))).collect() }
    }

    pub fn scale_h(&self, h: &HNumber) -> Result<FormPoly> {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out = out.add(&Self::term(c.mul(h)?, *m))?;
        }
        Ok(out)
    }

    pub fn mul(&self, o: &FormPoly) -> Result<FormPoly> {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out = out.add(&Self::term(c1.mul(c2)?, m1.mul(m2)))?;
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<FormPoly> {
        let mut r = Self::constant(HNumber::integer(1));
        for _ in 0..e {
            r = r.mul(self)?;
        }
        Ok(r)
    }

    /// q-expansion known below q^trunc, one series per coordinate of the
    /// coefficient field.
    pub fn expand(&self, trunc: i64) -> Result<Vec<QSeries>> {
        let field = self.field();
        let mut cache = AtomCache::new(trunc, self.max_j());
        let mut comps = vec![QSeries::zero(trunc); field.dim()];
        for (m, c) in &self.terms {
            let s = cache.monomial(m)?;
            let c = HNumber::from_rational(&field, Rational::new()).add(c)?;
            for (i, x) in c.coords.iter().enumerate() {
                if x.cmp0().is_ne() {
                    comps[i] = &comps[i] + &s.scale(x);
                }
            }
        }
        Ok(comps)
    }

    /// q-expansion of a polynomial with rational coefficients.
    pub fn expand_rational(&self, trunc: i64) -> Result<QSeries> {
        if !self.is_rational() {
            return Err(Error::InvalidArgument("polynomial has irrational coefficients".into()));
        }
        let mut cache = AtomCache::new(trunc, self.max_j());
        let mut acc = QSeries::zero(trunc);
        for (m, c) in &self.terms {
            let r = c.to_rational().expect("checked rational");
            acc = &acc + &cache.monomial(m)?.scale(&r);
        }
        Ok(acc)
    }

    fn max_j(&self) -> u32 {
        self.terms.keys().map(|m| m.j).max().unwrap_or(0)
    }
}

impl fmt::Display for FormPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest Δ-power first, matching the usual way these are written
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by_key(|(m, _)| (std::cmp::Reverse(m.delta), m.j, m.e4, m.e6));
        let mut first = true;
        for (m, c) in terms {
            let cs = c.to_string();
            let (neg, body) = match cs.strip_prefix('-') {
                Some(rest) if !cs.starts_with("-(") => (true, rest.to_string()),
                _ => (false, cs.clone()),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match (body.as_str(), m.is_one()) {
                ("1", true) => write!(f, "1")?,
                ("1", false) => write!(f, "{m}")?,
                (_, true) => write!(f, "{body}")?,
                _ => write!(f, "{body}*{m}")?,
            }
        }
        Ok(())
    }
}

/// Cached q-expansions of atom powers.
struct AtomCache {
    trunc: i64,
    extra: i64,
    powers: BTreeMap<(Gen, u32), QSeries>,
}

impl AtomCache {
    fn new(trunc: i64, max_j: u32) -> Self {
        AtomCache { trunc, extra: max_j as i64 + 2, powers: BTreeMap::new() }
    }

    fn base(&self, g: Gen) -> QSeries {
        // every atom is generated far enough that products stay exact to trunc
        let n = (self.trunc + self.extra).max(1) as usize + 2;
        let name = match g {
            Gen::E4 => CanonicalForm::E4,
            Gen::E6 => CanonicalForm::E6,
            Gen::Delta => CanonicalForm::Delta,
            Gen::J => CanonicalForm::J,
        };
        canonical_form(name, n + self.extra as usize)
    }

    fn power(&mut self, g: Gen, e: u32) -> Result<QSeries> {
        if let Some(s) = self.powers.get(&(g, e)) {
            return Ok(s.clone());
        }
        let s = self.base(g).pow(e as i64)?;
        self.powers.insert((g, e), s.clone());
        Ok(s)
    }

    fn monomial(&mut self, m: &Monomial) -> Result<QSeries> {
        let mut s = QSeries::one(self.trunc + self.extra + 2);
        for (g, e) in [(Gen::E4, m.e4), (Gen::E6, m.e6), (Gen::Delta, m.delta), (Gen::J, m.j)] {
            if e > 0 {
                s = &s * &self.power(g, e)?;
            }
        }
        if s.trunc_order() < self.trunc {
            return Err(Error::InsufficientTruncation { needed: self.trunc, have: s.trunc_order() });
        }
        Ok(s.truncate(self.trunc))
    }
}

/// numerator / ∏ denominator_i^{e_i}.
#[derive(Clone, Debug, PartialEq)]
pub struct FormExpr {
    pub numerator: FormPoly,
    pub denominator: Vec<(FormPoly, u32)>,
}

impl FormExpr {
    pub fn poly(p: FormPoly) -> Self {
        FormExpr { numerator: p, denominator: Vec::new() }
    }

    pub fn new(numerator: FormPoly, denominator: Vec<(FormPoly, u32)>) -> Self {
        FormExpr { numerator, denominator }
    }

    pub fn weight(&self) -> Option<i64> {
        if self.numerator.is_zero() {
            return None;
        }
        let mut w = self.numerator.weight()?;
        for (d, e) in &self.denominator {
            w -= d.weight()? * *e as i64;
        }
        Some(w)
    }

    /// Denominator multiplied out.
    pub fn denominator_poly(&self) -> Result<FormPoly> {
        let mut p = FormPoly::constant(HNumber::integer(1));
        for (d, e) in &self.denominator {
            p = p.mul(&d.pow(*e)?)?;
        }
        Ok(p)
    }

    /// q-expansion below q^trunc, one series per coordinate of the numerator's
    /// coefficient field. The denominator must have rational coefficients.
    pub fn expand(&self, trunc: i64) -> Result<Vec<QSeries>> {
        let den = self.denominator_poly()?;
        if !den.is_rational() {
            return Err(Error::InvalidArgument("irrational denominators are not expanded".into()));
        }
        // 1/den has valuation -v(den); expand the numerator far enough to compensate
        let probe = den.expand_rational(trunc.max(1) + 1)?;
        let v = probe.valuation();
        let pad = self.numerator.max_j() as i64 + 1;
        let den_s = den.expand_rational(trunc + 2 * v.max(0) + pad)?;
        let inv = den_s.inverse()?;
        let num = self.numerator.expand(trunc + v.max(0) + pad)?;
        let out: Vec<QSeries> = num.iter().map(|s| (s * &inv).truncate(trunc)).collect();
        if let Some(s) = out.iter().find(|s| s.trunc_order() < trunc) {
            return Err(Error::InsufficientTruncation { needed: trunc, have: s.trunc_order() });
        }
        Ok(out)
    }

    pub fn expand_rational(&self, trunc: i64) -> Result<QSeries> {
        if !self.numerator.is_rational() {
            return Err(Error::InvalidArgument("numerator has irrational coefficients".into()));
        }
        Ok(self.expand(trunc)?.swap_remove(0))
    }
}

impl fmt::Display for FormExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator.is_empty() {
            return write!(f, "{}", self.numerator);
        }
        let den: Vec<String> = self
            .denominator
            .iter()
            .map(|(d, e)| {
                let single = d.terms.len() == 1;
                let base = if single { d.to_string() } else { format!("({d})") };
                let needs_paren = single && base.contains('*') && *e > 1;
                let base = if needs_paren { format!("({base})") } else { base };
                if *e == 1 {
                    base
                } else {
                    format!("{base}^{e}")
                }
            })
            .collect();
        write!(f, "({})/({})", self.numerator, den.join("*"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn j_times_delta_is_e4_cubed() {
        let jd = FormPoly::monomial(Monomial { j: 1, delta: 1, ..Default::default() });
        let e4c = FormPoly::monomial(Monomial::new(3, 0, 0));
        assert_eq!(jd.expand_rational(20).unwrap(), e4c.expand_rational(20).unwrap());
    }

    #[test]
    fn quotient_expansion() {
        // -256 Δ / E4² = -256 q + 129024 q² + ...
        let e = FormExpr::new(
            FormPoly::rational(&[(Rational::from(-256), Monomial::new(0, 0, 1))]),
            vec![(FormPoly::gen(Gen::E4), 2)],
        );
        let s = e.expand_rational(3).unwrap();
        assert_eq!(s.coeff(1), -256);
        assert_eq!(s.coeff(2), 129024);
        assert_eq!(e.weight(), Some(4));
        assert_eq!(e.to_string(), "(-256*Delta)/(E4^2)");
    }

    #[test]
    fn display_orders_by_delta_power() {
        let p = FormPoly::rational(&[
            (Rational::from(-64), Monomial::new(3, 0, 1)),
            (Rational::from(196608), Monomial::new(0, 0, 2)),
        ]);
        assert_eq!(p.to_string(), "196608*Delta^2 - 64*E4^3*Delta");
    }
}
