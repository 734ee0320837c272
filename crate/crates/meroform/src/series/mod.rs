//! Truncated Laurent series in q with exact rational coefficients.
//!
//! A [`QSeries`] knows its coefficients for every exponent below
//! `trunc_order`; everything from there on is the `O(q^trunc_order)` tail.
//! Each operation derives the truncation of its result from the
//! valuations and truncations of its inputs instead of trusting a caller.

mod expr;
mod forms;

pub use expr::{FormExpr, FormPoly, Gen, Monomial};
pub use forms::{
    borcherds_obstruction, canonical_form, cusp_basis, cusp_dim, hecke_on_series,
    modular_basis, weakly_holomorphic, weight_triple, CanonicalForm, Obstruction, WeightTriple,
};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::{Assign, Complete, Integer, Rational};
use serde_json::{json, Value};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    // coeffs[i] is the coefficient of q^(start + i); start is the valuation
    // unless the series is zero to its precision, in which case start == trunc.
    start: i64,
    coeffs: Vec<Rational>,
    trunc: i64,
}

impl QSeries {
    /// `O(q^trunc)`.
    pub fn zero(trunc: i64) -> Self {
        QSeries { start: trunc, coeffs: Vec::new(), trunc }
    }

    pub fn one(trunc: i64) -> Self {
        Self::monomial(Rational::from(1), 0, trunc)
    }

    pub fn monomial(c: Rational, e: i64, trunc: i64) -> Self {
        if e >= trunc {
            return Self::zero(trunc);
        }
        Self::from_coeffs(e, vec![c], trunc)
    }

    /// Builds a series whose coefficient of q^(start+i) is `coeffs[i]`.
    /// Entries at or beyond `trunc` are dropped, missing ones are zero.
    pub fn from_coeffs(start: i64, mut coeffs: Vec<Rational>, trunc: i64) -> Self {
        let start = start.min(trunc);
        coeffs.resize((trunc - start) as usize, Rational::new());
        let mut s = QSeries { start, coeffs, trunc };
        s.normalize();
        s
    }

    pub fn from_integers(start: i64, coeffs: &[i64], trunc: i64) -> Self {
        Self::from_coeffs(start, coeffs.iter().map(|&c| Rational::from(c)).collect(), trunc)
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().take_while(|c| c.cmp0().is_eq()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.start += lead as i64;
        }
    }

    /// Smallest exponent with a nonzero coefficient; `trunc_order` for a
    /// series that vanishes to its precision.
    pub fn valuation(&self) -> i64 {
        self.start
    }

    pub fn trunc_order(&self) -> i64 {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of q^e. Panics when `e` lies in the unknown tail.
    pub fn coeff(&self, e: i64) -> Rational {
        assert!(e < self.trunc, "coefficient of q^{e} is beyond O(q^{})", self.trunc);
        if e < self.start {
            Rational::new()
        } else {
            self.coeffs[(e - self.start) as usize].clone()
        }
    }

    pub fn coeff_ref(&self, e: i64) -> Option<&Rational> {
        if e < self.start || e >= self.trunc {
            None
        } else {
            Some(&self.coeffs[(e - self.start) as usize])
        }
    }

    /// Nonzero terms in ascending order of exponent.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        let start = self.start;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.cmp0().is_ne())
            .map(move |(i, c)| (start + i as i64, c))
    }

    pub fn truncate(&self, trunc: i64) -> Self {
        if trunc >= self.trunc {
            return self.clone();
        }
        let keep = (trunc - self.start).max(0) as usize;
        Self::from_coeffs(self.start, self.coeffs[..keep.min(self.coeffs.len())].to_vec(), trunc)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.cmp0().is_eq() {
            return Self::zero(self.trunc);
        }
        QSeries {
            start: self.start,
            coeffs: self.coeffs.iter().map(|x| Rational::from(x * c)).collect(),
            trunc: self.trunc,
        }
    }

    /// Multiplication by q^e.
    pub fn shift(&self, e: i64) -> Self {
        QSeries { start: self.start + e, coeffs: self.coeffs.clone(), trunc: self.trunc + e }
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroLeading);
        }
        let v = self.start;
        let n = self.coeffs.len();
        let h0_inv = Rational::from(self.coeffs[0].recip_ref());
        let mut g: Vec<Rational> = Vec::with_capacity(n);
        g.push(h0_inv.clone());
        for m in 1..n {
            let mut acc = Rational::new();
            for i in 1..=m {
                if self.coeffs[i].cmp0().is_ne() {
                    acc += Rational::from(&self.coeffs[i] * &g[m - i]);
                }
            }
            acc *= &h0_inv;
            g.push(-acc);
        }
        Ok(QSeries { start: -v, coeffs: g, trunc: n as i64 - v })
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return self.inverse()?.pow(-e);
        }
        let n = self.trunc - self.start;
        let mut result = Self::one(n);
        if e == 0 {
            return Ok(result);
        }
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(result)
    }

    pub fn div(&self, other: &QSeries) -> Result<Self> {
        Ok(self * &other.inverse()?)
    }

    /// JSON form `{"valuation", "trunc_order", "coeffs": [[e, "n/d"], ...]}`.
    pub fn to_json(&self) -> Value {
        let coeffs: Vec<Value> = self
            .terms()
            .map(|(e, c)| json!([e, format!("{}/{}", c.numer(), c.denom())]))
            .collect();
        json!({ "valuation": self.valuation(), "trunc_order": self.trunc, "coeffs": coeffs })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::InvalidArgument(format!("series JSON: {what}"));
        let trunc = v["trunc_order"].as_i64().ok_or_else(|| bad("trunc_order"))?;
        let val = v["valuation"].as_i64().ok_or_else(|| bad("valuation"))?;
        let mut coeffs = vec![Rational::new(); (trunc - val).max(0) as usize];
        for item in v["coeffs"].as_array().ok_or_else(|| bad("coeffs"))? {
            let e = item[0].as_i64().ok_or_else(|| bad("exponent"))?;
            let s = item[1].as_str().ok_or_else(|| bad("coefficient"))?;
            let c = Rational::parse(s).map_err(|_| bad(s))?;
            if e < val || e >= trunc {
                return Err(bad("exponent outside [valuation, trunc_order)"));
            }
            coeffs[(e - val) as usize] = Rational::from(c);
        }
        Ok(Self::from_coeffs(val, coeffs, trunc))
    }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        let trunc = self.trunc.min(rhs.trunc);
        let start = self.start.min(rhs.start).min(trunc);
        let mut coeffs = vec![Rational::new(); (trunc - start) as usize];
        for s in [self, rhs] {
            for (i, c) in s.coeffs.iter().enumerate() {
                let e = s.start + i as i64;
                if e >= trunc {
                    break;
                }
                coeffs[(e - start) as usize] += c;
            }
        }
        QSeries::from_coeffs(start, coeffs, trunc)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries {
            start: self.start,
            coeffs: self.coeffs.iter().map(|c| Rational::from(-c)).collect(),
            trunc: self.trunc,
        }
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        self + &(-rhs)
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        // f = q^va (known to ta), g = q^vb (known to tb): the product is
        // known exactly below min(ta + vb, tb + va).
        let trunc = (self.trunc + rhs.start).min(rhs.trunc + self.start);
        let start = (self.start + rhs.start).min(trunc);
        let len = (trunc - start) as usize;
        let mut coeffs = vec![Rational::new(); len];
        let mut tmp = Rational::new();
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len {
                break;
            }
            if a.cmp0().is_eq() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(len - i).enumerate() {
                if b.cmp0().is_ne() {
                    tmp.assign(a * b);
                    coeffs[i + j] += &tmp;
                }
            }
        }
        QSeries::from_coeffs(start, coeffs, trunc)
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            let neg = c.cmp0().is_lt();
            let abs = Rational::from(c.abs_ref());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let unit = abs == 1;
            match e {
                0 => write!(f, "{abs}")?,
                _ => {
                    if !unit {
                        write!(f, "{abs}*")?;
                    }
                    if e == 1 {
                        write!(f, "q")?;
                    } else {
                        write!(f, "q^{e}")?;
                    }
                }
            }
        }
        if !first {
            write!(f, " + ")?;
        }
        write!(f, "O(q^{})", self.trunc)
    }
}

/// σ_k(n) for 0 ≤ n < len (σ_k(0) is set to 0).
pub(crate) fn divisor_sums(k: u32, len: usize) -> Vec<Integer> {
    let mut sig = vec![Integer::new(); len];
    for d in 1..len {
        let dk = Integer::u_pow_u(d as u32, k).complete();
        let mut m = d;
        while m < len {
            sig[m] += &dk;
            m += d;
        }
    }
    sig
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(start: i64, c: &[i64], trunc: i64) -> QSeries {
        QSeries::from_integers(start, c, trunc)
    }

    #[test]
    fn product_of_binomials() {
        let a = s(0, &[1, 1], 10);
        let b = s(0, &[1, -1], 10);
        assert_eq!(&a * &b, s(0, &[1, 0, -1], 10));
    }

    #[test]
    fn geometric_inverse() {
        let inv = s(0, &[1, -1], 8).inverse().unwrap();
        assert_eq!(inv, s(0, &[1; 8], 8));
    }

    #[test]
    fn inverse_shifts_truncation_with_valuation() {
        // q + q^2 known below q^5: 1/(q(1+q)) = q^-1 - 1 + q - q^2 + O(q^3)
        let inv = s(1, &[1, 1], 5).inverse().unwrap();
        assert_eq!(inv.valuation(), -1);
        assert_eq!(inv.trunc_order(), 3);
        assert_eq!(inv, s(-1, &[1, -1, 1, -1], 3));
    }

    #[test]
    fn zero_series_cannot_be_inverted() {
        assert!(matches!(QSeries::zero(5).inverse(), Err(Error::ZeroLeading)));
    }

    #[test]
    fn product_truncation_is_tightest() {
        let a = s(2, &[1], 6); // q^2 + O(q^6)
        let b = s(-1, &[3], 4); // 3q^-1 + O(q^4)
        let p = &a * &b;
        assert_eq!(p.trunc_order(), 5);
        assert_eq!(p, s(1, &[3], 5));
    }

    #[test]
    fn addition_takes_min_truncation() {
        let p = &s(0, &[1, 2, 3], 3) + &s(0, &[1], 2);
        assert_eq!(p, s(0, &[2, 2], 2));
    }

    #[test]
    fn cancellation_moves_valuation() {
        let p = &s(0, &[1, 2], 5) - &s(0, &[1], 5);
        assert_eq!(p.valuation(), 1);
    }

    #[test]
    fn negative_power() {
        let f = s(0, &[1, -1], 6);
        assert_eq!(f.pow(-2).unwrap(), s(0, &[1, 2, 3, 4, 5, 6], 6));
    }

    #[test]
    fn json_round_trip() {
        let f = QSeries::from_coeffs(-1, vec![Rational::from((1, 3)), Rational::new(), Rational::from(-7)], 4);
        let v = f.to_json();
        assert_eq!(v["coeffs"][0][1], "1/3");
        assert_eq!(QSeries::from_json(&v).unwrap(), f);
    }

    #[test]
    fn display() {
        let f = s(-1, &[1, 744, 196884], 2);
        assert_eq!(f.to_string(), "q^-1 + 744 + 196884*q + O(q^2)");
    }

    #[test]
    fn sigma_values() {
        let s3 = divisor_sums(3, 7);
        assert_eq!(s3[6], 1 + 8 + 27 + 216);
    }
}
