//! Exact elements of Q(θ, s) with θ a root of a class polynomial and
//! s = √m, stored as rational coordinates on the basis {θ^i s^e}.

use std::fmt;
use std::sync::Arc;

use rug::{Float, Integer, Rational};

use super::complex::BigComplex;
use crate::error::{Error, Result};

/// n with every square factor removed.
pub fn squarefree_part(mut n: u64) -> u64 {
    let mut out = 1;
    let mut p = 2;
    while p * p <= n {
        while n.is_multiple_of(p * p) {
            n /= p * p;
        }
        if n.is_multiple_of(p) {
            out *= p;
            n /= p;
        }
        p += 1;
    }
    out * n
}

#[derive(Clone, Debug)]
pub struct HField {
    /// Discriminant the field is attached to (0 for plain Q).
    pub d: i64,
    /// Monic minimal polynomial of θ, coefficients from the constant term up.
    pub minpoly: Vec<Integer>,
    /// s² = surd; 1 means no surd component.
    pub surd: u64,
    /// Numeric value of θ used for embeddings.
    pub theta: BigComplex,
}

impl PartialEq for HField {
    fn eq(&self, other: &Self) -> bool {
        self.d == other.d && self.minpoly == other.minpoly && self.surd == other.surd
    }
}

impl HField {
    pub fn rationals() -> Arc<HField> {
        Arc::new(HField {
            d: 0,
            minpoly: vec![Integer::new(), Integer::from(1)],
            surd: 1,
            theta: BigComplex::zero(64),
        })
    }

    /// Q(√m) labelled by the discriminant `d`.
    pub fn quadratic(d: i64, m: u64) -> Arc<HField> {
        Arc::new(HField {
            d,
            minpoly: vec![Integer::new(), Integer::from(1)],
            surd: m,
            theta: BigComplex::zero(64),
        })
    }

    /// Q(θ, √|d|) with θ a root of `minpoly` whose numeric value is `theta`.
    /// The surd is stored squarefree, so Q(√4) collapses to Q.
    pub fn class_field(d: i64, minpoly: Vec<Integer>, theta: BigComplex) -> Arc<HField> {
        let surd = squarefree_part(d.unsigned_abs());
        Arc::new(HField { d, minpoly, surd, theta })
    }

    pub fn degree_theta(&self) -> usize {
        self.minpoly.len() - 1
    }

    fn surd_dim(&self) -> usize {
        if self.surd == 1 {
            1
        } else {
            2
        }
    }

    pub fn dim(&self) -> usize {
        self.degree_theta() * self.surd_dim()
    }

    /// Numeric values of the basis elements θ^i s^e, ordered (i, e) lexicographically.
    pub fn basis_values(&self, bits: u32) -> Vec<BigComplex> {
        let theta = self.theta.with_prec(bits);
        let s = Float::with_val(bits, self.surd).sqrt();
        let mut out = Vec::with_capacity(self.dim());
        let mut tp = BigComplex::one(bits);
        for _ in 0..self.degree_theta() {
            out.push(tp.clone());
            if self.surd_dim() == 2 {
                out.push(tp.scale(&s));
            }
            tp = &tp * &theta;
        }
        out
    }

    pub fn basis_labels(&self) -> Vec<String> {
        let mut out = Vec::new();
        for i in 0..self.degree_theta() {
            let t = match i {
                0 => String::new(),
                1 => "j_A".to_string(),
                _ => format!("j_A^{i}"),
            };
            out.push(t.clone());
            if self.surd_dim() == 2 {
                let s = format!("sqrt({})", self.surd);
                out.push(if t.is_empty() { s } else { format!("{t}*{s}") });
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct HNumber {
    pub field: Arc<HField>,
    pub coords: Vec<Rational>,
}

impl PartialEq for HNumber {
    fn eq(&self, other: &Self) -> bool {
        match unify(self, other) {
            Ok((a, b)) => a.coords == b.coords,
            Err(_) => false,
        }
    }
}

fn unify(a: &HNumber, b: &HNumber) -> Result<(HNumber, HNumber)> {
    if a.field == b.field {
        return Ok((a.clone(), b.clone()));
    }
    if let Some(r) = a.to_rational() {
        return Ok((HNumber::from_rational(&b.field, r), b.clone()));
    }
    if let Some(r) = b.to_rational() {
        return Ok((a.clone(), HNumber::from_rational(&a.field, r)));
    }
    Err(Error::InvalidArgument("elements of different class fields".into()))
}

impl HNumber {
    pub fn zero(field: &Arc<HField>) -> Self {
        HNumber { field: field.clone(), coords: vec![Rational::new(); field.dim()] }
    }

    pub fn from_rational(field: &Arc<HField>, r: Rational) -> Self {
        let mut z = Self::zero(field);
        z.coords[0] = r;
        z
    }

    pub fn rational(r: Rational) -> Self {
        Self::from_rational(&HField::rationals(), r)
    }

    pub fn integer(n: i64) -> Self {
        Self::rational(Rational::from(n))
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.cmp0().is_eq())
    }

    pub fn to_rational(&self) -> Option<Rational> {
        if self.coords.iter().skip(1).all(|c| c.cmp0().is_eq()) {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    pub fn embed(&self, bits: u32) -> BigComplex {
        let mut acc = BigComplex::zero(bits);
        for (c, b) in self.coords.iter().zip(self.field.basis_values(bits)) {
            if c.cmp0().is_ne() {
                acc += &b.scale(&Float::with_val(bits, c));
            }
        }
        acc
    }

    pub fn add(&self, other: &HNumber) -> Result<HNumber> {
        let (a, b) = unify(self, other)?;
        let coords = a.coords.iter().zip(&b.coords).map(|(x, y)| Rational::from(x + y)).collect();
        Ok(HNumber { field: a.field, coords })
    }

    pub fn neg(&self) -> HNumber {
        HNumber { field: self.field.clone(), coords: self.coords.iter().map(|c| Rational::from(-c)).collect() }
    }

    pub fn sub(&self, other: &HNumber) -> Result<HNumber> {
        self.add(&other.neg())
    }

    pub fn scale(&self, r: &Rational) -> HNumber {
        HNumber { field: self.field.clone(), coords: self.coords.iter().map(|c| Rational::from(c * r)).collect() }
    }

    pub fn mul(&self, other: &HNumber) -> Result<HNumber> {
        let (a, b) = unify(self, other)?;
        let f = &a.field;
        let h = f.degree_theta();
        let sd = f.surd_dim();
        // product as polynomial in θ with coefficients in Q(s), degree < 2h
        let mut prod = vec![[Rational::new(), Rational::new()]; 2 * h - 1];
        for i in 0..h {
            for e in 0..sd {
                let x = &a.coords[i * sd + e];
                if x.cmp0().is_eq() {
                    continue;
                }
                for j in 0..h {
                    for g in 0..sd {
                        let y = &b.coords[j * sd + g];
                        if y.cmp0().is_eq() {
                            continue;
                        }
                        let mut t = Rational::from(x * y);
                        let mut idx = e + g;
                        if idx == 2 {
                            t *= f.surd;
                            idx = 0;
                        }
                        prod[i + j][idx] += t;
                    }
                }
            }
        }
        // reduce θ^n for n ≥ h using the monic minimal polynomial
        for n in (h..prod.len()).rev() {
            let top = std::mem::take(&mut prod[n]);
            for (k, m) in f.minpoly.iter().take(h).enumerate() {
                for idx in 0..2 {
                    if top[idx].cmp0().is_ne() {
                        prod[n - h + k][idx] -= Rational::from(&top[idx] * m);
                    }
                }
            }
        }
        let mut coords = vec![Rational::new(); f.dim()];
        for i in 0..h {
            for e in 0..sd {
                coords[i * sd + e] = prod[i][e].clone();
            }
        }
        Ok(HNumber { field: a.field.clone(), coords })
    }

    pub fn pow(&self, e: u32) -> Result<HNumber> {
        let mut r = HNumber::from_rational(&self.field, Rational::from(1));
        for _ in 0..e {
            r = r.mul(self)?;
        }
        Ok(r)
    }

    /// Coordinates as "n/d" strings.
    pub fn coord_strings(&self) -> Vec<String> {
        self.coords.iter().map(|c| format!("{}/{}", c.numer(), c.denom())).collect()
    }
}

impl fmt::Display for HNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels = self.field.basis_labels();
        let mut parts = Vec::new();
        for (c, l) in self.coords.iter().zip(&labels) {
            if c.cmp0().is_eq() {
                continue;
            }
            parts.push(if l.is_empty() {
                c.to_string()
            } else if *c == 1 {
                l.clone()
            } else if *c == -1 {
                format!("-{l}")
            } else {
                format!("{c}*{l}")
            });
        }
        match parts.len() {
            0 => write!(f, "0"),
            1 => write!(f, "{}", parts[0]),
            _ => write!(f, "({})", parts.join(" + ").replace("+ -", "- ")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squarefree_parts() {
        let got: Vec<u64> = [1, 3, 4, 8, 12, 23, 72, 300].iter().map(|&n| squarefree_part(n)).collect();
        assert_eq!(got, vec![1, 3, 1, 2, 3, 23, 2, 3]);
    }

    #[test]
    fn surd_squares_to_radicand() {
        let f = HField::quadratic(-3, 3);
        let s = HNumber { field: f.clone(), coords: vec![Rational::new(), Rational::from(1)] };
        assert_eq!(s.mul(&s).unwrap().to_rational(), Some(Rational::from(3)));
    }

    #[test]
    fn theta_reduction_uses_minpoly() {
        // θ² = 2 (minpoly X² - 2), no surd
        let f = Arc::new(HField {
            d: -8,
            minpoly: vec![Integer::from(-2), Integer::new(), Integer::from(1)],
            surd: 1,
            theta: BigComplex::from_f64(128, 2f64.sqrt(), 0.0),
        });
        let t = HNumber { field: f.clone(), coords: vec![Rational::new(), Rational::from(1)] };
        let t3 = t.pow(3).unwrap();
        assert_eq!(t3.coords, vec![Rational::new(), Rational::from(2)]);
        let num = t3.embed(128).re.to_f64();
        assert!((num - 2.0 * 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn rationals_mix_with_any_field() {
        let f = HField::quadratic(-3, 3);
        let s = HNumber { field: f, coords: vec![Rational::from(1), Rational::from(1)] };
        let two = HNumber::integer(2);
        let p = s.mul(&two).unwrap();
        assert_eq!(p.coords, vec![Rational::from(2), Rational::from(2)]);
        assert_eq!(p.to_string(), "(2 + 2*sqrt(3))");
    }
}
