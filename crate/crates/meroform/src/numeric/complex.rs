//! Multiprecision complex numbers over MPFR floats.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Assign, Float};

/// Binary precision needed for `digits` decimal digits plus a guard word.
pub fn bits_for_digits(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 32
}

pub fn pi(bits: u32) -> Float {
    Float::with_val(bits, Constant::Pi)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BigComplex {
    pub re: Float,
    pub im: Float,
}

impl BigComplex {
    pub fn new(re: Float, im: Float) -> Self {
        BigComplex { re, im }
    }

    pub fn zero(bits: u32) -> Self {
        BigComplex { re: Float::new(bits), im: Float::new(bits) }
    }

    pub fn one(bits: u32) -> Self {
        Self::from_real(Float::with_val(bits, 1))
    }

    pub fn i(bits: u32) -> Self {
        BigComplex { re: Float::new(bits), im: Float::with_val(bits, 1) }
    }

    pub fn from_real(re: Float) -> Self {
        let im = Float::new(re.prec());
        BigComplex { re, im }
    }

    pub fn from_f64(bits: u32, re: f64, im: f64) -> Self {
        BigComplex { re: Float::with_val(bits, re), im: Float::with_val(bits, im) }
    }

    pub fn from_parts<R, I>(bits: u32, re: R, im: I) -> Self
    where
        Float: Assign<R> + Assign<I>,
    {
        BigComplex { re: Float::with_val(bits, re), im: Float::with_val(bits, im) }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    /// Copy rounded (or zero-extended) to `bits`.
    pub fn with_prec(&self, bits: u32) -> Self {
        BigComplex { re: Float::with_val(bits, &self.re), im: Float::with_val(bits, &self.im) }
    }

    pub fn conj(&self) -> Self {
        BigComplex { re: self.re.clone(), im: Float::with_val(self.im.prec(), -&self.im) }
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.square_ref()) + Float::with_val(p, self.im.square_ref())
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn abs_f64(&self) -> f64 {
        self.abs().to_f64()
    }

    /// log10 |z|, finite even far outside the f64 range (-inf for zero).
    pub fn log10_abs(&self) -> f64 {
        let a = self.abs();
        if a.is_zero() {
            return f64::NEG_INFINITY;
        }
        Float::with_val(64, a.log10_ref()).to_f64()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn scale(&self, x: &Float) -> Self {
        let p = self.prec();
        BigComplex { re: Float::with_val(p, &self.re * x), im: Float::with_val(p, &self.im * x) }
    }

    pub fn scale_i64(&self, x: i64) -> Self {
        let p = self.prec();
        BigComplex { re: Float::with_val(p, &self.re * x), im: Float::with_val(p, &self.im * x) }
    }

    /// Multiplication by i.
    pub fn mul_i(&self) -> Self {
        BigComplex { re: Float::with_val(self.im.prec(), -&self.im), im: self.re.clone() }
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        let p = self.prec();
        BigComplex {
            re: Float::with_val(p, &self.re / &n),
            im: Float::with_val(p, -Float::with_val(p, &self.im / &n)),
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn powi(&self, e: i64) -> Self {
        if e < 0 {
            return self.recip().powi(-e);
        }
        let mut result = Self::one(self.prec());
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        result
    }

    pub fn exp(&self) -> Self {
        let p = self.prec();
        let r = Float::with_val(p, self.re.exp_ref());
        let (s, c) = Float::with_val(p, &self.im).sin_cos(Float::new(p));
        BigComplex { re: Float::with_val(p, &r * &c), im: r * s }
    }

    /// e^{2πi z}.
    pub fn e2pii(&self) -> Self {
        let p = self.prec();
        let two_pi = pi(p) * 2u32;
        BigComplex::new(
            Float::with_val(p, -&self.im) * &two_pi,
            Float::with_val(p, &self.re) * &two_pi,
        )
        .exp()
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        let p = self.prec();
        if self.is_zero() {
            return Self::zero(p);
        }
        let r = self.abs();
        let t = Float::with_val(p, (Float::with_val(p, &r + &self.re) / 2u32).sqrt_ref());
        if t.is_zero() {
            // negative real axis
            let s = Float::with_val(p, (Float::with_val(p, &r - &self.re) / 2u32).sqrt_ref());
            return BigComplex::new(Float::new(p), s);
        }
        let u = Float::with_val(p, &self.im / &t) / 2u32;
        BigComplex::new(t, u)
    }

    pub fn pow_float(&self, x: &Float) -> Self {
        // z^x = exp(x log z) with the principal logarithm
        let p = self.prec();
        let lr = Float::with_val(p, self.abs().ln_ref());
        let arg = Float::with_val(p, self.im.atan2_ref(&self.re));
        BigComplex::new(lr * x, arg * x).exp()
    }

    /// Decimal rendering with `digits` significant digits per component.
    pub fn to_string_digits(&self, digits: usize) -> String {
        let re = fmt_float(&self.re, digits);
        if self.im.is_zero() {
            return re;
        }
        let im = fmt_float(&Float::with_val(self.im.prec(), self.im.abs_ref()), digits);
        let sign = if self.im.is_sign_negative() { "-" } else { "+" };
        format!("{re} {sign} {im}*i")
    }
}

/// Scientific-notation rendering of an MPFR float to `digits` significant digits.
pub fn fmt_float(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(digits.max(1)))
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_digits(f.precision().unwrap_or(20)))
    }
}

impl Add for &BigComplex {
    type Output = BigComplex;
    fn add(self, rhs: &BigComplex) -> BigComplex {
        let p = self.prec().max(rhs.prec());
        BigComplex { re: Float::with_val(p, &self.re + &rhs.re), im: Float::with_val(p, &self.im + &rhs.im) }
    }
}

impl Sub for &BigComplex {
    type Output = BigComplex;
    fn sub(self, rhs: &BigComplex) -> BigComplex {
        let p = self.prec().max(rhs.prec());
        BigComplex { re: Float::with_val(p, &self.re - &rhs.re), im: Float::with_val(p, &self.im - &rhs.im) }
    }
}

impl Mul for &BigComplex {
    type Output = BigComplex;
    fn mul(self, rhs: &BigComplex) -> BigComplex {
        let p = self.prec().max(rhs.prec());
        let ac = Float::with_val(p, &self.re * &rhs.re);
        let bd = Float::with_val(p, &self.im * &rhs.im);
        let ad = Float::with_val(p, &self.re * &rhs.im);
        let bc = Float::with_val(p, &self.im * &rhs.re);
        BigComplex { re: ac - bd, im: ad + bc }
    }
}

impl Div for &BigComplex {
    type Output = BigComplex;
    fn div(self, rhs: &BigComplex) -> BigComplex {
        self * &rhs.recip()
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex { re: Float::with_val(self.re.prec(), -&self.re), im: Float::with_val(self.im.prec(), -&self.im) }
    }
}

impl std::ops::AddAssign<&BigComplex> for BigComplex {
    fn add_assign(&mut self, rhs: &BigComplex) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl std::ops::SubAssign<&BigComplex> for BigComplex {
    fn sub_assign(&mut self, rhs: &BigComplex) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

/// x^e for a float and integer exponent, kept at the float's precision.
pub fn powi_float(x: &Float, e: i32) -> Float {
    Float::with_val(x.prec(), x.pow(e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const B: u32 = 200;

    #[test]
    fn i_squared() {
        let i = BigComplex::i(B);
        let m = &i * &i;
        assert_eq!(m.re, -1);
        assert!(m.im.is_zero());
    }

    #[test]
    fn division_inverts_multiplication() {
        let a = BigComplex::from_f64(B, 1.5, -2.25);
        let b = BigComplex::from_f64(B, -0.75, 3.0);
        let back = &(&a * &b) / &b;
        assert!((&back - &a).abs_f64() < 1e-55);
    }

    #[test]
    fn euler_identity() {
        let z = BigComplex::from_parts(B, 0, pi(B));
        let e = z.exp();
        assert!((&e + &BigComplex::one(B)).abs_f64() < 1e-55);
    }

    #[test]
    fn sqrt_squares_back() {
        for (re, im) in [(-3.0, 0.0), (2.0, 5.0), (0.0, -1.0), (-1.0, -1e-3)] {
            let z = BigComplex::from_f64(B, re, im);
            let r = z.sqrt();
            assert!(r.re >= 0);
            assert!((&r.square() - &z).abs_f64() < 1e-50);
        }
    }

    #[test]
    fn negative_power() {
        let z = BigComplex::from_f64(B, 0.5, 0.5);
        let p = &z.powi(-3) * &z.powi(3);
        assert!((&p - &BigComplex::one(B)).abs_f64() < 1e-55);
    }
}
