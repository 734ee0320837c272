//! Integral binary quadratic forms of negative discriminant.

use std::fmt;

use rug::Float;

use crate::error::{Error, Result};
use crate::numeric::complex::BigComplex;

/// a·x² + b·xy + c·y².
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bqf {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

/// Integer 2×2 matrix [[α, β], [γ, δ]].
pub type Mat2 = [[i64; 2]; 2];

pub const IDENTITY: Mat2 = [[1, 0], [0, 1]];

pub fn mat_mul(x: &Mat2, y: &Mat2) -> Mat2 {
    [
        [x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]],
        [x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]],
    ]
}

impl Bqf {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        Bqf { a, b, c }
    }

    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn content(&self) -> i64 {
        gcd(gcd(self.a, self.b), self.c).abs()
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == 1
    }

    /// (f∘M)(x, y) = f(αx + βy, γx + δy).
    pub fn transform(&self, m: &Mat2) -> Bqf {
        let (al, be, ga, de) = (m[0][0], m[0][1], m[1][0], m[1][1]);
        let Bqf { a, b, c } = *self;
        Bqf {
            a: a * al * al + b * al * ga + c * ga * ga,
            b: 2 * a * al * be + b * (al * de + be * ga) + 2 * c * ga * de,
            c: a * be * be + b * be * de + c * de * de,
        }
    }

    pub fn is_reduced(&self) -> bool {
        let Bqf { a, b, c } = *self;
        b.abs() <= a && a <= c && !((b.abs() == a || a == c) && b < 0)
    }

    /// The root (−b + √D)/(2a) in the upper half plane.
    pub fn root(&self, bits: u32) -> BigComplex {
        let two_a = Float::with_val(bits, 2 * self.a);
        let re = Float::with_val(bits, -self.b) / &two_a;
        let im = Float::with_val(bits, self.disc().unsigned_abs()).sqrt() / &two_a;
        BigComplex::new(re, im)
    }
}

impl fmt::Display for Bqf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]", self.a, self.b, self.c)
    }
}

impl std::str::FromStr for Bqf {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().trim_matches(|c| c == '[' || c == ']').split(',').collect();
        let bad = || Error::InvalidArgument(format!("expected a,b,c but got {s:?}"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let v: Vec<i64> = parts.iter().map(|p| p.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?;
        Ok(Bqf::new(v[0], v[1], v[2]))
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn is_discriminant(d: i64) -> bool {
    d < 0 && (d.rem_euclid(4) == 0 || d.rem_euclid(4) == 1)
}

fn check_disc(d: i64) -> Result<()> {
    if is_discriminant(d) {
        Ok(())
    } else {
        Err(Error::NotDiscriminant(d))
    }
}

fn squarefree(mut n: u64) -> bool {
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p * p) {
            return false;
        }
        if n.is_multiple_of(p) {
            n /= p;
        }
        p += 1;
    }
    true
}

pub fn is_fundamental(d: i64) -> bool {
    if !is_discriminant(d) {
        return false;
    }
    if d.rem_euclid(4) == 1 {
        return squarefree(d.unsigned_abs());
    }
    let m = d / 4;
    (m.rem_euclid(4) == 2 || m.rem_euclid(4) == 3) && squarefree(m.unsigned_abs())
}

/// All g ≥ 1 with g² | D and D/g² again a discriminant, ascending.
pub fn square_divisors(d: i64) -> Vec<i64> {
    let n = d.unsigned_abs() as i64;
    (1..).take_while(|g| g * g <= n).filter(|g| d % (g * g) == 0 && is_discriminant(d / (g * g))).collect()
}

/// ∏ p^{⌊v_p(D)/2⌋}: bounds the number of square roots of D modulo prime powers.
pub fn square_cofactor(d: i64) -> u64 {
    let mut n = d.unsigned_abs();
    let mut out = 1;
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        out *= p.pow(e / 2);
        p += 1;
    }
    out
}

/// Gauss reduction. Returns the reduced form g and M ∈ SL₂(ℤ) with f∘M = g;
/// the root of f is then M applied to the root of g.
pub fn reduce_form(f: &Bqf) -> Result<(Bqf, Mat2)> {
    if f.disc() >= 0 || f.a <= 0 {
        return Err(Error::InvalidArgument(format!("{f} is not positive definite")));
    }
    let mut g = *f;
    let mut m = IDENTITY;
    loop {
        // translate b into (−a, a]
        let two_a = 2 * g.a;
        let n = (g.a - g.b).div_euclid(two_a);
        if n != 0 {
            let t = [[1, n], [0, 1]];
            g = g.transform(&t);
            m = mat_mul(&m, &t);
        }
        if g.a > g.c {
            let s = [[0, -1], [1, 0]];
            g = g.transform(&s);
            m = mat_mul(&m, &s);
            continue;
        }
        if g.a == g.c && g.b < 0 {
            let s = [[0, -1], [1, 0]];
            g = g.transform(&s);
            m = mat_mul(&m, &s);
        }
        return Ok((g, m));
    }
}

/// Reduced forms of discriminant `d`, optionally only the primitive ones,
/// ordered by (a, b).
pub fn class_representatives(d: i64, primitive_only: bool) -> Result<Vec<Bqf>> {
    check_disc(d)?;
    let n = -d;
    let mut out = Vec::new();
    let mut a = 1;
    while 3 * a * a <= n {
        for b in -a + 1..=a {
            if (b - d).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            let f = Bqf::new(a, b, c);
            if !primitive_only || f.is_primitive() {
                out.push(f);
            }
        }
        a += 1;
    }
    Ok(out)
}

pub fn class_number(d: i64) -> Result<usize> {
    Ok(class_representatives(d, true)?.len())
}

/// Number of units of the order of discriminant D, divided by 2.
pub fn unit_w(d: i64) -> u32 {
    match d {
        -3 => 3,
        -4 => 2,
        _ => 1,
    }
}

/// Jacobi symbol (a | n) for odd n > 0.
pub fn jacobi(a: i64, n: i64) -> i32 {
    assert!(n > 0 && n % 2 == 1);
    let (mut a, mut n) = (a.rem_euclid(n), n);
    let mut t = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Kronecker symbol (D | n) for n ≥ 1.
pub fn kronecker(d: i64, n: u64) -> i32 {
    assert!(n >= 1);
    let mut n = n as i64;
    let mut t = 1;
    let k2 = if d % 2 == 0 {
        0
    } else if matches!(d.rem_euclid(8), 1 | 7) {
        1
    } else {
        -1
    };
    while n % 2 == 0 {
        n /= 2;
        t *= k2;
    }
    t * jacobi(d, n)
}

/// A CM point together with the form it comes from.
#[derive(Clone, Debug)]
pub struct CmPoint {
    pub form: Bqf,
    pub value: BigComplex,
}

impl CmPoint {
    /// Exact description (−b + √D)/(2a) as (b, a, D).
    pub fn surd(&self) -> (i64, i64, i64) {
        (self.form.b, self.form.a, self.form.disc())
    }
}

pub fn cm_point(f: &Bqf, bits: u32) -> Result<CmPoint> {
    if f.disc() >= 0 || f.a <= 0 {
        return Err(Error::InvalidArgument(format!("{f} is not positive definite")));
    }
    Ok(CmPoint { form: *f, value: f.root(bits) })
}

// ---------------------------------------------------------------------------
// square roots of D modulo 4a

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    r
}

/// Square roots of n modulo an odd prime p (n a unit).
fn sqrt_mod_prime(n: u64, p: u64) -> Option<u64> {
    let n = n % p;
    if p == 2 || n == 0 {
        return Some(n);
    }
    if mod_pow(n, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(mod_pow(n, (p + 1) / 4, p));
    }
    // Tonelli–Shanks
    let (mut q, mut s) = (p - 1, 0);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while mod_pow(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = mod_pow(z, q, p);
    let mut t = mod_pow(n, q, p);
    let mut r = mod_pow(n, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = (tt as u128 * tt as u128 % p as u128) as u64;
            i += 1;
        }
        let b = mod_pow(c, 1 << (m - i - 1), p);
        m = i;
        c = (b as u128 * b as u128 % p as u128) as u64;
        t = (t as u128 * c as u128 % p as u128) as u64;
        r = (r as u128 * b as u128 % p as u128) as u64;
    }
    Some(r)
}

/// All x mod p^e with x² ≡ d (mod p^e).
fn sqrt_mod_prime_power(d: i64, p: u64, e: u32) -> Vec<u64> {
    let target = |m: u64| d.rem_euclid(m as i64) as u64;
    let mut roots: Vec<u64> = if p == 2 || target(p) == 0 || p < 64 {
        (0..p).filter(|&x| (x * x) % p == target(p)).collect()
    } else {
        match sqrt_mod_prime(target(p), p) {
            Some(r) => vec![r, p - r],
            None => Vec::new(),
        }
    };
    let mut modulus = p;
    for _ in 1..e {
        let next = modulus * p;
        let t = target(next);
        let mut lifted = Vec::new();
        for &x in &roots {
            for k in 0..p {
                let y = x + k * modulus;
                if (y as u128 * y as u128 % next as u128) as u64 == t {
                    lifted.push(y);
                }
            }
        }
        roots = lifted;
        modulus = next;
        if roots.is_empty() {
            break;
        }
    }
    roots.sort_unstable();
    roots.dedup();
    roots
}

fn factorize(mut n: u64, spf: Option<&[u32]>) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    let push = |p: u64, out: &mut Vec<(u64, u32)>| match out.last_mut() {
        Some((q, e)) if *q == p => *e += 1,
        _ => out.push((p, 1)),
    };
    if let Some(spf) = spf {
        if (n as usize) < spf.len() {
            while n > 1 {
                let p = spf[n as usize] as u64;
                push(p, &mut out);
                n /= p;
            }
            return out;
        }
    }
    let mut p = 2;
    while p * p <= n {
        while n.is_multiple_of(p) {
            push(p, &mut out);
            n /= p;
        }
        p += 1;
    }
    if n > 1 {
        push(n, &mut out);
    }
    out
}

/// Residues b in [0, 2a) with b² ≡ D (mod 4a), ascending.
pub fn roots_mod_4a(d: i64, a: u64) -> Vec<i64> {
    roots_with(d, a, None)
}

fn roots_with(d: i64, a: u64, spf: Option<&[u32]>) -> Vec<i64> {
    let mut parts = factorize(a, spf);
    match parts.first_mut() {
        Some((2, e)) => *e += 2,
        _ => parts.insert(0, (2, 2)),
    }
    // CRT-combine the prime-power root sets
    let mut sols: Vec<u64> = vec![0];
    let mut modulus: u64 = 1;
    for (p, e) in parts {
        let pe = p.pow(e);
        let rs = sqrt_mod_prime_power(d, p, e);
        if rs.is_empty() {
            return Vec::new();
        }
        // x ≡ s (mod modulus), x ≡ r (mod pe)
        let inv = mod_inverse(modulus % pe, pe);
        let next = modulus * pe;
        let mut combined = Vec::with_capacity(sols.len() * rs.len());
        for &s in &sols {
            for &r in &rs {
                let diff = (r as i128 - s as i128).rem_euclid(pe as i128) as u128;
                let k = (diff * inv as u128 % pe as u128) as u64;
                combined.push(s + modulus * k);
            }
        }
        sols = combined;
        modulus = next;
    }
    let two_a = 2 * a;
    let mut out: Vec<i64> = sols.into_iter().map(|x| (x % two_a) as i64).collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    old_s.rem_euclid(m as i128) as u64
}

/// Root tables for every a ≤ a_max, sharing a smallest-prime-factor sieve.
pub struct RootTable {
    d: i64,
    spf: Vec<u32>,
}

impl RootTable {
    pub fn new(d: i64, a_max: u64) -> Self {
        let n = a_max as usize + 1;
        let mut spf = vec![0u32; n];
        for i in 2..n {
            if spf[i] == 0 {
                let mut j = i;
                while j < n {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        RootTable { d, spf }
    }

    pub fn roots(&self, a: u64) -> Vec<i64> {
        roots_with(self.d, a, Some(&self.spf))
    }
}

/// Every form (a, b, c) of discriminant D with 1 ≤ a ≤ a_max and b in the
/// inclusive window `b_window`, ordered by a then b. Imprimitive forms included.
pub fn enumerate_forms(d: i64, a_max: u64, b_window: (i64, i64)) -> Result<impl Iterator<Item = Bqf>> {
    check_disc(d)?;
    let table = RootTable::new(d, a_max);
    Ok((1..=a_max).flat_map(move |a| {
        let two_a = 2 * a as i64;
        let (lo, hi) = b_window;
        let mut forms = Vec::new();
        for r in table.roots(a) {
            let mut b = r + (lo - r).div_euclid(two_a) * two_a;
            if b < lo {
                b += two_a;
            }
            while b <= hi {
                forms.push(Bqf::new(a as i64, b, (b * b - d) / (4 * a as i64)));
                b += two_a;
            }
        }
        forms.sort();
        forms.into_iter()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_examples() {
        assert_eq!(reduce_form(&Bqf::new(1, 1, 1)).unwrap(), (Bqf::new(1, 1, 1), IDENTITY));
        assert_eq!(reduce_form(&Bqf::new(3, 3, 1)).unwrap().0, Bqf::new(1, 1, 1));
        assert_eq!(reduce_form(&Bqf::new(2, 2, 3)).unwrap(), (Bqf::new(2, 2, 3), IDENTITY));
    }

    #[test]
    fn reduction_tie_rules() {
        assert_eq!(reduce_form(&Bqf::new(2, -2, 3)).unwrap().0, Bqf::new(2, 2, 3));
        assert_eq!(reduce_form(&Bqf::new(2, -1, 2)).unwrap().0, Bqf::new(2, 1, 2));
    }

    #[test]
    fn reduction_rejects_indefinite() {
        assert!(reduce_form(&Bqf::new(1, 3, 1)).is_err());
    }

    #[test]
    fn class_lists() {
        assert_eq!(class_representatives(-3, true).unwrap(), vec![Bqf::new(1, 1, 1)]);
        assert_eq!(class_representatives(-4, true).unwrap(), vec![Bqf::new(1, 0, 1)]);
        assert_eq!(
            class_representatives(-23, true).unwrap(),
            vec![Bqf::new(1, 1, 6), Bqf::new(2, -1, 3), Bqf::new(2, 1, 3)]
        );
        assert_eq!(class_representatives(-12, false).unwrap(), vec![Bqf::new(1, 0, 3), Bqf::new(2, 2, 2)]);
        assert!(class_representatives(-5, true).is_err());
    }

    #[test]
    fn kronecker_values() {
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(-7, 2), 1);
        assert_eq!(kronecker(-4, 2), 0);
        assert_eq!(kronecker(-23, 1), 1);
        assert_eq!(kronecker(-3, 7), 1);
        assert_eq!(kronecker(-3, 5), -1);
        assert_eq!(kronecker(-3, 3), 0);
    }

    #[test]
    fn units() {
        assert_eq!((unit_w(-3), unit_w(-4), unit_w(-23)), (3, 2, 1));
    }

    #[test]
    fn fundamental_discriminants() {
        let f: Vec<i64> = (1..=24).map(|n| -n).filter(|&d| is_fundamental(d)).collect();
        assert_eq!(f, vec![-3, -4, -7, -8, -11, -15, -19, -20, -23, -24]);
        assert_eq!(square_divisors(-12), vec![1, 2]);
        assert_eq!(square_divisors(-48), vec![1, 2, 4]);
        assert_eq!(square_divisors(-4), vec![1]);
        assert_eq!(square_cofactor(-48), 4);
    }

    #[test]
    fn roots_examples() {
        assert_eq!(roots_mod_4a(-3, 1), vec![1]);
        assert_eq!(roots_mod_4a(-4, 1), vec![0]);
        assert_eq!(roots_mod_4a(-4, 2), vec![2]);
        assert_eq!(roots_mod_4a(-3, 3), vec![3]);
        assert_eq!(roots_mod_4a(-3, 7), vec![5, 9]);
        assert_eq!(roots_mod_4a(-3, 2), Vec::<i64>::new());
    }

    #[test]
    fn enumerate_small_windows() {
        let f: Vec<Bqf> = enumerate_forms(-3, 1, (-1, 3)).unwrap().collect();
        assert_eq!(f, vec![Bqf::new(1, -1, 1), Bqf::new(1, 1, 1), Bqf::new(1, 3, 3)]);
        let f: Vec<Bqf> = enumerate_forms(-12, 2, (0, 3)).unwrap().filter(|f| f.a == 2).collect();
        assert_eq!(f, vec![Bqf::new(2, 2, 2)]);
    }

    #[test]
    fn cm_point_of_form() {
        let p = cm_point(&Bqf::new(2, 1, 3), 128).unwrap();
        assert!((p.value.re.to_f64() + 0.25).abs() < 1e-15);
        assert!((p.value.im.to_f64() - 23f64.sqrt() / 4.0).abs() < 1e-15);
        assert_eq!(p.surd(), (1, 2, -23));
    }
}
