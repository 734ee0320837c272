//! The forms f_{k,D}(z) = π^{−k} Σ (az² + bz + c)^{−k} over all integral
//! forms of discriminant D with a > 0: direct lattice summation with a
//! certified tail, class-restricted sums, and the Fourier coefficient formula.

use rayon::prelude::*;
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer};

use crate::error::{Error, Result};
use crate::numeric::complex::{bits_for_digits, pi, BigComplex};
use crate::numeric::eval::reduce_point;
use crate::quadforms::{
    class_representatives, is_discriminant, reduce_form, square_cofactor, square_divisors, Bqf, RootTable,
};

/// Blocks of consecutive a summed as one parallel task; partial sums are
/// added in block order so results do not depend on the thread count.
const BLOCK: u64 = 256;
const DIRECT_A_LIMIT: u64 = 1 << 20;
const FOURIER_A_LIMIT: u64 = 1 << 21;
/// Distance (in the standard fundamental domain) below which a point counts as a pole.
pub const POLE_THRESHOLD: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FkdSpec {
    pub k: u32,
    pub d: i64,
    /// Restrict the sum to one Γ-class, given by its reduced representative.
    pub class: Option<Bqf>,
}

impl FkdSpec {
    pub fn new(k: u32, d: i64) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidArgument(format!("weight parameter k = {k} must be at least 2")));
        }
        if !is_discriminant(d) {
            return Err(Error::NotDiscriminant(d));
        }
        Ok(FkdSpec { k, d, class: None })
    }

    pub fn with_class(k: u32, form: &Bqf) -> Result<Self> {
        let mut s = Self::new(k, form.disc())?;
        s.class = Some(reduce_form(form)?.0);
        Ok(s)
    }

    fn keeps(&self, a: i64, b: i64) -> bool {
        match &self.class {
            None => true,
            Some(rep) => {
                let c = (b * b - self.d) / (4 * a);
                reduce_form(&Bqf::new(a, b, c)).map(|(r, _)| r == *rep).unwrap_or(false)
            }
        }
    }
}

/// A value together with the truncation that produced it and a rigorous
/// bound on the omitted tail.
#[derive(Clone, Debug)]
pub struct DirectValue {
    pub value: BigComplex,
    pub a_max: u64,
    pub tail_bound: f64,
}

// ---------------------------------------------------------------------------
// Lipschitz sums L_j(w) = Σ_n (w + n)^{−j}

/// Polynomials P_m with L_{m+1}(w) = (−1)^m π^{m+1}/m! · P_m(cot πw):
/// P_0 = c, P_{m+1} = −(1 + c²)·P_m'(c). Coefficients from c⁰ up.
fn cot_polys(n: usize) -> Vec<Vec<Integer>> {
    let mut out = vec![vec![Integer::new(), Integer::from(1)]];
    for m in 0..n.saturating_sub(1) {
        let p = &out[m];
        let dp: Vec<Integer> = (1..p.len()).map(|i| Integer::from(&p[i] * i as u32)).collect();
        let mut next = vec![Integer::new(); dp.len() + 2];
        for (i, c) in dp.iter().enumerate() {
            next[i] -= c;
            next[i + 2] -= c;
        }
        out.push(next);
    }
    out
}

struct Lipschitz {
    k: usize,
    polys: Vec<Vec<Integer>>,
}

impl Lipschitz {
    fn new(k: usize) -> Self {
        Lipschitz { k, polys: cot_polys(k) }
    }

    /// [L_1(w), …, L_k(w)], L_1 taken as the symmetric sum π cot πw.
    fn eval(&self, w: &BigComplex, bits: u32) -> Vec<BigComplex> {
        if w.im.is_sign_negative() {
            // L_j(w) = (−1)^j L_j(−w)
            let mut v = self.eval(&-w, bits);
            for (j, x) in v.iter_mut().enumerate() {
                if j % 2 == 0 {
                    *x = -&*x;
                }
            }
            return v;
        }
        if w.im.to_f64() >= 0.3 {
            self.eval_q(w, bits)
        } else {
            self.eval_cot(w, bits)
        }
    }

    fn eval_q(&self, w: &BigComplex, bits: u32) -> Vec<BigComplex> {
        // L_1 = −πi(1 + 2Σ e(rw)), L_j = (−2πi)^j/(j−1)! Σ r^{j−1} e(rw)
        let k = self.k;
        let q = w.e2pii();
        let x = q.abs_f64();
        let mut sums = vec![BigComplex::zero(bits); k];
        let mut qr = BigComplex::one(bits);
        let mut r: u64 = 1;
        loop {
            qr = &qr * &q;
            let mut t = qr.clone();
            for s in sums.iter_mut() {
                *s += &t;
                t = t.scale_i64(r as i64);
            }
            let rf = r as f64;
            if (k as f64 - 1.0) * rf.log2() + rf * x.log2() < -(bits as f64) - 8.0 && r > 2 {
                break;
            }
            r += 1;
        }
        let p = pi(bits);
        let mut out = Vec::with_capacity(k);
        let mut c = BigComplex::one(bits);
        let m2pii = BigComplex::new(Float::new(bits), Float::with_val(bits, -2 * &p));
        for (j, s) in sums.iter().enumerate() {
            let jj = j + 1;
            c = &c * &m2pii;
            if jj > 1 {
                c = c.scale(&Float::with_val(bits, Float::with_val(bits, 1) / (jj as u32 - 1)));
            }
            if jj == 1 {
                let one_plus = &BigComplex::one(bits) + &s.scale_i64(2);
                out.push(&BigComplex::new(Float::new(bits), Float::with_val(bits, -&p)) * &one_plus);
            } else {
                out.push(&c * s);
            }
        }
        out
    }

    fn eval_cot(&self, w: &BigComplex, bits: u32) -> Vec<BigComplex> {
        // cot πw = i(e(w) + 1)/(e(w) − 1)
        let e = w.e2pii();
        let one = BigComplex::one(bits);
        let cot = &(&(&e + &one) / &(&e - &one)) * &BigComplex::i(bits);
        let p = pi(bits);
        let mut out = Vec::with_capacity(self.k);
        let mut pref = Float::with_val(bits, &p);
        for m in 0..self.k {
            if m > 0 {
                pref *= &p;
                pref /= m as u32;
            }
            let poly = &self.polys[m];
            let mut acc = BigComplex::zero(bits);
            for c in poly.iter().rev() {
                acc = &(&acc * &cot) + &BigComplex::from_real(Float::with_val(bits, c));
            }
            let v = acc.scale(&pref);
            out.push(if m % 2 == 1 { -&v } else { v });
        }
        out
    }
}

fn binomial(n: u64, k: u64) -> Integer {
    Integer::from(Integer::binomial_u(n as u32, k as u32))
}

/// Sum over b ≡ b0 (mod 2a) of (az² + bz + c)^{−k}, by partial fractions in
/// the two roots β₁,₂ = (−b0 ± i√|D|)/(2a) and Lipschitz sums.
fn residue_class_sum(k: u32, d: i64, a: u64, b0: i64, z: &BigComplex, lip: &Lipschitz, bits: u32) -> BigComplex {
    let sq = Float::with_val(bits, d.unsigned_abs()).sqrt();
    let two_a = Float::with_val(bits, 2 * a);
    let re = Float::with_val(bits, -b0) / &two_a;
    let im = Float::with_val(bits, &sq / &two_a);
    let beta1 = BigComplex::new(re.clone(), im.clone());
    let beta2 = BigComplex::new(re, -im);
    let l1 = lip.eval(&(z - &beta1), bits);
    let l2 = lip.eval(&(z - &beta2), bits);
    // δ = β₁ − β₂ = i√|D|/a, so 1/δ = −i a/√|D|
    let inv_delta = BigComplex::new(Float::new(bits), -(Float::with_val(bits, a) / &sq));
    let k64 = k as u64;
    let mut acc = BigComplex::zero(bits);
    for j in 1..=k64 {
        // A_j = (−1)^{k−j} C(2k−j−1, k−j) δ^{−(2k−j)}, B_j = (−1)^j A_j
        let mut coef = inv_delta.powi((2 * k64 - j) as i64).scale(&Float::with_val(bits, binomial(2 * k64 - j - 1, k64 - j)));
        if (k64 - j) % 2 == 1 {
            coef = -&coef;
        }
        let l2j = if j % 2 == 1 { -&l2[j as usize - 1] } else { l2[j as usize - 1].clone() };
        acc += &(&coef * &(&l1[j as usize - 1] + &l2j));
    }
    let ak = Float::with_val(bits, a).pow(k);
    acc.scale(&ak.recip())
}

fn guard_bits(k: u32, d: i64, a: u64) -> u32 {
    let ratio = a as f64 / (d.unsigned_abs() as f64).sqrt();
    (2.0 * k as f64 * ratio.max(1.0).log2()).ceil() as u32 + 16
}

/// π^{−k} Σ over forms with a in [a_lo, a_hi], each residue class of b summed exactly.
fn direct_range(spec: &FkdSpec, z: &BigComplex, a_lo: u64, a_hi: u64, roots: &RootTable, bits: u32) -> BigComplex {
    let lip = Lipschitz::new(spec.k as usize);
    let blocks: Vec<(u64, u64)> =
        (0..).map(|i| a_lo + i * BLOCK).take_while(|s| *s <= a_hi).map(|s| (s, (s + BLOCK - 1).min(a_hi))).collect();
    let partials: Vec<BigComplex> = blocks
        .par_iter()
        .map(|&(s, e)| {
            let wb = bits + guard_bits(spec.k, spec.d, e);
            let zw = z.with_prec(wb);
            let mut acc = BigComplex::zero(wb);
            for a in s..=e {
                for b0 in roots.roots(a) {
                    if spec.keeps(a as i64, b0) {
                        acc += &residue_class_sum(spec.k, spec.d, a, b0, &zw, &lip, wb);
                    }
                }
            }
            acc.with_prec(bits)
        })
        .collect();
    let mut total = BigComplex::zero(bits);
    for p in &partials {
        total += p;
    }
    total.scale(&Float::with_val(bits, pi(bits).pow(spec.k)).recip())
}

/// f_{k,D} (or f_{k,D,A}) restricted to forms with a ≤ a_max; every b is included.
pub fn f_direct_truncated(spec: &FkdSpec, z: &BigComplex, a_max: u64, bits: u32) -> Result<BigComplex> {
    check_upper(z)?;
    let roots = RootTable::new(spec.d, a_max);
    Ok(direct_range(spec, &z.with_prec(bits), 1, a_max, &roots, bits))
}

fn check_upper(z: &BigComplex) -> Result<()> {
    if z.im.cmp0() != Some(std::cmp::Ordering::Greater) {
        return Err(Error::InvalidArgument("point not in the upper half plane".into()));
    }
    Ok(())
}

/// Σ_{a > A} d(a)·a^{−s} ≤ s·A^{1−s}·((ln A + 1)/(s−1) + 1/(s−1)²), from
/// partial summation with Σ_{a≤x} d(a) ≤ x(ln x + 1).
fn divisor_tail(s: f64, a: f64) -> f64 {
    s * a.powf(1.0 - s) * ((a.ln() + 1.0) / (s - 1.0) + 1.0 / (s - 1.0).powi(2))
}

fn ln_gamma(x: f64) -> f64 {
    Float::with_val(64, x).ln_gamma().to_f64()
}

/// Bound on the part of f_direct coming from forms with a > A at height y.
///
/// For a > A both roots lie below Im = η := y − √|D|/(2A), so each term is at
/// most a^{−k}((x+n)² + η²)^{−k}. Summed over n that is at most
/// g(η) = η^{−2k} + 2(1/4 + η²)^{−k} + η^{1−2k}√π Γ(k−½)/Γ(k). The number of
/// residue classes b mod 2a is at most 2·s_D·d(a), with s_D = ∏ p^{⌊v_p(D)/2⌋}.
pub fn direct_tail_bound(k: u32, d: i64, y: f64, a: u64) -> f64 {
    let eta = y - (d.unsigned_abs() as f64).sqrt() / (2.0 * a as f64);
    if eta <= 0.0 {
        return f64::INFINITY;
    }
    let kf = k as f64;
    let g = eta.powf(-2.0 * kf)
        + 2.0 * (0.25 + eta * eta).powf(-kf)
        + (eta.ln() * (1.0 - 2.0 * kf) + 0.5 * std::f64::consts::PI.ln() + ln_gamma(kf - 0.5) - ln_gamma(kf)).exp();
    let count = 2.0 * square_cofactor(d) as f64;
    std::f64::consts::PI.powf(-kf) * g * count * divisor_tail(kf, a as f64)
}

/// f_{k,D}(z) (or the class sum when `spec.class` is set) to absolute
/// accuracy `tol`. The a-cutoff doubles until both the analytic tail bound
/// and the last change are below `tol`.
pub fn f_direct(spec: &FkdSpec, z: &BigComplex, tol: f64) -> Result<DirectValue> {
    check_upper(z)?;
    let dist = pole_distance(spec.d, z)?;
    if dist < POLE_THRESHOLD {
        return Err(Error::PoleProximity { distance: dist });
    }
    let digits = (-tol.log10()).max(1.0).ceil() as u32 + 10;
    let bits = bits_for_digits(digits).max(z.prec());
    let y = z.im.to_f64();
    // smallest power-of-two cutoff whose bound meets the tolerance
    let mut target = 64u64;
    while direct_tail_bound(spec.k, spec.d, y, target) >= tol {
        target *= 2;
        if target > DIRECT_A_LIMIT {
            let achieved = direct_tail_bound(spec.k, spec.d, y, DIRECT_A_LIMIT).log10();
            return Err(Error::Unreachable { target: tol.log10().floor() as i32, achieved, a_max: DIRECT_A_LIMIT });
        }
    }
    let roots = RootTable::new(spec.d, target);
    let zb = z.with_prec(bits);
    let half = (target / 2).max(1);
    let mut value = direct_range(spec, &zb, 1, half, &roots, bits);
    let change = direct_range(spec, &zb, half + 1, target, &roots, bits);
    value += &change;
    if change.abs_f64() >= tol {
        // the certified bound says the remaining tail is small, but the
        // last doubling still moved the value: keep doubling
        let mut a = target;
        let mut last = change.abs_f64();
        while last >= tol {
            if 2 * a > DIRECT_A_LIMIT {
                return Err(Error::Unreachable {
                    target: tol.log10().floor() as i32,
                    achieved: last.log10(),
                    a_max: a,
                });
            }
            let roots = RootTable::new(spec.d, 2 * a);
            let c = direct_range(spec, &zb, a + 1, 2 * a, &roots, bits);
            last = c.abs_f64();
            value += &c;
            a *= 2;
        }
        return Ok(DirectValue { value, a_max: a, tail_bound: direct_tail_bound(spec.k, spec.d, y, a) });
    }
    Ok(DirectValue { value, a_max: target, tail_bound: direct_tail_bound(spec.k, spec.d, y, target) })
}

/// f_{k,D,A}(z) for the class of `form`.
pub fn f_class_direct(k: u32, form: &Bqf, z: &BigComplex, tol: f64) -> Result<DirectValue> {
    f_direct(&FkdSpec::with_class(k, form)?, z, tol)
}

/// Distance from z to the nearest pole of f_{k,D}, measured after moving z
/// into the standard fundamental domain. Poles sit at the CM points of every
/// discriminant D/g² (imprimitive forms included).
pub fn pole_distance(d: i64, z: &BigComplex) -> Result<f64> {
    let (w, _) = reduce_point(&z.with_prec(128))?;
    let (wx, wy) = (w.re.to_f64(), w.im.to_f64());
    let mut best = f64::INFINITY;
    for g in square_divisors(d) {
        for f in class_representatives(d / (g * g), true)? {
            let tx = -(f.b as f64) / (2.0 * f.a as f64);
            let ty = ((f.disc().unsigned_abs()) as f64).sqrt() / (2.0 * f.a as f64);
            // images near the boundary of the fundamental domain
            let r2 = tx * tx + ty * ty;
            let cands = [(tx, ty), (tx + 1.0, ty), (tx - 1.0, ty), (-tx / r2, ty / r2), (-tx / r2 + 1.0, ty / r2), (-tx / r2 - 1.0, ty / r2)];
            for (cx, cy) in cands {
                best = best.min(((wx - cx).powi(2) + (wy - cy).powi(2)).sqrt());
            }
        }
    }
    Ok(best)
}

// ---------------------------------------------------------------------------
// Fourier coefficients

/// S_{a,D}(r) = Σ e^{πirb/a} over b mod 2a with b² ≡ D (mod 4a). Real, since
/// the roots pair up as b ↔ −b.
pub fn exp_sum(a: u64, d: i64, r: u64, bits: u32) -> Float {
    exp_sum_roots(a, &crate::quadforms::roots_mod_4a(d, a), r, bits)
}

fn exp_sum_roots(a: u64, roots: &[i64], r: u64, bits: u32) -> Float {
    let two_a = 2 * a as i128;
    let mut s = Float::with_val(bits, 0);
    let p = pi(bits);
    for &b in roots {
        let t = (r as i128 * b as i128).rem_euclid(two_a) as u64;
        // cos(π t / a), with the exact values at multiples of a/2 kept exact
        if t == 0 {
            s += 1;
        } else if 2 * t == two_a as u64 {
            s -= 1;
        } else if 4 * t == two_a as u64 || 4 * t == 3 * two_a as u64 {
        } else {
            let ang = Float::with_val(bits, &p * t) / a;
            s += ang.cos();
        }
    }
    s
}

/// I_{k−½}(x) for x > 0 at the precision of x, from the elementary closed
/// form I_{∓½}(x) = √(2/(πx))·(cosh x, sinh x) and the upward recurrence
/// I_{ν+1} = I_{ν−1} − (2ν/x)·I_ν. The recurrence loses about
/// log₂(I_{−½}/I_{k−½}) bits, which are added as guard bits; for tiny x the
/// power series is used instead.
pub fn bessel_i_half(k: u32, x: &Float) -> Float {
    let bits = x.prec();
    let xf = x.to_f64();
    let kf = k as f64;
    let loss = if xf < 2.0 * kf {
        ln_gamma(kf + 0.5) / std::f64::consts::LN_2 + kf * (2.0 / xf).log2()
    } else {
        0.0
    };
    if loss > 2.0 * bits as f64 {
        return bessel_i_half_series(k, x);
    }
    let wb = bits + loss.max(0.0).ceil() as u32 + 32;
    let x = Float::with_val(wb, x);
    let pre = Float::with_val(wb, Float::with_val(wb, 2) / (pi(wb) * &x)).sqrt();
    let mut im = Float::with_val(wb, &pre * Float::with_val(wb, x.cosh_ref()));
    let mut ip = Float::with_val(wb, &pre * Float::with_val(wb, x.sinh_ref()));
    // im = I_{ν−1}, ip = I_ν with ν = ½, 3/2, …
    for n in 1..k {
        let nu2 = 2 * n - 1; // 2ν for ν = n − ½
        let next = Float::with_val(wb, &im - Float::with_val(wb, &ip * nu2) / &x);
        im = ip;
        ip = next;
    }
    Float::with_val(bits, ip)
}

/// e^{−x}·I_{k−½}(x).
pub fn bessel_i_half_scaled(k: u32, x: &Float) -> Float {
    let e = Float::with_val(x.prec(), -x).exp();
    bessel_i_half(k, x) * e
}

/// Power series Σ (x/2)^{2m+ν}/(m! Γ(m+ν+1)), ν = k − ½; all terms positive.
pub fn bessel_i_half_series(k: u32, x: &Float) -> Float {
    let bits = x.prec();
    let wb = bits + 32;
    let nu = Float::with_val(wb, k) - 0.5f64;
    let half = Float::with_val(wb, x) / 2u32;
    let lead = Float::with_val(wb, half.ln_ref()) * &nu - Float::with_val(wb, Float::with_val(wb, &nu + 1u32).ln_gamma());
    let x2 = Float::with_val(wb, half.square_ref());
    let mut term = Float::with_val(wb, 1);
    let mut sum = Float::with_val(wb, 1);
    let mut m = 1u32;
    loop {
        term *= &x2;
        term /= m;
        term /= Float::with_val(wb, &nu + m);
        sum += &term;
        if term.is_zero() || (term.clone() / &sum).abs() < Float::with_val(64, Float::i_exp(1, -(wb as i32))) {
            break;
        }
        m += 1;
    }
    Float::with_val(bits, sum * lead.exp())
}

/// A Fourier coefficient of f_{k,D} with a rigorous bound on the omitted
/// a-tail (absolute, log10).
#[derive(Clone, Debug)]
pub struct FourierCoeff {
    pub r: u64,
    pub value: Float,
    pub err_log10: f64,
    pub a_max: u64,
}

/// Evaluates π^{−k}c_r = (−1)^k 2^{k+½}π r^{k−½} / (|D|^{k/2−¼}(k−1)!) ·
/// Σ_a a^{−½} S_{a,D}(r) I_{k−½}(πr√|D|/a) (or c_r itself when `raw`).
/// The sign (−1)^k makes the expansion agree with the lattice sum; without
/// it odd k come out negated.
#[derive(Clone, Debug)]
pub struct FourierEngine {
    pub spec: FkdSpec,
    pub bits: u32,
    pub raw: bool,
}

impl FourierEngine {
    pub fn new(spec: FkdSpec, digits: u32) -> Self {
        FourierEngine { spec, bits: bits_for_digits(digits), raw: false }
    }

    fn prefactor(&self, r: u64, bits: u32) -> Float {
        let k = self.spec.k;
        let kf = Float::with_val(bits, k);
        let nd = Float::with_val(bits, self.spec.d.unsigned_abs());
        let two = Float::with_val(bits, 2);
        let mut p = Float::with_val(bits, two.pow(Float::with_val(bits, &kf + 0.5f64)));
        p *= pi(bits);
        p *= Float::with_val(bits, Float::with_val(bits, r).pow(Float::with_val(bits, &kf - 0.5f64)));
        p /= Float::with_val(bits, nd.pow(Float::with_val(bits, &kf / 2u32) - 0.25f64));
        p /= Float::with_val(bits, Integer::from(Integer::factorial(k - 1)));
        if self.raw {
            p *= Float::with_val(bits, pi(bits).pow(k));
        }
        // az² + bz + c = −a(t² − |D|/4a²) on the line z = it − b/2a
        if k % 2 == 1 {
            p = -p;
        }
        p
    }

    /// Analytic bound on the contribution of a > A to the coefficient r.
    /// Uses I_ν(x) ≤ cosh(x)(x/2)^ν/Γ(ν+1) and |S_{a,D}(r)| ≤ 2·s_D·d(a).
    pub fn tail_bound(&self, r: u64, a: u64) -> f64 {
        if r == 0 {
            return 0.0;
        }
        let k = self.spec.k as f64;
        let nd = self.spec.d.unsigned_abs() as f64;
        let nu = k - 0.5;
        let x_a = std::f64::consts::PI * r as f64 * nd.sqrt() / a as f64;
        let pref = (k + 0.5) * 2f64.ln() + std::f64::consts::PI.ln() + (k - 0.5) * (r as f64).ln()
            - (k / 2.0 - 0.25) * nd.ln()
            - ln_gamma(k)
            + if self.raw { k * std::f64::consts::PI.ln() } else { 0.0 };
        let bessel = x_a.cosh().ln() + nu * (std::f64::consts::PI * r as f64 * nd.sqrt() / 2.0).ln() - ln_gamma(nu + 1.0);
        let count = (2.0 * square_cofactor(self.spec.d) as f64).ln();
        (pref + bessel + count).exp() * divisor_tail(k, a as f64)
    }

    /// Partial sums over a ≤ a_max for each requested r (no tail).
    pub fn truncated(&self, rs: &[u64], a_max: u64) -> Vec<Float> {
        let bits = self.bits + 16;
        let roots = RootTable::new(self.spec.d, a_max);
        let k = self.spec.k;
        let sq = Float::with_val(bits, self.spec.d.unsigned_abs()).sqrt();
        let blocks: Vec<(u64, u64)> =
            (0..).map(|i| 1 + i * BLOCK).take_while(|s| *s <= a_max).map(|s| (s, (s + BLOCK - 1).min(a_max))).collect();
        let partials: Vec<Vec<Float>> = blocks
            .par_iter()
            .map(|&(s, e)| {
                let p = pi(bits);
                let mut acc = vec![Float::with_val(bits, 0); rs.len()];
                for a in s..=e {
                    let mut rts = roots.roots(a);
                    rts.retain(|&b| self.spec.keeps(a as i64, b));
                    if rts.is_empty() {
                        continue;
                    }
                    let inv_sqrt_a = Float::with_val(bits, a).sqrt().recip();
                    for (i, &r) in rs.iter().enumerate() {
                        if r == 0 {
                            continue;
                        }
                        let s_ar = exp_sum_roots(a, &rts, r, bits);
                        if s_ar.is_zero() {
                            continue;
                        }
                        let x = Float::with_val(bits, &p * r) * &sq / a;
                        let term = bessel_i_half(k, &x) * s_ar * &inv_sqrt_a;
                        acc[i] += term;
                    }
                }
                acc
            })
            .collect();
        let mut out = vec![Float::with_val(bits, 0); rs.len()];
        for part in &partials {
            for (o, p) in out.iter_mut().zip(part) {
                *o += p;
            }
        }
        rs.iter()
            .zip(out)
            .map(|(&r, s)| if r == 0 { Float::with_val(self.bits, 0) } else { Float::with_val(self.bits, s * self.prefactor(r, bits)) })
            .collect()
    }

    /// Coefficients for each r with the smallest power-of-two cutoff whose
    /// tail bound is below `tol` (or the largest allowed cutoff, whichever
    /// comes first); the achieved bound is reported per coefficient.
    pub fn best_effort(&self, rs: &[u64], tol: f64, a_limit: Option<u64>) -> Vec<FourierCoeff> {
        let limit = a_limit.unwrap_or(FOURIER_A_LIMIT);
        let rmax = rs.iter().copied().max().unwrap_or(0);
        let mut a = 64u64;
        while a < limit && self.tail_bound(rmax, a) >= tol {
            a *= 2;
        }
        let a = a.min(limit);
        let vals = self.truncated(rs, a);
        rs.iter()
            .zip(vals)
            .map(|(&r, v)| {
                // a-tail plus accumulated rounding over a terms
                let round = v.to_f64().abs() * a as f64 * 2f64.powi(8 - self.bits as i32);
                let err = self.tail_bound(r, a) + round;
                FourierCoeff { r, value: v, err_log10: err.log10(), a_max: a }
            })
            .collect()
    }

    /// A single coefficient certified to `tol`, or `Unreachable`.
    pub fn coeff(&self, r: u64, tol: f64) -> Result<FourierCoeff> {
        if r == 0 {
            return Ok(FourierCoeff { r, value: Float::with_val(self.bits, 0), err_log10: f64::NEG_INFINITY, a_max: 0 });
        }
        let c = self.best_effort(&[r], tol, None).remove(0);
        if c.err_log10 > tol.log10() {
            return Err(Error::Unreachable { target: tol.log10().floor() as i32, achieved: c.err_log10, a_max: c.a_max });
        }
        Ok(c)
    }
}

/// q^r coefficient of f_{k,D} (π^{−k}c_r) to within 10^{−digits}, if the
/// a-tail can be certified that far.
pub fn fourier_coeff(k: u32, d: i64, r: i64, digits: u32) -> Result<FourierCoeff> {
    let spec = FkdSpec::new(k, d)?;
    if r <= 0 {
        return Ok(FourierCoeff { r: 0, value: Float::with_val(bits_for_digits(digits), 0), err_log10: f64::NEG_INFINITY, a_max: 0 });
    }
    FourierEngine::new(spec, digits).coeff(r as u64, 10f64.powi(-(digits as i32)))
}

/// Coefficients c_1..c_rmax of a 1-periodic function from n samples on the
/// line Im z = y: c_r = e^{2πry}·(1/n)Σ_m f(m/n + iy)·e(−rm/n).
pub fn dft_coefficients<F>(f: F, y: f64, n: usize, r_max: usize, bits: u32) -> Result<Vec<BigComplex>>
where
    F: Fn(&BigComplex) -> Result<BigComplex> + Sync,
{
    let samples: Vec<BigComplex> = (0..n)
        .into_par_iter()
        .map(|m| {
            let x = Float::with_val(bits, m as u32) / n as u32;
            f(&BigComplex::new(x, Float::with_val(bits, y)))
        })
        .collect::<Result<_>>()?;
    let two_pi = Float::with_val(bits, Constant::Pi) * 2u32;
    let mut out = Vec::with_capacity(r_max);
    for r in 1..=r_max {
        let mut acc = BigComplex::zero(bits);
        for (m, s) in samples.iter().enumerate() {
            let ang = Float::with_val(bits, &two_pi * ((r * m) % n) as u32) / n as u32;
            let (sn, cs) = ang.sin_cos(Float::new(bits));
            acc += &(s * &BigComplex::new(cs, -sn));
        }
        let grow = Float::with_val(bits, &two_pi * r as u32) * Float::with_val(bits, y);
        out.push(acc.scale(&(grow.exp() / n as u32)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cot_polynomials() {
        let p = cot_polys(3);
        assert_eq!(p[1], vec![Integer::from(-1), Integer::new(), Integer::from(-1)]);
        // P_2 = −(1+c²)(−2c) = 2c + 2c³
        assert_eq!(p[2], vec![Integer::new(), Integer::from(2), Integer::new(), Integer::from(2)]);
    }

    #[test]
    fn lipschitz_branches_agree() {
        let bits = 200;
        let lip = Lipschitz::new(6);
        for (x, y) in [(0.13, 0.35), (-0.4, 0.6), (0.21, 1.2)] {
            let w = BigComplex::from_f64(bits, x, y);
            let a = lip.eval_q(&w, bits);
            let b = lip.eval_cot(&w, bits);
            for (u, v) in a.iter().zip(&b) {
                assert!((u - v).abs_f64() < 1e-40 * (1.0 + u.abs_f64()));
            }
        }
    }

    #[test]
    fn lipschitz_matches_brute_force() {
        let bits = 128;
        let lip = Lipschitz::new(4);
        let w = BigComplex::from_f64(bits, 0.3, -0.15);
        let v = lip.eval(&w, bits);
        for j in 2..=4i64 {
            let mut s = BigComplex::zero(bits);
            for n in -20000..=20000i64 {
                let t = &w + &BigComplex::from_f64(bits, n as f64, 0.0);
                s += &t.powi(-j);
            }
            assert!((&s - &v[j as usize - 1]).abs_f64() < 3.0 / 20000f64.powi(j as i32 - 1), "j = {j}");
        }
    }

    #[test]
    fn exp_sum_examples() {
        let b = 64;
        for r in 0..6u64 {
            let expect = if r % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(exp_sum(1, -3, r, b).to_f64(), expect);
        }
        assert_eq!(exp_sum(2, -4, 0, b).to_f64(), 1.0);
        assert_eq!(exp_sum(3, -3, 1, b).to_f64(), -1.0);
    }

    #[test]
    fn bessel_half_orders() {
        let b = 200;
        let x = Float::with_val(b, 1);
        let pre = Float::with_val(b, Float::with_val(b, 2) / pi(b)).sqrt();
        let i12 = Float::with_val(b, &pre * Float::with_val(b, x.sinh_ref()));
        assert!(Float::with_val(b, bessel_i_half(1, &x) - &i12).abs() < 1e-55);
        assert!(Float::with_val(b, bessel_i_half_series(1, &x) - &i12).abs() < 1e-55);
        let i32 = Float::with_val(b, &pre * (Float::with_val(b, x.cosh_ref()) - Float::with_val(b, x.sinh_ref())));
        assert!(Float::with_val(b, bessel_i_half(2, &x) - &i32).abs() < 1e-55);
    }

    #[test]
    fn bessel_recurrence_matches_series() {
        let b = 256;
        for k in [2u32, 5, 9] {
            for xv in [0.05, 0.7, 3.0, 25.0] {
                let x = Float::with_val(b, xv);
                let r = bessel_i_half(k, &x);
                let s = bessel_i_half_series(k, &x);
                let rel = Float::with_val(b, (r - &s) / &s).abs().to_f64();
                assert!(rel < 1e-60, "k={k} x={xv} rel={rel}");
            }
        }
    }

    #[test]
    fn fourier_vanishes_for_nonpositive_r() {
        assert!(fourier_coeff(2, -3, 0, 30).unwrap().value.is_zero());
        assert!(fourier_coeff(2, -3, -2, 30).unwrap().value.is_zero());
    }

    #[test]
    fn tail_bound_decreases() {
        let e = FourierEngine::new(FkdSpec::new(6, -3).unwrap(), 30);
        assert!(e.tail_bound(1, 1024) < e.tail_bound(1, 512));
        assert!(direct_tail_bound(6, -3, 1.0, 1024) < direct_tail_bound(6, -3, 1.0, 512));
        assert!(direct_tail_bound(2, -3, 0.01, 16).is_infinite());
    }
}
