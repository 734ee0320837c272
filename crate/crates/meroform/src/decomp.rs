//! Algebraic part plus cusp form: f_{k,D} = A/P + R with P a product of
//! powers of Φ_{D'}, A a cusp form with coefficients in Q(√|D|) and R in
//! S_{2k}. Also the Hecke action on f_{k,D} and Hecke combinations whose
//! cusp part is algebraic.

use std::collections::BTreeMap;
use std::sync::Arc;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde_json::{json, Value};

pub use crate::series::{weight_triple, WeightTriple};

use crate::error::{Error, Result};
use crate::fkd::{FkdSpec, FourierEngine};
use crate::numeric::classpoly::{class_field_of, phi_class_poly, phi_poly};
use crate::numeric::complex::{bits_for_digits, fmt_float, pi, BigComplex};
use crate::numeric::eval::{eval_expr, eval_poly, modular_values};
use crate::numeric::hfield::{squarefree_part, HField, HNumber};
use crate::numeric::quasi::{Jet, JetContext};
use crate::numeric::recognize::recognize_in_h;
use crate::quadforms::{
    class_representatives, is_discriminant, kronecker, square_divisors, Bqf,
};
use crate::series::{
    borcherds_obstruction, cusp_basis, cusp_dim, weakly_holomorphic, FormExpr, FormPoly, Gen, Monomial,
    Obstruction, QSeries,
};

/// Which of two normalizations differing by (−1)^k is reported.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Convention {
    /// π^{−k}Σ(az² + bz + c)^{−k} as a lattice sum.
    #[default]
    Lattice,
    /// (−1)^k times the lattice sum: the normalization in which the
    /// Fourier coefficients are 2^{k+½}π r^{k−½}/(…)·Σ_a … with no sign.
    Printed,
}

impl Convention {
    pub fn sign(self, k: u32) -> i64 {
        if self == Convention::Printed && k % 2 == 1 {
            -1
        } else {
            1
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Convention::Lattice => "lattice",
            Convention::Printed => "printed",
        }
    }
}

impl std::str::FromStr for Convention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lattice" => Ok(Convention::Lattice),
            "printed" => Ok(Convention::Printed),
            _ => Err(Error::InvalidArgument(format!("unknown convention {s:?} (lattice, printed)"))),
        }
    }
}

/// Q(√m) with m the squarefree part of |D|; shared by D and D·p².
pub fn surd_field(d: i64) -> Arc<HField> {
    let m = squarefree_part(d.unsigned_abs());
    if m == 1 {
        HField::rationals()
    } else {
        HField::quadratic(-(m as i64), m)
    }
}

/// Φ_D as a polynomial in E4, E6, Δ together with its q-expansion.
pub fn phi(d: i64, n_terms: usize) -> Result<(FormExpr, QSeries)> {
    let p = phi_poly(d)?;
    let s = p.expand_rational(n_terms as i64)?;
    Ok((FormExpr::poly(p), s))
}

/// Ψ_m = (j − j_A)^m E4^δ E6^ε Δ^M = (E4³ − j_AΔ)^m Δ^{M−m} E4^δ E6^ε, m = 0..M−1.
pub fn psi_basis(weight: i64, j_a: &HNumber) -> Result<Vec<FormPoly>> {
    let t = weight_triple(weight).ok_or_else(|| Error::InvalidArgument(format!("no forms of weight {weight}")))?;
    let base = FormPoly::monomial(Monomial::new(t.delta, t.epsilon, 0));
    let lin = FormPoly::gen(Gen::E4).pow(3)?.sub(&FormPoly::term(j_a.clone(), Monomial::gen(Gen::Delta)))?;
    (0..t.m)
        .map(|m| lin.pow(m)?.mul(&FormPoly::monomial(Monomial::new(0, 0, t.m - m)))?.mul(&base))
        .collect()
}

/// A modular form of the given weight, known as a q-series, written in the
/// basis E4^{δ+3(M−m)}E6^εΔ^m, m = 0..M.
pub fn series_to_poly(s: &QSeries, weight: i64) -> Result<FormPoly> {
    let t = weight_triple(weight).ok_or_else(|| Error::InvalidArgument(format!("no forms of weight {weight}")))?;
    let m_max = t.m as i64;
    if s.trunc_order() <= m_max {
        return Err(Error::InsufficientTruncation { needed: m_max + 1, have: s.trunc_order() });
    }
    let trunc = s.trunc_order();
    let mut rest = s.clone();
    let mut terms = Vec::new();
    for m in 0..=t.m {
        let mono = Monomial::new(t.delta + 3 * (t.m - m), t.epsilon, m);
        let c = rest.coeff(m as i64);
        if c.cmp0().is_ne() {
            let b = FormPoly::monomial(mono).expand_rational(trunc)?;
            rest = &rest - &b.scale(&c);
            terms.push((c, mono));
        }
    }
    if !rest.is_zero() {
        return Err(Error::Inconsistent(format!("series is not a modular form of weight {weight}")));
    }
    Ok(FormPoly::rational(&terms))
}

/// One CM point where f_{k,D} has a pole, with its principal part
/// (1−w)^{−2k} f((τ − τ̄w)/(1−w)) = α w^{−k} + O(1).
#[derive(Clone, Debug)]
pub struct PolePoint {
    /// Primitive reduced form whose root is τ; the vanishing form is mult·form.
    pub form: Bqf,
    pub mult: i64,
    pub tau: BigComplex,
    /// Order of the stabilizer of τ in PSL₂(ℤ).
    pub stab: u32,
    pub alpha: Float,
}

/// α = A^k/(π^k D^k) for the vanishing form of leading coefficient A: the
/// form is A(z−τ)(z−τ̄) and z − τ = 2iy·w/(1−w), z − τ̄ = 2iy/(1−w).
pub fn pole_points(k: u32, d: i64, bits: u32) -> Result<Vec<PolePoint>> {
    let mut out = Vec::new();
    for g in square_divisors(d) {
        let d0 = d / (g * g);
        for f in class_representatives(d0, true)? {
            let a_lead = Integer::from(g * f.a);
            let num = Float::with_val(bits, a_lead.pow(k));
            let den = Float::with_val(bits, Integer::from(d).pow(k)) * Float::with_val(bits, pi(bits).pow(k));
            out.push(PolePoint {
                form: f,
                mult: g,
                tau: f.root(bits),
                stab: match d0 {
                    -3 => 3,
                    -4 => 2,
                    _ => 1,
                },
                alpha: num / den,
            });
        }
    }
    Ok(out)
}

/// Discriminants D/g² whose CM points are poles of f_{k,D}.
fn pole_discriminants(d: i64) -> Vec<i64> {
    square_divisors(d).into_iter().map(|g| d / (g * g)).collect()
}

fn complex_rational(r: &Rational, bits: u32) -> BigComplex {
    BigComplex::from_real(Float::with_val(bits, r))
}

/// Gaussian elimination with partial pivoting on an overdetermined but
/// consistent complex system; rows are normalized first. Returns the
/// solution and the largest residual of the extra rows.
fn solve_consistent(mut rows: Vec<(Vec<BigComplex>, BigComplex)>, n: usize, bits: u32) -> Result<Vec<BigComplex>> {
    let tiny = 2f64.powi(-(bits as i32) / 3);
    for (a, b) in rows.iter_mut() {
        let s = a.iter().map(|x| x.abs_f64()).fold(b.abs_f64(), f64::max);
        if s > 0.0 {
            let inv = Float::with_val(bits, s).recip();
            for x in a.iter_mut() {
                *x = x.scale(&inv);
            }
            *b = b.scale(&inv);
        }
    }
    let m = rows.len();
    if m < n {
        return Err(Error::Inconsistent(format!("{m} equations for {n} unknowns")));
    }
    for col in 0..n {
        let piv = (col..m)
            .max_by(|&i, &j| rows[i].0[col].abs_f64().partial_cmp(&rows[j].0[col].abs_f64()).unwrap())
            .unwrap();
        if rows[piv].0[col].abs_f64() < tiny {
            return Err(Error::Inconsistent(format!("linear system is singular at column {col}")));
        }
        rows.swap(col, piv);
        let inv = rows[col].0[col].recip();
        let (head, tail) = rows.split_at_mut(col + 1);
        let prow = &head[col];
        for row in tail.iter_mut() {
            let f = &row.0[col] * &inv;
            if f.is_zero() {
                continue;
            }
            for c in col..n {
                let t = &f * &prow.0[c];
                row.0[c] -= &t;
            }
            row.1 -= &(&f * &prow.1);
        }
    }
    for (i, row) in rows.iter().enumerate().skip(n) {
        if row.1.abs_f64() > tiny.sqrt() {
            return Err(Error::Inconsistent(format!("equation {i} is not satisfied (residual {:e})", row.1.abs_f64())));
        }
    }
    let mut x = vec![BigComplex::zero(bits); n];
    for i in (0..n).rev() {
        let mut s = rows[i].1.clone();
        for c in i + 1..n {
            s -= &(&rows[i].0[c] * &x[c]);
        }
        x[i] = &s / &rows[i].0[i];
    }
    Ok(x)
}

fn recognition_budget(bits: u32, dim: usize) -> (u32, Integer) {
    let acc = (bits as f64 * 0.85) as u32 - 32;
    let hb = (acc as usize / (2 * (dim + 1))).saturating_sub(4).max(8);
    (acc, Integer::from(1) << hb as u32)
}

fn recognize_all(xs: &[BigComplex], field: &Arc<HField>, bits: u32) -> Result<Vec<HNumber>> {
    let (acc, height) = recognition_budget(bits, field.dim());
    xs.iter().map(|x| recognize_in_h(x, field, acc, &height)).collect()
}

/// The algebraic numerator and its denominator factors.
#[derive(Clone, Debug)]
pub struct AlgebraicPart {
    pub numerator: FormPoly,
    pub denominator: Vec<(FormPoly, u32)>,
}

impl AlgebraicPart {
    pub fn expr(&self) -> FormExpr {
        FormExpr::new(self.numerator.clone(), self.denominator.clone())
    }
}

/// Pole clearing over every discriminant D/g²: A/P with A ∈ S_W determined
/// by the principal parts at all poles and by requiring the q¹..q^d
/// coefficients of A/P to vanish (d = dim S_{2k}).
fn general_route(k: u32, d: i64, sign: i64, bits: u32, field: &Arc<HField>) -> Result<AlgebraicPart> {
    let denominator: Vec<(FormPoly, u32)> =
        pole_discriminants(d).into_iter().map(|d0| Ok((phi_poly(d0)?, k))).collect::<Result<_>>()?;
    let p = FormExpr::new(FormPoly::constant(HNumber::integer(1)), Vec::new())
        .denominator
        .iter()
        .try_fold(FormPoly::constant(HNumber::integer(1)), |acc, _: &(FormPoly, u32)| Ok::<_, Error>(acc))?;
    let mut p_poly = p;
    for (f, e) in &denominator {
        p_poly = p_poly.mul(&f.pow(*e)?)?;
    }
    let w = p_poly.weight().unwrap_or(0) + 2 * k as i64;
    let t = weight_triple(w).ok_or_else(|| Error::InvalidArgument(format!("weight {w}")))?;
    let basis: Vec<Monomial> = (1..=t.m).map(|m| Monomial::new(t.delta + 3 * (t.m - m), t.epsilon, m)).collect();
    let n = basis.len();
    let wb = bits + 64;
    let mut rows = Vec::new();
    for pt in pole_points(k, d, wb)? {
        let ctx = JetContext::new(&pt.tau, 2 * k as usize, wb)?;
        let pj = ctx.poly(&p_poly)?;
        let bj: Vec<Jet> = basis.iter().map(|m| ctx.poly(&FormPoly::monomial(*m))).collect::<Result<_>>()?;
        let alpha = BigComplex::from_real(Float::with_val(wb, &pt.alpha * sign));
        let mut group: Vec<(Vec<BigComplex>, BigComplex)> = (0..k as usize)
            .map(|i| (bj.iter().map(|j| j.coeffs[i].clone()).collect(), &alpha * &pj.coeffs[i + k as usize]))
            .collect();
        // rows that vanish identically by the symmetry at an elliptic point
        let scale = group.iter().flat_map(|(a, b)| a.iter().chain(std::iter::once(b))).map(|x| x.abs_f64()).fold(0.0, f64::max);
        let cut = scale * 2f64.powi(-(wb as i32) / 2);
        group.retain(|(a, b)| a.iter().chain(std::iter::once(b)).any(|x| x.abs_f64() > cut));
        rows.extend(group);
    }
    let dcusp = cusp_dim(2 * k as i64);
    if dcusp > 0 {
        let trunc = dcusp as i64 + 1;
        for r in 1..=dcusp as i64 {
            let mut row = Vec::with_capacity(n);
            for m in &basis {
                let s = FormExpr::new(FormPoly::monomial(*m), vec![(p_poly.clone(), 1)]).expand_rational(trunc)?;
                row.push(complex_rational(&s.coeff(r), wb));
            }
            rows.push((row, BigComplex::zero(wb)));
        }
    }
    let x = solve_consistent(rows, n, wb)?;
    let coeffs = recognize_all(&x, field, bits)?;
    let mut num = FormPoly::zero();
    for (c, m) in coeffs.into_iter().zip(&basis) {
        if !c.is_zero() {
            num = num.add(&FormPoly::term(c, *m))?;
        }
    }
    Ok(AlgebraicPart { numerator: num, denominator })
}

/// Result of the per-class triangular solve.
#[derive(Clone, Debug)]
pub struct ClassDecomposition {
    pub form: Bqf,
    pub field: Arc<HField>,
    pub weight: i64,
    /// c_m for the Ψ_m with a zero of order < k at z_A.
    pub coeffs: Vec<(u32, HNumber)>,
    pub psi: Vec<FormPoly>,
    pub phi: FormPoly,
    pub algebraic: AlgebraicPart,
}

/// Zero order of Ψ_m at the CM point in the local coordinate w.
fn psi_order(d0: i64, m: u32, t: &WeightTriple) -> u32 {
    match d0 {
        -3 => 3 * m + t.delta,
        -4 => 2 * m + t.epsilon,
        _ => m,
    }
}

/// f_{k,D,A} = Σ_{ord Ψ_m < k} c_m Ψ_m/Φ_A^k + (cusp form), with the c_m from a
/// triangular system matching the principal part at z_A.
/// Precision is doubled (up to 8×) while recognition fails.
pub fn decompose_class(k: u32, form: &Bqf, digits: u32, convention: Convention) -> Result<ClassDecomposition> {
    let mut dg = digits;
    loop {
        match class_at(k, form, dg, convention) {
            Err(Error::Unrecognized(_)) | Err(Error::Precision(_)) if dg < 8 * digits => dg *= 2,
            r => return r,
        }
    }
}

fn class_at(k: u32, form: &Bqf, digits: u32, convention: Convention) -> Result<ClassDecomposition> {
    let spec = FkdSpec::with_class(k, form)?;
    let form = spec.class.unwrap();
    if !form.is_primitive() {
        return Err(Error::InvalidArgument(format!("{form} is not primitive")));
    }
    let d0 = form.disc();
    let bits = bits_for_digits(digits);
    let wb = bits + 64;
    let field = class_field_of(&form, wb)?;
    let phi = phi_class_poly(&form, &field)?;
    let phik = phi.pow(k)?;
    let weight = phik.weight().unwrap_or(0) + 2 * k as i64;
    let t = weight_triple(weight).unwrap();
    let ja = {
        let mut coords = vec![Rational::new(); field.dim()];
        let step = if field.surd == 1 { 1 } else { 2 };
        if field.degree_theta() == 1 {
            coords[0] = Rational::from(-&field.minpoly[0]);
        } else {
            coords[step] = Rational::from(1);
        }
        HNumber { field: field.clone(), coords }
    };
    let psi = psi_basis(weight, &ja)?;
    let tau = form.root(wb);
    let ctx = JetContext::new(&tau, 2 * k as usize, wb)?;
    let pj = ctx.poly(&phik)?;
    let psij: Vec<Jet> = psi.iter().map(|p| ctx.poly(p)).collect::<Result<_>>()?;
    let alpha = {
        let pt = pole_points(k, d0, wb)?.into_iter().find(|p| p.form == form && p.mult == 1).unwrap();
        BigComplex::from_real(Float::with_val(wb, pt.alpha * convention.sign(k)))
    };
    let active: Vec<u32> = (0..t.m).filter(|&m| psi_order(d0, m, &t) < k).collect();
    let mut c: Vec<BigComplex> = Vec::new();
    for (i, &m) in active.iter().enumerate() {
        let n = psi_order(d0, m, &t) as usize;
        let mut rhs = &alpha * &pj.coeffs[n + k as usize];
        for (j, &mp) in active[..i].iter().enumerate() {
            rhs -= &(&c[j] * &psij[mp as usize].coeffs[n]);
        }
        let diag = &psij[m as usize].coeffs[n];
        if diag.abs_f64() < 2f64.powi(-(wb as i32) / 3) {
            return Err(Error::Precision(format!("vanishing diagonal for Ψ_{m}")));
        }
        c.push(&rhs / diag);
    }
    // the remaining orders below k must be matched automatically
    let scale = (0..k as usize).map(|n| (&alpha * &pj.coeffs[n + k as usize]).abs_f64()).fold(1e-300, f64::max);
    for n in 0..k as usize {
        let mut lhs = BigComplex::zero(wb);
        for (ci, &m) in c.iter().zip(&active) {
            lhs += &(ci * &psij[m as usize].coeffs[n]);
        }
        let rhs = &alpha * &pj.coeffs[n + k as usize];
        if (&lhs - &rhs).abs_f64() > scale * 2f64.powi(-(bits as i32) / 2) {
            return Err(Error::Inconsistent(format!("principal part not matched at order {n}")));
        }
    }
    let recognized = recognize_all(&c, &field, bits)?;
    let mut num = FormPoly::zero();
    for (h, &m) in recognized.iter().zip(&active) {
        num = num.add(&psi[m as usize].scale_h(h)?)?;
    }
    let coeffs = active.iter().copied().zip(recognized).collect();
    Ok(ClassDecomposition {
        form,
        field,
        weight,
        coeffs,
        psi,
        phi: phi.clone(),
        algebraic: AlgebraicPart { numerator: num, denominator: vec![(phi, k)] },
    })
}

/// Rewrites an element of a class field with rational θ as an element of Q(√m).
fn into_surd_field(h: &HNumber, target: &Arc<HField>) -> Result<HNumber> {
    let f = &h.field;
    if f.degree_theta() != 1 {
        return Err(Error::InvalidArgument("class field of degree > 1".into()));
    }
    if f.surd == 1 || h.coords.len() == 1 || h.coords[1].cmp0().is_eq() {
        return Ok(HNumber::from_rational(target, h.coords[0].clone()));
    }
    // √|D| = c·√m
    let c = Integer::from(f.surd / target.surd).sqrt();
    if Integer::from(&c * &c) * target.surd != f.surd {
        return Err(Error::InvalidArgument("incompatible surds".into()));
    }
    Ok(HNumber { field: target.clone(), coords: vec![h.coords[0].clone(), Rational::from(&h.coords[1] * &c)] })
}

fn poly_into_field(p: &FormPoly, target: &Arc<HField>) -> Result<FormPoly> {
    let mut out = FormPoly::zero();
    for (m, c) in &p.terms {
        out = out.add(&FormPoly::term(into_surd_field(c, target)?, *m))?;
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct DecompOptions {
    pub digits: u32,
    pub convention: Convention,
    /// Accuracy requested from the Fourier formula for the cusp coefficients.
    pub fourier_digits: u32,
    pub fourier_a_limit: u64,
    /// Extra coefficients used to check that the remainder is a cusp form.
    pub guard_terms: usize,
    /// Upper limit for automatic precision escalation.
    pub max_digits: u32,
}

impl Default for DecompOptions {
    fn default() -> Self {
        DecompOptions {
            digits: 200,
            convention: Convention::Lattice,
            fourier_digits: 30,
            fourier_a_limit: 1 << 16,
            guard_terms: 5,
            max_digits: 1600,
        }
    }
}

/// One cusp-part coefficient: R = Σ_r value_r·V_r on the echelon basis
/// V_r = q^r + O(q^{d+1}) of S_{2k}.
#[derive(Clone, Debug)]
pub struct RemainderCoeff {
    pub r: u64,
    pub value: Float,
    pub err_log10: f64,
}

#[derive(Clone, Debug)]
pub struct GuardCheck {
    pub r: u64,
    pub predicted: Float,
    pub fourier: Float,
    pub bound: f64,
    pub ok: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    /// Σ c_m Ψ_m/Φ_D^k over the Ψ_m with a zero of order < k at the CM point.
    Printed,
    /// Denominator ∏ Φ_{D/g²}^k, q¹..q^d coefficients of the algebraic part zero.
    Canonical,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub k: u32,
    pub d: i64,
    pub convention: Convention,
    pub normalization: Normalization,
    pub field: Arc<HField>,
    pub algebraic: AlgebraicPart,
    /// c_m from the triangular solve, when that normalization exists.
    pub class_coeffs: Option<Vec<(u32, HNumber)>>,
    pub cusp_dim: usize,
    pub remainder: Vec<RemainderCoeff>,
    pub guards: Vec<GuardCheck>,
    pub remainder_zero: bool,
    pub digits: u32,
}

impl Decomposition {
    /// The numerator coefficients, as "n/d" strings per field coordinate.
    pub fn coeffs_h(&self) -> Vec<Vec<String>> {
        let mut terms: Vec<_> = self.algebraic.numerator.terms.iter().collect();
        terms.sort_by_key(|(m, _)| (std::cmp::Reverse(m.delta), m.e4, m.e6));
        terms.iter().map(|(_, c)| c.coord_strings()).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k,
            "D": self.d,
            "algebraic": self.algebraic.expr().to_string(),
            "coeffs_H": self.coeffs_h(),
            "cusp_remainder": self.remainder.iter().map(|r| json!([r.r, fmt_float(&r.value, 30), r.err_log10.ceil() as i64])).collect::<Vec<_>>(),
            "remainder_zero": self.remainder_zero,
        })
    }

    /// Cusp remainder as numeric q-coefficients 1..n.
    pub fn remainder_coeffs(&self, n: usize) -> Result<Vec<Float>> {
        let bits = bits_for_digits(self.digits);
        let mut out = vec![Float::with_val(bits, 0); n];
        if self.cusp_dim == 0 {
            return Ok(out);
        }
        let basis = cusp_basis(2 * self.k as i64, n + 1);
        for (rc, b) in self.remainder.iter().zip(&basis) {
            for (i, o) in out.iter_mut().enumerate() {
                *o += Float::with_val(bits, b.coeff(i as i64 + 1)) * &rc.value;
            }
        }
        Ok(out)
    }

    /// Algebraic part plus cusp remainder at z.
    pub fn eval(&self, z: &BigComplex, bits: u32) -> Result<BigComplex> {
        let v = modular_values(z, bits)?;
        let mut s = eval_expr(&self.algebraic.expr(), &v);
        if self.cusp_dim > 0 {
            let trunc = self.cusp_dim as i64 + 1;
            for (rc, b) in self.remainder.iter().zip(cusp_basis(2 * self.k as i64, trunc as usize)) {
                let p = series_to_poly(&b, 2 * self.k as i64)?;
                s += &eval_poly(&p, &v).scale(&Float::with_val(bits, &rc.value));
            }
        }
        Ok(s)
    }
}

/// Coefficients q^1..q^n of an algebraic part, embedded numerically.
fn algebraic_coeffs(a: &AlgebraicPart, n: usize, bits: u32) -> Result<Vec<Float>> {
    let series = a.expr().expand(n as i64 + 1)?;
    let basis = a.numerator.field().basis_values(bits);
    Ok((1..=n as i64)
        .map(|r| {
            let mut acc = BigComplex::zero(bits);
            for (s, b) in series.iter().zip(&basis) {
                acc += &b.scale(&Float::with_val(bits, s.coeff(r)));
            }
            acc.re
        })
        .collect())
}

fn fourier_values(k: u32, d: i64, n: usize, opts: &DecompOptions) -> Result<Vec<(Float, f64)>> {
    let eng = FourierEngine::new(FkdSpec::new(k, d)?, opts.fourier_digits);
    let rs: Vec<u64> = (1..=n as u64).collect();
    let sign = opts.convention.sign(k);
    Ok(eng
        .best_effort(&rs, 10f64.powi(-(opts.fourier_digits as i32)), Some(opts.fourier_a_limit))
        .into_iter()
        .map(|c| (c.value * sign, c.err_log10))
        .collect())
}

/// Remainder coefficients and guard checks from Fourier coefficients
/// c_1..c_{d+guard} with their error bounds.
fn remainder_from(
    k: u32,
    alg: &AlgebraicPart,
    fourier: &[(Float, f64)],
    dcusp: usize,
    bits: u32,
) -> Result<(Vec<RemainderCoeff>, Vec<GuardCheck>)> {
    let n = fourier.len();
    let ac = algebraic_coeffs(alg, n, bits)?;
    let rem: Vec<RemainderCoeff> = (0..dcusp)
        .map(|i| RemainderCoeff {
            r: i as u64 + 1,
            value: Float::with_val(bits, &fourier[i].0 - &ac[i]),
            err_log10: fourier[i].1,
        })
        .collect();
    let basis = cusp_basis(2 * k as i64, n + 1);
    let mut guards = Vec::new();
    for r in dcusp + 1..=n {
        let mut pred = ac[r - 1].clone();
        let mut bound = 10f64.powf(fourier[r - 1].1);
        for (rc, b) in rem.iter().zip(&basis) {
            let v = b.coeff(r as i64);
            pred += Float::with_val(bits, &v) * &rc.value;
            bound += v.to_f64().abs() * 10f64.powf(rc.err_log10);
        }
        let diff = Float::with_val(bits, &pred - &fourier[r - 1].0).abs().to_f64();
        let bound = bound * 1.01 + 2f64.powi(-(bits as i32) / 2) * (1.0 + pred.to_f64().abs());
        guards.push(GuardCheck { r: r as u64, predicted: pred, fourier: fourier[r - 1].0.clone(), bound, ok: diff <= bound });
    }
    Ok((rem, guards))
}

fn is_zero_remainder(rem: &[RemainderCoeff], digits: u32) -> bool {
    rem.iter().all(|r| {
        let v = r.value.to_f64().abs();
        v == 0.0 || v <= 2.0 * 10f64.powf(r.err_log10).max(10f64.powi(-(digits as i32) / 2))
    })
}

/// Both routes for f_{k,D}: the printed normalization (triangular solve at
/// one CM point) when D has a single class and no imprimitive forms,
/// otherwise pole clearing over every D/g².
pub fn decompose(k: u32, d: i64, opts: &DecompOptions) -> Result<Decomposition> {
    FkdSpec::new(k, d)?;
    let field = surd_field(d);
    let mut digits = opts.digits;
    let (algebraic, normalization, class_coeffs) = loop {
        match decompose_algebraic(k, d, digits, opts.convention, &field) {
            Ok(x) => break x,
            Err(Error::Unrecognized(_)) | Err(Error::Precision(_)) if digits * 2 <= opts.max_digits => digits *= 2,
            Err(e) => return Err(e),
        }
    };
    let bits = bits_for_digits(digits);
    let dcusp = cusp_dim(2 * k as i64);
    let fourier = fourier_values(k, d, dcusp + opts.guard_terms, opts)?;
    let (remainder, guards) = remainder_from(k, &algebraic, &fourier, dcusp, bits)?;
    let remainder_zero = is_zero_remainder(&remainder, digits);
    Ok(Decomposition {
        k,
        d,
        convention: opts.convention,
        normalization,
        field,
        algebraic,
        class_coeffs,
        cusp_dim: dcusp,
        remainder,
        guards,
        remainder_zero,
        digits,
    })
}

type AlgebraicResult = (AlgebraicPart, Normalization, Option<Vec<(u32, HNumber)>>);

fn decompose_algebraic(k: u32, d: i64, digits: u32, conv: Convention, field: &Arc<HField>) -> Result<AlgebraicResult> {
    let bits = bits_for_digits(digits);
    let sign = conv.sign(k);
    let reps = class_representatives(d, true)?;
    if square_divisors(d) == vec![1] && reps.len() == 1 {
        let cd = decompose_class(k, &reps[0], digits, conv)?;
        let num = poly_into_field(&cd.algebraic.numerator, field)?;
        let phi = poly_into_field(&cd.phi, field)?;
        let coeffs = cd.coeffs.iter().map(|(m, c)| Ok((*m, into_surd_field(c, field)?))).collect::<Result<Vec<_>>>()?;
        return Ok((AlgebraicPart { numerator: num, denominator: vec![(phi, k)] }, Normalization::Printed, Some(coeffs)));
    }
    Ok((general_route(k, d, sign, bits, field)?, Normalization::Canonical, None))
}

/// The canonical (pole-clearing) algebraic part, for any D.
pub fn decompose_canonical(k: u32, d: i64, digits: u32, conv: Convention) -> Result<AlgebraicPart> {
    FkdSpec::new(k, d)?;
    general_route(k, d, conv.sign(k), bits_for_digits(digits), &surd_field(d))
}

// ---------------------------------------------------------------------------
// Hecke operators

/// Σ coefficient·f_{k,D'} keyed by D'.
pub type Combination = BTreeMap<i64, Integer>;

fn add_into(acc: &mut Combination, d: i64, c: Integer) {
    let e = acc.entry(d).or_default();
    *e += c;
    if *e == 0 {
        acc.remove(&d);
    }
}

/// f_{k,D}|T_p = p^{2k−1} f_{k,Dp²} + (D/p) p^{k−1} f_{k,D} + f_{k,D/p²},
/// the last term present only when D/p² is again a discriminant.
fn hecke_prime(k: u32, comb: &Combination, p: u64) -> Combination {
    let mut out = Combination::new();
    let pi = p as i64;
    for (&d, c) in comb {
        add_into(&mut out, d * pi * pi, c * Integer::from(p).pow(2 * k - 1));
        let kr = kronecker(d, p);
        if kr != 0 {
            add_into(&mut out, d, (c * Integer::from(p).pow(k - 1)) * kr);
        }
        if d % (pi * pi) == 0 && is_discriminant(d / (pi * pi)) {
            add_into(&mut out, d / (pi * pi), c.clone());
        }
    }
    out
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn scale_comb(c: &Combination, s: &Integer) -> Combination {
    let mut out = Combination::new();
    for (d, v) in c {
        add_into(&mut out, *d, Integer::from(v * s));
    }
    out
}

/// f_{k,D}|T_n as an integral combination of f_{k,D'}, from the prime case,
/// T_{p^{e+1}} = T_{p^e}T_p − p^{2k−1}T_{p^{e−1}}, and multiplicativity.
pub fn hecke_on_f(k: u32, d: i64, n: u64) -> Result<Combination> {
    FkdSpec::new(k, d)?;
    if n == 0 {
        return Err(Error::InvalidArgument("T_0 is undefined".into()));
    }
    let mut comb: Combination = [(d, Integer::from(1))].into_iter().collect();
    for (p, e) in factorize(n) {
        let mut prev = comb.clone(); // T_{p^0}
        let mut cur = hecke_prime(k, &comb, p);
        for _ in 1..e {
            let mut next = hecke_prime(k, &cur, p);
            for (dd, v) in scale_comb(&prev, &Integer::from(p).pow(2 * k - 1)) {
                add_into(&mut next, dd, -v);
            }
            prev = cur;
            cur = next;
        }
        comb = cur;
    }
    Ok(comb)
}

pub fn format_combination(k: u32, c: &Combination) -> String {
    if c.is_empty() {
        return "0".into();
    }
    let mut parts = Vec::new();
    for (d, v) in c.iter() {
        let body = format!("f_{{{k},{d}}}");
        let abs = Integer::from(v.abs_ref());
        let term = if abs == 1 { body } else { format!("{abs}*{body}") };
        if parts.is_empty() {
            parts.push(if *v < 0 { format!("-{term}") } else { term });
        } else {
            parts.push(format!("{} {term}", if *v < 0 { "-" } else { "+" }));
        }
    }
    parts.join(" ")
}

/// Constant term of f_{k,D}·g, i.e. Σ λ_n c_n(f_{k,D}) for g = Σλ_n q^{−n} + O(1),
/// from the residue theorem on X(1): const(fg) = 4π Σ_τ (y_τ/e_τ)·α_τ·[w^{k−1}]jet(g)
/// over the poles τ of f with stabilizer orders e_τ.
pub fn pairing_with_weakly_holomorphic(k: u32, d: i64, g_num: &FormPoly, delta_power: u32, bits: u32) -> Result<BigComplex> {
    let mut acc = BigComplex::zero(bits);
    for pt in pole_points(k, d, bits)? {
        let ctx = JetContext::new(&pt.tau, k as usize, bits)?;
        let gj = ctx.poly(g_num)?.mul(&ctx.delta.inverse()?.pow(delta_power));
        let term = gj.coeffs[k as usize - 1].scale(&Float::with_val(bits, &pt.alpha * &pt.tau.im)).scale(&(Float::with_val(bits, 1) / pt.stab));
        acc += &term;
    }
    Ok(acc.scale(&Float::with_val(bits, pi(bits) * 4u32)))
}

/// g = Σλ_n q^{−n} + O(1) of weight 2 − 2k as G/Δ^N with G a polynomial.
pub fn weakly_holomorphic_poly(k: u32, lambda: &[i64]) -> Result<(FormPoly, u32)> {
    let n = lambda.iter().rposition(|&l| l != 0).map_or(0, |i| i as u32 + 1);
    let weight = 2 - 2 * k as i64;
    let wg = weight + 12 * n as i64;
    let trunc = wg / 12 + 4;
    let g = weakly_holomorphic(weight, lambda, trunc)?;
    let delta = crate::series::canonical_form(crate::series::CanonicalForm::Delta, (trunc + n as i64 + 4) as usize);
    let big = (&g * &delta.pow(n as i64)?).truncate(trunc + n as i64);
    Ok((series_to_poly(&big, wg)?, n))
}

/// How a printed closed form compares with the computed one.
#[derive(Clone, Debug)]
pub struct PrintedComparison {
    pub printed: String,
    pub agrees: bool,
    /// First q-exponent where the expansions differ, with both coefficients.
    pub first_difference: Option<(i64, String, String)>,
    pub note: String,
}

/// First q-exponent below `trunc` where two closed forms differ, with both
/// coefficients. Rational coefficients are compared inside Q(√m) when the
/// other side lives there.
pub fn compare_series(ours: &FormExpr, printed: &FormExpr, trunc: i64) -> Result<Option<(i64, String, String)>> {
    let fa = ours.numerator.field();
    let fb = printed.numerator.field();
    let field = if fa.dim() >= fb.dim() { fa.clone() } else { fb.clone() };
    if fa.dim() > 1 && fb.dim() > 1 && fa.surd != fb.surd {
        return Err(Error::InvalidArgument("closed forms live in different fields".into()));
    }
    let a = ours.expand(trunc)?;
    let b = printed.expand(trunc)?;
    let coeff = |s: &[QSeries], e: i64| HNumber {
        field: field.clone(),
        coords: (0..field.dim()).map(|i| s.get(i).map_or_else(Rational::new, |x| x.coeff(e))).collect(),
    };
    for e in a[0].valuation().min(b[0].valuation()).min(0)..trunc {
        let (ca, cb) = (coeff(&a, e), coeff(&b, e));
        if ca != cb {
            return Ok(Some((e, ca.to_string(), cb.to_string())));
        }
    }
    Ok(None)
}

/// Result of decomposing f_{k,D}|Σλ_nT_n.
#[derive(Clone, Debug)]
pub struct HeckeCombination {
    pub k: u32,
    pub d: i64,
    pub lambda: Vec<i64>,
    pub obstruction: Obstruction,
    pub constituents: Combination,
    /// Combined decomposition. When the obstruction passes, the cusp part has
    /// been recognized and folded into the algebraic part, and the remainder
    /// holds what is left over.
    pub decomposition: Decomposition,
    /// Cusp coefficients from the Fourier formula (before folding).
    pub fourier_cusp: Vec<RemainderCoeff>,
    /// Cusp coefficients from the residue pairing with g_λ.
    pub residue_cusp: Option<Vec<BigComplex>>,
    pub cusp_algebraic: Option<Vec<HNumber>>,
}

impl HeckeCombination {
    pub fn to_json(&self) -> Value {
        let mut v = self.decomposition.to_json();
        let o = v.as_object_mut().unwrap();
        o.insert("lambda".into(), json!(self.lambda));
        o.insert("obstruction_passes".into(), json!(self.obstruction.passes()));
        o.insert("constituents".into(), json!(format_combination(self.k, &self.constituents)));
        o.insert(
            "fourier_cusp".into(),
            json!(self.fourier_cusp.iter().map(|r| json!([r.r, fmt_float(&r.value, 30), r.err_log10.ceil() as i64])).collect::<Vec<_>>()),
        );
        if let Some(c) = &self.cusp_algebraic {
            o.insert("cusp_algebraic".into(), json!(c.iter().map(|h| h.to_string()).collect::<Vec<_>>()));
        }
        v
    }

    /// Compares the algebraic part with a printed closed form via q-expansions.
    pub fn compare_with(&self, printed: &FormExpr, note: &str) -> Result<PrintedComparison> {
        let diff = compare_series(&self.decomposition.algebraic.expr(), printed, 12)?;
        Ok(PrintedComparison { printed: printed.to_string(), agrees: diff.is_none(), first_difference: diff, note: note.into() })
    }
}

/// Decomposes f_{k,D}|Σλ_nT_n. Each constituent f_{k,D'} is decomposed with
/// pole clearing, the algebraic parts are summed over a common denominator,
/// and the cusp coefficients are computed twice: from the Fourier formula
/// (limited by its a-tail) and, when g_λ exists, from the residue pairing
/// (full precision). Algebraic cusp coefficients are folded into the
/// algebraic part; the reported remainder is what recognition leaves over.
pub fn hecke_combination(k: u32, d: i64, lambda: &[i64], opts: &DecompOptions) -> Result<HeckeCombination> {
    FkdSpec::new(k, d)?;
    if lambda.iter().all(|&l| l == 0) {
        return Err(Error::InvalidArgument("λ must have a nonzero entry".into()));
    }
    let mut o = opts.clone();
    loop {
        match hecke_at(k, d, lambda, &o) {
            Err(Error::Unrecognized(_)) | Err(Error::Precision(_)) if o.digits * 2 <= o.max_digits => o.digits *= 2,
            r => return r,
        }
    }
}

fn hecke_at(k: u32, d: i64, lambda: &[i64], opts: &DecompOptions) -> Result<HeckeCombination> {
    let obstruction = borcherds_obstruction(k as i64, lambda);
    let mut constituents = Combination::new();
    for (i, &l) in lambda.iter().enumerate() {
        if l != 0 {
            for (dd, c) in hecke_on_f(k, d, i as u64 + 1)? {
                add_into(&mut constituents, dd, c * l);
            }
        }
    }
    let field = surd_field(d);
    let bits = bits_for_digits(opts.digits);
    let sign = opts.convention.sign(k);
    // common denominator over every pole discriminant of every constituent
    let mut discs: Vec<i64> = Vec::new();
    for &dd in constituents.keys() {
        for d0 in pole_discriminants(dd) {
            if !discs.contains(&d0) {
                discs.push(d0);
            }
        }
    }
    discs.sort_unstable_by(|a, b| b.cmp(a));
    let denominator: Vec<(FormPoly, u32)> = discs.iter().map(|&d0| Ok((phi_poly(d0)?, k))).collect::<Result<_>>()?;
    let mut numerator = FormPoly::zero();
    let dcusp = cusp_dim(2 * k as i64);
    let n_f = dcusp + opts.guard_terms;
    let mut fourier_total: Vec<(Float, f64)> = vec![(Float::with_val(bits, 0), f64::NEG_INFINITY); n_f];
    for (&dd, c) in &constituents {
        let part = general_route(k, dd, sign, bits, &field)?;
        // multiply by the Φ factors this constituent lacks
        let own = pole_discriminants(dd);
        let mut extra = FormPoly::constant(HNumber::integer(1));
        for (&d0, (phi, e)) in discs.iter().zip(&denominator) {
            if !own.contains(&d0) {
                extra = extra.mul(&phi.pow(*e)?)?;
            }
        }
        numerator = numerator.add(&part.numerator.mul(&extra)?.scale(&Rational::from(c)))?;
        let fv = fourier_values(k, dd, n_f, opts)?;
        for (t, (v, e)) in fourier_total.iter_mut().zip(fv) {
            t.0 += v * c;
            let err = 10f64.powf(e) * c.to_f64().abs();
            t.1 = (10f64.powf(t.1) + err).log10();
        }
    }
    let mut algebraic = AlgebraicPart { numerator, denominator };
    // the algebraic part has zero q^1..q^d coefficients, so these are the cusp part
    let (fourier_cusp, _) = remainder_from(k, &algebraic, &fourier_total, dcusp, bits)?;
    let mut residue_cusp = None;
    let mut cusp_algebraic = None;
    let mut remainder = fourier_cusp.clone();
    if obstruction.passes() && dcusp > 0 {
        let wb = bits + 64;
        let (g_num, np) = weakly_holomorphic_poly(k, lambda)?;
        let mut vals = Vec::with_capacity(dcusp);
        for m in 1..=dcusp as u64 {
            // (F)_m = Σ_n λ_n (f|T_m)_n = const((f|T_m)·g)
            let mut v = BigComplex::zero(wb);
            for (dd, c) in hecke_on_f(k, d, m)? {
                let p = pairing_with_weakly_holomorphic(k, dd, &g_num, np, wb)?;
                v += &p.scale(&Float::with_val(wb, Integer::from(&c * sign)));
            }
            vals.push(v);
        }
        let recognized = recognize_all(&vals, &field, bits)?;
        let basis = cusp_basis(2 * k as i64, dcusp + 1);
        let mut p_all = FormPoly::constant(HNumber::integer(1));
        for (f, e) in &algebraic.denominator {
            p_all = p_all.mul(&f.pow(*e)?)?;
        }
        let mut cusp = FormPoly::zero();
        for (h, b) in recognized.iter().zip(&basis) {
            cusp = cusp.add(&series_to_poly(b, 2 * k as i64)?.scale_h(h)?)?;
        }
        algebraic.numerator = algebraic.numerator.add(&cusp.mul(&p_all)?)?;
        remainder = vals
            .iter()
            .zip(&recognized)
            .enumerate()
            .map(|(i, (v, h))| {
                let left = Float::with_val(bits, &(v - &h.embed(wb)).re);
                RemainderCoeff { r: i as u64 + 1, value: left, err_log10: -(opts.digits as f64) }
            })
            .collect();
        residue_cusp = Some(vals);
        cusp_algebraic = Some(recognized);
    }
    // after folding, the algebraic part alone must predict every Fourier coefficient
    let free = if cusp_algebraic.is_some() { 0 } else { dcusp };
    let (_, guards) = remainder_from(k, &algebraic, &fourier_total, free, bits)?;
    let remainder_zero = is_zero_remainder(&remainder, opts.digits);
    let decomposition = Decomposition {
        k,
        d,
        convention: opts.convention,
        normalization: Normalization::Canonical,
        field,
        algebraic,
        class_coeffs: None,
        cusp_dim: dcusp,
        remainder,
        guards,
        remainder_zero,
        digits: opts.digits,
    };
    Ok(HeckeCombination {
        k,
        d,
        lambda: lambda.to_vec(),
        obstruction,
        constituents,
        decomposition,
        fourier_cusp,
        residue_cusp,
        cusp_algebraic,
    })
}

/// Parses "24,1" into λ = (λ_1, λ_2, …).
pub fn parse_lambda(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| Error::InvalidArgument(format!("bad λ entry {t:?}"))))
        .collect()
}

/// Signed factorization "−2^24*3*13" of a nonzero integer.
pub fn factor_string(n: &Integer) -> String {
    if *n == 0 {
        return "0".into();
    }
    let sign = if *n < 0 { "-" } else { "" };
    let mut m = Integer::from(n.abs_ref());
    let mut parts = Vec::new();
    let mut p = Integer::from(2);
    while Integer::from(&p * &p) <= m && p < 100_000 {
        let mut e = 0;
        while m.is_divisible(&p) {
            m /= &p;
            e += 1;
        }
        if e > 0 {
            parts.push(if e == 1 { p.to_string() } else { format!("{p}^{e}") });
        }
        p += 1;
    }
    if m > 1 || parts.is_empty() {
        parts.push(m.to_string());
    }
    format!("{sign}{}", parts.join("*"))
}

/// (Σ n_i·monomial_i)/(L·√m·den) with integers n_i, the way closed forms are
/// usually printed. Needs every numerator coefficient in Q or in Q·√m.
pub fn table_style(a: &AlgebraicPart) -> Option<String> {
    let terms: Vec<_> = a.numerator.terms.iter().collect();
    if terms.is_empty() {
        return Some("0".into());
    }
    let field = a.numerator.field();
    let surd = field.surd;
    let on_surd = surd != 1 && terms.iter().all(|(_, c)| c.coords[0].cmp0().is_eq());
    let rational = terms.iter().all(|(_, c)| c.coords.iter().skip(1).all(|x| x.cmp0().is_eq()));
    if !on_surd && !rational {
        return None;
    }
    // coefficient = n/(L√m) → n = coefficient·m·L when on the surd
    let vals: Vec<Rational> =
        terms.iter().map(|(_, c)| if on_surd { Rational::from(&c.coords[1] * surd) } else { c.coords[0].clone() }).collect();
    let l = vals.iter().fold(Integer::from(1), |acc, v| acc.lcm(v.denom()));
    let mut ordered: Vec<(Monomial, Integer)> =
        terms.iter().zip(&vals).map(|((m, _), v)| (**m, (v * Rational::from(&l)).numer().clone())).collect();
    ordered.sort_by_key(|(m, _)| (std::cmp::Reverse(m.delta), m.e4, m.e6));
    let g = ordered.iter().fold(Integer::new(), |acc, (_, n)| acc.gcd(n));
    let neg = ordered.iter().all(|(_, n)| *n < 0) && ordered.len() == 1;
    let mut num = String::new();
    for (i, (m, n)) in ordered.iter().enumerate() {
        let n = if neg { Integer::from(-n) } else { n.clone() };
        let body = if n.clone().abs() == 1 { m.to_string() } else { format!("{}*{m}", factor_string(&Integer::from(n.abs_ref()))) };
        if i == 0 {
            num.push_str(&if n < 0 { format!("-{body}") } else { body });
        } else {
            num.push_str(&format!(" {} {body}", if n < 0 { "-" } else { "+" }));
        }
    }
    let _ = g;
    let mut den_parts = Vec::new();
    if l != 1 {
        den_parts.push(factor_string(&l));
    }
    if on_surd {
        den_parts.push(format!("sqrt({surd})"));
    }
    for (f, e) in &a.denominator {
        let part = match (f.terms.len(), e) {
            (1, _) => f.pow(*e).map(|p| p.to_string()).unwrap_or_else(|_| format!("({f})^{e}")),
            (_, 1) => format!("({f})"),
            _ => format!("({f})^{e}"),
        };
        den_parts.push(part);
    }
    let sign = if neg { "-" } else { "" };
    Some(format!("{sign}({num})/({})", den_parts.join("*")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_square_discriminants_give_rational_fields() {
        assert_eq!(surd_field(-4).dim(), 1);
        assert_eq!(surd_field(-16).dim(), 1);
        assert_eq!(surd_field(-12).surd, 3);
        let cd = decompose_class(3, &Bqf::new(1, 0, 1), 100, Convention::Lattice).unwrap();
        assert_eq!(cd.field.dim(), 1);
        // Δ/E6 = q + 480q² + … carries the q-coefficient −156 alone
        assert_eq!(cd.coeffs[1].1.to_rational(), Some(Rational::from(-156)));
    }

    #[test]
    fn weight_triples_examples() {
        let t = weight_triple(98).unwrap();
        assert_eq!((t.delta, t.epsilon, t.m), (2, 1, 7));
        let t = weight_triple(28).unwrap();
        assert_eq!((t.delta, t.epsilon, t.m), (1, 0, 2));
    }

    #[test]
    fn psi_basis_at_rho() {
        let zero = HNumber::integer(0);
        let b: Vec<String> = psi_basis(36, &zero).unwrap().iter().map(|p| p.to_string()).collect();
        assert_eq!(b, vec!["Delta^3", "E4^3*Delta^2", "E4^6*Delta"]);
        let b: Vec<String> = psi_basis(28, &zero).unwrap().iter().map(|p| p.to_string()).collect();
        assert_eq!(b, vec!["E4*Delta^2", "E4^4*Delta"]);
    }

    #[test]
    fn hecke_t2_on_weight_twelve() {
        let c = hecke_on_f(6, -3, 2).unwrap();
        assert_eq!(c.get(&-12), Some(&Integer::from(2048)));
        assert_eq!(c.get(&-3), Some(&Integer::from(-32)));
        assert_eq!(c.len(), 2);
        assert_eq!(format_combination(6, &c), "2048*f_{6,-12} - 32*f_{6,-3}");
    }

    #[test]
    fn hecke_t4_recursion() {
        // T_4 = T_2² − 2^{2k−1}
        let k = 3;
        let t2 = hecke_on_f(k, -3, 2).unwrap();
        let mut t2t2 = Combination::new();
        for (d, c) in &t2 {
            for (dd, cc) in hecke_on_f(k, *d, 2).unwrap() {
                add_into(&mut t2t2, dd, cc * c);
            }
        }
        add_into(&mut t2t2, -3, -Integer::from(32));
        assert_eq!(hecke_on_f(k, -3, 4).unwrap(), t2t2);
    }

    #[test]
    fn series_round_trip() {
        let p = FormPoly::rational(&[(Rational::from(3), Monomial::new(3, 0, 0)), (Rational::from(-7), Monomial::new(0, 0, 1))]);
        let s = p.expand_rational(6).unwrap();
        assert_eq!(series_to_poly(&s, 12).unwrap(), p);
    }

    #[test]
    fn factor_strings() {
        assert_eq!(factor_string(&Integer::from(-(1i64 << 24) * 39)), "-2^24*3*13");
        assert_eq!(factor_string(&Integer::from(1)), "1");
    }

    #[test]
    fn lambda_parsing() {
        assert_eq!(parse_lambda("24,1").unwrap(), vec![24, 1]);
        assert!(parse_lambda("2,x").is_err());
    }
}
