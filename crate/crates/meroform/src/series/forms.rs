//! Eisenstein series, Δ and j; Hecke operators on q-expansions; echelon
//! bases of cusp forms; weakly holomorphic forms with a given principal part.

use std::collections::BTreeMap;

use rug::{Complete, Integer, Rational};

use super::{divisor_sums, QSeries};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CanonicalForm {
    E2,
    E4,
    E6,
    Delta,
    J,
}

impl std::str::FromStr for CanonicalForm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "e2" => Ok(CanonicalForm::E2),
            "e4" => Ok(CanonicalForm::E4),
            "e6" => Ok(CanonicalForm::E6),
            "delta" | "δ" => Ok(CanonicalForm::Delta),
            "j" => Ok(CanonicalForm::J),
            _ => Err(Error::InvalidArgument(format!("unknown form {s:?} (E2, E4, E6, Delta, j)"))),
        }
    }
}

fn eisenstein(k: u32, c: i64, trunc: usize) -> QSeries {
    let sig = divisor_sums(k - 1, trunc);
    let mut coeffs: Vec<Rational> = sig.into_iter().map(|s| Rational::from(s * c)).collect();
    coeffs[0] = Rational::from(1);
    QSeries::from_coeffs(0, coeffs, trunc as i64)
}

/// `n_terms` coefficients counted from the natural valuation
/// (0 for the Eisenstein series, 1 for Δ, −1 for j).
pub fn canonical_form(name: CanonicalForm, n_terms: usize) -> QSeries {
    let n = n_terms.max(1);
    match name {
        CanonicalForm::E2 => eisenstein(2, -24, n),
        CanonicalForm::E4 => eisenstein(4, 240, n),
        CanonicalForm::E6 => eisenstein(6, -504, n),
        CanonicalForm::Delta | CanonicalForm::J => {
            let e4 = eisenstein(4, 240, n + 1);
            let e6 = eisenstein(6, -504, n + 1);
            let e4c = e4.pow(3).expect("nonnegative power");
            let delta = (&e4c - &(&e6 * &e6)).scale(&Rational::from((1, 1728)));
            if name == CanonicalForm::Delta {
                delta
            } else {
                e4c.div(&delta).expect("Δ has leading coefficient 1")
            }
        }
    }
}

/// weight = 4δ + 6ε + 12M with δ ∈ {0,1,2}, ε ∈ {0,1} and M maximal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeightTriple {
    pub delta: u32,
    pub epsilon: u32,
    pub m: u32,
}

pub fn weight_triple(weight: i64) -> Option<WeightTriple> {
    if weight < 0 || weight % 2 != 0 || weight == 2 {
        return None;
    }
    let (delta, epsilon, rest) = match weight % 12 {
        0 => (0, 0, 0),
        4 => (1, 0, 4),
        6 => (0, 1, 6),
        8 => (2, 0, 8),
        10 => (1, 1, 10),
        _ => (2, 1, 14), // weight ≡ 2 (mod 12)
    };
    Some(WeightTriple { delta, epsilon, m: ((weight - rest) / 12) as u32 })
}

/// dim S_weight(SL₂(ℤ)).
pub fn cusp_dim(weight: i64) -> usize {
    weight_triple(weight).map_or(0, |t| t.m as usize)
}

/// E4^δ E6^ε Δ^m E4^{3(M−m)}, m = 0..=M: a basis of M_weight whose m-th
/// element starts at q^m.
pub fn modular_basis(weight: i64, trunc: i64) -> Vec<QSeries> {
    let Some(t) = weight_triple(weight) else { return Vec::new() };
    let n = trunc.max(1) as usize + 1;
    let e4 = canonical_form(CanonicalForm::E4, n);
    let e6 = canonical_form(CanonicalForm::E6, n);
    let delta = canonical_form(CanonicalForm::Delta, n);
    let e4c = e4.pow(3).expect("power");
    let head = &e4.pow(t.delta as i64).expect("power") * &e6.pow(t.epsilon as i64).expect("power");
    (0..=t.m)
        .map(|m| {
            let s = &(&head * &delta.pow(m as i64).expect("power")) * &e4c.pow((t.m - m) as i64).expect("power");
            s.truncate(trunc)
        })
        .collect()
}

/// Echelon basis of S_weight: the i-th form is q^{i+1} + O(q^{dim+1}).
/// `n_terms` coefficients from q^1 on are kept.
pub fn cusp_basis(weight: i64, n_terms: usize) -> Vec<QSeries> {
    let trunc = n_terms as i64 + 1;
    let dim = cusp_dim(weight);
    let inner = trunc.max(dim as i64 + 1);
    let mut basis: Vec<QSeries> = modular_basis(weight, inner).into_iter().skip(1).collect();
    for j in (0..dim).rev() {
        for i in j + 1..dim {
            let c = basis[j].coeff(i as i64 + 1);
            if c.cmp0().is_ne() {
                basis[j] = &basis[j] - &basis[i].scale(&c);
            }
        }
    }
    basis.into_iter().map(|b| b.truncate(trunc)).collect()
}

/// The Hecke operator T_m on a holomorphic q-expansion of the given weight:
/// the n-th coefficient becomes ∑_{a | (n,m)} a^{weight−1} c(nm/a²).
pub fn hecke_on_series(f: &QSeries, weight: i64, m: u64) -> Result<QSeries> {
    if m == 0 {
        return Err(Error::InvalidArgument("Hecke index must be positive".into()));
    }
    if f.valuation() < 0 {
        return Err(Error::NegativeValuation(f.valuation()));
    }
    let t = f.trunc_order();
    let m = m as i64;
    // c'(n) needs c(nm), known iff nm < t
    let trunc = if t <= 0 { 0 } else { (t + m - 1) / m };
    let mut coeffs = Vec::with_capacity(trunc as usize);
    for n in 0..trunc {
        let g = Integer::from(n).gcd(&Integer::from(m)).to_i64().expect("small gcd");
        let mut acc = Rational::new();
        for a in 1..=g {
            if g % a != 0 {
                continue;
            }
            let idx = n * m / (a * a);
            let c = f.coeff(idx);
            if c.cmp0().is_ne() {
                acc += c * Integer::u_pow_u(a as u32, (weight - 1) as u32).complete();
            }
        }
        coeffs.push(acc);
    }
    Ok(QSeries::from_coeffs(0, coeffs, trunc))
}

#[derive(Clone, Debug, PartialEq)]
pub enum Obstruction {
    Pass,
    /// (index into the echelon cusp basis, value of ∑ λ_n c_n)
    Fail(Vec<(usize, Rational)>),
}

impl Obstruction {
    pub fn passes(&self) -> bool {
        matches!(self, Obstruction::Pass)
    }
}

/// `lambda[n-1]` is λ_n.
pub fn borcherds_obstruction(k: i64, lambda: &[i64]) -> Obstruction {
    let basis = cusp_basis(2 * k, lambda.len().max(1));
    let mut fails = Vec::new();
    for (i, b) in basis.iter().enumerate() {
        let mut s = Rational::new();
        for (n, l) in lambda.iter().enumerate() {
            if *l != 0 {
                s += b.coeff(n as i64 + 1) * Integer::from(*l);
            }
        }
        if s.cmp0().is_ne() {
            fails.push((i, s));
        }
    }
    if fails.is_empty() {
        Obstruction::Pass
    } else {
        Obstruction::Fail(fails)
    }
}

/// The weakly holomorphic form ∑ λ_n q^{−n} + O(1) of the given weight (≤ 0),
/// known below q^trunc. It is made unique by requiring zero coefficients at
/// every nonnegative exponent where the space has a free parameter, which only
/// matters in weight 0 (constant term 0).
pub fn weakly_holomorphic(weight: i64, lambda: &[i64], trunc: i64) -> Result<QSeries> {
    if weight > 0 || weight % 2 != 0 {
        return Err(Error::InvalidArgument(format!("weight {weight} must be even and ≤ 0")));
    }
    let n = lambda.iter().rposition(|&l| l != 0).map_or(0, |i| i as i64 + 1);
    let trunc = trunc.max(0);
    let mut target: BTreeMap<i64, Rational> = BTreeMap::new();
    for (i, &l) in lambda.iter().enumerate() {
        if l != 0 {
            target.insert(-(i as i64) - 1, Rational::from(l));
        }
    }
    // Δ^{-N} M_{weight+12N} contains every form with a pole of order ≤ N at ∞
    let inner = trunc + n + 1;
    let delta_inv = canonical_form(CanonicalForm::Delta, inner as usize + 2).pow(-n)?;
    let basis: Vec<QSeries> = modular_basis(weight + 12 * n, inner)
        .iter()
        .map(|b| (b * &delta_inv).truncate(trunc))
        .collect();
    let mut g = QSeries::zero(trunc);
    for e in -n..trunc {
        let want = target.get(&e).cloned().unwrap_or_default();
        let have = g.coeff(e);
        let m = (e + n) as usize;
        if m < basis.len() {
            let x = want - have;
            if x.cmp0().is_ne() {
                g = &g + &basis[m].scale(&x);
            }
        } else if e < 0 && want != have {
            let k = (2 - weight) / 2;
            let violations = match borcherds_obstruction(k, lambda) {
                Obstruction::Fail(v) => v.into_iter().map(|(i, r)| (i, r.to_string())).collect(),
                Obstruction::Pass => Vec::new(),
            };
            return Err(Error::NoExistence { violations });
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_coefficients() {
        let d = canonical_form(CanonicalForm::Delta, 6);
        assert_eq!(d.trunc_order(), 7);
        let tau = [1, -24, 252, -1472, 4830, -6048];
        for (i, t) in tau.iter().enumerate() {
            assert_eq!(d.coeff(i as i64 + 1), *t);
        }
    }

    #[test]
    fn j_expansion() {
        let j = canonical_form(CanonicalForm::J, 3);
        assert_eq!(j, QSeries::from_integers(-1, &[1, 744, 196884], 2));
    }

    #[test]
    fn weight_triples() {
        assert_eq!(weight_triple(36), Some(WeightTriple { delta: 0, epsilon: 0, m: 3 }));
        assert_eq!(weight_triple(28), Some(WeightTriple { delta: 1, epsilon: 0, m: 2 }));
        assert_eq!(weight_triple(98), Some(WeightTriple { delta: 2, epsilon: 1, m: 7 }));
        assert_eq!(weight_triple(2), None);
    }

    #[test]
    fn cusp_dimensions() {
        let dims = [(4, 0), (12, 1), (14, 0), (24, 2), (26, 1), (36, 3), (38, 2)];
        for (w, d) in dims {
            assert_eq!(cusp_dim(w), d, "weight {w}");
            assert_eq!(cusp_basis(w, 5).len(), d);
        }
    }

    #[test]
    fn echelon_shape() {
        let b = cusp_basis(36, 6);
        for (i, f) in b.iter().enumerate() {
            for e in 1..=3 {
                let want = if e == i as i64 + 1 { 1 } else { 0 };
                assert_eq!(f.coeff(e), want);
            }
        }
    }

    #[test]
    fn hecke_t2_on_delta() {
        let d = canonical_form(CanonicalForm::Delta, 20);
        let t2 = hecke_on_series(&d, 12, 2).unwrap();
        assert_eq!(t2.trunc_order(), 11);
        assert_eq!(t2, d.scale(&Rational::from(-24)).truncate(11));
    }

    #[test]
    fn hecke_truncation_rounds_up() {
        // coefficients of q^0..q^9 known; T_3 needs c(3n) for n < 4
        let f = canonical_form(CanonicalForm::E4, 10);
        assert_eq!(hecke_on_series(&f, 4, 3).unwrap().trunc_order(), 4);
    }

    #[test]
    fn hecke_rejects_poles() {
        let j = canonical_form(CanonicalForm::J, 5);
        assert!(matches!(hecke_on_series(&j, 0, 2), Err(Error::NegativeValuation(-1))));
    }

    #[test]
    fn obstruction_examples() {
        assert!(borcherds_obstruction(6, &[24, 1]).passes());
        assert_eq!(borcherds_obstruction(6, &[1]), Obstruction::Fail(vec![(0, Rational::from(1))]));
        assert!(borcherds_obstruction(2, &[5, -3, 7]).passes());
    }

    #[test]
    fn weakly_holomorphic_weight_zero_is_j_minus_744() {
        let g = weakly_holomorphic(0, &[1], 3).unwrap();
        assert_eq!(g, QSeries::from_integers(-1, &[1, 0, 196884, 21493760], 3));
    }

    #[test]
    fn no_weight_minus_ten_form_with_simple_pole() {
        match weakly_holomorphic(-10, &[1], 3) {
            Err(Error::NoExistence { violations }) => assert_eq!(violations, vec![(0, "1".to_string())]),
            other => panic!("unexpected {other:?}"),
        }
    }
}
