//! Chowla–Selberg periods.

use rug::Float;

use super::complex::pi;
use crate::error::{Error, Result};
use crate::quadforms::{class_number, is_fundamental, kronecker, unit_w};

/// Ω_K = (2π|D|)^{−1/2} (∏_{m<|D|} Γ(m/|D|)^{χ_D(m)})^{w/(2h)} for fundamental D < 0.
pub fn chowla_selberg(d: i64, bits: u32) -> Result<Float> {
    if !is_fundamental(d) {
        return Err(Error::NotFundamental(d));
    }
    let wb = bits + 32;
    let n = d.unsigned_abs();
    let mut log_prod = Float::with_val(wb, 0);
    for m in 1..n {
        let chi = kronecker(d, m);
        if chi == 0 {
            continue;
        }
        let g = Float::with_val(wb, Float::with_val(wb, m) / n).ln_gamma();
        if chi > 0 {
            log_prod += g;
        } else {
            log_prod -= g;
        }
    }
    let h = class_number(d)? as u32;
    let w = unit_w(d);
    let e = Float::with_val(wb, log_prod * w) / (2 * h);
    let pre = Float::with_val(wb, pi(wb) * 2u32 * n).sqrt().recip();
    Ok(Float::with_val(bits, pre * e.exp()))
}
