//! Meromorphic modular forms f_{k,D} attached to negative discriminants.
//!
//! f_{k,D}(z) = π^{-k} ∑ (az² + bz + c)^{-k}, summed over all integral
//! forms [a,b,c] with b² − 4ac = D and a > 0, is a meromorphic modular form
//! of weight 2k with poles at CM points. This crate computes it three ways
//! (lattice sums, Fourier coefficients, exact algebraic closed forms) and
//! splits it into an algebraic part plus a cusp form.
//!
//! * [`series`] — exact q-expansions, Hecke operators, cusp-form bases
//! * [`quadforms`] — binary quadratic forms, reduction, CM points
//! * [`numeric`] — multiprecision evaluation, Maass–Shimura derivatives,
//!   class polynomials, algebraic recognition
//! * [`fkd`] — direct summation and the Fourier expansion of f_{k,D}
//! * [`decomp`] — the algebraic/cuspidal decomposition and Hecke combinations

pub mod appendix;
pub mod decomp;
pub mod error;
pub mod fkd;
pub mod numeric;
pub mod quadforms;
pub mod series;

pub use error::{Error, Result};
