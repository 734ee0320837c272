//! Multiprecision numerics: evaluation of modular forms, Maass–Shimura
//! derivatives at CM points, Chowla–Selberg periods, class polynomials and
//! recognition of algebraic numbers.

pub mod complex;
pub mod hfield;
pub mod eval;
pub mod quasi;
pub mod chowla;
pub mod classpoly;
pub mod recognize;
