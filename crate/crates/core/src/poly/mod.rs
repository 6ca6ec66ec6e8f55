//! Sparse multivariate polynomials over exact rationals: arithmetic,
//! Gröbner bases, elimination, and localised rings.

pub(crate) mod arith;
mod element;
pub(crate) mod groebner;
mod ideal;
pub mod linalg;
mod monomial;
mod parse;
mod print;
mod ring;

pub use element::Poly;
pub use ideal::Ideal;
pub use monomial::{monomials_up_to, Monomial, MonomialOrder};
pub use ring::PolyRing;

pub(crate) use ring::{check_same_ring, same_ring};

pub use arith::{coef_int, coef_ratio, Coef};
