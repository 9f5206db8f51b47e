//! Exact arithmetic: integers, finite fields, polynomials, rational functions.

pub mod finite_field;
pub mod integer;
pub mod parse;
pub mod poly;
pub mod ratfunc;
pub mod scalar;

pub use finite_field::{find_nonsquare_shift, FFElem, FiniteField};
pub use poly::Poly;
pub use ratfunc::RatFunc;
pub use scalar::FieldElement;
