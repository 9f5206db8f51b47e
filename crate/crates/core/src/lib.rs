//! Diophantine definitions of valuation rings over `F_q(t)`, `Q` and the
//! perfect closure of `F_q(t)`, built from quaternion algebras ramified at
//! two places and checked against direct valuations.

pub mod diophdef;
pub mod error;
pub mod exactalg;
pub mod harness;
pub mod perfectclosure;
pub mod places;
pub mod quadforms;
pub mod quaternion;
pub mod symbols;

pub use error::{Error, Result};
pub use exactalg::{FFElem, FieldElement, FiniteField, Poly, RatFunc};
pub use num_rational::BigRational;
pub use perfectclosure::{PerfElement, PerfectClosure};
pub use places::{FieldSpec, FunctionField, GlobalField, Place, Rationals};

pub type QuatFqt = quaternion::QuatAlgebra<RatFunc>;
pub type QuatQ = quaternion::QuatAlgebra<BigRational>;
pub type QuatPerf = quaternion::QuatAlgebra<PerfElement>;
pub type FormFqt = quadforms::DiagForm<RatFunc>;
pub type FormQ = quadforms::DiagForm<BigRational>;
pub type DefinitionFqt = diophdef::IntegralityDefinition<FunctionField>;
pub type DefinitionQ = diophdef::IntegralityDefinition<Rationals>;
pub type DefinitionPerf = perfectclosure::PerfIntegralityDefinition;
