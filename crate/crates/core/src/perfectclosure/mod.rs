//! The perfect closure of `F_q(t)`, `p > 2`, and the existential
//! definition of its valuation rings.

pub mod definition;
pub mod element;

pub use definition::*;
pub use element::{PerfElement, PerfectClosure};
