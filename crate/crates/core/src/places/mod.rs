//! Places of global fields: valuations, residues, local squares, approximation.

mod function_field;
mod rationals;

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{FFElem, FieldElement, FiniteField, Poly};

pub use function_field::FunctionField;
pub use rationals::Rationals;

/// A finite place of `F_q(t)`: a monic irreducible polynomial. The residue
/// field is built on first use and shared between clones.
#[derive(Clone)]
pub struct FinitePlace {
    poly: Poly,
    residue: Arc<OnceLock<Result<Arc<FiniteField>>>>,
}

impl FinitePlace {
    pub(crate) fn new_unchecked(poly: Poly) -> Self {
        FinitePlace { poly, residue: Arc::new(OnceLock::new()) }
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.poly.degree().unwrap_or(0)
    }

    pub fn residue_field(&self) -> Result<Arc<FiniteField>> {
        self.residue
            .get_or_init(|| FiniteField::extension(self.poly.field().clone(), self.poly.coeffs().to_vec()))
            .clone()
    }
}

impl PartialEq for FinitePlace {
    fn eq(&self, other: &Self) -> bool {
        self.poly == other.poly
    }
}
impl Eq for FinitePlace {}
impl Hash for FinitePlace {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.poly.hash(state);
    }
}
impl Ord for FinitePlace {
    fn cmp(&self, other: &Self) -> Ordering {
        self.poly.cmp(&other.poly)
    }
}
impl PartialOrd for FinitePlace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl fmt::Debug for FinitePlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Place {
    /// Monic irreducible `π` of `F_q[t]`.
    Finite(FinitePlace),
    /// The degree valuation of `F_q(t)`, `ord(f/g) = deg g - deg f`.
    Infinite,
    /// A rational prime.
    Prime(u64),
    Real,
}

impl Place {
    pub fn is_finite(&self) -> bool {
        matches!(self, Place::Finite(_) | Place::Prime(_))
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "finite:{}", p.poly),
            Place::Infinite => f.write_str("infinite"),
            Place::Prime(l) => write!(f, "prime:{l}"),
            Place::Real => f.write_str("real"),
        }
    }
}

/// A requirement on an element at one place, for [`GlobalField::approximate`].
#[derive(Clone, Debug)]
pub enum Target<E> {
    /// Integral with the given residue.
    Residue(FFElem),
    MinOrd(i64),
    ExactOrd(i64),
    /// `ord(x - value) >= precision`.
    Near { value: E, precision: i64 },
}

/// Serializable description of a supported global field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum FieldSpec {
    /// `F_q(t)` with `q = p^m`; `modulus` defines `F_q` over `F_p` (low degree first).
    #[serde(rename = "FqT")]
    FqT { p: u64, m: u32, q: u64, modulus: Vec<u64> },
    #[serde(rename = "Q")]
    Q,
}

/// A global field together with its places.
///
/// Finite places come in a fixed order (lowest degree or smallest prime
/// first); every deterministic choice in this crate follows it.
pub trait GlobalField: Clone + fmt::Debug + Send + Sync + 'static {
    type Elem: FieldElement;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    /// Characteristic, 0 for `Q`.
    fn characteristic(&self) -> u64;

    fn parse_elem(&self, s: &str) -> Result<Self::Elem>;
    fn format_elem(&self, x: &Self::Elem) -> String;
    fn parse_place(&self, s: &str) -> Result<Place>;

    /// `max(deg num, deg den)` or `max(|num|, den)`.
    fn height(&self, x: &Self::Elem) -> u64;
    /// Every canonical element of height at most `bound`, each once, ordered by
    /// height, then denominator, then numerator.
    fn enumerate(&self, bound: u64) -> Vec<Self::Elem>;

    /// Normalized valuation; `None` is `+∞` (the zero element).
    fn ord(&self, v: &Place, x: &Self::Elem) -> Result<Option<i64>>;
    fn uniformizer(&self, v: &Place) -> Result<Self::Elem>;
    fn residue_field(&self, v: &Place) -> Result<Arc<FiniteField>>;
    fn residue(&self, v: &Place, x: &Self::Elem) -> Result<FFElem>;
    /// A small element with the given residue.
    fn lift(&self, v: &Place, r: &FFElem) -> Result<Self::Elem>;
    /// Quadratic character of the residue of `x / π^ord(x)`; odd residue
    /// characteristic only.
    fn unit_character(&self, v: &Place, x: &Self::Elem) -> Result<i8>;
    fn is_local_square(&self, v: &Place, x: &Self::Elem) -> Result<bool>;
    /// Sign of `x` at the real place.
    fn sign(&self, _x: &Self::Elem) -> Result<i8> {
        Err(Error::UnsupportedPlace("real".into()))
    }
    /// `(ord_2 x, unit part mod 8)` for the dyadic place of `Q`.
    fn dyadic_parts(&self, _x: &Self::Elem) -> Result<(i64, u64)> {
        Err(Error::UnsupportedPlace("prime:2".into()))
    }

    /// Finite places where `x` has nonzero valuation, sorted.
    fn support(&self, x: &Self::Elem) -> Result<Vec<Place>>;
    /// Places that must always be inspected: `∞`, or `2` and the real place.
    fn always_bad(&self) -> Vec<Place>;
    /// Finite places of odd residue characteristic in the fixed order.
    fn finite_places(&self) -> Box<dyn Iterator<Item = Place> + '_>;
    /// Degree of the residue field over the prime field of constants.
    fn place_degree(&self, v: &Place) -> Result<u32>;

    /// An element meeting every target exactly; deterministic, smallest in
    /// height among the candidates examined.
    fn approximate(&self, targets: &[(Place, Target<Self::Elem>)]) -> Result<Self::Elem>;

    /// Number of classes of the residue system modulo `prod v^n`.
    fn residue_system_size(&self, modulus: &[(Place, u32)]) -> Result<u128>;
    /// A complete residue system modulo `prod v^n`, in increasing order.
    fn residue_system(&self, modulus: &[(Place, u32)]) -> Result<Vec<Self::Elem>>;
    /// The member of [`residue_system`](Self::residue_system) congruent to `x`
    /// (`x` integral at every listed place).
    fn reduce_mod(&self, x: &Self::Elem, modulus: &[(Place, u32)]) -> Result<Self::Elem>;

    /// Square root in the field, if any.
    fn sqrt(&self, x: &Self::Elem) -> Option<Self::Elem>;

    fn is_square(&self, x: &Self::Elem) -> bool {
        self.sqrt(x).is_some()
    }

    /// First `n` places from [`finite_places`](Self::finite_places) not in `skip`.
    fn helper_places(&self, skip: &[Place], n: usize) -> Vec<Place> {
        self.finite_places().filter(|v| !skip.contains(v)).take(n).collect()
    }
}

pub(crate) fn check_distinct<E>(targets: &[(Place, Target<E>)]) -> Result<()> {
    for (i, (v, _)) in targets.iter().enumerate() {
        if targets[..i].iter().any(|(w, _)| w == v) {
            return Err(Error::ConflictingPlaces(v.to_string()));
        }
    }
    Ok(())
}

/// Re-check an approximation result against its targets.
pub(crate) fn verify_targets<F: GlobalField>(
    k: &F,
    x: &F::Elem,
    targets: &[(Place, Target<F::Elem>)],
) -> Result<()> {
    for (v, t) in targets {
        let ok = match t {
            Target::Residue(r) => k.ord(v, x)?.is_none_or(|o| o >= 0) && k.residue(v, x)? == *r,
            Target::MinOrd(n) => k.ord(v, x)?.is_none_or(|o| o >= *n),
            Target::ExactOrd(n) => k.ord(v, x)? == Some(*n),
            Target::Near { value, precision } => {
                let d = x.clone() - value.clone();
                k.ord(v, &d)?.is_none_or(|o| o >= *precision)
            }
        };
        if !ok {
            return Err(Error::Invariant(format!("approximation missed target at {v}")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_spec_json() {
        let s = serde_json::to_string(&FieldSpec::Q).unwrap();
        assert_eq!(s, r#"{"kind":"Q"}"#);
        let k = FunctionField::new(9).unwrap();
        let s = serde_json::to_string(&k.spec()).unwrap();
        assert_eq!(s, r#"{"kind":"FqT","p":3,"m":2,"q":9,"modulus":[1,0,1]}"#);
    }
}
