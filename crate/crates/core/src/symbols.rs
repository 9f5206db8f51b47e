//! Hilbert symbols, ramification sets and quaternion algebras with
//! prescribed ramification.

use crate::error::{Error, Result};
use crate::exactalg::FieldElement;
use crate::places::{GlobalField, Place};

/// `(a, b)_v`: `+1` iff `z^2 = a x^2 + b y^2` has a nontrivial solution over
/// the completion at `v`.
pub fn hilbert_symbol<F: GlobalField>(k: &F, v: &Place, a: &F::Elem, b: &F::Elem) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroArgument("Hilbert symbol argument"));
    }
    match v {
        Place::Real => Ok(if k.sign(a)? < 0 && k.sign(b)? < 0 { -1 } else { 1 }),
        Place::Prime(2) => {
            let (alpha, u) = k.dyadic_parts(a)?;
            let (beta, w) = k.dyadic_parts(b)?;
            let eps = |x: u64| ((x - 1) / 2) % 2;
            let omega = |x: u64| ((x * x - 1) / 8) % 2;
            let e = eps(u) * eps(w)
                + alpha.rem_euclid(2) as u64 * omega(w)
                + beta.rem_euclid(2) as u64 * omega(u);
            Ok(if e.is_multiple_of(2) { 1 } else { -1 })
        }
        _ => {
            let alpha = k.ord(v, a)?.expect("nonzero").rem_euclid(2);
            let beta = k.ord(v, b)?.expect("nonzero").rem_euclid(2);
            // character of (-1)^{αβ} a^β / b^α in the residue field
            let mut s = 1i8;
            if alpha * beta == 1 {
                s *= k.unit_character(v, &k.from_i64(-1))?;
            }
            if beta == 1 {
                s *= k.unit_character(v, a)?;
            }
            if alpha == 1 {
                s *= k.unit_character(v, b)?;
            }
            Ok(s)
        }
    }
}

/// The places where `H(a, b)` ramifies, with the symbol at every place
/// inspected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RamificationData {
    pub ram: Vec<Place>,
    pub evidence: Vec<(Place, i8)>,
}

/// Places that can possibly ramify: the support of `a` and `b` plus the
/// always-bad places. Everywhere else both are units of odd residue
/// characteristic and the symbol is `+1`.
pub fn bad_places<F: GlobalField>(k: &F, a: &F::Elem, b: &F::Elem) -> Result<Vec<Place>> {
    let mut out = k.support(a)?;
    out.extend(k.support(b)?);
    out.extend(k.always_bad());
    out.sort();
    out.dedup();
    Ok(out)
}

pub fn ram_set<F: GlobalField>(k: &F, a: &F::Elem, b: &F::Elem) -> Result<RamificationData> {
    let mut evidence = Vec::new();
    for v in bad_places(k, a, b)? {
        let s = hilbert_symbol(k, &v, a, b)?;
        evidence.push((v, s));
    }
    let ram = evidence.iter().filter(|(_, s)| *s == -1).map(|(v, _)| v.clone()).collect();
    Ok(RamificationData { ram, evidence })
}

/// Product of the symbols over all bad places equals `+1`.
pub fn reciprocity_check<F: GlobalField>(k: &F, a: &F::Elem, b: &F::Elem) -> Result<(bool, RamificationData)> {
    let data = ram_set(k, a, b)?;
    let product: i8 = data.evidence.iter().map(|(_, s)| *s).product();
    Ok((product == 1 && data.ram.len() % 2 == 0, data))
}

/// First `(a, b)` in a fixed enumeration whose ramification set is exactly
/// `{v1, v2}`. `b` runs over `u π1 π2`, then `u π1`, then `u π2` for units
/// `u` of the constant field, and `a` over elements of height at most
/// `bound` in enumeration order.
pub fn find_ramified_algebra<F: GlobalField>(
    k: &F,
    v1: &Place,
    v2: &Place,
    bound: u64,
) -> Result<(F::Elem, F::Elem)> {
    if v1 == v2 {
        return Err(Error::Invalid(format!("places must be distinct, got {v1} twice")));
    }
    for v in [v1, v2] {
        if !v.is_finite() || matches!(v, Place::Prime(2)) || k.characteristic() == 2 {
            return Err(Error::UnsupportedPlace(v.to_string()));
        }
    }
    let p1 = k.uniformizer(v1)?;
    let p2 = k.uniformizer(v2)?;
    let units: Vec<F::Elem> = if k.characteristic() == 0 {
        vec![k.one(), k.from_i64(-1)]
    } else {
        let f = k.residue_field(&Place::Infinite).ok();
        match f {
            Some(f) => (1..f.size()).map(|c| k.lift(&Place::Infinite, &f.elem(c))).collect::<Result<_>>()?,
            None => vec![k.one()],
        }
    };
    let mut bs = Vec::new();
    for base in [p1.clone() * p2.clone(), p1, p2] {
        for u in &units {
            bs.push(u.clone() * base.clone());
        }
    }
    let mut want = vec![v1.clone(), v2.clone()];
    want.sort();
    // height strata of `a`, computed on demand
    let mut strata: Vec<Vec<F::Elem>> = Vec::new();
    for b in &bs {
        for h in 0..=bound {
            if strata.len() <= h as usize {
                let layer = k.enumerate(h).into_iter().filter(|x| !x.is_zero() && k.height(x) == h).collect();
                strata.push(layer);
            }
            for a in &strata[h as usize] {
                if ram_set(k, a, b)?.ram == want {
                    return Ok((a.clone(), b.clone()));
                }
            }
        }
    }
    Err(Error::SearchExhausted(format!(
        "no algebra ramified exactly at {v1} and {v2} with height <= {bound}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::places::{FunctionField, Rationals};

    #[test]
    fn symbol_examples() {
        let k = FunctionField::new(3).unwrap();
        let t = k.parse_place("finite:t").unwrap();
        assert_eq!(hilbert_symbol(&k, &t, &k.t(), &k.t()).unwrap(), -1);
        let q = Rationals;
        assert_eq!(hilbert_symbol(&q, &Place::Prime(5), &q.from_i64(2), &q.from_i64(5)).unwrap(), -1);
        assert_eq!(hilbert_symbol(&q, &Place::Prime(2), &q.from_i64(-1), &q.from_i64(-1)).unwrap(), -1);
        assert!(hilbert_symbol(&q, &Place::Real, &q.zero(), &q.one()).is_err());
    }

    #[test]
    fn ram_set_examples() {
        let q = Rationals;
        let m1 = q.from_i64(-1);
        assert_eq!(ram_set(&q, &m1, &m1).unwrap().ram, vec![Place::Prime(2), Place::Real]);
        let k = FunctionField::new(3).unwrap();
        assert!(ram_set(&k, &k.one(), &k.t()).unwrap().ram.is_empty());
        let (ok, data) = reciprocity_check(&k, &k.t(), &k.t()).unwrap();
        assert!(ok);
        assert_eq!(data.ram.len() % 2, 0);
    }

    #[test]
    fn ramified_algebra_examples() {
        let k = FunctionField::new(3).unwrap();
        let v1 = k.parse_place("finite:t").unwrap();
        let v2 = k.parse_place("finite:t+1").unwrap();
        let (a, b) = find_ramified_algebra(&k, &v1, &v2, 2).unwrap();
        assert_eq!(k.format_elem(&a), "2");
        assert_eq!(k.format_elem(&b), "t^2+t");
        assert!(find_ramified_algebra(&k, &v1, &v1, 2).is_err());
        let q = Rationals;
        let (a, b) = find_ramified_algebra(&q, &Place::Prime(3), &Place::Prime(7), 3).unwrap();
        assert_eq!((q.format_elem(&a), q.format_elem(&b)), ("-1".to_string(), "21".to_string()));
        assert!(find_ramified_algebra(&q, &Place::Prime(2), &Place::Prime(7), 3).is_err());
    }
}
