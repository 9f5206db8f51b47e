//! Brute-force local solvability of diagonal equations by lifting
//! approximate zeros, independent of the symbol formulas.

use crate::error::{Error, Result};
use crate::exactalg::FieldElement;
use crate::places::{GlobalField, Place};

struct Search<'a, F: GlobalField> {
    k: &'a F,
    v: &'a Place,
    d: Vec<F::Elem>,
    pi: F::Elem,
    digits: Vec<F::Elem>,
    precision: u32,
}

impl<F: GlobalField> Search<'_, F> {
    fn ord(&self, x: &F::Elem) -> Result<Option<i64>> {
        self.k.ord(self.v, x)
    }

    fn eval(&self, x: &[F::Elem]) -> F::Elem {
        self.d.iter().zip(x).fold(self.k.zero(), |acc, (c, xi)| acc + c.clone() * xi.clone() * xi.clone())
    }

    /// Hensel: a true zero lies near `x` once `ord F(x) > 2 ord(d_i x_i)`
    /// for some `i` (the partial derivative is `2 d_i x_i`, `2` a unit).
    fn certified(&self, x: &[F::Elem]) -> Result<bool> {
        let fx = self.ord(&self.eval(x))?;
        for (c, xi) in self.d.iter().zip(x) {
            if let Some(o) = self.ord(&(c.clone() * xi.clone()))? {
                if fx.is_none_or(|f| f > 2 * o) {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    fn vector(&self, base: &[F::Elem], step: &F::Elem, mut code: u64) -> Vec<F::Elem> {
        let q = self.digits.len() as u64;
        base.iter()
            .map(|b| {
                let digit = &self.digits[(code % q) as usize];
                code /= q;
                b.clone() + step.clone() * digit.clone()
            })
            .collect()
    }

    /// `x` is a zero mod `π^j`; try every lift to `π^{j+1}`.
    fn dfs(&self, x: &[F::Elem], j: u32, step: &F::Elem) -> Result<bool> {
        if self.certified(x)? {
            return Ok(true);
        }
        if j >= self.precision {
            return Err(Error::Invariant(format!("uncertified zero at certified precision {j}")));
        }
        let total = (self.digits.len() as u64).pow(self.d.len() as u32);
        let next = step.clone() * self.pi.clone();
        for code in 0..total {
            let y = self.vector(x, step, code);
            if self.ord(&self.eval(&y))?.is_none_or(|o| o > j as i64) && self.dfs(&y, j + 1, &next)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Primitive residue vectors with first nonzero coordinate `1`; every
    /// primitive zero is a unit multiple of one of these.
    fn roots(&self) -> Result<bool> {
        let q = self.digits.len() as u64;
        let total = q.pow(self.d.len() as u32);
        let zeros = vec![self.k.zero(); self.d.len()];
        for code in 1..total {
            let x = self.vector(&zeros, &self.k.one(), code);
            if !x.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_one()) {
                continue;
            }
            if self.ord(&self.eval(&x))?.is_none_or(|o| o >= 1) && self.dfs(&x, 1, &self.pi)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Whether `sum d_i x_i^2 = 0` has a nontrivial solution in the completion
/// at the finite place `v` of odd residue characteristic.
///
/// Each `d_i` is first divided by an even power of `π` (the substitution
/// `x_i -> π^s x_i`), leaving valuations in `{0, 1}`; with `e` the largest
/// one, a primitive zero mod `π^k` with `k > 2e` always lifts. The search
/// walks primitive zeros mod `π^j` depth first and stops at the first
/// Hensel-certified one. Precisions below `2e + 1` are refused.
pub fn isotropic_oracle<F: GlobalField>(k: &F, v: &Place, d: &[F::Elem], precision: u32) -> Result<bool> {
    if !v.is_finite() || matches!(v, Place::Prime(2)) || k.characteristic() == 2 {
        return Err(Error::UnsupportedPlace(v.to_string()));
    }
    if d.iter().any(|c| c.is_zero()) {
        return Err(Error::ZeroArgument("form coefficient"));
    }
    let pi = k.uniformizer(v)?;
    let mut reduced = Vec::with_capacity(d.len());
    for c in d {
        let o = k.ord(v, c)?.expect("nonzero");
        reduced.push(c.clone() * pi.pow_i64(-2 * o.div_euclid(2)).expect("uniformizer is nonzero"));
    }
    let e = needed_precision(k, v, &reduced)?;
    if precision < e {
        return Err(Error::InsufficientPrecision { needed: e, given: precision });
    }
    if reduced.len() < 2 {
        return Ok(false);
    }
    let rf = k.residue_field(v)?;
    let digits = (0..rf.size()).map(|r| k.lift(v, &rf.elem(r))).collect::<Result<_>>()?;
    Search { k, v, d: reduced, pi, digits, precision }.roots()
}

fn needed_precision<F: GlobalField>(k: &F, v: &Place, d: &[F::Elem]) -> Result<u32> {
    let mut e = 0;
    for c in d {
        e = e.max(k.ord(v, c)?.expect("nonzero"));
    }
    Ok(2 * e as u32 + 1)
}

/// The precision used by the harness: two steps beyond the lifting bound
/// of the reduced form, i.e. `2e + 3` with `e <= 1`.
pub const SAFE_PRECISION: u32 = 5;

/// Whether `sum c_i x_i^2 = c` is solvable at `v` (nontrivially when
/// `c = 0`).
pub fn local_solvability_oracle<F: GlobalField>(
    k: &F,
    v: &Place,
    coeffs: &[F::Elem],
    c: &F::Elem,
    precision: u32,
) -> Result<bool> {
    let mut d = coeffs.to_vec();
    if !c.is_zero() {
        d.push(-c.clone());
    }
    isotropic_oracle(k, v, &d, precision)
}

/// `(a, b)_v` from `z^2 = a x^2 + b y^2`.
pub fn hilbert_oracle<F: GlobalField>(k: &F, v: &Place, a: &F::Elem, b: &F::Elem, precision: u32) -> Result<i8> {
    let d = [k.one(), -a.clone(), -b.clone()];
    Ok(if isotropic_oracle(k, v, &d, precision)? { 1 } else { -1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::places::{FunctionField, Rationals};

    #[test]
    fn oracle_examples() {
        let k = FunctionField::new(3).unwrap();
        let e = |s: &str| k.parse_elem(s).unwrap();
        let t = k.parse_place("finite:t").unwrap();
        assert!(isotropic_oracle(&k, &t, &[e("1"), e("-1")], 1).unwrap());
        let norm = [e("1"), e("-2"), e("-t"), e("2*t")];
        assert!(!isotropic_oracle(&k, &t, &norm, 3).unwrap());
        assert!(matches!(
            isotropic_oracle(&k, &t, &norm, 2),
            Err(Error::InsufficientPrecision { needed: 3, given: 2 })
        ));
        assert_eq!(hilbert_oracle(&k, &t, &k.t(), &k.t(), SAFE_PRECISION).unwrap(), -1);
        // 2 is a nonsquare mod 3
        assert_eq!(hilbert_oracle(&k, &t, &e("t^3"), &e("2*t^4"), SAFE_PRECISION).unwrap(), -1);
        assert_eq!(hilbert_oracle(&k, &t, &e("t^3"), &e("t^4"), SAFE_PRECISION).unwrap(), 1);
        let q = Rationals;
        let p5 = Place::Prime(5);
        assert_eq!(hilbert_oracle(&q, &p5, &q.from_i64(2), &q.from_i64(5), SAFE_PRECISION).unwrap(), -1);
        assert_eq!(hilbert_oracle(&q, &p5, &q.from_i64(-1), &q.from_i64(5), SAFE_PRECISION).unwrap(), 1);
        assert!(hilbert_oracle(&q, &Place::Prime(2), &q.one(), &q.one(), 9).is_err());
        // 3 is not a sum of two squares in Q_3
        assert!(!local_solvability_oracle(&q, &Place::Prime(3), &[q.one(), q.one()], &q.from_i64(3), 5).unwrap());
        assert!(local_solvability_oracle(&q, &Place::Prime(3), &[q.one(), q.one()], &q.from_i64(-1), 5).unwrap());
    }
}
