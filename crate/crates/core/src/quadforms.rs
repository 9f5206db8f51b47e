//! Local and global isotropy and representation for diagonal quadratic
//! forms.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactalg::FieldElement;
use crate::places::{GlobalField, Place};
use crate::symbols::hilbert_symbol;

/// `<c_1, ..., c_n>`, i.e. `sum c_i x_i^2`, all `c_i` nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagForm<E> {
    coeffs: Vec<E>,
}

impl<E: FieldElement> DiagForm<E> {
    pub fn new(coeffs: Vec<E>) -> Result<Self> {
        if coeffs.iter().any(|c| c.is_zero()) {
            return Err(Error::ZeroArgument("form coefficient"));
        }
        Ok(DiagForm { coeffs })
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    pub fn discriminant(&self) -> Option<E> {
        let mut it = self.coeffs.iter().cloned();
        let first = it.next()?;
        Some(it.fold(first, |acc, c| acc * c))
    }

    /// `f ⊥ <c>`.
    pub fn extend(&self, c: E) -> Result<Self> {
        let mut coeffs = self.coeffs.clone();
        coeffs.push(c);
        DiagForm::new(coeffs)
    }

    pub fn eval(&self, x: &[E]) -> Result<E> {
        if x.len() != self.rank() {
            return Err(Error::Invalid(format!("expected {} coordinates, got {}", self.rank(), x.len())));
        }
        let zero = self.coeffs[0].zero_like();
        Ok(self.coeffs.iter().zip(x).fold(zero, |acc, (c, xi)| acc + c.clone() * xi.clone() * xi.clone()))
    }
}

/// `prod_{i<j} (c_i, c_j)_v`.
pub fn hasse_invariant<F: GlobalField>(k: &F, v: &Place, f: &DiagForm<F::Elem>) -> Result<i8> {
    let c = f.coeffs();
    let mut e = 1i8;
    for i in 0..c.len() {
        for j in (i + 1)..c.len() {
            e *= hilbert_symbol(k, v, &c[i], &c[j])?;
        }
    }
    Ok(e)
}

/// Nontrivial zero over the completion at `v`. With `d` the discriminant and
/// `ε` the Hasse invariant: rank 2 iff `-d` is a square, rank 3 iff
/// `(-1, -d) = ε`, rank 4 iff `d` is not a square or `ε = (-1, -1)`, and
/// always from rank 5 on. At the real place, iff the form is indefinite.
pub fn local_isotropic<F: GlobalField>(k: &F, v: &Place, f: &DiagForm<F::Elem>) -> Result<bool> {
    if k.characteristic() == 2 {
        return Err(Error::CharacteristicTwo);
    }
    if matches!(v, Place::Real) {
        let mut signs = f.coeffs().iter().map(|c| k.sign(c)).collect::<Result<Vec<_>>>()?;
        signs.sort();
        signs.dedup();
        return Ok(signs.len() == 2);
    }
    let m1 = k.from_i64(-1);
    match f.rank() {
        0 | 1 => Ok(false),
        2 => k.is_local_square(v, &-f.discriminant().expect("rank 2")),
        3 => {
            let d = f.discriminant().expect("rank 3");
            Ok(hilbert_symbol(k, v, &m1, &-d)? == hasse_invariant(k, v, f)?)
        }
        4 => {
            let d = f.discriminant().expect("rank 4");
            Ok(!k.is_local_square(v, &d)? || hasse_invariant(k, v, f)? == hilbert_symbol(k, v, &m1, &m1)?)
        }
        _ => Ok(true),
    }
}

/// `f` represents `c ≠ 0` at `v` iff `f ⊥ <-c>` is isotropic.
pub fn local_represents<F: GlobalField>(k: &F, v: &Place, f: &DiagForm<F::Elem>, c: &F::Elem) -> Result<bool> {
    if c.is_zero() {
        return Err(Error::ZeroArgument("represented value"));
    }
    local_isotropic(k, v, &f.extend(-c.clone())?)
}

/// Places outside which `f ⊥ <-c>` has unit coefficients of odd residue
/// characteristic.
pub fn bad_set<F: GlobalField>(k: &F, f: &DiagForm<F::Elem>, c: &F::Elem) -> Result<Vec<Place>> {
    let mut out = Vec::new();
    for x in f.coeffs().iter().chain(std::iter::once(c)) {
        out.extend(k.support(x)?);
    }
    out.extend(k.always_bad());
    out.sort();
    out.dedup();
    Ok(out)
}

/// `f` represents `c ≠ 0` over `k`. For rank at least 2 this is the
/// local-global principle over the bad set: elsewhere `f ⊥ <-c>` is a
/// unimodular form of rank at least 3 and is isotropic. Rank 1 is a global
/// square test.
pub fn global_represents<F: GlobalField>(k: &F, f: &DiagForm<F::Elem>, c: &F::Elem) -> Result<bool> {
    if c.is_zero() {
        return Err(Error::ZeroArgument("represented value"));
    }
    match f.rank() {
        0 => Ok(false),
        1 => Ok(k.is_square(&(c.clone() / f.coeffs()[0].clone()))),
        _ => {
            for v in bad_set(k, f, c)? {
                if !local_represents(k, &v, f, c)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// A nonzero `x` with `f(x) = c`, the first `n - 1` coordinates running
/// over `k.enumerate(bound)` in lexicographic order and the last one solved
/// by a global square root (so its height is not bounded).
pub fn witness_search<F>(k: &F, f: &DiagForm<F::Elem>, c: &F::Elem, bound: u64) -> Option<Vec<F::Elem>>
where
    F: GlobalField + Sync,
    F::Elem: Send + Sync,
{
    let n = f.rank();
    if n == 0 {
        return None;
    }
    let elems = k.enumerate(bound);
    let last = f.coeffs()[n - 1].clone();
    let finish = |rest: F::Elem, prefix: &[usize]| -> Option<Vec<F::Elem>> {
        let y = k.sqrt(&(rest / last.clone()))?;
        let mut out: Vec<F::Elem> = prefix.iter().map(|&i| elems[i].clone()).collect();
        if y.is_zero() && out.iter().all(|x| x.is_zero()) {
            return None;
        }
        out.push(y);
        Some(out)
    };
    if n == 1 {
        return finish(c.clone(), &[]);
    }
    // c_i x^2 for every slot and candidate
    let table: Vec<Vec<F::Elem>> = f.coeffs()[..n - 1]
        .iter()
        .map(|ci| elems.iter().map(|x| ci.clone() * x.square()).collect())
        .collect();
    let count = elems.len();
    let total = count.checked_pow((n - 2) as u32)?;
    (0..count).into_par_iter().find_map_first(|i0| {
        let head = c.clone() - table[0][i0].clone();
        let mut idx = vec![i0; n - 1];
        for code in 0..total {
            let mut r = code;
            let mut rest = head.clone();
            for slot in (1..n - 1).rev() {
                idx[slot] = r % count;
                r /= count;
                rest = rest - table[slot][idx[slot]].clone();
            }
            if let Some(w) = finish(rest, &idx) {
                return Some(w);
            }
        }
        None
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::places::{FunctionField, Rationals};

    #[test]
    fn isotropy_examples() {
        let k = FunctionField::new(3).unwrap();
        let e = |s: &str| k.parse_elem(s).unwrap();
        let t = k.parse_place("finite:t").unwrap();
        let hyp = DiagForm::new(vec![e("1"), e("-1")]).unwrap();
        assert!(local_isotropic(&k, &t, &hyp).unwrap());
        assert!(local_isotropic(&k, &Place::Infinite, &hyp).unwrap());
        // 2 is a nonsquare mod 3
        let f = DiagForm::new(vec![e("1"), e("-2")]).unwrap();
        assert!(!local_isotropic(&k, &t, &f).unwrap());
        let norm = DiagForm::new(vec![e("1"), e("-2"), e("-t"), e("2*t")]).unwrap();
        assert!(!local_isotropic(&k, &t, &norm).unwrap());
        // unimodular ternary forms are isotropic, so u itself is represented (1 = 2 * 2)
        assert!(local_represents(&k, &t, &f, &e("2")).unwrap());
        assert!(!local_represents(&k, &t, &f, &e("t")).unwrap());
        let one = DiagForm::new(vec![e("1")]).unwrap();
        assert!(local_represents(&k, &t, &one, &e("t^2+t+1")).unwrap());
        assert!(local_represents(&k, &t, &one, &e("4*t^2")).unwrap());
    }

    #[test]
    fn global_examples() {
        let q = Rationals;
        let f = DiagForm::new(vec![q.one(), q.one()]).unwrap();
        assert!(global_represents(&q, &f, &q.from_i64(2)).unwrap());
        assert!(!global_represents(&q, &f, &q.from_i64(-1)).unwrap());
        assert!(!global_represents(&q, &f, &q.from_i64(3)).unwrap());
        assert!(global_represents(&q, &f, &q.from_i64(5)).unwrap());
        assert!(global_represents(&q, &f, &q.zero()).is_err());
        assert_eq!(witness_search(&q, &f, &q.from_i64(-1), 3), None);
    }

    #[test]
    fn witness_examples() {
        let q = Rationals;
        let hyp = DiagForm::new(vec![q.one(), q.from_i64(-1)]).unwrap();
        let w = witness_search(&q, &hyp, &q.zero(), 1).unwrap();
        assert_eq!(w, vec![q.one(), q.one()]);
        let f = DiagForm::new(vec![q.one(), q.one(), q.one()]).unwrap();
        let w = witness_search(&q, &f, &q.from_i64(6), 2).unwrap();
        assert_eq!(f.eval(&w).unwrap(), q.from_i64(6));
        // 7 is not a sum of three rational squares
        assert!(!global_represents(&q, &f, &q.from_i64(7)).unwrap());
        assert_eq!(witness_search(&q, &f, &q.from_i64(7), 3), None);
    }
}
