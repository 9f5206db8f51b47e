//! Quaternion algebras `H(a, b)` in the odd-characteristic and
//! characteristic-2 presentations.

pub mod order;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactalg::FieldElement;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Presentation {
    /// Basis `1, i, j, ij` with `i^2 = a`, `j^2 = b`, `ij = -ji`.
    OddChar,
    /// Basis `1, u, v, uv` with `u^2 = a`, `v^2 = v + b`, `vu = uv + u`.
    Char2,
}

pub struct QuatAlgebra<E: FieldElement> {
    a: E,
    b: E,
    presentation: Presentation,
    /// `table[i][j]` holds the coordinates of `e_i * e_j`.
    table: Vec<Vec<[E; 4]>>,
}

impl<E: FieldElement> fmt::Debug for QuatAlgebra<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H({}, {})", self.a, self.b)
    }
}

impl<E: FieldElement> PartialEq for QuatAlgebra<E> {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b
    }
}
impl<E: FieldElement> Eq for QuatAlgebra<E> {}

impl<E: FieldElement> QuatAlgebra<E> {
    pub fn new(a: E, b: E) -> Result<Arc<Self>> {
        if a.is_zero() || b.is_zero() {
            return Err(Error::ZeroArgument("quaternion structure constant"));
        }
        let presentation =
            if a.characteristic() == 2 { Presentation::Char2 } else { Presentation::OddChar };
        let z = a.zero_like();
        let one = a.one_like();
        let vec = |c: [&E; 4]| -> [E; 4] { c.map(|x| x.clone()) };
        let ab = a.clone() * b.clone();
        let table = match presentation {
            Presentation::OddChar => {
                let (na, nb, nab) = (-a.clone(), -b.clone(), -ab.clone());
                let m1 = -one.clone();
                vec![
                    vec![vec([&one, &z, &z, &z]), vec([&z, &one, &z, &z]), vec([&z, &z, &one, &z]), vec([&z, &z, &z, &one])],
                    // i*1, i*i = a, i*j = ij, i*ij = a j
                    vec![vec([&z, &one, &z, &z]), vec([&a, &z, &z, &z]), vec([&z, &z, &z, &one]), vec([&z, &z, &a, &z])],
                    // j*i = -ij, j*j = b, j*ij = -b i
                    vec![vec([&z, &z, &one, &z]), vec([&z, &z, &z, &m1]), vec([&b, &z, &z, &z]), vec([&z, &nb, &z, &z])],
                    // ij*i = -a j, ij*j = b i, (ij)^2 = -ab
                    vec![vec([&z, &z, &z, &one]), vec([&z, &z, &na, &z]), vec([&z, &b, &z, &z]), vec([&nab, &z, &z, &z])],
                ]
            }
            Presentation::Char2 => vec![
                vec![vec([&one, &z, &z, &z]), vec([&z, &one, &z, &z]), vec([&z, &z, &one, &z]), vec([&z, &z, &z, &one])],
                // u*u = a, u*v = w, u*w = a v
                vec![vec([&z, &one, &z, &z]), vec([&a, &z, &z, &z]), vec([&z, &z, &z, &one]), vec([&z, &z, &a, &z])],
                // v*u = w + u, v*v = v + b, v*w = b u
                vec![vec([&z, &z, &one, &z]), vec([&z, &one, &z, &one]), vec([&b, &z, &one, &z]), vec([&z, &b, &z, &z])],
                // w*u = a + a v, w*v = b u + w, w*w = ab
                vec![vec([&z, &z, &z, &one]), vec([&a, &z, &a, &z]), vec([&z, &b, &z, &one]), vec([&ab, &z, &z, &z])],
            ],
        };
        Ok(Arc::new(QuatAlgebra { a, b, presentation, table }))
    }

    pub fn a(&self) -> &E {
        &self.a
    }
    pub fn b(&self) -> &E {
        &self.b
    }
    pub fn presentation(&self) -> Presentation {
        self.presentation
    }

    /// Coordinates of `e_i * e_j`.
    pub fn structure(&self, i: usize, j: usize) -> &[E; 4] {
        &self.table[i][j]
    }

    pub fn elem(self: &Arc<Self>, coords: [E; 4]) -> QuatElem<E> {
        QuatElem { alg: self.clone(), c: coords }
    }

    pub fn zero(self: &Arc<Self>) -> QuatElem<E> {
        let z = self.a.zero_like();
        self.elem([z.clone(), z.clone(), z.clone(), z])
    }

    pub fn one(self: &Arc<Self>) -> QuatElem<E> {
        self.basis(0)
    }

    /// `1, i, j, ij` (or `1, u, v, uv`).
    pub fn basis(self: &Arc<Self>, k: usize) -> QuatElem<E> {
        let z = self.a.zero_like();
        let mut c = [z.clone(), z.clone(), z.clone(), z];
        c[k] = self.a.one_like();
        self.elem(c)
    }

    /// Reduced norm as a function of coordinates.
    pub fn norm_form(&self, x: &[E; 4]) -> E {
        let [x1, x2, x3, x4] = x;
        let (a, b) = (&self.a, &self.b);
        match self.presentation {
            Presentation::OddChar => {
                x1.square() - a.clone() * x2.square() - b.clone() * x3.square()
                    + a.clone() * b.clone() * x4.square()
            }
            Presentation::Char2 => {
                x1.square()
                    + x1.clone() * x3.clone()
                    + b.clone() * x3.square()
                    + a.clone() * (x2.square() + x2.clone() * x4.clone() + b.clone() * x4.square())
            }
        }
    }

    pub fn trace_form(&self, x: &[E; 4]) -> E {
        match self.presentation {
            Presentation::OddChar => x[0].clone() + x[0].clone(),
            Presentation::Char2 => x[2].clone(),
        }
    }
}

#[derive(Clone)]
pub struct QuatElem<E: FieldElement> {
    alg: Arc<QuatAlgebra<E>>,
    c: [E; 4],
}

impl<E: FieldElement> QuatElem<E> {
    pub fn algebra(&self) -> &Arc<QuatAlgebra<E>> {
        &self.alg
    }

    pub fn coords(&self) -> &[E; 4] {
        &self.c
    }

    fn same(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.alg, &other.alg) || self.alg == other.alg {
            Ok(())
        } else {
            Err(Error::MixedAlgebras)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        Ok(self.alg.elem(std::array::from_fn(|k| self.c[k].clone() + other.c[k].clone())))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        Ok(self.alg.elem(std::array::from_fn(|k| self.c[k].clone() - other.c[k].clone())))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        let z = self.alg.a.zero_like();
        let mut out = [z.clone(), z.clone(), z.clone(), z];
        for i in 0..4 {
            if self.c[i].is_zero() {
                continue;
            }
            for j in 0..4 {
                if other.c[j].is_zero() {
                    continue;
                }
                let s = self.c[i].clone() * other.c[j].clone();
                for (k, t) in self.alg.table[i][j].iter().enumerate() {
                    if !t.is_zero() {
                        out[k] = out[k].clone() + s.clone() * t.clone();
                    }
                }
            }
        }
        Ok(self.alg.elem(out))
    }

    pub fn scale(&self, s: &E) -> Self {
        self.alg.elem(std::array::from_fn(|k| self.c[k].clone() * s.clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn reduced_trace(&self) -> E {
        self.alg.trace_form(&self.c)
    }

    pub fn reduced_norm(&self) -> E {
        self.alg.norm_form(&self.c)
    }

    /// `tr(x) - x`.
    pub fn conj(&self) -> Self {
        let t = self.alg.one().scale(&self.reduced_trace());
        t.try_sub(self).expect("same algebra")
    }

    /// `x^2 - tr(x) x + nr(x) = 0`.
    pub fn char_poly_check(&self) -> bool {
        let x2 = self.try_mul(self).expect("same algebra");
        let lhs = x2
            .try_sub(&self.scale(&self.reduced_trace()))
            .and_then(|y| y.try_add(&self.alg.one().scale(&self.reduced_norm())))
            .expect("same algebra");
        lhs.is_zero()
    }

    /// Image in `H(a s^2, b r^2)` under `i -> i'/s`, `j -> j'/r`. In
    /// characteristic 2 only `a` is rescaled and `r` must be 1.
    pub fn rescale(&self, s: &E, r: &E) -> Result<QuatElem<E>> {
        let (si, ri) = (
            s.checked_inv().ok_or(Error::ZeroArgument("rescaling factor"))?,
            r.checked_inv().ok_or(Error::ZeroArgument("rescaling factor"))?,
        );
        let [x1, x2, x3, x4] = self.c.clone();
        match self.alg.presentation {
            Presentation::OddChar => {
                let alg = QuatAlgebra::new(
                    self.alg.a.clone() * s.square(),
                    self.alg.b.clone() * r.square(),
                )?;
                Ok(alg.elem([x1, x2 * si.clone(), x3 * ri.clone(), x4 * si * ri]))
            }
            Presentation::Char2 => {
                if !r.is_one() {
                    return Err(Error::CharacteristicTwo);
                }
                let alg = QuatAlgebra::new(self.alg.a.clone() * s.square(), self.alg.b.clone())?;
                Ok(alg.elem([x1, x2 * si.clone(), x3, x4 * si]))
            }
        }
    }
}

impl<E: FieldElement> PartialEq for QuatElem<E> {
    fn eq(&self, other: &Self) -> bool {
        self.alg == other.alg && self.c == other.c
    }
}
impl<E: FieldElement> Eq for QuatElem<E> {}

impl<E: FieldElement> fmt::Debug for QuatElem<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = match self.alg.presentation {
            Presentation::OddChar => ["1", "i", "j", "ij"],
            Presentation::Char2 => ["1", "u", "v", "uv"],
        };
        let parts: Vec<String> = self
            .c
            .iter()
            .zip(names)
            .filter(|(x, _)| !x.is_zero())
            .map(|(x, n)| format!("({x})*{n}"))
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

macro_rules! quat_op {
    ($tr:ident, $m:ident, $r:ident) => {
        impl<E: FieldElement> $tr for &QuatElem<E> {
            type Output = QuatElem<E>;
            fn $m(self, rhs: &QuatElem<E>) -> QuatElem<E> {
                self.$r(rhs).expect("operands in the same algebra")
            }
        }
    };
}
quat_op!(Add, add, try_add);
quat_op!(Sub, sub, try_sub);
quat_op!(Mul, mul, try_mul);

impl<E: FieldElement> Neg for &QuatElem<E> {
    type Output = QuatElem<E>;
    fn neg(self) -> QuatElem<E> {
        self.alg.elem(std::array::from_fn(|k| -self.c[k].clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::places::{FunctionField, GlobalField};

    #[test]
    fn odd_relations() {
        let k = FunctionField::new(3).unwrap();
        let h = QuatAlgebra::new(k.t(), k.from_i64(2)).unwrap();
        let (i, j, ij) = (h.basis(1), h.basis(2), h.basis(3));
        assert_eq!(&i * &j, ij);
        assert_eq!(&j * &i, -&ij);
        assert_eq!(&i * &i, h.one().scale(&k.t()));
        assert_eq!(h.one().reduced_trace(), k.from_i64(2));
        assert_eq!(i.reduced_trace(), k.zero());
        assert_eq!(i.reduced_norm(), -k.t());
        assert!(h.one().char_poly_check());
    }

    #[test]
    fn char2_relations() {
        let k = FunctionField::new(2).unwrap();
        let (a, b) = (k.t(), k.parse_elem("t^2+1").unwrap());
        let h = QuatAlgebra::new(a.clone(), b.clone()).unwrap();
        assert_eq!(h.presentation(), Presentation::Char2);
        let (u, v, w) = (h.basis(1), h.basis(2), h.basis(3));
        assert_eq!(&v * &v, &v + &h.one().scale(&b));
        assert_eq!(&v * &u, &w + &u);
        assert_eq!(&w * &w, h.one().scale(&(a.clone() * b.clone())));
        assert_eq!(&w * &u, &h.one().scale(&a) + &v.scale(&a));
        assert_eq!((&h.one() + &u).reduced_trace(), k.zero());
        assert_eq!(v.reduced_trace(), k.one());
        for x in [&u, &v, &w] {
            assert!(x.char_poly_check());
        }
    }

    #[test]
    fn mixed_algebras() {
        let k = FunctionField::new(3).unwrap();
        let h1 = QuatAlgebra::new(k.t(), k.one()).unwrap();
        let h2 = QuatAlgebra::new(k.one(), k.t()).unwrap();
        assert_eq!(h1.one().try_mul(&h2.one()), Err(Error::MixedAlgebras));
        assert!(QuatAlgebra::new(k.zero(), k.t()).is_err());
    }
}
