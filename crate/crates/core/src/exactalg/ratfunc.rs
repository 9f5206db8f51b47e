//! Rational functions over a finite field in canonical form.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use super::finite_field::FiniteField;
use super::poly::Poly;
use super::scalar::FieldElement;
use crate::error::{Error, Result};

/// `num/den` with `den` monic and `gcd(num, den) = 1`; zero is `0/1`.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(num: Poly, den: Poly) -> Self {
        let field = num.field().clone();
        if num.is_zero() {
            return RatFunc { num, den: Poly::one(&field) };
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        if !den.is_monic() {
            let inv = field.inv(den.leading()).expect("nonzero denominator");
            num = num.scale(inv);
            den = den.scale(inv);
        }
        RatFunc { num, den }
    }

    pub fn from_poly(p: Poly) -> Self {
        let one = Poly::one(p.field());
        RatFunc { num: p, den: one }
    }

    pub fn constant(field: &Arc<FiniteField>, c: u64) -> Self {
        Self::from_poly(Poly::constant(field, c))
    }

    pub fn zero(field: &Arc<FiniteField>) -> Self {
        Self::from_poly(Poly::zero(field))
    }

    pub fn one(field: &Arc<FiniteField>) -> Self {
        Self::constant(field, 1)
    }

    /// The variable `t`.
    pub fn t(field: &Arc<FiniteField>) -> Self {
        Self::from_poly(Poly::x(field))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        self.num.field()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// `max(deg num, deg den)`, with the zero function at height 0.
    pub fn height(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::InversionOfZero);
        }
        Ok(Self::normalize(self.den.clone(), self.num.clone()))
    }

    pub fn fmt_var(&self, var: &str) -> String {
        if self.den.is_one() {
            return self.num.fmt_var(var);
        }
        let wrap = |p: &Poly| {
            let s = p.fmt_var(var);
            if p.coeffs().iter().filter(|&&c| c != 0).count() > 1 || s.contains('*') {
                format!("({s})")
            } else {
                s
            }
        };
        format!("{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl Hash for RatFunc {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_var("t"))
    }
}
impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_var("t"))
    }
}

impl Add<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.den == rhs.den {
            return RatFunc::normalize(&self.num + &rhs.num, self.den.clone());
        }
        RatFunc::normalize(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}
impl Sub<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}
impl Mul<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::normalize(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}
impl Div<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: &RatFunc) -> RatFunc {
        self * &rhs.inv().expect("division by zero")
    }
}
impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

macro_rules! owned_op {
    ($tr:ident, $m:ident) => {
        impl $tr for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: RatFunc) -> RatFunc {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_op!(Add, add);
owned_op!(Sub, sub);
owned_op!(Mul, mul);
owned_op!(Div, div);

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl FieldElement for RatFunc {
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn zero_like(&self) -> Self {
        RatFunc::zero(self.field())
    }
    fn one_like(&self) -> Self {
        RatFunc::one(self.field())
    }
    fn from_i64_like(&self, n: i64) -> Self {
        let f = self.field();
        RatFunc::constant(f, f.from_i64(n))
    }
    fn characteristic(&self) -> u64 {
        self.field().characteristic()
    }
    fn checked_inv(&self) -> Option<Self> {
        self.inv().ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let f3 = FiniteField::prime(3).unwrap();
        let num = Poly::new(&f3, vec![0, 2, 2]); // 2t^2 + 2t = 2t(t+1)
        let den = Poly::new(&f3, vec![0, 0, 2]); // 2t^2
        let r = RatFunc::new(num, den).unwrap();
        assert_eq!(r.num(), &Poly::new(&f3, vec![1, 1]));
        assert_eq!(r.den(), &Poly::new(&f3, vec![0, 1]));
        assert_eq!(r.to_string(), "(t+1)/t");
        let again = RatFunc::new(r.num().clone(), r.den().clone()).unwrap();
        assert_eq!(again, r);
    }

    #[test]
    fn zero_denominator() {
        let f3 = FiniteField::prime(3).unwrap();
        assert_eq!(RatFunc::new(Poly::one(&f3), Poly::zero(&f3)), Err(Error::DivisionByZero));
        assert_eq!(RatFunc::zero(&f3).inv(), Err(Error::InversionOfZero));
    }

    #[test]
    fn field_ops() {
        let f5 = FiniteField::prime(5).unwrap();
        let t = RatFunc::t(&f5);
        let one = RatFunc::one(&f5);
        let x = &(&t + &one) / &t;
        let y = &one + &t.inv().unwrap();
        assert_eq!(x, y);
        assert_eq!(&(&x * &x.inv().unwrap()), &one);
    }
}
