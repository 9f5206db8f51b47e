//! Elements of the perfect closure `K = F_q(t, t^{1/p}, t^{1/p^2}, ...)`.
//!
//! An element at level `i` is a rational function in `s = t^{1/p^i}`; the
//! level is always the smallest possible.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::exactalg::parse::parse_ratfunc;
use crate::exactalg::{FFElem, FieldElement, FiniteField, RatFunc};
use crate::places::{FinitePlace, FunctionField, GlobalField, Place};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PerfElement {
    level: u32,
    rep: RatFunc,
}

fn p_pow(p: u64, i: u32) -> usize {
    (p as usize).pow(i)
}

impl PerfElement {
    /// The element `rep(t^{1/p^level})`, brought to its minimal level.
    pub fn new(level: u32, rep: RatFunc) -> Self {
        let p = rep.field().characteristic() as usize;
        let (mut level, mut rep) = (level, rep);
        while level > 0 {
            match (rep.num().deflate(p), rep.den().deflate(p)) {
                (Some(n), Some(d)) => {
                    rep = RatFunc::new(n, d).expect("nonzero denominator");
                    level -= 1;
                }
                _ => break,
            }
        }
        PerfElement { level, rep }
    }

    pub fn from_base(rep: RatFunc) -> Self {
        PerfElement { level: 0, rep }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Representative in `s = t^{1/p^level}`.
    pub fn rep(&self) -> &RatFunc {
        &self.rep
    }

    pub fn constants(&self) -> &Arc<FiniteField> {
        self.rep.field()
    }

    fn p(&self) -> u64 {
        self.rep.field().characteristic()
    }

    /// Representative in `t^{1/p^l}` for `l >= level`.
    pub fn rep_at(&self, l: u32) -> RatFunc {
        assert!(l >= self.level, "cannot lower the level");
        let n = p_pow(self.p(), l - self.level);
        if n == 1 {
            return self.rep.clone();
        }
        RatFunc::new(self.rep.num().inflate(n), self.rep.den().inflate(n)).expect("nonzero denominator")
    }

    fn binary(&self, other: &Self, op: impl Fn(RatFunc, RatFunc) -> RatFunc) -> Self {
        let l = self.level.max(other.level);
        PerfElement::new(l, op(self.rep_at(l), other.rep_at(l)))
    }

    /// The unique `y` with `y^p = self`.
    pub fn pth_root(&self) -> Self {
        let f = self.constants().clone();
        let g = |c| f.inv_frobenius(c);
        let rep = RatFunc::new(self.rep.num().map_coeffs(g), self.rep.den().map_coeffs(g)).expect("nonzero denominator");
        PerfElement::new(self.level + 1, rep)
    }

    /// `self^p`.
    pub fn frobenius(&self) -> Self {
        let f = self.constants().clone();
        let g = |c| f.frobenius(c);
        let rep = RatFunc::new(self.rep.num().map_coeffs(g), self.rep.den().map_coeffs(g)).expect("nonzero denominator");
        if self.level == 0 {
            let p = self.p() as usize;
            PerfElement::new(0, RatFunc::new(rep.num().inflate(p), rep.den().inflate(p)).expect("nonzero denominator"))
        } else {
            PerfElement::new(self.level - 1, rep)
        }
    }

    /// `self^{p^level}`, an element of `F_q(t)`: coefficients raised to the
    /// `p^level`, `s` replaced by `t`.
    pub fn transport(&self) -> RatFunc {
        let f = self.constants().clone();
        let i = self.level;
        let g = |mut c: u64| {
            for _ in 0..i {
                c = f.frobenius(c);
            }
            c
        };
        RatFunc::new(self.rep.num().map_coeffs(g), self.rep.den().map_coeffs(g)).expect("nonzero denominator")
    }

    pub fn height(&self) -> u64 {
        self.rep.height() as u64
    }

    pub fn is_base(&self) -> bool {
        self.level == 0
    }
}

impl fmt::Display for PerfElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.level == 0 {
            write!(f, "{}", self.rep)
        } else {
            write!(f, "level={}; {}", self.level, self.rep.fmt_var("s"))
        }
    }
}

impl Add for PerfElement {
    type Output = PerfElement;
    fn add(self, o: Self) -> Self {
        self.binary(&o, |a, b| a + b)
    }
}

impl Sub for PerfElement {
    type Output = PerfElement;
    fn sub(self, o: Self) -> Self {
        self.binary(&o, |a, b| a - b)
    }
}

impl Mul for PerfElement {
    type Output = PerfElement;
    fn mul(self, o: Self) -> Self {
        self.binary(&o, |a, b| a * b)
    }
}

impl Div for PerfElement {
    type Output = PerfElement;
    fn div(self, o: Self) -> Self {
        self.binary(&o, |a, b| a / b)
    }
}

impl Neg for PerfElement {
    type Output = PerfElement;
    fn neg(self) -> Self {
        PerfElement { level: self.level, rep: -self.rep }
    }
}

impl FieldElement for PerfElement {
    fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }
    fn zero_like(&self) -> Self {
        PerfElement::from_base(self.rep.zero_like())
    }
    fn one_like(&self) -> Self {
        PerfElement::from_base(self.rep.one_like())
    }
    fn from_i64_like(&self, n: i64) -> Self {
        PerfElement::from_base(self.rep.from_i64_like(n))
    }
    fn characteristic(&self) -> u64 {
        self.p()
    }
    fn checked_inv(&self) -> Option<Self> {
        self.rep.checked_inv().map(|rep| PerfElement { level: self.level, rep })
    }
}

/// The perfect closure of `F_q(t)`; places are the finite places of
/// `F_q(t)`, each with a unique extension.
#[derive(Clone, Debug)]
pub struct PerfectClosure {
    base: FunctionField,
}

impl PerfectClosure {
    pub fn new(q: u64) -> Result<Self> {
        let base = FunctionField::new(q)?;
        if base.characteristic() == 2 {
            return Err(Error::CharacteristicTwo);
        }
        Ok(PerfectClosure { base })
    }

    pub fn over(base: FunctionField) -> Result<Self> {
        if base.characteristic() == 2 {
            return Err(Error::CharacteristicTwo);
        }
        Ok(PerfectClosure { base })
    }

    pub fn base(&self) -> &FunctionField {
        &self.base
    }

    pub fn p(&self) -> u64 {
        self.base.characteristic()
    }

    pub fn zero(&self) -> PerfElement {
        PerfElement::from_base(self.base.zero())
    }

    pub fn one(&self) -> PerfElement {
        PerfElement::from_base(self.base.one())
    }

    pub fn from_i64(&self, n: i64) -> PerfElement {
        PerfElement::from_base(self.base.from_i64(n))
    }

    /// `level=i; f(s)` with `s = t^{1/p^i}`, or a plain element of `F_q(t)`.
    pub fn parse_elem(&self, src: &str) -> Result<PerfElement> {
        let src = src.trim();
        let Some(rest) = src.strip_prefix("level") else {
            return Ok(PerfElement::from_base(self.base.parse_elem(src)?));
        };
        let (head, body) =
            rest.split_once(';').ok_or_else(|| Error::parse(0, "expected 'level=<n>; <element>'"))?;
        let head = head.trim();
        let level: u32 = head
            .strip_prefix('=')
            .and_then(|n| n.trim().parse().ok())
            .ok_or_else(|| Error::parse(5, format!("bad level '{head}'")))?;
        let offset = src.len() - body.len();
        let rep = parse_ratfunc(self.base.constants(), body, "s").map_err(|e| match e {
            Error::Parse { pos, msg } => Error::Parse { pos: pos + offset, msg },
            other => other,
        })?;
        Ok(PerfElement::new(level, rep))
    }

    pub fn format_elem(&self, x: &PerfElement) -> String {
        x.to_string()
    }

    fn finite<'a>(&self, v: &'a Place) -> Result<&'a FinitePlace> {
        match v {
            Place::Finite(fp) => Ok(fp),
            other => Err(Error::UnsupportedPlace(other.to_string())),
        }
    }

    /// The place of `F_q(s)`, `s = t^{1/p^i}`, above `v`: `π` with its
    /// coefficients mapped through the `i`-th inverse Frobenius.
    pub fn place_at_level(&self, v: &Place, i: u32) -> Result<Place> {
        let fp = self.finite(v)?;
        if i == 0 {
            return Ok(v.clone());
        }
        let f = self.base.constants().clone();
        let rho = fp.poly().map_coeffs(|mut c| {
            for _ in 0..i {
                c = f.inv_frobenius(c);
            }
            c
        });
        Ok(Place::Finite(FinitePlace::new_unchecked(rho)))
    }

    /// `ord_v x ∈ Z[1/p]`, computed as `ord_{ρ_i}(rep) / p^i` and checked
    /// against `ord_v(x^{p^i}) / p^i`.
    pub fn ord(&self, v: &Place, x: &PerfElement) -> Result<Option<Rational64>> {
        let a = self.ord_direct(v, x)?;
        let b = self.ord_transport(v, x)?;
        if a != b {
            return Err(Error::Invariant(format!("valuation routes disagree on {x} at {v}")));
        }
        Ok(a)
    }

    pub fn ord_direct(&self, v: &Place, x: &PerfElement) -> Result<Option<Rational64>> {
        let w = self.place_at_level(v, x.level)?;
        let den = p_pow(self.p(), x.level) as i64;
        Ok(self.base.ord(&w, &x.rep)?.map(|o| Rational64::new(o, den)))
    }

    pub fn ord_transport(&self, v: &Place, x: &PerfElement) -> Result<Option<Rational64>> {
        self.finite(v)?;
        let den = p_pow(self.p(), x.level) as i64;
        Ok(self.base.ord(v, &x.transport())?.map(|o| Rational64::new(o, den)))
    }

    pub fn is_integral(&self, v: &Place, x: &PerfElement) -> Result<bool> {
        Ok(self.ord(v, x)?.is_none_or(|o| o >= Rational64::from_integer(0)))
    }

    pub fn residue_field(&self, v: &Place) -> Result<Arc<FiniteField>> {
        self.base.residue_field(v)
    }

    /// Residue of an integral `x`: the `p^i`-th root of the residue of
    /// `x^{p^i}`.
    pub fn residue(&self, v: &Place, x: &PerfElement) -> Result<FFElem> {
        let r = self.base.residue(v, &x.transport())?;
        let rf = r.field().clone();
        let mut c = r.value();
        for _ in 0..x.level {
            c = rf.inv_frobenius(c);
        }
        Ok(rf.elem(c))
    }

    /// Square in the completion at `v`: `ord` even in `Z[1/p]` and the unit
    /// part a square mod `v`, computed at level `i` and checked against the
    /// base-field test on `x^{p^i}` (`p^i` is odd).
    pub fn is_local_square(&self, v: &Place, x: &PerfElement) -> Result<bool> {
        if x.is_zero() {
            return Err(Error::ZeroArgument("local square test of 0"));
        }
        let w = self.place_at_level(v, x.level)?;
        let direct = self.base.is_local_square(&w, &x.rep)?;
        let transported = self.base.is_local_square(v, &x.transport())?;
        if direct != transported {
            return Err(Error::Invariant(format!("square-class routes disagree on {x} at {v}")));
        }
        Ok(direct)
    }

    /// All elements of level at most `levels` whose representative has
    /// height at most `height`, by level and then in the base order.
    pub fn enumerate(&self, levels: u32, height: u64) -> Vec<PerfElement> {
        let base = self.base.enumerate(height);
        let mut out = Vec::new();
        for l in 0..=levels {
            for r in &base {
                let x = PerfElement::new(l, r.clone());
                if x.level == l {
                    out.push(x);
                }
            }
        }
        out
    }
}
