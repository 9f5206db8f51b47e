//! Finite fields `F_p` and towers `F_p[u]/(f)`, `F_q[u]/(g)`.
//!
//! Elements are encoded as integers in `[0, size)`: an element
//! `c_0 + c_1 u + ... + c_{d-1} u^{d-1}` of an extension of degree `d` over a
//! base of size `B` is `c_0 + c_1 B + ... + c_{d-1} B^{d-1}`. Flattened all
//! the way down, this is the base-`p` expansion of the coordinate vector over
//! `F_p`, so addition is digit-wise mod `p` at every tower level and the prime
//! subfield is exactly `[0, p)`.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use super::integer::{factor_u64, is_prime_u64, mul_mod, pow_mod};
use super::poly::Poly;
use super::scalar::FieldElement;
use crate::error::{Error, Result};

const TABLE_LIMIT: u64 = 1 << 21;

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

pub struct FiniteField {
    p: u64,
    base: Option<Arc<FiniteField>>,
    /// Monic, coefficients encoded in `base`; empty for a prime field.
    modulus: Vec<u64>,
    size: u64,
    prime_degree: u32,
    tables: Option<Tables>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus && self.base == other.base
    }
}
impl Eq for FiniteField {}

impl FiniteField {
    pub fn prime(p: u64) -> Result<Arc<Self>> {
        if !is_prime_u64(p) {
            return Err(Error::Invalid(format!("{p} is not prime")));
        }
        Ok(Arc::new(FiniteField {
            p,
            base: None,
            modulus: Vec::new(),
            size: p,
            prime_degree: 1,
            tables: None,
        }))
    }

    /// `F_{p^m}` with the first lexicographic monic irreducible modulus over `F_p`.
    pub fn new(p: u64, m: u32) -> Result<Arc<Self>> {
        let fp = Self::prime(p)?;
        if m == 0 {
            return Err(Error::Invalid("extension degree must be positive".into()));
        }
        if m == 1 {
            return Ok(fp);
        }
        let modulus = Poly::monic_irreducibles(&fp, m as usize)
            .next()
            .ok_or_else(|| Error::Invariant("no irreducible polynomial found".into()))?;
        Self::extension(fp, modulus.coeffs().to_vec())
    }

    /// Field of prime-power order `q`.
    pub fn of_order(q: u64) -> Result<Arc<Self>> {
        let f = factor_u64(q);
        if f.len() != 1 {
            return Err(Error::Invalid(format!("{q} is not a prime power")));
        }
        Self::new(f[0].0, f[0].1)
    }

    /// `base[u]/(modulus)`; `modulus` is monic with coefficients encoded in `base`.
    /// A degree-1 modulus returns `base` itself.
    pub fn extension(base: Arc<Self>, modulus: Vec<u64>) -> Result<Arc<Self>> {
        let mut modulus = modulus;
        while modulus.last() == Some(&0) {
            modulus.pop();
        }
        let degree = modulus.len().saturating_sub(1);
        if degree == 0 || modulus[degree] != 1 {
            return Err(Error::Invalid("extension modulus must be monic of positive degree".into()));
        }
        if degree == 1 {
            return Ok(base);
        }
        let size = base
            .size
            .checked_pow(degree as u32)
            .filter(|s| *s <= TABLE_LIMIT)
            .ok_or_else(|| Error::CapExceeded(format!("field of size {}^{degree}", base.size)))?;
        let mut field = FiniteField {
            p: base.p,
            prime_degree: base.prime_degree * degree as u32,
            base: Some(base),
            modulus,
            size,
            tables: None,
        };
        field.build_tables()?;
        Ok(Arc::new(field))
    }

    fn build_tables(&mut self) -> Result<()> {
        let order = self.size - 1;
        let factors = factor_u64(order);
        let generator = (1..self.size)
            .find(|&g| {
                self.raw_pow(g, order) == 1
                    && factors.iter().all(|(r, _)| self.raw_pow(g, order / r) != 1)
            })
            .ok_or_else(|| Error::Invalid("extension modulus is not irreducible".into()))?;
        let mut exp = vec![0u32; order as usize];
        let mut log = vec![0u32; self.size as usize];
        let mut cur = 1u64;
        for k in 0..order {
            exp[k as usize] = cur as u32;
            log[cur as usize] = k as u32;
            cur = self.raw_mul(cur, generator);
        }
        self.tables = Some(Tables { exp, log });
        Ok(())
    }

    fn base_ref(&self) -> &FiniteField {
        self.base.as_deref().expect("extension field has a base")
    }

    fn degree_over_base(&self) -> usize {
        self.modulus.len().saturating_sub(1).max(1)
    }

    /// Polynomial multiplication modulo the defining polynomial, without tables.
    fn raw_mul(&self, x: u64, y: u64) -> u64 {
        let base = self.base_ref();
        let d = self.degree_over_base();
        let a = self.decode(x);
        let b = self.decode(y);
        let mut prod = vec![0u64; 2 * d - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                prod[i + j] = base.add(prod[i + j], base.mul(ai, bj));
            }
        }
        for k in (d..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for (i, &mi) in self.modulus[..d].iter().enumerate() {
                prod[k - d + i] = base.sub(prod[k - d + i], base.mul(c, mi));
            }
        }
        self.encode(&prod[..d])
    }

    fn raw_pow(&self, x: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        let mut b = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.raw_mul(acc, b);
            }
            b = self.raw_mul(b, b);
            e >>= 1;
        }
        acc
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }
    pub fn size(&self) -> u64 {
        self.size
    }
    /// Degree over the prime field.
    pub fn degree(&self) -> u32 {
        self.prime_degree
    }
    pub fn base(&self) -> Option<&Arc<FiniteField>> {
        self.base.as_ref()
    }
    /// Defining polynomial over the base field (empty for a prime field).
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }
    pub fn is_prime_field(&self) -> bool {
        self.base.is_none()
    }

    pub fn describe(&self) -> String {
        match &self.base {
            None => format!("F_{}", self.p),
            Some(b) => format!("F_{} = {}[u]/({:?})", self.size, b.describe(), self.modulus),
        }
    }

    /// Digits of `x` over the base field, length = degree over base.
    pub fn decode(&self, mut x: u64) -> Vec<u64> {
        match &self.base {
            None => vec![x],
            Some(b) => {
                let d = self.degree_over_base();
                let mut out = Vec::with_capacity(d);
                for _ in 0..d {
                    out.push(x % b.size);
                    x /= b.size;
                }
                out
            }
        }
    }

    pub fn encode(&self, digits: &[u64]) -> u64 {
        match &self.base {
            None => digits.first().copied().unwrap_or(0) % self.p,
            Some(b) => digits.iter().rev().fold(0u64, |acc, &c| acc * b.size + c),
        }
    }

    pub fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    pub fn add(&self, x: u64, y: u64) -> u64 {
        if self.base.is_none() {
            let s = x + y;
            return if s >= self.p { s - self.p } else { s };
        }
        let (mut x, mut y) = (x, y);
        let mut out = 0u64;
        let mut place = 1u64;
        while x > 0 || y > 0 {
            let d = (x % self.p + y % self.p) % self.p;
            out += d * place;
            place *= self.p;
            x /= self.p;
            y /= self.p;
        }
        out
    }

    pub fn neg(&self, x: u64) -> u64 {
        if self.base.is_none() {
            return if x == 0 { 0 } else { self.p - x };
        }
        let mut x = x;
        let mut out = 0u64;
        let mut place = 1u64;
        while x > 0 {
            let d = (self.p - x % self.p) % self.p;
            out += d * place;
            place *= self.p;
            x /= self.p;
        }
        out
    }

    pub fn sub(&self, x: u64, y: u64) -> u64 {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: u64, y: u64) -> u64 {
        if x == 0 || y == 0 {
            return 0;
        }
        match &self.tables {
            None => mul_mod(x, y, self.p),
            Some(t) => {
                let s = t.log[x as usize] as u64 + t.log[y as usize] as u64;
                t.exp[(s % (self.size - 1)) as usize] as u64
            }
        }
    }

    pub fn inv(&self, x: u64) -> Result<u64> {
        if x == 0 {
            return Err(Error::InversionOfZero);
        }
        Ok(match &self.tables {
            None => pow_mod(x, self.p - 2, self.p),
            Some(t) => {
                let l = t.log[x as usize] as u64;
                t.exp[((self.size - 1 - l) % (self.size - 1)) as usize] as u64
            }
        })
    }

    pub fn pow(&self, x: u64, e: u64) -> u64 {
        if e == 0 {
            return 1;
        }
        if x == 0 {
            return 0;
        }
        match &self.tables {
            None => pow_mod(x, e, self.p),
            Some(t) => {
                let l = t.log[x as usize] as u128 * e as u128;
                t.exp[(l % (self.size - 1) as u128) as usize] as u64
            }
        }
    }

    /// `x^p`.
    pub fn frobenius(&self, x: u64) -> u64 {
        self.pow(x, self.p)
    }

    /// The unique `y` with `y^p = x`.
    pub fn inv_frobenius(&self, x: u64) -> u64 {
        self.pow(x, self.size / self.p)
    }

    /// `+1` for nonzero squares, `-1` for nonsquares, `0` for zero.
    pub fn quadratic_character(&self, x: u64) -> Result<i8> {
        if self.p == 2 {
            return Err(Error::CharacteristicTwo);
        }
        if x == 0 {
            return Ok(0);
        }
        let r = self.pow(x, (self.size - 1) / 2);
        Ok(if r == 1 { 1 } else { -1 })
    }

    /// A square root of `x`, if one exists.
    pub fn sqrt(&self, x: u64) -> Option<u64> {
        if x == 0 {
            return Some(0);
        }
        if self.p == 2 {
            return Some(self.pow(x, self.size / 2));
        }
        if let Some(t) = &self.tables {
            let l = t.log[x as usize];
            return (l % 2 == 0).then(|| t.exp[(l / 2) as usize] as u64);
        }
        // Tonelli-Shanks in F_p
        let p = self.p;
        if pow_mod(x, (p - 1) / 2, p) != 1 {
            return None;
        }
        let (mut q, mut s) = (p - 1, 0u32);
        while q % 2 == 0 {
            q /= 2;
            s += 1;
        }
        let z = (2..p).find(|&z| pow_mod(z, (p - 1) / 2, p) == p - 1)?;
        let mut m = s;
        let mut c = pow_mod(z, q, p);
        let mut t = pow_mod(x, q, p);
        let mut r = pow_mod(x, q.div_ceil(2), p);
        while t != 1 {
            let mut i = 0;
            let mut tt = t;
            while tt != 1 {
                tt = mul_mod(tt, tt, p);
                i += 1;
            }
            let b = pow_mod(c, 1 << (m - i - 1), p);
            m = i;
            c = mul_mod(b, b, p);
            t = mul_mod(t, c, p);
            r = mul_mod(r, b, p);
        }
        Some(r)
    }

    pub fn elements(self: &Arc<Self>) -> impl Iterator<Item = FFElem> + '_ {
        (0..self.size).map(move |v| FFElem { field: self.clone(), value: v })
    }

    pub fn elem(self: &Arc<Self>, value: u64) -> FFElem {
        FFElem { field: self.clone(), value: value % self.size.max(1) }
    }

    /// Render an encoded element: prime-subfield values as integers, others
    /// as `[...]` polynomials in `u` over the next field down.
    pub fn format_value(&self, x: u64) -> String {
        if x < self.p {
            return x.to_string();
        }
        let base = self.base_ref();
        let digits = self.decode(x);
        let mut terms = Vec::new();
        for (k, &c) in digits.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coeff = base.format_value(c);
            let coeff = if coeff.starts_with('[') || c < base.p { coeff } else { format!("[{coeff}]") };
            terms.push(match (k, c) {
                (0, _) => coeff,
                (_, 1) => if k == 1 { "u".into() } else { format!("u^{k}") },
                _ => if k == 1 { format!("{coeff}*u") } else { format!("{coeff}*u^{k}") },
            });
        }
        format!("[{}]", terms.join("+"))
    }
}

/// An element of a finite field.
#[derive(Clone)]
pub struct FFElem {
    field: Arc<FiniteField>,
    value: u64,
}

impl FFElem {
    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }
    pub fn value(&self) -> u64 {
        self.value
    }
    fn same_field(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.field, &other.field) || self.field == other.field {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }
    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.field.elem(self.field.add(self.value, other.value)))
    }
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.field.elem(self.field.mul(self.value, other.value)))
    }
    pub fn inv(&self) -> Result<Self> {
        Ok(self.field.elem(self.field.inv(self.value)?))
    }
    pub fn quadratic_character(&self) -> Result<i8> {
        self.field.quadratic_character(self.value)
    }
}

impl PartialEq for FFElem {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && (Arc::ptr_eq(&self.field, &other.field) || self.field == other.field)
    }
}
impl Eq for FFElem {}

impl Hash for FFElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.value.hash(state);
    }
}

impl fmt::Debug for FFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.format_value(self.value))
    }
}
impl fmt::Display for FFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.format_value(self.value))
    }
}

macro_rules! ff_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr for FFElem {
            type Output = FFElem;
            fn $m(self, rhs: FFElem) -> FFElem {
                self.same_field(&rhs).expect("mixed finite fields");
                let f: fn(&FiniteField, u64, u64) -> u64 = $body;
                let v = f(&self.field, self.value, rhs.value);
                FFElem { field: self.field, value: v }
            }
        }
    };
}
ff_binop!(Add, add, |f, a, b| f.add(a, b));
ff_binop!(Sub, sub, |f, a, b| f.sub(a, b));
ff_binop!(Mul, mul, |f, a, b| f.mul(a, b));
ff_binop!(Div, div, |f, a, b| f.mul(a, f.inv(b).expect("division by zero")));

impl Neg for FFElem {
    type Output = FFElem;
    fn neg(self) -> FFElem {
        let v = self.field.neg(self.value);
        FFElem { field: self.field, value: v }
    }
}

impl FieldElement for FFElem {
    fn is_zero(&self) -> bool {
        self.value == 0
    }
    fn zero_like(&self) -> Self {
        self.field.elem(0)
    }
    fn one_like(&self) -> Self {
        self.field.elem(1)
    }
    fn from_i64_like(&self, n: i64) -> Self {
        self.field.elem(self.field.from_i64(n))
    }
    fn characteristic(&self) -> u64 {
        self.field.p
    }
}

/// Deterministic first `a` (in encoding order) with `a^2 - 1` a nonsquare.
pub fn find_nonsquare_shift(field: &Arc<FiniteField>) -> Result<FFElem> {
    if field.characteristic() == 2 {
        return Err(Error::CharacteristicTwo);
    }
    for a in 0..field.size() {
        let v = field.sub(field.mul(a, a), 1);
        if field.quadratic_character(v)? == -1 {
            return Ok(field.elem(a));
        }
    }
    Err(Error::Invariant(format!("no nonsquare shift in {}", field.describe())))
}
