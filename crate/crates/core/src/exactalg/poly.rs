//! Dense univariate polynomials over a finite field.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::finite_field::{FFElem, FiniteField};
use super::integer::factor_u64;
use crate::error::{Error, Result};

/// Coefficients are stored low degree first with no trailing zeros.
#[derive(Clone)]
pub struct Poly {
    field: Arc<FiniteField>,
    coeffs: Vec<u64>,
}

impl Poly {
    pub fn new(field: &Arc<FiniteField>, mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { field: field.clone(), coeffs }
    }

    pub fn zero(field: &Arc<FiniteField>) -> Self {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &Arc<FiniteField>) -> Self {
        Self::constant(field, 1)
    }

    pub fn constant(field: &Arc<FiniteField>, c: u64) -> Self {
        Self::new(field, vec![c])
    }

    /// The variable.
    pub fn x(field: &Arc<FiniteField>) -> Self {
        Self::new(field, vec![0, 1])
    }

    /// `c * x^n`.
    pub fn monomial(field: &Arc<FiniteField>, c: u64, n: usize) -> Self {
        let mut v = vec![0; n + 1];
        v[n] = c;
        Self::new(field, v)
    }

    /// `x - c`.
    pub fn linear(field: &Arc<FiniteField>, c: u64) -> Self {
        Self::new(field, vec![field.neg(c), 1])
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with `deg 0 = -1`, convenient for heights.
    pub fn deg_i64(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(self.leading()).expect("nonzero leading coefficient");
        self.scale(inv)
    }

    pub fn scale(&self, c: u64) -> Self {
        let f = &self.field;
        Self::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn shift(&self, n: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![0; n];
        v.extend_from_slice(&self.coeffs);
        Self::new(&self.field, v)
    }

    fn check(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.field, &other.field) || self.field == other.field,
            "polynomials over different fields"
        );
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        self.check(other);
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(f, (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        self.check(other);
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(f, (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn neg_ref(&self) -> Self {
        let f = &self.field;
        Self::new(f, self.coeffs.iter().map(|&a| f.neg(a)).collect())
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        self.check(other);
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.field);
        }
        let f = &self.field;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b != 0 {
                    out[i + j] = f.add(out[i + j], f.mul(a, b));
                }
            }
        }
        Self::new(f, out)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(&self.field);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul_ref(&b);
            }
        }
        acc
    }

    pub fn divrem(&self, d: &Self) -> Result<(Self, Self)> {
        self.check(d);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = &self.field;
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return Ok((Self::zero(f), self.clone()));
        }
        let inv = f.inv(d.leading())?;
        let mut rem = self.coeffs.clone();
        let mut quo = vec![0u64; self.coeffs.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = rem[k];
            if c == 0 {
                continue;
            }
            let q = f.mul(c, inv);
            quo[k - dd] = q;
            for (i, &di) in d.coeffs.iter().enumerate() {
                rem[k - dd + i] = f.sub(rem[k - dd + i], f.mul(q, di));
            }
        }
        rem.truncate(dd);
        Ok((Self::new(f, quo), Self::new(f, rem)))
    }

    pub fn rem(&self, d: &Self) -> Result<Self> {
        Ok(self.divrem(d)?.1)
    }

    /// Exact division; errors when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Result<Self> {
        let (q, r) = self.divrem(d)?;
        if !r.is_zero() {
            return Err(Error::Invariant(format!("{d} does not divide {self}")));
        }
        Ok(q)
    }

    pub fn divides(&self, other: &Self) -> bool {
        !self.is_zero() && other.rem(self).map(|r| r.is_zero()).unwrap_or(false)
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, u)` with `s*self + u*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(f), Self::zero(f));
        let (mut t0, mut t1) = (Self::zero(f), Self::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).expect("nonzero divisor");
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub_ref(&q.mul_ref(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub_ref(&q.mul_ref(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = f.inv(r0.leading()).expect("nonzero");
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    /// Inverse of `self` modulo `m`.
    pub fn inv_mod(&self, m: &Self) -> Result<Self> {
        let (g, s, _) = self.rem(m)?.ext_gcd(m);
        if !g.is_one() {
            return Err(Error::NotCoprime);
        }
        s.rem(m)
    }

    pub fn mulmod(&self, other: &Self, m: &Self) -> Self {
        self.mul_ref(other).rem(m).expect("nonzero modulus")
    }

    pub fn powmod(&self, e: &BigUint, m: &Self) -> Self {
        let mut acc = Self::one(&self.field).rem(m).expect("nonzero modulus");
        let base = self.rem(m).expect("nonzero modulus");
        for i in (0..e.bits()).rev() {
            acc = acc.mulmod(&acc, m);
            if e.bit(i) {
                acc = acc.mulmod(&base, m);
            }
        }
        acc
    }

    pub fn powmod_u64(&self, e: u64, m: &Self) -> Self {
        self.powmod(&BigUint::from(e), m)
    }

    pub fn derivative(&self) -> Self {
        let f = &self.field;
        Self::new(
            f,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.mul(c, f.from_i64((i as u64 % f.characteristic()) as i64)))
                .collect(),
        )
    }

    /// Evaluate at an element of the coefficient field.
    pub fn eval(&self, x: u64) -> u64 {
        let f = &self.field;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Substitute `x -> x^n`.
    pub fn inflate(&self, n: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![0u64; (self.coeffs.len() - 1) * n + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            v[i * n] = c;
        }
        Self::new(&self.field, v)
    }

    /// Inverse of [`inflate`](Self::inflate) when every exponent is divisible by `n`.
    pub fn deflate(&self, n: usize) -> Option<Self> {
        if self.coeffs.iter().enumerate().any(|(i, &c)| c != 0 && i % n != 0) {
            return None;
        }
        Some(Self::new(&self.field, self.coeffs.iter().step_by(n).copied().collect()))
    }

    /// Apply a map to every coefficient.
    pub fn map_coeffs(&self, g: impl Fn(u64) -> u64) -> Self {
        Self::new(&self.field, self.coeffs.iter().map(|&c| g(c)).collect())
    }

    /// Irreducibility over the coefficient field: root search below degree 4
    /// for small fields, Rabin's test otherwise.
    pub fn is_irreducible(&self) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n,
        };
        let f = &self.field;
        if n < 4 && f.size() <= 1024 {
            return (0..f.size()).all(|c| self.eval(c) != 0);
        }
        let m = self.monic();
        let x = Self::x(f);
        let frob = |p: &Self, k: usize| {
            let mut r = p.clone();
            for _ in 0..k {
                r = r.powmod_u64(f.size(), &m);
            }
            r
        };
        if !frob(&x, n).sub_ref(&x).rem(&m).expect("nonzero").is_zero() {
            return false;
        }
        factor_u64(n as u64).iter().all(|&(r, _)| {
            let h = frob(&x, n / r as usize).sub_ref(&x);
            h.gcd(&m).is_one()
        })
    }

    /// Monic irreducibles of degree `n`, in increasing order.
    pub fn monic_irreducibles(field: &Arc<FiniteField>, n: usize) -> impl Iterator<Item = Poly> + '_ {
        let q = field.size();
        let count = q.checked_pow(n as u32).unwrap_or(u64::MAX);
        (0..count).filter_map(move |k| {
            let mut digits = Vec::with_capacity(n + 1);
            let mut r = k;
            for _ in 0..n {
                digits.push(r % q);
                r /= q;
            }
            digits.push(1);
            let p = Poly::new(field, digits);
            p.is_irreducible().then_some(p)
        })
    }

    /// All monic irreducibles in increasing order (degree first).
    pub fn all_monic_irreducibles(field: &Arc<FiniteField>) -> impl Iterator<Item = Poly> + '_ {
        (1usize..).flat_map(move |n| Self::monic_irreducibles(field, n))
    }

    /// Factorization into monic irreducibles with multiplicities, sorted, plus
    /// the leading coefficient.
    pub fn factor(&self) -> Result<(u64, Vec<(Poly, u32)>)> {
        if self.is_zero() {
            return Err(Error::ZeroArgument("factorization of 0"));
        }
        let lc = self.leading();
        let mut out: Vec<(Poly, u32)> = Vec::new();
        for (sqf, mult) in self.monic().squarefree() {
            for (deg, part) in sqf.distinct_degree() {
                for g in part.equal_degree(deg) {
                    out.push((g, mult));
                }
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(Poly, u32)> = Vec::new();
        for (g, e) in out {
            match merged.last_mut() {
                Some((h, f)) if *h == g => *f += e,
                _ => merged.push((g, e)),
            }
        }
        Ok((lc, merged))
    }

    /// Squarefree decomposition of a monic polynomial: pairs `(g, m)` with
    /// `self = prod g^m`, each `g` squarefree and monic.
    fn squarefree(&self) -> Vec<(Poly, u32)> {
        let f = &self.field;
        let p = f.characteristic() as usize;
        let mut out = Vec::new();
        if self.is_constant() {
            return out;
        }
        let d = self.derivative();
        if d.is_zero() {
            // self(x) = g(x^p); take coefficient-wise p-th roots.
            let g = self
                .deflate(p)
                .expect("zero derivative means p-th power exponents")
                .map_coeffs(|c| f.inv_frobenius(c));
            for (h, m) in g.squarefree() {
                out.push((h, m * p as u32));
            }
            return out;
        }
        let mut c = self.gcd(&d);
        let mut w = self.div_exact(&c).expect("gcd divides");
        let mut i = 1u32;
        while !w.is_one() {
            let y = w.gcd(&c);
            let fac = w.div_exact(&y).expect("gcd divides");
            if !fac.is_one() {
                out.push((fac, i));
            }
            w = y;
            c = c.div_exact(&w).expect("gcd divides");
            i += 1;
        }
        if !c.is_one() {
            let g = c
                .deflate(p)
                .expect("remaining factor is a p-th power")
                .map_coeffs(|x| f.inv_frobenius(x));
            for (h, m) in g.squarefree() {
                out.push((h, m * p as u32));
            }
        }
        out
    }

    fn distinct_degree(&self) -> Vec<(usize, Poly)> {
        let f = &self.field;
        let mut out = Vec::new();
        let mut rest = self.clone();
        let x = Self::x(f);
        let mut h = x.clone();
        let mut d = 0;
        while rest.degree().unwrap_or(0) >= 2 * (d + 1) {
            d += 1;
            h = h.powmod_u64(f.size(), &rest);
            let g = h.sub_ref(&x).gcd(&rest);
            if !g.is_one() {
                rest = rest.div_exact(&g).expect("gcd divides");
                h = h.rem(&rest).expect("nonzero");
                out.push((d, g));
            }
        }
        if let Some(n) = rest.degree().filter(|&n| n > 0) {
            out.push((n, rest));
        }
        out
    }

    fn equal_degree(&self, d: usize) -> Vec<Poly> {
        let n = self.degree().unwrap_or(0);
        if n == d {
            return vec![self.clone()];
        }
        let f = &self.field;
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ n as u64);
        let q = f.size();
        loop {
            let a = Self::new(f, (0..n).map(|_| rng.gen_range(0..q)).collect());
            if a.is_constant() {
                continue;
            }
            let b = if f.characteristic() == 2 {
                // trace map a + a^2 + ... + a^(2^(kd-1)) where q = 2^k
                let k = f.degree() as usize;
                let mut t = a.clone();
                let mut acc = a.clone();
                for _ in 1..k * d {
                    t = t.mulmod(&t, self);
                    acc = acc.add_ref(&t);
                }
                acc
            } else {
                let e = (num_traits::pow(BigUint::from(q), d) - BigUint::one()) >> 1;
                a.powmod(&e, self).sub_ref(&Self::one(f))
            };
            let g = b.gcd(self);
            if !g.is_one() && g.degree() != self.degree() && !g.is_zero() {
                let h = self.div_exact(&g).expect("gcd divides");
                let mut out = g.equal_degree(d);
                out.extend(h.equal_degree(d));
                return out;
            }
        }
    }

    /// Chinese remaindering: the unique `x` of degree below `deg(prod m_i)`.
    pub fn crt(field: &Arc<FiniteField>, residues: &[(Poly, Poly)]) -> Result<(Poly, Poly)> {
        let mut x = Self::zero(field);
        let mut modulus = Self::one(field);
        for (r, m) in residues {
            if m.is_zero() {
                return Err(Error::DivisionByZero);
            }
            if !modulus.gcd(m).is_one() {
                return Err(Error::NotCoprime);
            }
            let inv = modulus.inv_mod(m)?;
            let k = r.sub_ref(&x).mulmod(&inv, m);
            x = x.add_ref(&modulus.mul_ref(&k));
            modulus = modulus.mul_ref(m);
            x = x.rem(&modulus)?;
        }
        Ok((x, modulus))
    }

    /// Element of `F_q[x]/(self)` represented by `p`, encoded in `ext`
    /// (the extension field defined by `self`).
    pub fn reduce_into(&self, p: &Poly, ext: &Arc<FiniteField>) -> FFElem {
        let r = p.rem(self).expect("nonzero modulus");
        let d = self.degree().unwrap_or(1).max(1);
        let mut digits = r.coeffs.clone();
        digits.resize(d, 0);
        ext.elem(ext.encode(&digits))
    }

    /// Polynomial of degree `< deg self` whose class is `e`.
    pub fn lift_from(&self, e: &FFElem) -> Poly {
        let d = self.degree().unwrap_or(1);
        if d <= 1 {
            return Poly::constant(&self.field, e.value());
        }
        Poly::new(&self.field, e.field().decode(e.value()))
    }

    /// Square root in `F_q[x]` (odd characteristic), if `self` is a square.
    pub fn sqrt(&self) -> Option<Poly> {
        let f = &self.field;
        if self.is_zero() {
            return Some(self.clone());
        }
        let d = self.degree()?;
        if d % 2 == 1 || f.characteristic() == 2 {
            return None;
        }
        let lead = f.sqrt(self.leading())?;
        let n = d / 2;
        let two_inv = f.inv(f.from_i64(2)).ok()?;
        let mut g = vec![0u64; n + 1];
        g[n] = lead;
        let lead2_inv = f.mul(two_inv, f.inv(lead).ok()?);
        for k in 1..=n {
            // coefficient of x^(2n-k) in g^2, excluding the unknown 2*g_n*g_(n-k)
            let mut rest = 0;
            for i in (n - k + 1)..=n {
                let j = 2 * n - k - i;
                if j > n - k && j <= n {
                    rest = f.add(rest, f.mul(g[i], g[j]));
                }
            }
            g[n - k] = f.mul(f.sub(self.coeff(2 * n - k), rest), lead2_inv);
        }
        let g = Poly::new(f, g);
        (g.mul_ref(&g) == *self).then_some(g)
    }

    /// Render in the variable `var`.
    pub fn fmt_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let f = &self.field;
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let cs = f.format_value(c);
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            terms.push(match (i, c) {
                (0, _) => cs,
                (_, 1) => mono,
                _ => format!("{cs}*{mono}"),
            });
        }
        terms.join("+")
    }
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
            && (Arc::ptr_eq(&self.field, &other.field) || self.field == other.field)
    }
}
impl Eq for Poly {}

impl Hash for Poly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

/// Degree first, then coefficients from the top down.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}
impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_var("t"))
    }
}
impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_var("t"))
    }
}

macro_rules! poly_op {
    ($tr:ident, $m:ident, $r:ident) => {
        impl $tr<&Poly> for &Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly {
                self.$r(rhs)
            }
        }
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                self.$r(&rhs)
            }
        }
    };
}
poly_op!(Add, add, add_ref);
poly_op!(Sub, sub, sub_ref);
poly_op!(Mul, mul, mul_ref);

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.neg_ref()
    }
}
impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.neg_ref()
    }
}
