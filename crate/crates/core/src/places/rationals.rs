use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{check_distinct, verify_targets, FieldSpec, GlobalField, Place, Target};
use crate::error::{Error, Result};
use crate::exactalg::integer::{
    bigint_inv_mod, bigint_mod_u64, crt_bigint, factor_bigint, is_prime_u64, primes_skipping,
    split_prime_power,
};
use crate::exactalg::parse::{format_rational, parse_rational};
use crate::exactalg::scalar::rational_sign;
use crate::exactalg::{FFElem, FiniteField};

const UNIT_CHOICE_CAP: u64 = 4096;

/// The field of rational numbers.
#[derive(Clone, Copy, Debug, Default)]
pub struct Rationals;

fn prime_of(v: &Place) -> Result<u64> {
    match v {
        Place::Prime(l) => Ok(*l),
        Place::Real => Err(Error::RealPlace),
        other => Err(Error::UnsupportedPlace(other.to_string())),
    }
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `x mod m` for `x` with denominator prime to `m`, in `[0, m)`.
fn rat_mod(x: &BigRational, m: &BigInt) -> Result<BigInt> {
    if m.is_one() {
        return Ok(BigInt::zero());
    }
    let inv = bigint_inv_mod(x.denom(), m).ok_or(Error::NegativeValuation(-1))?;
    Ok((x.numer() * inv).mod_floor(m))
}

/// Symmetric-range representative `(-m/2, m/2]`.
fn symmetric(x: BigInt, m: &BigInt) -> BigInt {
    if &x * 2 > *m {
        x - m
    } else {
        x
    }
}

impl Rationals {
    fn modulus_int(&self, modulus: &[(Place, u32)]) -> Result<BigInt> {
        let mut m = BigInt::one();
        for (v, n) in modulus {
            m *= num_traits::pow(BigInt::from(prime_of(v)?), *n as usize);
        }
        Ok(m)
    }

    fn unit_residue(&self, l: u64, x: &BigRational) -> u64 {
        let (_, n) = split_prime_power(x.numer(), l);
        let (_, d) = split_prime_power(x.denom(), l);
        let n = bigint_mod_u64(&n, l);
        let d = bigint_mod_u64(&d, l);
        let inv = bigint_inv_mod(&BigInt::from(d), &BigInt::from(l)).expect("unit");
        bigint_mod_u64(&(BigInt::from(n) * inv), l)
    }
}

impl GlobalField for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Q
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        int(n)
    }
    fn characteristic(&self) -> u64 {
        0
    }

    fn parse_elem(&self, s: &str) -> Result<BigRational> {
        parse_rational(s)
    }
    fn format_elem(&self, x: &BigRational) -> String {
        format_rational(x)
    }

    fn parse_place(&self, s: &str) -> Result<Place> {
        let s = s.trim();
        if s == "real" {
            return Ok(Place::Real);
        }
        let n: u64 = s
            .strip_prefix("prime:")
            .and_then(|b| b.trim().parse().ok())
            .ok_or_else(|| Error::Invalid(format!("unknown place literal '{s}'")))?;
        if !is_prime_u64(n) {
            return Err(Error::Invalid(format!("{n} is not prime")));
        }
        Ok(Place::Prime(n))
    }

    fn height(&self, x: &BigRational) -> u64 {
        let h = x.numer().abs().max(x.denom().clone());
        h.to_u64().unwrap_or(u64::MAX)
    }

    fn enumerate(&self, bound: u64) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero()];
        let b = bound as i64;
        for h in 1..=b {
            for den in 1..=h {
                let nums: Vec<i64> = if den == h { (1..=h).collect() } else { vec![h] };
                for n in nums {
                    if n.gcd(&den) != 1 {
                        continue;
                    }
                    for s in [n, -n] {
                        out.push(BigRational::new(BigInt::from(s), BigInt::from(den)));
                    }
                }
            }
        }
        out
    }

    fn ord(&self, v: &Place, x: &BigRational) -> Result<Option<i64>> {
        let l = prime_of(v)?;
        if x.is_zero() {
            return Ok(None);
        }
        Ok(Some(split_prime_power(x.numer(), l).0 - split_prime_power(x.denom(), l).0))
    }

    fn uniformizer(&self, v: &Place) -> Result<BigRational> {
        Ok(int(prime_of(v)? as i64))
    }

    fn residue_field(&self, v: &Place) -> Result<Arc<FiniteField>> {
        FiniteField::prime(prime_of(v)?)
    }

    fn residue(&self, v: &Place, x: &BigRational) -> Result<FFElem> {
        let l = prime_of(v)?;
        let f = FiniteField::prime(l)?;
        match self.ord(v, x)? {
            Some(n) if n < 0 => Err(Error::NegativeValuation(n)),
            Some(0) => Ok(f.elem(self.unit_residue(l, x))),
            _ => Ok(f.elem(0)),
        }
    }

    fn lift(&self, v: &Place, r: &FFElem) -> Result<BigRational> {
        prime_of(v)?;
        Ok(int(r.value() as i64))
    }

    fn unit_character(&self, v: &Place, x: &BigRational) -> Result<i8> {
        let l = prime_of(v)?;
        if l == 2 {
            return Err(Error::CharacteristicTwo);
        }
        if x.is_zero() {
            return Err(Error::ZeroArgument("unit part of 0"));
        }
        FiniteField::prime(l)?.quadratic_character(self.unit_residue(l, x))
    }

    fn is_local_square(&self, v: &Place, x: &BigRational) -> Result<bool> {
        if x.is_zero() {
            return Err(Error::ZeroArgument("local square test of 0"));
        }
        match v {
            Place::Real => Ok(x.is_positive()),
            Place::Prime(2) => {
                let (o, u) = self.dyadic_parts(x)?;
                Ok(o % 2 == 0 && u == 1)
            }
            _ => Ok(self.ord(v, x)?.expect("nonzero") % 2 == 0 && self.unit_character(v, x)? == 1),
        }
    }

    fn sign(&self, x: &BigRational) -> Result<i8> {
        Ok(rational_sign(x))
    }

    fn dyadic_parts(&self, x: &BigRational) -> Result<(i64, u64)> {
        if x.is_zero() {
            return Err(Error::ZeroArgument("dyadic parts of 0"));
        }
        let (a, n) = split_prime_power(x.numer(), 2);
        let (b, d) = split_prime_power(x.denom(), 2);
        // d is odd, so d^{-1} = d mod 8
        let u = bigint_mod_u64(&(n * d), 8);
        Ok((a - b, u))
    }

    fn support(&self, x: &BigRational) -> Result<Vec<Place>> {
        if x.is_zero() {
            return Err(Error::ZeroArgument("support of 0"));
        }
        let mut out: Vec<Place> = factor_bigint(x.numer())?
            .into_iter()
            .chain(factor_bigint(x.denom())?)
            .map(|(l, _)| Place::Prime(l))
            .collect();
        out.sort();
        out.dedup();
        Ok(out)
    }

    fn always_bad(&self) -> Vec<Place> {
        vec![Place::Prime(2), Place::Real]
    }

    fn finite_places(&self) -> Box<dyn Iterator<Item = Place> + '_> {
        Box::new(primes_skipping(&[]).map(Place::Prime))
    }

    fn place_degree(&self, v: &Place) -> Result<u32> {
        prime_of(v).map(|_| 1)
    }

    fn approximate(&self, targets: &[(Place, Target<BigRational>)]) -> Result<BigRational> {
        check_distinct(targets)?;
        let mut den = BigInt::one();
        let mut primes = Vec::new();
        for (v, t) in targets {
            let l = prime_of(v)?;
            let e = match t {
                Target::ExactOrd(n) if *n < 0 => -n,
                Target::Near { value, .. } => self.ord(v, value)?.map_or(0, |o| (-o).max(0)),
                _ => 0,
            };
            den *= num_traits::pow(BigInt::from(l), e as usize);
            primes.push((l, e));
        }
        let d = BigRational::from_integer(den.clone());
        let mut fixed: Vec<(BigInt, BigInt)> = Vec::new();
        let mut slots: Vec<(u64, BigInt)> = Vec::new();
        for ((_, t), (l, e)) in targets.iter().zip(&primes) {
            let lb = BigInt::from(*l);
            match t {
                Target::Residue(r) => {
                    let m = lb.clone();
                    fixed.push((rat_mod(&(int(r.value() as i64) * &d), &m)?, m));
                }
                Target::MinOrd(n) => {
                    if *n > 0 {
                        fixed.push((BigInt::zero(), num_traits::pow(lb, *n as usize)));
                    }
                }
                Target::ExactOrd(n) => {
                    slots.push((*l, num_traits::pow(lb, (*n).max(0) as usize)));
                }
                Target::Near { value, precision } => {
                    let k = precision + e;
                    if k > 0 {
                        let m = num_traits::pow(lb, k as usize);
                        fixed.push((rat_mod(&(value * &d), &m)?, m));
                    }
                }
            }
        }
        let choices: u64 = slots.iter().map(|(l, _)| l - 1).product();
        let exhaustive = choices <= UNIT_CHOICE_CAP;
        let count = if exhaustive { choices } else { 1 };
        let mut best: Option<BigInt> = None;
        for mut idx in 0..count {
            let mut congr = fixed.clone();
            for (l, lk) in &slots {
                let u = if exhaustive {
                    let u = 1 + idx % (l - 1);
                    idx /= l - 1;
                    u
                } else {
                    1
                };
                congr.push((lk * u, lk * l));
            }
            let (y, m) = crt_bigint(&congr)?;
            let y = symmetric(y, &m);
            let key = |z: &BigInt| (z.abs(), z.is_negative());
            if best.as_ref().is_none_or(|b| key(&y) < key(b)) {
                best = Some(y);
            }
        }
        let x = BigRational::new(best.expect("at least one candidate"), den);
        verify_targets(self, &x, targets)?;
        Ok(x)
    }

    fn residue_system_size(&self, modulus: &[(Place, u32)]) -> Result<u128> {
        Ok(self.modulus_int(modulus)?.to_u128().unwrap_or(u128::MAX))
    }

    fn residue_system(&self, modulus: &[(Place, u32)]) -> Result<Vec<BigRational>> {
        let m = self
            .modulus_int(modulus)?
            .to_i64()
            .ok_or_else(|| Error::CapExceeded("residue system too large".into()))?;
        Ok((0..m).map(int).collect())
    }

    fn reduce_mod(&self, x: &BigRational, modulus: &[(Place, u32)]) -> Result<BigRational> {
        let m = self.modulus_int(modulus)?;
        Ok(BigRational::from_integer(rat_mod(x, &m)?))
    }

    fn sqrt(&self, x: &BigRational) -> Option<BigRational> {
        if x.is_negative() {
            return None;
        }
        let n = x.numer().sqrt();
        let d = x.denom().sqrt();
        (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| BigRational::new(n, d))
    }
}
