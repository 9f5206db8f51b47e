//! Integer helpers: primality, factorization, modular arithmetic and CRT.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(sp) {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

/// Prime factorization of a positive `u64`, sorted by prime.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    if n <= 1 {
        return out;
    }
    let mut small = 2u64;
    while small < 1000 && small * small <= n {
        let mut e = 0;
        while n.is_multiple_of(small) {
            n /= small;
            e += 1;
        }
        if e > 0 {
            out.push((small, e));
        }
        small += if small == 2 { 1 } else { 2 };
    }
    let mut stack = vec![n];
    let mut primes = Vec::new();
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            primes.push(m);
            continue;
        }
        let d = pollard_rho(m);
        stack.push(d);
        stack.push(m / d);
    }
    primes.sort_unstable();
    for pr in primes {
        match out.last_mut() {
            Some((q, e)) if *q == pr => *e += 1,
            _ => out.push((pr, 1)),
        }
    }
    out
}

/// Prime factorization of `|n|` for a nonzero big integer. Prime factors must
/// fit in 64 bits.
pub fn factor_bigint(n: &BigInt) -> Result<Vec<(u64, u32)>> {
    if n.is_zero() {
        return Err(Error::ZeroArgument("factorization of 0"));
    }
    let mut m = n.abs();
    if let Some(small) = m.to_u64() {
        return Ok(factor_u64(small));
    }
    let mut out = Vec::new();
    let mut d = 2u64;
    while m.to_u64().is_none() {
        if d > 10_000_000 {
            return Err(Error::CapExceeded(format!("cannot factor {n}")));
        }
        let bd = BigInt::from(d);
        let mut e = 0;
        while (&m % &bd).is_zero() {
            m /= &bd;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    for (pr, e) in factor_u64(m.to_u64().unwrap_or(1)) {
        match out.iter_mut().find(|(q, _)| *q == pr) {
            Some((_, f)) => *f += e,
            None => out.push((pr, e)),
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// `n mod m` in `[0, m)`.
pub fn bigint_mod_u64(n: &BigInt, m: u64) -> u64 {
    let r = n.mod_floor(&BigInt::from(m));
    r.to_u64().unwrap_or(0)
}

/// Exponent of the prime `p` in `n != 0`, and the cofactor.
pub fn split_prime_power(n: &BigInt, p: u64) -> (i64, BigInt) {
    let bp = BigInt::from(p);
    let mut m = n.clone();
    let mut e = 0;
    while !m.is_zero() && (&m % &bp).is_zero() {
        m /= &bp;
        e += 1;
    }
    (e, m)
}

/// Inverse of `a` modulo `m` for big integers, if it exists.
pub fn bigint_inv_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Chinese remaindering over the integers: the unique `x` in `[0, prod m_i)`
/// with `x ≡ r_i (mod m_i)`.
pub fn crt_bigint(residues: &[(BigInt, BigInt)]) -> Result<(BigInt, BigInt)> {
    let mut x = BigInt::zero();
    let mut modulus = BigInt::one();
    for (r, m) in residues {
        if m.sign() != Sign::Plus {
            return Err(Error::Invalid("CRT modulus must be positive".into()));
        }
        if !modulus.gcd(m).is_one() {
            return Err(Error::NotCoprime);
        }
        // x + modulus * k ≡ r (mod m)
        let inv = bigint_inv_mod(&modulus, m).ok_or(Error::NotCoprime)?;
        let k = ((r - &x) * inv).mod_floor(m);
        x += &modulus * k;
        modulus *= m;
        x = x.mod_floor(&modulus);
    }
    Ok((x, modulus))
}

pub fn biguint_pow(base: u64, e: u32) -> BigUint {
    num_traits::pow(BigUint::from(base), e as usize)
}

/// Odd primes in increasing order, skipping those listed.
pub fn primes_skipping(skip: &[u64]) -> impl Iterator<Item = u64> + '_ {
    (3u64..)
        .step_by(2)
        .filter(|n| is_prime_u64(*n))
        .filter(move |n| !skip.contains(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_small() {
        assert_eq!(factor_u64(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factor_u64(1), vec![]);
        assert_eq!(factor_u64(1_000_003 * 999_983), vec![(999_983, 1), (1_000_003, 1)]);
    }

    #[test]
    fn factor_big() {
        let n = BigInt::from(-50);
        assert_eq!(factor_bigint(&n).unwrap(), vec![(2, 1), (5, 2)]);
        assert!(factor_bigint(&BigInt::zero()).is_err());
    }

    #[test]
    fn crt_basic() {
        let (x, m) = crt_bigint(&[
            (BigInt::from(2), BigInt::from(3)),
            (BigInt::from(3), BigInt::from(5)),
        ])
        .unwrap();
        assert_eq!((x, m), (BigInt::from(8), BigInt::from(15)));
        assert_eq!(
            crt_bigint(&[
                (BigInt::from(1), BigInt::from(4)),
                (BigInt::from(1), BigInt::from(6))
            ]),
            Err(Error::NotCoprime)
        );
    }

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..30).filter(|n| is_prime_u64(*n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(is_prime_u64(1_000_000_007));
        assert!(!is_prime_u64(561));
    }
}
