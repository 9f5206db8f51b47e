use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;

use super::{check_distinct, verify_targets, FieldSpec, FinitePlace, GlobalField, Place, Target};
use crate::error::{Error, Result};
use crate::exactalg::parse::parse_ratfunc;
use crate::exactalg::{FFElem, FiniteField, Poly, RatFunc};

/// Above this many unit choices, `approximate` stops searching for the
/// smallest one and takes residue 1 everywhere.
const UNIT_CHOICE_CAP: u64 = 4096;

/// The rational function field `F_q(t)`.
#[derive(Clone, Debug)]
pub struct FunctionField {
    constants: Arc<FiniteField>,
}

impl FunctionField {
    pub fn new(q: u64) -> Result<Self> {
        Ok(FunctionField { constants: FiniteField::of_order(q)? })
    }

    pub fn over(constants: Arc<FiniteField>) -> Self {
        FunctionField { constants }
    }

    pub fn constants(&self) -> &Arc<FiniteField> {
        &self.constants
    }

    pub fn t(&self) -> RatFunc {
        RatFunc::t(&self.constants)
    }

    pub fn poly(&self, coeffs: &[u64]) -> RatFunc {
        RatFunc::from_poly(Poly::new(&self.constants, coeffs.to_vec()))
    }

    /// Finite place at a monic irreducible.
    /// `x(1/t)`; swaps the infinite place with `(t)`.
    pub fn invert_variable(&self, x: &RatFunc) -> RatFunc {
        if x.num().is_zero() {
            return x.clone();
        }
        let rev = |f: &Poly| Poly::new(&self.constants, f.coeffs().iter().rev().copied().collect());
        let shift = x.den().deg_i64() - x.num().deg_i64();
        let (mut n, mut d) = (rev(x.num()), rev(x.den()));
        if shift >= 0 {
            n = n.shift(shift as usize);
        } else {
            d = d.shift((-shift) as usize);
        }
        RatFunc::new(n, d).expect("nonzero denominator")
    }

    pub fn place(&self, pi: Poly) -> Result<Place> {
        if !pi.is_monic() || !pi.is_irreducible() {
            return Err(Error::Invalid(format!("{pi} is not monic irreducible")));
        }
        Ok(Place::Finite(FinitePlace::new_unchecked(pi)))
    }

    fn finite<'a>(&self, v: &'a Place) -> Result<&'a FinitePlace> {
        match v {
            Place::Finite(p) => Ok(p),
            Place::Infinite => Err(Error::UnsupportedPlace("infinite".into())),
            other => Err(Error::UnsupportedPlace(other.to_string())),
        }
    }

    /// `(e, f / π^e)` for nonzero `f`.
    fn split(f: &Poly, pi: &Poly) -> (i64, Poly) {
        let mut e = 0;
        let mut g = f.clone();
        loop {
            let (q, r) = g.divrem(pi).expect("nonzero modulus");
            if !r.is_zero() {
                return (e, g);
            }
            g = q;
            e += 1;
        }
    }

    /// `num * den^{-1} mod m` for `den` coprime to `m`.
    fn poly_mod(x: &RatFunc, m: &Poly) -> Result<Poly> {
        if m.is_constant() {
            return Ok(Poly::zero(m.field()));
        }
        let inv = x.den().inv_mod(m).map_err(|_| Error::NegativeValuation(-1))?;
        Ok(x.num().mulmod(&inv, m))
    }

    fn poly_character(f: &Poly, pi: &Poly) -> Result<i8> {
        let field = pi.field();
        let order = num_traits::pow(BigUint::from(field.size()), pi.degree().unwrap_or(1));
        let r = f.powmod(&((order - BigUint::one()) >> 1), pi);
        if r.is_one() {
            Ok(1)
        } else if r.is_zero() {
            Ok(0)
        } else if r == Poly::constant(field, field.neg(1)) {
            Ok(-1)
        } else {
            Err(Error::Invariant("Euler criterion returned a non-sign".into()))
        }
    }

    fn polys_below_degree(&self, n: usize) -> impl Iterator<Item = Poly> + '_ {
        let q = self.constants.size();
        let count = q.checked_pow(n as u32).expect("residue system fits in u64");
        (0..count).map(move |mut k| {
            let mut c = Vec::with_capacity(n);
            for _ in 0..n {
                c.push(k % q);
                k /= q;
            }
            Poly::new(&self.constants, c)
        })
    }

    fn monics_of_degree(&self, n: usize) -> impl Iterator<Item = Poly> + '_ {
        self.polys_below_degree(n).map(move |p| p.add_ref(&Poly::monomial(&self.constants, 1, n)))
    }

    fn modulus_poly(&self, modulus: &[(Place, u32)]) -> Result<Poly> {
        let mut m = Poly::one(&self.constants);
        for (v, n) in modulus {
            m = m.mul_ref(&self.finite(v)?.poly().pow(*n as u64));
        }
        Ok(m)
    }
}

impl GlobalField for FunctionField {
    type Elem = RatFunc;

    fn spec(&self) -> FieldSpec {
        let f = &self.constants;
        let modulus = if f.is_prime_field() { vec![0, 1] } else { f.modulus().to_vec() };
        FieldSpec::FqT { p: f.characteristic(), m: f.degree(), q: f.size(), modulus }
    }

    fn zero(&self) -> RatFunc {
        RatFunc::zero(&self.constants)
    }
    fn one(&self) -> RatFunc {
        RatFunc::one(&self.constants)
    }
    fn from_i64(&self, n: i64) -> RatFunc {
        RatFunc::constant(&self.constants, self.constants.from_i64(n))
    }
    fn characteristic(&self) -> u64 {
        self.constants.characteristic()
    }

    fn parse_elem(&self, s: &str) -> Result<RatFunc> {
        parse_ratfunc(&self.constants, s, "t")
    }
    fn format_elem(&self, x: &RatFunc) -> String {
        x.to_string()
    }

    fn parse_place(&self, s: &str) -> Result<Place> {
        let s = s.trim();
        if s == "infinite" {
            return Ok(Place::Infinite);
        }
        let body = s
            .strip_prefix("finite:")
            .ok_or_else(|| Error::Invalid(format!("unknown place literal '{s}'")))?;
        let r = parse_ratfunc(&self.constants, body, "t")?;
        if !r.is_polynomial() {
            return Err(Error::Invalid(format!("{r} is not a polynomial")));
        }
        self.place(r.num().clone())
    }

    fn height(&self, x: &RatFunc) -> u64 {
        x.height() as u64
    }

    fn enumerate(&self, bound: u64) -> Vec<RatFunc> {
        let b = bound as usize;
        let mut out = Vec::new();
        for h in 0..=b {
            // denominators of degree <= h, numerators of degree <= h, max degree exactly h
            for dd in 0..=h {
                for den in self.monics_of_degree(dd) {
                    for num in self.polys_below_degree(h + 1) {
                        let dn = num.degree().unwrap_or(0);
                        if dn.max(dd) != h || (num.is_zero() && (dd > 0 || h > 0)) {
                            continue;
                        }
                        if !num.gcd(&den).is_one() && !num.is_zero() {
                            continue;
                        }
                        out.push(RatFunc::new(num, den.clone()).expect("monic denominator"));
                    }
                }
            }
        }
        out
    }

    fn ord(&self, v: &Place, x: &RatFunc) -> Result<Option<i64>> {
        if x.num().is_zero() {
            return match v {
                Place::Finite(_) | Place::Infinite => Ok(None),
                Place::Real => Err(Error::RealPlace),
                other => Err(Error::UnsupportedPlace(other.to_string())),
            };
        }
        match v {
            Place::Infinite => Ok(Some(x.den().deg_i64() - x.num().deg_i64())),
            Place::Real => Err(Error::RealPlace),
            _ => {
                let pi = self.finite(v)?.poly();
                Ok(Some(Self::split(x.num(), pi).0 - Self::split(x.den(), pi).0))
            }
        }
    }

    fn uniformizer(&self, v: &Place) -> Result<RatFunc> {
        match v {
            Place::Infinite => Ok(self.t().inv().expect("t is nonzero")),
            _ => Ok(RatFunc::from_poly(self.finite(v)?.poly().clone())),
        }
    }

    fn residue_field(&self, v: &Place) -> Result<Arc<FiniteField>> {
        match v {
            Place::Infinite => Ok(self.constants.clone()),
            _ => self.finite(v)?.residue_field(),
        }
    }

    fn residue(&self, v: &Place, x: &RatFunc) -> Result<FFElem> {
        let o = self.ord(v, x)?;
        match o {
            Some(n) if n < 0 => return Err(Error::NegativeValuation(n)),
            Some(0) => {}
            _ => return Ok(self.residue_field(v)?.elem(0)),
        }
        match v {
            Place::Infinite => {
                let f = &self.constants;
                let c = f.mul(x.num().leading(), f.inv(x.den().leading())?);
                Ok(f.elem(c))
            }
            _ => {
                let fp = self.finite(v)?;
                let r = Self::poly_mod(x, fp.poly())?;
                Ok(fp.poly().reduce_into(&r, &fp.residue_field()?))
            }
        }
    }

    fn lift(&self, v: &Place, r: &FFElem) -> Result<RatFunc> {
        match v {
            Place::Infinite => Ok(RatFunc::constant(&self.constants, r.value())),
            _ => Ok(RatFunc::from_poly(self.finite(v)?.poly().lift_from(r))),
        }
    }

    fn unit_character(&self, v: &Place, x: &RatFunc) -> Result<i8> {
        if self.characteristic() == 2 {
            return Err(Error::CharacteristicTwo);
        }
        if x.num().is_zero() {
            return Err(Error::ZeroArgument("unit part of 0"));
        }
        match v {
            Place::Infinite => {
                let f = &self.constants;
                Ok(f.quadratic_character(x.num().leading())? * f.quadratic_character(x.den().leading())?)
            }
            _ => {
                let pi = self.finite(v)?.poly();
                let (_, n) = Self::split(x.num(), pi);
                let (_, d) = Self::split(x.den(), pi);
                Ok(Self::poly_character(&n, pi)? * Self::poly_character(&d, pi)?)
            }
        }
    }

    fn is_local_square(&self, v: &Place, x: &RatFunc) -> Result<bool> {
        let o = self.ord(v, x)?.ok_or(Error::ZeroArgument("local square test of 0"))?;
        Ok(o % 2 == 0 && self.unit_character(v, x)? == 1)
    }

    fn support(&self, x: &RatFunc) -> Result<Vec<Place>> {
        if x.num().is_zero() {
            return Err(Error::ZeroArgument("support of 0"));
        }
        let mut out = Vec::new();
        for p in [x.num(), x.den()] {
            for (g, _) in p.factor()?.1 {
                out.push(Place::Finite(FinitePlace::new_unchecked(g)));
            }
        }
        out.sort();
        Ok(out)
    }

    fn always_bad(&self) -> Vec<Place> {
        vec![Place::Infinite]
    }

    fn finite_places(&self) -> Box<dyn Iterator<Item = Place> + '_> {
        Box::new(
            Poly::all_monic_irreducibles(&self.constants)
                .map(|p| Place::Finite(FinitePlace::new_unchecked(p))),
        )
    }

    fn place_degree(&self, v: &Place) -> Result<u32> {
        match v {
            Place::Infinite => Ok(self.constants.degree()),
            _ => Ok(self.finite(v)?.degree() as u32 * self.constants.degree()),
        }
    }

    fn approximate(&self, targets: &[(Place, Target<RatFunc>)]) -> Result<RatFunc> {
        check_distinct(targets)?;
        let f = &self.constants;
        // denominator D absorbs the required poles
        let mut den = Poly::one(f);
        let mut pis = Vec::new();
        for (v, t) in targets {
            let pi = self.finite(v)?.poly().clone();
            let e = match t {
                Target::ExactOrd(n) if *n < 0 => -n,
                Target::Near { value, .. } => self.ord(v, value)?.map_or(0, |o| (-o).max(0)),
                _ => 0,
            };
            den = den.mul_ref(&pi.pow(e as u64));
            pis.push((pi, e));
        }
        let d = RatFunc::from_poly(den.clone());
        // fixed congruences and the ExactOrd slots that still need a unit
        let mut fixed: Vec<(Poly, Poly)> = Vec::new();
        let mut slots: Vec<(Poly, Poly, i64, Arc<FiniteField>)> = Vec::new();
        for ((v, t), (pi, e)) in targets.iter().zip(&pis) {
            match t {
                Target::Residue(r) => {
                    let lifted = RatFunc::from_poly(pi.lift_from(r));
                    let m = pi.clone();
                    fixed.push((Self::poly_mod(&(&lifted * &d), &m)?, m));
                }
                Target::MinOrd(n) => {
                    if *n > 0 {
                        fixed.push((Poly::zero(f), pi.pow(*n as u64)));
                    }
                }
                Target::ExactOrd(n) => {
                    let k = (*n).max(0);
                    slots.push((pi.clone(), pi.pow(k as u64), k, self.residue_field(v)?));
                }
                Target::Near { value, precision } => {
                    let k = precision + e;
                    if k > 0 {
                        let m = pi.pow(k as u64);
                        fixed.push((Self::poly_mod(&(value * &d), &m)?, m));
                    }
                }
            }
        }
        let choices: u64 = slots.iter().map(|s| s.3.size() - 1).product();
        let exhaustive = choices <= UNIT_CHOICE_CAP;
        let count = if exhaustive { choices } else { 1 };
        let mut best: Option<Poly> = None;
        for mut idx in 0..count {
            let mut congr = fixed.clone();
            for (pi, pik, _, rf) in &slots {
                let u = if exhaustive {
                    let u = 1 + idx % (rf.size() - 1);
                    idx /= rf.size() - 1;
                    u
                } else {
                    1
                };
                let unit = pi.lift_from(&rf.elem(u));
                let m = pik.mul_ref(pi);
                congr.push((unit.mul_ref(pik).rem(&m)?, m));
            }
            let (y, _) = Poly::crt(f, &congr)?;
            if best.as_ref().is_none_or(|b| y < *b) {
                best = Some(y);
            }
        }
        let y = best.expect("at least one candidate");
        let x = RatFunc::new(y, den)?;
        verify_targets(self, &x, targets)?;
        Ok(x)
    }

    fn residue_system_size(&self, modulus: &[(Place, u32)]) -> Result<u128> {
        let deg = self.modulus_poly(modulus)?.degree().unwrap_or(0);
        Ok((self.constants.size() as u128).saturating_pow(deg as u32))
    }

    fn residue_system(&self, modulus: &[(Place, u32)]) -> Result<Vec<RatFunc>> {
        let deg = self.modulus_poly(modulus)?.degree().unwrap_or(0);
        let mut v: Vec<Poly> = self.polys_below_degree(deg).collect();
        v.sort();
        Ok(v.into_iter().map(RatFunc::from_poly).collect())
    }

    fn reduce_mod(&self, x: &RatFunc, modulus: &[(Place, u32)]) -> Result<RatFunc> {
        let m = self.modulus_poly(modulus)?;
        Ok(RatFunc::from_poly(Self::poly_mod(x, &m)?))
    }

    fn sqrt(&self, x: &RatFunc) -> Option<RatFunc> {
        let n = x.num().sqrt()?;
        let d = x.den().sqrt()?;
        RatFunc::new(n, d).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::FieldElement;

    fn k3() -> FunctionField {
        FunctionField::new(3).unwrap()
    }

    fn el(k: &FunctionField, s: &str) -> RatFunc {
        k.parse_elem(s).unwrap()
    }

    #[test]
    fn ord_examples() {
        let k = k3();
        let t = k.parse_place("finite:t").unwrap();
        assert_eq!(k.ord(&t, &el(&k, "t^2/(t+1)")).unwrap(), Some(2));
        assert_eq!(k.ord(&Place::Infinite, &el(&k, "(t^2+1)/t^5")).unwrap(), Some(3));
        assert_eq!(k.ord(&t, &k.zero()).unwrap(), None);
        assert_eq!(k.ord(&Place::Real, &k.one()), Err(Error::RealPlace));
    }

    #[test]
    fn residue_examples() {
        let k = k3();
        let t = k.parse_place("finite:t").unwrap();
        let t1 = k.parse_place("finite:t+1").unwrap();
        assert_eq!(k.residue(&t, &el(&k, "(t+2)/(t+1)")).unwrap().value(), 2);
        assert_eq!(k.residue(&t1, &el(&k, "t")).unwrap().value(), 2);
        assert_eq!(k.residue(&t, &el(&k, "1/t")), Err(Error::NegativeValuation(-1)));
        let t2 = k.parse_place("finite:t^2+1").unwrap();
        // t mod t^2+1 is the generator u of F_9
        assert_eq!(k.residue(&t2, &el(&k, "t")).unwrap().value(), 3);
    }

    #[test]
    fn bad_place_literals() {
        let k = k3();
        assert!(k.parse_place("finite:t^2+2").is_err());
        assert!(k.parse_place("finite:2*t").is_err());
        assert!(k.parse_place("prime:5").is_err());
    }

    #[test]
    fn approximate_examples() {
        let k = k3();
        let t = k.parse_place("finite:t").unwrap();
        let t1 = k.parse_place("finite:t+1").unwrap();
        let x = k
            .approximate(&[(t.clone(), Target::ExactOrd(1)), (t1.clone(), Target::ExactOrd(0))])
            .unwrap();
        assert_eq!(x, k.t());
        let rf0 = k.residue_field(&t).unwrap();
        let rf1 = k.residue_field(&t1).unwrap();
        let x = k
            .approximate(&[(t.clone(), Target::Residue(rf0.elem(2))), (t1.clone(), Target::Residue(rf1.elem(0)))])
            .unwrap();
        assert_eq!(k.residue(&t, &x).unwrap().value(), 2);
        assert_eq!(k.residue(&t1, &x).unwrap().value(), 0);
        assert!(matches!(
            k.approximate(&[(t.clone(), Target::MinOrd(1)), (t.clone(), Target::MinOrd(2))]),
            Err(Error::ConflictingPlaces(_))
        ));
        let x = k.approximate(&[(t.clone(), Target::ExactOrd(-2))]).unwrap();
        assert_eq!(k.ord(&t, &x).unwrap(), Some(-2));
        let v = el(&k, "(t^2+1)/(t^3*(t+1))");
        let y = k.approximate(&[(t.clone(), Target::Near { value: v.clone(), precision: 0 })]).unwrap();
        assert!(k.ord(&t, &(&v - &y)).unwrap().is_none_or(|o| o >= 0));
        assert_eq!(k.ord(&t1, &y).unwrap().map_or(0, |o| o.min(0)), 0);
    }

    #[test]
    fn local_squares() {
        let k = k3();
        let t = k.parse_place("finite:t").unwrap();
        assert!(!k.is_local_square(&t, &k.t()).unwrap());
        assert!(k.is_local_square(&t, &el(&k, "1+t")).unwrap());
        assert!(!k.is_local_square(&t, &el(&k, "2+t")).unwrap());
        assert!(k.is_local_square(&Place::Infinite, &el(&k, "(t^2+1)/(t^4+t)")).unwrap());
        assert!(k.is_local_square(&t, &k.zero()).is_err());
    }

    #[test]
    fn enumerate_counts() {
        let k = k3();
        assert_eq!(k.enumerate(0).len(), 3);
        let one = k.enumerate(1);
        assert_eq!(one.len(), 27);
        let mut dedup = one.clone();
        dedup.sort_by_key(|x| x.to_string());
        dedup.dedup();
        assert_eq!(dedup.len(), 27);
    }

    #[test]
    fn product_formula() {
        let k = k3();
        for x in k.enumerate(2).into_iter().filter(|x| !x.is_zero()) {
            let mut total = k.ord(&Place::Infinite, &x).unwrap().unwrap() * k.place_degree(&Place::Infinite).unwrap() as i64;
            for v in k.support(&x).unwrap() {
                total += k.ord(&v, &x).unwrap().unwrap() * k.place_degree(&v).unwrap() as i64;
            }
            assert_eq!(total, 0, "{x}");
        }
    }

    #[test]
    fn residue_systems() {
        let k = k3();
        let t = k.parse_place("finite:t").unwrap();
        let t1 = k.parse_place("finite:t+1").unwrap();
        let m = [(t.clone(), 2), (t1.clone(), 1)];
        let reps = k.residue_system(&m).unwrap();
        assert_eq!(reps.len(), 27);
        assert_eq!(k.residue_system_size(&m).unwrap(), 27);
        let x = el(&k, "(t^4+2)/(t^2+1)");
        let r = k.reduce_mod(&x, &m).unwrap();
        assert!(reps.contains(&r));
        let d = &x - &r;
        assert!(k.ord(&t, &d).unwrap().is_none_or(|o| o >= 2));
        assert!(k.ord(&t1, &d).unwrap().is_none_or(|o| o >= 1));
    }

    #[test]
    fn global_squares() {
        let k = k3();
        assert!(k.is_square(&el(&k, "(t+1)^2/(t^2+1)^2")));
        assert!(!k.is_square(&el(&k, "2*(t+1)^2")));
        let f9 = FunctionField::new(9).unwrap();
        assert!(f9.is_square(&f9.from_i64(2)));
    }
}
