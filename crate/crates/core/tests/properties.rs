use std::sync::OnceLock;

use intdef::harness::isotropic_oracle;
use intdef::places::Target;
use intdef::quadforms::{local_isotropic, DiagForm};
use intdef::symbols::hilbert_symbol;
use intdef::{FieldElement, FunctionField, GlobalField, PerfElement, PerfectClosure, Place, RatFunc, Rationals};
use num_rational::Rational64;
use proptest::prelude::*;
use proptest::sample::select;

fn f3() -> &'static FunctionField {
    static K: OnceLock<FunctionField> = OnceLock::new();
    K.get_or_init(|| FunctionField::new(3).unwrap())
}

fn pool3() -> Vec<RatFunc> {
    f3().enumerate(2).into_iter().filter(|x| !x.is_zero()).collect()
}

fn places3() -> Vec<Place> {
    let k = f3();
    let mut v: Vec<Place> = k.finite_places().take(6).collect();
    v.push(Place::Infinite);
    v
}

fn pool_q() -> Vec<num_rational::BigRational> {
    Rationals.enumerate(20).into_iter().filter(|x| !x.is_zero()).collect()
}

fn places_q() -> Vec<Place> {
    vec![Place::Real, Place::Prime(2), Place::Prime(3), Place::Prime(5), Place::Prime(7)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn symbol_is_symmetric_and_bimultiplicative(
        v in select(places3()), a in select(pool3()), a2 in select(pool3()), b in select(pool3()),
    ) {
        let k = f3();
        let s = |x: &RatFunc, y: &RatFunc| hilbert_symbol(k, &v, x, y).unwrap();
        prop_assert_eq!(s(&a, &b), s(&b, &a));
        prop_assert_eq!(s(&(a.clone() * a2.clone()), &b), s(&a, &b) * s(&a2, &b));
        prop_assert_eq!(s(&a, &-a.clone()), 1);
        prop_assert_eq!(s(&a, &(a.square() * b.clone())), s(&a, &b));
    }

    #[test]
    fn rational_symbol_steinberg(v in select(places_q()), a in select(pool_q()), b in select(pool_q())) {
        let q = Rationals;
        let s = |x, y| hilbert_symbol(&q, &v, x, y).unwrap();
        prop_assert_eq!(s(&a, &b), s(&b, &a));
        let one_minus = q.one() - a.clone();
        if !one_minus.is_zero() {
            prop_assert_eq!(s(&a, &one_minus), 1);
        }
        prop_assert_eq!(s(&a, &-a.clone()), 1);
    }

    #[test]
    fn isotropy_invariant_under_permutation_and_square_scaling(
        v in select(places3()),
        coeffs in prop::collection::vec(select(pool3()), 2..=4),
        scale in prop::collection::vec(select(pool3()), 4),
        rot in 0usize..4,
    ) {
        let k = f3();
        let base = local_isotropic(k, &v, &DiagForm::new(coeffs.clone()).unwrap()).unwrap();
        let mut permuted = coeffs.clone();
        permuted.rotate_left(rot % coeffs.len());
        prop_assert_eq!(local_isotropic(k, &v, &DiagForm::new(permuted).unwrap()).unwrap(), base);
        let scaled: Vec<RatFunc> = coeffs.iter().zip(&scale).map(|(c, s)| c.clone() * s.square()).collect();
        prop_assert_eq!(local_isotropic(k, &v, &DiagForm::new(scaled).unwrap()).unwrap(), base);
        // a common scalar changes nothing either
        let common: Vec<RatFunc> = coeffs.iter().map(|c| c.clone() * scale[0].clone()).collect();
        prop_assert_eq!(local_isotropic(k, &v, &DiagForm::new(common).unwrap()).unwrap(), base);
    }

    #[test]
    fn isotropy_matches_hensel_oracle(
        idx in 0usize..6,
        coeffs in prop::collection::vec(select(pool3()), 2..=4),
    ) {
        let k = f3();
        let v = k.finite_places().nth(idx).unwrap();
        let f = DiagForm::new(coeffs.clone()).unwrap();
        prop_assert_eq!(local_isotropic(k, &v, &f).unwrap(), isotropic_oracle(k, &v, &coeffs, 5).unwrap());
    }

    #[test]
    fn approximation_meets_targets(
        i in 0usize..6, j in 0usize..6, e in -2i64..3, x in select(pool3()), prec in 0i64..3,
    ) {
        prop_assume!(i != j);
        let k = f3();
        let v: Vec<Place> = k.finite_places().take(6).collect();
        let y = k.approximate(&[
            (v[i].clone(), Target::ExactOrd(e)),
            (v[j].clone(), Target::Near { value: x.clone(), precision: prec }),
        ]).unwrap();
        prop_assert_eq!(k.ord(&v[i], &y).unwrap(), Some(e));
        prop_assert!(k.ord(&v[j], &(y - x)).unwrap().is_none_or(|o| o >= prec));
    }
}

fn perf() -> &'static PerfectClosure {
    static K: OnceLock<PerfectClosure> = OnceLock::new();
    K.get_or_init(|| PerfectClosure::new(3).unwrap())
}

fn perf_pool() -> Vec<PerfElement> {
    perf().enumerate(2, 1).into_iter().filter(|x| !x.is_zero()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn perfect_valuation_laws(x in select(perf_pool()), y in select(perf_pool()), idx in 0usize..4) {
        let k = perf();
        let v = k.base().finite_places().nth(idx).unwrap();
        let o = |z: &PerfElement| k.ord(&v, z).unwrap().unwrap();
        prop_assert_eq!(o(&x.pth_root()), o(&x) / Rational64::from_integer(3));
        prop_assert_eq!(o(&x.frobenius()), o(&x) * Rational64::from_integer(3));
        prop_assert_eq!(o(&(x.clone() * y.clone())), o(&x) + o(&y));
        let s = x.clone() + y.clone();
        if !s.is_zero() {
            prop_assert!(o(&s) >= o(&x).min(o(&y)));
        }
        prop_assert_eq!(x.pth_root().frobenius(), x.clone());
        // the local square class is insensitive to p-th roots (p odd)
        prop_assert_eq!(k.is_local_square(&v, &x.pth_root()).unwrap(), k.is_local_square(&v, &x).unwrap());
    }

    #[test]
    fn perfect_parse_round_trip(x in select(perf_pool())) {
        let k = perf();
        prop_assert_eq!(k.parse_elem(&k.format_elem(&x)).unwrap(), x);
    }

    #[test]
    fn field_parse_round_trip(x in select(f3().enumerate(2))) {
        let k = f3();
        prop_assert_eq!(k.parse_elem(&k.format_elem(&x)).unwrap(), x);
    }
}
