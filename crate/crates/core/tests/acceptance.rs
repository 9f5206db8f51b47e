//! Acceptance criteria, one PASS/FAIL line each. Exact throughout.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use intdef::diophdef::{build_definition, s_membership, t_membership, DefinitionConfig};
use intdef::harness::{agreement_sweep, hilbert_oracle, perf_agreement_sweep, SAFE_PRECISION};
use intdef::perfectclosure::{build_perf_definition, matched_shift, t_perf_membership, union_membership, PerfConfig};
use intdef::quadforms::witness_search;
use intdef::quaternion::{Presentation, QuatAlgebra};
use intdef::symbols::{find_ramified_algebra, hilbert_symbol, ram_set, reciprocity_check};
use intdef::{FieldElement, FiniteField, FunctionField, GlobalField, PerfElement, PerfectClosure, Place, Rationals};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn nonzero<F: GlobalField>(k: &F, bound: u64) -> Vec<F::Elem> {
    k.enumerate(bound).into_iter().filter(|x| !x.is_zero()).collect()
}

fn within(limit: Duration, start: Instant, detail: String) -> Outcome {
    let t = start.elapsed();
    if t < limit {
        Ok(format!("{detail}; {:.1}s < {}s", t.as_secs_f64(), limit.as_secs()))
    } else {
        Err(format!("{detail}; {:.1}s exceeds {}s", t.as_secs_f64(), limit.as_secs()))
    }
}

fn sweep_outcome(tested: u64, disagreed: u64, limit: u64, start: Instant) -> Outcome {
    let detail = format!("{tested} elements, {disagreed} disagreements");
    if disagreed > 0 {
        return Err(detail);
    }
    within(Duration::from_secs(limit), start, detail)
}

fn c1_function_field() -> Outcome {
    let start = Instant::now();
    let k = FunctionField::new(3).map_err(|e| e.to_string())?;
    let t = k.parse_place("finite:t").unwrap();
    let def = build_definition(&k, &t, &DefinitionConfig::default()).map_err(|e| e.to_string())?;
    let r = agreement_sweep(&def, 2);
    if r.tested != k.enumerate(2).len() as u64 {
        return Err("sweep skipped elements".into());
    }
    sweep_outcome(r.tested, r.disagreed, 60, start)
}

fn c2_rationals() -> Outcome {
    let start = Instant::now();
    let q = Rationals;
    let def = build_definition(&q, &Place::Prime(5), &DefinitionConfig::default()).map_err(|e| e.to_string())?;
    // height max(|num|, den) <= 50 is exactly |num|, den <= 50
    let r = agreement_sweep(&def, 50);
    sweep_outcome(r.tested, r.disagreed, 120, start)
}

fn c3_perfect_closure() -> Outcome {
    let start = Instant::now();
    let k = PerfectClosure::new(3).map_err(|e| e.to_string())?;
    let t = k.base().parse_place("finite:t").unwrap();
    let def = build_perf_definition(&k, &t, &PerfConfig::default()).map_err(|e| e.to_string())?;
    let r = perf_agreement_sweep(&def, 2, 2);
    sweep_outcome(r.tested, r.disagreed, 300, start)
}

fn reciprocity_batch<F: GlobalField>(k: &F, pool: &[F::Elem], n: usize, seed: u64) -> Result<(), String> {
    let mut g = rng(seed);
    for _ in 0..n {
        let a = pool.choose(&mut g).unwrap();
        let b = pool.choose(&mut g).unwrap();
        let (ok, data) = reciprocity_check(k, a, b).map_err(|e| e.to_string())?;
        let product: i8 = data.evidence.iter().map(|(_, s)| *s).product();
        if !ok || product != 1 || data.ram.len() % 2 != 0 {
            return Err(format!("({}, {}) ramifies at {:?}", k.format_elem(a), k.format_elem(b), data.ram));
        }
    }
    Ok(())
}

fn c4_reciprocity() -> Outcome {
    let k = FunctionField::new(3).unwrap();
    reciprocity_batch(&k, &nonzero(&k, 3), 200, 4)?;
    let q = Rationals;
    reciprocity_batch(&q, &nonzero(&q, 60), 100, 40)?;
    Ok("300 pairs, all products +1, all ramification sets even".into())
}

fn oracle_batch<F: GlobalField>(
    k: &F,
    places: &[Place],
    pool: &[F::Elem],
    n: usize,
    seed: u64,
    at: impl Fn(&Place, &F::Elem) -> (Place, F::Elem),
) -> Result<(), String> {
    let mut g = rng(seed);
    for _ in 0..n {
        let v = places.choose(&mut g).unwrap();
        let a = pool.choose(&mut g).unwrap();
        let b = pool.choose(&mut g).unwrap();
        let formula = hilbert_symbol(k, v, a, b).map_err(|e| e.to_string())?;
        let (w, a2) = at(v, a);
        let (_, b2) = at(v, b);
        let brute = hilbert_oracle(k, &w, &a2, &b2, SAFE_PRECISION).map_err(|e| e.to_string())?;
        if formula != brute {
            return Err(format!("({}, {})_{v}: formula {formula}, oracle {brute}", k.format_elem(a), k.format_elem(b)));
        }
    }
    Ok(())
}

fn c5_oracle() -> Outcome {
    let k = FunctionField::new(3).unwrap();
    let mut places: Vec<Place> = k.finite_places().take_while(|v| k.place_degree(v).unwrap() <= 2).collect();
    places.push(Place::Infinite);
    let t = k.parse_place("finite:t").unwrap();
    // the infinite place is (t) after t -> 1/t
    oracle_batch(&k, &places, &nonzero(&k, 3), 200, 5, |v, x| match v {
        Place::Infinite => (t.clone(), k.invert_variable(x)),
        _ => (v.clone(), x.clone()),
    })?;
    let q = Rationals;
    let primes: Vec<Place> = [3, 5, 7, 11, 13].map(Place::Prime).to_vec();
    oracle_batch(&q, &primes, &nonzero(&q, 60), 200, 50, |v, x| (v.clone(), x.clone()))?;
    Ok(format!("400 triples agree ({} places of degree <= 2 and infinity over F_3(t), 5 primes over Q)", places.len() - 1))
}

fn ramified_batch<F: GlobalField>(k: &F, places: &[Place], n: usize, seed: u64) -> Result<(), String> {
    let mut g = rng(seed);
    let mut pairs = Vec::new();
    for i in 0..places.len() {
        for j in (i + 1)..places.len() {
            pairs.push((places[i].clone(), places[j].clone()));
        }
    }
    for (v1, v2) in pairs.choose_multiple(&mut g, n) {
        let (a, b) = find_ramified_algebra(k, v1, v2, 6).map_err(|e| e.to_string())?;
        let mut want = vec![v1.clone(), v2.clone()];
        want.sort();
        if ram_set(k, &a, &b).map_err(|e| e.to_string())?.ram != want {
            return Err(format!("H({}, {}) is not ramified exactly at {v1}, {v2}", k.format_elem(&a), k.format_elem(&b)));
        }
    }
    Ok(())
}

fn c6_construction() -> Outcome {
    let start = Instant::now();
    let k = FunctionField::new(3).unwrap();
    let places: Vec<Place> = k.finite_places().take_while(|v| k.place_degree(v).unwrap() <= 2).collect();
    ramified_batch(&k, &places, 10, 6)?;
    let q = Rationals;
    let primes: Vec<Place> = (3..=50u64).filter(|p| (2..*p).all(|d| p % d != 0)).map(Place::Prime).collect();
    ramified_batch(&q, &primes, 10, 60)?;
    within(Duration::from_secs(300), start, "20 pairs constructed and re-verified".into())
}

fn quaternion_batch<F: GlobalField>(k: &F, pool: &[F::Elem], n: usize, seed: u64) -> Result<(), String> {
    let mut g = rng(seed);
    let nz: Vec<F::Elem> = pool.iter().filter(|x| !x.is_zero()).cloned().collect();
    let pick = |g: &mut ChaCha8Rng| pool.choose(g).unwrap().clone();
    for _ in 0..n {
        let (a, b) = (nz.choose(&mut g).unwrap().clone(), nz.choose(&mut g).unwrap().clone());
        let h = QuatAlgebra::new(a, b).map_err(|e| e.to_string())?;
        let x = h.elem([pick(&mut g), pick(&mut g), pick(&mut g), pick(&mut g)]);
        let y = h.elem([pick(&mut g), pick(&mut g), pick(&mut g), pick(&mut g)]);
        let xy = x.try_mul(&y).map_err(|e| e.to_string())?;
        if xy.reduced_norm() != x.reduced_norm() * y.reduced_norm() {
            return Err(format!("nr not multiplicative on {x:?}, {y:?}"));
        }
        let tr = match h.presentation() {
            Presentation::OddChar => x.coords()[0].clone() * k.from_i64(2),
            Presentation::Char2 => x.coords()[2].clone(),
        };
        if x.reduced_trace() != tr || !x.char_poly_check() {
            return Err(format!("trace or characteristic polynomial fails on {x:?}"));
        }
        let s = nz.choose(&mut g).unwrap().clone();
        let r = match h.presentation() {
            Presentation::OddChar => nz.choose(&mut g).unwrap().clone(),
            Presentation::Char2 => k.one(),
        };
        let (fx, fy, fxy) = (x.rescale(&s, &r), y.rescale(&s, &r), xy.rescale(&s, &r));
        let (fx, fy, fxy) = (fx.map_err(|e| e.to_string())?, fy.map_err(|e| e.to_string())?, fxy.map_err(|e| e.to_string())?);
        if fx.try_mul(&fy).map_err(|e| e.to_string())? != fxy || fx.reduced_norm() != x.reduced_norm() {
            return Err(format!("rescaling is not an isomorphism on {x:?}, {y:?}"));
        }
    }
    Ok(())
}

fn c7_quaternions() -> Outcome {
    let k3 = FunctionField::new(3).unwrap();
    quaternion_batch(&k3, &k3.enumerate(2), 1000, 7)?;
    let q = Rationals;
    quaternion_batch(&q, &q.enumerate(12), 1000, 70)?;
    let k2 = FunctionField::new(2).unwrap();
    quaternion_batch(&k2, &k2.enumerate(2), 1000, 700)?;
    Ok("1000 checks each over F_3(t), Q (odd presentation) and F_2(t) (characteristic 2)".into())
}

fn c8_containments() -> Outcome {
    let k = FunctionField::new(3).unwrap();
    let t = k.parse_place("finite:t").unwrap();
    let def = build_definition(&k, &t, &DefinitionConfig::default()).map_err(|e| e.to_string())?;
    let elems = k.enumerate(2);
    let (mut accepted, mut members) = (0, 0);
    for d in &def.copies {
        let ord = |v: &Place, x| k.ord(v, x).unwrap().map_or(i64::MAX, |o| o);
        for x in &elems {
            let s = s_membership(&k, d, x).map_err(|e| e.to_string())?;
            if s {
                accepted += 1;
                if ord(&d.place, x) < 0 || ord(&d.helper, x) < 0 {
                    return Err(format!("{} in S but not in R_p ∩ R_q", k.format_elem(x)));
                }
            }
            if ord(&d.place, x) >= ord(&d.place, &d.p) && ord(&d.helper, x) >= ord(&d.helper, &d.q) {
                members += 1;
                if !t_membership(&k, d, x).map_err(|e| e.to_string())? {
                    return Err(format!("{} in pR_p ∩ qR_q but not in T", k.format_elem(x)));
                }
            }
        }
    }
    Ok(format!("{} elements x 2 copies; {accepted} in S re-checked, {members} in pR_p ∩ qR_q accepted by T", elems.len()))
}

fn c9_coset_covering() -> Outcome {
    let k = PerfectClosure::new(3).map_err(|e| e.to_string())?;
    let t = k.base().parse_place("finite:t").unwrap();
    let def = build_perf_definition(&k, &t, &PerfConfig::default()).map_err(|e| e.to_string())?;
    let elems = k.enumerate(2, 2);
    let mut g = rng(9);
    let mut sampled = 0;
    for d in &def.copies {
        let integral: Vec<&PerfElement> = elems
            .iter()
            .filter(|y| d.places().iter().all(|v| k.is_integral(v, y).unwrap()))
            .collect();
        for y in integral.choose_multiple(&mut g, 100) {
            sampled += 1;
            let shift = matched_shift(&k, d, y).map_err(|e| e.to_string())?.ok_or("integral y has no shift")?;
            let x1 = (*y).clone() - PerfElement::from_base(d.alpha(shift.0, shift.1).clone());
            if !t_perf_membership(&k, d, &x1).map_err(|e| e.to_string())? {
                return Err(format!("{y} - α{shift:?} is not in T"));
            }
            let v = union_membership(&k, d, y).map_err(|e| e.to_string())?;
            if !v.holds || v.shift != Some(shift) || v.evaluated != 1 {
                return Err(format!("union membership of {y} did not use the matched shift"));
            }
        }
    }
    for q in [3u64, 5, 9, 27] {
        let f = FiniteField::of_order(q).map_err(|e| e.to_string())?;
        let squares: HashSet<u64> = (0..q).map(|x| f.mul(x, x)).collect();
        if squares.len() as u64 != q.div_ceil(2) {
            return Err(format!("F_{q} has {} squares", squares.len()));
        }
    }
    Ok(format!("{sampled} sampled y covered by the matched shift; square counts hold for q = 3, 5, 9, 27"))
}

#[derive(Default)]
struct WitnessTally {
    rejected: usize,
    found: usize,
}

/// Rejected elements of height `<= reject_height` must have no witness at
/// height `<= reject_search`; accepted elements of height `<= accept_height`
/// get a search at height `<= 3` and every witness is substituted back.
fn witness_batch<F>(k: &F, target: &Place, reject_height: u64, reject_search: u64, accept_height: u64) -> Result<WitnessTally, String>
where
    F: GlobalField,
{
    let def = build_definition(k, target, &DefinitionConfig::default()).map_err(|e| e.to_string())?;
    let mut tally = WitnessTally::default();
    for d in &def.copies {
        let f = d.ternary_form();
        for x1 in k.enumerate(reject_height.max(accept_height)) {
            let c = x1.square() - d.pq();
            let member = t_membership(k, d, &x1).map_err(|e| e.to_string())?;
            let h = k.height(&x1);
            if !member && h <= reject_height {
                if let Some(w) = witness_search(k, &f, &c, reject_search) {
                    return Err(format!("witness {w:?} for rejected {}", k.format_elem(&x1)));
                }
                tally.rejected += 1;
            }
            if member && h <= accept_height {
                if let Some(w) = witness_search(k, &f, &c, 3) {
                    if f.eval(&w).map_err(|e| e.to_string())? != c {
                        return Err(format!("witness {w:?} for {} fails substitution", k.format_elem(&x1)));
                    }
                    tally.found += 1;
                }
            }
        }
    }
    Ok(tally)
}

fn c10_witnesses() -> Outcome {
    let q = witness_batch(&Rationals, &Place::Prime(5), 25, 3, 25)?;
    let k = FunctionField::new(3).unwrap();
    let t = k.parse_place("finite:t").unwrap();
    // exhaustive height-3 searches cost about a minute each over F_3(t)
    let f = witness_batch(&k, &t, 1, 2, 2)?;
    let found = q.found + f.found;
    if found < 20 {
        return Err(format!("only {found} accepted elements with witnesses"));
    }
    Ok(format!(
        "{} rejected over Q (search height 3) and {} over F_3(t) (search height 2) without witnesses; \
         {found} accepted elements with verified witnesses",
        q.rejected, f.rejected
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 function field sweep", c1_function_field),
        ("2 rational sweep", c2_rationals),
        ("3 perfect closure sweep", c3_perfect_closure),
        ("4 reciprocity", c4_reciprocity),
        ("5 symbol vs Hensel oracle", c5_oracle),
        ("6 ramified algebra construction", c6_construction),
        ("7 quaternion identities", c7_quaternions),
        ("8 S and T containments", c8_containments),
        ("9 coset covering and square count", c9_coset_covering),
        ("10 witness consistency", c10_witnesses),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        match run() {
            Ok(detail) => println!("PASS criterion {name}: {detail} [{:.2}s]", start.elapsed().as_secs_f64()),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail} [{:.2}s]", start.elapsed().as_secs_f64());
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
