//! Existential definition of the valuation ring `R_p = {x : ord_p x >= 0}`
//! over `F_q(t)` (q odd) and `Q`, and membership decisions through it.
//!
//! For a pair of places `(p, h)` and a quaternion algebra `H(a, b)`
//! ramified exactly there, with `ord_p p = 1 = ord_h q` and
//! `ord_h p = 0 = ord_p q`:
//!
//! * `T = {x1 : x1^2 - a x2^2 - b x3^2 + ab x4^2 = pq solvable}` lies in
//!   `R_p ∩ R_h` and contains `pR_p ∩ qR_h`;
//! * `S = (pq)^r T`, and `R_p ∩ R_h` is the union of the translates
//!   `S + s_i` over representatives `s_i` of `R_p ∩ R_h` modulo
//!   `p^{r+1}R_p ∩ q^{r+1}R_h`.
//!
//! `R_p` is then `(R_p ∩ R_q) + (R_p ∩ R_l)` for two helper places `q`, `l`.

pub mod artifact;
pub mod formula;

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactalg::FieldElement;
use crate::places::{GlobalField, Place, Target};
use crate::quadforms::{global_represents, witness_search, DiagForm};
use crate::quaternion::order::integral_basis;
use crate::quaternion::QuatAlgebra;
use crate::symbols::{find_ramified_algebra, ram_set};

pub use formula::{emit_formula_char2, FormulaTree, Literals, Polynomial, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefinitionConfig {
    /// Height bound for the search for `a` in `find_ramified_algebra`.
    pub ram_bound: u64,
    /// Largest accepted number of coset representatives per pair.
    pub coset_cap: u128,
}

impl Default for DefinitionConfig {
    fn default() -> Self {
        DefinitionConfig { ram_bound: 6, coset_cap: 20_000 }
    }
}

/// Definition of `R_p ∩ R_h` for one pair of places.
#[derive(Clone, Debug)]
pub struct PairDefinition<E: FieldElement> {
    pub place: Place,
    pub helper: Place,
    pub p: E,
    pub q: E,
    pub a: E,
    pub b: E,
    pub r: u32,
    pub coset_reps: Vec<E>,
}

impl<E: FieldElement> PairDefinition<E> {
    pub fn pq(&self) -> E {
        self.p.clone() * self.q.clone()
    }

    /// `(pq)^r`.
    pub fn scale(&self) -> E {
        self.pq().pow_u64(self.r as u64)
    }

    /// `<a, b, -ab>`; `x1 ∈ T` iff it represents `x1^2 - pq`.
    pub fn ternary_form(&self) -> DiagForm<E> {
        let ab = self.a.clone() * self.b.clone();
        DiagForm::new(vec![self.a.clone(), self.b.clone(), -ab]).expect("a, b nonzero")
    }

    pub fn modulus(&self) -> [(Place, u32); 2] {
        [(self.place.clone(), self.r + 1), (self.helper.clone(), self.r + 1)]
    }
}

#[derive(Clone, Debug)]
pub struct IntegralityDefinition<F: GlobalField> {
    pub field: F,
    pub target: Place,
    /// `q` and `l`.
    pub helpers: [Place; 2],
    /// The `(p, q)` and `(p, l)` pairs.
    pub copies: [Arc<PairDefinition<F::Elem>>; 2],
}

fn check_target<F: GlobalField>(k: &F, v: &Place) -> Result<()> {
    if k.characteristic() == 2 {
        return Err(Error::CharacteristicTwo);
    }
    if !v.is_finite() || matches!(v, Place::Prime(2)) {
        return Err(Error::UnsupportedPlace(v.to_string()));
    }
    Ok(())
}

fn integral<F: GlobalField>(k: &F, v: &Place, x: &F::Elem) -> Result<bool> {
    Ok(k.ord(v, x)?.is_none_or(|o| o >= 0))
}

/// Multiply by an even power of `pi` so that `ord_v x ∈ {0, 1}`.
fn normalize_at<F: GlobalField>(k: &F, v: &Place, pi: &F::Elem, x: F::Elem) -> Result<F::Elem> {
    let o = k.ord(v, &x)?.expect("nonzero");
    let shift = o.div_euclid(2);
    let f = pi.pow_u64(2 * shift.unsigned_abs());
    Ok(if shift >= 0 { x / f } else { x * f })
}

/// Build and verify the pair definition for `(place, helper)`.
pub fn build_pair<F: GlobalField>(k: &F, place: &Place, helper: &Place, cfg: &DefinitionConfig) -> Result<PairDefinition<F::Elem>> {
    check_target(k, place)?;
    check_target(k, helper)?;
    let p = k.approximate(&[(place.clone(), Target::ExactOrd(1)), (helper.clone(), Target::ExactOrd(0))])?;
    let q = k.approximate(&[(place.clone(), Target::ExactOrd(0)), (helper.clone(), Target::ExactOrd(1))])?;
    let (a, b) = find_ramified_algebra(k, place, helper, cfg.ram_bound)?;
    let mut ab = [a, b];
    for x in ab.iter_mut() {
        let y = normalize_at(k, place, &p, x.clone())?;
        *x = normalize_at(k, helper, &q, y)?;
    }
    let [a, b] = ab;
    let mut r = 0u32;
    for v in [place, helper] {
        let s = k.ord(v, &a)?.expect("nonzero") + k.ord(v, &b)?.expect("nonzero");
        r = r.max(s as u32);
    }
    let size = k.residue_system_size(&[(place.clone(), r + 1), (helper.clone(), r + 1)])?;
    if size > cfg.coset_cap {
        return Err(Error::CapExceeded(format!("{size} coset representatives exceed the cap {}", cfg.coset_cap)));
    }
    let coset_reps = k.residue_system(&[(place.clone(), r + 1), (helper.clone(), r + 1)])?;
    let pair = PairDefinition { place: place.clone(), helper: helper.clone(), p, q, a, b, r, coset_reps };
    verify_pair(k, &pair)?;
    Ok(pair)
}

/// Re-check every invariant of a pair definition.
pub fn verify_pair<F: GlobalField>(k: &F, d: &PairDefinition<F::Elem>) -> Result<()> {
    check_target(k, &d.place)?;
    check_target(k, &d.helper)?;
    if d.place == d.helper {
        return Err(Error::Invariant("pair places coincide".into()));
    }
    let ords = [
        k.ord(&d.place, &d.p)?,
        k.ord(&d.helper, &d.p)?,
        k.ord(&d.place, &d.q)?,
        k.ord(&d.helper, &d.q)?,
    ];
    if ords != [Some(1), Some(0), Some(0), Some(1)] {
        return Err(Error::Invariant(format!("p, q have valuations {ords:?}")));
    }
    for x in [&d.a, &d.b] {
        for v in [&d.place, &d.helper] {
            if !matches!(k.ord(v, x)?, Some(0) | Some(1)) {
                return Err(Error::Invariant(format!("{} is not normalized at {v}", k.format_elem(x))));
            }
        }
    }
    let mut want = vec![d.place.clone(), d.helper.clone()];
    want.sort();
    if ram_set(k, &d.a, &d.b)?.ram != want {
        return Err(Error::Invariant("algebra is not ramified exactly at the pair".into()));
    }
    // (pq)^r times every integral element has integral standard coordinates
    let alg = Arc::new(QuatAlgebra::new(d.a.clone(), d.b.clone())?);
    let places = [d.place.clone(), d.helper.clone()];
    let ib = integral_basis(k, &alg, &places, 4)?;
    let scale = d.scale();
    for e in &ib.basis {
        for c in e.coords() {
            let c = c.clone() * scale.clone();
            for v in &places {
                if !integral(k, v, &c)? {
                    return Err(Error::Invariant(format!("r = {} does not clear the integral basis at {v}", d.r)));
                }
            }
        }
    }
    let modulus = d.modulus();
    let size = k.residue_system_size(&modulus)?;
    if d.coset_reps.len() as u128 != size {
        return Err(Error::Invariant(format!("{} coset representatives, expected {size}", d.coset_reps.len())));
    }
    let mut seen = std::collections::HashSet::new();
    for s in &d.coset_reps {
        if k.reduce_mod(s, &modulus)? != *s || !seen.insert(s.clone()) {
            return Err(Error::Invariant(format!("coset representative {} is not canonical or repeated", k.format_elem(s))));
        }
    }
    Ok(())
}

/// Build the definition of `R_p`: helpers are the first two finite places
/// in the field's order other than `p` (and 2 over `Q`).
pub fn build_definition<F: GlobalField>(k: &F, target: &Place, cfg: &DefinitionConfig) -> Result<IntegralityDefinition<F>> {
    check_target(k, target)?;
    let mut skip = vec![target.clone()];
    if k.characteristic() == 0 {
        skip.push(Place::Prime(2));
    }
    let hs = k.helper_places(&skip, 2);
    let [hq, hl]: [Place; 2] = hs.try_into().map_err(|_| Error::SearchExhausted("helper places".into()))?;
    let first = build_pair(k, target, &hq, cfg)?;
    let second = build_pair(k, target, &hl, cfg)?;
    Ok(IntegralityDefinition {
        field: k.clone(),
        target: target.clone(),
        helpers: [hq, hl],
        copies: [Arc::new(first), Arc::new(second)],
    })
}

/// `x1 ∈ T`: `x1^2 - a x2^2 - b x3^2 + ab x4^2 = pq`, i.e. `<a, b, -ab>`
/// represents `x1^2 - pq` (never zero since `ord_p(pq) = 1`).
pub fn t_membership<F: GlobalField>(k: &F, d: &PairDefinition<F::Elem>, x1: &F::Elem) -> Result<bool> {
    let c = x1.square() - d.pq();
    global_represents(k, &d.ternary_form(), &c)
}

/// `x ∈ S = (pq)^r T`.
pub fn s_membership<F: GlobalField>(k: &F, d: &PairDefinition<F::Elem>, x: &F::Elem) -> Result<bool> {
    t_membership(k, d, &(x.clone() / d.scale()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RpqVerdict {
    pub holds: bool,
    /// Index of the coset representative `s_i` with `x - s_i ∈ S`.
    pub rep: Option<usize>,
    /// Disjuncts evaluated before the verdict was reached.
    pub evaluated: usize,
}

/// `x ∈ R_p ∩ R_h` through the coset disjunction. When `x` is integral at
/// both places the representative of its residue class is tried first; the
/// disjunction is evaluated in full otherwise.
pub fn rpq_membership<F: GlobalField>(k: &F, d: &PairDefinition<F::Elem>, x: &F::Elem) -> Result<RpqVerdict> {
    let n = d.coset_reps.len();
    let mut order: Vec<usize> = (0..n).collect();
    if integral(k, &d.place, x)? && integral(k, &d.helper, x)? {
        let s = k.reduce_mod(x, &d.modulus())?;
        if let Some(i) = d.coset_reps.iter().position(|r| *r == s) {
            order.swap(0, i);
            order[1..].sort_unstable();
        }
    }
    for (count, &i) in order.iter().enumerate() {
        if s_membership(k, d, &(x.clone() - d.coset_reps[i].clone()))? {
            return Ok(RpqVerdict { holds: true, rep: Some(i), evaluated: count + 1 });
        }
    }
    Ok(RpqVerdict { holds: false, rep: None, evaluated: n })
}

/// The split `x = y + z` with `y ∈ R_p ∩ R_q` and `ord_l(x - y) >= 0`.
pub fn split<F: GlobalField>(def: &IntegralityDefinition<F>, x: &F::Elem) -> Result<(F::Elem, F::Elem)> {
    let k = &def.field;
    let [hq, hl] = &def.helpers;
    let y = k.approximate(&[
        (def.target.clone(), Target::MinOrd(0)),
        (hq.clone(), Target::MinOrd(0)),
        (hl.clone(), Target::Near { value: x.clone(), precision: 0 }),
    ])?;
    let z = x.clone() - y.clone();
    Ok((y, z))
}

#[derive(Clone, Debug)]
pub struct DecideTrace<E> {
    pub x: E,
    pub verdict: bool,
    pub y: E,
    pub z: E,
    pub first: RpqVerdict,
    pub second: RpqVerdict,
}

/// `x ∈ R_p` iff `y ∈ R_p ∩ R_q` and `z ∈ R_p ∩ R_l`.
pub fn decide<F: GlobalField>(def: &IntegralityDefinition<F>, x: &F::Elem) -> Result<DecideTrace<F::Elem>> {
    let k = &def.field;
    let (y, z) = split(def, x)?;
    let first = rpq_membership(k, &def.copies[0], &y)?;
    let second = rpq_membership(k, &def.copies[1], &z)?;
    Ok(DecideTrace { x: x.clone(), verdict: first.holds && second.holds, y, z, first, second })
}

const PREFIXES: [&str; 2] = ["u", "w"];

fn var(prefix: &str, i: usize) -> String {
    format!("{prefix}{i}")
}

fn pair_formula<F: GlobalField>(k: &F, d: &PairDefinition<F::Elem>, arg: &str, prefix: &str) -> FormulaTree {
    let [x1, x2, x3, x4] = [1, 2, 3, 4].map(|i| var(prefix, i));
    let one = k.one();
    let ab = d.a.clone() * d.b.clone();
    let norm = Polynomial::new()
        .term(k, &one, &[(&x1, 2)])
        .term(k, &-d.a.clone(), &[(&x2, 2)])
        .term(k, &-d.b.clone(), &[(&x3, 2)])
        .term(k, &ab, &[(&x4, 2)])
        .term(k, &-d.pq(), &[]);
    let scale = d.scale();
    let cosets = d
        .coset_reps
        .iter()
        .map(|s| FormulaTree::Eq {
            poly: Polynomial::new().term(k, &scale, &[(&x1, 1)]).term(k, &-one.clone(), &[(arg, 1)]).term(k, s, &[]),
        })
        .collect();
    FormulaTree::exists(
        &[&x1, &x2, &x3, &x4],
        FormulaTree::And { children: vec![FormulaTree::Eq { poly: norm }, FormulaTree::Or { children: cosets }] },
    )
}

/// `∃ y, z: x = y + z ∧ y ∈ R_p ∩ R_q ∧ z ∈ R_p ∩ R_l`, each intersection
/// written as `∃ u: nr(u) = pq ∧ ⋁_i (pq)^r u1 = arg - s_i`.
pub fn emit_formula<F: GlobalField>(def: &IntegralityDefinition<F>) -> FormulaTree {
    let k = &def.field;
    let one = k.one();
    let split = Polynomial::new()
        .term(k, &one, &[("x", 1)])
        .term(k, &-one.clone(), &[("y", 1)])
        .term(k, &-one.clone(), &[("z", 1)]);
    FormulaTree::exists(
        &["y", "z"],
        FormulaTree::And {
            children: vec![
                FormulaTree::Eq { poly: split },
                pair_formula(k, &def.copies[0], "y", PREFIXES[0]),
                pair_formula(k, &def.copies[1], "z", PREFIXES[1]),
            ],
        },
    )
}

/// A full assignment satisfying [`emit_formula`] for `x`, with the norm
/// equation solved by [`witness_search`] at height `bound`. `None` when
/// `x ∉ R_p` or no witness is found.
pub fn witness_assignment<F: GlobalField>(
    def: &IntegralityDefinition<F>,
    x: &F::Elem,
    bound: u64,
) -> Result<Option<HashMap<String, F::Elem>>> {
    let k = &def.field;
    let tr = decide(def, x)?;
    if !tr.verdict {
        return Ok(None);
    }
    let mut env: HashMap<String, F::Elem> = HashMap::new();
    env.insert("x".into(), x.clone());
    env.insert("y".into(), tr.y.clone());
    env.insert("z".into(), tr.z.clone());
    for (idx, (d, arg, v)) in [(&def.copies[0], &tr.y, &tr.first), (&def.copies[1], &tr.z, &tr.second)].into_iter().enumerate() {
        let s = &d.coset_reps[v.rep.expect("accepted")];
        let x1 = (arg.clone() - s.clone()) / d.scale();
        let c = x1.square() - d.pq();
        let Some(w) = witness_search(k, &d.ternary_form(), &c, bound) else {
            return Ok(None);
        };
        env.insert(var(PREFIXES[idx], 1), x1);
        for (j, wj) in w.into_iter().enumerate() {
            env.insert(var(PREFIXES[idx], j + 2), wj);
        }
    }
    Ok(Some(env))
}

/// `ord_∞ x >= 0` over `F_q(t)`, through the definition of `R_(t)` and
/// `t -> 1/t`.
pub fn decide_at_infinity(
    def: &IntegralityDefinition<crate::places::FunctionField>,
    x: &crate::exactalg::RatFunc,
) -> Result<DecideTrace<crate::exactalg::RatFunc>> {
    let k = &def.field;
    if def.target != k.parse_place("finite:t")? {
        return Err(Error::Invalid("decide_at_infinity needs the definition of R_(t)".into()));
    }
    decide(def, &k.invert_variable(x))
}
