//! Existential definition of `{x ∈ K : ord_p x >= 0}` in the perfect
//! closure `K` of `F_q(t)`, `p > 2`.
//!
//! For places `p1, p2` and `D = H(a, b)` ramified exactly there, with an
//! integral basis `1, a_2, a_3, a_4` (`tr a_i = 0`) of the integral elements
//! over `O = R_p1 ∩ R_p2`:
//!
//! * `T = {x1 ∈ K : nr(x1 + x2 a_2 + x3 a_3 + x4 a_4) = 1 solvable}` consists
//!   of the `x1 ∈ O^perf` with `x1 = ±1` or `x1^2 - 1` a nonsquare in `K_v`
//!   for both `v = p1, p2`;
//! * `O^perf` is the union of the translates `T + α_{i,j}`, `α_{i,j}` having
//!   residues `(i, j)`.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::element::{PerfElement, PerfectClosure};
use crate::diophdef::formula::{FormulaTree, Literals, Polynomial};
use crate::error::{Error, Result};
use crate::exactalg::{find_nonsquare_shift, FFElem, FieldElement, RatFunc};
use crate::places::{FieldSpec, GlobalField, Place, Target};
use crate::quaternion::order::{integral_basis, verify_basis, IntegralBasis};
use crate::quaternion::QuatAlgebra;
use crate::symbols::{find_ramified_algebra, ram_set};

impl Literals for PerfectClosure {
    type Elem = PerfElement;
    fn lit_zero(&self) -> PerfElement {
        PerfectClosure::zero(self)
    }
    fn lit_parse(&self, s: &str) -> Result<PerfElement> {
        PerfectClosure::parse_elem(self, s)
    }
    fn lit_format(&self, x: &PerfElement) -> String {
        PerfectClosure::format_elem(self, x)
    }
}

#[derive(Clone, Debug)]
pub struct PerfPairDefinition {
    pub place: Place,
    pub helper: Place,
    pub a: RatFunc,
    pub b: RatFunc,
    pub basis: IntegralBasis<RatFunc>,
    /// `nr(sum x_k a_k) = sum_{k <= l} gram[k][l] x_k x_l`.
    pub gram: [[RatFunc; 4]; 4],
    /// Residues with `s^2 - 1` a nonsquare, at `place` and `helper`.
    pub shifts: [FFElem; 2],
    /// `α_{i,j}` at index `i * |k_2| + j`.
    pub alphas: Vec<RatFunc>,
}

impl PerfPairDefinition {
    pub fn places(&self) -> [Place; 2] {
        [self.place.clone(), self.helper.clone()]
    }

    fn residue_sizes(&self) -> [u64; 2] {
        [self.shifts[0].field().size(), self.shifts[1].field().size()]
    }

    pub fn alpha(&self, i: u64, j: u64) -> &RatFunc {
        &self.alphas[(i * self.residue_sizes()[1] + j) as usize]
    }

    /// `nr(sum x_k a_k)`.
    pub fn norm(&self, x: &[PerfElement; 4]) -> PerfElement {
        let mut acc = x[0].zero_like();
        for k in 0..4 {
            for l in k..4 {
                let g = PerfElement::from_base(self.gram[k][l].clone());
                acc = acc + g * x[k].clone() * x[l].clone();
            }
        }
        acc
    }
}

#[derive(Clone, Debug)]
pub struct PerfIntegralityDefinition {
    pub closure: PerfectClosure,
    pub target: Place,
    /// `p2` and `p3`.
    pub helpers: [Place; 2],
    pub copies: [Arc<PerfPairDefinition>; 2],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerfConfig {
    pub ram_bound: u64,
}

impl Default for PerfConfig {
    fn default() -> Self {
        PerfConfig { ram_bound: 6 }
    }
}

fn normalize_at(k: &crate::places::FunctionField, v: &Place, x: RatFunc) -> Result<RatFunc> {
    let o = k.ord(v, &x)?.expect("nonzero");
    let pi = k.uniformizer(v)?;
    let shift = o.div_euclid(2);
    let f = pi.pow_u64(2 * shift.unsigned_abs());
    Ok(if shift >= 0 { x / f } else { x * f })
}

pub fn build_perf_pair(k: &PerfectClosure, place: &Place, helper: &Place, cfg: &PerfConfig) -> Result<PerfPairDefinition> {
    let base = k.base();
    for v in [place, helper] {
        if !matches!(v, Place::Finite(_)) {
            return Err(Error::UnsupportedPlace(v.to_string()));
        }
    }
    let (a, b) = find_ramified_algebra(base, place, helper, cfg.ram_bound)?;
    let mut ab = [a, b];
    for x in ab.iter_mut() {
        let y = normalize_at(base, place, x.clone())?;
        *x = normalize_at(base, helper, y)?;
    }
    let [a, b] = ab;
    let places = [place.clone(), helper.clone()];
    let alg = Arc::new(QuatAlgebra::new(a.clone(), b.clone())?);
    let basis = integral_basis(base, &alg, &places, 4)?;
    let gram = basis.norm_gram();
    let shifts = [find_nonsquare_shift(&base.residue_field(place)?)?, find_nonsquare_shift(&base.residue_field(helper)?)?];
    let [r1, r2] = [base.residue_field(place)?, base.residue_field(helper)?];
    let mut alphas = Vec::new();
    for i in 0..r1.size() {
        for j in 0..r2.size() {
            alphas.push(base.approximate(&[
                (place.clone(), Target::Residue(r1.elem(i))),
                (helper.clone(), Target::Residue(r2.elem(j))),
            ])?);
        }
    }
    let pair = PerfPairDefinition { place: place.clone(), helper: helper.clone(), a, b, basis, gram, shifts, alphas };
    verify_perf_pair(k, &pair)?;
    Ok(pair)
}

/// Re-check ramification, the basis, the Gram data, the shifts and the
/// residues of the `α_{i,j}`.
pub fn verify_perf_pair(k: &PerfectClosure, d: &PerfPairDefinition) -> Result<()> {
    let base = k.base();
    let places = d.places();
    if d.place == d.helper {
        return Err(Error::Invariant("pair places coincide".into()));
    }
    let mut want = places.to_vec();
    want.sort();
    if ram_set(base, &d.a, &d.b)?.ram != want {
        return Err(Error::Invariant("algebra is not ramified exactly at the pair".into()));
    }
    let alg = d.basis.basis[0].algebra();
    if *alg.a() != d.a || *alg.b() != d.b {
        return Err(Error::Invariant("basis lives in a different algebra".into()));
    }
    verify_basis(base, &d.basis, &places)?;
    if d.basis.basis[0].reduced_trace() != base.from_i64(2) {
        return Err(Error::Invariant("tr(1) != 2".into()));
    }
    if d.basis.norm_gram() != d.gram {
        return Err(Error::Invariant("Gram matrix does not match the basis".into()));
    }
    for (s, v) in d.shifts.iter().zip(&places) {
        if *s.field() != base.residue_field(v)? {
            return Err(Error::Invariant(format!("shift at {v} lies in the wrong residue field")));
        }
        let c = s.clone() * s.clone() - s.field().elem(1);
        if c.quadratic_character()? != -1 {
            return Err(Error::Invariant(format!("shift at {v} does not give a nonsquare")));
        }
    }
    let [n1, n2] = d.residue_sizes();
    if d.alphas.len() as u64 != n1 * n2 {
        return Err(Error::Invariant("wrong number of shifts α".into()));
    }
    for i in 0..n1 {
        for j in 0..n2 {
            let al = d.alpha(i, j);
            if base.residue(&d.place, al)?.value() != i || base.residue(&d.helper, al)?.value() != j {
                return Err(Error::Invariant(format!("α_({i},{j}) has the wrong residues")));
            }
        }
    }
    Ok(())
}

/// Helpers are the first two finite places other than `p`.
pub fn build_perf_definition(k: &PerfectClosure, target: &Place, cfg: &PerfConfig) -> Result<PerfIntegralityDefinition> {
    if !matches!(target, Place::Finite(_)) {
        return Err(Error::UnsupportedPlace(target.to_string()));
    }
    let hs = k.base().helper_places(std::slice::from_ref(target), 2);
    let [h2, h3]: [Place; 2] = hs.try_into().map_err(|_| Error::SearchExhausted("helper places".into()))?;
    let first = build_perf_pair(k, target, &h2, cfg)?;
    let second = build_perf_pair(k, target, &h3, cfg)?;
    Ok(PerfIntegralityDefinition {
        closure: k.clone(),
        target: target.clone(),
        helpers: [h2, h3],
        copies: [Arc::new(first), Arc::new(second)],
    })
}

/// `x1 ∈ T`: integral at both places and `x1 = ±1` or `x1^2 - 1` a local
/// nonsquare at both places.
pub fn t_perf_membership(k: &PerfectClosure, d: &PerfPairDefinition, x1: &PerfElement) -> Result<bool> {
    for v in d.places() {
        if !k.is_integral(&v, x1)? {
            return Ok(false);
        }
    }
    let one = k.one();
    if *x1 == one || *x1 == -one.clone() {
        return Ok(true);
    }
    let c = x1.square() - one;
    for v in d.places() {
        if k.is_local_square(&v, &c)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnionVerdict {
    pub holds: bool,
    /// `(i, j)` with `y - α_{i,j} ∈ T`.
    pub shift: Option<(u64, u64)>,
    pub evaluated: usize,
}

/// `(i - s_1, j - s_2)` for `y` with residues `(i, j)`.
pub fn matched_shift(k: &PerfectClosure, d: &PerfPairDefinition, y: &PerfElement) -> Result<Option<(u64, u64)>> {
    for v in d.places() {
        if !k.is_integral(&v, y)? {
            return Ok(None);
        }
    }
    let r1 = k.residue(&d.place, y)?;
    let r2 = k.residue(&d.helper, y)?;
    let i = (r1 - d.shifts[0].clone()).value();
    let j = (r2 - d.shifts[1].clone()).value();
    Ok(Some((i, j)))
}

/// `y ∈ ⋃ (T + α_{i,j})`, trying the residue-matched shift first.
pub fn union_membership(k: &PerfectClosure, d: &PerfPairDefinition, y: &PerfElement) -> Result<UnionVerdict> {
    let [n1, n2] = d.residue_sizes();
    let mut order: Vec<(u64, u64)> = (0..n1).flat_map(|i| (0..n2).map(move |j| (i, j))).collect();
    if let Some(m) = matched_shift(k, d, y)? {
        let pos = order.iter().position(|&x| x == m).expect("residue codes in range");
        order.remove(pos);
        order.insert(0, m);
    }
    for (count, &(i, j)) in order.iter().enumerate() {
        let x1 = y.clone() - PerfElement::from_base(d.alpha(i, j).clone());
        if t_perf_membership(k, d, &x1)? {
            return Ok(UnionVerdict { holds: true, shift: Some((i, j)), evaluated: count + 1 });
        }
    }
    Ok(UnionVerdict { holds: false, shift: None, evaluated: order.len() })
}

#[derive(Clone, Debug)]
pub struct PerfDecideTrace {
    pub x: PerfElement,
    pub verdict: bool,
    pub y: PerfElement,
    pub z: PerfElement,
    pub first: UnionVerdict,
    pub second: UnionVerdict,
}

/// `x = y + z`, `y` integral at `p1, p2` and `z` integral at `p3`, computed
/// at the level of `x`.
pub fn perf_split(def: &PerfIntegralityDefinition, x: &PerfElement) -> Result<(PerfElement, PerfElement)> {
    let k = &def.closure;
    let i = x.level();
    let w1 = k.place_at_level(&def.target, i)?;
    let w2 = k.place_at_level(&def.helpers[0], i)?;
    let w3 = k.place_at_level(&def.helpers[1], i)?;
    let y = k.base().approximate(&[
        (w1, Target::MinOrd(0)),
        (w2, Target::MinOrd(0)),
        (w3, Target::Near { value: x.rep().clone(), precision: 0 }),
    ])?;
    let y = PerfElement::new(i, y);
    let z = x.clone() - y.clone();
    Ok((y, z))
}

pub fn decide_perf(def: &PerfIntegralityDefinition, x: &PerfElement) -> Result<PerfDecideTrace> {
    let k = &def.closure;
    let (y, z) = perf_split(def, x)?;
    let first = union_membership(k, &def.copies[0], &y)?;
    let second = union_membership(k, &def.copies[1], &z)?;
    Ok(PerfDecideTrace { x: x.clone(), verdict: first.holds && second.holds, y, z, first, second })
}

/// `(x2, x3, x4)` with `nr(x1 + x2 a_2 + x3 a_3 + x4 a_4) = 1`, `x2, x3`
/// running over elements of level `<= levels` and height `<= height`, and
/// `x4` solved from the quadratic equation.
pub fn perf_witness_search(
    k: &PerfectClosure,
    d: &PerfPairDefinition,
    x1: &PerfElement,
    levels: u32,
    height: u64,
) -> Result<Option<[PerfElement; 4]>> {
    let g = |a: usize, b: usize| PerfElement::from_base(d.gram[a][b].clone());
    let one = k.one();
    let two = k.from_i64(2);
    let four = k.from_i64(4);
    let cands = k.enumerate(levels, height);
    for x2 in &cands {
        for x3 in &cands {
            let xs = [x1.clone(), x2.clone(), x3.clone()];
            let qa = g(3, 3);
            let mut qb = k.zero();
            let mut qc = -one.clone();
            for a in 0..3 {
                qb = qb + g(a, 3) * xs[a].clone();
                for b in a..3 {
                    qc = qc + g(a, b) * xs[a].clone() * xs[b].clone();
                }
            }
            let disc = qb.square() - four.clone() * qa.clone() * qc;
            let Some(root) = k.base().sqrt(disc.rep()) else {
                continue;
            };
            let root = PerfElement::new(disc.level(), root);
            let x4 = (root - qb) / (two.clone() * qa);
            let w = [x1.clone(), x2.clone(), x3.clone(), x4];
            if d.norm(&w) != one {
                return Err(Error::Invariant("solved norm equation does not check".into()));
            }
            return Ok(Some(w));
        }
    }
    Ok(None)
}

fn perf_pair_formula(k: &PerfectClosure, d: &PerfPairDefinition, arg: &str, prefix: &str) -> FormulaTree {
    let vars: Vec<String> = (1..=4).map(|i| format!("{prefix}{i}")).collect();
    let mut norm = Polynomial::new();
    for a in 0..4 {
        for b in a..4 {
            let c = PerfElement::from_base(d.gram[a][b].clone());
            norm = if a == b {
                norm.term(k, &c, &[(&vars[a], 2)])
            } else {
                norm.term(k, &c, &[(&vars[a], 1), (&vars[b], 1)])
            };
        }
    }
    let one = k.one();
    norm = norm.term(k, &-one.clone(), &[]);
    let cosets = d
        .alphas
        .iter()
        .map(|al| FormulaTree::Eq {
            poly: Polynomial::new()
                .term(k, &one, &[(&vars[0], 1)])
                .term(k, &-one.clone(), &[(arg, 1)])
                .term(k, &PerfElement::from_base(al.clone()), &[]),
        })
        .collect();
    let names: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    FormulaTree::exists(
        &names,
        FormulaTree::And { children: vec![FormulaTree::Eq { poly: norm }, FormulaTree::Or { children: cosets }] },
    )
}

/// `∃ y, z: x = y + z ∧ y ∈ O^perf_{p1,p2} ∧ z ∈ O^perf_{p1,p3}`, each
/// written as `∃ u: nr(sum u_k a_k) = 1 ∧ ⋁ u1 = arg - α_{i,j}`.
pub fn emit_perf_formula(def: &PerfIntegralityDefinition) -> FormulaTree {
    let k = &def.closure;
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
                perf_pair_formula(k, &def.copies[0], "y", "u"),
                perf_pair_formula(k, &def.copies[1], "z", "w"),
            ],
        },
    )
}

/// A satisfying assignment of [`emit_perf_formula`] for `x`, when the norm
/// equations have witnesses in the given search box.
pub fn perf_witness_assignment(
    def: &PerfIntegralityDefinition,
    x: &PerfElement,
    levels: u32,
    height: u64,
) -> Result<Option<HashMap<String, PerfElement>>> {
    let k = &def.closure;
    let tr = decide_perf(def, x)?;
    if !tr.verdict {
        return Ok(None);
    }
    let mut env = HashMap::new();
    env.insert("x".to_string(), x.clone());
    env.insert("y".to_string(), tr.y.clone());
    env.insert("z".to_string(), tr.z.clone());
    for (d, arg, v, prefix) in [(&def.copies[0], &tr.y, &tr.first, "u"), (&def.copies[1], &tr.z, &tr.second, "w")] {
        let (i, j) = v.shift.expect("accepted");
        let x1 = arg.clone() - PerfElement::from_base(d.alpha(i, j).clone());
        let Some(w) = perf_witness_search(k, d, &x1, levels, height)? else {
            return Ok(None);
        };
        for (n, wn) in w.into_iter().enumerate() {
            env.insert(format!("{prefix}{}", n + 1), wn);
        }
    }
    Ok(Some(env))
}

pub const PERF_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerfPairRecord {
    pub place: String,
    pub helper: String,
    pub a: String,
    pub b: String,
    /// Standard coordinates of `a_1, ..., a_4`.
    pub basis: Vec<Vec<String>>,
    pub saturation_steps: Vec<u32>,
    /// Upper triangle of the norm form, row by row.
    pub gram: Vec<Vec<String>>,
    /// Lifts of the nonsquare-shift residues.
    pub shifts: Vec<String>,
    pub alphas: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerfDefinitionArtifact {
    pub schema_version: u32,
    pub field: FieldSpec,
    pub target_place: String,
    pub helper_places: Vec<String>,
    pub copies: Vec<PerfPairRecord>,
    pub formula: FormulaTree,
}

impl PerfDefinitionArtifact {
    pub fn from_definition(def: &PerfIntegralityDefinition) -> Self {
        let base = def.closure.base();
        let f = |x: &RatFunc| base.format_elem(x);
        let copies = def
            .copies
            .iter()
            .map(|d| PerfPairRecord {
                place: d.place.to_string(),
                helper: d.helper.to_string(),
                a: f(&d.a),
                b: f(&d.b),
                basis: d.basis.basis.iter().map(|e| e.coords().iter().map(f).collect()).collect(),
                saturation_steps: d.basis.steps.iter().map(|(_, s)| *s).collect(),
                gram: (0..4).map(|r| (r..4).map(|c| f(&d.gram[r][c])).collect()).collect(),
                shifts: d
                    .shifts
                    .iter()
                    .zip(d.places())
                    .map(|(s, v)| f(&base.lift(&v, s).expect("finite place")))
                    .collect(),
                alphas: d.alphas.iter().map(f).collect(),
            })
            .collect();
        PerfDefinitionArtifact {
            schema_version: PERF_SCHEMA_VERSION,
            field: base.spec(),
            target_place: def.target.to_string(),
            helper_places: def.helpers.iter().map(|h| h.to_string()).collect(),
            copies,
            formula: emit_perf_formula(def),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Artifact(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let a: PerfDefinitionArtifact = serde_json::from_str(s).map_err(|e| Error::Artifact(e.to_string()))?;
        if a.schema_version != PERF_SCHEMA_VERSION {
            return Err(Error::Artifact(format!("unsupported schema version {}", a.schema_version)));
        }
        Ok(a)
    }

    /// Rebuild over `k` and re-verify everything, including the formula.
    pub fn load(&self, k: &PerfectClosure) -> Result<PerfIntegralityDefinition> {
        let base = k.base();
        if self.field != base.spec() {
            return Err(Error::Artifact(format!("artifact is over {:?}, not {:?}", self.field, base.spec())));
        }
        let e = |s: &String| base.parse_elem(s);
        let target = base.parse_place(&self.target_place)?;
        let helpers: Vec<Place> = self.helper_places.iter().map(|h| base.parse_place(h)).collect::<Result<_>>()?;
        let [h2, h3]: [Place; 2] = helpers.try_into().map_err(|_| Error::Artifact("expected two helper places".into()))?;
        if self.copies.len() != 2 {
            return Err(Error::Artifact("expected two copies".into()));
        }
        let mut copies = Vec::new();
        for (r, h) in self.copies.iter().zip([&h2, &h3]) {
            let place = base.parse_place(&r.place)?;
            let helper = base.parse_place(&r.helper)?;
            if place != target || helper != *h {
                return Err(Error::Artifact("copy places do not match the header".into()));
            }
            let (a, b) = (e(&r.a)?, e(&r.b)?);
            let alg = Arc::new(QuatAlgebra::new(a.clone(), b.clone())?);
            if r.basis.len() != 4 || r.basis.iter().any(|c| c.len() != 4) || r.saturation_steps.len() != 2 {
                return Err(Error::Artifact("malformed basis".into()));
            }
            let mut elems = Vec::new();
            for c in &r.basis {
                let coords = [e(&c[0])?, e(&c[1])?, e(&c[2])?, e(&c[3])?];
                elems.push(alg.elem(coords));
            }
            let basis = IntegralBasis {
                basis: elems.try_into().expect("four elements"),
                steps: vec![(place.clone(), r.saturation_steps[0]), (helper.clone(), r.saturation_steps[1])],
            };
            let gram = basis.norm_gram();
            let stored: Vec<Vec<String>> = (0..4).map(|i| (i..4).map(|j| base.format_elem(&gram[i][j])).collect()).collect();
            if stored != r.gram {
                return Err(Error::Artifact("stored Gram matrix does not match the basis".into()));
            }
            if r.shifts.len() != 2 {
                return Err(Error::Artifact("expected two shifts".into()));
            }
            let shifts = [base.residue(&place, &e(&r.shifts[0])?)?, base.residue(&helper, &e(&r.shifts[1])?)?];
            let alphas = r.alphas.iter().map(e).collect::<Result<_>>()?;
            let d = PerfPairDefinition { place, helper, a, b, basis, gram, shifts, alphas };
            verify_perf_pair(k, &d).map_err(|e| Error::Artifact(format!("verification failed: {e}")))?;
            copies.push(Arc::new(d));
        }
        let [c1, c2]: [Arc<PerfPairDefinition>; 2] = copies.try_into().expect("two copies");
        let def = PerfIntegralityDefinition { closure: k.clone(), target, helpers: [h2, h3], copies: [c1, c2] };
        if emit_perf_formula(&def) != self.formula {
            return Err(Error::Artifact("stored formula does not match the definition data".into()));
        }
        Ok(def)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (PerfectClosure, PerfIntegralityDefinition) {
        let k = PerfectClosure::new(3).unwrap();
        let t = k.base().parse_place("finite:t").unwrap();
        let def = build_perf_definition(&k, &t, &PerfConfig::default()).unwrap();
        (k, def)
    }

    #[test]
    fn build() {
        let (k, def) = setup();
        let d = &def.copies[0];
        assert_eq!(d.alphas.len(), 9);
        assert_eq!(d.shifts[0].value(), 0);
        assert_eq!(d.basis.basis[0].reduced_trace(), k.base().from_i64(2));
        for e in &d.basis.basis[1..] {
            assert!(e.reduced_trace().is_zero());
        }
        let f5 = PerfectClosure::new(5).unwrap();
        let t = f5.base().parse_place("finite:t").unwrap();
        let def5 = build_perf_definition(&f5, &t, &PerfConfig::default()).unwrap();
        assert_eq!(def5.copies[0].shifts[0].value(), 2);
        assert_eq!(def5.copies[0].alphas.len(), 25);
        assert!(build_perf_definition(&k, &Place::Infinite, &PerfConfig::default()).is_err());
    }

    #[test]
    fn t_examples() {
        let (k, def) = setup();
        let d = &def.copies[0];
        assert!(t_perf_membership(&k, d, &k.one()).unwrap());
        assert!(t_perf_membership(&k, d, &-k.one()).unwrap());
        assert!(!t_perf_membership(&k, d, &k.parse_elem("1/t").unwrap()).unwrap());
        // residues (0, 0) at (t), (t+1): x^2 - 1 ≡ -1, a nonsquare mod 3
        let a = k.parse_elem("level=1; s^2+s").unwrap();
        assert!(t_perf_membership(&k, d, &a).unwrap());
    }

    #[test]
    fn decide_examples() {
        let (k, def) = setup();
        assert!(decide_perf(&def, &k.parse_elem("level=1; s").unwrap()).unwrap().verdict);
        assert!(!decide_perf(&def, &k.parse_elem("level=1; 1/s").unwrap()).unwrap().verdict);
        assert!(decide_perf(&def, &k.parse_elem("level=2; 1/(s+1)").unwrap()).unwrap().verdict);
    }

    #[test]
    fn formula_and_artifact() {
        let (k, def) = setup();
        let tree = emit_perf_formula(&def);
        assert_eq!(tree.free_variables(), vec!["x".to_string()]);
        assert_eq!(tree.or_widths(), vec![9, 9]);
        let art = PerfDefinitionArtifact::from_definition(&def);
        let s = art.to_json().unwrap();
        let back = PerfDefinitionArtifact::from_json(&s).unwrap();
        assert_eq!(back.to_json().unwrap(), s);
        back.load(&k).unwrap();
        let mut bad = back.clone();
        bad.copies[0].alphas[0] = "1".into();
        assert!(bad.load(&k).is_err());
    }

    #[test]
    fn witnesses() {
        let (k, def) = setup();
        let d = &def.copies[0];
        let w = perf_witness_search(&k, d, &k.one(), 0, 1).unwrap().expect("x1 = 1 has the witness 1");
        assert_eq!(d.norm(&w), k.one());
        let x = k.parse_elem("t").unwrap();
        if let Some(env) = perf_witness_assignment(&def, &x, 0, 1).unwrap() {
            assert!(emit_perf_formula(&def).eval(&k, &env).unwrap());
        }
    }
}
