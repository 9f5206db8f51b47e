//! Existential formulas built from polynomial equations over a global field.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::FieldElement;
use crate::places::GlobalField;

/// A field whose elements have a literal syntax.
pub trait Literals {
    type Elem: FieldElement;
    fn lit_zero(&self) -> Self::Elem;
    fn lit_parse(&self, s: &str) -> Result<Self::Elem>;
    fn lit_format(&self, x: &Self::Elem) -> String;
}

impl<G: GlobalField> Literals for G {
    type Elem = G::Elem;
    fn lit_zero(&self) -> G::Elem {
        GlobalField::zero(self)
    }
    fn lit_parse(&self, s: &str) -> Result<G::Elem> {
        GlobalField::parse_elem(self, s)
    }
    fn lit_format(&self, x: &G::Elem) -> String {
        GlobalField::format_elem(self, x)
    }
}

/// `coeff * prod var^exp`, the coefficient in the field's literal grammar.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub coeff: String,
    pub vars: Vec<(String, u32)>,
}

/// A polynomial with coefficients in the field, as a list of terms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polynomial {
    pub terms: Vec<Term>,
}

impl Polynomial {
    pub fn new() -> Self {
        Polynomial::default()
    }

    /// Append `c * prod vars`; zero coefficients are dropped.
    pub fn term<F: Literals>(mut self, k: &F, c: &F::Elem, vars: &[(&str, u32)]) -> Self {
        if !c.is_zero() {
            self.terms.push(Term {
                coeff: k.lit_format(c),
                vars: vars.iter().map(|(v, e)| (v.to_string(), *e)).collect(),
            });
        }
        self
    }

    pub fn eval<F: Literals>(&self, k: &F, env: &HashMap<String, F::Elem>) -> Result<Option<F::Elem>> {
        let mut acc = k.lit_zero();
        for t in &self.terms {
            let mut m = k.lit_parse(&t.coeff)?;
            for (v, e) in &t.vars {
                let Some(x) = env.get(v) else {
                    return Ok(None);
                };
                m = m * x.pow_u64(*e as u64);
            }
            acc = acc + m;
        }
        Ok(Some(acc))
    }

    pub fn variables(&self) -> Vec<&str> {
        let mut out: Vec<&str> = self.terms.iter().flat_map(|t| t.vars.iter().map(|(v, _)| v.as_str())).collect();
        out.sort();
        out.dedup();
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let (neg, mag) = match t.coeff.strip_prefix('-') {
                Some(m) if !m.contains(['+', '-']) => (true, m),
                _ => (false, t.coeff.as_str()),
            };
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let bare = mag == "1" && !t.vars.is_empty();
            if !bare {
                let compound = mag.contains(['+', '/']) || mag[1..].contains('-');
                if compound && (self.terms.len() > 1 || !t.vars.is_empty()) {
                    write!(f, "({mag})")?;
                } else {
                    f.write_str(mag)?;
                }
            }
            for (j, (v, e)) in t.vars.iter().enumerate() {
                if !bare || j > 0 {
                    f.write_str("*")?;
                }
                f.write_str(v)?;
                if *e != 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

/// Existential-positive formula; `Eq(P)` means `P = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum FormulaTree {
    Exists { vars: Vec<String>, child: Box<FormulaTree> },
    And { children: Vec<FormulaTree> },
    Or { children: Vec<FormulaTree> },
    Eq { poly: Polynomial },
}

impl FormulaTree {
    pub fn exists(vars: &[&str], child: FormulaTree) -> Self {
        FormulaTree::Exists { vars: vars.iter().map(|v| v.to_string()).collect(), child: Box::new(child) }
    }

    /// Variables occurring free.
    pub fn free_variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        match self {
            FormulaTree::Exists { vars, child } => {
                let n = bound.len();
                bound.extend(vars.iter().cloned());
                child.collect_free(bound, out);
                bound.truncate(n);
            }
            FormulaTree::And { children } | FormulaTree::Or { children } => {
                for c in children {
                    c.collect_free(bound, out);
                }
            }
            FormulaTree::Eq { poly } => {
                for v in poly.variables() {
                    if !bound.iter().any(|b| b == v) {
                        out.push(v.to_string());
                    }
                }
            }
        }
    }

    /// Truth under `env`, which must supply the free variables and the
    /// witnesses for the quantified ones. An equation mentioning an unbound
    /// variable counts as false.
    pub fn eval<F: Literals>(&self, k: &F, env: &HashMap<String, F::Elem>) -> Result<bool> {
        match self {
            FormulaTree::Exists { child, .. } => child.eval(k, env),
            FormulaTree::And { children } => {
                for c in children {
                    if !c.eval(k, env)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            FormulaTree::Or { children } => {
                for c in children {
                    if c.eval(k, env)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            FormulaTree::Eq { poly } => Ok(poly.eval(k, env)?.is_some_and(|v| v.is_zero())),
        }
    }

    /// Number of equations.
    pub fn size(&self) -> usize {
        match self {
            FormulaTree::Exists { child, .. } => child.size(),
            FormulaTree::And { children } | FormulaTree::Or { children } => children.iter().map(|c| c.size()).sum(),
            FormulaTree::Eq { .. } => 1,
        }
    }

    /// Widths of all `Or` nodes, in preorder.
    pub fn or_widths(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.walk(&mut |n| {
            if let FormulaTree::Or { children } = n {
                out.push(children.len());
            }
        });
        out
    }

    fn walk(&self, f: &mut impl FnMut(&FormulaTree)) {
        f(self);
        match self {
            FormulaTree::Exists { child, .. } => child.walk(f),
            FormulaTree::And { children } | FormulaTree::Or { children } => children.iter().for_each(|c| c.walk(f)),
            FormulaTree::Eq { .. } => {}
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Artifact(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Artifact(e.to_string()))
    }
}

impl fmt::Display for FormulaTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormulaTree::Exists { vars, child } => write!(f, "∃ {}: {}", vars.join(", "), child),
            FormulaTree::And { children } | FormulaTree::Or { children } => {
                let op = if matches!(self, FormulaTree::And { .. }) { " ∧ " } else { " ∨ " };
                f.write_str("(")?;
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        f.write_str(op)?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(")")
            }
            FormulaTree::Eq { poly } => write!(f, "{poly} = 0"),
        }
    }
}

/// Norm equation `x_1^2 + x_1 x_3 + b x_3^2 + a(x_2^2 + x_2 x_4 + b x_4^2) = pq`
/// for characteristic 2, with `x3` (the trace coordinate) free.
pub fn emit_formula_char2<F: GlobalField>(k: &F, a: &F::Elem, b: &F::Elem, p: &F::Elem, q: &F::Elem) -> Result<FormulaTree> {
    if k.characteristic() != 2 {
        return Err(Error::Invalid("characteristic 2 formula requested over odd characteristic".into()));
    }
    let one = k.one();
    let ab = a.clone() * b.clone();
    let pq = p.clone() * q.clone();
    let poly = Polynomial::new()
        .term(k, &one, &[("x1", 2)])
        .term(k, &one, &[("x1", 1), ("x3", 1)])
        .term(k, b, &[("x3", 2)])
        .term(k, a, &[("x2", 2)])
        .term(k, a, &[("x2", 1), ("x4", 1)])
        .term(k, &ab, &[("x4", 2)])
        .term(k, &-pq, &[]);
    Ok(FormulaTree::exists(&["x1", "x2", "x4"], FormulaTree::Eq { poly }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::places::{FunctionField, Rationals};

    #[test]
    fn polynomial_eval_and_display() {
        let q = Rationals;
        let p = Polynomial::new()
            .term(&q, &q.one(), &[("x", 2)])
            .term(&q, &q.parse_elem("-7/15").unwrap(), &[("x", 1), ("y", 1)])
            .term(&q, &q.from_i64(3), &[]);
        assert_eq!(p.to_string(), "x^2 - (7/15)*x*y + 3");
        let env: HashMap<String, _> = [("x".to_string(), q.from_i64(2)), ("y".to_string(), q.from_i64(15))].into();
        assert_eq!(p.eval(&q, &env).unwrap(), Some(q.from_i64(-7)));
        let partial: HashMap<String, _> = [("x".to_string(), q.one())].into();
        assert_eq!(p.eval(&q, &partial).unwrap(), None);
    }

    #[test]
    fn tree_round_trip() {
        let q = Rationals;
        let eq = |c: i64| FormulaTree::Eq { poly: Polynomial::new().term(&q, &q.one(), &[("x", 1)]).term(&q, &q.from_i64(c), &[("y", 1)]) };
        let tree = FormulaTree::exists(&["y"], FormulaTree::Or { children: vec![eq(1), eq(-1)] });
        assert_eq!(tree.free_variables(), vec!["x".to_string()]);
        assert_eq!(tree.or_widths(), vec![2]);
        let s = tree.to_json().unwrap();
        let back = FormulaTree::from_json(&s).unwrap();
        assert_eq!(back, tree);
        assert_eq!(back.to_json().unwrap(), s);
        let env: HashMap<String, _> = [("x".to_string(), q.from_i64(3)), ("y".to_string(), q.from_i64(3))].into();
        assert!(tree.eval(&q, &env).unwrap());
    }

    #[test]
    fn char2_tree() {
        let k = FunctionField::new(2).unwrap();
        let e = |s: &str| k.parse_elem(s).unwrap();
        let tree = emit_formula_char2(&k, &e("t"), &e("1"), &e("t"), &e("t+1")).unwrap();
        assert_eq!(tree.free_variables(), vec!["x3".to_string()]);
        let FormulaTree::Exists { child, .. } = &tree else { panic!() };
        let FormulaTree::Eq { poly } = child.as_ref() else { panic!() };
        assert_eq!(poly.to_string(), "x1^2 + x1*x3 + x3^2 + t*x2^2 + t*x2*x4 + t*x4^2 + (t^2+t)");
        assert!(emit_formula_char2(&Rationals, &Rationals.one(), &Rationals.one(), &Rationals.one(), &Rationals.one()).is_err());
    }
}
