//! Integral bases of `{z : tr z, nr z integral at the given places}` by
//! lattice saturation of the standard order.

use std::sync::Arc;

use super::{Presentation, QuatAlgebra, QuatElem};
use crate::error::{Error, Result};
use crate::exactalg::FieldElement;
use crate::places::{GlobalField, Place, Target};

/// A basis `1, a_2, a_3, a_4` with `tr(a_k) = 0` for `k >= 2`.
#[derive(Clone, Debug)]
pub struct IntegralBasis<E: FieldElement> {
    pub basis: [QuatElem<E>; 4],
    /// Number of saturation steps taken at each place.
    pub steps: Vec<(Place, u32)>,
}

impl<E: FieldElement> IntegralBasis<E> {
    /// `G` with `nr(sum x_k a_k) = sum_{k <= l} G[k][l] x_k x_l`.
    pub fn norm_gram(&self) -> [[E; 4]; 4] {
        let z = self.basis[0].coords()[0].zero_like();
        let mut g: [[E; 4]; 4] = std::array::from_fn(|_| std::array::from_fn(|_| z.clone()));
        for k in 0..4 {
            g[k][k] = self.basis[k].reduced_norm();
            for l in (k + 1)..4 {
                let s = &self.basis[k] + &self.basis[l];
                g[k][l] = s.reduced_norm() - g[k][k].clone() - self.basis[l].reduced_norm();
            }
        }
        g
    }

    /// Coordinates of `z` in this basis.
    pub fn coordinates(&self, z: &QuatElem<E>) -> Result<[E; 4]> {
        let cols: [[E; 4]; 4] = std::array::from_fn(|k| self.basis[k].coords().clone());
        solve4(&cols, z.coords())
    }

    /// Determinant of the basis in standard coordinates.
    pub fn det(&self) -> E {
        let cols: [[E; 4]; 4] = std::array::from_fn(|k| self.basis[k].coords().clone());
        det4(&cols)
    }
}

/// Determinant of a 4x4 matrix given by columns.
pub fn det4<E: FieldElement>(cols: &[[E; 4]; 4]) -> E {
    let mut m: Vec<Vec<E>> = (0..4).map(|r| (0..4).map(|c| cols[c][r].clone()).collect()).collect();
    let mut det = cols[0][0].one_like();
    for c in 0..4 {
        let Some(p) = (c..4).find(|&r| !m[r][c].is_zero()) else {
            return det.zero_like();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        let piv = m[c][c].clone();
        det = det * piv.clone();
        for r in (c + 1)..4 {
            if m[r][c].is_zero() {
                continue;
            }
            let f = m[r][c].clone() / piv.clone();
            for k in c..4 {
                m[r][k] = m[r][k].clone() - f.clone() * m[c][k].clone();
            }
        }
    }
    det
}

/// Solve `sum_k x_k cols[k] = rhs`.
pub fn solve4<E: FieldElement>(cols: &[[E; 4]; 4], rhs: &[E; 4]) -> Result<[E; 4]> {
    let mut m: Vec<Vec<E>> = (0..4)
        .map(|r| {
            let mut row: Vec<E> = (0..4).map(|c| cols[c][r].clone()).collect();
            row.push(rhs[r].clone());
            row
        })
        .collect();
    for c in 0..4 {
        let p = (c..4)
            .find(|&r| !m[r][c].is_zero())
            .ok_or_else(|| Error::Invariant("singular basis".into()))?;
        m.swap(p, c);
        let inv = m[c][c].checked_inv().expect("nonzero pivot");
        for k in c..5 {
            m[c][k] = m[c][k].clone() * inv.clone();
        }
        for r in 0..4 {
            if r == c || m[r][c].is_zero() {
                continue;
            }
            let f = m[r][c].clone();
            for k in c..5 {
                m[r][k] = m[r][k].clone() - f.clone() * m[c][k].clone();
            }
        }
    }
    Ok(std::array::from_fn(|r| m[r][4].clone()))
}

fn integral_at<F: GlobalField>(k: &F, v: &Place, z: &QuatElem<F::Elem>) -> Result<bool> {
    let ok = |x: F::Elem| -> Result<bool> { Ok(k.ord(v, &x)?.is_none_or(|o| o >= 0)) };
    Ok(ok(z.reduced_trace())? && ok(z.reduced_norm())?)
}

/// Integrality of `z` at every listed place.
pub fn is_integral<F: GlobalField>(k: &F, places: &[Place], z: &QuatElem<F::Elem>) -> Result<bool> {
    for v in places {
        if !integral_at(k, v, z)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Basis of the integral elements of `alg` over the semi-local ring of
/// `places`, starting from `1, i, j, ij` and adjoining `π^{-1}`-divided
/// combinations until none is integral. `a` and `b` must be integral at the
/// places. `max_steps` bounds the saturation at each place.
pub fn integral_basis<F: GlobalField>(
    k: &F,
    alg: &Arc<QuatAlgebra<F::Elem>>,
    places: &[Place],
    max_steps: u32,
) -> Result<IntegralBasis<F::Elem>> {
    if alg.presentation() != Presentation::OddChar {
        return Err(Error::CharacteristicTwo);
    }
    for v in places {
        if !v.is_finite() {
            return Err(Error::UnsupportedPlace(v.to_string()));
        }
        for c in [alg.a(), alg.b()] {
            if k.ord(v, c)?.is_some_and(|o| o < 0) {
                return Err(Error::Invalid(format!("structure constant {} not integral at {v}", k.format_elem(c))));
            }
        }
    }
    let mut basis: [QuatElem<F::Elem>; 4] = std::array::from_fn(|i| alg.basis(i));
    let mut steps = Vec::new();
    for (vi, v) in places.iter().enumerate() {
        let rf = k.residue_field(v)?;
        let pi_inv = k.uniformizer(v)?.checked_inv().expect("uniformizer is nonzero");
        let others: Vec<&Place> = places.iter().enumerate().filter(|(j, _)| *j != vi).map(|(_, w)| w).collect();
        // lift a residue at v, with a prescribed residue at the other places
        let lift = |r: u64, other: u64| -> Result<F::Elem> {
            let mut targets = vec![(v.clone(), Target::Residue(rf.elem(r)))];
            for w in &others {
                targets.push(((*w).clone(), Target::Residue(k.residue_field(w)?.elem(other))));
            }
            k.approximate(&targets)
        };
        let size = rf.size();
        let mut count = 0u32;
        'saturate: loop {
            for code in 1..size.pow(3) {
                let res = [code % size, (code / size) % size, code / (size * size)];
                let m = 1 + res.iter().position(|&r| r != 0).expect("nonzero code");
                let mut z = alg.zero();
                for (idx, &r) in res.iter().enumerate() {
                    if r == 0 {
                        continue;
                    }
                    let c = lift(r, if idx + 1 == m { 1 } else { 0 })?;
                    z = &z + &basis[idx + 1].scale(&c);
                }
                let z = z.scale(&pi_inv);
                if integral_at(k, v, &z)? {
                    if count >= max_steps {
                        return Err(Error::SearchExhausted(format!("saturation at {v} exceeded {max_steps} steps")));
                    }
                    basis[m] = z;
                    count += 1;
                    continue 'saturate;
                }
            }
            break;
        }
        steps.push((v.clone(), count));
    }
    let ib = IntegralBasis { basis, steps };
    verify_basis(k, &ib, places)?;
    Ok(ib)
}

/// Re-check integrality, the trace normalization, and the index
/// bookkeeping `ord_v(det) = -steps_v`.
pub fn verify_basis<F: GlobalField>(k: &F, ib: &IntegralBasis<F::Elem>, places: &[Place]) -> Result<()> {
    let alg = ib.basis[0].algebra();
    if ib.basis[0] != alg.one() {
        return Err(Error::Invariant("first basis element is not 1".into()));
    }
    for (idx, e) in ib.basis.iter().enumerate() {
        if !is_integral(k, places, e)? {
            return Err(Error::Invariant(format!("basis element {idx} is not integral")));
        }
        if idx > 0 && !e.reduced_trace().is_zero() {
            return Err(Error::Invariant(format!("basis element {idx} has nonzero trace")));
        }
    }
    let det = ib.det();
    for (v, s) in &ib.steps {
        if k.ord(v, &det)? != Some(-(*s as i64)) {
            return Err(Error::Invariant(format!("index at {v} does not match {s} saturation steps")));
        }
    }
    Ok(())
}
