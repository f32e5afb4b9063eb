//! `GL_n` and `SL_n` over `F_q[π]/π^r`: enumeration, conjugacy classes,
//! Jordan decomposition, centralisers and geometric classes.

mod classes;
mod geometric;

pub use classes::{ClassTable, ClassTableJson, JordanData};
pub use geometric::{geometric_partition, GeometricPartition, MergeWitness};

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::field::{field, FieldDesc, Fq};
use crate::algebra::trunc::{TruncElem, TruncMatrix};
use crate::error::{Error, Result};

/// Default size guard on `|G^F|`.
pub const DEFAULT_MAX_ORDER: u128 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    GL,
    SL,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::GL => "gl",
            Family::SL => "sl",
        })
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gl" => Ok(Family::GL),
            "sl" => Ok(Family::SL),
            _ => Err(Error::InvalidParameter(format!("unknown family {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupSpec {
    pub family: Family,
    pub n: usize,
    pub p: u32,
    pub k: usize,
    pub r: usize,
}

impl GroupSpec {
    pub fn new(family: Family, n: usize, p: u32, k: usize, r: usize) -> Result<Self> {
        if n == 0 || r == 0 || k == 0 {
            return Err(Error::InvalidParameter("n, k and r must be positive".into()));
        }
        field(p, k, 1)?;
        Ok(GroupSpec { family, n, p, k, r })
    }

    pub fn q(&self) -> u128 {
        (self.p as u128).pow(self.k as u32)
    }

    /// `|G^F|` from the closed formula.
    pub fn order(&self) -> u128 {
        let q = self.q();
        let n = self.n as u32;
        let mut gl1: u128 = 1;
        for i in 0..n {
            gl1 *= q.pow(n) - q.pow(i);
        }
        let r1 = (self.r - 1) as u32;
        match self.family {
            Family::GL => gl1 * q.pow(r1 * n * n),
            Family::SL => gl1 / (q - 1) * q.pow(r1 * (n * n - 1)),
        }
    }

    /// Short label like `sl2-q3-r2`.
    pub fn label(&self) -> String {
        format!("{}{}-q{}-r{}", self.family, self.n, self.q(), self.r)
    }
}

/// All elements of `G^F`, sorted by canonical key.
pub struct GroupTable {
    spec: GroupSpec,
    field: Arc<FieldDesc>,
    elements: Vec<TruncMatrix>,
    keys: Vec<u128>,
    index: HashMap<u128, u32>,
    inverse: Vec<u32>,
    identity: usize,
}

impl GroupTable {
    pub fn build(spec: GroupSpec, max_order: u128) -> Result<Self> {
        let order = spec.order();
        if order > max_order {
            return Err(Error::GuardExceeded(format!("|G| = {order} exceeds {max_order}")));
        }
        let f = field(spec.p, spec.k, 1)?;
        let n = spec.n;
        let r = spec.r;
        let q = f.size().unwrap();
        let elems = f.elements()?;
        let nn = n * n;
        let digits = (nn * r * spec.k) as u32;
        if (spec.p as u128).checked_pow(digits).is_none() {
            return Err(Error::GuardExceeded("canonical keys do not fit in 128 bits".into()));
        }
        let decode = |mut idx: u128| -> Vec<Fq> {
            let mut v = vec![Fq::ZERO; nn];
            for slot in v.iter_mut().rev() {
                *slot = elems[(idx % q) as usize];
                idx /= q;
            }
            v
        };
        let residues: Vec<Vec<Fq>> = (0..q.pow(nn as u32))
            .map(decode)
            .filter(|a| {
                let m = TruncMatrix::from_constants(n, 1, a);
                let d = m.det(&f);
                match spec.family {
                    Family::GL => d.is_unit(),
                    Family::SL => d.c[0] == f.one(),
                }
            })
            .collect();
        let higher = q.pow((nn * (r - 1)) as u32);
        let one = TruncElem::one(r, &f);
        let mut elements: Vec<TruncMatrix> = residues
            .par_iter()
            .flat_map_iter(|a0| {
                let f = &f;
                let one = &one;
                (0..higher).filter_map(move |mut h| {
                    let mut layers = vec![a0.clone()];
                    for _ in 1..r {
                        layers.push(decode(h % q.pow(nn as u32)));
                        h /= q.pow(nn as u32);
                    }
                    let m = TruncMatrix::from_layers(n, &layers);
                    match spec.family {
                        Family::GL => Some(m),
                        Family::SL => (m.det(f) == *one).then_some(m),
                    }
                })
            })
            .collect();
        if elements.len() as u128 != order {
            return Err(Error::Internal(format!("enumerated {} elements, expected {order}", elements.len())));
        }
        let mut keyed: Vec<(u128, TruncMatrix)> =
            elements.drain(..).map(|m| (m.key(&f).unwrap(), m)).collect();
        keyed.par_sort_unstable_by_key(|x| x.0);
        let keys: Vec<u128> = keyed.iter().map(|x| x.0).collect();
        let elements: Vec<TruncMatrix> = keyed.into_iter().map(|x| x.1).collect();
        let index: HashMap<u128, u32> = keys.iter().enumerate().map(|(i, &k)| (k, i as u32)).collect();
        let id_key = TruncMatrix::identity(n, r, &f).key(&f).unwrap();
        let identity = index[&id_key] as usize;
        let mut gt = GroupTable { spec, field: f, elements, keys, index, inverse: Vec::new(), identity };
        let inverse: Vec<u32> = (0..gt.elements.len())
            .into_par_iter()
            .map(|i| {
                let inv = gt.elements[i].inverse(&gt.field).expect("group element is invertible");
                gt.index_of(&inv).expect("closed under inverse") as u32
            })
            .collect();
        gt.inverse = inverse;
        Ok(gt)
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn field(&self) -> &Arc<FieldDesc> {
        &self.field
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, i: usize) -> &TruncMatrix {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[TruncMatrix] {
        &self.elements
    }

    pub fn key(&self, i: usize) -> u128 {
        self.keys[i]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn index_of(&self, m: &TruncMatrix) -> Option<usize> {
        m.key(&self.field).and_then(|k| self.index.get(&k)).map(|&i| i as usize)
    }

    pub fn inv(&self, i: usize) -> usize {
        self.inverse[i] as usize
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        let m = self.elements[i].mul(&self.elements[j], &self.field);
        self.index_of(&m).expect("closed under multiplication")
    }

    /// `h·g·h⁻¹`.
    pub fn conj(&self, g: usize, h: usize) -> usize {
        let f = &self.field;
        let m = self.elements[h].mul(&self.elements[g], f).mul(&self.elements[self.inv(h)], f);
        self.index_of(&m).expect("closed under conjugation")
    }

    pub fn pow(&self, i: usize, e: u128) -> usize {
        self.index_of(&self.elements[i].pow(e, &self.field)).unwrap()
    }

    pub fn element_order(&self, i: usize) -> u64 {
        let mut acc = i;
        let mut o = 1;
        while acc != self.identity {
            acc = self.mul(acc, i);
            o += 1;
        }
        o
    }

    /// Elementary matrices `I + x^c π^s E_ij`, plus for `GL` the diagonal
    /// matrices `diag(a, 1, …)` with `a` a primitive element or `1 + x^c π^s`.
    pub fn generators(&self) -> Vec<usize> {
        let f = &self.field;
        let n = self.spec.n;
        let r = self.spec.r;
        let k = self.spec.k;
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                for s in 0..r {
                    for c in 0..k {
                        let mut m = TruncMatrix::identity(n, r, f);
                        m.set_coeff(i, j, s, f.basis(c));
                        out.push(self.index_of(&m).unwrap());
                    }
                }
            }
        }
        if self.spec.family == Family::GL {
            let mut m = TruncMatrix::identity(n, r, f);
            m.set_coeff(0, 0, 0, f.primitive_element());
            out.push(self.index_of(&m).unwrap());
            for s in 1..r {
                for c in 0..k {
                    let mut m = TruncMatrix::identity(n, r, f);
                    m.set_coeff(0, 0, s, f.basis(c));
                    out.push(self.index_of(&m).unwrap());
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// `{h : hg = gh}` by a full scan.
    pub fn centraliser(&self, g: usize) -> Vec<usize> {
        let f = &self.field;
        let x = &self.elements[g];
        (0..self.order())
            .into_par_iter()
            .filter(|&h| {
                let y = &self.elements[h];
                y.mul(x, f) == x.mul(y, f)
            })
            .collect()
    }

    /// Whether `i` lies in the residue subgroup (all higher layers zero).
    pub fn is_residue_level(&self, i: usize) -> bool {
        let m = &self.elements[i];
        let n = self.spec.n;
        (1..self.spec.r).all(|t| (0..n).all(|a| (0..n).all(|b| m.coeff(a, b, t).is_zero())))
    }

    pub fn level(&self, i: usize) -> usize {
        self.elements[i].congruence_level(&self.field)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_orders() {
        let sl = |q: u32, r| GroupSpec::new(Family::SL, 2, q, 1, r).unwrap().order();
        assert_eq!(sl(3, 1), 24);
        assert_eq!(sl(3, 2), 648);
        assert_eq!(sl(5, 2), 15000);
        assert_eq!(GroupSpec::new(Family::GL, 2, 3, 1, 2).unwrap().order(), 3888);
        assert_eq!(GroupSpec::new(Family::GL, 2, 5, 1, 2).unwrap().order(), 300000);
    }

    #[test]
    fn enumeration_matches_and_is_closed() {
        for spec in [
            GroupSpec::new(Family::SL, 2, 3, 1, 1).unwrap(),
            GroupSpec::new(Family::SL, 2, 3, 1, 2).unwrap(),
            GroupSpec::new(Family::GL, 2, 2, 1, 2).unwrap(),
            GroupSpec::new(Family::SL, 2, 2, 2, 1).unwrap(),
        ] {
            let g = GroupTable::build(spec, DEFAULT_MAX_ORDER).unwrap();
            assert_eq!(g.order() as u128, spec.order());
            for i in (0..g.order()).step_by(7) {
                assert_eq!(g.mul(i, g.inv(i)), g.identity());
                let j = (i * 31 + 5) % g.order();
                g.mul(i, j);
            }
            assert!(g.keys.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn guard_is_enforced() {
        let spec = GroupSpec::new(Family::GL, 2, 3, 1, 2).unwrap();
        assert!(matches!(GroupTable::build(spec, 1000), Err(Error::GuardExceeded(_))));
    }

    #[test]
    fn split_torus_centraliser() {
        // diag(a, a⁻¹) with a² ≠ 1 in SL_2(F_5)
        let g = GroupTable::build(GroupSpec::new(Family::SL, 2, 5, 1, 1).unwrap(), DEFAULT_MAX_ORDER).unwrap();
        let f = g.field().clone();
        let d = TruncMatrix::from_constants(2, 1, &[f.from_int(2), f.zero(), f.zero(), f.from_int(3)]);
        let c = g.centraliser(g.index_of(&d).unwrap());
        assert_eq!(c.len(), 4);
        assert!(c.iter().all(|&h| {
            let m = g.element(h);
            m.coeff(0, 1, 0).is_zero() && m.coeff(1, 0, 0).is_zero()
        }));
        assert_eq!(g.centraliser(g.identity()).len(), g.order());
    }
}
