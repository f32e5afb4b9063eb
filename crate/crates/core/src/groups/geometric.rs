//! Geometric conjugacy: which rational classes fuse over `F_{q^m}[π]/π^r`.
//!
//! Two representatives `g, g′` are tested through the transporter
//! `T = {x : x·g = g′·x}`.  It is defined over `F_q`, so `T ⊗ F_{q^m}` has a
//! rational basis, and whether an element is invertible depends only on its
//! residue.  The residue determinant is a polynomial of degree `n` on the
//! residue span, so if it vanishes on a grid `S^d` with `|S| > n` it vanishes
//! identically and the classes are distinct over every extension.

use std::collections::HashMap;

use serde::Serialize;

use super::{ClassTable, Family};
use crate::algebra::embed::subfield_embedding;
use crate::algebra::field::{field, FieldDesc, Fq};
use crate::algebra::linalg::{Echelon, FieldMatrix};
use crate::algebra::poly::char_poly;
use crate::algebra::trunc::{TruncElem, TruncMatrix};
use crate::error::Result;
use crate::flags::embed::iota;

/// Largest extension field scanned for `n`-th roots.
const ROOT_SCAN_LIMIT: u128 = 1 << 20;

#[derive(Clone, Debug, Serialize)]
pub struct MergeWitness {
    pub class_a: usize,
    pub class_b: usize,
    /// Extension degree over which the conjugating element lives.
    pub m: usize,
    /// `y` with `y·rep(a)·y⁻¹ = rep(b)` (and `det y = 1` for `SL`).
    pub y: Vec<Vec<Vec<Vec<u8>>>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GeometricPartition {
    pub m_max: usize,
    pub block_of: Vec<usize>,
    pub blocks: Vec<Vec<usize>>,
    pub merges: Vec<MergeWitness>,
    /// Pairs with equal characteristic polynomial shown distinct over every extension.
    pub certified_distinct: usize,
    /// Pairs neither merged nor certified distinct within `m ≤ m_max`.
    pub undecided: Vec<(usize, usize)>,
}

impl GeometricPartition {
    /// Number of rational classes in each block.
    pub fn rational_counts(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.len()).collect()
    }
}

enum PairResult {
    Merged(MergeWitness),
    Distinct,
    Undecided,
}

pub fn geometric_partition(ct: &ClassTable, m_max: usize) -> Result<GeometricPartition> {
    let gt = ct.group();
    let f = gt.field().clone();
    let charpolys: Vec<Vec<Fq>> = ct.reps().iter().map(|&g| char_poly(&iota(gt.element(g)), &f).0).collect();
    let mut roots_by_poly: HashMap<Vec<Fq>, Vec<usize>> = HashMap::new();
    let mut block_of = vec![usize::MAX; ct.len()];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut merges = Vec::new();
    let mut certified_distinct = 0;
    let mut undecided = Vec::new();
    for c in 0..ct.len() {
        let roots = roots_by_poly.entry(charpolys[c].clone()).or_default();
        let mut joined = None;
        for &b in roots.iter() {
            match test_pair(ct, b, c, m_max)? {
                PairResult::Merged(w) => {
                    merges.push(w);
                    joined = Some(block_of[b]);
                    break;
                }
                PairResult::Distinct => certified_distinct += 1,
                PairResult::Undecided => undecided.push((b, c)),
            }
        }
        match joined {
            Some(blk) => {
                block_of[c] = blk;
                blocks[blk].push(c);
            }
            None => {
                block_of[c] = blocks.len();
                blocks.push(vec![c]);
                roots.push(c);
            }
        }
    }
    Ok(GeometricPartition { m_max, block_of, blocks, merges, certified_distinct, undecided })
}

/// Rational basis of `{x ∈ M_n(F_q[π]/π^r) : x·g = g′·x}`.
fn transporter(g: &TruncMatrix, g2: &TruncMatrix, f: &FieldDesc) -> Vec<TruncMatrix> {
    let n = g.n();
    let r = g.r();
    let dim = n * n * r;
    let mut sys = FieldMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut x = TruncMatrix::zero(n, r);
        x.set_coeff(col / (n * r), (col / r) % n, col % r, f.one());
        let img = x.mul(g, f).sub(&g2.mul(&x, f), f);
        for (row, &v) in img.raw().iter().enumerate() {
            sys.set(row, col, v);
        }
    }
    sys.kernel(f)
        .into_iter()
        .map(|v| {
            let mut x = TruncMatrix::zero(n, r);
            for (idx, &c) in v.iter().enumerate() {
                x.set_coeff(idx / (n * r), (idx / r) % n, idx % r, c);
            }
            x
        })
        .collect()
}

fn test_pair(ct: &ClassTable, a: usize, b: usize, m_max: usize) -> Result<PairResult> {
    let gt = ct.group();
    let spec = gt.spec();
    let f = gt.field();
    let n = spec.n;
    let g = gt.element(ct.rep(a));
    let g2 = gt.element(ct.rep(b));
    let basis = transporter(g, g2, f);
    // keep the basis elements whose residues are independent
    let mut ech = Echelon::new(n * n);
    let sel: Vec<&TruncMatrix> = basis.iter().filter(|x| ech.insert(&x.layer(0).data, f)).collect();
    if sel.is_empty() {
        return Ok(PairResult::Distinct);
    }
    for m in 1..=m_max {
        let big = field(spec.p, spec.k, m)?;
        let emb = subfield_embedding(spec.p, spec.k, m)?;
        let size = big.size().unwrap_or(u128::MAX);
        let s = size.min(n as u128 + 1) as usize;
        let grid: Vec<Fq> = (0..s as u128).map(|i| big.from_index(i)).collect();
        let sel_big: Vec<TruncMatrix> = sel.iter().map(|x| x.embed(&emb)).collect();
        let gb = g.embed(&emb);
        let g2b = g2.embed(&emb);
        let d = sel.len();
        let total = (s as u128).pow(d as u32);
        let mut any_invertible = false;
        for idx in 0..total {
            let mut x = TruncMatrix::zero(n, spec.r);
            let mut t = idx;
            for b in &sel_big {
                let c = grid[(t % s as u128) as usize];
                t /= s as u128;
                if !c.is_zero() {
                    x = x.add(&b.scale(&TruncElem::constant(c, spec.r), &big), &big);
                }
            }
            if !x.is_invertible(&big) {
                continue;
            }
            any_invertible = true;
            let y = match spec.family {
                Family::GL => Some(x),
                Family::SL => fix_determinant(&x, &big),
            };
            if let Some(y) = y {
                let yi = y.inverse(&big)?;
                if y.mul(&gb, &big).mul(&yi, &big) == g2b {
                    return Ok(PairResult::Merged(MergeWitness { class_a: a, class_b: b, m, y: y.to_nested(&big) }));
                }
            }
        }
        if !any_invertible && s > n {
            return Ok(PairResult::Distinct);
        }
    }
    Ok(PairResult::Undecided)
}

/// Scale `x` by `c` with `c^n = det(x)^{-1}`, if such `c` exists in the ring.
fn fix_determinant(x: &TruncMatrix, f: &FieldDesc) -> Option<TruncMatrix> {
    let n = x.n();
    let r = x.r();
    if n.is_multiple_of(f.p() as usize) {
        return None;
    }
    if f.size()? > ROOT_SCAN_LIMIT {
        return None;
    }
    let target = x.det(f).inv(f)?;
    let c0 = (1..f.size()?).map(|i| f.from_index(i)).find(|&c| f.pow(c, n as u128) == target.c[0])?;
    let c = nth_root_lift(c0, &target, n, f);
    let y = TruncMatrix::scalar(&c, n).mul(x, f);
    (y.det(f) == TruncElem::one(r, f)).then_some(y)
}

/// Newton iteration for `c^n = a` from a residue root, `p ∤ n`.
fn nth_root_lift(c0: Fq, a: &TruncElem, n: usize, f: &FieldDesc) -> TruncElem {
    let r = a.r();
    let mut c = TruncElem::constant(c0, r);
    let n_elem = TruncElem::constant(f.from_int(n as i64), r);
    for _ in 0..r {
        let err = c.pow(n as u128, f).sub(a, f);
        if err.is_zero() {
            break;
        }
        let deriv = n_elem.mul(&c.pow(n as u128 - 1, f), f);
        c = c.sub(&err.mul(&deriv.inv(f).unwrap(), f), f);
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{GroupSpec, GroupTable, DEFAULT_MAX_ORDER};
    use std::sync::Arc;

    fn classes(family: Family, p: u32, r: usize) -> ClassTable {
        let spec = GroupSpec::new(family, 2, p, 1, r).unwrap();
        ClassTable::build(Arc::new(GroupTable::build(spec, DEFAULT_MAX_ORDER).unwrap()))
    }

    #[test]
    fn newton_lift_gives_roots() {
        let f = field(5, 1, 1).unwrap();
        let a = TruncElem { c: vec![f.from_int(4), f.from_int(2), f.from_int(3)] };
        let c = nth_root_lift(f.from_int(2), &a, 2, &f);
        assert_eq!(c.pow(2, &f), a);
    }

    #[test]
    fn gl_blocks_are_singletons() {
        let ct = classes(Family::GL, 3, 1);
        let gp = geometric_partition(&ct, 4).unwrap();
        assert!(gp.rational_counts().iter().all(|&c| c == 1));
        assert!(gp.undecided.is_empty());
    }

    #[test]
    fn sl2_f3_unipotent_classes_fuse() {
        // SL_2(F_3): [[1,1],[0,1]] and [[1,2],[0,1]] are GL-conjugate, so they fuse over F_9
        let ct = classes(Family::SL, 3, 1);
        let gp = geometric_partition(&ct, 2).unwrap();
        assert_eq!(gp.blocks.len(), 5);
        let mut counts = gp.rational_counts();
        counts.sort_unstable();
        assert_eq!(counts, vec![1, 1, 1, 2, 2]);
        assert!(gp.merges.iter().all(|w| w.m == 2));
        // central classes stay alone
        let id = ct.identity_class();
        assert_eq!(gp.blocks[gp.block_of[id]], vec![id]);
    }
}
