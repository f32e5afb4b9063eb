//! The Lang equation `F(h) = h·g`, the class permutation `n_F` and the
//! twisting operator `Sh_G f = f ∘ n_F`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::embed::subfield_embedding;
use crate::algebra::field::{field, MAX_DEGREE};
use crate::algebra::semilinear::solve_semilinear;
use crate::algebra::trunc::{TruncElem, TruncMatrix};
use crate::error::{Error, Result};
use crate::groups::{ClassTable, Family};

/// A solution of `F(h) = h·g` over `F_{q^m}[π]/π^r`, `m = ord(g)`.
#[derive(Clone, Debug)]
pub struct LangSolution {
    pub g: usize,
    pub m: usize,
    pub h: TruncMatrix,
    /// Whether the `SL` determinant correction was applied.
    pub adjusted: bool,
    /// `F_q`-dimension of the solution space.
    pub kernel_dim: usize,
    /// Element index of `h·g·h⁻¹ = F(h)·h⁻¹`.
    pub image: usize,
}

/// Solve the Lang equation for group element `g`, taking the `skip`-th
/// invertible kernel element.
pub fn lang_solve(ct: &ClassTable, g: usize, skip: usize, seed: u64) -> Result<LangSolution> {
    let gt = ct.group();
    let spec = gt.spec();
    let m = gt.element_order(g) as usize;
    if m * spec.k > MAX_DEGREE {
        return Err(Error::InvalidParameter(format!(
            "element order {m} needs F_q^{m}, beyond the supported degree {MAX_DEGREE}"
        )));
    }
    let big = field(spec.p, spec.k, m)?;
    let emb = subfield_embedding(spec.p, spec.k, m)?;
    let gb = gt.element(g).embed(&emb);
    let ker = solve_semilinear(&gb, &big)?;
    let mut h = ker.invertible_element(skip, seed, &big)?;
    let mut adjusted = false;
    if spec.family == Family::SL {
        let d = h.det(&big);
        if d.frobenius(&big) != d {
            return Err(Error::Internal("det h is not Frobenius-fixed".into()));
        }
        if d != TruncElem::one(spec.r, &big) {
            let d_inv = d.inv(&big).unwrap();
            let mut a = TruncMatrix::identity(spec.n, spec.r, &big);
            a.set(0, 0, &d_inv);
            h = a.mul(&h, &big);
            adjusted = true;
        }
        if h.det(&big) != TruncElem::one(spec.r, &big) {
            return Err(Error::Internal("determinant correction failed".into()));
        }
    }
    if h.frobenius(&big) != h.mul(&gb, &big) {
        return Err(Error::Internal("F(h) != h g".into()));
    }
    let conj = h.mul(&gb, &big).mul(&h.inverse(&big)?, &big);
    let rational = conj
        .project(&emb)
        .ok_or_else(|| Error::Internal("h g h^-1 is not F-fixed".into()))?;
    let image = gt
        .index_of(&rational)
        .ok_or_else(|| Error::Internal("h g h^-1 is not in the group".into()))?;
    Ok(LangSolution { g, m, h, adjusted, kernel_dim: ker.dim_fp() / spec.k, image })
}

/// `n_F` on class indices.
#[derive(Clone, Debug, Serialize)]
pub struct TwistPermutation {
    pub perm: Vec<usize>,
    /// Extension degree used per class.
    pub m: Vec<usize>,
    /// Classes where a second kernel element or a second class member gave a
    /// different image.
    pub inconsistent: Vec<usize>,
}

fn class_seed(seed: u64, c: usize) -> u64 {
    seed ^ (c as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// `n_F` from class representatives, cross-checked by a second kernel element
/// and by a second, randomly chosen class member.
pub fn n_f(ct: &ClassTable, seed: u64) -> Result<TwistPermutation> {
    let rows: Vec<Result<(usize, usize, bool)>> = (0..ct.len())
        .into_par_iter()
        .map(|c| {
            let s = class_seed(seed, c);
            let rep = ct.rep(c);
            let a = lang_solve(ct, rep, 0, s)?;
            let b = lang_solve(ct, rep, 1, s.wrapping_add(1))?;
            let members = ct.members(c);
            let other = members[ChaCha8Rng::seed_from_u64(s).gen_range(0..members.len())] as usize;
            let o = lang_solve(ct, other, 0, s.wrapping_add(2))?;
            let img = ct.class_of(a.image);
            let ok = ct.class_of(b.image) == img && ct.class_of(o.image) == img;
            Ok((img, a.m, ok))
        })
        .collect();
    let mut perm = Vec::with_capacity(ct.len());
    let mut m = Vec::with_capacity(ct.len());
    let mut inconsistent = Vec::new();
    for (c, row) in rows.into_iter().enumerate() {
        let (img, mm, ok) = row?;
        perm.push(img);
        m.push(mm);
        if !ok {
            inconsistent.push(c);
        }
    }
    Ok(TwistPermutation { perm, m, inconsistent })
}

impl TwistPermutation {
    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn image(&self, c: usize) -> usize {
        self.perm[c]
    }

    pub fn is_fixed(&self, c: usize) -> bool {
        self.perm[c] == c
    }

    pub fn is_bijection(&self) -> bool {
        let mut seen = vec![false; self.perm.len()];
        for &x in &self.perm {
            if x >= seen.len() || seen[x] {
                return false;
            }
            seen[x] = true;
        }
        true
    }

    pub fn moved(&self) -> Vec<usize> {
        (0..self.perm.len()).filter(|&c| !self.is_fixed(c)).collect()
    }

    pub fn compose(&self, other: &TwistPermutation) -> Vec<usize> {
        self.perm.iter().map(|&c| other.perm[c]).collect()
    }
}

/// `(Sh f)(c) = f(n_F(c))`.
pub fn shintani<T: Clone>(tp: &TwistPermutation, f: &[T]) -> Vec<T> {
    tp.perm.iter().map(|&c| f[c].clone()).collect()
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Order of `Sh_G`: lcm of the cycle lengths of `n_F`.
pub fn sh_order(tp: &TwistPermutation) -> u64 {
    let mut seen = vec![false; tp.len()];
    let mut l = 1u64;
    for s in 0..tp.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut c = s;
        while !seen[c] {
            seen[c] = true;
            c = tp.perm[c];
            len += 1;
        }
        l = l / gcd(l, len) * len;
    }
    l
}

/// Order found by iterating the permutation until it returns to the identity.
pub fn sh_order_by_iteration(tp: &TwistPermutation) -> u64 {
    let id: Vec<usize> = (0..tp.len()).collect();
    let mut cur = tp.perm.clone();
    let mut i = 1;
    while cur != id {
        cur = cur.iter().map(|&c| tp.perm[c]).collect();
        i += 1;
    }
    i
}

/// `Σ_c |c|·f(c)·g(c)` for integer-valued class functions (`|G|·⟨f, g⟩`).
pub fn scaled_inner(ct: &ClassTable, f: &[i64], g: &[i64]) -> i128 {
    (0..ct.len()).map(|c| ct.size(c) as i128 * f[c] as i128 * g[c] as i128).sum()
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn from_bool(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), pass, detail: detail.into() }
    }

    pub fn new(name: &str, offenders: &[usize], what: &str) -> Self {
        Check {
            name: name.into(),
            pass: offenders.is_empty(),
            detail: if offenders.is_empty() {
                format!("all {what} ok")
            } else {
                format!("offending classes {offenders:?}")
            },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassRow {
    pub class: usize,
    pub representative: Vec<Vec<Vec<Vec<u8>>>>,
    pub size: usize,
    pub level: usize,
    pub element_order: u64,
    pub semisimple: bool,
    pub unipotent: bool,
    pub s_order: u64,
    pub u_order: u64,
    pub image: usize,
    pub fixed: bool,
    pub lang_degree: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct TwistReport {
    pub num_classes: usize,
    pub sh_order: u64,
    pub moved: Vec<usize>,
    pub checks: Vec<Check>,
    pub classes: Vec<ClassRow>,
}

impl TwistReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Classes containing a unipotent element with all higher layers zero.
pub fn residue_unipotent_classes(ct: &ClassTable) -> Vec<usize> {
    let gt = ct.group();
    let mut out: Vec<usize> = (0..gt.order())
        .filter(|&g| gt.is_residue_level(g) && ct.is_unipotent(ct.class_of(g)))
        .map(|g| ct.class_of(g))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

pub fn verify_twist(ct: &ClassTable, tp: &TwistPermutation, seed: u64) -> TwistReport {
    let n = ct.len();
    let r = ct.spec().r;
    let mut checks = Vec::new();
    let not_bij: Vec<usize> = if tp.is_bijection() { vec![] } else { (0..n).collect() };
    checks.push(Check::new("n_F is a bijection", &not_bij, "classes"));
    let size_bad: Vec<usize> = (0..n).filter(|&c| ct.size(tp.image(c)) != ct.size(c)).collect();
    checks.push(Check::new("n_F preserves class sizes", &size_bad, "classes"));
    let lvl_bad: Vec<usize> = (0..n).filter(|&c| ct.level(tp.image(c)) != ct.level(c)).collect();
    checks.push(Check::new("n_F preserves congruence level", &lvl_bad, "classes"));
    let jordan_bad: Vec<usize> = (0..n)
        .filter(|&c| {
            let (a, b) = (ct.jordan(c), ct.jordan(tp.image(c)));
            a.s_order != b.s_order || a.u_order != b.u_order
        })
        .collect();
    checks.push(Check::new("n_F preserves Jordan type", &jordan_bad, "classes"));
    checks.push(Check::new("n_F independent of the solution", &tp.inconsistent, "classes"));
    let ord = sh_order(tp);
    let ord2 = sh_order_by_iteration(tp);
    checks.push(Check {
        name: "Sh_G has finite order (permutation matrix)".into(),
        pass: ord == ord2,
        detail: format!("cycle lcm {ord}, iterated order {ord2}"),
    });
    let ss_bad: Vec<usize> = (0..n).filter(|&c| ct.is_semisimple(c) && !tp.is_fixed(c)).collect();
    checks.push(Check::new("semisimple classes fixed", &ss_bad, "semisimple classes"));
    let half = r.div_ceil(2);
    let cong_bad: Vec<usize> = (0..n).filter(|&c| ct.level(c) >= half && !tp.is_fixed(c)).collect();
    checks.push(Check::new(&format!("classes of level >= {half} fixed"), &cong_bad, "deep congruence classes"));
    let uni_bad: Vec<usize> = residue_unipotent_classes(ct).into_iter().filter(|&c| !tp.is_fixed(c)).collect();
    checks.push(Check::new("residue unipotent classes fixed", &uni_bad, "residue unipotent classes"));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut iso_bad = Vec::new();
    for trial in 0..8 {
        let f: Vec<i64> = (0..n).map(|_| rng.gen_range(-9..10)).collect();
        let g: Vec<i64> = (0..n).map(|_| rng.gen_range(-9..10)).collect();
        if scaled_inner(ct, &shintani(tp, &f), &shintani(tp, &g)) != scaled_inner(ct, &f, &g) {
            iso_bad.push(trial);
        }
    }
    checks.push(Check {
        name: "Sh_G is an isometry".into(),
        pass: iso_bad.is_empty(),
        detail: format!("8 random pairs, failures {iso_bad:?}"),
    });
    let f = ct.group().field();
    let classes = (0..n)
        .map(|c| {
            let j = ct.jordan(c);
            ClassRow {
                class: c,
                representative: ct.group().element(ct.rep(c)).to_nested(f),
                size: ct.size(c),
                level: ct.level(c),
                element_order: ct.element_order(c),
                semisimple: ct.is_semisimple(c),
                unipotent: ct.is_unipotent(c),
                s_order: j.s_order,
                u_order: j.u_order,
                image: tp.image(c),
                fixed: tp.is_fixed(c),
                lang_degree: tp.m[c],
            }
        })
        .collect();
    TwistReport { num_classes: n, sh_order: ord, moved: tp.moved(), checks, classes }
}

/// Solver audit over every group element.
#[derive(Clone, Debug, Serialize)]
pub struct LangAudit {
    pub elements: usize,
    pub kernel_dims: Vec<usize>,
    pub failures: Vec<String>,
}

/// Run the solver twice on every element and check all solution invariants.
pub fn lang_audit(ct: &ClassTable, seed: u64) -> LangAudit {
    let gt = ct.group();
    let spec = *gt.spec();
    let rows: Vec<std::result::Result<usize, String>> = (0..gt.order())
        .into_par_iter()
        .map(|g| {
            let s = class_seed(seed, g);
            let a = lang_solve(ct, g, 0, s).map_err(|e| format!("element {g}: {e}"))?;
            let b = lang_solve(ct, g, 1, s.wrapping_add(1)).map_err(|e| format!("element {g}: {e}"))?;
            let big = field(spec.p, spec.k, a.m).unwrap();
            let gb = gt.element(g).embed(&subfield_embedding(spec.p, spec.k, a.m).unwrap());
            for sol in [&a, &b] {
                if sol.h.frobenius(&big) != sol.h.mul(&gb, &big) {
                    return Err(format!("element {g}: F(h) != hg"));
                }
                if spec.family == Family::SL && sol.h.det(&big) != TruncElem::one(spec.r, &big) {
                    return Err(format!("element {g}: det h != 1"));
                }
            }
            if ct.class_of(a.image) != ct.class_of(b.image) {
                return Err(format!("element {g}: two solutions give different classes"));
            }
            if a.kernel_dim != spec.n * spec.n * spec.r {
                return Err(format!("element {g}: kernel dimension {}", a.kernel_dim));
            }
            Ok(a.kernel_dim)
        })
        .collect();
    let mut kernel_dims = Vec::new();
    let mut failures = Vec::new();
    for row in rows {
        match row {
            Ok(d) => kernel_dims.push(d),
            Err(e) => failures.push(e),
        }
    }
    kernel_dims.sort_unstable();
    kernel_dims.dedup();
    LangAudit { elements: gt.order(), kernel_dims, failures }
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
    fn identity_needs_no_extension() {
        let ct = classes(Family::SL, 3, 1);
        let sol = lang_solve(&ct, ct.group().identity(), 0, 1).unwrap();
        assert_eq!(sol.m, 1);
        assert_eq!(sol.image, ct.group().identity());
    }

    #[test]
    fn order_two_element_uses_f9() {
        let ct = classes(Family::SL, 3, 1);
        let gt = ct.group();
        let g = (0..gt.order()).find(|&g| gt.element_order(g) == 2).unwrap();
        let sol = lang_solve(&ct, g, 0, 1).unwrap();
        assert_eq!(sol.m, 2);
        assert_eq!(sol.kernel_dim, 4);
    }

    #[test]
    fn sl2_f3_swaps_the_order_six_classes() {
        // -u has a disconnected centraliser and g = -u sits in the non-identity component
        let ct = classes(Family::SL, 3, 1);
        let tp = n_f(&ct, 5).unwrap();
        let moved = tp.moved();
        assert_eq!(moved.len(), 2);
        assert!(moved.iter().all(|&c| ct.element_order(c) == 6));
        assert_eq!(sh_order(&tp), 2);
        let rep = verify_twist(&ct, &tp, 5);
        assert!(rep.all_pass(), "{:?}", rep.checks);
    }

    #[test]
    fn shintani_of_constant_is_constant() {
        let tp = TwistPermutation { perm: vec![1, 2, 0], m: vec![1; 3], inconsistent: vec![] };
        assert_eq!(shintani(&tp, &[4, 4, 4]), vec![4, 4, 4]);
        assert_eq!(shintani(&tp, &[1, 2, 3]), vec![2, 3, 1]);
        assert_eq!(sh_order(&tp), 3);
        assert_eq!(sh_order_by_iteration(&tp), 3);
    }
}
