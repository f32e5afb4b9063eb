use std::collections::VecDeque;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::{GroupSpec, GroupTable};

/// Jordan data of a class: classes of the semisimple and unipotent parts of
/// its representative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct JordanData {
    pub s_class: usize,
    pub u_class: usize,
    pub s_order: u64,
    pub u_order: u64,
}

/// Conjugacy classes of `G^F`, ordered by their minimal-key representatives.
pub struct ClassTable {
    group: Arc<GroupTable>,
    class_of: Vec<u32>,
    reps: Vec<usize>,
    members: Vec<Vec<u32>>,
    orders: Vec<u64>,
    levels: Vec<usize>,
    jordan: Vec<JordanData>,
    inverse_class: Vec<usize>,
}

/// `(s, u)` with `g = s·u = u·s`, `s` of `p′`-order and `u` of `p`-power order.
pub fn jordan_decomp(gt: &GroupTable, g: usize) -> (usize, usize) {
    let o = gt.element_order(g) as u128;
    let p = gt.spec().p as u128;
    let mut pa = 1u128;
    while o.is_multiple_of(pa * p) {
        pa *= p;
    }
    let t = o / pa;
    // e_s ≡ 1 (mod t), e_s ≡ 0 (mod p^a); e_u = 1 − e_s (mod o)
    let e_s = (0..t).map(|a| a * pa).find(|e| e % t == 1 % t).unwrap();
    let e_u = (o + 1 - e_s) % o;
    (gt.pow(g, e_s), gt.pow(g, e_u))
}

impl ClassTable {
    /// Orbits of conjugation by the generators, discovered in key order, so
    /// the first element of each orbit is its minimal representative.
    pub fn build(group: Arc<GroupTable>) -> Self {
        let gens = group.generators();
        let n = group.order();
        const NONE: u32 = u32::MAX;
        let mut class_of = vec![NONE; n];
        let mut reps = Vec::new();
        let mut members = Vec::new();
        for start in 0..n {
            if class_of[start] != NONE {
                continue;
            }
            let c = reps.len() as u32;
            reps.push(start);
            class_of[start] = c;
            let mut orbit = vec![start as u32];
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for &s in &gens {
                    let y = group.conj(x, s);
                    if class_of[y] == NONE {
                        class_of[y] = c;
                        orbit.push(y as u32);
                        queue.push_back(y);
                    }
                }
            }
            orbit.sort_unstable();
            members.push(orbit);
        }
        let orders: Vec<u64> = reps.par_iter().map(|&g| group.element_order(g)).collect();
        let levels: Vec<usize> = reps.iter().map(|&g| group.level(g)).collect();
        let inverse_class = reps.iter().map(|&g| class_of[group.inv(g)] as usize).collect();
        let mut ct = ClassTable { group, class_of, reps, members, orders, levels, jordan: Vec::new(), inverse_class };
        let jordan = (0..ct.len())
            .into_par_iter()
            .map(|c| {
                let (s, u) = jordan_decomp(&ct.group, ct.reps[c]);
                JordanData {
                    s_class: ct.class_of(s),
                    u_class: ct.class_of(u),
                    s_order: ct.group.element_order(s),
                    u_order: ct.group.element_order(u),
                }
            })
            .collect();
        ct.jordan = jordan;
        ct
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        &self.group
    }

    pub fn spec(&self) -> &GroupSpec {
        self.group.spec()
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn class_of(&self, g: usize) -> usize {
        self.class_of[g] as usize
    }

    pub fn rep(&self, c: usize) -> usize {
        self.reps[c]
    }

    pub fn reps(&self) -> &[usize] {
        &self.reps
    }

    pub fn size(&self, c: usize) -> usize {
        self.members[c].len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.members.iter().map(|m| m.len()).collect()
    }

    pub fn members(&self, c: usize) -> &[u32] {
        &self.members[c]
    }

    pub fn element_order(&self, c: usize) -> u64 {
        self.orders[c]
    }

    pub fn level(&self, c: usize) -> usize {
        self.levels[c]
    }

    pub fn jordan(&self, c: usize) -> JordanData {
        self.jordan[c]
    }

    pub fn inverse_class(&self, c: usize) -> usize {
        self.inverse_class[c]
    }

    pub fn identity_class(&self) -> usize {
        self.class_of(self.group.identity())
    }

    /// Class of `p′`-elements (semisimple in the finite-group sense).
    pub fn is_semisimple(&self, c: usize) -> bool {
        !self.orders[c].is_multiple_of(self.spec().p as u64)
    }

    pub fn is_unipotent(&self, c: usize) -> bool {
        let mut o = self.orders[c];
        let p = self.spec().p as u64;
        while o.is_multiple_of(p) {
            o /= p;
        }
        o == 1
    }

    /// Class of `rep(c)^e`.
    pub fn power_class(&self, c: usize, e: u128) -> usize {
        self.class_of(self.group.pow(self.reps[c], e))
    }

    pub fn to_json(&self) -> ClassTableJson {
        let f = self.group.field();
        ClassTableJson {
            spec: *self.spec(),
            order: self.group.order(),
            num_classes: self.len(),
            classes: (0..self.len())
                .map(|c| ClassJson {
                    index: c,
                    size: self.size(c),
                    representative: self.group.element(self.reps[c]).to_nested(f),
                    element_order: self.orders[c],
                    level: self.levels[c],
                    jordan: self.jordan[c],
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassJson {
    pub index: usize,
    pub size: usize,
    pub representative: Vec<Vec<Vec<Vec<u8>>>>,
    pub element_order: u64,
    pub level: usize,
    pub jordan: JordanData,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassTableJson {
    pub spec: GroupSpec,
    pub order: usize,
    pub num_classes: usize,
    pub classes: Vec<ClassJson>,
}
