//! Nilpotent primitive characters of `SL_2(F_q[ε])` by induction from the
//! centraliser `Z = ({±1} × U) ⋉ G¹` of a nilpotent `o_i`.

use std::collections::VecDeque;

use serde::Serialize;

use super::dixon::CharacterTable;
use super::orbits::{OrbitContext, OrbitType};
use crate::algebra::field::Fq;
use crate::algebra::linalg::FieldMatrix;
use crate::algebra::trunc::TruncMatrix;
use crate::error::{Error, Result};
use crate::groups::{ClassTable, Family};
use crate::twist::Check;

#[derive(Clone, Debug, Serialize)]
pub struct InducedCharacter {
    pub orbit_label: String,
    /// Exponent `a` with `λ(−I) = ζ_e^a`.
    pub sign: usize,
    /// Exponents of `λ` on `[[1,c],[0,1]]` for `c` running over an `F_p`-basis of `F_q`.
    pub unipotent: Vec<usize>,
    pub degree: u64,
    /// Exact values in the reduced cyclotomic basis.
    pub values: Vec<Vec<i64>>,
    pub modimages: Vec<u64>,
    pub norm_one: bool,
    pub reciprocity: bool,
    pub orbit_matches: bool,
    pub table_row: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CliffordReport {
    pub z_order: usize,
    pub expected_degree: u64,
    pub characters: Vec<InducedCharacter>,
    pub distinct: usize,
    pub checks: Vec<Check>,
}

impl CliffordReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn residue_is_signed_unipotent(m: &FieldMatrix, one: Fq, minus: Fq) -> bool {
    m.get(1, 0).is_zero() && m.get(0, 0) == m.get(1, 1) && (m.get(0, 0) == one || m.get(0, 0) == minus)
}

pub fn clifford_nilpotent_chars(ct: &ClassTable, tab: &CharacterTable, ctx: &OrbitContext) -> Result<CliffordReport> {
    let gt = ct.group();
    let spec = *gt.spec();
    if spec.family != Family::SL || spec.n != 2 || spec.r != 2 || spec.p == 2 {
        return Err(Error::InvalidParameter("Clifford construction needs SL_2 over F_q[ε], q odd".into()));
    }
    let f = gt.field().clone();
    let q = spec.q() as u64;
    let p = spec.p as usize;
    let k = spec.k;
    let e = tab.prime.e;

    let one = f.one();
    let minus = f.from_int(-1);
    let z: Vec<usize> = (0..gt.order())
        .filter(|&g| residue_is_signed_unipotent(&gt.element(g).layer(0), one, minus))
        .collect();
    let mut in_z = vec![false; gt.order()];
    for &g in &z {
        in_z[g] = true;
    }

    let zero = f.zero();
    let lift = |l0: [Fq; 4], l1: [Fq; 4]| -> Result<usize> {
        gt.index_of(&TruncMatrix::from_layers(2, &[l0.to_vec(), l1.to_vec()]))
            .ok_or_else(|| Error::Internal("generator outside the group".into()))
    };
    let ident = [one, zero, zero, one];
    let nz = [zero; 4];
    let neg_i = lift([minus, zero, zero, minus], nz)?;
    let unip: Vec<usize> = (0..k).map(|i| lift([one, f.basis(i), zero, one], nz)).collect::<Result<_>>()?;
    let mut lie_basis: Vec<[Fq; 4]> = Vec::new();
    for i in 0..k {
        let b = f.basis(i);
        lie_basis.push([zero, b, zero, zero]);
        lie_basis.push([zero, zero, b, zero]);
        lie_basis.push([b, zero, zero, f.neg(b)]);
    }
    let kern: Vec<usize> = lie_basis.iter().map(|&y| lift(ident, y)).collect::<Result<_>>()?;

    let nu = f.smallest_nonsquare().ok_or_else(|| Error::Internal("no non-square".into()))?;
    let step = e / p;
    let mut characters = Vec::new();
    for (label, a) in [("o1", one), ("o2", nu)] {
        // ψ_X(Y) = ζ_p^{Tr tr(XY)} with X = [[0,a],[0,0]], so tr(XY) = a·Y₂₁
        let psi: Vec<usize> = lie_basis.iter().map(|y| step * f.trace_to_prime(f.mul(a, y[2])) as usize % e).collect();
        for sign in [0, e / 2] {
            for combo in 0..(q as usize) {
                let unipotent: Vec<usize> = (0..k).map(|i| step * (combo / p.pow(i as u32) % p)).collect();
                let mut gens: Vec<(usize, usize)> = vec![(neg_i, sign)];
                gens.extend(unip.iter().copied().zip(unipotent.iter().copied()));
                gens.extend(kern.iter().copied().zip(psi.iter().copied()));
                let Some(lambda) = extend_linear(gt.order(), gt.identity(), &gens, e, |x, s| gt.mul(x, s)) else {
                    continue;
                };
                if z.iter().any(|&g| lambda[g] == usize::MAX) || lambda.iter().enumerate().any(|(g, &v)| v != usize::MAX && !in_z[g]) {
                    return Err(Error::Internal("generated subgroup differs from Z".into()));
                }
                characters.push(induce(ct, tab, ctx, &z, &lambda, label, sign, unipotent)?);
            }
        }
    }

    let expected_degree = (q * q - 1) / 2;
    let mut distinct: Vec<&Vec<Vec<i64>>> = characters.iter().map(|c| &c.values).collect();
    distinct.sort();
    distinct.dedup();
    let distinct = distinct.len();
    let mut rows: Vec<usize> = characters.iter().filter_map(|c| c.table_row).collect();
    rows.sort_unstable();
    rows.dedup();
    let bad = |pred: &dyn Fn(&InducedCharacter) -> bool| -> Vec<usize> {
        characters.iter().enumerate().filter(|(_, c)| !pred(c)).map(|(i, _)| i).collect()
    };
    let list = |name: &str, offenders: Vec<usize>| Check {
        name: name.into(),
        pass: offenders.is_empty(),
        detail: if offenders.is_empty() { "ok".into() } else { format!("induced characters {offenders:?}") },
    };
    let checks = vec![
        Check::from_bool("centraliser order 2q^4", z.len() as u64 == 2 * q.pow(4), format!("|Z| = {}", z.len())),
        Check::from_bool("4q extensions", characters.len() as u64 == 4 * q, format!("{} found", characters.len())),
        Check::from_bool("4q distinct induced characters", distinct as u64 == 4 * q, format!("{distinct} distinct")),
        list("degree (q^2-1)/2", bad(&|c| c.degree == expected_degree)),
        list("irreducible", bad(&|c| c.norm_one)),
        list("Frobenius reciprocity", bad(&|c| c.reciprocity)),
        list("primitive with matching nilpotent orbit", bad(&|c| c.orbit_matches)),
        list("matches a table row", bad(&|c| c.table_row.is_some())),
        Check::from_bool("matched rows are distinct", rows.len() == characters.len(), format!("{} rows", rows.len())),
    ];
    Ok(CliffordReport { z_order: z.len(), expected_degree, characters, distinct, checks })
}

/// Extend exponents on generators to a homomorphism into `Z/e`, by BFS over
/// the generated subgroup.  `None` if the assignment is inconsistent.
fn extend_linear(
    size: usize,
    identity: usize,
    gens: &[(usize, usize)],
    e: usize,
    mul: impl Fn(usize, usize) -> usize,
) -> Option<Vec<usize>> {
    let mut lambda = vec![usize::MAX; size];
    lambda[identity] = 0;
    let mut queue = VecDeque::from([identity]);
    while let Some(x) = queue.pop_front() {
        for &(s, v) in gens {
            let y = mul(x, s);
            let val = (lambda[x] + v) % e;
            if lambda[y] == usize::MAX {
                lambda[y] = val;
                queue.push_back(y);
            } else if lambda[y] != val {
                return None;
            }
        }
    }
    Some(lambda)
}

#[allow(clippy::too_many_arguments)]
fn induce(
    ct: &ClassTable,
    tab: &CharacterTable,
    ctx: &OrbitContext,
    z: &[usize],
    lambda: &[usize],
    label: &str,
    sign: usize,
    unipotent: Vec<usize>,
) -> Result<InducedCharacter> {
    let h = ct.len();
    let e = tab.prime.e;
    let ell = tab.prime.ell;
    let order = ct.group().order() as i64;
    let mut cnt = vec![vec![0i64; e]; h];
    for &g in z {
        cnt[ct.class_of(g)][lambda[g]] += 1;
    }
    let zsize = z.len() as i64;
    let mut values = Vec::with_capacity(h);
    let mut modimages = Vec::with_capacity(h);
    for c in 0..h {
        let denom = zsize * ct.size(c) as i64;
        let num = tab.cyclo.reduce(&cnt[c].iter().map(|&x| x * order).collect::<Vec<_>>());
        if num.iter().any(|&x| x % denom != 0) {
            return Err(Error::Internal("induced value is not integral".into()));
        }
        values.push(num.iter().map(|&x| x / denom).collect::<Vec<_>>());
        let s: u64 = cnt[c].iter().enumerate().map(|(a, &n)| n as u64 % ell * tab.prime.zeta(a as i64) % ell).sum::<u64>() % ell;
        modimages.push(s * (order as u64 % ell) % ell * tab.prime.inv(denom as u64) % ell);
    }
    let degree = (order / zsize) as u64;
    let norm_one = tab.inner_mod(&modimages, &modimages) == 1;
    let zinv = tab.prime.inv(zsize as u64);
    let reciprocity = (0..tab.len()).all(|i| {
        let chi = tab.mod_row(i);
        let rhs: u64 = (0..h)
            .map(|c| {
                let s: u64 = cnt[c].iter().enumerate().map(|(a, &n)| n as u64 % ell * tab.prime.zeta(a as i64) % ell).sum::<u64>() % ell;
                s * chi[tab.inverse_class[c]] % ell
            })
            .sum::<u64>()
            % ell;
        tab.inner_mod(&modimages, &chi) == rhs * zinv % ell
    });
    let orbit_matches = ctx.orbit_of_values(&modimages, degree).is_ok_and(|o| {
        let orb = &ctx.orbits[o.orbit];
        orb.kind == OrbitType::RegularNilpotent && orb.label.as_deref() == Some(label)
    });
    let table_row = (0..tab.len()).find(|&i| tab.rows[i].iter().zip(&values).all(|(v, w)| &v.cyc == w));
    Ok(InducedCharacter {
        orbit_label: label.into(),
        sign,
        unipotent,
        degree,
        values,
        modimages,
        norm_one,
        reciprocity,
        orbit_matches,
        table_row,
    })
}
