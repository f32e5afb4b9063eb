//! Orbit maps: restriction to the deepest congruence layer.
//!
//! `K = {I + π^{r−1}·Y}` is abelian and isomorphic to the Lie algebra `g^F`
//! (trace-zero for `SL`).  Its characters are `ψ_X(Y) = φ(tr(XY))` with
//! `φ(t) = ζ_p^{Tr(t)}`, and by Clifford theory every irreducible restricts
//! to `e·Σ_{X ∈ O} ψ_X` for a single adjoint orbit `O`.

use std::collections::HashMap;

use serde::Serialize;

use super::dixon::{CharacterTable, DixonPrime};
use crate::algebra::field::{FieldDesc, Fq};
use crate::algebra::linalg::FieldMatrix;
use crate::algebra::poly::{min_poly, squarefree_test};
use crate::error::{Error, Result};
use crate::groups::{ClassTable, Family};
use crate::twist::{shintani, TwistPermutation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrbitType {
    Zero,
    RegularNilpotent,
    RegularSemisimple,
    Other,
}

#[derive(Clone, Debug, Serialize)]
pub struct AdjointOrbit {
    pub index: usize,
    /// Minimal element, as `n × n` coefficient vectors.
    pub rep: Vec<Vec<Vec<u8>>>,
    pub kind: OrbitType,
    pub size: usize,
    pub nilpotent: bool,
    pub semisimple: bool,
    /// `o1`/`o2` for nonzero nilpotent orbits of `sl_2`.
    pub label: Option<String>,
    #[serde(skip)]
    pub rep_x: Vec<Fq>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowOrbit {
    pub orbit: usize,
    pub multiplicity: u64,
    pub primitive: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitMapResult {
    pub orbits: Vec<AdjointOrbit>,
    pub rows: Vec<RowOrbit>,
}

/// Kernel elements, Lie algebra, adjoint orbits and the pairing table.
pub struct OrbitContext {
    n: usize,
    p: usize,
    prime: DixonPrime,
    /// Class of `I + π^{r−1}·Y` for each `Y` in the Lie algebra order.
    kernel_class: Vec<usize>,
    /// `pairing[x][y] = Tr(tr(X·Y)) ∈ F_p`.
    pairing: Vec<Vec<u32>>,
    orbit_of: Vec<usize>,
    pub orbits: Vec<AdjointOrbit>,
}

fn trace_zero(x: &[Fq], n: usize, f: &FieldDesc) -> bool {
    (0..n).fold(f.zero(), |acc, i| f.add(acc, x[i * n + i])).is_zero()
}

pub fn classify(x: &FieldMatrix, f: &FieldDesc) -> (OrbitType, bool, bool) {
    let n = x.rows;
    if x.is_zero() {
        return (OrbitType::Zero, true, true);
    }
    let mp = min_poly(x, f);
    let deg = mp.degree().unwrap_or(0);
    let nilpotent = mp.is_monomial();
    let semisimple = squarefree_test(&mp, f);
    let kind = match (nilpotent, semisimple, deg == n) {
        (true, _, true) => OrbitType::RegularNilpotent,
        (_, true, true) => OrbitType::RegularSemisimple,
        _ => OrbitType::Other,
    };
    (kind, nilpotent, semisimple)
}

/// Square class of a nonzero nilpotent `X ∈ sl_2`: `X = λ·det(v,·)·v`, and
/// `λ` modulo squares is the invariant.
fn sl2_nilpotent_label(x: &[Fq], f: &FieldDesc) -> String {
    let lam = if !x[1].is_zero() { x[1] } else { f.neg(x[2]) };
    if f.is_square(lam) { "o1" } else { "o2" }.to_string()
}

impl OrbitContext {
    pub fn new(ct: &ClassTable, prime: &DixonPrime) -> Result<Self> {
        let gt = ct.group();
        let spec = *gt.spec();
        let f = gt.field().clone();
        let n = spec.n;
        let r = spec.r;
        if r < 2 {
            return Err(Error::InvalidParameter("orbit map needs r ≥ 2".into()));
        }
        if spec.family == Family::SL && n.is_multiple_of(spec.p as usize) {
            return Err(Error::InvalidParameter("trace form is degenerate on sl_n when p | n".into()));
        }
        if !prime.e.is_multiple_of(spec.p as usize) {
            return Err(Error::Internal("group exponent prime to p".into()));
        }
        let elems = f.elements()?;
        let q = elems.len();
        let total = (q as u128).pow((n * n) as u32);
        if total > 1 << 20 {
            return Err(Error::GuardExceeded(format!("Lie algebra of size {total}")));
        }
        let lie: Vec<Vec<Fq>> = (0..total)
            .map(|mut idx| {
                let mut x = vec![Fq::ZERO; n * n];
                for slot in x.iter_mut().rev() {
                    *slot = elems[(idx % q as u128) as usize];
                    idx /= q as u128;
                }
                x
            })
            .filter(|x| spec.family == Family::GL || trace_zero(x, n, &f))
            .collect();
        let index: HashMap<Vec<Fq>, usize> = lie.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();

        let mut kernel_class = vec![usize::MAX; lie.len()];
        for g in 0..gt.order() {
            if gt.level(g) >= r - 1 {
                let y = gt.element(g).layer(r - 1).data;
                let i = *index.get(&y).ok_or_else(|| Error::Internal("kernel element outside the Lie algebra".into()))?;
                kernel_class[i] = ct.class_of(g);
            }
        }
        if kernel_class.contains(&usize::MAX) {
            return Err(Error::Internal("kernel does not exhaust the Lie algebra".into()));
        }

        let pairing: Vec<Vec<u32>> = lie
            .iter()
            .map(|x| {
                let xm = FieldMatrix { rows: n, cols: n, data: x.clone() };
                lie.iter()
                    .map(|y| {
                        let ym = FieldMatrix { rows: n, cols: n, data: y.clone() };
                        let xy = xm.mul(&ym, &f);
                        let t = (0..n).fold(f.zero(), |acc, i| f.add(acc, xy.get(i, i)));
                        f.trace_to_prime(t)
                    })
                    .collect()
            })
            .collect();

        // adjoint action of the residue group
        let conj: Vec<(FieldMatrix, FieldMatrix)> = (0..gt.order())
            .filter(|&g| gt.is_residue_level(g))
            .map(|g| (gt.element(g).layer(0), gt.element(gt.inv(g)).layer(0)))
            .collect();
        let mut orbit_of = vec![usize::MAX; lie.len()];
        let mut orbits = Vec::new();
        for start in 0..lie.len() {
            if orbit_of[start] != usize::MAX {
                continue;
            }
            let o = orbits.len();
            let xm = FieldMatrix { rows: n, cols: n, data: lie[start].clone() };
            let mut size = 0;
            for (h, hi) in &conj {
                let y = h.mul(&xm, &f).mul(hi, &f);
                let j = index[&y.data];
                if orbit_of[j] == usize::MAX {
                    orbit_of[j] = o;
                    size += 1;
                }
            }
            let (kind, nilpotent, semisimple) = classify(&xm, &f);
            let label = (n == 2 && nilpotent && kind != OrbitType::Zero && spec.p != 2)
                .then(|| sl2_nilpotent_label(&lie[start], &f));
            let rep = (0..n)
                .map(|i| (0..n).map(|j| lie[start][i * n + j].coeffs(f.degree()).to_vec()).collect())
                .collect();
            orbits.push(AdjointOrbit { index: o, rep, kind, size, nilpotent, semisimple, label, rep_x: lie[start].clone() });
        }
        Ok(OrbitContext { n, p: spec.p as usize, prime: prime.clone(), kernel_class, pairing, orbit_of, orbits })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kernel_size(&self) -> usize {
        self.kernel_class.len()
    }

    /// `⟨Res χ, ψ_X⟩_K` for every `X`, as residues mod `ℓ`.
    pub fn restriction_multiplicities(&self, values: &[u64]) -> Vec<u64> {
        let ell = self.prime.ell;
        let step = (self.prime.e / self.p) as i64;
        let kinv = self.prime.inv(self.kernel_size() as u64);
        self.pairing
            .iter()
            .map(|row| {
                let s: u64 = row
                    .iter()
                    .zip(&self.kernel_class)
                    .map(|(&t, &c)| values[c] * self.prime.zeta(-step * t as i64) % ell)
                    .sum::<u64>()
                    % ell;
                s * kinv % ell
            })
            .collect()
    }

    /// Orbit and multiplicity of a character given by its values mod `ℓ`.
    pub fn orbit_of_values(&self, values: &[u64], degree: u64) -> Result<RowOrbit> {
        let mults = self.restriction_multiplicities(values);
        let support: Vec<usize> = (0..mults.len()).filter(|&x| mults[x] != 0).collect();
        let first = *support.first().ok_or_else(|| Error::Internal("restriction to the kernel vanishes".into()))?;
        let orbit = self.orbit_of[first];
        let m = mults[first];
        let orbit_size = self.orbits[orbit].size;
        if m > degree
            || support.len() != orbit_size
            || support.iter().any(|&x| self.orbit_of[x] != orbit || mults[x] != m)
            || m * orbit_size as u64 != degree
        {
            return Err(Error::Verification("restriction is not a multiple of a single orbit sum".into()));
        }
        Ok(RowOrbit { orbit, multiplicity: m, primitive: self.orbits[orbit].kind != OrbitType::Zero })
    }
}

pub fn orbit_map(ct: &ClassTable, tab: &CharacterTable) -> Result<(OrbitContext, OrbitMapResult)> {
    let ctx = OrbitContext::new(ct, &tab.prime)?;
    let rows = (0..tab.len())
        .map(|i| ctx.orbit_of_values(&tab.mod_row(i), tab.degrees[i]))
        .collect::<Result<Vec<_>>>()?;
    let res = OrbitMapResult { orbits: ctx.orbits.clone(), rows };
    Ok((ctx, res))
}

/// Rows whose orbit differs from the orbit of their twist `χ∘n_F`.
pub fn orbit_twist_offenders(
    ctx: &OrbitContext,
    tab: &CharacterTable,
    om: &OrbitMapResult,
    tp: &TwistPermutation,
) -> Vec<usize> {
    (0..tab.len())
        .filter(|&i| {
            let twisted = shintani(tp, &tab.mod_row(i));
            match ctx.orbit_of_values(&twisted, tab.degrees[i]) {
                Ok(o) => o.orbit != om.rows[i].orbit,
                Err(_) => true,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::field;

    fn mat(f: &FieldDesc, v: &[i64]) -> FieldMatrix {
        FieldMatrix { rows: 2, cols: 2, data: v.iter().map(|&x| f.from_int(x)).collect() }
    }

    #[test]
    fn classification_of_sl2_elements() {
        let f = field(3, 1, 1).unwrap();
        assert_eq!(classify(&mat(&f, &[0, 0, 0, 0]), &f).0, OrbitType::Zero);
        assert_eq!(classify(&mat(&f, &[0, 1, 0, 0]), &f).0, OrbitType::RegularNilpotent);
        assert_eq!(classify(&mat(&f, &[1, 0, 0, -1]), &f).0, OrbitType::RegularSemisimple);
        // elliptic: x^2 + 1 is irreducible over F_3
        assert_eq!(classify(&mat(&f, &[0, 1, -1, 0]), &f).0, OrbitType::RegularSemisimple);
        assert_eq!(classify(&mat(&f, &[1, 0, 0, 1]), &f).0, OrbitType::Other);
    }

    #[test]
    fn nilpotent_labels_follow_square_classes() {
        let f = field(3, 1, 1).unwrap();
        let l = |v: &[i64]| sl2_nilpotent_label(&v.iter().map(|&x| f.from_int(x)).collect::<Vec<_>>(), &f);
        assert_eq!(l(&[0, 1, 0, 0]), "o1");
        assert_eq!(l(&[0, 2, 0, 0]), "o2");
        // [[0,0],[c,0]] is conjugate to [[0,-c],[0,0]]
        assert_eq!(l(&[0, 0, 2, 0]), "o1");
        assert_eq!(l(&[0, 0, 1, 0]), "o2");
    }
}
