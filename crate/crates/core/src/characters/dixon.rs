//! Dixon–Schneider character tables.
//!
//! Class sums act on the centre of the group algebra through the structure
//! constants `c_ijk`; the central characters `ω_χ(C_k) = |C_k|·χ(g_k)/χ(1)`
//! are the common eigenvectors.  Everything is computed in `F_ℓ` with
//! `ℓ ≡ 1 (mod e)` and lifted to `Z[ζ_e]` by counting eigenvalues.

use rayon::prelude::*;
use serde::Serialize;

use super::cyclo::{CycValue, Cyclotomic};
use crate::algebra::field::{is_prime, modinv, modpow, prime_factors};
use crate::algebra::linalg::ModMatrix;
use crate::error::{Error, Result};
use crate::groups::ClassTable;

/// Default guard on the number of classes.
pub const MAX_CLASSES: usize = 200;

/// Modular data shared by every value: exponent `e`, prime `ℓ`, and `θ` of
/// order `e` in `F_ℓ`.
#[derive(Clone, Debug, Serialize)]
pub struct DixonPrime {
    pub e: usize,
    pub ell: u64,
    pub theta: u64,
}

impl DixonPrime {
    /// Smallest prime `ℓ ≡ 1 (mod e)` with `ℓ > 2⌈√|G|⌉`; `θ` is the `(ℓ−1)/e`
    /// power of the smallest primitive root.
    pub fn choose(e: usize, group_order: u64) -> Result<Self> {
        let bound = 2 * ceil_sqrt(group_order);
        let e64 = e as u64;
        let mut ell = e64 + 1;
        while ell <= bound || !is_prime(ell) {
            ell = ell
                .checked_add(e64)
                .filter(|&x| x < 1 << 31)
                .ok_or_else(|| Error::Internal("no Dixon prime below 2^31".into()))?;
        }
        let factors = prime_factors((ell - 1) as u128);
        let g = (2..ell)
            .find(|&g| factors.iter().all(|&f| modpow(g, (ell - 1) / f as u64, ell) != 1))
            .ok_or_else(|| Error::Internal("no primitive root".into()))?;
        Ok(DixonPrime { e, ell, theta: modpow(g, (ell - 1) / e64, ell) })
    }

    /// `θ^a` for any integer exponent.
    pub fn zeta(&self, a: i64) -> u64 {
        modpow(self.theta, a.rem_euclid(self.e as i64) as u64, self.ell)
    }

    pub fn inv(&self, a: u64) -> u64 {
        modinv(a % self.ell, self.ell)
    }
}

fn ceil_sqrt(n: u64) -> u64 {
    let mut s = (n as f64).sqrt() as u64;
    while s * s < n {
        s += 1;
    }
    while s > 0 && (s - 1) * (s - 1) >= n {
        s -= 1;
    }
    s
}

fn lcm(a: u64, b: u64) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// Complete table of irreducible characters.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub prime: DixonPrime,
    pub cyclo: Cyclotomic,
    pub group_order: u64,
    pub sizes: Vec<u64>,
    pub inverse_class: Vec<usize>,
    /// `power_map[k][j]` = class of `g_k^j`, `0 ≤ j < e`.
    pub power_map: Vec<Vec<usize>>,
    pub degrees: Vec<u64>,
    pub rows: Vec<Vec<CycValue>>,
}

/// `c[(i·h + j)·h + k] = #{x ∈ C_i : x⁻¹·g_k ∈ C_j}`.
fn structure_constants(ct: &ClassTable) -> Vec<u32> {
    let gt = ct.group();
    let h = ct.len();
    let per_k: Vec<Vec<u32>> = (0..h)
        .into_par_iter()
        .map(|k| {
            let z = ct.rep(k);
            let mut counts = vec![0u32; h * h];
            for x in 0..gt.order() {
                let y = gt.mul(gt.inv(x), z);
                counts[ct.class_of(x) * h + ct.class_of(y)] += 1;
            }
            counts
        })
        .collect();
    let mut c = vec![0u32; h * h * h];
    for (k, counts) in per_k.into_iter().enumerate() {
        for (ij, v) in counts.into_iter().enumerate() {
            c[ij * h + k] = v;
        }
    }
    c
}

/// Split `F_ℓ^h` into common eigenlines of the given commuting matrices.
fn common_eigenvectors(mats: &[ModMatrix], h: usize, ell: u64) -> Result<Vec<Vec<u64>>> {
    let mut spaces: Vec<Vec<Vec<u64>>> = vec![(0..h)
        .map(|i| {
            let mut v = vec![0u64; h];
            v[i] = 1;
            v
        })
        .collect()];
    for m in mats {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let mut next = Vec::new();
        for basis in spaces {
            if basis.len() == 1 {
                next.push(basis);
                continue;
            }
            let s = basis.len();
            let pivots: Vec<usize> = basis.iter().map(|b| b.iter().position(|&x| x != 0).unwrap()).collect();
            let mut a = ModMatrix::zeros(s, s, ell);
            for (j, b) in basis.iter().enumerate() {
                for (l, &pl) in pivots.iter().enumerate() {
                    let v: u64 = (0..h).map(|t| m.get(pl, t) * b[t] % ell).sum::<u64>() % ell;
                    a.set(l, j, v);
                }
            }
            let cp = a.charpoly();
            let roots: Vec<u64> = (0..ell)
                .filter(|&x| cp.iter().rev().fold(0u64, |acc, &c| (acc * x + c) % ell) == 0)
                .collect();
            let mut total = 0;
            for lam in roots {
                let mut shifted = a.clone();
                for i in 0..s {
                    shifted.set(i, i, (shifted.get(i, i) + ell - lam) % ell);
                }
                let kern = shifted.kernel();
                total += kern.len();
                let mut sub = ModMatrix::zeros(kern.len(), h, ell);
                for (row, cvec) in kern.iter().enumerate() {
                    for (l, b) in basis.iter().enumerate() {
                        if cvec[l] == 0 {
                            continue;
                        }
                        for t in 0..h {
                            sub.set(row, t, (sub.get(row, t) + cvec[l] * b[t]) % ell);
                        }
                    }
                }
                let rank = sub.rref().len();
                next.push((0..rank).map(|r| sub.row(r).to_vec()).collect());
            }
            if total != s {
                return Err(Error::Internal("class sum matrix is not diagonalisable mod ℓ".into()));
            }
        }
        spaces = next;
    }
    if spaces.iter().any(|s| s.len() != 1) {
        return Err(Error::Internal("class sums do not separate the characters".into()));
    }
    Ok(spaces.into_iter().map(|mut s| s.pop().unwrap()).collect())
}

pub fn dixon_table(ct: &ClassTable, max_classes: usize) -> Result<CharacterTable> {
    let h = ct.len();
    if h > max_classes {
        return Err(Error::GuardExceeded(format!("{h} classes exceed the limit {max_classes}")));
    }
    let order = ct.group().order() as u64;
    let e = (0..h).map(|c| ct.element_order(c)).fold(1, lcm) as usize;
    let prime = DixonPrime::choose(e, order)?;
    let ell = prime.ell;
    let c = structure_constants(ct);
    let id = ct.identity_class();
    let mats: Vec<ModMatrix> = (0..h)
        .filter(|&i| i != id)
        .map(|i| {
            let mut m = ModMatrix::zeros(h, h, ell);
            for j in 0..h {
                for k in 0..h {
                    m.set(j, k, c[(i * h + j) * h + k] as u64 % ell);
                }
            }
            m
        })
        .collect();
    let vecs = common_eigenvectors(&mats, h, ell)?;
    let sizes: Vec<u64> = ct.sizes().into_iter().map(|s| s as u64).collect();
    let inverse_class: Vec<usize> = (0..h).map(|k| ct.inverse_class(k)).collect();
    let gt = ct.group();
    let power_map: Vec<Vec<usize>> = (0..h)
        .into_par_iter()
        .map(|k| {
            let g = ct.rep(k);
            let mut acc = gt.identity();
            (0..e)
                .map(|_| {
                    let cls = ct.class_of(acc);
                    acc = gt.mul(acc, g);
                    cls
                })
                .collect()
        })
        .collect();
    let cyclo = Cyclotomic::new(e);
    let isqrt = ceil_sqrt(order);
    let mut rows: Vec<(u64, Vec<CycValue>)> = vecs
        .into_par_iter()
        .map(|v| {
            let scale = prime.inv(v[id]);
            let omega: Vec<u64> = v.iter().map(|&x| x * scale % ell).collect();
            let s: u64 = (0..h)
                .map(|k| omega[k] * omega[inverse_class[k]] % ell * prime.inv(sizes[k]) % ell)
                .sum::<u64>()
                % ell;
            let d2 = order % ell * prime.inv(s) % ell;
            let d = (1..=isqrt)
                .find(|&d| d * d % ell == d2)
                .ok_or_else(|| Error::Internal("degree square has no small root".into()))?;
            if !order.is_multiple_of(d) {
                return Err(Error::Internal(format!("degree {d} does not divide |G|")));
            }
            let vals: Vec<u64> = (0..h).map(|k| omega[k] * d % ell * prime.inv(sizes[k]) % ell).collect();
            let einv = prime.inv(e as u64);
            let row = (0..h)
                .map(|k| {
                    let mut mult = vec![0u32; e];
                    for (a, slot) in mult.iter_mut().enumerate() {
                        let s: u64 = (0..e)
                            .map(|j| vals[power_map[k][j]] * prime.zeta(-((a * j) as i64)) % ell)
                            .sum::<u64>()
                            % ell;
                        let m = s * einv % ell;
                        if m > d {
                            return Err(Error::Internal("eigenvalue multiplicity out of range".into()));
                        }
                        *slot = m as u32;
                    }
                    if mult.iter().map(|&m| m as u64).sum::<u64>() != d {
                        return Err(Error::Internal("multiplicities do not sum to the degree".into()));
                    }
                    let back = mult.iter().enumerate().map(|(a, &m)| m as u64 * prime.zeta(a as i64) % ell).sum::<u64>() % ell;
                    if back != vals[k] {
                        return Err(Error::Internal("lifted value does not reproduce the image".into()));
                    }
                    Ok(CycValue { cyc: cyclo.reduce_u32(&mult), mult, modimage: vals[k] })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((d, row))
        })
        .collect::<Result<Vec<_>>>()?;
    // trivial character first, then by degree and values
    rows.sort_by(|a, b| {
        let triv = |r: &(u64, Vec<CycValue>)| r.0 != 1 || r.1.iter().any(|v| v.modimage != 1);
        (a.0, triv(a), &a.1.iter().map(|v| &v.mult).collect::<Vec<_>>())
            .cmp(&(b.0, triv(b), &b.1.iter().map(|v| &v.mult).collect::<Vec<_>>()))
    });
    let degrees = rows.iter().map(|r| r.0).collect();
    let rows = rows.into_iter().map(|r| r.1).collect();
    Ok(CharacterTable { prime, cyclo, group_order: order, sizes, inverse_class, power_map, degrees, rows })
}

impl CharacterTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn num_classes(&self) -> usize {
        self.sizes.len()
    }

    pub fn mod_row(&self, i: usize) -> Vec<u64> {
        self.rows[i].iter().map(|v| v.modimage).collect()
    }

    /// `⟨a, b⟩ = |G|⁻¹·Σ_c |C|·a(c)·b(c⁻¹)` in `F_ℓ`.
    pub fn inner_mod(&self, a: &[u64], b: &[u64]) -> u64 {
        let ell = self.prime.ell;
        let s: u64 = (0..self.num_classes())
            .map(|c| self.sizes[c] % ell * a[c] % ell * b[self.inverse_class[c]] % ell)
            .sum::<u64>()
            % ell;
        s * self.prime.inv(self.group_order) % ell
    }

    pub fn row_orthogonality(&self) -> bool {
        let rows: Vec<Vec<u64>> = (0..self.len()).map(|i| self.mod_row(i)).collect();
        (0..self.len()).all(|i| (0..self.len()).all(|j| self.inner_mod(&rows[i], &rows[j]) == (i == j) as u64))
    }

    pub fn column_orthogonality(&self) -> bool {
        let ell = self.prime.ell;
        let h = self.num_classes();
        (0..h).all(|c| {
            (0..h).all(|c2| {
                let s: u64 = (0..self.len())
                    .map(|i| self.rows[i][c].modimage * self.rows[i][self.inverse_class[c2]].modimage % ell)
                    .sum::<u64>()
                    % ell;
                let expect = if c == c2 { (self.group_order / self.sizes[c]) % ell } else { 0 };
                s == expect
            })
        })
    }

    /// Whether two class functions given by multiplicity rows have equal values everywhere.
    pub fn rows_equal(&self, a: &[CycValue], b: &[CycValue]) -> bool {
        a.iter().zip(b).all(|(x, y)| x.cyc == y.cyc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{Family, GroupSpec, GroupTable, DEFAULT_MAX_ORDER};
    use std::sync::Arc;

    fn classes(family: Family, p: u32, r: usize) -> ClassTable {
        let spec = GroupSpec::new(family, 2, p, 1, r).unwrap();
        ClassTable::build(Arc::new(GroupTable::build(spec, DEFAULT_MAX_ORDER).unwrap()))
    }

    #[test]
    fn dixon_prime_properties() {
        let dp = DixonPrime::choose(12, 24).unwrap();
        assert_eq!(dp.ell % 12, 1);
        assert!(dp.ell > 2 * 5);
        assert_eq!(modpow(dp.theta, 12, dp.ell), 1);
        assert!([2, 3, 4, 6].iter().all(|&d| modpow(dp.theta, 12 / d * (d - 1), dp.ell) != 1 || d == 1));
        assert_eq!(ceil_sqrt(648), 26);
        assert_eq!(ceil_sqrt(625), 25);
    }

    #[test]
    fn sl2_f3_degrees() {
        let ct = classes(Family::SL, 3, 1);
        let tab = dixon_table(&ct, MAX_CLASSES).unwrap();
        assert_eq!(tab.degrees, vec![1, 1, 1, 2, 2, 2, 3]);
        assert!(tab.row_orthogonality());
        assert!(tab.column_orthogonality());
        assert!(tab.rows[0].iter().all(|v| v.modimage == 1));
    }

    #[test]
    fn sl2_f3_degrees_from_regular_representation() {
        // oracle: the regular character decomposes as Σ χ(1)·χ, so
        // ⟨reg, χ⟩ = χ(1) for every row, and Σ χ(1)^2 = |G|
        let ct = classes(Family::SL, 3, 1);
        let tab = dixon_table(&ct, MAX_CLASSES).unwrap();
        let mut reg = vec![0u64; ct.len()];
        reg[ct.identity_class()] = 24;
        for i in 0..tab.len() {
            assert_eq!(tab.inner_mod(&reg, &tab.mod_row(i)), tab.degrees[i] % tab.prime.ell);
        }
        assert_eq!(tab.degrees.iter().map(|d| d * d).sum::<u64>(), 24);
    }
}
