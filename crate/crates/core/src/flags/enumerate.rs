//! Enumeration of `B_{u,w}(F_{q^m}) = B_u ∩ X_w`.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use super::embed::springer_u;
use super::flag::{cycle_perm, in_dl_variety, Flag};
use crate::algebra::embed::{subfield_embedding, SubfieldEmbedding};
use crate::algebra::field::{field, FieldDesc, Fq};
use crate::algebra::linalg::{Echelon, FieldMatrix};
use crate::error::{Error, Result};

/// Default bound on `[N]_{q^m}!` for the brute enumerator and on line counts.
pub const MAX_FLAGS: u128 = 10_000_000;

/// `V = F_{q^m}^{nr}` with the unipotent `u`.
pub struct FlagSpace {
    pub n: usize,
    pub r: usize,
    pub m: usize,
    pub field: Arc<FieldDesc>,
    pub emb: Arc<SubfieldEmbedding>,
    pub u: FieldMatrix,
    /// `u − 1`.
    pub nil: FieldMatrix,
}

impl FlagSpace {
    pub fn new(n: usize, r: usize, p: u32, k: usize, m: usize) -> Result<Self> {
        if n == 0 || r == 0 {
            return Err(Error::InvalidParameter("n and r must be positive".into()));
        }
        let field = field(p, k, m)?;
        let emb = subfield_embedding(p, k, m)?;
        let u = springer_u(n, r, &field);
        let nil = u.sub(&FieldMatrix::identity(n * r, &field), &field);
        Ok(FlagSpace { n, r, m, field, emb, u, nil })
    }

    pub fn dim(&self) -> usize {
        self.n * self.r
    }

    pub fn big_q(&self) -> u128 {
        self.field.size().unwrap_or(u128::MAX)
    }

    /// `[N]_Q! = ∏_{i=1}^{N} (Q^i − 1)/(Q − 1)`, saturating.
    pub fn flag_count(&self) -> u128 {
        let q = self.big_q();
        let mut total: u128 = 1;
        let mut level: u128 = 1;
        let mut pw: u128 = 1;
        for _ in 1..self.dim() {
            pw = pw.saturating_mul(q);
            level = level.saturating_add(pw);
            total = total.saturating_mul(level);
        }
        total
    }

    fn all_coeffs(&self) -> Vec<Fq> {
        (0..self.big_q()).map(|i| self.field.from_index(i)).collect()
    }

    fn rational_coeffs(&self) -> Vec<Fq> {
        let small = self.emb.small();
        (0..small.size().unwrap()).map(|i| self.emb.embed(small.from_index(i))).collect()
    }
}

/// Canonical next rows: vectors vanishing on the current pivots with leading
/// coefficient 1, coefficients drawn from `coeffs` (which contains 0 and 1).
fn next_rows(ech: &Echelon, dim: usize, coeffs: &[Fq], one: Fq, mut visit: impl FnMut(Vec<Fq>)) {
    let pivots = ech.pivots();
    let free: Vec<usize> = (0..dim).filter(|j| !pivots.contains(j)).collect();
    for (a, &lead) in free.iter().enumerate() {
        let tail = &free[a + 1..];
        let total = (coeffs.len() as u128).pow(tail.len() as u32);
        for idx in 0..total {
            let mut v = vec![Fq::ZERO; dim];
            v[lead] = one;
            let mut t = idx;
            for &j in tail {
                v[j] = coeffs[(t % coeffs.len() as u128) as usize];
                t /= coeffs.len() as u128;
            }
            visit(v);
        }
    }
}

/// Depth-first extension of a partial flag by `u`-stable pieces.
fn extend(
    space: &FlagSpace,
    coeffs: &[Fq],
    stable_only: bool,
    ech: &Echelon,
    rows: &mut Vec<Fq>,
    out: &mut dyn FnMut(&[Fq]),
) {
    let dim = space.dim();
    if ech.rank() == dim {
        out(rows);
        return;
    }
    let f = &space.field;
    next_rows(ech, dim, coeffs, f.one(), |v| {
        // V_{i+1} is u-stable iff (u − 1)v ∈ V_i, given V_i u-stable
        if stable_only && !ech.contains(&space.nil.mul_vec(&v, f), f) {
            return;
        }
        let mut e2 = ech.clone();
        e2.insert(&v, f);
        let len = rows.len();
        rows.extend_from_slice(&v);
        extend(space, coeffs, stable_only, &e2, rows, out);
        rows.truncate(len);
    });
}

/// Visit every complete flag over `F_{q^m}` (optionally only `u`-stable ones).
pub fn for_each_flag(space: &FlagSpace, stable_only: bool, max_flags: u128, mut visit: impl FnMut(Flag)) -> Result<()> {
    if space.flag_count() > max_flags {
        return Err(Error::GuardExceeded(format!("{} complete flags exceed {max_flags}", space.flag_count())));
    }
    let dim = space.dim();
    let coeffs = space.all_coeffs();
    let mut rows = Vec::with_capacity(dim * dim);
    extend(space, &coeffs, stable_only, &Echelon::new(dim), &mut rows, &mut |r| {
        visit(Flag::from_canonical_rows(dim, r.to_vec()))
    });
    Ok(())
}

/// All flags of `B_u` in relative position `w` with their Frobenius image, sorted.
pub fn enumerate_brute(space: &FlagSpace, w: &[usize], max_flags: u128) -> Result<Vec<Flag>> {
    let f = space.field.clone();
    let mut out = Vec::new();
    for_each_flag(space, true, max_flags, |fl| {
        if in_dl_variety(&fl, w, &f) {
            out.push(fl);
        }
    })?;
    out.sort();
    Ok(out)
}

/// Rational `u`-stable completions above a rational subspace, as tail rows.
fn rational_completions(space: &FlagSpace, base: &Echelon) -> Vec<Vec<Fq>> {
    let coeffs = space.rational_coeffs();
    let mut out = Vec::new();
    let mut rows = Vec::new();
    extend(space, &coeffs, true, base, &mut rows, &mut |r| out.push(r.to_vec()));
    out
}

/// `B_{u,w}` for `w` the cycle of length `z`: `V_1 = ⟨v⟩` with `v ∈ ker(u − 1)`,
/// `V_i = Σ_{a<i} F^a V_1` of dimension `i` up to `z`, `V_z` and everything
/// above rational and `u`-stable.
pub fn enumerate_cycle(space: &FlagSpace, z: usize, max_lines: u128) -> Result<Vec<Flag>> {
    let dim = space.dim();
    if z == 0 || z > dim {
        return Err(Error::InvalidParameter(format!("cycle length {z} outside [1, {dim}]")));
    }
    let n = space.n;
    let q = space.big_q();
    let lines = (0..n).fold(0u128, |acc, _| acc.saturating_mul(q).saturating_add(1));
    if lines > max_lines {
        return Err(Error::GuardExceeded(format!("{lines} lines exceed {max_lines}")));
    }
    let f = space.field.clone();
    let offset = (space.r - 1) * n;
    // lines of ker(u − 1) = ⟨x_1^{(r−1)}, …, x_n^{(r−1)}⟩
    let mut line_vectors = Vec::new();
    next_rows(&Echelon::new(n), n, &space.all_coeffs(), f.one(), |c| line_vectors.push(c));

    let prefixes: Vec<(Vec<Fq>, Vec<Vec<Fq>>)> = line_vectors
        .par_iter()
        .filter_map(|c| {
            let mut v = vec![Fq::ZERO; dim];
            v[offset..offset + n].copy_from_slice(c);
            let mut ech = Echelon::new(dim);
            let mut orbit = Vec::with_capacity(z);
            let mut cur = v;
            for _ in 0..z {
                if !ech.insert(&cur, &f) {
                    return None;
                }
                orbit.push(cur.clone());
                cur = cur.iter().map(|&x| f.frobenius(x)).collect();
            }
            // V_z must be Frobenius-stable
            if !ech.contains(&cur, &f) {
                return None;
            }
            Some((canonical_prefix(&orbit, dim, &f), ech.canonical_rows()))
        })
        .collect();

    let mut cache: HashMap<Vec<Vec<Fq>>, Arc<Vec<Vec<Fq>>>> = HashMap::new();
    let mut out = Vec::new();
    for (prefix, key) in prefixes {
        let tails = cache
            .entry(key.clone())
            .or_insert_with(|| {
                let mut base = Echelon::new(dim);
                for row in &key {
                    base.insert(row, &f);
                }
                Arc::new(rational_completions(space, &base))
            })
            .clone();
        for tail in tails.iter() {
            let mut rows = prefix.clone();
            rows.extend_from_slice(tail);
            out.push(Flag::from_canonical_rows(dim, rows));
        }
    }
    out.sort();
    Ok(out)
}

fn canonical_prefix(vectors: &[Vec<Fq>], dim: usize, f: &FieldDesc) -> Vec<Fq> {
    let mut ech = Echelon::new(dim);
    let mut rows = Vec::with_capacity(vectors.len() * dim);
    for v in vectors {
        let mut w = ech.reduce(v, f);
        let pc = w.iter().position(|x| !x.is_zero()).unwrap();
        let inv = f.inv(w[pc]).unwrap();
        for x in w.iter_mut() {
            *x = f.mul(*x, inv);
        }
        ech.insert(&w, f);
        rows.extend_from_slice(&w);
    }
    rows
}

/// `|Y_z(F_{q^m})|`: points of `P^{z−1}` on no `F_q`-rational hyperplane.
pub fn coxeter_count(z: usize, p: u32, k: usize, m: usize, max_points: u128) -> Result<u64> {
    if z < 2 {
        return Err(Error::InvalidParameter("Coxeter variety needs z ≥ 2".into()));
    }
    let big = field(p, k, m)?;
    let emb = subfield_embedding(p, k, m)?;
    let q = big.size().unwrap_or(u128::MAX);
    let points = (0..z).fold(0u128, |acc, _| acc.saturating_mul(q).saturating_add(1)) - 1;
    if points > max_points {
        return Err(Error::GuardExceeded(format!("{points} points exceed {max_points}")));
    }
    let all: Vec<Fq> = (0..q).map(|i| big.from_index(i)).collect();
    let small = emb.small();
    let rat: Vec<Fq> = (0..small.size().unwrap()).map(|i| emb.embed(small.from_index(i))).collect();
    let mut hyperplanes = Vec::new();
    next_rows(&Echelon::new(z), z, &rat, big.one(), |a| hyperplanes.push(a));
    let mut count = 0u64;
    next_rows(&Echelon::new(z), z, &all, big.one(), |v| {
        let avoids = hyperplanes.iter().all(|a| {
            let s = a.iter().zip(&v).fold(Fq::ZERO, |acc, (&x, &y)| big.add(acc, big.mul(x, y)));
            !s.is_zero()
        });
        count += avoids as u64;
    });
    Ok(count)
}

/// Shorthand: cycle position in `S_{nr}`.
pub fn cycle_position(space: &FlagSpace, z: usize) -> Vec<usize> {
    cycle_perm(z, space.dim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flags::flag::relpos;

    #[test]
    fn coxeter_counts() {
        assert_eq!(coxeter_count(2, 3, 1, 1, MAX_FLAGS).unwrap(), 0);
        assert_eq!(coxeter_count(2, 3, 1, 2, MAX_FLAGS).unwrap(), 6);
        assert_eq!(coxeter_count(2, 5, 1, 1, MAX_FLAGS).unwrap(), 0);
        assert_eq!(coxeter_count(2, 2, 1, 3, MAX_FLAGS).unwrap(), 6);
        // P^2(F_8): 73 points, 49 of them on the 7 rational lines
        assert_eq!(coxeter_count(3, 2, 1, 3, MAX_FLAGS).unwrap(), 24);
    }

    #[test]
    fn all_flags_partition_by_position() {
        // [4]_9! flags of F_9^4, every one in exactly one X_w
        let space = FlagSpace::new(2, 2, 3, 1, 2).unwrap();
        assert_eq!(space.flag_count(), 746_200);
        let f = space.field.clone();
        let mut total = 0u64;
        let mut by_w: HashMap<Vec<usize>, u64> = HashMap::new();
        for_each_flag(&space, false, MAX_FLAGS, |fl| {
            total += 1;
            *by_w.entry(relpos(&fl, &fl.frobenius(&f), &f)).or_default() += 1;
        })
        .unwrap();
        assert_eq!(total, 10 * 91 * 820);
        assert_eq!(by_w.values().sum::<u64>(), 746_200);
        // rational flags: [4]_3! = 4·13·40
        assert_eq!(by_w[&vec![0, 1, 2, 3]], 4 * 13 * 40);
    }

    #[test]
    fn brute_and_structured_agree() {
        for m in [1, 2] {
            let space = FlagSpace::new(2, 2, 3, 1, m).unwrap();
            for z in 1..=4 {
                let w = cycle_position(&space, z);
                let brute = enumerate_brute(&space, &w, MAX_FLAGS).unwrap();
                let structured = enumerate_cycle(&space, z, MAX_FLAGS).unwrap();
                assert_eq!(brute, structured, "m = {m}, z = {z}");
                if z > 2 {
                    assert!(brute.is_empty());
                }
            }
        }
    }

    #[test]
    fn stable_flags_are_stable() {
        let space = FlagSpace::new(2, 2, 3, 1, 1).unwrap();
        let f = space.field.clone();
        let mut count = 0;
        for_each_flag(&space, true, MAX_FLAGS, |fl| {
            assert!(fl.is_stable(&space.u, &f));
            count += 1;
        })
        .unwrap();
        let mut brute = 0;
        for_each_flag(&space, false, MAX_FLAGS, |fl| brute += fl.is_stable(&space.u, &f) as usize).unwrap();
        assert_eq!(count, brute);
    }
}
