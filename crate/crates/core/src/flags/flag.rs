//! Complete flags in `F^N` and their relative position.
//!
//! A flag is stored by `N` rows; `V_i` is the span of the first `i`.  The
//! canonical row `i` is the reduction of any vector of `V_i \ V_{i−1}` against
//! the reduced echelon basis of `V_{i−1}`, scaled to leading coefficient 1.

use crate::algebra::field::{FieldDesc, Fq};
use crate::algebra::linalg::{Echelon, FieldMatrix};

/// A permutation of `0..N` in one-line notation.
pub type Perm = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flag {
    dim: usize,
    rows: Vec<Fq>,
}

fn normalize(w: &mut [Fq], f: &FieldDesc) -> bool {
    let Some(pc) = w.iter().position(|x| !x.is_zero()) else {
        return false;
    };
    let inv = f.inv(w[pc]).unwrap();
    for x in w.iter_mut() {
        *x = f.mul(*x, inv);
    }
    true
}

impl Flag {
    /// Canonical flag whose `V_i` is spanned by the first `i` of `vectors`;
    /// `None` if they are dependent.
    pub fn from_vectors(vectors: &[Vec<Fq>], f: &FieldDesc) -> Option<Flag> {
        let dim = vectors.first()?.len();
        if vectors.len() != dim {
            return None;
        }
        let mut ech = Echelon::new(dim);
        let mut rows = Vec::with_capacity(dim * dim);
        for v in vectors {
            let mut w = ech.reduce(v, f);
            if !normalize(&mut w, f) {
                return None;
            }
            ech.insert(&w, f);
            rows.extend_from_slice(&w);
        }
        Some(Flag { dim, rows })
    }

    /// Rows already in canonical form (as produced by the enumerators).
    pub(crate) fn from_canonical_rows(dim: usize, rows: Vec<Fq>) -> Flag {
        debug_assert_eq!(rows.len(), dim * dim);
        Flag { dim, rows }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[Fq] {
        &self.rows[i * self.dim..(i + 1) * self.dim]
    }

    pub fn vectors(&self) -> Vec<Vec<Fq>> {
        (0..self.dim).map(|i| self.row(i).to_vec()).collect()
    }

    /// Reduced echelon basis of `V_i`.
    pub fn piece(&self, i: usize, f: &FieldDesc) -> Echelon {
        let mut e = Echelon::new(self.dim);
        for j in 0..i {
            e.insert(self.row(j), f);
        }
        e
    }

    pub fn canonicalize(&self, f: &FieldDesc) -> Flag {
        Flag::from_vectors(&self.vectors(), f).expect("flag rows are independent")
    }

    /// `g·F`, with `g` acting on column vectors.
    pub fn apply(&self, g: &FieldMatrix, f: &FieldDesc) -> Flag {
        let vs: Vec<Vec<Fq>> = (0..self.dim).map(|i| g.mul_vec(self.row(i), f)).collect();
        Flag::from_vectors(&vs, f).expect("invertible matrix")
    }

    /// Entrywise `q`-power Frobenius.
    pub fn frobenius(&self, f: &FieldDesc) -> Flag {
        let vs: Vec<Vec<Fq>> = (0..self.dim).map(|i| self.row(i).iter().map(|&x| f.frobenius(x)).collect()).collect();
        Flag::from_vectors(&vs, f).unwrap()
    }

    pub fn is_rational(&self, f: &FieldDesc) -> bool {
        self.rows.iter().all(|&x| f.frobenius(x) == x)
    }

    /// Every `V_i` is stable under `u` (Springer fibre membership).
    pub fn is_stable(&self, u: &FieldMatrix, f: &FieldDesc) -> bool {
        let mut e = Echelon::new(self.dim);
        (0..self.dim).all(|i| {
            e.insert(self.row(i), f);
            e.contains(&u.mul_vec(self.row(i), f), f)
        })
    }

    /// Nested coefficient lists for export.
    pub fn to_nested(&self, f: &FieldDesc) -> Vec<Vec<Vec<u8>>> {
        (0..self.dim).map(|i| self.row(i).iter().map(|x| x.coeffs(f.degree()).to_vec()).collect()).collect()
    }
}

/// `d[i][j] = dim(V_i ∩ V′_j)` for `0 ≤ i, j ≤ N`.
pub fn intersection_dims(a: &Flag, b: &Flag, f: &FieldDesc) -> Vec<Vec<usize>> {
    let n = a.dim;
    let mut d = vec![vec![0usize; n + 1]; n + 1];
    for i in 1..=n {
        let mut e = a.piece(i, f);
        for j in 1..=n {
            e.insert(b.row(j - 1), f);
            d[i][j] = i + j - e.rank();
        }
    }
    d
}

/// `w(i) = min{j : d_{ij} > d_{i−1,j}}`.
pub fn relpos(a: &Flag, b: &Flag, f: &FieldDesc) -> Perm {
    let d = intersection_dims(a, b, f);
    let n = a.dim;
    (1..=n).map(|i| (1..=n).find(|&j| d[i][j] > d[i - 1][j]).unwrap() - 1).collect()
}

/// Deligne–Lusztig membership: `relpos(F, F(F)) = w`.
pub fn in_dl_variety(flag: &Flag, w: &[usize], f: &FieldDesc) -> bool {
    relpos(flag, &flag.frobenius(f), f) == w
}

pub fn inverse_perm(w: &[usize]) -> Perm {
    let mut inv = vec![0; w.len()];
    for (i, &j) in w.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

/// Position of the cycle `(1,…,z)` in `S_N`, in the convention where the
/// flags `V_i = V_1 + F V_1 + … + F^{i−1} V_1` (`i ≤ z`) have this relative
/// position with their Frobenius image: `w(1) = z`, `w(i) = i − 1` for
/// `2 ≤ i ≤ z`, identity above `z`.
pub fn cycle_perm(z: usize, n: usize) -> Perm {
    (0..n)
        .map(|i| match i {
            0 => z - 1,
            i if i < z => i - 1,
            i => i,
        })
        .collect()
}

/// Standard coordinate flag permuted by `w`: `V_i = ⟨e_{w(0)}, …, e_{w(i−1)}⟩`.
pub fn coordinate_flag(w: &[usize], f: &FieldDesc) -> Flag {
    let n = w.len();
    let vs: Vec<Vec<Fq>> = w
        .iter()
        .map(|&j| {
            let mut v = vec![Fq::ZERO; n];
            v[j] = f.one();
            v
        })
        .collect();
    Flag::from_vectors(&vs, f).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::field;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_flag(rng: &mut ChaCha8Rng, n: usize, f: &FieldDesc) -> Flag {
        loop {
            let vs: Vec<Vec<Fq>> =
                (0..n).map(|_| (0..n).map(|_| f.from_index(rng.gen_range(0..f.size().unwrap()))).collect()).collect();
            if let Some(fl) = Flag::from_vectors(&vs, f) {
                return fl;
            }
        }
    }

    #[test]
    fn canonical_form_is_idempotent_and_basis_free() {
        let f = field(3, 1, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let fl = random_flag(&mut rng, 4, &f);
            assert_eq!(fl.canonicalize(&f), fl);
            // replace each row by itself plus a combination of earlier rows, scaled
            let mut vs = fl.vectors();
            for i in 1..4 {
                let c = f.from_index(rng.gen_range(1..9));
                let a = f.from_index(rng.gen_range(0..9));
                let prev = vs[i - 1].clone();
                vs[i] = vs[i].iter().zip(&prev).map(|(&x, &y)| f.add(f.mul(c, x), f.mul(a, y))).collect();
            }
            assert_eq!(Flag::from_vectors(&vs, &f).unwrap(), fl);
        }
    }

    #[test]
    fn relpos_basics() {
        let f = field(3, 1, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let id: Perm = (0..4).collect();
        for _ in 0..50 {
            let a = random_flag(&mut rng, 4, &f);
            let b = random_flag(&mut rng, 4, &f);
            assert_eq!(relpos(&a, &a, &f), id);
            assert_eq!(relpos(&a, &b, &f), inverse_perm(&relpos(&b, &a, &f)));
            assert_eq!(relpos(&a, &b, &f) == id, a == b);
        }
        // coordinate flag against its permuted copy
        let w: Perm = vec![2, 0, 3, 1];
        let std = coordinate_flag(&id, &f);
        let rel = relpos(&std, &coordinate_flag(&w, &f), &f);
        assert_eq!(rel, inverse_perm(&w));
        assert_eq!(relpos(&coordinate_flag(&w, &f), &std, &f), w);
    }

    #[test]
    fn rational_flags_have_trivial_position() {
        let f = field(3, 1, 2).unwrap();
        let id: Perm = (0..3).collect();
        let fl = coordinate_flag(&[1, 2, 0], &f);
        assert!(fl.is_rational(&f));
        assert!(in_dl_variety(&fl, &id, &f));
        assert!(!in_dl_variety(&fl, &cycle_perm(2, 3), &f));
    }

    #[test]
    fn coxeter_type_flag_has_cycle_position() {
        // V_1 = ⟨(1, a)⟩ with a ∉ F_3: V_1 + F V_1 = F_9^2
        let f = field(3, 1, 2).unwrap();
        let a = f.gen();
        let v = vec![f.one(), a, Fq::ZERO];
        let fv: Vec<Fq> = v.iter().map(|&x| f.frobenius(x)).collect();
        let mut e3 = vec![Fq::ZERO; 3];
        e3[2] = f.one();
        let fl = Flag::from_vectors(&[v, fv, e3], &f).unwrap();
        assert!(in_dl_variety(&fl, &cycle_perm(2, 3), &f));
        assert_eq!(cycle_perm(3, 4), vec![2, 0, 1, 3]);
    }
}
