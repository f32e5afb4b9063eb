//! The ring injection `M_n(F[π]/π^r) ↪ M_{nr}(F)` and the unipotent `u`.
//!
//! Basis vector `x_i^{(t)}` (`1 ≤ i ≤ n`, `0 ≤ t < r`) has index `t·n + i − 1`;
//! `π` shifts `x_i^{(t)}` to `x_i^{(t+1)}`.

use crate::algebra::field::{FieldDesc, Fq};
use crate::algebra::linalg::FieldMatrix;
use crate::algebra::trunc::{TruncElem, TruncMatrix};

/// Block lower-triangular Toeplitz image: block `(s, t)` is `A_{s−t}` for `s ≥ t`.
pub fn iota(a: &TruncMatrix) -> FieldMatrix {
    let n = a.n();
    let r = a.r();
    let big = n * r;
    let mut out = FieldMatrix::zeros(big, big);
    for s in 0..r {
        for t in 0..=s {
            for i in 0..n {
                for j in 0..n {
                    out.set(s * n + i, t * n + j, a.coeff(i, j, s - t));
                }
            }
        }
    }
    out
}

/// `u = ι((1 + π)·I)`: identity blocks on the diagonal and first subdiagonal.
pub fn springer_u(n: usize, r: usize, f: &FieldDesc) -> FieldMatrix {
    let mut one_plus_pi = TruncElem::one(r, f);
    if r > 1 {
        one_plus_pi.c[1] = f.one();
    }
    iota(&TruncMatrix::scalar(&one_plus_pi, n))
}

/// Basis of `{X : X·u = u·X}` in `M_N(F)`, as row-major vectors.
pub fn commutant_basis(u: &FieldMatrix, f: &FieldDesc) -> Vec<Vec<Fq>> {
    let big = u.rows;
    let dim = big * big;
    let mut sys = FieldMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut x = FieldMatrix::zeros(big, big);
        x.data[col] = f.one();
        let d = x.mul(u, f).sub(&u.mul(&x, f), f);
        for (row, &v) in d.data.iter().enumerate() {
            sys.set(row, col, v);
        }
    }
    sys.kernel(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::field;

    #[test]
    fn identity_and_unipotence() {
        let f = field(3, 1, 1).unwrap();
        for (n, r) in [(1, 1), (2, 2), (3, 2), (2, 3)] {
            assert_eq!(iota(&TruncMatrix::identity(n, r, &f)), FieldMatrix::identity(n * r, &f));
            let u = springer_u(n, r, &f);
            let nil = u.sub(&FieldMatrix::identity(n * r, &f), &f);
            let mut acc = FieldMatrix::identity(n * r, &f);
            for _ in 0..r {
                acc = acc.mul(&nil, &f);
            }
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn commutant_is_the_image() {
        let f = field(3, 1, 1).unwrap();
        let (n, r) = (2, 2);
        let u = springer_u(n, r, &f);
        let basis = commutant_basis(&u, &f);
        assert_eq!(basis.len(), n * n * r);
        for i in 0..n {
            for j in 0..n {
                for t in 0..r {
                    let mut a = TruncMatrix::zero(n, r);
                    a.set_coeff(i, j, t, f.one());
                    let x = iota(&a);
                    assert_eq!(x.mul(&u, &f), u.mul(&x, &f));
                }
            }
        }
    }
}
