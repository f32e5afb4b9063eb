//! Kernel of the `F_q`-linear map `h ↦ F(h) − h·g` on `M_n(F_{q^m}[π]/π^r)`.
//!
//! The equation decouples over the rows of `h`, so one row system of
//! `F_p`-dimension `n·r·k·m` is solved and the full kernel is the direct sum
//! of `n` copies of it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::{FieldDesc, Fq};
use super::linalg::ModMatrix;
use super::trunc::{trunc_mul_acc, TruncMatrix};
use crate::error::{Error, Result};

/// Exhaustive scan limit for the invertible-element search.
pub const SCAN_LIMIT: u128 = 1_000_000;
/// Retry cap for the randomized search.
pub const RANDOM_TRIES: usize = 10_000;

#[derive(Clone, Debug)]
pub struct SemilinearKernel {
    n: usize,
    r: usize,
    p: u32,
    /// `F_p`-basis of row solutions, each of length `n·r` (entry, then `π`-power).
    row_basis: Vec<Vec<Fq>>,
}

/// `F_p`-coordinates of a row vector: `((j·r) + t)·D + c`.
fn row_to_vec(row: &[Fq], d: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(row.len() * d);
    for x in row {
        out.extend(x.coeffs(d).iter().map(|&c| c as u64));
    }
    out
}

fn row_apply(row: &[Fq], g: &TruncMatrix, f: &FieldDesc) -> Vec<Fq> {
    let n = g.n();
    let r = g.r();
    let mut out = vec![Fq::ZERO; n * r];
    for jj in 0..n {
        let dst = &mut out[jj * r..(jj + 1) * r];
        for j in 0..n {
            let gj: Vec<Fq> = (0..r).map(|t| g.coeff(j, jj, t)).collect();
            trunc_mul_acc(dst, &row[j * r..(j + 1) * r], &gj, f);
        }
    }
    out
}

/// Solve `F(h) = h·g` for `h` over the ring of `g` (`f` is its coefficient field).
pub fn solve_semilinear(g: &TruncMatrix, f: &FieldDesc) -> Result<SemilinearKernel> {
    if !g.is_invertible(f) {
        return Err(Error::NotInvertible("Lang equation needs an invertible g".into()));
    }
    let n = g.n();
    let r = g.r();
    let d = f.degree();
    let dim = n * r * d;
    let p = f.p();
    let mut sys = ModMatrix::zeros(dim, dim, p as u64);
    for col in 0..dim {
        let mut row = vec![Fq::ZERO; n * r];
        row[col / d] = f.basis(col % d);
        let fr: Vec<Fq> = row.iter().map(|&x| f.frobenius(x)).collect();
        let hg = row_apply(&row, g, f);
        let img: Vec<Fq> = fr.iter().zip(&hg).map(|(&a, &b)| f.sub(a, b)).collect();
        for (i, v) in row_to_vec(&img, d).into_iter().enumerate() {
            sys.set(i, col, v);
        }
    }
    let kern = sys.kernel();
    let row_basis = kern
        .into_iter()
        .map(|v| {
            (0..n * r)
                .map(|s| {
                    let c: Vec<u8> = v[s * d..(s + 1) * d].iter().map(|&x| x as u8).collect();
                    Fq::from_coeffs(&c)
                })
                .collect()
        })
        .collect();
    Ok(SemilinearKernel { n, r, p, row_basis })
}

impl SemilinearKernel {
    /// `F_p`-dimension of the full kernel.
    pub fn dim_fp(&self) -> usize {
        self.n * self.row_basis.len()
    }

    pub fn row_basis(&self) -> &[Vec<Fq>] {
        &self.row_basis
    }

    /// `F_p`-basis of the kernel as matrices, row index major.
    pub fn basis(&self) -> Vec<TruncMatrix> {
        let mut out = Vec::with_capacity(self.dim_fp());
        for i in 0..self.n {
            for b in &self.row_basis {
                let mut m = TruncMatrix::zero(self.n, self.r);
                for j in 0..self.n {
                    for t in 0..self.r {
                        m.set_coeff(i, j, t, b[j * self.r + t]);
                    }
                }
                out.push(m);
            }
        }
        out
    }

    /// `Σ coeffs[i·s + b]·(row basis b placed in row i)`.
    pub fn combine(&self, coeffs: &[u32], f: &FieldDesc) -> TruncMatrix {
        let s = self.row_basis.len();
        let mut m = TruncMatrix::zero(self.n, self.r);
        for i in 0..self.n {
            for (b, vec) in self.row_basis.iter().enumerate() {
                let c = coeffs[i * s + b];
                if c == 0 {
                    continue;
                }
                for j in 0..self.n {
                    for t in 0..self.r {
                        let v = f.add(m.coeff(i, j, t), f.scale(vec[j * self.r + t], c));
                        m.set_coeff(i, j, t, v);
                    }
                }
            }
        }
        m
    }

    /// The `skip`-th invertible kernel element (0-based) in the search order:
    /// lexicographic over `F_p`-coordinates when the kernel has at most
    /// [`SCAN_LIMIT`] elements, seeded random combinations otherwise.
    pub fn invertible_element(&self, skip: usize, seed: u64, f: &FieldDesc) -> Result<TruncMatrix> {
        let dim = self.dim_fp();
        let p = self.p as u128;
        let total = p.checked_pow(dim as u32);
        let mut seen = 0usize;
        match total {
            Some(t) if t <= SCAN_LIMIT => {
                let mut coeffs = vec![0u32; dim];
                for idx in 0..t {
                    let mut x = idx;
                    for c in coeffs.iter_mut().rev() {
                        *c = (x % p) as u32;
                        x /= p;
                    }
                    let h = self.combine(&coeffs, f);
                    if h.is_invertible(f) {
                        if seen == skip {
                            return Ok(h);
                        }
                        seen += 1;
                    }
                }
            }
            _ => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut coeffs = vec![0u32; dim];
                for _ in 0..RANDOM_TRIES {
                    for c in coeffs.iter_mut() {
                        *c = rng.gen_range(0..self.p);
                    }
                    let h = self.combine(&coeffs, f);
                    if h.is_invertible(f) {
                        if seen == skip {
                            return Ok(h);
                        }
                        seen += 1;
                    }
                }
            }
        }
        Err(Error::Internal("no invertible element in the Lang kernel".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::field;

    #[test]
    fn identity_gives_full_base_ring() {
        let f = field(3, 1, 1).unwrap();
        for (n, r) in [(1, 1), (2, 1), (2, 2), (3, 2)] {
            let k = solve_semilinear(&TruncMatrix::identity(n, r, &f), &f).unwrap();
            assert_eq!(k.dim_fp(), n * n * r);
        }
    }

    #[test]
    fn square_root_of_minus_one() {
        // h^3 = -h in F_9: the solutions are the F_3-multiples of a square root of -1
        let f = field(3, 1, 2).unwrap();
        let g = TruncMatrix::from_constants(1, 1, &[f.from_int(-1)]);
        let k = solve_semilinear(&g, &f).unwrap();
        assert_eq!(k.dim_fp(), 1);
        let h = k.basis()[0].coeff(0, 0, 0);
        assert_eq!(f.mul(h, h), f.from_int(-1));
        let brute = f.elements().unwrap().into_iter().filter(|&x| f.pow(x, 3) == f.neg(x)).count();
        assert_eq!(brute, 3);
    }

    #[test]
    fn solutions_satisfy_the_equation() {
        // g has order 2, so solutions live over F_9[ε]
        let f = field(3, 1, 2).unwrap();
        let g = TruncMatrix::from_layers(
            2,
            &[
                vec![f.from_int(0), f.from_int(1), f.from_int(1), f.from_int(0)],
                vec![f.from_int(1), f.from_int(0), f.from_int(0), f.from_int(-1)],
            ],
        );
        assert!(g.mul(&g, &f).is_identity(&f));
        let k = solve_semilinear(&g, &f).unwrap();
        for h in k.basis() {
            assert_eq!(h.frobenius(&f), h.mul(&g, &f));
        }
        let h = k.invertible_element(0, 7, &f).unwrap();
        assert!(h.is_invertible(&f));
        assert_eq!(h.frobenius(&f), h.mul(&g, &f));
    }

    #[test]
    fn rejects_singular_input() {
        let f = field(3, 1, 1).unwrap();
        assert!(solve_semilinear(&TruncMatrix::zero(2, 2), &f).is_err());
    }
}
