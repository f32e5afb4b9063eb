//! Exact values in `Z[ζ_e]`: integer vectors reduced modulo the cyclotomic
//! polynomial `Φ_e`, plus the modular image through `ζ_e ↦ θ ∈ F_ℓ`.

use serde::Serialize;

/// Cyclotomic polynomial `Φ_e` over `Z`, low degree first.
pub fn cyclotomic_poly(e: usize) -> Vec<i64> {
    // x^e - 1 divided by Φ_d for every proper divisor d
    let mut num = vec![0i64; e + 1];
    num[0] = -1;
    num[e] = 1;
    for d in (1..e).filter(|d| e.is_multiple_of(*d)) {
        num = div_exact(&num, &cyclotomic_poly(d));
    }
    num
}

fn div_exact(a: &[i64], b: &[i64]) -> Vec<i64> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![0i64; a.len() - db];
    for i in (db..a.len()).rev() {
        let c = r[i] / b[db];
        q[i - db] = c;
        for j in 0..=db {
            r[i - db + j] -= c * b[j];
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

/// Reduction context for `Z[ζ_e] = Z[x]/Φ_e`.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    e: usize,
    phi: Vec<i64>,
}

impl Cyclotomic {
    pub fn new(e: usize) -> Self {
        Cyclotomic { e, phi: cyclotomic_poly(e) }
    }

    pub fn e(&self) -> usize {
        self.e
    }

    /// Degree `φ(e)` of the reduced representation.
    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    /// Canonical form of `Σ counts[i]·ζ^i` (`counts.len() ≤ e`).
    pub fn reduce(&self, counts: &[i64]) -> Vec<i64> {
        let d = self.degree();
        let mut r = counts.to_vec();
        for i in (d..r.len()).rev() {
            let c = r[i];
            if c == 0 {
                continue;
            }
            for j in 0..=d {
                r[i - d + j] -= c * self.phi[j];
            }
        }
        r.resize(d, 0);
        r
    }

    pub fn reduce_u32(&self, counts: &[u32]) -> Vec<i64> {
        self.reduce(&counts.iter().map(|&x| x as i64).collect::<Vec<_>>())
    }
}

/// A character value: eigenvalue multiplicities of `ζ_e^i`, the reduced
/// cyclotomic form, and the image mod `ℓ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CycValue {
    pub mult: Vec<u32>,
    pub cyc: Vec<i64>,
    pub modimage: u64,
}
