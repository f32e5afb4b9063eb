//! Explicit embeddings `F_q ↪ F_{q^m}` between fields built over `F_p`
//! with independently chosen moduli.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::field::{field, FieldDesc, Fq};
use super::linalg::ModMatrix;
use crate::error::{Error, Result};

pub struct SubfieldEmbedding {
    small: Arc<FieldDesc>,
    large: Arc<FieldDesc>,
    /// `α^i` where `α` is the chosen root of the small modulus.
    images: Vec<Fq>,
    /// Coordinates in `large` that determine a subfield element.
    pivot_coords: Vec<usize>,
    /// Inverse of the `images` matrix restricted to `pivot_coords`.
    proj: ModMatrix,
}

type Key = (u32, usize, usize);

fn cache() -> &'static Mutex<HashMap<Key, Arc<SubfieldEmbedding>>> {
    static C: OnceLock<Mutex<HashMap<Key, Arc<SubfieldEmbedding>>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Embedding of `F_q = F_{p^k}` into `F_{q^m}`, cached per `(p, k, m)`.
pub fn subfield_embedding(p: u32, k: usize, m: usize) -> Result<Arc<SubfieldEmbedding>> {
    if let Some(e) = cache().lock().unwrap().get(&(p, k, m)) {
        return Ok(e.clone());
    }
    let e = Arc::new(SubfieldEmbedding::build(field(p, k, 1)?, field(p, k, m)?)?);
    cache().lock().unwrap().insert((p, k, m), e.clone());
    Ok(e)
}

impl SubfieldEmbedding {
    fn build(small: Arc<FieldDesc>, large: Arc<FieldDesc>) -> Result<Self> {
        let k = small.degree();
        let d = large.degree();
        let p = small.p();
        let alpha = if k == 1 {
            large.zero()
        } else {
            // the subfield is the kernel of z ↦ z^{p^k} - z
            let pk = (p as u128).pow(k as u32);
            let mut map = ModMatrix::zeros(d, d, p as u64);
            for j in 0..d {
                let b = large.basis(j);
                let img = large.sub(large.pow(b, pk), b);
                for i in 0..d {
                    map.set(i, j, img.coeff(i) as u64);
                }
            }
            let kern = map.kernel();
            if kern.len() != k {
                return Err(Error::Internal(format!("subfield dimension {} != {k}", kern.len())));
            }
            let modulus: Vec<Fq> = small.modulus().iter().map(|&c| large.from_int(c as i64)).collect();
            let total = (p as u64).pow(k as u32);
            let mut found = None;
            for idx in 0..total {
                let mut z = large.zero();
                let mut t = idx;
                for v in &kern {
                    let c = (t % p as u64) as u32;
                    t /= p as u64;
                    let mut bv = [0u8; super::field::MAX_DEGREE];
                    for (i, &x) in v.iter().enumerate() {
                        bv[i] = x as u8;
                    }
                    z = large.add(z, large.scale(Fq::from_coeffs(&bv[..d]), c));
                }
                let val = modulus.iter().rev().fold(large.zero(), |acc, &c| large.add(large.mul(acc, z), c));
                if val.is_zero() {
                    found = Some(z);
                    break;
                }
            }
            found.ok_or_else(|| Error::Internal("no root of the subfield modulus".into()))?
        };
        let mut images = Vec::with_capacity(k);
        let mut acc = large.one();
        for _ in 0..k {
            images.push(acc);
            acc = large.mul(acc, alpha);
        }
        // choose k coordinates on which the images are independent
        let mut cols = ModMatrix::zeros(k, d, p as u64);
        for (i, img) in images.iter().enumerate() {
            for j in 0..d {
                cols.set(i, j, img.coeff(j) as u64);
            }
        }
        let pivot_coords = cols.clone().rref();
        let mut sq = ModMatrix::zeros(k, k, p as u64);
        for (r, &c) in pivot_coords.iter().enumerate() {
            for (i, img) in images.iter().enumerate() {
                sq.set(r, i, img.coeff(c) as u64);
            }
        }
        let proj = invert_mod(&sq).ok_or_else(|| Error::Internal("singular embedding".into()))?;
        Ok(SubfieldEmbedding { small, large, images, pivot_coords, proj })
    }

    pub fn small(&self) -> &Arc<FieldDesc> {
        &self.small
    }

    pub fn large(&self) -> &Arc<FieldDesc> {
        &self.large
    }

    pub fn embed(&self, a: Fq) -> Fq {
        if self.small.degree() == 1 {
            return a;
        }
        let mut acc = self.large.zero();
        for (i, &img) in self.images.iter().enumerate() {
            let c = a.coeff(i) as u32;
            if c != 0 {
                acc = self.large.add(acc, self.large.scale(img, c));
            }
        }
        acc
    }

    /// Inverse of [`embed`](Self::embed) on the image; `None` outside it.
    pub fn project(&self, b: Fq) -> Option<Fq> {
        let k = self.small.degree();
        if k == 1 {
            let d = self.large.degree();
            return if (1..d).all(|i| b.coeff(i) == 0) { Some(Fq::from_coeffs(&[b.coeff(0)])) } else { None };
        }
        let p = self.small.p() as u64;
        let rhs: Vec<u64> = self.pivot_coords.iter().map(|&c| b.coeff(c) as u64).collect();
        let mut coeffs = vec![0u8; k];
        for (i, c) in coeffs.iter_mut().enumerate() {
            let s: u64 = (0..k).map(|j| self.proj.get(i, j) * rhs[j]).sum::<u64>() % p;
            *c = s as u8;
        }
        let a = Fq::from_coeffs(&coeffs);
        (self.embed(a) == b).then_some(a)
    }
}

fn invert_mod(a: &ModMatrix) -> Option<ModMatrix> {
    let n = a.rows;
    let mut aug = ModMatrix::zeros(n, 2 * n, a.modulus);
    for i in 0..n {
        for j in 0..n {
            aug.set(i, j, a.get(i, j));
        }
        aug.set(i, n + i, 1);
    }
    let piv = aug.rref();
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    let mut out = ModMatrix::zeros(n, n, a.modulus);
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, aug.get(i, n + j));
        }
    }
    Some(out)
}
