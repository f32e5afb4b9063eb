//! The truncated ring `F_{q^m}[π]/π^r` and square matrices over it.

use super::embed::SubfieldEmbedding;
use super::field::{FieldDesc, Fq};
use super::linalg::FieldMatrix;
use crate::error::{Error, Result};

/// Element of `F_{q^m}[π]/π^r`: coefficients of `π^0, …, π^{r-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruncElem {
    pub c: Vec<Fq>,
}

impl TruncElem {
    pub fn zero(r: usize) -> Self {
        TruncElem { c: vec![Fq::ZERO; r] }
    }

    pub fn constant(x: Fq, r: usize) -> Self {
        let mut c = vec![Fq::ZERO; r];
        c[0] = x;
        TruncElem { c }
    }

    pub fn one(r: usize, f: &FieldDesc) -> Self {
        Self::constant(f.one(), r)
    }

    /// `π^i` (zero when `i ≥ r`).
    pub fn pi_pow(i: usize, r: usize, f: &FieldDesc) -> Self {
        let mut c = vec![Fq::ZERO; r];
        if i < r {
            c[i] = f.one();
        }
        TruncElem { c }
    }

    pub fn r(&self) -> usize {
        self.c.len()
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn is_unit(&self) -> bool {
        !self.c[0].is_zero()
    }

    /// π-adic valuation; `r` for zero.
    pub fn valuation(&self) -> usize {
        self.c.iter().position(|x| !x.is_zero()).unwrap_or(self.c.len())
    }

    pub fn add(&self, o: &Self, f: &FieldDesc) -> Self {
        TruncElem { c: self.c.iter().zip(&o.c).map(|(&a, &b)| f.add(a, b)).collect() }
    }

    pub fn sub(&self, o: &Self, f: &FieldDesc) -> Self {
        TruncElem { c: self.c.iter().zip(&o.c).map(|(&a, &b)| f.sub(a, b)).collect() }
    }

    pub fn neg(&self, f: &FieldDesc) -> Self {
        TruncElem { c: self.c.iter().map(|&a| f.neg(a)).collect() }
    }

    pub fn mul(&self, o: &Self, f: &FieldDesc) -> Self {
        let r = self.c.len();
        let mut c = vec![Fq::ZERO; r];
        trunc_mul_acc(&mut c, &self.c, &o.c, f);
        TruncElem { c }
    }

    pub fn inv(&self, f: &FieldDesc) -> Option<Self> {
        let a0inv = f.inv(self.c[0])?;
        let r = self.c.len();
        // solve (a * b) = 1 coefficient by coefficient
        let mut b = vec![Fq::ZERO; r];
        b[0] = a0inv;
        for i in 1..r {
            let mut s = Fq::ZERO;
            for j in 1..=i {
                s = f.add(s, f.mul(self.c[j], b[i - j]));
            }
            b[i] = f.neg(f.mul(s, a0inv));
        }
        Some(TruncElem { c: b })
    }

    pub fn pow(&self, mut e: u128, f: &FieldDesc) -> Self {
        let mut base = self.clone();
        let mut acc = TruncElem::one(self.r(), f);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, f);
            }
            base = base.mul(&base, f);
            e >>= 1;
        }
        acc
    }

    pub fn frobenius(&self, f: &FieldDesc) -> Self {
        TruncElem { c: self.c.iter().map(|&a| f.frobenius(a)).collect() }
    }
}

/// `dst += a * b` in `F[π]/π^r` on raw coefficient slices.
#[inline]
pub(crate) fn trunc_mul_acc(dst: &mut [Fq], a: &[Fq], b: &[Fq], f: &FieldDesc) {
    let r = dst.len();
    for i in 0..r {
        if a[i].is_zero() {
            continue;
        }
        for j in 0..r - i {
            if b[j].is_zero() {
                continue;
            }
            dst[i + j] = f.add(dst[i + j], f.mul(a[i], b[j]));
        }
    }
}

/// `n × n` matrix over `F_{q^m}[π]/π^r`.  Entry `(i, j)`, coefficient of
/// `π^t` lives at `((i·n + j)·r + t)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncMatrix {
    n: usize,
    r: usize,
    e: Vec<Fq>,
}

impl TruncMatrix {
    pub fn zero(n: usize, r: usize) -> Self {
        TruncMatrix { n, r, e: vec![Fq::ZERO; n * n * r] }
    }

    pub fn identity(n: usize, r: usize, f: &FieldDesc) -> Self {
        let mut m = Self::zero(n, r);
        for i in 0..n {
            m.e[(i * n + i) * r] = f.one();
        }
        m
    }

    pub fn scalar(s: &TruncElem, n: usize) -> Self {
        let r = s.r();
        let mut m = Self::zero(n, r);
        for i in 0..n {
            m.set(i, i, s);
        }
        m
    }

    /// From `π`-adic layers `A_0, A_1, …` (each `n × n` row major).
    pub fn from_layers(n: usize, layers: &[Vec<Fq>]) -> Self {
        let r = layers.len();
        let mut m = Self::zero(n, r);
        for (t, layer) in layers.iter().enumerate() {
            assert_eq!(layer.len(), n * n);
            for (ij, &x) in layer.iter().enumerate() {
                m.e[ij * r + t] = x;
            }
        }
        m
    }

    /// Matrix with constant entries given row major.
    pub fn from_constants(n: usize, r: usize, vals: &[Fq]) -> Self {
        let mut layers = vec![vec![Fq::ZERO; n * n]; r];
        layers[0] = vals.to_vec();
        Self::from_layers(n, &layers)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn raw(&self) -> &[Fq] {
        &self.e
    }

    #[inline]
    pub fn coeff(&self, i: usize, j: usize, t: usize) -> Fq {
        self.e[(i * self.n + j) * self.r + t]
    }

    #[inline]
    pub fn set_coeff(&mut self, i: usize, j: usize, t: usize, v: Fq) {
        self.e[(i * self.n + j) * self.r + t] = v;
    }

    pub fn entry(&self, i: usize, j: usize) -> TruncElem {
        let base = (i * self.n + j) * self.r;
        TruncElem { c: self.e[base..base + self.r].to_vec() }
    }

    fn entry_slice(&self, i: usize, j: usize) -> &[Fq] {
        let base = (i * self.n + j) * self.r;
        &self.e[base..base + self.r]
    }

    pub fn set(&mut self, i: usize, j: usize, v: &TruncElem) {
        let base = (i * self.n + j) * self.r;
        self.e[base..base + self.r].copy_from_slice(&v.c);
    }

    /// The `π^t` layer `A_t` as an `n × n` matrix over the field.
    pub fn layer(&self, t: usize) -> FieldMatrix {
        let n = self.n;
        let mut out = FieldMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, self.coeff(i, j, t));
            }
        }
        out
    }

    pub fn mul(&self, o: &Self, f: &FieldDesc) -> Self {
        let n = self.n;
        let r = self.r;
        let mut out = Self::zero(n, r);
        for i in 0..n {
            for j in 0..n {
                let base = (i * n + j) * r;
                let mut acc = vec![Fq::ZERO; r];
                for t in 0..n {
                    trunc_mul_acc(&mut acc, self.entry_slice(i, t), o.entry_slice(t, j), f);
                }
                out.e[base..base + r].copy_from_slice(&acc);
            }
        }
        out
    }

    pub fn add(&self, o: &Self, f: &FieldDesc) -> Self {
        TruncMatrix { n: self.n, r: self.r, e: self.e.iter().zip(&o.e).map(|(&a, &b)| f.add(a, b)).collect() }
    }

    pub fn sub(&self, o: &Self, f: &FieldDesc) -> Self {
        TruncMatrix { n: self.n, r: self.r, e: self.e.iter().zip(&o.e).map(|(&a, &b)| f.sub(a, b)).collect() }
    }

    /// Multiply every entry by an `F_p` scalar.
    pub fn scale_prime(&self, s: u32, f: &FieldDesc) -> Self {
        TruncMatrix { n: self.n, r: self.r, e: self.e.iter().map(|&a| f.scale(a, s)).collect() }
    }

    pub fn scale(&self, s: &TruncElem, f: &FieldDesc) -> Self {
        Self::scalar(s, self.n).mul(self, f)
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self, f: &FieldDesc) -> bool {
        *self == Self::identity(self.n, self.r, f)
    }

    pub fn frobenius(&self, f: &FieldDesc) -> Self {
        TruncMatrix { n: self.n, r: self.r, e: self.e.iter().map(|&a| f.frobenius(a)).collect() }
    }

    pub fn trace(&self, f: &FieldDesc) -> TruncElem {
        (0..self.n).fold(TruncElem::zero(self.r), |acc, i| acc.add(&self.entry(i, i), f))
    }

    /// Determinant.  Uses elimination on unit pivots and falls back to
    /// cofactor expansion once no unit pivot remains.
    pub fn det(&self, f: &FieldDesc) -> TruncElem {
        det_rec(self.n, self.r, (0..self.n * self.n).map(|ij| self.entry(ij / self.n, ij % self.n)).collect(), f)
    }

    /// Whether the determinant is a unit, i.e. the residue matrix is invertible.
    pub fn is_invertible(&self, f: &FieldDesc) -> bool {
        !self.layer(0).det(f).is_zero()
    }

    /// Gauss–Jordan with unit pivots; fails iff the determinant is not a unit.
    pub fn inverse(&self, f: &FieldDesc) -> Result<Self> {
        let n = self.n;
        let r = self.r;
        let mut a: Vec<TruncElem> = (0..n * n).map(|ij| self.entry(ij / n, ij % n)).collect();
        let mut b: Vec<TruncElem> = (0..n * n)
            .map(|ij| if ij / n == ij % n { TruncElem::one(r, f) } else { TruncElem::zero(r) })
            .collect();
        for col in 0..n {
            let piv = (col..n)
                .find(|&row| a[row * n + col].is_unit())
                .ok_or_else(|| Error::NotInvertible("determinant is not a unit".into()))?;
            if piv != col {
                for j in 0..n {
                    a.swap(piv * n + j, col * n + j);
                    b.swap(piv * n + j, col * n + j);
                }
            }
            let inv = a[col * n + col].inv(f).unwrap();
            for j in 0..n {
                a[col * n + j] = a[col * n + j].mul(&inv, f);
                b[col * n + j] = b[col * n + j].mul(&inv, f);
            }
            for row in 0..n {
                if row == col {
                    continue;
                }
                let c = a[row * n + col].clone();
                if c.is_zero() {
                    continue;
                }
                for j in 0..n {
                    a[row * n + j] = a[row * n + j].sub(&c.mul(&a[col * n + j], f), f);
                    b[row * n + j] = b[row * n + j].sub(&c.mul(&b[col * n + j], f), f);
                }
            }
        }
        let mut out = Self::zero(n, r);
        for ij in 0..n * n {
            out.set(ij / n, ij % n, &b[ij]);
        }
        Ok(out)
    }

    pub fn pow(&self, mut e: u128, f: &FieldDesc) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.n, self.r, f);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, f);
            }
            base = base.mul(&base, f);
            e >>= 1;
        }
        acc
    }

    /// Largest `i ≤ r` with `self ≡ I mod π^i`.
    pub fn congruence_level(&self, f: &FieldDesc) -> usize {
        let n = self.n;
        for t in 0..self.r {
            for i in 0..n {
                for j in 0..n {
                    let expect = if t == 0 && i == j { f.one() } else { Fq::ZERO };
                    if self.coeff(i, j, t) != expect {
                        return t;
                    }
                }
            }
        }
        self.r
    }

    /// Reduction modulo `π^s`, `s ≤ r`.
    pub fn reduce(&self, s: usize) -> Self {
        let mut out = Self::zero(self.n, s);
        for i in 0..self.n {
            for j in 0..self.n {
                for t in 0..s {
                    out.set_coeff(i, j, t, self.coeff(i, j, t));
                }
            }
        }
        out
    }

    /// Canonical byte string: entries row major, then `π`-coefficients, then
    /// `F_p`-coefficients, one byte each.
    pub fn canonical_bytes(&self, f: &FieldDesc) -> Vec<u8> {
        let d = f.degree();
        let mut out = Vec::with_capacity(self.e.len() * d);
        for x in &self.e {
            out.extend_from_slice(x.coeffs(d));
        }
        out
    }

    /// The canonical bytes read as a base-`p` number, first byte most
    /// significant; same order as the byte strings.  `None` on overflow.
    pub fn key(&self, f: &FieldDesc) -> Option<u128> {
        let p = f.p() as u128;
        let d = f.degree();
        let mut acc: u128 = 0;
        for x in &self.e {
            for &c in x.coeffs(d) {
                acc = acc.checked_mul(p)?.checked_add(c as u128)?;
            }
        }
        Some(acc)
    }

    pub fn from_key(mut key: u128, n: usize, r: usize, f: &FieldDesc) -> Self {
        let p = f.p() as u128;
        let d = f.degree();
        let total = n * n * r;
        let mut e = vec![Fq::ZERO; total];
        let mut digits = [0u8; super::field::MAX_DEGREE];
        for slot in e.iter_mut().rev() {
            for c in digits[..d].iter_mut().rev() {
                *c = (key % p) as u8;
                key /= p;
            }
            *slot = Fq::from_coeffs(&digits[..d]);
        }
        TruncMatrix { n, r, e }
    }

    /// Apply a field map entrywise (embeddings, projections).
    pub fn map(&self, g: impl Fn(Fq) -> Fq) -> Self {
        TruncMatrix { n: self.n, r: self.r, e: self.e.iter().map(|&a| g(a)).collect() }
    }

    pub fn try_map(&self, g: impl Fn(Fq) -> Option<Fq>) -> Option<Self> {
        let e: Option<Vec<Fq>> = self.e.iter().map(|&a| g(a)).collect();
        Some(TruncMatrix { n: self.n, r: self.r, e: e? })
    }

    /// Entries as `[i][j][t] -> F_p coefficient list`, for reports.
    pub fn to_nested(&self, f: &FieldDesc) -> Vec<Vec<Vec<Vec<u8>>>> {
        let d = f.degree();
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| (0..self.r).map(|t| self.coeff(i, j, t).coeffs(d).to_vec()).collect())
                    .collect()
            })
            .collect()
    }

    pub fn embed(&self, emb: &SubfieldEmbedding) -> Self {
        self.map(|a| emb.embed(a))
    }

    pub fn project(&self, emb: &SubfieldEmbedding) -> Option<Self> {
        self.try_map(|a| emb.project(a))
    }
}

fn det_rec(n: usize, r: usize, mut a: Vec<TruncElem>, f: &FieldDesc) -> TruncElem {
    if n == 0 {
        return TruncElem::one(r, f);
    }
    if n == 1 {
        return a[0].clone();
    }
    if let Some(piv) = (0..n).find(|&row| a[row * n].is_unit()) {
        let mut sign_neg = false;
        if piv != 0 {
            for j in 0..n {
                a.swap(piv * n + j, j);
            }
            sign_neg = true;
        }
        let p = a[0].clone();
        let pinv = p.inv(f).unwrap();
        let m = n - 1;
        let mut minor = Vec::with_capacity(m * m);
        for row in 1..n {
            let c = a[row * n].mul(&pinv, f);
            for j in 1..n {
                minor.push(a[row * n + j].sub(&c.mul(&a[j], f), f));
            }
        }
        let d = p.mul(&det_rec(m, r, minor, f), f);
        return if sign_neg { d.neg(f) } else { d };
    }
    // no unit in the first column: cofactor expansion along it
    let mut total = TruncElem::zero(r);
    for row in 0..n {
        if a[row * n].is_zero() {
            continue;
        }
        let mut minor = Vec::with_capacity((n - 1) * (n - 1));
        for rr in (0..n).filter(|&x| x != row) {
            for j in 1..n {
                minor.push(a[rr * n + j].clone());
            }
        }
        let term = a[row * n].mul(&det_rec(n - 1, r, minor, f), f);
        total = if row % 2 == 0 { total.add(&term, f) } else { total.sub(&term, f) };
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::field;

    fn dual(f: &FieldDesc, vals: &[(i64, i64)]) -> TruncMatrix {
        let n = (vals.len() as f64).sqrt() as usize;
        let a0: Vec<Fq> = vals.iter().map(|v| f.from_int(v.0)).collect();
        let a1: Vec<Fq> = vals.iter().map(|v| f.from_int(v.1)).collect();
        TruncMatrix::from_layers(n, &[a0, a1])
    }

    #[test]
    fn ring_axioms_and_truncation() {
        let f = field(3, 1, 2).unwrap();
        let r = 3;
        let pi = TruncElem::pi_pow(1, r, &f);
        assert!(pi.pow(3, &f).is_zero());
        assert!(!pi.pow(2, &f).is_zero());
        let x = f.gen();
        let a = TruncElem { c: vec![x, f.one(), f.from_int(2)] };
        let b = TruncElem { c: vec![f.from_int(2), x, Fq::ZERO] };
        let c = TruncElem { c: vec![Fq::ZERO, f.from_int(1), x] };
        assert_eq!(a.mul(&b.add(&c, &f), &f), a.mul(&b, &f).add(&a.mul(&c, &f), &f));
        assert_eq!(a.mul(&b, &f).mul(&c, &f), a.mul(&b.mul(&c, &f), &f));
        let ai = a.inv(&f).unwrap();
        assert_eq!(a.mul(&ai, &f), TruncElem::one(r, &f));
        assert!(c.inv(&f).is_none());
        assert_eq!(c.valuation(), 1);
        assert_eq!(TruncElem::zero(r).valuation(), r);
    }

    #[test]
    fn det_identity_and_dual_numbers() {
        let f = field(3, 1, 1).unwrap();
        for n in 1..4 {
            for r in 1..4 {
                assert_eq!(TruncMatrix::identity(n, r, &f).det(&f), TruncElem::one(r, &f));
            }
        }
        // [[1, ε], [ε, 1]] has det 1 - ε² = 1
        let m = dual(&f, &[(1, 0), (0, 1), (0, 1), (1, 0)]);
        assert_eq!(m.det(&f), TruncElem::one(2, &f));
        // [[ε, 0], [0, ε]] has det ε² = 0; [[ε,1],[1,0]] has det -1
        let m2 = dual(&f, &[(0, 1), (0, 0), (0, 0), (0, 1)]);
        assert!(m2.det(&f).is_zero());
        assert!(m2.inverse(&f).is_err());
        let m3 = dual(&f, &[(0, 1), (1, 0), (1, 0), (0, 0)]);
        assert_eq!(m3.det(&f), TruncElem::constant(f.from_int(-1), 2));
    }

    #[test]
    fn key_round_trip_and_order() {
        let f = field(3, 1, 1).unwrap();
        let m = dual(&f, &[(1, 2), (0, 1), (2, 0), (1, 1)]);
        let key = m.key(&f).unwrap();
        assert_eq!(TruncMatrix::from_key(key, 2, 2, &f), m);
        let bytes = m.canonical_bytes(&f);
        assert_eq!(bytes, vec![1, 2, 0, 1, 2, 0, 1, 1]);
        let m2 = dual(&f, &[(1, 2), (0, 1), (2, 0), (1, 2)]);
        assert!(m2.key(&f) > m.key(&f));
        assert!(m2.canonical_bytes(&f) > bytes);
    }

    #[test]
    fn congruence_level() {
        let f = field(3, 1, 1).unwrap();
        let id = TruncMatrix::identity(2, 2, &f);
        assert_eq!(id.congruence_level(&f), 2);
        let k = dual(&f, &[(1, 1), (0, 0), (0, 0), (1, 2)]);
        assert_eq!(k.congruence_level(&f), 1);
        let g = dual(&f, &[(1, 0), (1, 0), (0, 0), (1, 0)]);
        assert_eq!(g.congruence_level(&f), 0);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_matrix() -> impl Strategy<Value = Vec<(i64, i64)>> {
            proptest::collection::vec((0i64..3, 0i64..3), 4)
        }

        proptest! {
            #[test]
            fn det_is_multiplicative(a in arb_matrix(), b in arb_matrix()) {
                let f = field(3, 1, 1).unwrap();
                let a = dual(&f, &a);
                let b = dual(&f, &b);
                prop_assert_eq!(a.mul(&b, &f).det(&f), a.det(&f).mul(&b.det(&f), &f));
            }

            #[test]
            fn inverse_exists_iff_det_unit(a in arb_matrix()) {
                let f = field(3, 1, 1).unwrap();
                let a = dual(&f, &a);
                match a.inverse(&f) {
                    Ok(inv) => {
                        prop_assert!(a.det(&f).is_unit());
                        prop_assert!(a.mul(&inv, &f).is_identity(&f));
                        prop_assert!(inv.mul(&a, &f).is_identity(&f));
                    }
                    Err(_) => prop_assert!(!a.det(&f).is_unit()),
                }
            }

            #[test]
            fn frobenius_is_multiplicative(a in proptest::collection::vec(0u8..3, 16), b in proptest::collection::vec(0u8..3, 16)) {
                let f = field(3, 1, 2).unwrap();
                let mk = |v: &[u8]| {
                    let e: Vec<Fq> = v.chunks(2).map(Fq::from_coeffs).collect();
                    TruncMatrix::from_layers(2, &[e[..4].to_vec(), e[4..].to_vec()])
                };
                let (a, b) = (mk(&a), mk(&b));
                prop_assert_eq!(a.mul(&b, &f).frobenius(&f), a.frobenius(&f).mul(&b.frobenius(&f), &f));
                prop_assert_eq!(a.add(&b, &f).frobenius(&f), a.frobenius(&f).add(&b.frobenius(&f), &f));
            }
        }
    }
}
