//! Finite fields `F_{p^d}` represented directly over the prime field.
//!
//! A [`FieldDesc`] describes `F_{q^m}` with `q = p^k`; the modulus is a
//! degree `k·m` polynomial over `F_p`, never a relative tower.  Elements are
//! fixed-width coefficient arrays ([`Fq`]) and carry no reference to their
//! field, so every operation goes through the descriptor.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Largest supported absolute degree `k·m`.
pub const MAX_DEGREE: usize = 64;

/// An element of some `F_{p^d}`: coefficients of `1, x, …, x^{d-1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fq {
    c: [u8; MAX_DEGREE],
}

impl Fq {
    pub const ZERO: Fq = Fq { c: [0; MAX_DEGREE] };

    pub fn from_coeffs(coeffs: &[u8]) -> Fq {
        assert!(coeffs.len() <= MAX_DEGREE);
        let mut c = [0u8; MAX_DEGREE];
        c[..coeffs.len()].copy_from_slice(coeffs);
        Fq { c }
    }

    #[inline]
    pub fn coeff(&self, i: usize) -> u8 {
        self.c[i]
    }

    #[inline]
    pub fn coeffs(&self, degree: usize) -> &[u8] {
        &self.c[..degree]
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.c.iter().rposition(|&x| x != 0).map_or(1, |i| i + 1);
        write!(f, "{:?}", &self.c[..last])
    }
}

/// Descriptor of `F_{q^m}`, `q = p^k`.
pub struct FieldDesc {
    p: u32,
    k: usize,
    m: usize,
    degree: usize,
    modulus: Vec<u8>,
    /// Images of `x^i` under the `q`-power Frobenius.
    frob: Vec<Fq>,
}

impl fmt::Debug for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldDesc")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .finish()
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors by trial division.
pub fn prime_factors(mut n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut d: u128 = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

type FieldCache = Mutex<HashMap<(u32, usize, usize), Arc<FieldDesc>>>;

fn field_cache() -> &'static FieldCache {
    static CACHE: OnceLock<FieldCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `F_{q^m}` with `q = p^k`.  Descriptors are cached, so repeated calls are cheap
/// and return the same modulus.
pub fn field(p: u32, k: usize, m: usize) -> Result<Arc<FieldDesc>> {
    if let Some(f) = field_cache().lock().unwrap().get(&(p, k, m)) {
        return Ok(f.clone());
    }
    let f = Arc::new(FieldDesc::build(p, k, m)?);
    field_cache().lock().unwrap().insert((p, k, m), f.clone());
    Ok(f)
}

impl FieldDesc {
    fn build(p: u32, k: usize, m: usize) -> Result<FieldDesc> {
        if !is_prime(p as u64) {
            return Err(Error::InvalidParameter(format!("p = {p} is not prime")));
        }
        if p > 251 {
            return Err(Error::InvalidParameter(format!("p = {p} exceeds 251")));
        }
        if k == 0 || m == 0 {
            return Err(Error::InvalidParameter("field degree must be positive".into()));
        }
        let degree = k * m;
        if degree > MAX_DEGREE {
            return Err(Error::InvalidParameter(format!(
                "absolute degree {degree} exceeds supported maximum {MAX_DEGREE}"
            )));
        }
        let modulus = smallest_irreducible(p, degree);
        let mut f = FieldDesc { p, k, m, degree, modulus, frob: Vec::new() };
        let q = (p as u128).pow(k as u32);
        let x = f.gen();
        let xq = f.pow(x, q);
        let mut frob = Vec::with_capacity(degree);
        let mut acc = f.one();
        for _ in 0..degree {
            frob.push(acc);
            acc = f.mul(acc, xq);
        }
        f.frob = frob;
        Ok(f)
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn m(&self) -> usize {
        self.m
    }
    /// Absolute degree `k·m` over `F_p`.
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }
    /// `q = p^k`.
    pub fn q(&self) -> u128 {
        (self.p as u128).pow(self.k as u32)
    }
    /// Number of elements `p^{km}`, if it fits.
    pub fn size(&self) -> Option<u128> {
        (self.p as u128).checked_pow(self.degree as u32)
    }

    #[inline]
    pub fn zero(&self) -> Fq {
        Fq::ZERO
    }
    #[inline]
    pub fn one(&self) -> Fq {
        self.from_int(1)
    }
    /// The class of `x`, which generates the field over `F_p`.
    pub fn gen(&self) -> Fq {
        if self.degree == 1 {
            // modulus x + c, so x = -c
            return self.from_int(-(self.modulus[0] as i64));
        }
        let mut c = [0u8; MAX_DEGREE];
        c[1] = 1;
        Fq { c }
    }

    pub fn from_int(&self, v: i64) -> Fq {
        let mut c = [0u8; MAX_DEGREE];
        c[0] = v.rem_euclid(self.p as i64) as u8;
        Fq { c }
    }

    /// Basis element `x^i` as an element.
    pub fn basis(&self, i: usize) -> Fq {
        if i == 0 {
            return self.one();
        }
        let mut c = [0u8; MAX_DEGREE];
        c[i] = 1;
        Fq { c }
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        let p = self.p as u16;
        let mut c = [0u8; MAX_DEGREE];
        for i in 0..self.degree {
            c[i] = ((a.c[i] as u16 + b.c[i] as u16) % p) as u8;
        }
        Fq { c }
    }

    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        let p = self.p as u16;
        let mut c = [0u8; MAX_DEGREE];
        for i in 0..self.degree {
            c[i] = ((a.c[i] as u16 + p - b.c[i] as u16) % p) as u8;
        }
        Fq { c }
    }

    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        self.sub(Fq::ZERO, a)
    }

    /// Multiply by an `F_p` scalar.
    #[inline]
    pub fn scale(&self, a: Fq, s: u32) -> Fq {
        let p = self.p;
        let s = s % p;
        let mut c = [0u8; MAX_DEGREE];
        for i in 0..self.degree {
            c[i] = ((a.c[i] as u32 * s) % p) as u8;
        }
        Fq { c }
    }

    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        let p = self.p;
        let d = self.degree;
        if d == 1 {
            let mut c = [0u8; MAX_DEGREE];
            c[0] = ((a.c[0] as u32 * b.c[0] as u32) % p) as u8;
            return Fq { c };
        }
        let mut t = [0u32; 2 * MAX_DEGREE];
        for i in 0..d {
            let ai = a.c[i] as u32;
            if ai == 0 {
                continue;
            }
            for j in 0..d {
                t[i + j] += ai * b.c[j] as u32;
            }
        }
        for i in (d..2 * d - 1).rev() {
            let top = t[i] % p;
            if top == 0 {
                continue;
            }
            let neg = p - top;
            for j in 0..d {
                t[i - d + j] += neg * self.modulus[j] as u32;
            }
        }
        let mut c = [0u8; MAX_DEGREE];
        for i in 0..d {
            c[i] = (t[i] % p) as u8;
        }
        Fq { c }
    }

    pub fn pow(&self, a: Fq, mut e: u128) -> Fq {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse (extended Euclid over `F_p`).
    pub fn inv(&self, a: Fq) -> Option<Fq> {
        if a.is_zero() {
            return None;
        }
        let p = self.p as u64;
        if self.degree == 1 {
            return Some(self.from_int(modinv(a.c[0] as u64, p) as i64));
        }
        let d = self.degree;
        let mut r0: Vec<u64> = self.modulus.iter().map(|&x| x as u64).collect();
        let mut r1: Vec<u64> = a.c[..d].iter().map(|&x| x as u64).collect();
        let mut s0: Vec<u64> = vec![0];
        let mut s1: Vec<u64> = vec![1];
        trim(&mut r1);
        while !(r1.len() == 1 && r1[0] != 0) {
            let (quo, rem) = fp_divrem(&r0, &r1, p);
            let s2 = fp_sub(&s0, &fp_mul(&quo, &s1, p), p);
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
            if r1.is_empty() || (r1.len() == 1 && r1[0] == 0) {
                return None;
            }
        }
        let c = modinv(r1[0], p);
        let mut out = [0u8; MAX_DEGREE];
        for (i, &v) in s1.iter().enumerate().take(d) {
            out[i] = (v * c % p) as u8;
        }
        Some(Fq { c: out })
    }

    /// The `q`-power Frobenius `x ↦ x^q`.
    pub fn frobenius(&self, a: Fq) -> Fq {
        if self.m == 1 {
            return a;
        }
        let p = self.p;
        let d = self.degree;
        let mut t = [0u32; MAX_DEGREE];
        for i in 0..d {
            let ai = a.c[i] as u32;
            if ai == 0 {
                continue;
            }
            let img = &self.frob[i];
            for j in 0..d {
                t[j] += ai * img.c[j] as u32;
            }
        }
        let mut c = [0u8; MAX_DEGREE];
        for j in 0..d {
            c[j] = (t[j] % p) as u8;
        }
        Fq { c }
    }

    /// Absolute trace to `F_p`.
    pub fn trace_to_prime(&self, a: Fq) -> u32 {
        let mut acc = a;
        let mut sum = Fq::ZERO;
        for _ in 0..self.degree {
            sum = self.add(sum, acc);
            acc = self.pow(acc, self.p as u128);
        }
        sum.c[0] as u32
    }

    /// Index `Σ c_i p^i`; the canonical element ordering.
    pub fn index(&self, a: Fq) -> u128 {
        let mut acc = 0u128;
        for i in (0..self.degree).rev() {
            acc = acc * self.p as u128 + a.c[i] as u128;
        }
        acc
    }

    pub fn from_index(&self, mut idx: u128) -> Fq {
        let mut c = [0u8; MAX_DEGREE];
        for ci in c.iter_mut().take(self.degree) {
            *ci = (idx % self.p as u128) as u8;
            idx /= self.p as u128;
        }
        Fq { c }
    }

    /// All elements in index order.  Only for small fields.
    pub fn elements(&self) -> Result<Vec<Fq>> {
        match self.size() {
            Some(n) if n <= 1 << 24 => Ok((0..n).map(|i| self.from_index(i)).collect()),
            _ => Err(Error::GuardExceeded(format!("enumerating a field of degree {}", self.degree))),
        }
    }

    /// Whether `a` is a nonzero square.
    pub fn is_square(&self, a: Fq) -> bool {
        if a.is_zero() {
            return false;
        }
        if self.p == 2 {
            return true;
        }
        let n = self.size().expect("field too large");
        self.pow(a, (n - 1) / 2) == self.one()
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: Fq) -> u128 {
        let n = self.size().expect("field too large") - 1;
        let mut ord = n;
        for f in prime_factors(n) {
            while ord.is_multiple_of(f) && self.pow(a, ord / f) == self.one() {
                ord /= f;
            }
        }
        ord
    }

    /// Smallest generator of the multiplicative group in index order.
    pub fn primitive_element(&self) -> Fq {
        let n = self.size().expect("field too large") - 1;
        let mut i = 1;
        loop {
            let a = self.from_index(i);
            if self.order(a) == n {
                return a;
            }
            i += 1;
        }
    }

    /// Smallest non-square in index order (odd characteristic).
    pub fn smallest_nonsquare(&self) -> Option<Fq> {
        if self.p == 2 {
            return None;
        }
        let n = self.size()?;
        (1..n).map(|i| self.from_index(i)).find(|&a| !self.is_square(a))
    }
}

pub(crate) fn modinv(a: u64, p: u64) -> u64 {
    modpow(a % p, p - 2, p)
}

pub(crate) fn modpow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

// Dense polynomials over F_p, low degree first, used for modulus selection
// and inversion.

fn trim(a: &mut Vec<u64>) {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
    if a.is_empty() {
        a.push(0);
    }
}

fn fp_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut out);
    out
}

fn fp_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(&mut out);
    out
}

fn fp_divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = modinv(b[db], p);
    if r.len() < b.len() {
        return (vec![0], r);
    }
    let mut q = vec![0u64; r.len() - db];
    for i in (db..r.len()).rev() {
        let c = r[i] * lead_inv % p;
        if c == 0 {
            continue;
        }
        q[i - db] = c;
        for j in 0..=db {
            r[i - db + j] = (r[i - db + j] + p - c * b[j] % p) % p;
        }
    }
    r.truncate(db.max(1));
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

fn fp_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    fp_divrem(&fp_mul(a, b, p), f, p).1
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !(y.len() == 1 && y[0] == 0) {
        let r = fp_divrem(&x, &y, p).1;
        x = y;
        y = r;
    }
    x
}

/// Ben-Or irreducibility test for a monic polynomial over `F_p`.
pub fn is_irreducible(f: &[u8], p: u32) -> bool {
    let p = p as u64;
    let f: Vec<u64> = f.iter().map(|&x| x as u64).collect();
    let d = f.len() - 1;
    if d == 0 {
        return false;
    }
    let x = vec![0, 1];
    let mut h = x.clone();
    for _ in 0..d / 2 {
        // h <- h^p mod f
        let mut acc = vec![1u64];
        let mut base = h.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = fp_mulmod(&acc, &base, &f, p);
            }
            base = fp_mulmod(&base, &base, &f, p);
            e >>= 1;
        }
        h = acc;
        let g = fp_gcd(&f, &fp_sub(&h, &x, p), p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of the given degree, comparing
/// coefficient lists from the constant term upward.
pub fn smallest_irreducible(p: u32, degree: usize) -> Vec<u8> {
    let mut c = vec![0u8; degree + 1];
    c[degree] = 1;
    if degree > 1 {
        // anything with zero constant term is divisible by x
        c[0] = 1;
    }
    loop {
        if is_irreducible(&c, p) {
            return c;
        }
        // the constant term is the most significant digit
        let mut i = degree;
        loop {
            i -= 1;
            c[i] += 1;
            if (c[i] as u32) < p {
                break;
            }
            c[i] = 0;
            assert!(i > 0, "no irreducible polynomial found");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_fields() {
        let f3 = field(3, 1, 1).unwrap();
        assert_eq!(f3.mul(f3.from_int(2), f3.from_int(2)), f3.one());
        assert_eq!(f3.inv(f3.from_int(2)), Some(f3.from_int(2)));
        let f5 = field(5, 1, 1).unwrap();
        assert_eq!(f5.add(f5.from_int(3), f5.from_int(4)), f5.from_int(2));
        assert_eq!(f5.inv(f5.zero()), None);
    }

    #[test]
    fn f9_modulus_is_x2_plus_1() {
        // brute force over monic quadratics in lexicographic order
        let mut first = None;
        'outer: for c0 in 0..3u8 {
            for c1 in 0..3u8 {
                let has_root = (0..3u32).any(|x| (c0 as u32 + c1 as u32 * x + x * x).is_multiple_of(3));
                if !has_root {
                    first = Some(vec![c0, c1, 1]);
                    break 'outer;
                }
            }
        }
        assert_eq!(first.unwrap(), vec![1, 0, 1]);
        assert_eq!(field(3, 1, 2).unwrap().modulus(), &[1, 0, 1]);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(field(4, 1, 1).is_err());
        assert!(field(3, 0, 1).is_err());
        assert!(field(3, 1, 0).is_err());
    }

    #[test]
    fn frobenius_generator_of_f9() {
        let f = field(3, 1, 2).unwrap();
        let x = f.gen();
        let x3 = f.frobenius(x);
        assert_eq!(x3, f.pow(x, 3));
        assert_ne!(x3, x);
        assert_eq!(f.frobenius(x3), x);
    }

    #[test]
    fn every_nonzero_element_invertible() {
        for (p, k, m) in [(2, 1, 3), (3, 1, 2), (3, 2, 1), (5, 1, 2), (2, 2, 2)] {
            let f = field(p, k, m).unwrap();
            for a in f.elements().unwrap().into_iter().skip(1) {
                let b = f.inv(a).unwrap();
                assert_eq!(f.mul(a, b), f.one());
            }
        }
    }

    #[test]
    fn frobenius_has_order_m() {
        let f = field(3, 1, 4).unwrap();
        for a in f.elements().unwrap().into_iter().step_by(7) {
            let mut b = a;
            for _ in 0..4 {
                b = f.frobenius(b);
            }
            assert_eq!(a, b);
        }
    }

    #[test]
    fn rebuild_gives_identical_modulus() {
        let a = FieldDesc::build(5, 1, 3).unwrap();
        let b = FieldDesc::build(5, 1, 3).unwrap();
        assert_eq!(a.modulus(), b.modulus());
    }

    #[test]
    fn large_degree_arithmetic() {
        let f = field(5, 1, 30).unwrap();
        let x = f.gen();
        let y = f.add(f.pow(x, 17), f.from_int(3));
        let yi = f.inv(y).unwrap();
        assert_eq!(f.mul(y, yi), f.one());
        let mut z = y;
        for _ in 0..30 {
            z = f.frobenius(z);
        }
        assert_eq!(z, y);
    }

    #[test]
    fn nonsquare_and_primitive() {
        let f = field(5, 1, 1).unwrap();
        assert_eq!(f.smallest_nonsquare(), Some(f.from_int(2)));
        assert_eq!(f.primitive_element(), f.from_int(2));
        let f3 = field(3, 1, 1).unwrap();
        assert_eq!(f3.smallest_nonsquare(), Some(f3.from_int(2)));
    }
}
