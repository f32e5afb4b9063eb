//! Gaussian elimination, both over `Z/ℓ` with machine words and over an
//! arbitrary [`FieldDesc`].

use super::field::{modinv, FieldDesc, Fq};

/// Dense matrix over `Z/ℓ`, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModMatrix {
    pub rows: usize,
    pub cols: usize,
    pub modulus: u64,
    pub data: Vec<u64>,
}

impl ModMatrix {
    pub fn zeros(rows: usize, cols: usize, modulus: u64) -> Self {
        ModMatrix { rows, cols, modulus, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize, modulus: u64) -> Self {
        let mut m = Self::zeros(n, n, modulus);
        for i in 0..n {
            m.data[i * n + i] = 1 % modulus;
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.modulus;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &ModMatrix) -> ModMatrix {
        assert_eq!(self.cols, other.rows);
        let l = self.modulus;
        let mut out = ModMatrix::zeros(self.rows, other.cols, l);
        for i in 0..self.rows {
            for t in 0..self.cols {
                let a = self.get(i, t);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = (out.data[idx] + a * other.get(t, j)) % l;
                }
            }
        }
        out
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let l = self.modulus;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(piv) = (row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            if piv != row {
                for j in 0..self.cols {
                    self.data.swap(piv * self.cols + j, row * self.cols + j);
                }
            }
            let inv = modinv(self.get(row, col), l);
            for j in col..self.cols {
                let v = self.get(row, j) * inv % l;
                self.data[row * self.cols + j] = v;
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let f = self.get(r, col);
                if f == 0 {
                    continue;
                }
                for j in col..self.cols {
                    let v = (self.get(r, j) + l - f * self.get(row, j) % l) % l;
                    self.data[r * self.cols + j] = v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of `{x : A x = 0}`, one vector per free column in increasing order.
    pub fn kernel(&self) -> Vec<Vec<u64>> {
        let l = self.modulus;
        let mut a = self.clone();
        let pivots = a.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u64; self.cols];
            v[free] = 1 % l;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = (l - a.get(r, free)) % l;
            }
            basis.push(v);
        }
        basis
    }

    /// Characteristic polynomial `det(xI - A)`, low degree first, via
    /// reduction to upper Hessenberg form.
    pub fn charpoly(&self) -> Vec<u64> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let l = self.modulus;
        let mut h = self.clone();
        for col in 0..n.saturating_sub(2) {
            let Some(piv) = (col + 1..n).find(|&r| h.get(r, col) != 0) else {
                continue;
            };
            if piv != col + 1 {
                // similarity by a transposition
                for j in 0..n {
                    h.data.swap(piv * n + j, (col + 1) * n + j);
                }
                for i in 0..n {
                    h.data.swap(i * n + piv, i * n + col + 1);
                }
            }
            let inv = modinv(h.get(col + 1, col), l);
            for r in col + 2..n {
                let f = h.get(r, col) * inv % l;
                if f == 0 {
                    continue;
                }
                // row_r -= f row_{col+1}; col_{col+1} += f col_r
                for j in 0..n {
                    let v = (h.get(r, j) + l - f * h.get(col + 1, j) % l) % l;
                    h.set(r, j, v);
                }
                for i in 0..n {
                    let v = (h.get(i, col + 1) + f * h.get(i, r)) % l;
                    h.set(i, col + 1, v);
                }
            }
        }
        // recurrence on leading principal minors of xI - H
        let mut polys: Vec<Vec<u64>> = vec![vec![1 % l]];
        for k in 1..=n {
            let hk = h.get(k - 1, k - 1);
            let prev = &polys[k - 1];
            let mut next = vec![0u64; k + 1];
            for (i, &c) in prev.iter().enumerate() {
                next[i + 1] = (next[i + 1] + c) % l;
                next[i] = (next[i] + (l - hk) * c) % l;
            }
            let mut prod = 1u64;
            for i in 1..k {
                prod = prod * h.get(k - i, k - i - 1) % l;
                let coef = prod * h.get(k - i - 1, k - 1) % l;
                if coef == 0 {
                    continue;
                }
                for (j, &c) in polys[k - i - 1].iter().enumerate() {
                    next[j] = (next[j] + l - coef * c % l) % l;
                }
            }
            polys.push(next);
        }
        polys.pop().unwrap()
    }
}

/// Dense matrix over a finite field, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Fq>,
}

impl FieldMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FieldMatrix { rows, cols, data: vec![Fq::ZERO; rows * cols] }
    }

    pub fn identity(n: usize, f: &FieldDesc) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = f.one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Fq>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c);
            data.extend_from_slice(row);
        }
        FieldMatrix { rows: r, cols: c, data }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Fq {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Fq) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Fq] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &FieldMatrix, f: &FieldDesc) -> FieldMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = FieldMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for t in 0..self.cols {
                let a = self.get(i, t);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.get(t, j)));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Fq], f: &FieldDesc) -> Vec<Fq> {
        (0..self.rows)
            .map(|i| {
                let mut acc = Fq::ZERO;
                for (j, &x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc = f.add(acc, f.mul(a, x));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn sub(&self, other: &FieldMatrix, f: &FieldDesc) -> FieldMatrix {
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        FieldMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn rref(&mut self, f: &FieldDesc) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(piv) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            if piv != row {
                for j in 0..self.cols {
                    self.data.swap(piv * self.cols + j, row * self.cols + j);
                }
            }
            let inv = f.inv(self.get(row, col)).unwrap();
            for j in col..self.cols {
                let v = f.mul(self.get(row, j), inv);
                self.set(row, j, v);
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let c = self.get(r, col);
                if c.is_zero() {
                    continue;
                }
                for j in col..self.cols {
                    let v = f.sub(self.get(r, j), f.mul(c, self.get(row, j)));
                    self.set(r, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self, f: &FieldDesc) -> usize {
        self.clone().rref(f).len()
    }

    pub fn kernel(&self, f: &FieldDesc) -> Vec<Vec<Fq>> {
        let mut a = self.clone();
        let pivots = a.rref(f);
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Fq::ZERO; self.cols];
            v[free] = f.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(a.get(r, free));
            }
            basis.push(v);
        }
        basis
    }

    pub fn det(&self, f: &FieldDesc) -> Fq {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut det = f.one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a.get(r, col).is_zero()) else {
                return Fq::ZERO;
            };
            if piv != col {
                for j in 0..n {
                    a.data.swap(piv * n + j, col * n + j);
                }
                det = f.neg(det);
            }
            let d = a.get(col, col);
            det = f.mul(det, d);
            let inv = f.inv(d).unwrap();
            for r in col + 1..n {
                let c = f.mul(a.get(r, col), inv);
                if c.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = f.sub(a.get(r, j), f.mul(c, a.get(col, j)));
                    a.set(r, j, v);
                }
            }
        }
        det
    }
}

/// Incrementally maintained reduced row echelon basis of a subspace.
#[derive(Clone, Debug)]
pub struct Echelon {
    dim: usize,
    rows: Vec<Vec<Fq>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(dim: usize) -> Self {
        Echelon { dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Fq>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduce `v` against the basis; zero iff `v` lies in the span.
    pub fn reduce(&self, v: &[Fq], f: &FieldDesc) -> Vec<Fq> {
        let mut w = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = w[pc];
            if c.is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if !row[j].is_zero() {
                    w[j] = f.sub(w[j], f.mul(c, row[j]));
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[Fq], f: &FieldDesc) -> bool {
        self.reduce(v, f).iter().all(|x| x.is_zero())
    }

    /// Insert `v`; returns whether the rank grew.
    pub fn insert(&mut self, v: &[Fq], f: &FieldDesc) -> bool {
        let mut w = self.reduce(v, f);
        let Some(pc) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = f.inv(w[pc]).unwrap();
        for x in w.iter_mut() {
            *x = f.mul(*x, inv);
        }
        for row in self.rows.iter_mut() {
            let c = row[pc];
            if c.is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if !w[j].is_zero() {
                    row[j] = f.sub(row[j], f.mul(c, w[j]));
                }
            }
        }
        self.rows.push(w);
        self.pivots.push(pc);
        true
    }

    /// Basis rows sorted by pivot; a canonical description of the subspace.
    pub fn canonical_rows(&self) -> Vec<Vec<Fq>> {
        let mut idx: Vec<usize> = (0..self.rows.len()).collect();
        idx.sort_by_key(|&i| self.pivots[i]);
        idx.into_iter().map(|i| self.rows[i].clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::field;

    fn brute_det(m: &ModMatrix) -> u64 {
        // Leibniz over all permutations of a small matrix
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for i in 0..n {
                    let mut q = p.clone();
                    q.insert(i, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let n = m.rows;
        let l = m.modulus;
        let mut total = 0u64;
        for p in perms(n) {
            let mut inv = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if p[i] > p[j] {
                        inv += 1;
                    }
                }
            }
            let mut prod = 1u64;
            for i in 0..n {
                prod = prod * m.get(i, p[i]) % l;
            }
            total = if inv % 2 == 0 { (total + prod) % l } else { (total + l - prod) % l };
        }
        total
    }

    #[test]
    fn charpoly_constant_term_is_signed_det() {
        let l = 13;
        let mut seed = 7u64;
        for n in 1..=5 {
            let mut m = ModMatrix::zeros(n, n, l);
            for v in m.data.iter_mut() {
                seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                *v = (seed >> 33) % l;
            }
            let cp = m.charpoly();
            assert_eq!(cp.len(), n + 1);
            assert_eq!(cp[n], 1);
            let d = brute_det(&m);
            let expect = if n % 2 == 0 { d } else { (l - d) % l };
            assert_eq!(cp[0], expect);
            // trace
            let tr: u64 = (0..n).map(|i| m.get(i, i)).sum::<u64>() % l;
            assert_eq!(cp[n - 1], (l - tr) % l);
        }
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let l = 7;
        let mut m = ModMatrix::zeros(3, 5, l);
        let vals = [1, 2, 3, 4, 5, 2, 4, 6, 1, 3, 0, 0, 1, 1, 1];
        m.data.copy_from_slice(&vals);
        let k = m.kernel();
        assert_eq!(k.len(), 5 - m.rank());
        for v in k {
            for i in 0..3 {
                let s: u64 = (0..5).map(|j| m.get(i, j) * v[j]).sum::<u64>() % l;
                assert_eq!(s, 0);
            }
        }
    }

    #[test]
    fn echelon_membership() {
        let f = field(3, 1, 2).unwrap();
        let x = f.gen();
        let mut e = Echelon::new(3);
        assert!(e.insert(&[f.one(), x, Fq::ZERO], &f));
        assert!(e.insert(&[Fq::ZERO, f.one(), f.one()], &f));
        let combo = [f.one(), f.add(x, x), x];
        // 1*(1,x,0) + x*(0,1,1)
        assert!(e.contains(&combo, &f));
        assert!(!e.insert(&combo, &f));
        assert!(e.insert(&[Fq::ZERO, Fq::ZERO, f.one()], &f));
        assert_eq!(e.rank(), 3);
    }
}
