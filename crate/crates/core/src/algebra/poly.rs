//! Univariate polynomials over a finite field and the matrix invariants built
//! on them: characteristic and minimal polynomials, squarefreeness.

use super::field::{FieldDesc, Fq};
use super::linalg::{Echelon, FieldMatrix};

/// Coefficients low degree first, no trailing zeros (the zero polynomial is empty).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly(pub Vec<Fq>);

impl Poly {
    pub fn new(mut c: Vec<Fq>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly(c)
    }

    pub fn x_pow(n: usize, f: &FieldDesc) -> Self {
        let mut c = vec![Fq::ZERO; n + 1];
        c[n] = f.one();
        Poly(c)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn sub(&self, other: &Poly, f: &FieldDesc) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly::new(
            (0..n)
                .map(|i| {
                    let a = self.0.get(i).copied().unwrap_or(Fq::ZERO);
                    let b = other.0.get(i).copied().unwrap_or(Fq::ZERO);
                    f.sub(a, b)
                })
                .collect(),
        )
    }

    pub fn mul(&self, other: &Poly, f: &FieldDesc) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly(Vec::new());
        }
        let mut c = vec![Fq::ZERO; self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            for (j, &b) in other.0.iter().enumerate() {
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        Poly::new(c)
    }

    pub fn divrem(&self, d: &Poly, f: &FieldDesc) -> (Poly, Poly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead_inv = f.inv(d.0[dd]).unwrap();
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (Poly(Vec::new()), Poly::new(r));
        }
        let mut q = vec![Fq::ZERO; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = f.mul(r[i], lead_inv);
            if c.is_zero() {
                continue;
            }
            q[i - dd] = c;
            for j in 0..=dd {
                r[i - dd + j] = f.sub(r[i - dd + j], f.mul(c, d.0[j]));
            }
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    pub fn monic(&self, f: &FieldDesc) -> Poly {
        match self.0.last() {
            None => self.clone(),
            Some(&lead) => {
                let inv = f.inv(lead).unwrap();
                Poly(self.0.iter().map(|&c| f.mul(c, inv)).collect())
            }
        }
    }

    pub fn gcd(&self, other: &Poly, f: &FieldDesc) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.divrem(&b, f).1;
            a = b;
            b = r;
        }
        a.monic(f)
    }

    pub fn derivative(&self, f: &FieldDesc) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.scale(c, (i as u64 % f.p() as u64) as u32))
                .collect(),
        )
    }

    pub fn eval(&self, x: Fq, f: &FieldDesc) -> Fq {
        self.0.iter().rev().fold(Fq::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Whether every nonzero coefficient sits in degree `deg`, i.e. a monomial.
    pub fn is_monomial(&self) -> bool {
        self.0.iter().filter(|c| !c.is_zero()).count() == 1
    }
}

/// Squarefree test via `gcd(f, f') = 1`.  Over a finite field `f' = 0` with
/// `deg f > 0` means `f` is a `p`-th power, hence not squarefree.
pub fn squarefree_test(poly: &Poly, f: &FieldDesc) -> bool {
    match poly.degree() {
        None => false,
        Some(0) => true,
        Some(_) => {
            let d = poly.derivative(f);
            if d.is_zero() {
                return false;
            }
            poly.gcd(&d, f).degree() == Some(0)
        }
    }
}

/// Characteristic polynomial `det(xI - A)` by Hessenberg reduction.
pub fn char_poly(a: &FieldMatrix, f: &FieldDesc) -> Poly {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    let mut h = a.clone();
    for col in 0..n.saturating_sub(2) {
        let Some(piv) = (col + 1..n).find(|&r| !h.get(r, col).is_zero()) else {
            continue;
        };
        if piv != col + 1 {
            for j in 0..n {
                h.data.swap(piv * n + j, (col + 1) * n + j);
            }
            for i in 0..n {
                h.data.swap(i * n + piv, i * n + col + 1);
            }
        }
        let inv = f.inv(h.get(col + 1, col)).unwrap();
        for r in col + 2..n {
            let c = f.mul(h.get(r, col), inv);
            if c.is_zero() {
                continue;
            }
            for j in 0..n {
                let v = f.sub(h.get(r, j), f.mul(c, h.get(col + 1, j)));
                h.set(r, j, v);
            }
            for i in 0..n {
                let v = f.add(h.get(i, col + 1), f.mul(c, h.get(i, r)));
                h.set(i, col + 1, v);
            }
        }
    }
    let mut polys: Vec<Vec<Fq>> = vec![vec![f.one()]];
    for k in 1..=n {
        let hk = h.get(k - 1, k - 1);
        let prev = &polys[k - 1];
        let mut next = vec![Fq::ZERO; k + 1];
        for (i, &c) in prev.iter().enumerate() {
            next[i + 1] = f.add(next[i + 1], c);
            next[i] = f.sub(next[i], f.mul(hk, c));
        }
        let mut prod = f.one();
        for i in 1..k {
            prod = f.mul(prod, h.get(k - i, k - i - 1));
            let coef = f.mul(prod, h.get(k - i - 1, k - 1));
            if coef.is_zero() {
                continue;
            }
            for (j, &c) in polys[k - i - 1].iter().enumerate() {
                next[j] = f.sub(next[j], f.mul(coef, c));
            }
        }
        polys.push(next);
    }
    Poly::new(polys.pop().unwrap())
}

/// Minimal polynomial: the first linear dependency among `I, A, A², …`.
pub fn min_poly(a: &FieldMatrix, f: &FieldDesc) -> Poly {
    let n = a.rows;
    let mut powers: Vec<FieldMatrix> = vec![FieldMatrix::identity(n, f)];
    let mut ech = Echelon::new(n * n);
    ech.insert(&powers[0].data, f);
    loop {
        let next = powers.last().unwrap().mul(a, f);
        if ech.contains(&next.data, f) {
            // solve next = Σ c_i A^i over the collected powers
            let k = powers.len();
            let mut sys = FieldMatrix::zeros(n * n, k + 1);
            for (i, pw) in powers.iter().enumerate() {
                for (r, &v) in pw.data.iter().enumerate() {
                    sys.set(r, i, v);
                }
            }
            for (r, &v) in next.data.iter().enumerate() {
                sys.set(r, k, v);
            }
            let kern = sys.kernel(f);
            assert_eq!(kern.len(), 1, "powers below the minimal degree are independent");
            return Poly::new(kern[0].clone()).monic(f);
        }
        ech.insert(&next.data, f);
        powers.push(next);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::field;

    fn mat(f: &FieldDesc, n: usize, v: &[i64]) -> FieldMatrix {
        FieldMatrix { rows: n, cols: n, data: v.iter().map(|&x| f.from_int(x)).collect() }
    }

    #[test]
    fn zero_matrix() {
        let f = field(3, 1, 1).unwrap();
        let z = mat(&f, 2, &[0, 0, 0, 0]);
        let mp = min_poly(&z, &f);
        assert_eq!(mp, Poly::x_pow(1, &f));
        assert!(squarefree_test(&mp, &f));
    }

    #[test]
    fn nilpotent_jordan_block() {
        let f = field(3, 1, 1).unwrap();
        let n = mat(&f, 2, &[0, 1, 0, 0]);
        let mp = min_poly(&n, &f);
        assert_eq!(mp, Poly::x_pow(2, &f));
        assert!(!squarefree_test(&mp, &f));
    }

    #[test]
    fn trace_zero_det_one() {
        let f = field(3, 1, 1).unwrap();
        // [[0,1],[-1,0]]: trace 0, det 1
        let x = mat(&f, 2, &[0, 1, -1, 0]);
        let mp = min_poly(&x, &f);
        assert_eq!(mp, Poly::new(vec![f.one(), Fq::ZERO, f.one()]));
        assert!(squarefree_test(&mp, &f));
        assert_eq!(char_poly(&x, &f), mp);
    }

    #[test]
    fn min_poly_divides_char_poly() {
        let f = field(5, 1, 1).unwrap();
        let cases: [&[i64]; 4] = [
            &[1, 0, 0, 0, 1, 0, 0, 0, 2],
            &[2, 1, 0, 0, 2, 0, 0, 0, 2],
            &[0, 1, 2, 3, 4, 0, 1, 1, 1],
            &[3, 0, 0, 0, 3, 0, 0, 0, 3],
        ];
        for c in cases {
            let a = mat(&f, 3, c);
            let cp = char_poly(&a, &f);
            let mp = min_poly(&a, &f);
            assert_eq!(cp.degree(), Some(3));
            assert!(cp.divrem(&mp, &f).1.is_zero());
            // Cayley-Hamilton: mp(A) = 0
            let mut acc = FieldMatrix::zeros(3, 3);
            for &coef in mp.0.iter().rev() {
                acc = acc.mul(&a, &f);
                for i in 0..3 {
                    let v = f.add(acc.get(i, i), coef);
                    acc.set(i, i, v);
                }
            }
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn p_th_power_not_squarefree() {
        let f = field(3, 1, 1).unwrap();
        // x^3 - 1 = (x-1)^3 has zero derivative
        let p = Poly::new(vec![f.from_int(-1), Fq::ZERO, Fq::ZERO, f.one()]);
        assert!(p.derivative(&f).is_zero());
        assert!(!squarefree_test(&p, &f));
    }
}
