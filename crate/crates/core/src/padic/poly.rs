//! Polynomials over `ℚ`, over `ℤ/p^N` and over `𝔽_p`.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};

use super::arith::{format_rational, symmetric, zp_pow, Q, Z};
use super::matrix::QMat;

/// Rational polynomial, coefficients from degree 0 up; no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct QPoly(Vec<Q>);

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<String> = self.0.iter().map(format_rational).collect();
        write!(f, "QPoly[{}]", cs.join(", "))
    }
}

impl QPoly {
    pub fn new(mut c: Vec<Q>) -> QPoly {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        QPoly(c)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.0
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.0.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly(Vec::new());
        }
        let mut c = vec![Q::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        QPoly::new(c)
    }

    /// `f(M)` by Horner's rule.
    pub fn eval_matrix(&self, m: &QMat) -> QMat {
        let n = m.rows();
        let mut acc = QMat::zeros(n, n);
        for c in self.0.iter().rev() {
            acc = &acc * m;
            for i in 0..n {
                acc[(i, i)] += c;
            }
        }
        acc
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.0.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }
}

/// Polynomial over `ℤ/p^N`, coefficients in `[0, p^N)`, degree 0 up.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModPoly {
    pub coeffs: Vec<Z>,
}

impl ModPoly {
    pub fn reduce(mut coeffs: Vec<Z>, m: &Z) -> ModPoly {
        for c in coeffs.iter_mut() {
            *c = c.mod_floor(m);
        }
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        ModPoly { coeffs }
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Z {
        self.coeffs.get(i).cloned().unwrap_or_else(Z::zero)
    }

    pub fn mul(&self, other: &ModPoly, m: &Z) -> ModPoly {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return ModPoly { coeffs: Vec::new() };
        }
        let mut c = vec![Z::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        ModPoly::reduce(c, m)
    }

    pub fn sub(&self, other: &ModPoly, m: &Z) -> ModPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        ModPoly::reduce((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect(), m)
    }

    /// Symmetric integer lift, as a rational polynomial.
    pub fn to_qpoly(&self, m: &Z) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| Q::from_integer(symmetric(c, m))).collect())
    }

    pub fn from_fp(f: &FpPoly) -> ModPoly {
        ModPoly { coeffs: f.0.iter().map(|&c| Z::from(c)).collect() }
    }
}

/// Polynomial over `𝔽_p` with `p` small, degree 0 up, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FpPoly(pub Vec<u64>);

impl FpPoly {
    pub fn new(mut c: Vec<u64>, p: u64) -> FpPoly {
        for x in c.iter_mut() {
            *x %= p;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly(c)
    }

    pub fn from_mod(f: &ModPoly, p: u64) -> FpPoly {
        let pz = Z::from(p);
        FpPoly::new(f.coeffs.iter().map(|c| u64::try_from(c.mod_floor(&pz)).expect("residue fits")).collect(), p)
    }

    pub fn constant(c: u64, p: u64) -> FpPoly {
        FpPoly::new(vec![c], p)
    }

    pub fn monomial(k: usize) -> FpPoly {
        let mut c = vec![0; k + 1];
        c[k] = 1;
        FpPoly(c)
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn lead(&self) -> u64 {
        *self.0.last().unwrap_or(&0)
    }

    fn coeff(&self, i: usize) -> u64 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn add(&self, o: &FpPoly, p: u64) -> FpPoly {
        let n = self.0.len().max(o.0.len());
        FpPoly::new((0..n).map(|i| (self.coeff(i) + o.coeff(i)) % p).collect(), p)
    }

    pub fn sub(&self, o: &FpPoly, p: u64) -> FpPoly {
        let n = self.0.len().max(o.0.len());
        FpPoly::new((0..n).map(|i| (self.coeff(i) + p - o.coeff(i)) % p).collect(), p)
    }

    pub fn mul(&self, o: &FpPoly, p: u64) -> FpPoly {
        if self.is_zero() || o.is_zero() {
            return FpPoly(Vec::new());
        }
        let mut c = vec![0u64; self.0.len() + o.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            for (j, &b) in o.0.iter().enumerate() {
                c[i + j] = ((c[i + j] as u128 + a as u128 * b as u128) % p as u128) as u64;
            }
        }
        FpPoly::new(c, p)
    }

    pub fn scale(&self, k: u64, p: u64) -> FpPoly {
        FpPoly::new(self.0.iter().map(|&c| ((c as u128 * k as u128) % p as u128) as u64).collect(), p)
    }

    /// Quotient and remainder; `d` nonzero.
    pub fn divrem(&self, d: &FpPoly, p: u64) -> (FpPoly, FpPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv = inv_u64(d.lead(), p);
        let mut r = self.0.clone();
        let mut quo = vec![0u64; self.0.len().saturating_sub(dd).max(1)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let c = ((*r.last().unwrap() as u128 * inv as u128) % p as u128) as u64;
            quo[k] = c;
            for (i, &dc) in d.0.iter().enumerate() {
                r[k + i] = (r[k + i] + p - ((c as u128 * dc as u128) % p as u128) as u64) % p;
            }
            while r.last() == Some(&0) {
                r.pop();
            }
        }
        (FpPoly::new(quo, p), FpPoly::new(r, p))
    }

    /// `(g, s, t)` with `s·a + t·b = g`, `g` monic.
    pub fn ext_gcd(a: &FpPoly, b: &FpPoly, p: u64) -> (FpPoly, FpPoly, FpPoly) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (FpPoly::constant(1, p), FpPoly(Vec::new()));
        let (mut t0, mut t1) = (FpPoly(Vec::new()), FpPoly::constant(1, p));
        while !r1.is_zero() {
            let (qq, r) = r0.divrem(&r1, p);
            let s = s0.sub(&qq.mul(&s1, p), p);
            let t = t0.sub(&qq.mul(&t1, p), p);
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s);
            (t0, t1) = (t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = inv_u64(r0.lead(), p);
        (r0.scale(inv, p), s0.scale(inv, p), t0.scale(inv, p))
    }
}

pub fn inv_u64(a: u64, p: u64) -> u64 {
    let (a, m) = (Z::from(a), Z::from(p));
    let e = a.extended_gcd(&m);
    assert!(e.gcd.is_one(), "{a} not invertible mod {p}");
    u64::try_from(e.x.mod_floor(&m)).expect("fits")
}

/// `p^N` as an integer.
pub fn modulus(p: u64, n: u32) -> Z {
    zp_pow(p, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::arith::q;

    #[test]
    fn fp_ext_gcd() {
        let p = 5;
        let a = FpPoly::new(vec![1, 0, 1], p); // x² + 1 = (x−2)(x−3) mod 5
        let b = FpPoly::new(vec![3, 1], p); // x − 2
        let (g, s, t) = FpPoly::ext_gcd(&a, &b, p);
        assert_eq!(g, b);
        assert_eq!(s.mul(&a, p).add(&t.mul(&b, p), p), g);
        let c = FpPoly::new(vec![1, 1], p);
        let (g, s, t) = FpPoly::ext_gcd(&a, &c, p);
        assert_eq!(g, FpPoly::constant(1, p));
        assert_eq!(s.mul(&a, p).add(&t.mul(&c, p), p), g);
    }

    #[test]
    fn divrem_identity() {
        let p = 7;
        let a = FpPoly::new(vec![3, 5, 0, 2, 6], p);
        let d = FpPoly::new(vec![1, 4, 3], p);
        let (qq, r) = a.divrem(&d, p);
        assert_eq!(qq.mul(&d, p).add(&r, p), a);
        assert!(r.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn eval_matrix_matches_scalar() {
        let f = QPoly::new(vec![q(5), q(-3), q(1)]);
        let m = QMat::diag(&[q(2), q(3)]);
        let fm = f.eval_matrix(&m);
        assert_eq!(fm[(0, 0)], f.eval(&q(2)));
        assert_eq!(fm[(1, 1)], f.eval(&q(3)));
    }
}
