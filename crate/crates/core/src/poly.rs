//! Dense univariate polynomials over an exact field, lowest degree first.
//! The zero polynomial is the empty coefficient vector; otherwise the leading
//! coefficient is nonzero, so equality is structural.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::{Field, Scalar};

#[derive(Clone, PartialEq)]
pub struct Poly<S: Field> {
    c: Vec<S>,
}

impl<S: Field> Poly<S> {
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        Poly { c: coeffs }
    }

    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(S::one())
    }

    pub fn constant(c: S) -> Self {
        Poly::new(vec![c])
    }

    /// The generator of the polynomial ring (z, or X for characteristic
    /// polynomials; the type does not care).
    pub fn x() -> Self {
        Poly::new(vec![S::zero(), S::one()])
    }

    pub fn monomial(c: S, k: usize) -> Self {
        let mut v = vec![S::zero(); k];
        v.push(c);
        Poly::new(v)
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&n| S::from_i64(n)).collect())
    }

    pub fn coeffs(&self) -> &[S] {
        &self.c
    }

    /// Coefficient of z^k, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> S {
        self.c.get(k).cloned().unwrap_or_else(S::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    pub fn leading(&self) -> Option<&S> {
        self.c.last()
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn eval(&self, at: &S) -> S {
        let mut acc = S::zero();
        for c in self.c.iter().rev() {
            acc = acc * at.clone() + c.clone();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.c.len() <= 1 {
            return Poly::zero();
        }
        let d: Vec<S> = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.clone() * S::from_i64(k as i64))
            .collect();
        Poly::new(d)
    }

    pub fn mul_scalar(&self, s: &S) -> Self {
        Poly::new(self.c.iter().map(|c| c.clone() * s.clone()).collect())
    }

    /// Multiply by z^k.
    pub fn shifted(&self, k: usize) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![S::zero(); k];
        v.extend(self.c.iter().cloned());
        Poly::new(v)
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Poly::zero(),
            Some(lc) => self.mul_scalar(&lc.inv()),
        }
    }

    /// Euclidean division: self = q * div + r with deg r < deg div.
    /// Panics when div is zero.
    pub fn divrem(&self, div: &Self) -> (Self, Self) {
        let dd = div.degree().expect("division by the zero polynomial");
        let lc_inv = div.leading().unwrap().inv();
        let mut rem = self.c.clone();
        if rem.len() < dd + 1 {
            return (Poly::zero(), self.clone());
        }
        let mut quo = vec![S::zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = rem[k].clone();
            if c.is_zero() {
                continue;
            }
            let q = c * lc_inv.clone();
            quo[k - dd] = q.clone();
            for j in 0..=dd {
                let t = rem[k - dd + j].clone() - q.clone() * div.c[j].clone();
                rem[k - dd + j] = t;
            }
        }
        (Poly::new(quo), Poly::new(rem))
    }

    pub fn divides(&self, other: &Self) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.divrem(self).1.is_zero()
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: returns (g, u, v) with u*self + v*other = g, g monic.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let mut r0 = self.clone();
        let mut r1 = other.clone();
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            r0 = r1;
            r1 = r;
            let s = s0 - q.clone() * s1.clone();
            s0 = s1;
            s1 = s;
            let t = t0 - q * t1.clone();
            t0 = t1;
            t1 = t;
        }
        if r0.is_zero() {
            return (Poly::zero(), Poly::zero(), Poly::zero());
        }
        let lc_inv = r0.leading().unwrap().inv();
        (r0.mul_scalar(&lc_inv), s0.mul_scalar(&lc_inv), t0.mul_scalar(&lc_inv))
    }

    pub fn lcm(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let g = self.gcd(other);
        (self.clone() * other.clone()).divrem(&g).0.monic()
    }

    /// Product of the distinct irreducible factors: f / gcd(f, f').
    pub fn squarefree_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.divrem(&g).0.monic()
    }

    pub fn map<T: Field>(&self, f: impl Fn(&S) -> T) -> Poly<T> {
        Poly::new(self.c.iter().map(f).collect())
    }
}

impl<S: Scalar> Poly<S> {
    /// Coefficientwise conjugation.
    pub fn conj(&self) -> Self {
        self.map(|c| c.conj())
    }
}

impl<S: Field> Add for Poly<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let n = self.c.len().max(rhs.c.len());
        let mut v = Vec::with_capacity(n);
        for k in 0..n {
            let a = self.c.get(k).cloned().unwrap_or_else(S::zero);
            let b = rhs.c.get(k).cloned().unwrap_or_else(S::zero);
            v.push(a + b);
        }
        Poly::new(v)
    }
}

impl<S: Field> Sub for Poly<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<S: Field> Neg for Poly<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Poly::new(self.c.into_iter().map(|c| -c).collect())
    }
}

impl<S: Field> Mul for Poly<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![S::zero(); self.c.len() + rhs.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                let t = v[i + j].clone() + a.clone() * b.clone();
                v[i + j] = t;
            }
        }
        Poly::new(v)
    }
}

// Display goes through the canonical expression printer so that what tests
// and the CLI show is always re-parseable.
impl<S: Scalar> fmt::Display for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::expr::poly_string(self))
    }
}

impl<S: Field> fmt::Debug for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type P = Poly<Rational>;

    #[test]
    fn divrem_roundtrip() {
        let f = P::from_i64s(&[1, 0, -3, 2, 5]);
        let g = P::from_i64s(&[2, 1, 1]);
        let (q, r) = f.divrem(&g);
        assert_eq!(q * g.clone() + r.clone(), f);
        assert!(r.degree().unwrap_or(0) < g.degree().unwrap());
    }

    #[test]
    fn gcd_of_products() {
        // (z-1)(z+2) and (z-1)(z-3) share exactly z-1.
        let a = P::from_i64s(&[-1, 1]) * P::from_i64s(&[2, 1]);
        let b = P::from_i64s(&[-1, 1]) * P::from_i64s(&[-3, 1]);
        assert_eq!(a.gcd(&b), P::from_i64s(&[-1, 1]));
    }

    #[test]
    fn ext_gcd_identity() {
        let a = P::from_i64s(&[1, 2, 1]);
        let b = P::from_i64s(&[-1, 1]);
        let (g, u, v) = a.ext_gcd(&b);
        assert_eq!(u * a + v * b, g);
    }

    #[test]
    fn derivative_leibniz_instance() {
        let f = P::from_i64s(&[3, 0, 1]);
        let g = P::from_i64s(&[-2, 5]);
        let lhs = (f.clone() * g.clone()).derivative();
        let rhs = f.derivative() * g.clone() + f * g.derivative();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn squarefree_part_strips_multiplicity() {
        let f = P::from_i64s(&[-1, 1]).pow(3) * P::from_i64s(&[1, 1]);
        let sf = f.squarefree_part();
        assert_eq!(sf, P::from_i64s(&[-1, 1]) * P::from_i64s(&[1, 1]));
    }
}
