//! Scalar arithmetic: exact rationals, Gaussian rationals, and the field
//! abstraction the rest of the crate is generic over.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::factor::{FactorError, Factorization};
use crate::poly::Poly;

pub type Rational = num_rational::BigRational;

/// Base-field tag carried by every scalar type.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Base {
    Q,
    Qi,
}

/// Exact field operations. Implementors are expected to be canonical:
/// structural equality must coincide with mathematical equality.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    /// Multiplicative inverse. Panics on zero.
    fn inv(&self) -> Self;
    fn from_i64(n: i64) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// A scale c so that row/c has coprime integral entries, when the field
    /// has such a notion. Used by elimination to keep intermediates small;
    /// None leaves the row untouched.
    fn content(row: &[Self]) -> Option<Self>
    where
        Self: Sized,
    {
        let _ = row;
        None
    }
}

/// Constants of the tower: Q or Q(i), with conjugation i -> -i.
pub trait Scalar: Field {
    const BASE: Base;

    fn conj(&self) -> Self;
    fn from_rational(q: Rational) -> Self;
    fn re(&self) -> Rational;
    fn im(&self) -> Rational;
    /// The element i, when the base field contains it.
    fn imaginary_unit() -> Option<Self>;
    /// Irreducible factorization of a polynomial over this field.
    fn factor(f: &Poly<Self>) -> Result<Factorization<Self>, FactorError>;

    fn to_rational(&self) -> Option<Rational> {
        if Field::is_zero(&self.im()) {
            Some(self.re())
        } else {
            None
        }
    }

    /// Upper bound for the archimedean absolute value; exact for rationals.
    fn abs_bound(&self) -> Rational {
        self.re().abs() + self.im().abs()
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn inv(&self) -> Self {
        if Zero::is_zero(self) {
            panic!("inverse of zero");
        }
        self.recip()
    }
    fn from_i64(n: i64) -> Self {
        Rational::from_integer(n.into())
    }
    fn content(row: &[Self]) -> Option<Self> {
        rational_content(row.iter())
    }
}

/// gcd of numerators over lcm of denominators, sign of the first nonzero.
fn rational_content<'a>(values: impl Iterator<Item = &'a Rational>) -> Option<Rational> {
    use num_integer::Integer;
    let mut num = num_bigint::BigInt::from(0);
    let mut den = num_bigint::BigInt::from(1);
    let mut negative = None;
    for v in values {
        if Zero::is_zero(v) {
            continue;
        }
        negative.get_or_insert(v.numer().sign() == num_bigint::Sign::Minus);
        num = num.gcd(v.numer());
        den = den.lcm(v.denom());
    }
    if Zero::is_zero(&num) {
        return None;
    }
    if negative == Some(true) {
        num = -num;
    }
    Some(Rational::new(num, den))
}

impl Scalar for Rational {
    const BASE: Base = Base::Q;

    fn conj(&self) -> Self {
        self.clone()
    }
    fn from_rational(q: Rational) -> Self {
        q
    }
    fn re(&self) -> Rational {
        self.clone()
    }
    fn im(&self) -> Rational {
        Zero::zero()
    }
    fn imaginary_unit() -> Option<Self> {
        None
    }
    fn factor(f: &Poly<Self>) -> Result<Factorization<Self>, FactorError> {
        crate::factor::factor_rational(f)
    }
}

/// Element of Q(i), kept as an exact pair of rationals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GaussRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussRational { re, im }
    }

    pub fn from_parts_i64(re: i64, im: i64) -> Self {
        GaussRational::new(Rational::from_integer(re.into()), Rational::from_integer(im.into()))
    }

    pub fn i() -> Self {
        GaussRational::from_parts_i64(0, 1)
    }

    /// re^2 + im^2, the norm down to Q.
    pub fn norm(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }
}

impl Add for GaussRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        GaussRational::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for GaussRational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        GaussRational::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul for GaussRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let re = &self.re * &rhs.re - &self.im * &rhs.im;
        let im = &self.re * &rhs.im + &self.im * &rhs.re;
        GaussRational::new(re, im)
    }
}

impl Neg for GaussRational {
    type Output = Self;
    fn neg(self) -> Self {
        GaussRational::new(-self.re, -self.im)
    }
}

impl Div for GaussRational {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * rhs.inv()
    }
}

impl fmt::Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let re0 = Zero::is_zero(&self.re);
        let im0 = Zero::is_zero(&self.im);
        if im0 {
            return write!(f, "{}", self.re);
        }
        let im_str = if self.im == One::one() {
            "i".to_string()
        } else if self.im == -<Rational as One>::one() {
            "-i".to_string()
        } else {
            format!("{}*i", self.im)
        };
        if re0 {
            write!(f, "{im_str}")
        } else if self.im.is_negative() {
            // im_str already carries the sign
            write!(f, "{}{}", self.re, im_str)
        } else {
            write!(f, "{}+{}", self.re, im_str)
        }
    }
}

impl Field for GaussRational {
    fn zero() -> Self {
        GaussRational::from_parts_i64(0, 0)
    }
    fn one() -> Self {
        GaussRational::from_parts_i64(1, 0)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.re) && Zero::is_zero(&self.im)
    }
    fn inv(&self) -> Self {
        let n = self.norm();
        if Zero::is_zero(&n) {
            panic!("inverse of zero");
        }
        GaussRational::new(&self.re / &n, -&self.im / &n)
    }
    fn from_i64(n: i64) -> Self {
        GaussRational::from_parts_i64(n, 0)
    }
    fn content(row: &[Self]) -> Option<Self> {
        // rational content of all real and imaginary parts; keeps entries
        // in Z[i] with no common rational divisor
        rational_content(row.iter().flat_map(|v| [&v.re, &v.im]))
            .map(GaussRational::from_rational)
    }
}

impl Scalar for GaussRational {
    const BASE: Base = Base::Qi;

    fn conj(&self) -> Self {
        GaussRational::new(self.re.clone(), -&self.im)
    }
    fn from_rational(q: Rational) -> Self {
        GaussRational::new(q, Zero::zero())
    }
    fn re(&self) -> Rational {
        self.re.clone()
    }
    fn im(&self) -> Rational {
        self.im.clone()
    }
    fn imaginary_unit() -> Option<Self> {
        Some(GaussRational::i())
    }
    fn factor(f: &Poly<Self>) -> Result<Factorization<Self>, FactorError> {
        crate::factor::factor_gauss(f)
    }
}
