//! Rational functions in `z` over an exact scalar field, kept in reduced form.
//!
//! The denominator is always monic and coprime to the numerator, so equality
//! of fractions is plain structural equality.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use crate::factor::FactorError;
use crate::poly::Poly;
use crate::scalar::{Field, GaussRational, Rational, Scalar};

#[derive(Clone, PartialEq)]
pub struct RatFunc<S: Scalar> {
    num: Poly<S>,
    den: Poly<S>,
}

impl<S: Scalar> RatFunc<S> {
    /// Reduce and normalize. Panics on a zero denominator.
    pub fn new(num: Poly<S>, den: Poly<S>) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFunc { num: Poly::zero(), den: Poly::one() };
        }
        let g = num.gcd(&den);
        let mut num = num.divrem(&g).0;
        let mut den = den.divrem(&g).0;
        let lc = den.leading().unwrap().clone();
        if !lc.is_one() {
            let inv = lc.inv();
            num = num.mul_scalar(&inv);
            den = den.mul_scalar(&inv);
        }
        RatFunc { num, den }
    }

    pub fn from_poly(p: Poly<S>) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn from_scalar(c: S) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    /// The coordinate function `z`.
    pub fn z() -> Self {
        Self::from_poly(Poly::x())
    }

    pub fn numerator(&self) -> &Poly<S> {
        &self.num
    }

    pub fn denominator(&self) -> &Poly<S> {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn to_poly(&self) -> Option<Poly<S>> {
        if self.is_polynomial() {
            Some(self.num.clone())
        } else {
            None
        }
    }

    /// d/dz by the quotient rule.
    pub fn derive(&self) -> Self {
        let n = self.num.derivative() * self.den.clone() - self.num.clone() * self.den.derivative();
        RatFunc::new(n, self.den.clone() * self.den.clone())
    }

    pub fn conj(&self) -> Self {
        // conjugating preserves monicity of the denominator
        RatFunc { num: self.num.conj(), den: self.den.conj() }
    }

    /// None when `x` is a pole.
    pub fn eval(&self, x: &S) -> Option<S> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) * d.inv())
        }
    }

    pub fn pow(&self, mut k: usize) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base.clone();
            }
            k >>= 1;
            if k > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

impl<S: Scalar> fmt::Display for RatFunc<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::expr::ratfunc_string(self))
    }
}

impl<S: Scalar> fmt::Debug for RatFunc<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

impl<S: Scalar> Add for RatFunc<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        RatFunc::new(
            self.num * rhs.den.clone() + rhs.num * self.den.clone(),
            self.den * rhs.den,
        )
    }
}

impl<S: Scalar> Sub for RatFunc<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<S: Scalar> Mul for RatFunc<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        RatFunc::new(self.num * rhs.num, self.den * rhs.den)
    }
}

impl<S: Scalar> Div for RatFunc<S> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        assert!(!rhs.num.is_zero(), "division by zero");
        RatFunc::new(self.num * rhs.den, self.den * rhs.num)
    }
}

impl<S: Scalar> Neg for RatFunc<S> {
    type Output = Self;
    fn neg(self) -> Self {
        RatFunc { num: -self.num, den: self.den }
    }
}

impl<S: Scalar> Field for RatFunc<S> {
    fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn inv(&self) -> Self {
        assert!(!self.num.is_zero(), "inverse of zero");
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    fn from_i64(n: i64) -> Self {
        Self::from_scalar(S::from_i64(n))
    }

    fn content(row: &[Self]) -> Option<Self> {
        // gcd of numerators over lcm of denominators: dividing by it leaves
        // coprime polynomial entries
        let mut g = Poly::zero();
        let mut l = Poly::one();
        for v in row {
            if v.is_zero() {
                continue;
            }
            g = g.gcd(&v.num);
            l = l.lcm(&v.den);
        }
        if g.is_zero() {
            return None;
        }
        Some(RatFunc::new(g, l))
    }
}

/// An ordering of the real rational function field, named by the point where
/// signs are read off.
#[derive(Debug, Clone, PartialEq)]
pub enum OrderingSpec {
    PlusInfinity,
    MinusInfinity,
    AtPointPlus(Rational),
    AtPointMinus(Rational),
}

impl fmt::Display for OrderingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderingSpec::PlusInfinity => write!(f, "plus-infinity"),
            OrderingSpec::MinusInfinity => write!(f, "minus-infinity"),
            OrderingSpec::AtPointPlus(a) => write!(f, "at:{a}:+"),
            OrderingSpec::AtPointMinus(a) => write!(f, "at:{a}:-"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("bad ordering {0:?}: expected plus-infinity, minus-infinity, at:<rational>:+ or at:<rational>:-")]
pub struct OrderingParseError(String);

impl FromStr for OrderingSpec {
    type Err = OrderingParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "plus-infinity" => return Ok(OrderingSpec::PlusInfinity),
            "minus-infinity" => return Ok(OrderingSpec::MinusInfinity),
            _ => {}
        }
        let err = || OrderingParseError(s.to_string());
        let rest = s.strip_prefix("at:").ok_or_else(err)?;
        let (point, side) = rest.rsplit_once(':').ok_or_else(err)?;
        let a = Rational::from_str(point).map_err(|_| err())?;
        match side {
            "+" => Ok(OrderingSpec::AtPointPlus(a)),
            "-" => Ok(OrderingSpec::AtPointMinus(a)),
            _ => Err(err()),
        }
    }
}

fn sign_rat(q: &Rational) -> i32 {
    use num_traits::Signed;
    if Field::is_zero(q) {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

/// Split off the exact power of (z - a) dividing p: returns (order, cofactor).
fn strip_root(p: &Poly<Rational>, a: &Rational) -> (usize, Poly<Rational>) {
    let lin = Poly::new(vec![-a.clone(), Rational::from_i64(1)]);
    let mut order = 0;
    let mut rest = p.clone();
    while !rest.is_zero() && Field::is_zero(&rest.eval(a)) {
        rest = rest.divrem(&lin).0;
        order += 1;
    }
    (order, rest)
}

impl RatFunc<Rational> {
    /// Sign of the function in the given ordering: +1, -1, or 0 for the zero
    /// function. The sign at a point `a` is read off the side limit, which is
    /// well defined even when `a` is a zero or pole.
    pub fn sign_at(&self, ord: &OrderingSpec) -> i32 {
        if self.is_zero() {
            return 0;
        }
        match ord {
            OrderingSpec::PlusInfinity => sign_rat(self.num.leading().unwrap()),
            OrderingSpec::MinusInfinity => {
                let d = self.num.degree().unwrap() + self.den.degree().unwrap();
                let s = sign_rat(self.num.leading().unwrap());
                if d % 2 == 0 {
                    s
                } else {
                    -s
                }
            }
            OrderingSpec::AtPointPlus(a) | OrderingSpec::AtPointMinus(a) => {
                let (alpha, n1) = strip_root(&self.num, a);
                let (beta, d1) = strip_root(&self.den, a);
                let mut s = sign_rat(&n1.eval(a)) * sign_rat(&d1.eval(a));
                if matches!(ord, OrderingSpec::AtPointMinus(_)) && (alpha + beta) % 2 == 1 {
                    s = -s;
                }
                s
            }
        }
    }
}

/// One summand n / q^e of a partial fraction decomposition, with
/// deg n < deg q and q monic irreducible.
#[derive(Debug, Clone, PartialEq)]
pub struct PfTerm<S: Scalar> {
    pub factor: Poly<S>,
    pub exp: usize,
    pub num: Poly<S>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartialFractions<S: Scalar> {
    pub poly: Poly<S>,
    pub terms: Vec<PfTerm<S>>,
}

impl<S: Scalar> PartialFractions<S> {
    pub fn recombine(&self) -> RatFunc<S> {
        let mut acc = RatFunc::from_poly(self.poly.clone());
        for t in &self.terms {
            acc = acc + RatFunc::new(t.num.clone(), t.factor.pow(t.exp));
        }
        acc
    }
}

/// Partial fraction decomposition over the scalar field, one block per
/// irreducible factor of the denominator.
pub fn partial_fractions<S: Scalar>(f: &RatFunc<S>) -> Result<PartialFractions<S>, FactorError> {
    let (poly, rem) = f.num.divrem(&f.den);
    let mut terms = Vec::new();
    if !rem.is_zero() {
        let fac = S::factor(&f.den)?;
        for (q, m) in &fac.factors {
            let qm = q.pow(*m);
            let rest = f.den.divrem(&qm).0;
            // v inverts `rest` modulo q^m, so rem*v is this block's numerator
            let (g, _, v) = qm.ext_gcd(&rest);
            debug_assert!(g.is_one());
            let mut block = (rem.clone() * v).divrem(&qm).1;
            let mut exp = *m;
            while !block.is_zero() && exp > 0 {
                let (rest_digits, digit) = block.divrem(q);
                if !digit.is_zero() {
                    terms.push(PfTerm { factor: q.clone(), exp, num: digit });
                }
                block = rest_digits;
                exp -= 1;
            }
        }
    }
    let out = PartialFractions { poly, terms };
    debug_assert_eq!(out.recombine(), f.clone());
    Ok(out)
}

pub fn to_gauss<S: Scalar>(f: &RatFunc<S>) -> RatFunc<GaussRational> {
    RatFunc {
        num: f.num.map(|c| GaussRational::new(c.re(), c.im())),
        den: f.den.map(|c| GaussRational::new(c.re(), c.im())),
    }
}

/// Some(f) when every coefficient is real, None otherwise.
pub fn to_real(f: &RatFunc<GaussRational>) -> Option<RatFunc<Rational>> {
    let real = |p: &Poly<GaussRational>| -> Option<Poly<Rational>> {
        let mut out = Vec::with_capacity(p.coeffs().len());
        for c in p.coeffs() {
            if !Field::is_zero(&c.im) {
                return None;
            }
            out.push(c.re.clone());
        }
        Some(Poly::new(out))
    };
    Some(RatFunc { num: real(&f.num)?, den: real(&f.den)? })
}

#[cfg(test)]
mod tests {
    use super::*;

    type F = RatFunc<Rational>;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn f(num: &[i64], den: &[i64]) -> F {
        F::new(Poly::from_i64s(num), Poly::from_i64s(den))
    }

    #[test]
    fn reduction_is_canonical() {
        // (2z^2 - 2) / (4z - 4) reduces to (z+1)/2
        let a = f(&[-2, 0, 2], &[-4, 4]);
        assert_eq!(a, f(&[1, 1], &[2]));
        assert_eq!(a.denominator().leading().unwrap(), &Rational::from_i64(1));
    }

    #[test]
    fn quotient_rule() {
        // d/dz (z / (z^2 + 1)) = (1 - z^2) / (z^2 + 1)^2
        let a = f(&[0, 1], &[1, 0, 1]);
        assert_eq!(a.derive(), f(&[1, 0, -1], &[1, 0, 2, 0, 1]));
    }

    #[test]
    fn signs_in_each_ordering() {
        let inv_z = f(&[1], &[0, 1]);
        assert_eq!(inv_z.sign_at(&OrderingSpec::PlusInfinity), 1);
        assert_eq!(inv_z.sign_at(&OrderingSpec::MinusInfinity), -1);
        assert_eq!(inv_z.sign_at(&OrderingSpec::AtPointPlus(q(0, 1))), 1);
        assert_eq!(inv_z.sign_at(&OrderingSpec::AtPointMinus(q(0, 1))), -1);

        let g = f(&[-1, 1], &[1, 1]); // (z-1)/(z+1)
        assert_eq!(g.sign_at(&OrderingSpec::PlusInfinity), 1);
        assert_eq!(g.sign_at(&OrderingSpec::MinusInfinity), 1);
        assert_eq!(g.sign_at(&OrderingSpec::AtPointPlus(q(1, 1))), 1);
        assert_eq!(g.sign_at(&OrderingSpec::AtPointMinus(q(1, 1))), -1);
        assert_eq!(g.sign_at(&OrderingSpec::AtPointPlus(q(0, 1))), -1);

        let sq = f(&[1, 0, 1], &[1]); // z^2 + 1 is totally positive
        for ord in [
            OrderingSpec::PlusInfinity,
            OrderingSpec::MinusInfinity,
            OrderingSpec::AtPointPlus(q(3, 2)),
            OrderingSpec::AtPointMinus(q(-7, 3)),
        ] {
            assert_eq!(sq.sign_at(&ord), 1);
        }
    }

    #[test]
    fn ordering_grammar_round_trips() {
        for s in ["plus-infinity", "minus-infinity", "at:-3/2:+", "at:0:-"] {
            let ord: OrderingSpec = s.parse().unwrap();
            assert_eq!(ord.to_string(), s);
        }
        assert!("at:z:+".parse::<OrderingSpec>().is_err());
        assert!("infinity".parse::<OrderingSpec>().is_err());
    }

    #[test]
    fn partial_fractions_simple_poles() {
        // 1/z + 1/(2(z-1)) = (3z - 2) / (2 z (z - 1))
        let r = f(&[-2, 3], &[0, -2, 2]);
        let pf = partial_fractions(&r).unwrap();
        assert!(pf.poly.is_zero());
        assert_eq!(pf.terms.len(), 2);
        assert_eq!(pf.recombine(), r);
        let at_z = pf.terms.iter().find(|t| t.factor == Poly::from_i64s(&[0, 1])).unwrap();
        assert_eq!(at_z.num, Poly::one());
        assert_eq!(at_z.exp, 1);
        let at_one = pf.terms.iter().find(|t| t.factor == Poly::from_i64s(&[-1, 1])).unwrap();
        assert_eq!(at_one.num, Poly::constant(q(1, 2)));
    }

    #[test]
    fn partial_fractions_higher_order_block() {
        // (z^3 + 1) / z^2 = z + 1/z^2
        let r = f(&[1, 0, 0, 1], &[0, 0, 1]);
        let pf = partial_fractions(&r).unwrap();
        assert_eq!(pf.poly, Poly::from_i64s(&[0, 1]));
        assert_eq!(pf.terms.len(), 1);
        assert_eq!(pf.terms[0].exp, 2);
        assert_eq!(pf.terms[0].num, Poly::one());
        assert_eq!(pf.recombine(), r);
    }
}
