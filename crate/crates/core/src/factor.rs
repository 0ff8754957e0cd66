//! Irreducible factorization over Q and Q(i), desk scale.
//!
//! Strategy: squarefree decomposition, then rational-root extraction, then a
//! trial-factor (Kronecker) search for the remaining part. Inputs past degree
//! 24, or with coefficients whose divisor enumeration would be unreasonable,
//! are rejected rather than approximated.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::poly::Poly;
use crate::scalar::{Field, GaussRational, Rational, Scalar};
use crate::sturm::{sturm_count, Bound};

const MAX_DEGREE: usize = 24;
const MAX_TRIAL_SQRT: u64 = 10_000_000;
const MAX_TUPLES: u64 = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FactorError {
    #[error("unsupported degree {0}")]
    UnsupportedDegree(usize),
    #[error("coefficients too large for the trial-factor search")]
    CoefficientsTooLarge,
}

/// unit * prod(factors[k].0 ^ factors[k].1), factors monic irreducible,
/// sorted by degree then coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Factorization<S: Field> {
    pub unit: S,
    pub factors: Vec<(Poly<S>, usize)>,
}

impl<S: Field> Factorization<S> {
    pub fn recombine(&self) -> Poly<S> {
        let mut acc = Poly::constant(self.unit.clone());
        for (q, m) in &self.factors {
            acc = acc * q.pow(*m);
        }
        acc
    }
}

fn cmp_scalar<S: Scalar>(a: &S, b: &S) -> Ordering {
    (a.re(), a.im()).cmp(&(b.re(), b.im()))
}

fn cmp_poly<S: Scalar>(a: &Poly<S>, b: &Poly<S>) -> Ordering {
    a.degree()
        .cmp(&b.degree())
        .then_with(|| {
            for k in (0..a.coeffs().len()).rev() {
                let c = cmp_scalar(&a.coeff(k), &b.coeff(k));
                if c != Ordering::Equal {
                    return c;
                }
            }
            Ordering::Equal
        })
}

fn sort_factors<S: Scalar>(factors: &mut [(Poly<S>, usize)]) {
    factors.sort_by(|x, y| cmp_poly(&x.0, &y.0));
}

/// Yun squarefree decomposition of a monic polynomial (characteristic zero):
/// returns monic pairwise-coprime squarefree parts with their multiplicities.
pub fn squarefree_decomposition<S: Field>(f: &Poly<S>) -> Vec<(Poly<S>, usize)> {
    let f = f.monic();
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let df = f.derivative();
    let g = f.gcd(&df);
    let mut c = f.divrem(&g).0;
    let mut d = df.divrem(&g).0 - c.derivative();
    let mut i = 1usize;
    while c.degree().unwrap_or(0) > 0 {
        let a = c.gcd(&d);
        if a.degree().unwrap_or(0) > 0 {
            out.push((a.clone(), i));
        }
        c = c.divrem(&a).0;
        d = d.divrem(&a).0 - c.derivative();
        i += 1;
    }
    out
}

fn positive_divisors(n: &BigInt) -> Result<Vec<BigInt>, FactorError> {
    let n = n.abs();
    debug_assert!(!n.is_zero());
    let root = n.sqrt();
    if root > BigInt::from(MAX_TRIAL_SQRT) {
        return Err(FactorError::CoefficientsTooLarge);
    }
    let mut divs = Vec::new();
    let mut i = BigInt::one();
    while &i * &i <= n {
        if n.is_multiple_of(&i) {
            divs.push(i.clone());
            divs.push(&n / &i);
        }
        i += 1;
    }
    divs.sort();
    divs.dedup();
    Ok(divs)
}

/// Clear denominators and content: returns the primitive integer coefficient
/// vector of a nonzero rational polynomial (lowest degree first).
fn primitive_integer_coeffs(f: &Poly<Rational>) -> Vec<BigInt> {
    let mut den = BigInt::one();
    for c in f.coeffs() {
        den = den.lcm(c.denom());
    }
    let mut ints: Vec<BigInt> = f.coeffs().iter().map(|c| c.numer() * (&den / c.denom())).collect();
    let mut content = BigInt::zero();
    for c in &ints {
        content = content.gcd(c);
    }
    if !content.is_zero() && !content.is_one() {
        for c in &mut ints {
            *c /= &content;
        }
    }
    ints
}

/// Distinct rational roots, by the rational root theorem.
pub fn rational_roots(f: &Poly<Rational>) -> Result<Vec<Rational>, FactorError> {
    assert!(!f.is_zero(), "roots of the zero polynomial");
    let mut roots = Vec::new();
    let mut g = f.clone();
    if Field::is_zero(&g.coeff(0)) {
        roots.push(Zero::zero());
        let coeffs = g.coeffs().to_vec();
        let k = coeffs.iter().position(|c| !Field::is_zero(c)).unwrap();
        g = Poly::new(coeffs[k..].to_vec());
    }
    if g.degree().unwrap_or(0) == 0 {
        roots.sort();
        return Ok(roots);
    }
    let ints = primitive_integer_coeffs(&g);
    let c0 = ints.first().unwrap().clone();
    let ck = ints.last().unwrap().clone();
    let ps = positive_divisors(&c0)?;
    let qs = positive_divisors(&ck)?;
    for p in &ps {
        for q in &qs {
            if !p.gcd(q).is_one() {
                continue;
            }
            for cand in [
                Rational::new(p.clone(), q.clone()),
                Rational::new(-p.clone(), q.clone()),
            ] {
                if Field::is_zero(&g.eval(&cand)) && !roots.contains(&cand) {
                    roots.push(cand);
                }
            }
        }
    }
    roots.sort();
    Ok(roots)
}

fn lagrange_interpolate(points: &[(Rational, Rational)]) -> Poly<Rational> {
    let mut acc: Poly<Rational> = Poly::zero();
    for (j, (xj, yj)) in points.iter().enumerate() {
        if Field::is_zero(yj) {
            continue;
        }
        let mut term = Poly::constant(yj.clone());
        for (k, (xk, _)) in points.iter().enumerate() {
            if k == j {
                continue;
            }
            // (X - xk) / (xj - xk)
            let inv = (xj - xk).recip();
            term = term * Poly::new(vec![-xk * &inv, inv.clone()]);
        }
        acc = acc + term;
    }
    acc
}

/// Kronecker trial-factor search: a monic factor of degree `t` of `h`, if one
/// exists. `h` must be squarefree with no rational roots.
fn kronecker_factor(h: &Poly<Rational>, t: usize) -> Result<Option<Poly<Rational>>, FactorError> {
    let pts: Vec<Rational> = (0..=t as i64)
        .map(|j| {
            // 0, 1, -1, 2, -2, ...
            let m = (j + 1) / 2;
            Rational::from_integer(if j % 2 == 1 { m } else { -m }.into())
        })
        .collect();
    let values: Vec<Rational> = pts.iter().map(|x| h.eval(x)).collect();
    let mut div_sets: Vec<Vec<Rational>> = Vec::new();
    let mut total: u64 = 1;
    for (j, v) in values.iter().enumerate() {
        assert!(!Field::is_zero(v), "rational roots must be removed first");
        // Divisors of a value of h are, up to bounded denominators, the only
        // possible values of an integer factor; h here has been cleared to
        // integers so rational candidates are not needed.
        let num = v.numer().clone();
        let base = positive_divisors(&num)?;
        let mut set: Vec<Rational> = Vec::new();
        for d in base {
            set.push(Rational::from_integer(d.clone()));
            if j > 0 {
                set.push(Rational::from_integer(-d));
            }
        }
        total = total.saturating_mul(set.len() as u64);
        if total > MAX_TUPLES {
            return Err(FactorError::CoefficientsTooLarge);
        }
        div_sets.push(set);
    }
    let mut idx = vec![0usize; div_sets.len()];
    loop {
        let points: Vec<(Rational, Rational)> = pts
            .iter()
            .cloned()
            .zip(idx.iter().enumerate().map(|(j, &k)| div_sets[j][k].clone()))
            .collect();
        let g = lagrange_interpolate(&points);
        if g.degree() == Some(t) && g.divides(h) {
            return Ok(Some(g.monic()));
        }
        // odometer
        let mut carry = true;
        for j in 0..idx.len() {
            if !carry {
                break;
            }
            idx[j] += 1;
            if idx[j] == div_sets[j].len() {
                idx[j] = 0;
            } else {
                carry = false;
            }
        }
        if carry {
            return Ok(None);
        }
    }
}

/// Split a monic squarefree polynomial with no rational roots into monic
/// irreducible factors.
fn split_rootless_q(h: &Poly<Rational>) -> Result<Vec<Poly<Rational>>, FactorError> {
    let deg = h.degree().unwrap_or(0);
    if deg == 0 {
        return Ok(Vec::new());
    }
    // Degree 2 or 3 with no roots in the field is irreducible.
    if deg <= 3 {
        return Ok(vec![h.monic()]);
    }
    // Work on the integer model so factor values divide polynomial values.
    let ints = primitive_integer_coeffs(h);
    let hz = Poly::new(ints.into_iter().map(Rational::from_integer).collect::<Vec<_>>());
    for t in 2..=deg / 2 {
        if let Some(g) = kronecker_factor(&hz, t)? {
            let rest = h.divrem(&g).0;
            let mut out = split_rootless_q(&g)?;
            out.extend(split_rootless_q(&rest)?);
            return Ok(out);
        }
    }
    Ok(vec![h.monic()])
}

pub fn factor_rational(f: &Poly<Rational>) -> Result<Factorization<Rational>, FactorError> {
    assert!(!f.is_zero(), "factorization of the zero polynomial");
    let deg = f.degree().unwrap();
    if deg > MAX_DEGREE {
        return Err(FactorError::UnsupportedDegree(deg));
    }
    let unit = f.leading().unwrap().clone();
    let mut factors: Vec<(Poly<Rational>, usize)> = Vec::new();
    for (part, mult) in squarefree_decomposition(f) {
        let mut rest = part;
        for r in rational_roots(&rest)? {
            let lin = Poly::new(vec![-r, One::one()]);
            rest = rest.divrem(&lin).0;
            factors.push((lin, mult));
        }
        for q in split_rootless_q(&rest)? {
            factors.push((q, mult));
        }
    }
    sort_factors(&mut factors);
    Ok(Factorization { unit, factors })
}

pub fn is_irreducible(f: &Poly<Rational>) -> Result<bool, FactorError> {
    if f.degree().unwrap_or(0) == 0 {
        return Ok(false);
    }
    let fac = factor_rational(f)?;
    Ok(fac.factors.len() == 1 && fac.factors[0].1 == 1)
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Distinct roots in Q(i) of a squarefree Gaussian polynomial, found through
/// the norm polynomial f * conj(f) over Q.
fn gauss_roots(g: &Poly<GaussRational>) -> Result<Vec<GaussRational>, FactorError> {
    let norm = (g.clone() * g.conj()).map(|c| {
        debug_assert!(num_traits::Zero::is_zero(&c.im));
        c.re()
    });
    let mut roots = Vec::new();
    for r in rational_roots(&norm)? {
        let cand = GaussRational::from_rational(r);
        if Field::is_zero(&g.eval(&cand)) {
            roots.push(cand);
        }
    }
    let fac = factor_rational(&norm)?;
    for (q, _) in &fac.factors {
        if q.degree() != Some(2) {
            continue;
        }
        let p = q.coeff(1);
        let c = q.coeff(0);
        let disc = &p * &p - Rational::from_integer(4.into()) * c;
        if !disc.is_negative() {
            continue;
        }
        if let Some(s) = rational_sqrt(&-disc) {
            let half = Rational::new(1.into(), 2.into());
            for sign in [1i64, -1] {
                let cand = GaussRational::new(
                    -&p * &half,
                    &s * &half * Rational::from_integer(sign.into()),
                );
                if Field::is_zero(&g.eval(&cand)) && !roots.contains(&cand) {
                    roots.push(cand);
                }
            }
        }
    }
    roots.sort_by(cmp_scalar);
    Ok(roots)
}

pub fn factor_gauss(f: &Poly<GaussRational>) -> Result<Factorization<GaussRational>, FactorError> {
    assert!(!f.is_zero(), "factorization of the zero polynomial");
    let deg = f.degree().unwrap();
    if deg > MAX_DEGREE {
        return Err(FactorError::UnsupportedDegree(deg));
    }
    let unit = f.leading().unwrap().clone();
    let mut factors: Vec<(Poly<GaussRational>, usize)> = Vec::new();
    for (part, mult) in squarefree_decomposition(f) {
        let mut rest = part;
        for r in gauss_roots(&rest)? {
            let lin = Poly::new(vec![-r, GaussRational::one()]);
            rest = rest.divrem(&lin).0;
            factors.push((lin, mult));
        }
        match rest.degree().unwrap_or(0) {
            0 => {}
            // no roots in the field, so degree 2 and 3 are irreducible
            1 => unreachable!("linear factor without a root"),
            2 | 3 => factors.push((rest.monic(), mult)),
            d => return Err(FactorError::UnsupportedDegree(d)),
        }
    }
    sort_factors(&mut factors);
    Ok(Factorization { unit, factors })
}

/// Whether Q[X]/(f) is a formally real field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reality {
    Real,
    Reducible,
    NoRealEmbedding,
}

impl Reality {
    pub fn is_real(&self) -> bool {
        matches!(self, Reality::Real)
    }

    pub fn reason(&self) -> Option<&'static str> {
        match self {
            Reality::Real => None,
            Reality::Reducible => Some("reducible: zero divisors"),
            Reality::NoRealEmbedding => Some("no real embedding"),
        }
    }
}

/// Q[X]/(f) is a formally real field iff f is irreducible and has at least
/// one real root (an embedding into the real closure).
pub fn is_formally_real_quotient(f: &Poly<Rational>) -> Result<Reality, FactorError> {
    assert!(f.degree().unwrap_or(0) >= 1, "quotient by a constant");
    if !is_irreducible(f)? {
        return Ok(Reality::Reducible);
    }
    if sturm_count(f, &Bound::NegInf, &Bound::PosInf) >= 1 {
        Ok(Reality::Real)
    } else {
        Ok(Reality::NoRealEmbedding)
    }
}
