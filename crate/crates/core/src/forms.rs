//! Symmetric bilinear forms over the ordered field Q(z): signatures relative
//! to a chosen ordering, and realification of conjugation-semistable forms
//! over Q(i)(z).

use crate::mat::{self, Mat};
use crate::ratfunc::{self, OrderingSpec, RatFunc};
use crate::scalar::{Field, GaussRational, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    pub plus: usize,
    pub minus: usize,
    pub zero: usize,
}

impl Signature {
    pub fn dim(&self) -> usize {
        self.plus + self.minus + self.zero
    }

    /// The pair {plus, minus} with the order forgotten; forms differing by a
    /// negative scalar have equal unordered signatures.
    pub fn unordered(&self) -> (usize, usize) {
        (self.plus.max(self.minus), self.plus.min(self.minus))
    }

    fn from_signs(signs: &[i32]) -> Self {
        Signature {
            plus: signs.iter().filter(|&&s| s > 0).count(),
            minus: signs.iter().filter(|&&s| s < 0).count(),
            zero: signs.iter().filter(|&&s| s == 0).count(),
        }
    }
}

/// Signs of the diagonal of a congruence diagonalization, read in the given
/// ordering. The sign pattern, not the diagonal itself, is the invariant.
pub fn diagonal_signs(f: &Mat<RatFunc<Rational>>, ord: &OrderingSpec) -> Vec<i32> {
    let (d, _) = mat::congruence_diagonalize(f);
    d.iter().map(|e| e.sign_at(ord)).collect()
}

pub fn signature(f: &Mat<RatFunc<Rational>>, ord: &OrderingSpec) -> Signature {
    Signature::from_signs(&diagonal_signs(f, ord))
}

/// Signature of a constant form; independent of the ordering.
pub fn signature_const(s: &Mat<Rational>) -> Signature {
    signature(&s.map(|e| RatFunc::from_scalar(e.clone())), &OrderingSpec::PlusInfinity)
}

/// The unique scalar c with G = c·F, when F and G are proportional.
pub fn is_proportional<T: Field>(f: &Mat<T>, g: &Mat<T>) -> Option<T> {
    assert_eq!((f.rows(), f.cols()), (g.rows(), g.cols()));
    let mut c = None;
    for i in 0..f.rows() {
        for j in 0..f.cols() {
            if !f[(i, j)].is_zero() {
                c = Some(g[(i, j)].clone() * f[(i, j)].inv());
                break;
            }
        }
        if c.is_some() {
            break;
        }
    }
    let c = match c {
        // F = 0: proportional iff G = 0, scalar 1 by convention
        None => return g.is_zero().then(T::one),
        Some(c) => c,
    };
    if g == &f.mul_scalar(&c) {
        Some(c)
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Realified {
    pub form: Mat<RatFunc<Rational>>,
    /// the scalar a with aF conjugation-fixed
    pub scalar: RatFunc<GaussRational>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("not conjugation-semistable")]
pub struct NotSemistable;

/// Rescale F so that it has entries in Q(z): requires σ(F) = cF, then a = 1+c
/// (or 2i when c = -1) gives σ(aF) = aF.
pub fn realify(f: &Mat<RatFunc<GaussRational>>) -> Result<Realified, NotSemistable> {
    let sigma_f = f.map(|e| e.conj());
    let c = is_proportional(f, &sigma_f).ok_or(NotSemistable)?;
    debug_assert!((c.clone() * c.conj()).is_one(), "semistable scalar must have norm 1");
    let minus_one = -RatFunc::<GaussRational>::one();
    let a = if c == minus_one {
        RatFunc::from_scalar(GaussRational::i() + GaussRational::i())
    } else {
        RatFunc::one() + c
    };
    let af = f.mul_scalar(&a);
    let form = af.map(|e| {
        ratfunc::to_real(e).expect("rescaled form has real entries by construction")
    });
    Ok(Realified { form, scalar: a })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr;

    type F = RatFunc<Rational>;
    type G = RatFunc<GaussRational>;

    fn fm(rows: &[&[&str]]) -> Mat<F> {
        Mat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|s| expr::parse::<Rational>(s).unwrap()).collect())
                .collect(),
        )
    }

    fn gm(rows: &[&[&str]]) -> Mat<G> {
        Mat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|s| expr::parse::<GaussRational>(s).unwrap()).collect())
                .collect(),
        )
    }

    #[test]
    fn signatures_depend_on_the_ordering_only_through_signs() {
        let id3 = fm(&[&["1", "0", "0"], &["0", "1", "0"], &["0", "0", "1"]]);
        for ord in [OrderingSpec::PlusInfinity, OrderingSpec::AtPointMinus(Rational::from_i64(7))] {
            assert_eq!(signature(&id3, &ord), Signature { plus: 3, minus: 0, zero: 0 });
        }

        let mixed = fm(&[&["z-1", "0"], &["0", "1"]]);
        assert_eq!(
            signature(&mixed, &OrderingSpec::AtPointPlus(Rational::from_i64(0))),
            Signature { plus: 1, minus: 1, zero: 0 }
        );
        assert_eq!(
            signature(&mixed, &OrderingSpec::PlusInfinity),
            Signature { plus: 2, minus: 0, zero: 0 }
        );

        let hyp = fm(&[&["0", "1"], &["1", "0"]]);
        for ord in [
            OrderingSpec::PlusInfinity,
            OrderingSpec::MinusInfinity,
            OrderingSpec::AtPointPlus(Rational::from_i64(2)),
        ] {
            assert_eq!(signature(&hyp, &ord), Signature { plus: 1, minus: 1, zero: 0 });
        }
    }

    #[test]
    fn signature_is_a_congruence_invariant() {
        let s = fm(&[&["1", "0", "0"], &["0", "z", "0"], &["0", "0", "-1"]]);
        let t = fm(&[&["1", "z", "0"], &["0", "1", "2"], &["1", "0", "1"]]);
        let conj = &(&t.transpose() * &s) * &t;
        let ord = OrderingSpec::PlusInfinity;
        assert!(!Field::is_zero(&t.det()));
        assert_eq!(signature(&conj, &ord), signature(&s, &ord));
    }

    #[test]
    fn unordered_pair_ignores_global_sign() {
        let s = fm(&[&["1", "0"], &["0", "-1"]]);
        let neg = s.map(|e| -e.clone());
        let ord = OrderingSpec::MinusInfinity;
        assert_eq!(signature(&s, &ord).unordered(), signature(&neg, &ord).unordered());
    }

    #[test]
    fn proportionality_detection() {
        let s = fm(&[&["1", "2"], &["2", "-1"]]);
        let three = s.mul_scalar(&F::from_i64(3));
        assert_eq!(is_proportional(&s, &three), Some(F::from_i64(3)));
        let a = fm(&[&["1", "0"], &["0", "1"]]);
        let b = fm(&[&["1", "0"], &["0", "2"]]);
        assert_eq!(is_proportional(&a, &b), None);
        let zs = s.mul_scalar(&F::z());
        let zzs = s.mul_scalar(&(F::z() * F::z()));
        assert_eq!(is_proportional(&zs, &zzs), Some(F::z()));
    }

    #[test]
    fn realify_the_documented_cases() {
        // already real: c = 1, a = 2
        let s = gm(&[&["1", "0"], &["0", "-1"]]);
        let r = realify(&s).unwrap();
        assert_eq!(r.scalar, G::from_i64(2));
        assert_eq!(r.form, fm(&[&["2", "0"], &["0", "-2"]]));

        // purely imaginary: c = -1, a = 2i, output -2I
        let s = gm(&[&["i", "0"], &["0", "i"]]);
        let r = realify(&s).unwrap();
        assert_eq!(r.form, fm(&[&["-2", "0"], &["0", "-2"]]));

        // mixed: F = (1+i)S0, c = -i, a = 1-i, aF = 2S0
        let s0 = &[&["1", "2"][..], &["2", "-3"][..]];
        let s = gm(&[&["(1+i)*1", "(1+i)*2"], &["(1+i)*2", "(1+i)*-3"]]);
        let r = realify(&s).unwrap();
        assert_eq!(r.scalar, expr::parse::<GaussRational>("1-i").unwrap());
        assert_eq!(r.form, fm(s0).mul_scalar(&F::from_i64(2)));

        // z-dependent scalar: F = z(1+i)S0 has sigma(F) = -i F as well
        let s = gm(&[&["(1+i)*z", "0"], &["0", "(1+i)*z"]]);
        assert!(realify(&s).is_ok());

        // not semistable
        let s = gm(&[&["1", "0"], &["0", "i"]]);
        assert_eq!(realify(&s), Err(NotSemistable));
    }
}
