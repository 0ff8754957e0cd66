//! Sturm-sequence counting of distinct real roots in a half-open interval.

use num_traits::Signed;

use crate::poly::Poly;
use crate::scalar::{Field, Rational};

/// Interval endpoint for root counting.
#[derive(Debug, Clone, PartialEq)]
pub enum Bound {
    NegInf,
    Finite(Rational),
    PosInf,
}

fn bound_le(lo: &Bound, hi: &Bound) -> bool {
    match (lo, hi) {
        (Bound::NegInf, _) | (_, Bound::PosInf) => true,
        (Bound::Finite(a), Bound::Finite(b)) => a <= b,
        _ => false,
    }
}

fn sign_rat(q: &Rational) -> i32 {
    if Field::is_zero(q) {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

fn sign_at_bound(p: &Poly<Rational>, at: &Bound) -> i32 {
    match at {
        Bound::Finite(a) => sign_rat(&p.eval(a)),
        Bound::PosInf => p.leading().map(sign_rat).unwrap_or(0),
        Bound::NegInf => match p.degree() {
            None => 0,
            Some(d) => {
                let s = sign_rat(p.leading().unwrap());
                if d % 2 == 0 {
                    s
                } else {
                    -s
                }
            }
        },
    }
}

fn variations(chain: &[Poly<Rational>], at: &Bound) -> usize {
    let mut count = 0;
    let mut prev = 0;
    for p in chain {
        let s = sign_at_bound(p, at);
        if s != 0 {
            if prev != 0 && s != prev {
                count += 1;
            }
            prev = s;
        }
    }
    count
}

/// Number of distinct real roots of `f` in (lo, hi]. The input need not be
/// squarefree; counting happens on its squarefree part.
pub fn sturm_count(f: &Poly<Rational>, lo: &Bound, hi: &Bound) -> usize {
    if f.is_zero() || !bound_le(lo, hi) {
        return 0;
    }
    let mut g = f.squarefree_part();
    let mut extra = 0usize;
    if let Bound::Finite(b) = hi {
        if Field::is_zero(&g.eval(b)) {
            extra = 1;
            g = g.divrem(&Poly::new(vec![-b.clone(), Rational::from_i64(1)])).0;
        }
    }
    if let Bound::Finite(a) = lo {
        if Field::is_zero(&g.eval(a)) {
            g = g.divrem(&Poly::new(vec![-a.clone(), Rational::from_i64(1)])).0;
        }
    }
    if g.degree().unwrap_or(0) == 0 {
        return extra;
    }
    let mut chain = vec![g.clone(), g.derivative()];
    loop {
        let n = chain.len();
        let r = chain[n - 2].divrem(&chain[n - 1]).1;
        if r.is_zero() {
            break;
        }
        chain.push(-r);
    }
    let vl = variations(&chain, lo);
    let vh = variations(&chain, hi);
    vl.saturating_sub(vh) + extra
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = Poly<Rational>;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    #[test]
    fn whole_line_counts() {
        assert_eq!(sturm_count(&P::from_i64s(&[-2, 0, 1]), &Bound::NegInf, &Bound::PosInf), 2);
        assert_eq!(sturm_count(&P::from_i64s(&[1, 1, 1]), &Bound::NegInf, &Bound::PosInf), 0);
        assert_eq!(sturm_count(&P::from_i64s(&[-1, 0, 0, 1]), &Bound::NegInf, &Bound::PosInf), 1);
    }

    #[test]
    fn interval_is_half_open() {
        // roots of z^2 - 1 are -1 and 1
        let f = P::from_i64s(&[-1, 0, 1]);
        assert_eq!(sturm_count(&f, &Bound::Finite(q(-1)), &Bound::Finite(q(1))), 1);
        assert_eq!(sturm_count(&f, &Bound::Finite(q(-2)), &Bound::Finite(q(1))), 2);
        assert_eq!(sturm_count(&f, &Bound::Finite(q(1)), &Bound::Finite(q(5))), 0);
    }

    #[test]
    fn multiple_roots_counted_once() {
        let f = P::from_i64s(&[-1, 1]).pow(4);
        assert_eq!(sturm_count(&f, &Bound::NegInf, &Bound::PosInf), 1);
    }
}
