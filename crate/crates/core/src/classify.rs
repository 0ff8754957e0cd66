//! End-to-end pipelines: identification of the real form SO(p,q) of an
//! orthogonal module from the signature of its invariant form, and rank-1
//! radical analysis with the ordering compatibility test between the
//! candidate solution fields.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use crate::diffmod::{self, DiffModule, SolveError};
use crate::factor::FactorError;
use crate::forms::{self, NotSemistable};
use crate::mat::{self, Mat};
use crate::poly::Poly;
use crate::ratfunc::{self, OrderingSpec, RatFunc};
use crate::scalar::{Base, Field, GaussRational, Rational, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalReport {
    pub flat_dim: usize,
    /// denominator-free representative, sign-fixed under the ordering
    pub form: Mat<RatFunc<Rational>>,
    /// {p, q} as (max, min): SO(p,q) and SO(q,p) are the same group
    pub signature_unordered: (usize, usize),
    pub form_label: String,
    pub ordering: OrderingSpec,
    /// the rescaling applied by realification, for modules over Q(i)(z)
    pub realify_scalar: Option<RatFunc<GaussRational>>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ClassifyError {
    #[error("no invariant form")]
    NoInvariantForm,
    #[error("invariant form not unique (flat dimension {0})")]
    NotUnique(usize),
    #[error("degenerate form")]
    Degenerate,
    #[error(transparent)]
    Semistability(#[from] NotSemistable),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// The invariant form, made real and denominator-free, then read off under
/// the ordering. The overall scalar is fixed by making the first nonzero
/// diagonal entry of the diagonalization positive.
pub fn classify_orthogonal<S: Scalar>(
    m: &DiffModule<S>,
    ord: &OrderingSpec,
) -> Result<OrthogonalReport, ClassifyError> {
    let inv = diffmod::invariant_symmetric_forms(m)?;
    let f = match inv.forms.len() {
        0 => return Err(ClassifyError::NoInvariantForm),
        1 => &inv.forms[0],
        n => return Err(ClassifyError::NotUnique(n)),
    };
    let (real, scalar) = match S::BASE {
        Base::Q => {
            let r = f.map(|e| {
                ratfunc::to_real(&ratfunc::to_gauss(e)).expect("entries over Q are real")
            });
            (r, None)
        }
        Base::Qi => {
            let lifted = f.map(ratfunc::to_gauss);
            let r = forms::realify(&lifted)?;
            (r.form, Some(r.scalar))
        }
    };

    let mut den = Poly::<Rational>::one();
    for i in 0..real.rows() {
        for j in 0..real.cols() {
            den = den.lcm(real[(i, j)].denominator());
        }
    }
    let cleared = real.mul_scalar(&RatFunc::from_poly(den));
    let mut content = Poly::<Rational>::zero();
    for i in 0..cleared.rows() {
        for j in 0..cleared.cols() {
            content = content.gcd(cleared[(i, j)].numerator());
        }
    }
    let form = if content.degree() > Some(0) {
        cleared.mul_scalar(&RatFunc::new(Poly::one(), content))
    } else {
        cleared
    };

    if Field::is_zero(&form.det()) {
        return Err(ClassifyError::Degenerate);
    }
    let (diag, _) = mat::congruence_diagonalize(&form);
    let mut signs: Vec<i32> = diag.iter().map(|d| d.sign_at(ord)).collect();
    let flip = matches!(signs.iter().find(|&&s| s != 0), Some(&-1));
    let form = if flip {
        signs.iter_mut().for_each(|s| *s = -*s);
        form.map(|e| -e.clone())
    } else {
        form
    };
    let plus = signs.iter().filter(|&&s| s > 0).count();
    let minus = signs.iter().filter(|&&s| s < 0).count();
    let signature_unordered = (plus.max(minus), plus.min(minus));
    let form_label = format!("SO({},{})", signature_unordered.0, signature_unordered.1);
    Ok(OrthogonalReport {
        flat_dim: 1,
        form,
        signature_unordered,
        form_label,
        ordering: ord.clone(),
        realify_scalar: scalar,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadicalCandidate {
    pub radicand: RatFunc<Rational>,
    /// the ordering constraint sign(radicand) > 0; present exactly when m is even
    pub constrained: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadicalReport {
    pub m: u64,
    pub u: RatFunc<Rational>,
    pub candidates: Vec<RadicalCandidate>,
    pub pv_description: String,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RadicalError {
    #[error("not radical: polynomial part nonzero")]
    PolynomialPart,
    #[error("not radical: higher-order pole")]
    HigherOrderPole,
    #[error("not radical: irrational residue")]
    IrrationalResidue,
    #[error(transparent)]
    Factor(#[from] FactorError),
}

/// num = c·q' for a rational constant c, if one exists.
fn residue_scalar(num: &Poly<Rational>, dq: &Poly<Rational>) -> Option<Rational> {
    let k = dq.degree()?;
    let c = num.coeff(k) / dq.coeff(k);
    if num == &dq.mul_scalar(&c) {
        Some(c)
    } else {
        None
    }
}

/// Decides whether y' = r·y has a radical solution t with t^m = u rational,
/// by reading residues off the partial fraction decomposition.
pub fn rank1_analyze(r: &RatFunc<Rational>) -> Result<RadicalReport, RadicalError> {
    let pf = ratfunc::partial_fractions(r)?;
    if !pf.poly.is_zero() {
        return Err(RadicalError::PolynomialPart);
    }
    let mut residues: Vec<(Poly<Rational>, Rational)> = Vec::new();
    for term in &pf.terms {
        if term.exp != 1 {
            return Err(RadicalError::HigherOrderPole);
        }
        let dq = term.factor.derivative();
        match residue_scalar(&term.num, &dq) {
            Some(c) => residues.push((term.factor.clone(), c)),
            None => return Err(RadicalError::IrrationalResidue),
        }
    }

    let m_big = residues
        .iter()
        .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let m = m_big.to_u64().expect("radical degree at desk scale");
    let m_rat = Rational::from_integer(m_big);

    let mut num = Poly::one();
    let mut den = Poly::one();
    for (q, c) in &residues {
        let e = (c * &m_rat).to_integer();
        let k = e.abs().to_usize().expect("exponent at desk scale");
        if e.is_positive() {
            num = num * q.pow(k);
        } else {
            den = den * q.pow(k);
        }
    }
    let u = RatFunc::new(num, den);
    // t^m = u solves the equation: t'/t = u'/(m·u) must reproduce r
    assert_eq!(u.derive() / (u.clone() * RatFunc::from_scalar(m_rat)), *r);

    let candidates = if m % 2 == 0 {
        vec![
            RadicalCandidate { radicand: u.clone(), constrained: true },
            RadicalCandidate { radicand: -u.clone(), constrained: true },
        ]
    } else {
        vec![RadicalCandidate { radicand: u.clone(), constrained: false }]
    };
    let pv_description = if m == 1 {
        format!("rational solution y = {u}; trivial extension")
    } else if m % 2 == 0 {
        format!("K(t), t^{m} = ±({u})")
    } else {
        format!("K(t), t^{m} = {u}")
    };
    Ok(RadicalReport { m, u, candidates, pv_description })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CandidateVerdict {
    pub radicand: RatFunc<Rational>,
    pub compatible: bool,
}

impl CandidateVerdict {
    pub fn verdict(&self) -> &'static str {
        if self.compatible {
            "compatible"
        } else {
            "incompatible"
        }
    }
}

/// Evaluates each candidate's sign constraint under the ordering. Candidates
/// without a constraint (odd m) are always compatible.
pub fn compare_real_pv(rep: &RadicalReport, ord: &OrderingSpec) -> Vec<CandidateVerdict> {
    rep.candidates
        .iter()
        .map(|c| CandidateVerdict {
            radicand: c.radicand.clone(),
            compatible: !c.constrained || c.radicand.sign_at(ord) > 0,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr;
    use crate::groups::{self, GroupSpec};

    fn f(s: &str) -> RatFunc<Rational> {
        expr::parse(s).unwrap()
    }

    fn gf(s: &str) -> RatFunc<GaussRational> {
        expr::parse(s).unwrap()
    }

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    #[test]
    fn so3_and_so21_from_generated_equations() {
        let ord = OrderingSpec::PlusInfinity;

        let spec = GroupSpec::so(Mat::identity(3)).unwrap();
        let m = groups::generate_equation(&spec, None, None).unwrap();
        let rep = classify_orthogonal(&m, &ord).unwrap();
        assert_eq!(rep.flat_dim, 1);
        assert_eq!(rep.signature_unordered, (3, 0));
        assert_eq!(rep.form_label, "SO(3,0)");
        assert_eq!(rep.form, Mat::identity(3).map(|e: &Rational| RatFunc::from_scalar(e.clone())));

        let spec = GroupSpec::so(Mat::from_diag(vec![q(1), q(1), q(-1)])).unwrap();
        let m = groups::generate_equation(&spec, None, None).unwrap();
        let rep = classify_orthogonal(&m, &ord).unwrap();
        assert_eq!(rep.signature_unordered, (2, 1));
        assert_eq!(rep.form_label, "SO(2,1)");
    }

    #[test]
    fn too_many_forms_or_none() {
        let zero = DiffModule::new(Mat::<RatFunc<Rational>>::zeros(3, 3));
        let err = classify_orthogonal(&zero, &OrderingSpec::PlusInfinity).unwrap_err();
        assert_eq!(err, ClassifyError::NotUnique(6));
        assert!(err.to_string().contains("invariant form not unique"));

        // a single so(3) generator leaves a 2-dimensional form space
        let spec = GroupSpec::so(Mat::identity(3)).unwrap();
        let m = groups::generate_equation(&spec, Some(&[f("1/z"), f("0"), f("0")]), None).unwrap();
        let err = classify_orthogonal(&m, &OrderingSpec::PlusInfinity).unwrap_err();
        assert_eq!(err, ClassifyError::NotUnique(2));

        // sl(2) module with no symmetric invariant: A = E12/z - E21/(z-1)
        let a = Mat::from_rows(vec![vec![f("0"), f("1/z")], vec![f("-1/(z-1)"), f("0")]]);
        let err = classify_orthogonal(&DiffModule::new(a), &OrderingSpec::PlusInfinity).unwrap_err();
        assert_eq!(err, ClassifyError::NoInvariantForm);
    }

    #[test]
    fn realification_inside_the_pipeline() {
        // rotation module twisted by a scalar gauge with square 1/(z+i):
        // the invariant form becomes (z+i)·I and realification scales by
        // a = 1 + (z-i)/(z+i) = 2z/(z+i)
        let a = Mat::from_rows(vec![
            vec![gf("-1/(2*(z+i))"), gf("1/z")],
            vec![gf("-1/z"), gf("-1/(2*(z+i))")],
        ]);
        let ord = OrderingSpec::PlusInfinity;
        let rep = classify_orthogonal(&DiffModule::new(a), &ord).unwrap();
        assert_eq!(rep.realify_scalar, Some(gf("2*z/(z+i)")));
        assert_eq!(rep.signature_unordered, (2, 0));
        assert_eq!(rep.form_label, "SO(2,0)");
        assert_eq!(rep.form, Mat::identity(2).map(|e: &Rational| RatFunc::from_scalar(e.clone() + e.clone())));
    }

    #[test]
    fn ordering_moves_the_signature_but_not_the_unordered_pair() {
        // invariant form z·I2 for the module (1/(2z))·I2... use S0 = z*diag(1,1)
        // via A = -(1/2)S^{-1}S' twisted rotation over Q
        let a = Mat::from_rows(vec![
            vec![f("-1/(2*z)"), f("1/(z-1)")],
            vec![f("-1/(z-1)"), f("-1/(2*z)")],
        ]);
        let m = DiffModule::new(a);
        let plus = classify_orthogonal(&m, &OrderingSpec::AtPointPlus(q(0))).unwrap();
        let minus = classify_orthogonal(&m, &OrderingSpec::AtPointMinus(q(0))).unwrap();
        // the content division strips the z from z·I, so both orderings
        // already see a positive definite representative
        assert_eq!(plus.signature_unordered, (2, 0));
        assert_eq!(minus.signature_unordered, (2, 0));
        assert_eq!(plus.form, minus.form);
    }

    #[test]
    fn radical_reports() {
        let rep = rank1_analyze(&f("1/(2*z)")).unwrap();
        assert_eq!(rep.m, 2);
        assert_eq!(rep.u, f("z"));
        assert_eq!(rep.candidates.len(), 2);
        assert!(rep.candidates.iter().all(|c| c.constrained));
        assert_eq!(rep.candidates[0].radicand, f("z"));
        assert_eq!(rep.candidates[1].radicand, f("-z"));

        let rep = rank1_analyze(&f("3/(z-1)")).unwrap();
        assert_eq!(rep.m, 1);
        assert_eq!(rep.u, f("(z-1)^3"));
        assert_eq!(rep.candidates.len(), 1);
        assert!(!rep.candidates[0].constrained);
        assert!(rep.pv_description.contains("trivial extension"));

        let rep = rank1_analyze(&f("1/z + 1/(2*(z-1))")).unwrap();
        assert_eq!(rep.m, 2);
        assert_eq!(rep.u, f("z^2*(z-1)"));

        // negative residue puts the factor in the denominator
        let rep = rank1_analyze(&f("-1/(2*z)")).unwrap();
        assert_eq!(rep.m, 2);
        assert_eq!(rep.u, f("1/z"));

        // quadratic irreducible pole with residue 1/2
        let rep = rank1_analyze(&f("z/(z^2+1)")).unwrap();
        assert_eq!(rep.m, 2);
        assert_eq!(rep.u, f("z^2+1"));

        // r = 0: trivial
        let rep = rank1_analyze(&f("0")).unwrap();
        assert_eq!(rep.m, 1);
        assert_eq!(rep.u, f("1"));
    }

    #[test]
    fn radical_rejections() {
        assert_eq!(rank1_analyze(&f("z")).unwrap_err(), RadicalError::PolynomialPart);
        assert_eq!(rank1_analyze(&f("1/z^2")).unwrap_err(), RadicalError::HigherOrderPole);
        assert_eq!(rank1_analyze(&f("1/(z^2+1)")).unwrap_err(), RadicalError::IrrationalResidue);
        assert_eq!(
            rank1_analyze(&f("1/z^2")).unwrap_err().to_string(),
            "not radical: higher-order pole"
        );
    }

    #[test]
    fn ordering_compatibility_of_the_two_square_roots() {
        let rep = rank1_analyze(&f("1/(2*z)")).unwrap();

        let v = compare_real_pv(&rep, &OrderingSpec::AtPointPlus(q(0)));
        assert_eq!((v[0].compatible, v[1].compatible), (true, false));
        assert_eq!(v[0].verdict(), "compatible");

        let v = compare_real_pv(&rep, &OrderingSpec::AtPointMinus(q(0)));
        assert_eq!((v[0].compatible, v[1].compatible), (false, true));

        let v = compare_real_pv(&rep, &OrderingSpec::PlusInfinity);
        assert_eq!((v[0].compatible, v[1].compatible), (true, false));

        let v = compare_real_pv(&rep, &OrderingSpec::MinusInfinity);
        assert_eq!((v[0].compatible, v[1].compatible), (false, true));

        // positive-definite radicand: the same candidate wins everywhere
        let rep = rank1_analyze(&f("z/(z^2+1)")).unwrap();
        for ord in [
            OrderingSpec::PlusInfinity,
            OrderingSpec::MinusInfinity,
            OrderingSpec::AtPointPlus(q(0)),
        ] {
            let v = compare_real_pv(&rep, &ord);
            assert_eq!((v[0].compatible, v[1].compatible), (true, false));
        }

        // odd m: single candidate, no constraint to fail
        let rep = rank1_analyze(&f("1/(3*z)")).unwrap();
        assert_eq!(rep.m, 3);
        let v = compare_real_pv(&rep, &OrderingSpec::AtPointMinus(q(0)));
        assert_eq!(v.len(), 1);
        assert!(v[0].compatible);
    }
}
