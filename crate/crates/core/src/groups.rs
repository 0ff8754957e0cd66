//! The classical groups this crate works with, their Lie algebra bases over Q,
//! and generation of equations y' = Ay with A a prescribed combination of
//! basis elements.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diffmod::DiffModule;
use crate::mat::Mat;
use crate::poly::Poly;
use crate::ratfunc::RatFunc;
use crate::scalar::{Field, Rational};

#[derive(Debug, Clone, PartialEq)]
pub enum GroupSpec {
    /// SL(n), determinant one
    Sl(usize),
    /// Sp(n) for even n, fixing the standard symplectic form
    Sp(usize),
    /// SO of a nondegenerate symmetric form over Q
    So(Mat<Rational>),
    /// unit quaternions in their left-regular 4x4 representation
    Su2,
    /// GL(n)
    Gl(usize),
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GroupError {
    #[error("coefficient count mismatch: expected {expected}, got {got}")]
    CoefficientCount { expected: usize, got: usize },
    #[error("the form must be square, symmetric and nondegenerate")]
    BadForm,
    #[error("the symplectic size must be even and positive")]
    BadSymplecticSize,
}

impl GroupSpec {
    /// Validating constructor for SO(S).
    pub fn so(s: Mat<Rational>) -> Result<Self, GroupError> {
        if !s.is_square() || !s.is_symmetric() || Field::is_zero(&s.det()) {
            return Err(GroupError::BadForm);
        }
        Ok(GroupSpec::So(s))
    }

    /// Validating constructor for Sp(n).
    pub fn sp(n: usize) -> Result<Self, GroupError> {
        if n == 0 || n % 2 != 0 {
            return Err(GroupError::BadSymplecticSize);
        }
        Ok(GroupSpec::Sp(n))
    }

    /// Matrix size of the defining representation.
    pub fn size(&self) -> usize {
        match self {
            GroupSpec::Sl(n) | GroupSpec::Sp(n) | GroupSpec::Gl(n) => *n,
            GroupSpec::So(s) => s.rows(),
            GroupSpec::Su2 => 4,
        }
    }

    pub fn lie_dim(&self) -> usize {
        match self {
            GroupSpec::Sl(n) => n * n - 1,
            GroupSpec::Sp(n) => n * (n + 1) / 2,
            GroupSpec::So(s) => s.rows() * (s.rows() - 1) / 2,
            GroupSpec::Su2 => 3,
            GroupSpec::Gl(n) => n * n,
        }
    }

    pub fn name(&self) -> String {
        match self {
            GroupSpec::Sl(n) => format!("SL({n})"),
            GroupSpec::Sp(n) => format!("Sp({n})"),
            GroupSpec::So(s) => format!("SO({})", s.rows()),
            GroupSpec::Su2 => "SU(2)".into(),
            GroupSpec::Gl(n) => format!("GL({n})"),
        }
    }
}

/// J = [[0, I], [-I, 0]], the form fixed by Sp(n).
pub fn symplectic_form(n: usize) -> Mat<Rational> {
    assert!(n % 2 == 0);
    let m = n / 2;
    let mut j = Mat::zeros(n, n);
    for k in 0..m {
        j[(k, m + k)] = Rational::one();
        j[(m + k, k)] = -Rational::one();
    }
    j
}

fn unit(n: usize, i: usize, j: usize) -> Mat<Rational> {
    let mut e = Mat::zeros(n, n);
    e[(i, j)] = Rational::one();
    e
}

/// The three left-multiplication matrices of i, j, k on the quaternions with
/// basis (1, i, j, k). They satisfy L_i L_j = L_k and L_i^2 = -1.
pub(crate) fn quaternion_units() -> [Mat<Rational>; 3] {
    let cols = |c: [(usize, i64); 4]| {
        let mut m = Mat::zeros(4, 4);
        for (j, (i, s)) in c.into_iter().enumerate() {
            m[(i, j)] = Rational::from_i64(s);
        }
        m
    };
    [
        cols([(1, 1), (0, -1), (3, 1), (2, -1)]),
        cols([(2, 1), (3, -1), (0, -1), (1, 1)]),
        cols([(3, 1), (2, 1), (1, -1), (0, -1)]),
    ]
}

/// A basis of the Lie algebra over Q, in a fixed documented order:
/// off-diagonal E_ij before diagonal differences for sl, S^-1(E_ji - E_ij)
/// for i < j for so(S), J^-1 Sigma_kl over k <= l for sp.
pub fn lie_basis(spec: &GroupSpec) -> Vec<Mat<Rational>> {
    let n = spec.size();
    let mut out = Vec::with_capacity(spec.lie_dim());
    match spec {
        GroupSpec::Sl(_) => {
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        out.push(unit(n, i, j));
                    }
                }
            }
            for k in 0..n - 1 {
                out.push(&unit(n, k, k) - &unit(n, k + 1, k + 1));
            }
        }
        GroupSpec::Sp(_) => {
            let j_inv = symplectic_form(n).inverse().unwrap();
            for k in 0..n {
                for l in k..n {
                    let sym = if k == l {
                        unit(n, k, k)
                    } else {
                        &unit(n, k, l) + &unit(n, l, k)
                    };
                    out.push(&j_inv * &sym);
                }
            }
        }
        GroupSpec::So(s) => {
            let s_inv = s.inverse().expect("SO form is nondegenerate");
            for i in 0..n {
                for j in i + 1..n {
                    out.push(&s_inv * &(&unit(n, j, i) - &unit(n, i, j)));
                }
            }
        }
        GroupSpec::Su2 => out.extend(quaternion_units()),
        GroupSpec::Gl(_) => {
            for i in 0..n {
                for j in 0..n {
                    out.push(unit(n, i, j));
                }
            }
        }
    }
    debug_assert_eq!(out.len(), spec.lie_dim());
    out
}

/// Builds A = sum f_j B_j over the Lie algebra basis. Without explicit
/// coefficients, f_j = c_j/(z - j) with poles at j = 1, 2, ... and numerators
/// c_j drawn from {1..5} when a seed is given, c_j = 1 otherwise.
pub fn generate_equation(
    spec: &GroupSpec,
    coeffs: Option<&[RatFunc<Rational>]>,
    seed: Option<u64>,
) -> Result<DiffModule<Rational>, GroupError> {
    let basis = lie_basis(spec);
    let dim = basis.len();
    let coeffs: Vec<RatFunc<Rational>> = match coeffs {
        Some(cs) => {
            if cs.len() != dim {
                return Err(GroupError::CoefficientCount { expected: dim, got: cs.len() });
            }
            cs.to_vec()
        }
        None => {
            let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
            (0..dim)
                .map(|j| {
                    let c = match &mut rng {
                        Some(rng) => rng.gen_range(1..=5),
                        None => 1,
                    };
                    let pole = Poly::new(vec![Rational::from_i64(-(j as i64 + 1)), Rational::one()]);
                    RatFunc::new(Poly::constant(Rational::from_i64(c)), pole)
                })
                .collect()
        }
    };
    let n = spec.size();
    let mut a = Mat::<RatFunc<Rational>>::zeros(n, n);
    for (f, b) in coeffs.iter().zip(&basis) {
        a = &a + &b.map(|e| RatFunc::from_scalar(e.clone())).mul_scalar(f);
    }
    Ok(DiffModule::new(a))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LieVerdict {
    pub member: bool,
    /// the condition that failed, when one did
    pub violated: Option<String>,
}

impl LieVerdict {
    fn ok() -> Self {
        LieVerdict { member: true, violated: None }
    }

    fn fail(cond: &str) -> Self {
        LieVerdict { member: false, violated: Some(cond.into()) }
    }
}

fn lift(m: &Mat<Rational>) -> Mat<RatFunc<Rational>> {
    m.map(|e| RatFunc::from_scalar(e.clone()))
}

/// Decides membership of A in the Lie algebra of the group.
pub fn lie_membership(a: &Mat<RatFunc<Rational>>, spec: &GroupSpec) -> LieVerdict {
    assert_eq!(a.rows(), spec.size());
    assert!(a.is_square());
    match spec {
        GroupSpec::Gl(_) => LieVerdict::ok(),
        GroupSpec::Sl(_) => {
            if a.trace().is_zero() {
                LieVerdict::ok()
            } else {
                LieVerdict::fail("trace ≠ 0")
            }
        }
        GroupSpec::So(s) => {
            let s = lift(s);
            if (&(&a.transpose() * &s) + &(&s * a)).is_zero() {
                LieVerdict::ok()
            } else {
                LieVerdict::fail("AᵀS + SA ≠ 0")
            }
        }
        GroupSpec::Sp(n) => {
            let j = lift(&symplectic_form(*n));
            if (&(&a.transpose() * &j) + &(&j * a)).is_zero() {
                LieVerdict::ok()
            } else {
                LieVerdict::fail("AᵀJ + JA ≠ 0")
            }
        }
        GroupSpec::Su2 => {
            let units = quaternion_units();
            let mut rebuilt = Mat::zeros(4, 4);
            for (t, u) in units.iter().enumerate() {
                rebuilt = &rebuilt + &lift(u).mul_scalar(&a[(t + 1, 0)]);
            }
            if &rebuilt == a {
                LieVerdict::ok()
            } else {
                LieVerdict::fail("outside the span of the imaginary quaternion units")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr;

    fn f(s: &str) -> RatFunc<Rational> {
        expr::parse(s).unwrap()
    }

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    fn bracket(a: &Mat<Rational>, b: &Mat<Rational>) -> Mat<Rational> {
        &(a * b) - &(b * a)
    }

    #[test]
    fn dimensions() {
        assert_eq!(lie_basis(&GroupSpec::Sl(2)).len(), 3);
        assert_eq!(lie_basis(&GroupSpec::Sl(3)).len(), 8);
        assert_eq!(lie_basis(&GroupSpec::sp(4).unwrap()).len(), 10);
        assert_eq!(lie_basis(&GroupSpec::so(Mat::identity(3)).unwrap()).len(), 3);
        assert_eq!(lie_basis(&GroupSpec::Su2).len(), 3);
        assert_eq!(lie_basis(&GroupSpec::Gl(3)).len(), 9);
    }

    #[test]
    fn every_basis_element_is_a_member_and_independent() {
        let specs = vec![
            GroupSpec::Sl(3),
            GroupSpec::sp(4).unwrap(),
            GroupSpec::so(Mat::identity(3)).unwrap(),
            GroupSpec::so(Mat::from_diag(vec![q(1), q(1), q(-1)])).unwrap(),
            GroupSpec::Su2,
            GroupSpec::Gl(2),
        ];
        for spec in specs {
            let basis = lie_basis(&spec);
            for b in &basis {
                let v = lie_membership(&lift(b), &spec);
                assert!(v.member, "{:?} rejected in {}: {:?}", b, spec.name(), v.violated);
            }
            // independence: stack the flattened elements
            let n = spec.size();
            let rows: Vec<Vec<Rational>> = basis
                .iter()
                .map(|b| (0..n * n).map(|t| b[(t / n, t % n)].clone()).collect())
                .collect();
            assert_eq!(Mat::from_rows(rows).rank(), spec.lie_dim());
        }
    }

    #[test]
    fn brackets_stay_in_the_algebra() {
        for spec in [
            GroupSpec::Sl(3),
            GroupSpec::sp(2).unwrap(),
            GroupSpec::so(Mat::from_diag(vec![q(1), q(1), q(-1)])).unwrap(),
            GroupSpec::Su2,
        ] {
            let basis = lie_basis(&spec);
            for a in &basis {
                for b in &basis {
                    let v = lie_membership(&lift(&bracket(a, b)), &spec);
                    assert!(v.member);
                }
            }
        }
    }

    #[test]
    fn quaternion_relations() {
        let [li, lj, lk] = quaternion_units();
        assert_eq!(&li * &lj, lk);
        assert_eq!(&lj * &lk, li);
        assert_eq!(&li * &li, -&Mat::identity(4));
        assert_eq!(&lj * &lj, -&Mat::identity(4));
    }

    #[test]
    fn sl2_with_explicit_coefficients() {
        let spec = GroupSpec::Sl(2);
        let a = generate_equation(&spec, Some(&[f("1/z"), f("0"), f("0")]), None).unwrap();
        // first basis element is E_12
        let expected = Mat::from_rows(vec![vec![f("0"), f("1/z")], vec![f("0"), f("0")]]);
        assert_eq!(a.matrix(), &expected);

        let err = generate_equation(&spec, Some(&[f("1/z")]), None).unwrap_err();
        assert_eq!(err, GroupError::CoefficientCount { expected: 3, got: 1 });
        assert!(err.to_string().contains("coefficient count mismatch"));
    }

    #[test]
    fn so2_with_explicit_coefficient() {
        let spec = GroupSpec::so(Mat::identity(2)).unwrap();
        let a = generate_equation(&spec, Some(&[f("1/z")]), None).unwrap();
        let expected = Mat::from_rows(vec![vec![f("0"), f("-1/z")], vec![f("1/z"), f("0")]]);
        assert_eq!(a.matrix(), &expected);
    }

    #[test]
    fn so3_defaults_have_simple_poles_and_land_in_the_algebra() {
        let spec = GroupSpec::so(Mat::identity(3)).unwrap();
        let m = generate_equation(&spec, None, None).unwrap();
        let a = m.matrix();
        assert!(lie_membership(a, &spec).member);
        // poles exactly at 1, 2, 3
        let mut den = Poly::one();
        for i in 0..3 {
            for j in 0..3 {
                den = den.lcm(a[(i, j)].denominator());
            }
        }
        let expected = f("(z-1)*(z-2)*(z-3)").numerator().clone();
        assert_eq!(den.monic(), expected.monic());
    }

    #[test]
    fn seeded_defaults_are_deterministic_and_vary() {
        let spec = GroupSpec::Sl(2);
        let a = generate_equation(&spec, None, Some(7)).unwrap();
        let b = generate_equation(&spec, None, Some(7)).unwrap();
        assert_eq!(a.matrix(), b.matrix());
        assert!(lie_membership(a.matrix(), &spec).member);
        let c = generate_equation(&spec, None, Some(8)).unwrap();
        assert_ne!(a.matrix(), c.matrix());
    }

    #[test]
    fn membership_verdicts_name_the_broken_condition() {
        let a = Mat::from_rows(vec![vec![f("1"), f("0")], vec![f("0"), f("1")]]);
        let v = lie_membership(&a, &GroupSpec::Sl(2));
        assert!(!v.member);
        assert_eq!(v.violated.as_deref(), Some("trace ≠ 0"));

        let v = lie_membership(&a, &GroupSpec::so(Mat::identity(2)).unwrap());
        assert!(!v.member);
        assert_eq!(v.violated.as_deref(), Some("AᵀS + SA ≠ 0"));

        let v = lie_membership(&lift(&symplectic_form(2)), &GroupSpec::sp(2).unwrap());
        assert!(v.member);

        let mut bad = Mat::<RatFunc<Rational>>::zeros(4, 4);
        bad[(0, 0)] = f("1");
        let v = lie_membership(&bad, &GroupSpec::Su2);
        assert!(!v.member);
    }
}
