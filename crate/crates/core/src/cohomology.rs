//! Order-2 Galois cohomology over Q(i)/Q, matrix side: cocycle validation,
//! explicit Hilbert-90 coboundary certificates, twisted orthogonal forms,
//! and center lifts of projective orthogonal cocycles.
//!
//! Throughout, sigma is coordinatewise complex conjugation and a cocycle for
//! the order-2 group {1, sigma} is a single matrix a with a·sigma(a) = 1.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::factor::FactorError;
use crate::forms::{self, Signature};
use crate::groups::GroupSpec;
use crate::mat::Mat;
use crate::poly::Poly;
use crate::scalar::{Field, GaussRational, Rational, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct Cocycle {
    pub group: GroupSpec,
    pub a: Mat<GaussRational>,
}

/// A representative of a projective cocycle: a matrix that satisfies the
/// cocycle and group conditions only up to a scalar.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveCocycle {
    pub group: GroupSpec,
    pub a_rep: Mat<GaussRational>,
}

/// Witness that a = h·sigma(h)^(-1) = g^(-1)·sigma(g); both identities are
/// asserted before the certificate is returned.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub h: Mat<GaussRational>,
    pub g: Mat<GaussRational>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwistedForm {
    pub form: Mat<Rational>,
    pub base_signature: Signature,
    pub twisted_signature: Signature,
    /// equal unordered signatures: the twisted form is equivalent to the base
    pub trivial: bool,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CocycleError {
    #[error("not a cocycle: aσ(a) ≠ 1")]
    NotCocycle,
    #[error("not in group: {0}")]
    NotInGroup(String),
    #[error("nth root of det not in ℚ(i) — extend constants")]
    NoRoot,
    #[error("lift inconsistency: Aσ(A) ≠ 1")]
    LiftInconsistency,
    #[error("no rescaling in ℚ(i)")]
    NoRescaling,
    #[error("center lifts are defined for odd size only")]
    EvenSize,
    #[error("operation requires an SO cocycle")]
    NotOrthogonal,
    #[error(transparent)]
    Factor(#[from] FactorError),
}

pub(crate) fn conj_mat(m: &Mat<GaussRational>) -> Mat<GaussRational> {
    m.map(|e| e.conj())
}

pub(crate) fn lift_rational(m: &Mat<Rational>) -> Mat<GaussRational> {
    m.map(|e| GaussRational::from_rational(e.clone()))
}

fn real_part(m: &Mat<GaussRational>) -> Mat<Rational> {
    m.map(|e| e.to_rational().expect("matrix must be conjugation-fixed"))
}

/// Group membership over Q(i), with the violated condition spelled out.
fn check_in_group(a: &Mat<GaussRational>, group: &GroupSpec) -> Result<(), CocycleError> {
    let n = group.size();
    if !a.is_square() || a.rows() != n {
        return Err(CocycleError::NotInGroup(format!(
            "size mismatch: expected {n}x{n}, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let in_group = |cond: &str| Err(CocycleError::NotInGroup(cond.into()));
    match group {
        GroupSpec::Gl(_) => {
            if Field::is_zero(&a.det()) {
                return in_group("singular matrix");
            }
        }
        GroupSpec::Sl(_) => {
            if !a.det().is_one() {
                return in_group("det ≠ 1");
            }
        }
        GroupSpec::So(s) => {
            let s = lift_rational(s);
            if &(&a.transpose() * &s) * a != s {
                return in_group("aᵀSa ≠ S");
            }
            if !a.det().is_one() {
                return in_group("det ≠ 1");
            }
        }
        GroupSpec::Sp(n) => {
            let j = lift_rational(&crate::groups::symplectic_form(*n));
            if &(&a.transpose() * &j) * a != j {
                return in_group("aᵀJa ≠ J");
            }
        }
        GroupSpec::Su2 => {
            let units = crate::groups::quaternion_units();
            let mut rebuilt = Mat::identity(4).mul_scalar(&a[(0, 0)]);
            for (t, u) in units.iter().enumerate() {
                rebuilt = &rebuilt + &lift_rational(u).mul_scalar(&a[(t + 1, 0)]);
            }
            if &rebuilt != a {
                return in_group("not a quaternion left-multiplication matrix");
            }
            let norm: GaussRational = (0..4)
                .map(|t| a[(t, 0)].clone() * a[(t, 0)].clone())
                .fold(GaussRational::zero(), |acc, x| acc + x);
            if !norm.is_one() {
                return in_group("quaternion norm ≠ 1");
            }
        }
    }
    Ok(())
}

/// Checks membership in G(Q(i)) and the cocycle identity a·sigma(a) = 1.
pub fn validate(a: Mat<GaussRational>, group: GroupSpec) -> Result<Cocycle, CocycleError> {
    check_in_group(&a, &group)?;
    if &a * &conj_mat(&a) != Mat::identity(a.rows()) {
        return Err(CocycleError::NotCocycle);
    }
    Ok(Cocycle { group, a })
}

/// Hilbert 90, constructively: h = x + a·sigma(x) for random small Gaussian
/// integer x satisfies a·sigma(h) = h, so a = h·sigma(h)^(-1) once h is
/// invertible. The retry widens the entry range every 64 rejections; failure
/// to terminate would contradict Zariski-density of the invertible locus.
pub fn gl_coboundary_certificate(c: &Cocycle, seed: u64) -> Certificate {
    let n = c.a.rows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut range: i64 = 3;
    let mut attempts: u32 = 0;
    loop {
        let x = Mat::from_fn(n, n, |_, _| {
            GaussRational::from_parts_i64(
                rng.gen_range(-range..=range),
                rng.gen_range(-range..=range),
            )
        });
        let h = &x + &(&c.a * &conj_mat(&x));
        if let Some(g) = h.inverse() {
            let sigma_h = conj_mat(&h);
            assert_eq!(&h * &sigma_h.inverse().unwrap(), c.a);
            assert_eq!(&g.inverse().unwrap() * &conj_mat(&g), c.a);
            return Certificate { h, g };
        }
        attempts += 1;
        if attempts % 64 == 0 {
            range *= 2;
        }
    }
}

/// The twisted form S_a = TᵀST for a = T·sigma(T)^(-1); its entries are
/// conjugation-fixed, so it is a form over Q, and the cocycle is trivial in
/// the orthogonal group precisely when the unordered signatures agree.
pub fn twisted_form(c: &Cocycle, seed: u64) -> Result<TwistedForm, CocycleError> {
    let s = match &c.group {
        GroupSpec::So(s) => s,
        _ => return Err(CocycleError::NotOrthogonal),
    };
    let t = gl_coboundary_certificate(c, seed).h;
    let s_a = &(&t.transpose() * &lift_rational(s)) * &t;
    assert_eq!(conj_mat(&s_a), s_a, "twisted form must be conjugation-fixed");
    let form = real_part(&s_a);
    // certificates differ by right multiplication over Q, a congruence of S_a,
    // so the signature is independent of the seed
    let base_signature = forms::signature_const(s);
    let twisted_signature = forms::signature_const(&form);
    let trivial = base_signature.unordered() == twisted_signature.unordered();
    Ok(TwistedForm { form, base_signature, twisted_signature, trivial })
}

/// Searches mu with mu^n·det(a_rep) = 1 by rational root extraction, scales,
/// and validates the result as an honest SO cocycle. Roots that exist only
/// beyond Q (for odd n, beyond the reach of the rational search) are reported
/// as needing a constant extension.
pub fn center_lift(p: &ProjectiveCocycle) -> Result<Cocycle, CocycleError> {
    let group = match &p.group {
        GroupSpec::So(_) => p.group.clone(),
        _ => return Err(CocycleError::NotOrthogonal),
    };
    let n = group.size();
    if n % 2 == 0 {
        return Err(CocycleError::EvenSize);
    }
    let det = p.a_rep.det();
    if Field::is_zero(&det) {
        return Err(CocycleError::NotInGroup("singular matrix".into()));
    }
    let w = det.inv();
    let mu = match w.to_rational() {
        None => return Err(CocycleError::NoRoot),
        Some(target) => {
            // mu^n = target
            let mut coeffs = vec![Rational::zero(); n + 1];
            coeffs[0] = -target;
            coeffs[n] = Rational::one();
            let roots = crate::factor::rational_roots(&Poly::new(coeffs))?;
            match roots.first() {
                None => return Err(CocycleError::NoRoot),
                Some(r) => GaussRational::from_rational(r.clone()),
            }
        }
    };
    let a = p.a_rep.mul_scalar(&mu);
    if &a * &conj_mat(&a) != Mat::identity(n) {
        return Err(CocycleError::LiftInconsistency);
    }
    validate(a, group)
}

/// Given B^(-1)·a1·sigma(B) = x·a2 with x an n-th root of unity, looks for
/// y in mu_n(Q(i)) with x·y^(-1)·sigma(y) = 1; then yB conjugates c1 to c2
/// on the nose. The only roots of unity available in Q(i) are 1, -1, i, -i.
pub fn center_lift_injectivity_check(
    c1: &Cocycle,
    c2: &Cocycle,
    b: &Mat<GaussRational>,
    x: &GaussRational,
) -> Result<Mat<GaussRational>, CocycleError> {
    assert_eq!(c1.group, c2.group);
    let n = c1.group.size();
    check_in_group(b, &c1.group)?;
    let pow = |y: &GaussRational, k: usize| {
        (0..k).fold(GaussRational::one(), |acc, _| acc * y.clone())
    };
    if !pow(x, n).is_one() {
        return Err(CocycleError::NotInGroup("xⁿ ≠ 1".into()));
    }
    let b_inv = b.inverse().expect("group member is invertible");
    let lhs = &(&b_inv * &c1.a) * &conj_mat(b);
    if lhs != c2.a.mul_scalar(x) {
        return Err(CocycleError::NotInGroup("B⁻¹·a₁·σ(B) ≠ x·a₂".into()));
    }
    let candidates = [
        GaussRational::one(),
        -GaussRational::one(),
        GaussRational::i(),
        -GaussRational::i(),
    ];
    for y in candidates {
        if !pow(&y, n).is_one() {
            continue;
        }
        if (x.clone() * y.inv() * y.conj()).is_one() {
            let witness = b.mul_scalar(&y);
            let w_inv = witness.inverse().unwrap();
            assert_eq!(&(&w_inv * &c1.a) * &conj_mat(&witness), c2.a);
            return Ok(witness);
        }
    }
    Err(CocycleError::NoRescaling)
}

/// The inner automorphism g -> a·g·a^(-1) induced by the cocycle on points
/// of the twisted group.
pub fn twist_automorphism(c: &Cocycle, g: &Mat<GaussRational>) -> Mat<GaussRational> {
    let a_inv = c.a.inverse().expect("cocycles are invertible");
    &(&c.a * g) * &a_inv
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrivialityReport {
    pub group: String,
    /// verdict over the real closure of the ordered base field
    pub trivial: bool,
    pub reason: String,
    pub gl_certificate: Option<Certificate>,
    /// coboundary matrix lying in the group itself, when one was found
    pub group_certificate: Option<Mat<GaussRational>>,
    /// a determinant-normalizing scalar exists only after extending constants
    pub needs_constant_extension: bool,
    pub twisted: Option<TwistedForm>,
}

pub fn triviality_report(c: &Cocycle, seed: u64) -> Result<TrivialityReport, CocycleError> {
    let group = c.group.name();
    let report = match &c.group {
        GroupSpec::Gl(_) => {
            let cert = gl_coboundary_certificate(c, seed);
            TrivialityReport {
                group,
                trivial: true,
                reason: "every order-2 GL cocycle is a coboundary".into(),
                group_certificate: Some(cert.h.clone()),
                gl_certificate: Some(cert),
                needs_constant_extension: false,
                twisted: None,
            }
        }
        GroupSpec::Sl(n) => {
            let cert = gl_coboundary_certificate(c, seed);
            let det = cert.h.det().to_rational().expect("det of an SL certificate is real");
            let mut coeffs = vec![Rational::zero(); n + 1];
            coeffs[0] = -det;
            coeffs[*n] = Rational::one();
            let roots = crate::factor::rational_roots(&Poly::new(coeffs))?;
            match roots.first() {
                Some(nu) => {
                    let h = cert.h.mul_scalar(&GaussRational::from_rational(nu.clone()).inv());
                    assert!(h.det().is_one());
                    assert_eq!(&c.a * &conj_mat(&h), h);
                    TrivialityReport {
                        group,
                        trivial: true,
                        reason: "coboundary with determinant normalized inside ℚ(i)".into(),
                        gl_certificate: Some(cert),
                        group_certificate: Some(h),
                        needs_constant_extension: false,
                        twisted: None,
                    }
                }
                None => TrivialityReport {
                    group,
                    trivial: true,
                    reason: "trivial over real closure; the determinant-normalizing scalar needs a constant extension".into(),
                    gl_certificate: Some(cert),
                    group_certificate: None,
                    needs_constant_extension: true,
                    twisted: None,
                },
            }
        }
        GroupSpec::Sp(_) => {
            let cert = gl_coboundary_certificate(c, seed);
            TrivialityReport {
                group,
                trivial: true,
                reason: "symplectic cocycles over a real closed field are coboundaries".into(),
                gl_certificate: Some(cert),
                group_certificate: None,
                needs_constant_extension: false,
                twisted: None,
            }
        }
        GroupSpec::So(_) => {
            let cert = gl_coboundary_certificate(c, seed);
            let tf = twisted_form(c, seed)?;
            TrivialityReport {
                group,
                trivial: tf.trivial,
                reason: if tf.trivial {
                    "twisted form has the signature of the base form".into()
                } else {
                    format!(
                        "twisted signature {:?} differs from base {:?}",
                        tf.twisted_signature.unordered(),
                        tf.base_signature.unordered()
                    )
                },
                gl_certificate: Some(cert),
                group_certificate: None,
                needs_constant_extension: false,
                twisted: Some(tf),
            }
        }
        GroupSpec::Su2 => TrivialityReport {
            group,
            trivial: true,
            reason: "unit quaternion cocycles are coboundaries; no certificate search implemented".into(),
            gl_certificate: None,
            group_certificate: None,
            needs_constant_extension: false,
            twisted: None,
        },
    };
    Ok(report)
}
