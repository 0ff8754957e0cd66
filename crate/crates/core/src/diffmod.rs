//! Differential modules presented as first order systems y' = Ay, the linear
//! algebra constructions on them, and the exact rational-solution solver.
//!
//! Sign convention, used everywhere: a coordinate vector v is horizontal iff
//! v' = Av. The dual module then carries -Aᵀ, and a symmetric matrix S is an
//! invariant form iff S' + AᵀS + SA = 0, which is exactly d/dz(xᵀSy) = 0
//! along horizontal x, y.

use num_traits::ToPrimitive;

use crate::factor::FactorError;
use crate::mat::{self, Mat};
use crate::poly::Poly;
use crate::ratfunc::RatFunc;
use crate::scalar::{Base, Field, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct DiffModule<S: Scalar> {
    a: Mat<RatFunc<S>>,
}

impl<S: Scalar> DiffModule<S> {
    pub fn new(a: Mat<RatFunc<S>>) -> Self {
        assert!(a.is_square(), "system matrix must be square");
        DiffModule { a }
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    pub fn base(&self) -> Base {
        S::BASE
    }

    pub fn matrix(&self) -> &Mat<RatFunc<S>> {
        &self.a
    }

    /// Dual module: w' = -Aᵀw, so that pairings of horizontal sections are
    /// constant.
    pub fn dual(&self) -> Self {
        DiffModule { a: -&self.a.transpose() }
    }

    /// Tensor product on the Kronecker basis e_i ⊗ f_j (row-major pairing):
    /// A ⊗ I + I ⊗ B.
    pub fn tensor(&self, other: &Self) -> Self {
        let m = self.dim();
        let n = other.dim();
        let a = mat::kron(&self.a, &Mat::identity(n));
        let b = mat::kron(&Mat::identity(m), &other.a);
        DiffModule { a: &a + &b }
    }

    /// Induced system on the symmetric square, basis
    /// {e_i ⊗ e_j + e_j ⊗ e_i (i < j), e_i ⊗ e_i}, lexicographic.
    pub fn sym_square(&self) -> Self {
        let d = self.dim();
        let pairs = mat::sym_pairs(d);
        let mut out: Mat<RatFunc<S>> = Mat::zeros(pairs.len(), pairs.len());
        let emit = |out: &mut Mat<RatFunc<S>>, col: usize, r: usize, s: usize, c: RatFunc<S>| {
            let (lo, hi) = if r <= s { (r, s) } else { (s, r) };
            let idx = mat::sym_index(d, lo, hi);
            // e_r ⊗ e_s + e_s ⊗ e_r collapses to 2·(e_r ⊗ e_r) on the diagonal
            let c = if r == s { c.clone() + c } else { c };
            out[(idx, col)] = out[(idx, col)].clone() + c;
        };
        for (col, &(i, j)) in pairs.iter().enumerate() {
            if i == j {
                for k in 0..d {
                    emit(&mut out, col, k, i, self.a[(k, i)].clone());
                }
            } else {
                for k in 0..d {
                    emit(&mut out, col, k, j, self.a[(k, i)].clone());
                    emit(&mut out, col, i, k, self.a[(k, j)].clone());
                }
            }
        }
        DiffModule { a: out }
    }

    pub fn flat_sections(
        &self,
        overrides: Option<&SolverBounds<S>>,
    ) -> Result<FlatBasis<S>, SolveError> {
        rational_solutions(&self.a, overrides)
    }
}

/// Basis of the rational solutions of v' = Bv. `complete` is false when the
/// space was computed from user-supplied bounds instead of derived ones.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatBasis<S: Scalar> {
    pub vectors: Vec<Vec<RatFunc<S>>>,
    pub complete: bool,
}

/// User-supplied ansatz bounds for systems outside the Fuchsian fragment:
/// solutions are sought as n(z)/denominator with deg n <= numerator_degree.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverBounds<S: Scalar> {
    pub denominator: Poly<S>,
    pub numerator_degree: usize,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolveError {
    #[error("unsupported: higher-order or irrational pole — supply bounds ({0})")]
    Unsupported(String),
    #[error(transparent)]
    Factor(#[from] FactorError),
}

fn linear<S: Scalar>(p: &S) -> Poly<S> {
    Poly::new(vec![-p.clone(), S::one()])
}

fn lcm_denominator<S: Scalar>(b: &Mat<RatFunc<S>>) -> Poly<S> {
    let mut acc = Poly::one();
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            acc = acc.lcm(b[(i, j)].denominator());
        }
    }
    acc
}

/// Residue matrix lim_{z→p} (z-p)·B(z); valid when every pole at p is simple.
fn residue_at<S: Scalar>(b: &Mat<RatFunc<S>>, p: &S) -> Mat<S> {
    let lin = linear(p);
    b.map(|e| {
        RatFunc::new(e.numerator().clone() * lin.clone(), e.denominator().clone())
            .eval(p)
            .expect("pole is simple by construction")
    })
}

/// lim_{z→∞} z·B(z), entrywise; requires every entry strictly proper.
fn infinity_matrix<S: Scalar>(b: &Mat<RatFunc<S>>) -> Mat<S> {
    b.map(|e| match e.numerator().degree() {
        Some(dn) if dn + 1 == e.denominator().degree().unwrap_or(0) => {
            e.numerator().leading().unwrap().clone()
        }
        _ => S::zero(),
    })
}

/// Exact basis of {v : v' = Bv} with rational function entries.
///
/// Without overrides the system must be Fuchsian: simple poles at points of
/// the base field and z·B(z) bounded at infinity. The candidate denominator
/// collects, per pole, the most negative integer eigenvalue of the residue
/// matrix; the numerator degree bound comes from the integer eigenvalues of
/// the matrix at infinity. Both bounds are sharp for rational solutions, so
/// the result is flagged complete.
pub fn rational_solutions<S: Scalar>(
    b: &Mat<RatFunc<S>>,
    overrides: Option<&SolverBounds<S>>,
) -> Result<FlatBasis<S>, SolveError> {
    assert!(b.is_square(), "system matrix must be square");
    let d = b.rows();
    let d_lcm = lcm_denominator(b);

    let (denom, num_deg, complete) = match overrides {
        Some(sb) => (sb.denominator.clone(), sb.numerator_degree as i64, false),
        None => {
            let fac = S::factor(&d_lcm)?;
            let mut poles = Vec::new();
            for (q, m) in &fac.factors {
                if q.degree() != Some(1) {
                    return Err(SolveError::Unsupported(format!(
                        "irreducible denominator factor {q}"
                    )));
                }
                let p = -q.coeff(0);
                if *m > 1 {
                    return Err(SolveError::Unsupported(format!("pole at z = {p} of order {m}")));
                }
                poles.push(p);
            }
            for i in 0..d {
                for j in 0..d {
                    let e = &b[(i, j)];
                    if let Some(dn) = e.numerator().degree() {
                        if dn >= e.denominator().degree().unwrap_or(0) {
                            return Err(SolveError::Unsupported(
                                "irregular singularity at infinity".into(),
                            ));
                        }
                    }
                }
            }
            let mut denom = Poly::one();
            for p in &poles {
                let ints = mat::integer_eigenvalues(&residue_at(b, p));
                // a rational solution's valuation at p is an integer
                // eigenvalue of the residue, so -min bounds the pole order
                let e = ints
                    .first()
                    .map(|lo| (-lo).to_i64().expect("eigenvalue overflow").max(0))
                    .unwrap_or(0);
                for _ in 0..e {
                    denom = denom * linear(p);
                }
            }
            let ints_inf = mat::integer_eigenvalues(&infinity_matrix(b));
            let Some(top) = ints_inf.last() else {
                return Ok(FlatBasis { vectors: Vec::new(), complete: true });
            };
            let nd = denom.degree().unwrap_or(0) as i64
                + top.to_i64().expect("eigenvalue overflow");
            if nd < 0 {
                return Ok(FlatBasis { vectors: Vec::new(), complete: true });
            }
            (denom, nd, true)
        }
    };

    let num_deg = num_deg.max(0) as usize;

    // with v = n/D the equation v' = Bv becomes n' = (B + (D'/D)·I)·n;
    // multiplying by L = lcm(entry denominators, D) clears every block,
    // including the logarithmic term L·D'/D
    let l_all = d_lcm.lcm(&denom);
    let p_mat: Vec<Vec<Poly<S>>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    let e = &b[(i, j)];
                    let q = l_all.divrem(e.denominator()).0;
                    e.numerator().clone() * q
                })
                .collect()
        })
        .collect();
    let (log_term, log_rem) = (l_all.clone() * denom.derivative()).divrem(&denom);
    debug_assert!(log_rem.is_zero());
    let unknowns = d * (num_deg + 1);
    let mut columns: Vec<Vec<Poly<S>>> = Vec::with_capacity(unknowns);
    for j in 0..d {
        for k in 0..=num_deg {
            let zk = Poly::monomial(S::one(), k);
            let lead = l_all.clone() * zk.derivative() - log_term.clone() * zk.clone();
            let mut blocks = Vec::with_capacity(d);
            for i in 0..d {
                let mut bl = -(p_mat[i][j].clone() * zk.clone());
                if i == j {
                    bl = bl + lead.clone();
                }
                blocks.push(bl);
            }
            columns.push(blocks);
        }
    }
    let t_max = columns
        .iter()
        .flat_map(|bl| bl.iter().filter_map(|p| p.degree()))
        .max()
        .unwrap_or(0);
    let coeff_mat = Mat::from_fn(d * (t_max + 1), unknowns, |row, col| {
        let (i, t) = (row / (t_max + 1), row % (t_max + 1));
        columns[col][i].coeff(t)
    });
    let mut vectors = Vec::new();
    for c in coeff_mat.kernel() {
        let mut v: Vec<RatFunc<S>> = (0..d)
            .map(|j| {
                let n = Poly::new(c[j * (num_deg + 1)..(j + 1) * (num_deg + 1)].to_vec());
                RatFunc::new(n, denom.clone())
            })
            .collect();
        // scale so the first nonzero coordinate has a monic numerator
        let lead = v
            .iter()
            .find(|f| !f.is_zero())
            .map(|f| f.numerator().leading().unwrap().clone());
        if let Some(lc) = lead {
            let s = RatFunc::from_scalar(lc.inv());
            for f in &mut v {
                *f = f.clone() * s.clone();
            }
        } else {
            continue;
        }
        debug_assert!(satisfies(b, &v));
        vectors.push(v);
    }
    Ok(FlatBasis { vectors, complete })
}

/// Does v' = Bv hold exactly?
pub fn satisfies<S: Scalar>(b: &Mat<RatFunc<S>>, v: &[RatFunc<S>]) -> bool {
    let derived: Vec<RatFunc<S>> = v.iter().map(|f| f.derive()).collect();
    derived == b.apply(v)
}

/// Basis of invariant symmetric bilinear forms of M: all symmetric S over the
/// base with S' + AᵀS + SA = 0, computed as the flat sections of the
/// symmetric square of the dual module.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantForms<S: Scalar> {
    pub forms: Vec<Mat<RatFunc<S>>>,
    pub complete: bool,
}

pub fn invariant_symmetric_forms<S: Scalar>(
    m: &DiffModule<S>,
) -> Result<InvariantForms<S>, SolveError> {
    let induced = m.dual().sym_square();
    let flat = rational_solutions(induced.matrix(), None)?;
    let d = m.dim();
    let pairs = mat::sym_pairs(d);
    let forms: Vec<Mat<RatFunc<S>>> = flat
        .vectors
        .iter()
        .map(|u| {
            let mut s = Mat::zeros(d, d);
            for (idx, &(i, j)) in pairs.iter().enumerate() {
                s[(i, j)] = u[idx].clone();
                s[(j, i)] = u[idx].clone();
            }
            s
        })
        .collect();
    for s in &forms {
        assert!(is_invariant_form(m, s), "flat section fails the form equation");
    }
    Ok(InvariantForms { forms, complete: flat.complete })
}

pub fn is_invariant_form<S: Scalar>(m: &DiffModule<S>, s: &Mat<RatFunc<S>>) -> bool {
    let ds = s.map(|e| e.derive());
    let at = m.matrix().transpose();
    (&(&ds + &(&at * s)) + &(s * m.matrix())).is_zero()
}

/// Is `target` a constant-coefficient combination of `vectors`? Decided by an
/// exact linear system on z-coefficients after clearing denominators.
pub fn in_constant_span<S: Scalar>(vectors: &[Vec<RatFunc<S>>], target: &[RatFunc<S>]) -> bool {
    if vectors.is_empty() {
        return target.iter().all(|f| f.is_zero());
    }
    let coords = target.len();
    assert!(vectors.iter().all(|v| v.len() == coords));
    let mut rows: Vec<Vec<S>> = Vec::new();
    let mut rhs: Vec<S> = Vec::new();
    for r in 0..coords {
        let mut den = target[r].denominator().clone();
        for v in vectors {
            den = den.lcm(v[r].denominator());
        }
        let clear = |f: &RatFunc<S>| -> Poly<S> {
            f.numerator().clone() * den.divrem(f.denominator()).0
        };
        let ps: Vec<Poly<S>> = vectors.iter().map(|v| clear(&v[r])).collect();
        let t = clear(&target[r]);
        let top = ps
            .iter()
            .chain(std::iter::once(&t))
            .filter_map(|p| p.degree())
            .max()
            .unwrap_or(0);
        for k in 0..=top {
            rows.push(ps.iter().map(|p| p.coeff(k)).collect());
            rhs.push(t.coeff(k));
        }
    }
    Mat::from_rows(rows).solve(&rhs).is_some()
}
