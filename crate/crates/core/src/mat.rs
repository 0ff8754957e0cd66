//! Dense exact matrices over any of the crate's fields.
//!
//! Everything here is plain Gaussian elimination with exact division; entries
//! are canonical after every step, so equality checks are structural.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::poly::Poly;
use crate::scalar::{Field, Rational, Scalar};

#[derive(Clone, PartialEq)]
pub struct Mat<T: Field> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Field> Mat<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "shape mismatch");
        Mat { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m[(k, k)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        assert!(r > 0, "empty matrix");
        let c = rows[0].len();
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_diag(diag: Vec<T>) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (k, d) in diag.into_iter().enumerate() {
            m[(k, k)] = d;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn trace(&self) -> T {
        assert!(self.is_square());
        (0..self.rows).fold(T::zero(), |acc, k| acc + self[(k, k)].clone())
    }

    pub fn map<U: Field>(&self, mut f: impl FnMut(&T) -> U) -> Mat<U> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|e| f(e)).collect() }
    }

    pub fn mul_scalar(&self, c: &T) -> Self {
        self.map(|e| e.clone() * c.clone())
    }

    /// Matrix times column vector.
    pub fn apply(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, x)| acc + a.clone() * x.clone())
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, i: usize, c: &T) {
        for j in 0..self.cols {
            self[(i, j)] = self[(i, j)].clone() * c.clone();
        }
    }

    /// row_i += c * row_j
    fn axpy_row(&mut self, i: usize, c: &T, j: usize) {
        for k in 0..self.cols {
            let t = self[(j, k)].clone() * c.clone();
            self[(i, k)] = self[(i, k)].clone() + t;
        }
    }

    /// Reduced row echelon form together with the pivot column list.
    /// Pivot rows are chosen as the first nonzero candidate, so the result is
    /// deterministic.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(p, r);
            let inv = m[(r, c)].inv();
            m.scale_row(r, &inv);
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = -m[(i, c)].clone();
                    m.axpy_row(i, &f, r);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn strip_row(&mut self, i: usize) {
        let row = &self.data[i * self.cols..(i + 1) * self.cols];
        if let Some(c) = T::content(row) {
            let inv = c.inv();
            self.scale_row(i, &inv);
        }
    }

    /// Row echelon by fraction-free cross-multiplication, stripping each
    /// row's content as it is produced: integral input never leaves the
    /// integers. Pivot rows are chosen sparsest-first to limit fill-in.
    fn echelon_fraction_free(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        for i in 0..m.rows {
            m.strip_row(i);
        }
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let cand = (r..m.rows)
                .filter(|&i| !m[(i, c)].is_zero())
                .min_by_key(|&i| (c..m.cols).filter(|&j| !m[(i, j)].is_zero()).count());
            let Some(p) = cand else { continue };
            m.swap_rows(p, r);
            for i in r + 1..m.rows {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let a = m[(r, c)].clone();
                let b = m[(i, c)].clone();
                for j in c..m.cols {
                    m[(i, j)] = m[(i, j)].clone() * a.clone() - m[(r, j)].clone() * b.clone();
                }
                m.strip_row(i);
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.echelon_fraction_free().1.len()
    }

    /// Basis of the right kernel; each vector is scaled so its first nonzero
    /// coordinate is 1.
    pub fn kernel(&self) -> Vec<Vec<T>> {
        if let Some(basis) = modular::try_kernel(self) {
            return basis;
        }
        self.kernel_elimination()
    }

    fn kernel_elimination(&self) -> Vec<Vec<T>> {
        let (m, pivots) = self.echelon_fraction_free();
        let mut pivot_of_col = vec![None; self.cols];
        for (row, &c) in pivots.iter().enumerate() {
            pivot_of_col[c] = Some(row);
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_of_col[free].is_some() {
                continue;
            }
            let mut v = vec![T::zero(); self.cols];
            v[free] = T::one();
            for (row, &pc) in pivots.iter().enumerate().rev() {
                let mut s = T::zero();
                for j in pc + 1..self.cols {
                    if !m[(row, j)].is_zero() && !v[j].is_zero() {
                        s = s + m[(row, j)].clone() * v[j].clone();
                    }
                }
                v[pc] = -(s / m[(row, pc)].clone());
            }
            let lead = v.iter().find(|x| !x.is_zero()).unwrap().inv();
            for x in &mut v {
                *x = x.clone() * lead.clone();
            }
            basis.push(v);
        }
        basis
    }

    pub fn det(&self) -> T {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut acc = T::one();
        let mut flip = false;
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !m[(i, k)].is_zero()) else {
                return T::zero();
            };
            if p != k {
                m.swap_rows(p, k);
                flip = !flip;
            }
            let piv = m[(k, k)].clone();
            acc = acc * piv.clone();
            let inv = piv.inv();
            for i in k + 1..n {
                if !m[(i, k)].is_zero() {
                    let f = -(m[(i, k)].clone() * inv.clone());
                    m.axpy_row(i, &f, k);
                }
            }
        }
        if flip {
            -acc
        } else {
            acc
        }
    }

    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let aug = Mat::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                T::one()
            } else {
                T::zero()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(k, &c)| c != k) {
            return None;
        }
        Some(Mat::from_fn(n, n, |i, j| r[(i, j + n)].clone()))
    }

    /// One solution of self·x = b with free coordinates set to zero, or None
    /// when the system is inconsistent.
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        assert_eq!(b.len(), self.rows);
        let aug = Mat::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                b[i].clone()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![T::zero(); self.cols];
        for (row, &c) in pivots.iter().enumerate() {
            x[c] = r[(row, self.cols)].clone();
        }
        Some(x)
    }

    /// Monic characteristic polynomial det(X·I - M), by the trace recursion.
    pub fn charpoly(&self) -> Poly<T> {
        assert!(self.is_square());
        let n = self.rows;
        let mut coeffs = vec![T::zero(); n + 1];
        coeffs[n] = T::one();
        let mut mk = self.clone();
        for k in 1..=n {
            let ck = -(mk.trace() * T::from_i64(k as i64).inv());
            coeffs[n - k] = ck.clone();
            if k < n {
                let shifted = &mk + &Mat::from_diag(vec![ck; n]);
                mk = self * &shifted;
            }
        }
        Poly::new(coeffs)
    }
}

impl<T: Field> Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "index out of range");
        &self.data[i * self.cols + j]
    }
}

impl<T: Field> IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.rows && j < self.cols, "index out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Field> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  [")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl<T: Field> Add for &Mat<T> {
    type Output = Mat<T>;
    fn add(self, rhs: Self) -> Mat<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<T: Field> Sub for &Mat<T> {
    type Output = Mat<T>;
    fn sub(self, rhs: Self) -> Mat<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

impl<T: Field> Neg for &Mat<T> {
    type Output = Mat<T>;
    fn neg(self) -> Mat<T> {
        self.map(|e| -e.clone())
    }
}

impl<T: Field> Mul for &Mat<T> {
    type Output = Mat<T>;
    fn mul(self, rhs: Self) -> Mat<T> {
        assert_eq!(self.cols, rhs.rows, "shape mismatch");
        Mat::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = T::zero();
            for k in 0..self.cols {
                acc = acc + self[(i, k)].clone() * rhs[(k, j)].clone();
            }
            acc
        })
    }
}

/// Kronecker product, blocks a[i][j] * b.
pub fn kron<T: Field>(a: &Mat<T>, b: &Mat<T>) -> Mat<T> {
    Mat::from_fn(a.rows * b.rows, a.cols * b.cols, |i, j| {
        a[(i / b.rows, j / b.cols)].clone() * b[(i % b.rows, j % b.cols)].clone()
    })
}

/// Index pairs (i, j) with i <= j in lexicographic order; the shared basis
/// order for everything built on symmetric squares.
pub fn sym_pairs(d: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(d * (d + 1) / 2);
    for i in 0..d {
        for j in i..d {
            out.push((i, j));
        }
    }
    out
}

pub fn sym_index(d: usize, i: usize, j: usize) -> usize {
    assert!(i <= j && j < d);
    i * d - (i * i - i) / 2 + (j - i)
}

/// The map induced by M on the symmetric square, written on the basis
/// {e_i ⊗ e_j + e_j ⊗ e_i (i < j), e_i ⊗ e_i}. Multiplicative:
/// sym_square_basis_map(AB) = sym_square_basis_map(A) · sym_square_basis_map(B).
pub fn sym_square_basis_map<T: Field>(m: &Mat<T>) -> Mat<T> {
    assert!(m.is_square());
    let d = m.rows;
    let pairs = sym_pairs(d);
    let n = pairs.len();
    let mut out = Mat::zeros(n, n);
    for (cidx, &(i, j)) in pairs.iter().enumerate() {
        for (ridx, &(k, l)) in pairs.iter().enumerate() {
            let e = if i == j {
                // image of e_i ⊗ e_i: coefficient of e_k ⊗ e_l
                m[(k, i)].clone() * m[(l, i)].clone()
            } else if k == l {
                let t = m[(k, i)].clone() * m[(k, j)].clone();
                t.clone() + t
            } else {
                m[(k, i)].clone() * m[(l, j)].clone() + m[(k, j)].clone() * m[(l, i)].clone()
            };
            out[(ridx, cidx)] = e;
        }
    }
    out
}

/// Diagonalizes a symmetric matrix by congruence: returns (D, P) with
/// Pᵀ·S·P = diag(D). Zero diagonal pivots with a nonzero entry left in the
/// row are resolved by adding a later basis vector, which makes the pivot
/// 2·S[k][j] != 0; candidate rows are always scanned upward from k.
pub fn congruence_diagonalize<T: Field>(s: &Mat<T>) -> (Vec<T>, Mat<T>) {
    assert!(s.is_symmetric(), "congruence_diagonalize needs a symmetric matrix");
    let n = s.rows();
    let mut a = s.clone();
    let mut p = Mat::<T>::identity(n);

    // basis change v_k <-> v_j
    let swap = |a: &mut Mat<T>, p: &mut Mat<T>, k: usize, j: usize| {
        a.swap_rows(k, j);
        for i in 0..n {
            a.data.swap(i * n + k, i * n + j);
            p.data.swap(i * n + k, i * n + j);
        }
    };
    // basis change v_j += c * v_k
    let add = |a: &mut Mat<T>, p: &mut Mat<T>, j: usize, c: &T, k: usize| {
        a.axpy_row(j, c, k);
        for i in 0..n {
            let t = a[(i, k)].clone() * c.clone();
            a[(i, j)] = a[(i, j)].clone() + t;
            let t = p[(i, k)].clone() * c.clone();
            p[(i, j)] = p[(i, j)].clone() + t;
        }
    };

    for k in 0..n {
        if a[(k, k)].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[(j, j)].is_zero()) {
                swap(&mut a, &mut p, k, j);
            } else if let Some(j) = (k + 1..n).find(|&j| !a[(k, j)].is_zero()) {
                add(&mut a, &mut p, k, &T::one(), j);
            } else {
                continue;
            }
        }
        let inv = a[(k, k)].inv();
        for j in k + 1..n {
            if !a[(k, j)].is_zero() {
                let c = -(a[(k, j)].clone() * inv.clone());
                add(&mut a, &mut p, j, &c, k);
            }
        }
    }
    let diag = (0..n).map(|k| a[(k, k)].clone()).collect();
    (diag, p)
}

/// All integer eigenvalues of a square matrix, sorted, multiplicity dropped.
/// Candidates are bounded by the largest absolute row sum and tested against
/// the characteristic polynomial directly.
pub fn integer_eigenvalues<S: Scalar>(m: &Mat<S>) -> Vec<BigInt> {
    assert!(m.is_square());
    let n = m.rows();
    if n == 0 {
        return Vec::new();
    }
    let mut bound = Rational::from_i64(0);
    for i in 0..n {
        let row_sum = m
            .row(i)
            .iter()
            .fold(Rational::from_i64(0), |acc, e| acc + e.abs_bound());
        if row_sum > bound {
            bound = row_sum;
        }
    }
    let top = bound.floor().to_integer().to_i64().expect("eigenvalue bound overflow");
    let cp = m.charpoly();
    let mut out = Vec::new();
    for k in -top..=top {
        if cp.eval(&S::from_i64(k)).is_zero() {
            out.push(BigInt::from(k));
        }
    }
    out
}

/// Kernel of large rational matrices through modular images.
///
/// Fraction-free elimination is exact, but its entries grow with the rank and
/// that growth dominates on the solver's coefficient matrices (hundreds of
/// rows). Here the reduced echelon form is computed modulo 61-bit primes, the
/// entries needed for the kernel are combined by CRT and lifted back to Q by
/// rational reconstruction, and the lifted basis is checked exactly against
/// the original matrix. The result is exact either way: a prime can only
/// lower the rank, never raise it, so a verified basis of size
/// cols - rank_p is complete; any failure falls back to elimination.
mod modular {
    use std::any::Any;

    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{Signed, ToPrimitive};

    use super::Mat;
    use crate::scalar::{Field, Rational};

    // below this the exact elimination wins on setup cost alone
    const MIN_ENTRIES: usize = 2_048;
    const MAX_PRIMES: usize = 128;

    pub(super) fn try_kernel<T: Field>(m: &Mat<T>) -> Option<Vec<Vec<T>>> {
        if m.rows * m.cols < MIN_ENTRIES {
            return None;
        }
        let mq = (m as &dyn Any).downcast_ref::<Mat<Rational>>()?;
        let basis = kernel_rational(mq)?;
        (&basis as &dyn Any).downcast_ref::<Vec<Vec<T>>>().cloned()
    }

    /// Reduced echelon values at (pivot row, free column), accumulated by CRT
    /// over the primes whose images share the pivot profile.
    struct Lift {
        pivots: Vec<usize>,
        free: Vec<usize>,
        residues: Vec<BigInt>,
        modulus: BigInt,
    }

    fn kernel_rational(m: &Mat<Rational>) -> Option<Vec<Vec<Rational>>> {
        let (rows, cols) = (m.rows, m.cols);
        let nums: Vec<BigInt> = m.data.iter().map(|e| e.numer().clone()).collect();
        let dens: Vec<BigInt> = m.data.iter().map(|e| e.denom().clone()).collect();
        let int_rows = integer_rows(m);
        let mut stream = PrimeStream { next_candidate: (1 << 61) - 1 };
        let mut lift: Option<Lift> = None;
        for _ in 0..MAX_PRIMES {
            let p = stream.next_prime();
            let Some(img) = reduce(&nums, &dens, p) else { continue };
            let (red, pivots) = rref_mod(img, rows, cols, p);
            if pivots.len() == cols {
                // the image is already injective, so the matrix is
                return Some(Vec::new());
            }
            // a bad prime can only lose rank or push pivots to the right, so
            // the largest profile seen, lexicographically first, wins
            let better = match &lift {
                None => true,
                Some(l) => {
                    pivots.len() > l.pivots.len()
                        || (pivots.len() == l.pivots.len() && pivots < l.pivots)
                }
            };
            if better {
                let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
                let residues =
                    collect_entries(&red, cols, &pivots, &free).into_iter().map(BigInt::from).collect();
                lift = Some(Lift { pivots, free, residues, modulus: BigInt::from(p) });
            } else {
                let l = lift.as_mut().unwrap();
                if l.pivots != pivots {
                    continue;
                }
                let vals = collect_entries(&red, cols, &l.pivots, &l.free);
                for (acc, v) in l.residues.iter_mut().zip(vals) {
                    *acc = crt(acc, &l.modulus, v, p);
                }
                l.modulus *= BigInt::from(p);
            }
            let l = lift.as_ref().unwrap();
            let mut vals = Vec::with_capacity(l.residues.len());
            for x in &l.residues {
                match reconstruct(x, &l.modulus) {
                    Some(q) => vals.push(q),
                    None => break,
                }
            }
            if vals.len() < l.residues.len() {
                continue;
            }
            let basis = basis_from(l, cols, &vals);
            if basis.iter().all(|v| verifies(&int_rows, v)) {
                return Some(basis);
            }
        }
        None
    }

    /// Rows of m scaled to integer entries; scaling does not move the kernel.
    fn integer_rows(m: &Mat<Rational>) -> Vec<Vec<BigInt>> {
        (0..m.rows)
            .map(|i| {
                let row = &m.data[i * m.cols..(i + 1) * m.cols];
                let mut l = BigInt::from(1);
                for e in row {
                    if !Field::is_zero(e) {
                        l = l.lcm(e.denom());
                    }
                }
                row.iter().map(|e| e.numer() * (&l / e.denom())).collect()
            })
            .collect()
    }

    fn verifies(int_rows: &[Vec<BigInt>], v: &[Rational]) -> bool {
        let mut l = BigInt::from(1);
        for x in v {
            if !Field::is_zero(x) {
                l = l.lcm(x.denom());
            }
        }
        let w: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
        int_rows.iter().all(|row| {
            let mut acc = BigInt::from(0);
            for (e, x) in row.iter().zip(&w) {
                if e.bits() != 0 && x.bits() != 0 {
                    acc += e * x;
                }
            }
            acc.bits() == 0
        })
    }

    fn basis_from(l: &Lift, cols: usize, vals: &[Rational]) -> Vec<Vec<Rational>> {
        let nf = l.free.len();
        let mut out = Vec::with_capacity(nf);
        for (fi, &f) in l.free.iter().enumerate() {
            let mut v = vec![Rational::from_i64(0); cols];
            v[f] = Rational::from_i64(1);
            for (r, &c) in l.pivots.iter().enumerate() {
                v[c] = -vals[r * nf + fi].clone();
            }
            // same scaling as the elimination path
            let lead = v.iter().find(|x| !Field::is_zero(*x)).unwrap().inv();
            for x in &mut v {
                *x = x.clone() * lead.clone();
            }
            out.push(v);
        }
        out
    }

    fn collect_entries(red: &[u64], cols: usize, pivots: &[usize], free: &[usize]) -> Vec<u64> {
        let mut out = Vec::with_capacity(pivots.len() * free.len());
        for r in 0..pivots.len() {
            for &f in free {
                out.push(red[r * cols + f]);
            }
        }
        out
    }

    /// Image of the entries mod p; None when p divides a denominator.
    fn reduce(nums: &[BigInt], dens: &[BigInt], p: u64) -> Option<Vec<u64>> {
        let bp = BigInt::from(p);
        let mut out = Vec::with_capacity(nums.len());
        for (n, d) in nums.iter().zip(dens) {
            let dm = d.mod_floor(&bp).to_u64().unwrap();
            if dm == 0 {
                return None;
            }
            let nm = n.mod_floor(&bp).to_u64().unwrap();
            out.push(mul_mod(nm, inv_mod(dm, p), p));
        }
        Some(out)
    }

    /// Reduced row echelon form mod p; returns the matrix and pivot columns.
    fn rref_mod(mut a: Vec<u64>, rows: usize, cols: usize, p: u64) -> (Vec<u64>, Vec<usize>) {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| a[i * cols + c] != 0) else { continue };
            if pr != r {
                for j in c..cols {
                    a.swap(pr * cols + j, r * cols + j);
                }
            }
            let inv = inv_mod(a[r * cols + c], p);
            for j in c..cols {
                a[r * cols + j] = mul_mod(a[r * cols + j], inv, p);
            }
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let f = a[i * cols + c];
                if f == 0 {
                    continue;
                }
                for j in c..cols {
                    let t = mul_mod(f, a[r * cols + j], p);
                    a[i * cols + j] = sub_mod(a[i * cols + j], t, p);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    /// The value that is x mod m and r mod p, in [0, m*p).
    fn crt(x: &BigInt, m: &BigInt, r: u64, p: u64) -> BigInt {
        let bp = BigInt::from(p);
        let xm = x.mod_floor(&bp).to_u64().unwrap();
        let minv = inv_mod(m.mod_floor(&bp).to_u64().unwrap(), p);
        x + m * BigInt::from(mul_mod(sub_mod(r, xm, p), minv, p))
    }

    /// x mod m as n/d with |n|, d <= sqrt(m/2), when such a fraction exists.
    /// Uniqueness at that bound makes a hit almost certainly the true value;
    /// the caller still verifies.
    fn reconstruct(x: &BigInt, m: &BigInt) -> Option<Rational> {
        let bound = (m >> 1usize).sqrt();
        let mut r0 = m.clone();
        let mut r1 = x.mod_floor(m);
        let mut t0 = BigInt::from(0);
        let mut t1 = BigInt::from(1);
        while r1 > bound {
            let q = &r0 / &r1;
            let r2 = &r0 - &q * &r1;
            r0 = std::mem::replace(&mut r1, r2);
            let t2 = &t0 - &q * &t1;
            t0 = std::mem::replace(&mut t1, t2);
        }
        if t1.bits() == 0 || t1.abs() > bound {
            return None;
        }
        if t1.is_negative() {
            t1 = -t1;
            r1 = -r1;
        }
        if r1.gcd(&t1) != BigInt::from(1) {
            return None;
        }
        Some(Rational::new(r1, t1))
    }

    struct PrimeStream {
        next_candidate: u64,
    }

    impl PrimeStream {
        // descending odd candidates from 2^61 - 1, which is itself prime
        fn next_prime(&mut self) -> u64 {
            loop {
                let n = self.next_candidate;
                self.next_candidate -= 2;
                if is_prime(n) {
                    return n;
                }
            }
        }
    }

    /// Deterministic Miller-Rabin; this witness set is exact for all u64.
    fn is_prime(n: u64) -> bool {
        const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
        if n < 2 {
            return false;
        }
        for w in WITNESSES {
            if n % w == 0 {
                return n == w;
            }
        }
        let s = (n - 1).trailing_zeros();
        let d = (n - 1) >> s;
        'witness: for w in WITNESSES {
            let mut x = pow_mod(w, d, n);
            if x == 1 || x == n - 1 {
                continue;
            }
            for _ in 1..s {
                x = mul_mod(x, x, n);
                if x == n - 1 {
                    continue 'witness;
                }
            }
            return false;
        }
        true
    }

    fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
        ((a as u128 * b as u128) % p as u128) as u64
    }

    fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
        if a >= b { a - b } else { a + p - b }
    }

    fn inv_mod(a: u64, p: u64) -> u64 {
        pow_mod(a, p - 2, p)
    }

    fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
        let mut acc = 1;
        b %= p;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(acc, b, p);
            }
            b = mul_mod(b, b, p);
            e >>= 1;
        }
        acc
    }
}
