//! Dense complex matrices of small dimension, with a cyclic Jacobi
//! Hermitian eigensolver and an LU determinant.
//!
//! Everything here is the ground truth that the closed forms elsewhere in the
//! crate are tested against, so routines favour determinism and accuracy over
//! speed. Dimensions of interest are at most 8.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Maximum number of Jacobi sweeps before giving up on convergence.
const MAX_SWEEPS: usize = 100;

/// Square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

/// Eigen-decomposition of a Hermitian matrix. Eigenvalues ascend; column `i`
/// of `vectors` belongs to `values[i]`.
#[derive(Clone, Debug)]
pub struct HermitianEigen<T: Scalar> {
    pub values: Vec<T>,
    pub vectors: ComplexMatrix<T>,
}

impl<T: Scalar> ComplexMatrix<T> {
    pub fn new(dim: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    /// Builds a matrix from nested rows, rejecting ragged input.
    pub fn from_rows(rows: &[Vec<Complex<T>>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::NotSquare {
                    rows: dim,
                    cols: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { dim, data })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<Complex<T>>> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&x| Complex::new(T::lit(x), T::zero()))
                    .collect()
            })
            .collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex::one();
        }
        m
    }

    pub fn from_diagonal(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex::new(d, T::zero());
        }
        m
    }

    /// Projector `|psi><psi|` (no normalisation applied).
    pub fn outer(psi: &[Complex<T>]) -> Self {
        let dim = psi.len();
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = psi[i] * psi[j].conj();
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).fold(Complex::zero(), |acc, i| acc + self[(i, i)])
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m[(i, j)] = self[(j, i)].conj();
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m[(i, j)] = self[(j, i)];
            }
        }
        m
    }

    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn kron(&self, other: &Self) -> Self {
        let n = self.dim * other.dim;
        let mut m = Self::zeros(n);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let a = self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.dim {
                    for l in 0..other.dim {
                        m[(i * other.dim + k, j * other.dim + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        m
    }

    /// Sub-matrix keeping the given 0-based rows and columns.
    pub fn principal_submatrix(&self, keep: &[usize]) -> Result<Self> {
        if let Some(&bad) = keep.iter().find(|&&i| i >= self.dim) {
            return Err(Error::InvalidArgument(format!(
                "index {bad} out of range for dimension {}",
                self.dim
            )));
        }
        let n = keep.len();
        let mut m = Self::zeros(n);
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                m[(a, b)] = self[(i, j)];
            }
        }
        Ok(m)
    }

    pub fn max_abs_entry(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    /// Largest `|m(i,j) - conj(m(j,i))|`, with the entry pair where it occurs.
    pub fn hermiticity_violation(&self) -> (usize, usize, T) {
        let mut worst = (0, 0, T::zero());
        for i in 0..self.dim {
            for j in i..self.dim {
                let dev = (self[(i, j)] - self[(j, i)].conj()).norm();
                if dev > worst.2 {
                    worst = (i, j, dev);
                }
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermiticity_violation().2 <= tol
    }

    pub fn ensure_hermitian(&self, tol: T) -> Result<()> {
        let (row, col, dev) = self.hermiticity_violation();
        if dev > tol {
            return Err(Error::NotHermitian {
                row,
                col,
                deviation: dev.to_f64_lossy(),
            });
        }
        Ok(())
    }

    /// Full eigen-decomposition by cyclic complex Jacobi rotations.
    pub fn hermitian_eigen(&self) -> Result<HermitianEigen<T>> {
        self.ensure_hermitian(hermitian_input_tol(self))?;
        let n = self.dim;
        let mut a = self.clone();
        // symmetrise so rounding noise in the input does not bias the result
        for i in 0..n {
            a[(i, i)] = Complex::new(a[(i, i)].re, T::zero());
            for j in (i + 1)..n {
                let avg = (a[(i, j)] + a[(j, i)].conj()).scale(T::lit(0.5));
                a[(i, j)] = avg;
                a[(j, i)] = avg.conj();
            }
        }
        let mut v = Self::identity(n);
        let frob = a
            .data
            .iter()
            .fold(T::zero(), |s, z| s + z.norm_sqr())
            .sqrt();
        let target = T::epsilon() * frob * T::lit(1e-2);

        let mut converged = n < 2;
        for _ in 0..MAX_SWEEPS {
            let off = off_diagonal_norm(&a);
            if off <= target || off == T::zero() {
                converged = true;
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    jacobi_rotate(&mut a, &mut v, p, q);
                }
            }
        }
        if !converged && off_diagonal_norm(&a) > T::epsilon().sqrt() * frob.max(T::one()) {
            return Err(Error::Numerical(
                "Jacobi eigensolver did not converge".into(),
            ));
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| {
            a[(i, i)]
                .re
                .partial_cmp(&a[(j, j)].re)
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let values = order.iter().map(|&i| a[(i, i)].re).collect();
        let mut vectors = Self::zeros(n);
        for (col, &src) in order.iter().enumerate() {
            for row in 0..n {
                vectors[(row, col)] = v[(row, src)];
            }
        }
        Ok(HermitianEigen { values, vectors })
    }

    /// Eigenvalues of a Hermitian matrix in ascending order.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<T>> {
        Ok(self.hermitian_eigen()?.values)
    }

    /// Determinant by LU decomposition with partial pivoting.
    pub fn determinant(&self) -> Complex<T> {
        let n = self.dim;
        if n == 0 {
            return Complex::one();
        }
        let mut lu = self.data.clone();
        let mut det = Complex::<T>::one();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| {
                    lu[i * n + col]
                        .norm()
                        .partial_cmp(&lu[j * n + col].norm())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .unwrap_or(col);
            let pv = lu[pivot * n + col];
            if pv.is_zero() {
                return Complex::zero();
            }
            if pivot != col {
                for k in 0..n {
                    lu.swap(pivot * n + k, col * n + k);
                }
                det = -det;
            }
            det *= pv;
            for row in (col + 1)..n {
                let factor = lu[row * n + col] / pv;
                if factor.is_zero() {
                    continue;
                }
                for k in col..n {
                    let sub = factor * lu[col * n + k];
                    lu[row * n + k] -= sub;
                }
            }
        }
        det
    }

    /// Real part of the determinant of a Hermitian matrix. The imaginary
    /// residue must stay below `1e-10` scaled by the magnitude of the result.
    pub fn hermitian_determinant(&self) -> Result<T> {
        self.ensure_hermitian(hermitian_input_tol(self))?;
        let det = self.determinant();
        let scale = T::one().max(self.max_abs_entry().powi(self.dim as i32));
        if det.im.abs() > T::lit(1e-10) * scale {
            return Err(Error::Numerical(format!(
                "determinant of Hermitian matrix has imaginary part {:e}",
                det.im.to_f64_lossy()
            )));
        }
        Ok(det.re)
    }

    /// `Tr(M^k)` by repeated multiplication.
    pub fn power_trace(&self, k: usize) -> Result<T> {
        Ok(*self
            .power_traces(k)?
            .last()
            .expect("power_traces returns k >= 1 values"))
    }

    /// `[Tr(M), Tr(M^2), ..., Tr(M^kmax)]` by repeated multiplication.
    pub fn power_traces(&self, kmax: usize) -> Result<Vec<T>> {
        if kmax == 0 {
            return Err(Error::InvalidArgument("moment order k must be >= 1".into()));
        }
        self.ensure_hermitian(hermitian_input_tol(self))?;
        let mut out = Vec::with_capacity(kmax);
        let mut power = self.clone();
        out.push(power.trace().re);
        for _ in 1..kmax {
            power = &power * self;
            out.push(power.trace().re);
        }
        Ok(out)
    }

    /// `Tr(M^k)` as the sum of k-th powers of the eigenvalues.
    pub fn power_trace_spectral(&self, k: usize) -> Result<T> {
        if k == 0 {
            return Err(Error::InvalidArgument("moment order k must be >= 1".into()));
        }
        let values = self.hermitian_eigenvalues()?;
        Ok(values.iter().fold(T::zero(), |s, &l| s + l.powi(k as i32)))
    }

    /// PSD test: smallest eigenvalue at least `-tol * max(1, max |lambda|)`.
    pub fn is_psd(&self, tol: T) -> Result<bool> {
        if tol < T::zero() {
            return Err(Error::InvalidArgument(
                "tolerance must be non-negative".into(),
            ));
        }
        let values = self.hermitian_eigenvalues()?;
        Ok(psd_from_spectrum(&values, tol))
    }
}

/// Shared decision rule for "spectrum is non-negative within tolerance".
pub fn psd_from_spectrum<T: Scalar>(values: &[T], tol: T) -> bool {
    let scale = values.iter().fold(T::one(), |m, l| m.max(l.abs()));
    values.iter().all(|&l| l >= -tol * scale)
}

/// Hermiticity tolerance applied on entry to the spectral routines. Scales
/// with the matrix so that products of valid states are not rejected.
fn hermitian_input_tol<T: Scalar>(m: &ComplexMatrix<T>) -> T {
    T::structural_tol() * T::one().max(m.max_abs_entry()) * T::lit(100.0)
}

fn off_diagonal_norm<T: Scalar>(a: &ComplexMatrix<T>) -> T {
    let mut s = T::zero();
    for i in 0..a.dim {
        for j in 0..a.dim {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One Jacobi step annihilating entry `(p, q)`. The rotation first removes
/// the phase of `a[p][q]`, then applies a real Givens rotation.
fn jacobi_rotate<T: Scalar>(
    a: &mut ComplexMatrix<T>,
    v: &mut ComplexMatrix<T>,
    p: usize,
    q: usize,
) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == T::zero() {
        return;
    }
    let phase = apq / r;
    let two = T::lit(2.0);
    let theta = (a[(q, q)].re - a[(p, p)].re) / (two * r);
    let t = if theta == T::zero() {
        T::one()
    } else {
        theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt())
    };
    let c = T::one() / (t * t + T::one()).sqrt();
    let s = t * c;
    let zero = T::zero();

    let j_pp = Complex::new(c, zero);
    let j_pq = Complex::new(s, zero);
    let j_qp = phase.conj() * (-s);
    let j_qq = phase.conj() * c;

    let n = a.dim;
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * j_pp + akq * j_qp;
        a[(k, q)] = akp * j_pq + akq * j_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = j_pp.conj() * apk + j_qp.conj() * aqk;
        a[(q, k)] = j_pq.conj() * apk + j_qq.conj() * aqk;
    }
    a[(p, q)] = Complex::zero();
    a[(q, p)] = Complex::zero();
    a[(p, p)] = Complex::new(a[(p, p)].re, zero);
    a[(q, q)] = Complex::new(a[(q, q)].re, zero);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * j_pp + vkq * j_qp;
        v[(k, q)] = vkp * j_pq + vkq * j_qq;
    }
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.dim + j]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.dim + j]
    }
}

impl<T: Scalar> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn mul(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "matrix product dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl<T: Scalar> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn add(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "matrix sum dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl<T: Scalar> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn sub(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "matrix difference dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl<T: Scalar> fmt::Debug for ComplexMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}
