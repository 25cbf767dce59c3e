//! Density matrices and the state families used throughout the crate:
//! Bell, two-qubit X-states, GHZ/W white-noise mixtures and the damped
//! family built from `sqrt(w)|00> + sqrt(1-w)|11>`.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::channels::{amplitude_damping, apply_channel};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::ptranspose::SubsystemLabel;
use crate::scalar::Scalar;

/// Unit-trace, Hermitian, positive semidefinite matrix with a tensor-factor
/// layout. The basis index of `|i_1 ... i_n>` is the mixed-radix number with
/// the first factor most significant.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<T: Scalar> {
    matrix: ComplexMatrix<T>,
    dims: Vec<usize>,
}

impl<T: Scalar> DensityMatrix<T> {
    /// Validates with the scalar type's default tolerances.
    pub fn new(matrix: ComplexMatrix<T>, dims: Vec<usize>) -> Result<Self> {
        Self::with_tolerance(matrix, dims, T::default_tol())
    }

    /// Validates trace and Hermiticity at the structural tolerance and
    /// positivity at `psd_tol` (relative).
    pub fn with_tolerance(matrix: ComplexMatrix<T>, dims: Vec<usize>, psd_tol: T) -> Result<Self> {
        let dim: usize = dims.iter().product();
        if dims.is_empty() || dims.contains(&0) || dim != matrix.dim() {
            return Err(Error::BadDims {
                dims,
                dim: matrix.dim(),
            });
        }
        let tol = T::structural_tol();
        matrix.ensure_hermitian(tol)?;
        let trace = matrix.trace();
        if (trace.re - T::one()).abs() > tol || trace.im.abs() > tol {
            return Err(Error::TraceNotUnit {
                trace: trace.re.to_f64_lossy(),
            });
        }
        let values = matrix.hermitian_eigenvalues()?;
        if !crate::linalg::psd_from_spectrum(&values, psd_tol) {
            return Err(Error::NotPsd {
                min_eigenvalue: values[0].to_f64_lossy(),
            });
        }
        Ok(Self { matrix, dims })
    }

    /// Skips validation. Only for matrices valid by construction.
    pub(crate) fn from_parts_unchecked(matrix: ComplexMatrix<T>, dims: Vec<usize>) -> Self {
        debug_assert_eq!(dims.iter().product::<usize>(), matrix.dim());
        Self { matrix, dims }
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn num_factors(&self) -> usize {
        self.dims.len()
    }

    pub fn is_qubits(&self, n: usize) -> bool {
        self.dims.len() == n && self.dims.iter().all(|&d| d == 2)
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex<T> {
        self.matrix[(i, j)]
    }

    pub fn purity(&self) -> T {
        (&self.matrix * &self.matrix).trace().re
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.matrix
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Self {
        let dim: usize = dims.iter().product();
        let m = ComplexMatrix::identity(dim).scale(T::one() / T::from_usize(dim).unwrap());
        Self::from_parts_unchecked(m, dims)
    }

    /// Normalised projector onto `psi`.
    pub fn pure(psi: &[Complex<T>], dims: Vec<usize>) -> Result<Self> {
        let norm = psi.iter().fold(T::zero(), |s, z| s + z.norm_sqr());
        if norm == T::zero() {
            return Err(Error::InvalidArgument("zero state vector".into()));
        }
        let m = ComplexMatrix::outer(psi).scale(T::one() / norm);
        Self::new(m, dims)
    }

    /// Convex combination `sum w_i rho_i`; weights must be non-negative and
    /// sum to one.
    pub fn mixture(parts: &[(T, &DensityMatrix<T>)]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty mixture".into()))?
            .1;
        let mut acc = ComplexMatrix::zeros(first.dim());
        let mut total = T::zero();
        for (w, rho) in parts {
            if *w < T::zero() {
                return Err(Error::InvalidArgument("negative mixture weight".into()));
            }
            if rho.dims != first.dims {
                return Err(Error::DimensionMismatch {
                    expected: first.dim(),
                    found: rho.dim(),
                });
            }
            acc = &acc + &rho.matrix.scale(*w);
            total += *w;
        }
        if (total - T::one()).abs() > T::structural_tol() {
            return Err(Error::InvalidArgument(
                "mixture weights do not sum to 1".into(),
            ));
        }
        Ok(Self::from_parts_unchecked(acc, first.dims.clone()))
    }

    pub fn tensor(&self, other: &DensityMatrix<T>) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self::from_parts_unchecked(self.matrix.kron(&other.matrix), dims)
    }

    /// Reorders tensor factors: factor `k` of the output is factor `perm[k]`
    /// of the input.
    pub fn permute_subsystems(&self, perm: &[usize]) -> Result<Self> {
        let n = self.dims.len();
        let mut seen = vec![false; n];
        if perm.len() != n
            || perm
                .iter()
                .any(|&p| p >= n || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::InvalidArgument(format!(
                "{perm:?} is not a permutation of {n} factors"
            )));
        }
        let new_dims: Vec<usize> = perm.iter().map(|&p| self.dims[p]).collect();
        let dim = self.dim();
        let mut out = ComplexMatrix::zeros(dim);
        for i in 0..dim {
            let si = permute_index(i, &self.dims, &new_dims, perm);
            for j in 0..dim {
                let sj = permute_index(j, &self.dims, &new_dims, perm);
                out[(si, sj)] = self.matrix[(i, j)];
            }
        }
        Ok(Self::from_parts_unchecked(out, new_dims))
    }
}

/// Splits a flat basis index into per-factor digits.
pub fn digits_of(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut digits = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        digits[k] = index % dims[k];
        index /= dims[k];
    }
    digits
}

pub fn index_of(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&d, &n)| acc * n + d)
}

fn permute_index(index: usize, dims: &[usize], new_dims: &[usize], perm: &[usize]) -> usize {
    let digits = digits_of(index, dims);
    let new_digits: Vec<usize> = perm.iter().map(|&p| digits[p]).collect();
    index_of(&new_digits, new_dims)
}

/// Parameters of a two-qubit X-state: the diagonal plus the two
/// anti-diagonal coherences `rho14` and `rho23` (1-based labels).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XStateParams<T> {
    pub rho11: T,
    pub rho22: T,
    pub rho33: T,
    pub rho44: T,
    pub rho14: Complex<T>,
    pub rho23: Complex<T>,
}

impl<T: Scalar> XStateParams<T> {
    pub fn new(diag: [T; 4], rho14: Complex<T>, rho23: Complex<T>) -> Self {
        Self {
            rho11: diag[0],
            rho22: diag[1],
            rho33: diag[2],
            rho44: diag[3],
            rho14,
            rho23,
        }
    }

    pub fn real(diag: [f64; 4], rho14: f64, rho23: f64) -> Self {
        Self::new(
            diag.map(T::lit),
            Complex::new(T::lit(rho14), T::zero()),
            Complex::new(T::lit(rho23), T::zero()),
        )
    }

    /// `g = rho11 + rho44`.
    pub fn g(&self) -> T {
        self.rho11 + self.rho44
    }

    /// `h = rho22 + rho33`.
    pub fn h(&self) -> T {
        self.rho22 + self.rho33
    }

    pub fn validate(&self) -> Result<()> {
        let tol = T::structural_tol();
        let diag = [self.rho11, self.rho22, self.rho33, self.rho44];
        if let Some(d) = diag.iter().find(|d| **d < -tol) {
            return Err(Error::XStatePositivity(format!(
                "negative diagonal entry {d}"
            )));
        }
        let trace = diag.iter().fold(T::zero(), |s, &d| s + d);
        if (trace - T::one()).abs() > tol {
            return Err(Error::TraceNotUnit {
                trace: trace.to_f64_lossy(),
            });
        }
        if self.rho11 * self.rho44 < self.rho14.norm_sqr() - tol {
            return Err(Error::XStatePositivity(format!(
                "rho11*rho44 >= |rho14|^2 fails: {} < {}",
                self.rho11 * self.rho44,
                self.rho14.norm_sqr()
            )));
        }
        if self.rho22 * self.rho33 < self.rho23.norm_sqr() - tol {
            return Err(Error::XStatePositivity(format!(
                "rho22*rho33 >= |rho23|^2 fails: {} < {}",
                self.rho22 * self.rho33,
                self.rho23.norm_sqr()
            )));
        }
        Ok(())
    }

    pub fn to_matrix(&self) -> ComplexMatrix<T> {
        let mut m = ComplexMatrix::from_diagonal(&[self.rho11, self.rho22, self.rho33, self.rho44]);
        m[(0, 3)] = self.rho14;
        m[(3, 0)] = self.rho14.conj();
        m[(1, 2)] = self.rho23;
        m[(2, 1)] = self.rho23.conj();
        m
    }

    /// Reads the X-state parameters off a two-qubit state, provided every
    /// entry off the diagonal and anti-diagonal is below `tol`.
    pub fn from_density(rho: &DensityMatrix<T>, tol: T) -> Option<Self> {
        if !rho.is_qubits(2) {
            return None;
        }
        for i in 0..4 {
            for j in 0..4 {
                if i != j && i + j != 3 && rho.entry(i, j).norm() > tol {
                    return None;
                }
            }
        }
        Some(Self {
            rho11: rho.entry(0, 0).re,
            rho22: rho.entry(1, 1).re,
            rho33: rho.entry(2, 2).re,
            rho44: rho.entry(3, 3).re,
            rho14: rho.entry(0, 3),
            rho23: rho.entry(1, 2),
        })
    }
}

pub fn bell_phi_plus<T: Scalar>() -> DensityMatrix<T> {
    let h = T::lit(0.5);
    let mut m = ComplexMatrix::zeros(4);
    for &(i, j) in &[(0, 0), (0, 3), (3, 0), (3, 3)] {
        m[(i, j)] = Complex::new(h, T::zero());
    }
    DensityMatrix::from_parts_unchecked(m, vec![2, 2])
}

pub fn x_state<T: Scalar>(p: &XStateParams<T>) -> Result<DensityMatrix<T>> {
    p.validate()?;
    Ok(DensityMatrix::from_parts_unchecked(
        p.to_matrix(),
        vec![2, 2],
    ))
}

fn check_unit<T: Scalar>(name: &'static str, value: T) -> Result<()> {
    if !(value >= T::zero() && value <= T::one()) {
        return Err(Error::ParameterOutOfRange {
            name,
            value: value.to_f64_lossy(),
            range: "[0, 1]",
        });
    }
    Ok(())
}

fn white_noise_mixture<T: Scalar>(weight: T, psi: &[usize], amp: T) -> DensityMatrix<T> {
    let mut m = ComplexMatrix::identity(8).scale(weight / T::lit(8.0));
    let pure = (T::one() - weight) * amp * amp;
    for &i in psi {
        for &j in psi {
            m[(i, j)] += Complex::new(pure, T::zero());
        }
    }
    DensityMatrix::from_parts_unchecked(m, vec![2, 2, 2])
}

/// `alpha I/8 + (1 - alpha)|GHZ><GHZ|`, `|GHZ> = (|000> + |111>)/sqrt(2)`.
pub fn ghz_white_noise<T: Scalar>(alpha: T) -> Result<DensityMatrix<T>> {
    check_unit("alpha", alpha)?;
    Ok(white_noise_mixture(alpha, &[0, 7], T::lit(0.5).sqrt()))
}

/// `beta I/8 + (1 - beta)|W><W|`, `|W> = (|001> + |010> + |100>)/sqrt(3)`.
pub fn w_white_noise<T: Scalar>(beta: T) -> Result<DensityMatrix<T>> {
    check_unit("beta", beta)?;
    Ok(white_noise_mixture(
        beta,
        &[1, 2, 4],
        (T::one() / T::lit(3.0)).sqrt(),
    ))
}

/// Mixture `(1 - a)|b><b| + a|01><01|` with `a = eta (1 - omega)` and
/// `|b> = b0|00> + b1|11>`, `b0^2 = omega / (1 - a)`.
///
/// This is exactly the state produced by amplitude damping (strength `eta`)
/// of the first qubit of `sqrt(omega)|00> + sqrt(1 - omega)|11>`.
pub fn knoll_state<T: Scalar>(omega: T, eta: T) -> Result<DensityMatrix<T>> {
    check_unit("omega", omega)?;
    check_unit("eta", eta)?;
    let one = T::one();
    let a = eta * (one - omega);
    let mut m = ComplexMatrix::zeros(4);
    m[(1, 1)] = Complex::new(a, T::zero());
    if one - a > T::zero() {
        let b0_sq = (omega / (one - a)).min(one);
        let b1_sq = one - b0_sq;
        let w = one - a;
        let coh = w * (b0_sq * b1_sq).sqrt();
        m[(0, 0)] = Complex::new(w * b0_sq, T::zero());
        m[(3, 3)] = Complex::new(w * b1_sq, T::zero());
        m[(0, 3)] = Complex::new(coh, T::zero());
        m[(3, 0)] = Complex::new(coh, T::zero());
    }
    Ok(DensityMatrix::from_parts_unchecked(m, vec![2, 2]))
}

/// Named parametrised state families.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NoiseFamilyPoint<T> {
    GhzWhiteNoise {
        alpha: T,
    },
    WWhiteNoise {
        beta: T,
    },
    /// The damped family, optionally followed by amplitude damping of
    /// strength `gamma` on the second qubit.
    Knoll {
        omega: T,
        eta: T,
        gamma: Option<T>,
    },
}

impl<T: Scalar> NoiseFamilyPoint<T> {
    pub fn state(&self) -> Result<DensityMatrix<T>> {
        match *self {
            Self::GhzWhiteNoise { alpha } => ghz_white_noise(alpha),
            Self::WWhiteNoise { beta } => w_white_noise(beta),
            Self::Knoll { omega, eta, gamma } => {
                let rho = knoll_state(omega, eta)?;
                match gamma {
                    Some(g) => apply_channel(&rho, &amplitude_damping(g)?, SubsystemLabel(1)),
                    None => Ok(rho),
                }
            }
        }
    }
}

/// Seeded random generators. All take an explicit RNG or seed; ChaCha8 makes
/// the output bit-identical across platforms.
pub mod random {
    use super::*;

    pub fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn gaussian<T: Scalar, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex::new(T::lit(re), T::lit(im))
    }

    /// Ginibre-induced state `G G^dag / Tr(G G^dag)`.
    pub fn density_matrix_with<T: Scalar, R: Rng + ?Sized>(
        rng: &mut R,
        dims: &[usize],
    ) -> DensityMatrix<T> {
        let dim: usize = dims.iter().product();
        let data = (0..dim * dim).map(|_| gaussian(rng)).collect();
        let g = ComplexMatrix::new(dim, data).expect("dim*dim entries");
        let mut m = &g * &g.adjoint();
        let tr = m.trace().re;
        m = m.scale(T::one() / tr);
        // exact Hermitian symmetry, so later checks see no rounding skew
        for i in 0..dim {
            m[(i, i)] = Complex::new(m[(i, i)].re, T::zero());
            for j in (i + 1)..dim {
                m[(j, i)] = m[(i, j)].conj();
            }
        }
        DensityMatrix::from_parts_unchecked(m, dims.to_vec())
    }

    pub fn random_density_matrix<T: Scalar>(dim: usize, seed: u64) -> Result<DensityMatrix<T>> {
        let dims = qubit_dims(dim).unwrap_or_else(|| vec![dim]);
        if dim == 0 || dim > 8 {
            return Err(Error::InvalidArgument(format!(
                "dimension {dim} outside 1..=8"
            )));
        }
        Ok(density_matrix_with(&mut rng(seed), &dims))
    }

    fn qubit_dims(dim: usize) -> Option<Vec<usize>> {
        match dim {
            2 => Some(vec![2]),
            4 => Some(vec![2, 2]),
            8 => Some(vec![2, 2, 2]),
            _ => None,
        }
    }

    /// Point drawn uniformly from the probability simplex.
    pub fn simplex<T: Scalar, R: Rng + ?Sized, const N: usize>(rng: &mut R) -> [T; N] {
        let mut w = [0.0f64; N];
        for x in w.iter_mut() {
            let u: f64 = rng.random();
            *x = -(1.0 - u).ln();
        }
        let total: f64 = w.iter().sum();
        w.map(|x| T::lit(x / total))
    }

    fn coherence<T: Scalar, R: Rng + ?Sized>(rng: &mut R, bound_sq: T) -> Complex<T> {
        let u: f64 = rng.random();
        let phase: f64 = rng.random::<f64>() * std::f64::consts::TAU;
        let r = T::lit(u) * bound_sq.sqrt();
        Complex::from_polar(r, T::lit(phase))
    }

    pub fn x_state_with<T: Scalar, R: Rng + ?Sized>(rng: &mut R) -> XStateParams<T> {
        let d: [T; 4] = simplex(rng);
        let rho14 = coherence(rng, d[0] * d[3]);
        let rho23 = coherence(rng, d[1] * d[2]);
        XStateParams::new(d, rho14, rho23)
    }

    pub fn random_x_state<T: Scalar>(seed: u64) -> XStateParams<T> {
        x_state_with(&mut rng(seed))
    }

    /// Three-qubit X-state: diagonal plus coherences on the anti-diagonal
    /// pairs (1,8), (2,7), (3,6), (4,5).
    pub fn three_qubit_x_state_with<T: Scalar, R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix<T> {
        let d: [T; 8] = simplex(rng);
        let mut m = ComplexMatrix::from_diagonal(&d);
        for i in 0..4 {
            let j = 7 - i;
            let c = coherence(rng, d[i] * d[j]);
            m[(i, j)] = c;
            m[(j, i)] = c.conj();
        }
        DensityMatrix::from_parts_unchecked(m, vec![2, 2, 2])
    }

    /// Convex mixture of between 1 and `max_terms` random product states.
    pub fn separable_state_with<T: Scalar, R: Rng + ?Sized>(
        rng: &mut R,
        dims: &[usize],
        max_terms: usize,
    ) -> DensityMatrix<T> {
        let terms = rng.random_range(1..=max_terms.max(1));
        let dim: usize = dims.iter().product();
        let mut weights: Vec<f64> = (0..terms)
            .map(|_| -(1.0 - rng.random::<f64>()).ln())
            .collect();
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        let mut acc = ComplexMatrix::zeros(dim);
        for w in weights {
            let mut product: Option<DensityMatrix<T>> = None;
            for &d in dims {
                let factor = density_matrix_with::<T, R>(rng, &[d]);
                product = Some(match product {
                    None => factor,
                    Some(p) => p.tensor(&factor),
                });
            }
            let product = product.expect("at least one factor");
            acc = &acc + &product.matrix.scale(T::lit(w));
        }
        DensityMatrix::from_parts_unchecked(acc, dims.to_vec())
    }

    /// Random Hermitian matrix whose spectrum straddles zero about half the
    /// time, with some inputs placed right on the PSD boundary.
    pub fn hermitian_with<T: Scalar, R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix<T> {
        let data = (0..dim * dim).map(|_| gaussian(rng)).collect();
        let g = ComplexMatrix::new(dim, data).expect("dim*dim entries");
        let mut m = &g * &g.adjoint();
        let mode: u8 = rng.random_range(0..3);
        let shift = match mode {
            0 => T::zero(),
            1 => T::lit(rng.random::<f64>() * 2.0),
            _ => {
                // land exactly on the boundary: smallest eigenvalue zero
                m.hermitian_eigenvalues()
                    .expect("Hermitian by construction")[0]
            }
        };
        m = &m - &ComplexMatrix::identity(dim).scale(shift);
        for i in 0..dim {
            m[(i, i)] = Complex::new(m[(i, i)].re, T::zero());
            for j in (i + 1)..dim {
                m[(j, i)] = m[(i, j)].conj();
            }
        }
        m
    }
}

impl<T: Scalar> From<DensityMatrix<T>> for ComplexMatrix<T> {
    fn from(rho: DensityMatrix<T>) -> Self {
        rho.matrix
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn assert_matrix_close(a: &ComplexMatrix<f64>, b: &ComplexMatrix<f64>, eps: f64) {
        assert_eq!(a.dim(), b.dim());
        for (x, y) in a.as_slice().iter().zip(b.as_slice()) {
            assert!((x - y).norm() <= eps, "{a:?}\n!=\n{b:?}");
        }
    }

    #[test]
    fn bell_state_basics() {
        let rho = bell_phi_plus::<f64>();
        assert_eq!(rho.dims(), &[2, 2]);
        for (i, d) in [0.5, 0.0, 0.0, 0.5].iter().enumerate() {
            assert_abs_diff_eq!(rho.entry(i, i).re, *d);
        }
        assert_abs_diff_eq!(rho.entry(0, 3).re, 0.5);
        assert_abs_diff_eq!(rho.matrix().trace().re, 1.0);
        assert_abs_diff_eq!(rho.purity(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn x_state_examples() {
        let mixed = x_state(&XStateParams::<f64>::real([0.25; 4], 0.0, 0.0)).unwrap();
        assert_matrix_close(mixed.matrix(), &ComplexMatrix::identity(4).scale(0.25), 0.0);

        let bell = x_state(&XStateParams::<f64>::real([0.5, 0.0, 0.0, 0.5], 0.5, 0.0)).unwrap();
        assert_matrix_close(bell.matrix(), bell_phi_plus::<f64>().matrix(), 0.0);

        assert!(x_state(&XStateParams::<f64>::real([0.3, 0.2, 0.2, 0.3], 0.25, 0.1)).is_ok());
    }

    #[test]
    fn x_state_rejects_violations() {
        let err = x_state(&XStateParams::<f64>::real([0.3, 0.2, 0.2, 0.3], 0.31, 0.0)).unwrap_err();
        assert!(matches!(err, Error::XStatePositivity(ref s) if s.contains("rho11*rho44")));
        let err = x_state(&XStateParams::<f64>::real([0.3, 0.2, 0.2, 0.3], 0.0, 0.21)).unwrap_err();
        assert!(matches!(err, Error::XStatePositivity(ref s) if s.contains("rho22*rho33")));
        let err = x_state(&XStateParams::<f64>::real([0.3, 0.3, 0.2, 0.3], 0.0, 0.0)).unwrap_err();
        assert!(matches!(err, Error::TraceNotUnit { .. }));
    }

    #[test]
    fn ghz_noise_limits() {
        let rho = ghz_white_noise(1.0f64).unwrap();
        assert_matrix_close(
            rho.matrix(),
            &ComplexMatrix::identity(8).scale(0.125),
            1e-16,
        );
        let rho = ghz_white_noise(0.0f64).unwrap();
        assert_abs_diff_eq!(rho.purity(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(rho.entry(0, 7).re, 0.5, epsilon = 1e-15);
        assert!(ghz_white_noise(1.5f64).is_err());
        assert!(ghz_white_noise(f64::NAN).is_err());
    }

    #[test]
    fn w_noise_limits() {
        let rho = w_white_noise(1.0f64).unwrap();
        assert_matrix_close(
            rho.matrix(),
            &ComplexMatrix::identity(8).scale(0.125),
            1e-16,
        );
        let rho = w_white_noise(0.0f64).unwrap();
        assert_abs_diff_eq!(rho.purity(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(rho.entry(1, 4).re, 1.0 / 3.0, epsilon = 1e-15);
        assert!(w_white_noise(-0.1f64).is_err());
    }

    #[test]
    fn knoll_limits() {
        let (omega, eta) = (0.3f64, 0.0);
        let rho = knoll_state(omega, eta).unwrap();
        let psi = [
            Complex::new(omega.sqrt(), 0.0),
            Complex::new(0.0, 0.0),
            Complex::new(0.0, 0.0),
            Complex::new((1.0 - omega).sqrt(), 0.0),
        ];
        let pure = DensityMatrix::pure(&psi, vec![2, 2]).unwrap();
        assert_matrix_close(rho.matrix(), pure.matrix(), 1e-15);

        let rho = knoll_state(1.0f64, 0.4).unwrap();
        let mut expect = ComplexMatrix::zeros(4);
        expect[(0, 0)] = Complex::new(1.0, 0.0);
        assert_matrix_close(rho.matrix(), &expect, 1e-15);

        // fully damped, no |00> component: only |01> survives
        let rho = knoll_state(0.0f64, 1.0).unwrap();
        assert_abs_diff_eq!(rho.entry(1, 1).re, 1.0);
        assert!(knoll_state(0.5f64, 1.2).is_err());
    }

    #[test]
    fn knoll_equals_damped_pure_state() {
        for &(omega, eta) in &[
            (0.12, 0.21),
            (0.5, 0.5),
            (0.9, 0.05),
            (0.01, 0.99),
            (0.0, 0.3),
        ] {
            let psi = [
                Complex::new(f64::sqrt(omega), 0.0),
                Complex::new(0.0, 0.0),
                Complex::new(0.0, 0.0),
                Complex::new(f64::sqrt(1.0 - omega), 0.0),
            ];
            let xi = DensityMatrix::pure(&psi, vec![2, 2]).unwrap();
            let damped =
                apply_channel(&xi, &amplitude_damping(eta).unwrap(), SubsystemLabel(0)).unwrap();
            assert_matrix_close(
                knoll_state(omega, eta).unwrap().matrix(),
                damped.matrix(),
                1e-12,
            );
        }
    }

    #[test]
    fn white_noise_families_are_permutation_symmetric() {
        let perms: [[usize; 3]; 5] = [[1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
        for p in [0.0, 0.37, 0.8, 1.0] {
            for rho in [ghz_white_noise(p).unwrap(), w_white_noise(p).unwrap()] {
                for perm in &perms {
                    let swapped = rho.permute_subsystems(perm).unwrap();
                    assert_matrix_close(swapped.matrix(), rho.matrix(), 1e-15);
                }
            }
        }
    }

    #[test]
    fn random_states_are_valid_and_reproducible() {
        for seed in 0..20 {
            for dim in [2, 4, 8] {
                let rho = random::random_density_matrix::<f64>(dim, seed).unwrap();
                assert_abs_diff_eq!(rho.matrix().trace().re, 1.0, epsilon = 1e-12);
                DensityMatrix::new(rho.matrix().clone(), rho.dims().to_vec()).unwrap();
                let again = random::random_density_matrix::<f64>(dim, seed).unwrap();
                assert_eq!(rho, again);
            }
            let x = random::random_x_state::<f64>(seed);
            x.validate().unwrap();
            assert_eq!(x, random::random_x_state::<f64>(seed));
        }
        assert!(random::random_density_matrix::<f64>(9, 0).is_err());
    }

    #[test]
    fn density_matrix_validation() {
        let m = ComplexMatrix::<f64>::identity(4).scale(0.5);
        assert!(matches!(
            DensityMatrix::new(m, vec![2, 2]),
            Err(Error::TraceNotUnit { .. })
        ));
        let m = ComplexMatrix::<f64>::from_diagonal(&[1.5, -0.5]);
        assert!(matches!(
            DensityMatrix::new(m, vec![2]),
            Err(Error::NotPsd { .. })
        ));
        let m = ComplexMatrix::<f64>::identity(4).scale(0.25);
        assert!(matches!(
            DensityMatrix::new(m, vec![2, 3]),
            Err(Error::BadDims { .. })
        ));
    }

    #[test]
    fn x_params_round_trip_through_density() {
        let p = random::random_x_state::<f64>(7);
        let rho = x_state(&p).unwrap();
        assert_eq!(XStateParams::from_density(&rho, 1e-14), Some(p));
        assert_eq!(
            XStateParams::from_density(&random::random_density_matrix::<f64>(4, 1).unwrap(), 1e-12),
            None
        );
    }
}
