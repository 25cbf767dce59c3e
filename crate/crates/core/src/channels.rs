//! Single-qubit Kraus channels, Wootters concurrence, and the threshold at
//! which second-qubit amplitude damping makes the damped family PPT.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::ptranspose::SubsystemLabel;
use crate::roots::bisect_transition;
use crate::scalar::Scalar;
use crate::states::{knoll_state, DensityMatrix, XStateParams};

/// Trace-preserving channel on one tensor factor. Completeness
/// `sum K_i^dag K_i = I` is checked at construction.
#[derive(Clone, Debug)]
pub struct KrausChannel<T: Scalar> {
    ops: Vec<ComplexMatrix<T>>,
}

impl<T: Scalar> KrausChannel<T> {
    pub fn new(ops: Vec<ComplexMatrix<T>>) -> Result<Self> {
        let first = ops.first().ok_or_else(|| {
            Error::InvalidArgument("channel needs at least one Kraus operator".into())
        })?;
        let d = first.dim();
        if let Some(bad) = ops.iter().find(|k| k.dim() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: bad.dim(),
            });
        }
        let ch = Self { ops };
        let err = ch.completeness_error();
        if err > T::structural_tol() * T::lit(10.0) {
            return Err(Error::Numerical(format!(
                "Kraus operators are not trace preserving: |sum K^dag K - I| = {err:e}"
            )));
        }
        Ok(ch)
    }

    pub fn operators(&self) -> &[ComplexMatrix<T>] {
        &self.ops
    }

    pub fn input_dim(&self) -> usize {
        self.ops[0].dim()
    }

    /// Largest entry of `sum K_i^dag K_i - I` in magnitude.
    pub fn completeness_error(&self) -> T {
        let d = self.ops[0].dim();
        let sum = self
            .ops
            .iter()
            .fold(ComplexMatrix::zeros(d), |acc, k| &acc + &(&k.adjoint() * k));
        (&sum - &ComplexMatrix::identity(d)).max_abs_entry()
    }
}

fn unit_param<T: Scalar>(name: &'static str, v: T) -> Result<T> {
    if v >= T::zero() && v <= T::one() {
        Ok(v)
    } else {
        Err(Error::ParameterOutOfRange {
            name,
            value: v.to_f64_lossy(),
            range: "[0, 1]",
        })
    }
}

fn real2<T: Scalar>(a: T, b: T, c: T, d: T) -> ComplexMatrix<T> {
    let z = T::zero();
    ComplexMatrix::new(
        2,
        vec![
            Complex::new(a, z),
            Complex::new(b, z),
            Complex::new(c, z),
            Complex::new(d, z),
        ],
    )
    .expect("2x2")
}

/// Standard amplitude damping: `diag(1, sqrt(1-g))` and `sqrt(g)|0><1|`.
pub fn amplitude_damping<T: Scalar>(gamma: T) -> Result<KrausChannel<T>> {
    let g = unit_param("gamma", gamma)?;
    let z = T::zero();
    KrausChannel::new(vec![
        real2(T::one(), z, z, (T::one() - g).sqrt()),
        real2(z, g.sqrt(), z, z),
    ])
}

/// Four-operator channel describing amplitude damping (`gamma`) composed
/// with the channel that prepares the damped family from a Bell pair.
pub fn composite_damping_kraus<T: Scalar>(omega: T, eta: T, gamma: T) -> Result<KrausChannel<T>> {
    let w = unit_param("omega", omega)?;
    let e = unit_param("eta", eta)?;
    let g = unit_param("gamma", gamma)?;
    let one = T::one();
    let z = T::zero();
    let prep = w + e * (one - w);
    let damped = w + g * e * (one - w);
    if prep <= z {
        return Err(Error::DegenerateDenominator("omega + eta (1 - omega)"));
    }
    if damped <= z {
        return Err(Error::DegenerateDenominator(
            "omega + gamma eta (1 - omega)",
        ));
    }
    let k1 = real2(
        (damped / prep).sqrt(),
        z,
        z,
        (w * (one - g) / damped).sqrt(),
    );
    let k2 = real2(z, z, (e * (one - g) * (one - w) / prep).sqrt(), z);
    let k3 = real2(z, g.sqrt(), z, z);
    let k4 = real2(z, z, z, (e * g * (one - g) * (one - w) / damped).sqrt());
    KrausChannel::new(vec![k1, k2, k3, k4])
}

/// Lifts a single-factor operator to the full space: `I (x) ... K ... (x) I`.
fn embed<T: Scalar>(k: &ComplexMatrix<T>, dims: &[usize], s: usize) -> ComplexMatrix<T> {
    dims.iter()
        .enumerate()
        .fold(ComplexMatrix::identity(1), |acc, (i, &d)| {
            if i == s {
                acc.kron(k)
            } else {
                acc.kron(&ComplexMatrix::identity(d))
            }
        })
}

/// `sum_i K_i rho K_i^dag` with each `K_i` acting on factor `s`.
pub fn apply_channel<T: Scalar>(
    rho: &DensityMatrix<T>,
    ch: &KrausChannel<T>,
    s: SubsystemLabel,
) -> Result<DensityMatrix<T>> {
    s.check(rho)?;
    let d = rho.dims()[s.0];
    if ch.input_dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: ch.input_dim(),
        });
    }
    let mut out = ComplexMatrix::zeros(rho.dim());
    for k in ch.operators() {
        let big = embed(k, rho.dims(), s.0);
        out = &out + &(&(&big * rho.matrix()) * &big.adjoint());
    }
    Ok(DensityMatrix::from_parts_unchecked(
        out,
        rho.dims().to_vec(),
    ))
}

fn sigma_y_sigma_y<T: Scalar>() -> ComplexMatrix<T> {
    let mut y = ComplexMatrix::zeros(4);
    let one = Complex::new(T::one(), T::zero());
    y[(0, 3)] = -one;
    y[(3, 0)] = -one;
    y[(1, 2)] = one;
    y[(2, 1)] = one;
    y
}

/// The four Wootters values `lambda_1 >= ... >= lambda_4`: square roots of
/// the spectrum of `rho (sy sy) rho* (sy sy)`.
///
/// They are obtained as singular values of `sqrt(rho) sqrt(rho~)`, read off
/// the Hermitian embedding `[[0, A], [A^dag, 0]]`, so no square root of a
/// tiny eigenvalue is ever taken.
pub fn wootters_lambdas<T: Scalar>(rho: &DensityMatrix<T>) -> Result<[T; 4]> {
    if !rho.is_qubits(2) {
        return Err(Error::InvalidArgument(format!(
            "concurrence needs a 2-qubit state, got dims {:?}",
            rho.dims()
        )));
    }
    let eig = rho.matrix().hermitian_eigen()?;
    let cutoff = T::epsilon() * T::lit(64.0) * eig.values[3].abs().max(T::one());
    let roots: Vec<T> = eig
        .values
        .iter()
        .map(|&l| if l <= cutoff { T::zero() } else { l.sqrt() })
        .collect();
    let sqrt_rho = &(&eig.vectors * &ComplexMatrix::from_diagonal(&roots)) * &eig.vectors.adjoint();
    let y = sigma_y_sigma_y::<T>();
    let sqrt_tilde = &(&y * &sqrt_rho.conj()) * &y;
    let a = &sqrt_rho * &sqrt_tilde;

    let mut h = ComplexMatrix::zeros(8);
    for i in 0..4 {
        for j in 0..4 {
            h[(i, j + 4)] = a[(i, j)];
            h[(j + 4, i)] = a[(i, j)].conj();
        }
    }
    let values = h.hermitian_eigenvalues()?;
    // spectrum is {+-sigma_i}; the upper half holds the singular values
    let mut lambdas = [T::zero(); 4];
    for i in 0..4 {
        lambdas[i] = values[7 - i].max(T::zero());
    }
    Ok(lambdas)
}

/// Concurrence from the spin-flipped spectrum, valid for any 2-qubit state.
pub fn concurrence_general<T: Scalar>(rho: &DensityMatrix<T>) -> Result<T> {
    let l = wootters_lambdas(rho)?;
    Ok((l[0] - l[1] - l[2] - l[3]).max(T::zero()))
}

/// `2 max(0, |rho14| - sqrt(rho22 rho33), |rho23| - sqrt(rho11 rho44))`.
pub fn concurrence_x_state<T: Scalar>(p: &XStateParams<T>) -> T {
    let two = T::lit(2.0);
    let a = p.rho14.norm() - (p.rho22 * p.rho33).max(T::zero()).sqrt();
    let b = p.rho23.norm() - (p.rho11 * p.rho44).max(T::zero()).sqrt();
    two * a.max(b).max(T::zero())
}

/// Concurrence. When the state has X form both routes run and must agree
/// within `1e-10`; a disagreement is reported as a numerical error.
pub fn concurrence<T: Scalar>(rho: &DensityMatrix<T>) -> Result<T> {
    let general = concurrence_general(rho)?;
    if let Some(p) = XStateParams::from_density(rho, T::structural_tol() * T::lit(1e-2)) {
        let closed = concurrence_x_state(&p);
        let tol = T::default_tol();
        if (closed - general).abs() > tol {
            return Err(Error::Numerical(format!(
                "concurrence routes disagree: spin-flip {general}, X closed form {closed}"
            )));
        }
        return Ok(closed);
    }
    Ok(general)
}

/// Damping strength on the second qubit below which the damped family
/// `knoll_state(omega, eta)` stays entangled, clamped to `[0, 1]`.
pub fn ebc_gamma_threshold<T: Scalar>(omega: T, eta: T) -> Result<T> {
    Ok(ebc_gamma_threshold_unclamped(omega, eta)?
        .max(T::zero())
        .min(T::one()))
}

/// `omega (eta + omega (1 - eta)) / (eta^2 (1 - omega)^2 + omega (1 - omega) eta)`.
pub fn ebc_gamma_threshold_unclamped<T: Scalar>(omega: T, eta: T) -> Result<T> {
    let one = T::one();
    for (name, v) in [("omega", omega), ("eta", eta)] {
        if !(v > T::zero() && v < one) {
            return Err(Error::ParameterOutOfRange {
                name,
                value: v.to_f64_lossy(),
                range: "(0, 1)",
            });
        }
    }
    let num = omega * (eta + omega * (one - eta));
    let den = eta * eta * (one - omega) * (one - omega) + omega * (one - omega) * eta;
    if den.is_zero() {
        return Err(Error::DegenerateDenominator(
            "eta^2 (1 - omega)^2 + omega (1 - omega) eta",
        ));
    }
    Ok(num / den)
}

/// The damped family after second-qubit damping of strength `gamma`.
pub fn knoll_evolved<T: Scalar>(omega: T, eta: T, gamma: T) -> Result<DensityMatrix<T>> {
    apply_channel(
        &knoll_state(omega, eta)?,
        &amplitude_damping(gamma)?,
        SubsystemLabel::B,
    )
}

/// Smallest `gamma` in `[0, 1]` at which the concurrence of
/// `knoll_evolved(omega, eta, gamma)` vanishes, found by bisection.
pub fn concurrence_vanishing_gamma<T: Scalar>(omega: T, eta: T, tol: T) -> Result<T> {
    let entangled = |g: T| -> Result<bool> {
        Ok(concurrence(&knoll_evolved(omega, eta, g)?)? > T::default_tol())
    };
    if !entangled(T::zero())? {
        return Ok(T::zero());
    }
    if entangled(T::one())? {
        return Err(Error::Numerical(
            "state still entangled at gamma = 1".into(),
        ));
    }
    let mut failure = None;
    let root = bisect_transition(
        |g| match entangled(g) {
            Ok(b) => b,
            Err(e) => {
                failure.get_or_insert(e);
                false
            }
        },
        T::zero(),
        T::one(),
        tol,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(root.unwrap_or(T::one()))
}
