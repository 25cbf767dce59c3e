//! Partial-transpose moments `p_k = Tr[(rho^{T_s})^k]`, their Hankel
//! matrices, and the moment-based separability criteria.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::minors::x_state_key_minors;
use crate::ptranspose::{partial_transpose, SubsystemLabel};
use crate::scalar::Scalar;
use crate::states::{DensityMatrix, XStateParams};

/// Where a moment vector came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MomentSource {
    Subsystem(SubsystemLabel),
    /// Geometric mean over the three single-qubit transposes.
    Tripartite,
    /// Two-qubit X-state closed forms (transpose on A).
    ClosedForm,
}

/// `p_1, ..., p_kmax`; `values[0]` is `p_1`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentVector<T> {
    values: Vec<T>,
    source: MomentSource,
}

impl<T: Scalar> MomentVector<T> {
    pub fn new(values: Vec<T>, source: MomentSource) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("moment vector needs p_1".into()));
        }
        Ok(Self { values, source })
    }

    /// `p_k` for 1-based `k`.
    pub fn p(&self, k: usize) -> Option<T> {
        k.checked_sub(1).and_then(|i| self.values.get(i)).copied()
    }

    pub fn kmax(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn source(&self) -> MomentSource {
        self.source
    }

    fn require(&self, needed: usize) -> Result<()> {
        if self.kmax() < needed {
            return Err(Error::InsufficientMoments {
                needed,
                have: self.kmax(),
            });
        }
        Ok(())
    }
}

/// Default number of moments: six for two qubits, five for three, `d`
/// otherwise.
pub fn default_kmax<T: Scalar>(rho: &DensityMatrix<T>) -> usize {
    if rho.is_qubits(2) {
        6
    } else if rho.is_qubits(3) {
        5
    } else {
        rho.dim()
    }
}

pub fn pt_moments<T: Scalar>(
    rho: &DensityMatrix<T>,
    s: SubsystemLabel,
    kmax: usize,
) -> Result<MomentVector<T>> {
    if kmax == 0 {
        return Err(Error::InvalidArgument("kmax must be >= 1".into()));
    }
    let pt = partial_transpose(rho, s)?;
    MomentVector::new(pt.power_traces(kmax)?, MomentSource::Subsystem(s))
}

/// `p_k = (p_k^A p_k^B p_k^C)^{1/3}` with the real (signed) cube root.
pub fn tripartite_moments<T: Scalar>(
    rho: &DensityMatrix<T>,
    kmax: usize,
) -> Result<MomentVector<T>> {
    if rho.num_factors() != 3 {
        return Err(Error::InvalidArgument(format!(
            "tripartite moments need 3 factors, got dims {:?}",
            rho.dims()
        )));
    }
    let parts = (0..3)
        .map(|s| pt_moments(rho, SubsystemLabel(s), kmax))
        .collect::<Result<Vec<_>>>()?;
    let values = (0..kmax)
        .map(|i| (parts[0].values[i] * parts[1].values[i] * parts[2].values[i]).cbrt())
        .collect();
    MomentVector::new(values, MomentSource::Tripartite)
}

/// First six moments of a two-qubit X-state from its two key minors and
/// `g = rho11 + rho44`, `h = rho22 + rho33`.
///
/// Each is the power sum of the two 2x2 blocks of `rho^{T_A}`, whose traces
/// are `g`, `h` and determinants the minors `[14]`, `[23]`.
pub fn x_state_moments_closed_form<T: Scalar>(p: &XStateParams<T>) -> MomentVector<T> {
    let k = x_state_key_minors(p);
    let (a, b) = (k.minor14, k.minor23);
    let (g, h) = (p.g(), p.h());
    let one = T::one();
    let n = |x: f64| T::lit(x);
    let gh = g * h;

    let p2 = one - n(2.0) * (a + b) - n(2.0) * gh;
    let p3 = one - n(3.0) * (g * a + h * b) - n(3.0) * gh;
    let p4 = one - n(4.0) * (g * g * a + h * h * b) - n(4.0) * gh
        + n(2.0) * (a * a + b * b)
        + n(2.0) * gh * gh;
    let p5 = one - n(5.0) * (g.powi(3) * a + h.powi(3) * b) - n(5.0) * gh
        + n(5.0) * (g * a * a + h * b * b)
        + n(5.0) * gh * gh;
    let p6 = one - n(6.0) * (g.powi(4) * a + h.powi(4) * b) - n(6.0) * gh
        + n(9.0) * (g * g * a * a + h * h * b * b)
        + n(9.0) * gh * gh
        - n(2.0) * gh.powi(3)
        - n(2.0) * (a.powi(3) + b.powi(3));
    MomentVector {
        values: vec![one, p2, p3, p4, p5, p6],
        source: MomentSource::ClosedForm,
    }
}

/// Hankel matrix `B_k` with entries `p_{i+j+1}`, `i, j = 0..=k`.
#[derive(Clone, Debug, PartialEq)]
pub struct HankelMatrix<T> {
    order: usize,
    entries: Vec<T>,
}

impl<T: Scalar> HankelMatrix<T> {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn size(&self) -> usize {
        self.order + 1
    }

    /// 0-based `(i, j)`.
    pub fn entry(&self, i: usize, j: usize) -> T {
        self.entries[i * self.size() + j]
    }

    pub fn to_matrix(&self) -> ComplexMatrix<T> {
        let rows: Vec<Vec<num_complex::Complex<T>>> = (0..self.size())
            .map(|i| {
                (0..self.size())
                    .map(|j| num_complex::Complex::new(self.entry(i, j), T::zero()))
                    .collect()
            })
            .collect();
        ComplexMatrix::from_rows(&rows).expect("square by construction")
    }

    pub fn eigenvalues(&self) -> Result<Vec<T>> {
        self.to_matrix().hermitian_eigenvalues()
    }

    pub fn determinant(&self) -> T {
        self.to_matrix().determinant().re
    }
}

pub fn hankel<T: Scalar>(mv: &MomentVector<T>, k: usize) -> Result<HankelMatrix<T>> {
    mv.require(2 * k + 1)?;
    let size = k + 1;
    let mut entries = Vec::with_capacity(size * size);
    for i in 0..size {
        for j in 0..size {
            entries.push(mv.values[i + j]);
        }
    }
    Ok(HankelMatrix { order: k, entries })
}

/// Hankel order used by the full criterion for a `d`-dimensional state:
/// `floor((d - 1) / 2)`.
pub fn full_hankel_order(d: usize) -> usize {
    d.saturating_sub(1) / 2
}

/// Moment criteria. Every one is necessary for separability, so a
/// violation certifies entanglement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Criterion {
    /// `p_3 >= p_2^2`.
    P3Ppt,
    /// `B_{(n-1)/2} >= 0` for odd `n >= 3`.
    PnPpt(usize),
    /// Optimal third-order bound `p_3 >= a x^3 + (1 - a x)^3`.
    P3Oppt,
}

impl Criterion {
    pub fn name(&self) -> String {
        match self {
            Self::P3Ppt => "p3-PPT".into(),
            Self::PnPpt(n) => format!("p{n}-PPT (B_{})", (n - 1) / 2),
            Self::P3Oppt => "p3-OPPT".into(),
        }
    }

    /// Short token used on the command line and in CSV headers.
    pub fn token(&self) -> String {
        match self {
            Self::P3Ppt => "p3ppt".into(),
            Self::PnPpt(n) => format!("p{n}ppt"),
            Self::P3Oppt => "p3oppt".into(),
        }
    }

    /// Moments the criterion reads.
    pub fn moments_needed(&self) -> usize {
        match self {
            Self::P3Ppt | Self::P3Oppt => 3,
            Self::PnPpt(n) => *n,
        }
    }

    pub fn evaluate<T: Scalar>(&self, mv: &MomentVector<T>, tol: T) -> Result<CriterionVerdict<T>> {
        match *self {
            Self::P3Ppt => p3_ppt_test(mv, tol),
            Self::PnPpt(n) => pn_ppt_test(mv, n, tol),
            Self::P3Oppt => p3_oppt_test(mv, tol),
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Criterion {
    type Err = Error;

    /// Accepts `p3ppt`, `p3oppt`, and `p<n>ppt` for odd `n >= 5`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase().replace(['-', '_'], "");
        if t == "p3oppt" {
            return Ok(Self::P3Oppt);
        }
        if t == "p3ppt" {
            return Ok(Self::P3Ppt);
        }
        if let Some(n) = t.strip_prefix('p').and_then(|r| r.strip_suffix("ppt")) {
            if let Ok(n) = n.parse::<usize>() {
                if n >= 5 && n % 2 == 1 {
                    return Ok(Self::PnPpt(n));
                }
            }
        }
        Err(Error::InvalidArgument(format!("unknown criterion {s:?}")))
    }
}

/// Outcome of one criterion. `margin < 0` means the bound is violated;
/// `violated` is `margin < -tolerance`.
#[derive(Clone, Debug, PartialEq)]
pub struct CriterionVerdict<T> {
    pub criterion: Criterion,
    pub violated: bool,
    pub margin: T,
    pub tolerance: T,
}

impl<T: Scalar> CriterionVerdict<T> {
    fn new(criterion: Criterion, margin: T, tolerance: T) -> Self {
        Self {
            criterion,
            violated: margin < -tolerance,
            margin,
            tolerance,
        }
    }
}

pub fn p3_ppt_test<T: Scalar>(mv: &MomentVector<T>, tol: T) -> Result<CriterionVerdict<T>> {
    mv.require(3)?;
    let p2 = mv.values[1];
    let p3 = mv.values[2];
    // p_1 kept explicit: det B_1 = p_1 p_3 - p_2^2
    Ok(CriterionVerdict::new(
        Criterion::P3Ppt,
        mv.values[0] * p3 - p2 * p2,
        tol,
    ))
}

/// Margin is the smallest eigenvalue of `B_{(n-1)/2}`; the tolerance is
/// scaled by the largest eigenvalue magnitude.
pub fn pn_ppt_test<T: Scalar>(
    mv: &MomentVector<T>,
    n: usize,
    tol: T,
) -> Result<CriterionVerdict<T>> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "pn-PPT order must be odd and >= 3, got {n}"
        )));
    }
    let b = hankel(mv, (n - 1) / 2)?;
    let values = b.eigenvalues()?;
    let scale = values.iter().fold(T::one(), |m, v| m.max(v.abs()));
    Ok(CriterionVerdict::new(
        Criterion::PnPpt(n),
        values[0],
        tol * scale,
    ))
}

/// Snaps `p_2` into `(0, 1]` and returns `(a, x)` of the optimal bound.
fn oppt_parameters<T: Scalar>(p2: T) -> Result<(T, T)> {
    let snap = T::structural_tol();
    let one = T::one();
    let p2 = if p2 > one && p2 - one <= snap {
        one
    } else {
        p2
    };
    if !(p2 > T::zero() && p2 <= one) {
        return Err(Error::InvalidArgument(format!("p_2 = {p2} outside (0, 1]")));
    }
    let inv = one / p2;
    let nearest = inv.round();
    let a = if (inv - nearest).abs() <= snap {
        nearest
    } else {
        inv.floor()
    };
    let disc = (a * (p2 * (a + one) - one)).max(T::zero());
    let x = (a + disc.sqrt()) / (a * (a + one));
    Ok((a, x))
}

/// Lower bound on `p_3` over PPT spectra with the given `p_2`:
/// `a x^3 + (1 - a x)^3`, `a = floor(1/p_2)`,
/// `x = (a + sqrt(a (p_2 (a+1) - 1))) / (a (a+1))`.
pub fn oppt_threshold<T: Scalar>(p2: T) -> Result<T> {
    let (a, x) = oppt_parameters(p2)?;
    let rest = T::one() - a * x;
    Ok(a * x.powi(3) + rest.powi(3))
}

pub fn p3_oppt_test<T: Scalar>(mv: &MomentVector<T>, tol: T) -> Result<CriterionVerdict<T>> {
    mv.require(3)?;
    let threshold = oppt_threshold(mv.values[1])?;
    Ok(CriterionVerdict::new(
        Criterion::P3Oppt,
        mv.values[2] - threshold,
        tol,
    ))
}

/// `p3ppt`, `p3oppt`, and every higher `p<n>ppt` the vector has moments for.
pub fn default_criteria(kmax: usize) -> Vec<Criterion> {
    let mut out = vec![Criterion::P3Ppt, Criterion::P3Oppt];
    let mut n = 5;
    while n <= kmax {
        out.push(Criterion::PnPpt(n));
        n += 2;
    }
    out
}
