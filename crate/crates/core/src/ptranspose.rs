//! Single-subsystem partial transpose and negativity.

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scalar::Scalar;
use crate::states::{digits_of, index_of, DensityMatrix};

/// 0-based index of the tensor factor being transposed (A = 0, B = 1, ...).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsystemLabel(pub usize);

impl SubsystemLabel {
    pub const A: Self = Self(0);
    pub const B: Self = Self(1);
    pub const C: Self = Self(2);

    pub fn letter(self) -> char {
        (b'A' + self.0 as u8) as char
    }

    pub fn check<T>(self, rho: &DensityMatrix<T>) -> Result<()>
    where
        T: Scalar,
    {
        if self.0 >= rho.num_factors() {
            return Err(Error::InvalidSubsystem {
                index: self.0,
                factors: rho.num_factors(),
            });
        }
        Ok(())
    }
}

/// Partial transpose of `m` with respect to factor `s` of the layout `dims`.
/// Entries only move, so the result is exact.
pub fn partial_transpose_matrix<T: Scalar>(
    m: &ComplexMatrix<T>,
    dims: &[usize],
    s: SubsystemLabel,
) -> Result<ComplexMatrix<T>> {
    if s.0 >= dims.len() {
        return Err(Error::InvalidSubsystem {
            index: s.0,
            factors: dims.len(),
        });
    }
    let dim = m.dim();
    if dims.iter().product::<usize>() != dim {
        return Err(Error::BadDims {
            dims: dims.to_vec(),
            dim,
        });
    }
    let mut out = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        let di = digits_of(i, dims);
        for j in 0..dim {
            let dj = digits_of(j, dims);
            let mut si = di.clone();
            let mut sj = dj.clone();
            si[s.0] = dj[s.0];
            sj[s.0] = di[s.0];
            out[(i, j)] = m[(index_of(&si, dims), index_of(&sj, dims))];
        }
    }
    Ok(out)
}

/// `rho^{T_s}`. Returned as a plain matrix because it need not be PSD.
pub fn partial_transpose<T: Scalar>(
    rho: &DensityMatrix<T>,
    s: SubsystemLabel,
) -> Result<ComplexMatrix<T>> {
    s.check(rho)?;
    partial_transpose_matrix(rho.matrix(), rho.dims(), s)
}

/// Sum of the magnitudes of the negative eigenvalues of `rho^{T_s}`.
/// Eigenvalues within the PSD tolerance of zero are not counted.
pub fn negativity<T: Scalar>(rho: &DensityMatrix<T>, s: SubsystemLabel) -> Result<T> {
    let values = partial_transpose(rho, s)?.hermitian_eigenvalues()?;
    Ok(negativity_from_spectrum(&values, T::default_tol()))
}

pub fn negativity_from_spectrum<T: Scalar>(values: &[T], tol: T) -> T {
    let scale = values.iter().fold(T::one(), |m, l| m.max(l.abs()));
    values
        .iter()
        .filter(|&&l| l < -tol * scale)
        .fold(T::zero(), |acc, &l| acc - l)
}
