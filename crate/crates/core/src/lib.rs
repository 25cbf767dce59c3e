//! Entanglement detection for two- and three-qubit density matrices through
//! partial-transpose moments, Hankel-matrix criteria and principal minors.
//!
//! Every numerical routine is generic over a [`Scalar`] (`f32` or `f64`);
//! the `*64` aliases below are what most callers want.

pub mod channels;
pub mod cli;
pub mod error;
pub mod linalg;
pub mod minors;
pub mod moments;
pub mod ptranspose;
pub mod roots;
pub mod scalar;
pub mod states;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use channels::KrausChannel;
pub use linalg::ComplexMatrix;
pub use minors::{IndexSet, MinorReport};
pub use moments::{Criterion, CriterionVerdict, HankelMatrix, MomentVector};
pub use ptranspose::SubsystemLabel;
pub use states::{DensityMatrix, NoiseFamilyPoint, XStateParams};

pub type ComplexMatrix64 = ComplexMatrix<f64>;
pub type DensityMatrix64 = DensityMatrix<f64>;
pub type XStateParams64 = XStateParams<f64>;
pub type MomentVector64 = MomentVector<f64>;
pub type CriterionVerdict64 = CriterionVerdict<f64>;
pub type KrausChannel64 = KrausChannel<f64>;

pub type ComplexMatrix32 = ComplexMatrix<f32>;
pub type DensityMatrix32 = DensityMatrix<f32>;
pub type XStateParams32 = XStateParams<f32>;
pub type MomentVector32 = MomentVector<f32>;
