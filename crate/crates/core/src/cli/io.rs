//! JSON state files: `{"dims": [2, 2], "matrix": [[re, im], ...]}`, with the
//! `d*d` entries in row-major order.

use std::io::Write;
use std::path::Path;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::{CliError, CliResult};
use crate::linalg::ComplexMatrix;
use crate::states::DensityMatrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: Vec<usize>,
    pub matrix: Vec<[f64; 2]>,
}

impl StateFile {
    pub fn from_density(rho: &DensityMatrix<f64>) -> Self {
        Self {
            dims: rho.dims().to_vec(),
            matrix: rho
                .matrix()
                .as_slice()
                .iter()
                .map(|z| [z.re, z.im])
                .collect(),
        }
    }

    /// Validates shape and the density-matrix conditions.
    pub fn into_density(self) -> CliResult<DensityMatrix<f64>> {
        if self.dims.is_empty() || self.dims.contains(&0) {
            return Err(CliError::Validation(format!(
                "dims {:?}: every factor must be >= 1",
                self.dims
            )));
        }
        let dim = self
            .dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| CliError::Validation("dims overflow".into()))?;
        let expected = dim
            .checked_mul(dim)
            .ok_or_else(|| CliError::Validation("dims overflow".into()))?;
        if self.matrix.len() != expected {
            return Err(CliError::Validation(format!(
                "matrix has {} entries, expected {expected} for dims {:?}",
                self.matrix.len(),
                self.dims
            )));
        }
        let data = self
            .matrix
            .iter()
            .map(|&[re, im]| Complex::new(re, im))
            .collect();
        let m = ComplexMatrix::new(dim, data)?;
        DensityMatrix::new(m, self.dims)
            .map_err(|e| CliError::Validation(format!("invalid state: {e}")))
    }
}

pub fn parse_state(text: &str) -> CliResult<DensityMatrix<f64>> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| {
        CliError::Validation(format!(
            "malformed state at line {}, column {}: {e}",
            e.line(),
            e.column()
        ))
    })?;
    file.into_density()
}

pub fn read_state_file(path: &Path) -> CliResult<DensityMatrix<f64>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    parse_state(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

/// Writes the state with shortest round-trip float formatting, so reading
/// it back reproduces every entry bit for bit.
pub fn write_state(w: &mut dyn Write, rho: &DensityMatrix<f64>) -> CliResult<()> {
    let io_err = |e: std::io::Error| CliError::Validation(format!("cannot write state: {e}"));
    serde_json::to_writer(&mut *w, &StateFile::from_density(rho))
        .map_err(|e| CliError::Validation(format!("cannot write state: {e}")))?;
    w.write_all(b"\n").map_err(io_err)
}

pub fn state_to_string(rho: &DensityMatrix<f64>) -> String {
    let mut buf = Vec::new();
    write_state(&mut buf, rho).expect("writing to memory");
    String::from_utf8(buf).expect("JSON is UTF-8")
}
