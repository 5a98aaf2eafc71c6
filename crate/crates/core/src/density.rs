use std::path::Path;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TomoError};
use crate::linalg::{
    check_qubits, hermitian_defect, hermitian_part, identity, min_eigenvalue, qubits_for_dim,
    trace, ComplexMatrix, HERMITIAN_TOL, PSD_TOL,
};

/// Tolerance on `|Tr ρ - 1|`.
pub const TRACE_TOL: f64 = 1e-8;

/// Hermitian, unit-trace `2^n × 2^n` matrix.
///
/// [`DensityMatrix::new`] also checks positivity. The stored matrix is exactly
/// Hermitian: inputs within [`HERMITIAN_TOL`] are replaced by their Hermitian part.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let rho = Self::hermitian_unit_trace(matrix)?;
        let lowest = min_eigenvalue(&rho.matrix);
        if lowest < -PSD_TOL {
            return Err(TomoError::input(format!(
                "matrix is not positive semidefinite (eigenvalue {lowest:.3e})"
            )));
        }
        Ok(rho)
    }

    /// Validates Hermiticity and unit trace only.
    pub fn hermitian_unit_trace(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(TomoError::input("density matrix must be square"));
        }
        let n = qubits_for_dim(matrix.nrows()).ok_or_else(|| {
            TomoError::input(format!(
                "dimension {} is not a power of two",
                matrix.nrows()
            ))
        })?;
        check_qubits(n)?;
        let defect = hermitian_defect(&matrix);
        if defect > HERMITIAN_TOL {
            return Err(TomoError::input(format!(
                "matrix is not Hermitian (defect {defect:.3e})"
            )));
        }
        let tr = trace(&matrix).re;
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(TomoError::input(format!("trace is {tr}, expected 1")));
        }
        Ok(DensityMatrix {
            n,
            matrix: hermitian_part(&matrix),
        })
    }

    pub fn maximally_mixed(n: usize) -> Result<Self> {
        check_qubits(n)?;
        let dim = 1usize << n;
        Ok(DensityMatrix {
            n,
            matrix: identity(dim).unscale(dim as f64),
        })
    }

    /// `|ψ⟩⟨ψ|` for a normalized amplitude vector.
    pub fn from_pure(amplitudes: &[C64]) -> Result<Self> {
        let n = qubits_for_dim(amplitudes.len())
            .ok_or_else(|| TomoError::input("amplitude count is not a power of two"))?;
        check_qubits(n)?;
        let psi = nalgebra::DVector::from_column_slice(amplitudes);
        let m = &psi * psi.adjoint();
        Self::hermitian_unit_trace(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1usize << self.n
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn purity(&self) -> f64 {
        crate::linalg::trace_product(&self.matrix, &self.matrix).re
    }

    pub fn to_json(&self) -> DensityMatrixJson {
        let dim = self.dim();
        let rows = |f: fn(&C64) -> f64| -> Vec<Vec<f64>> {
            (0..dim)
                .map(|r| (0..dim).map(|c| f(&self.matrix[(r, c)])).collect())
                .collect()
        };
        DensityMatrixJson {
            n: self.n,
            real: rows(|z| z.re),
            imag: rows(|z| z.im),
        }
    }

    /// Parses the JSON file form. Positivity is checked to within [`PSD_TOL`].
    pub fn from_json(doc: &DensityMatrixJson) -> Result<Self> {
        check_qubits(doc.n)?;
        let dim = 1usize << doc.n;
        let shape_ok = |a: &Vec<Vec<f64>>| a.len() == dim && a.iter().all(|r| r.len() == dim);
        if !shape_ok(&doc.real) || !shape_ok(&doc.imag) {
            return Err(TomoError::input(format!(
                "real/imag arrays must be {dim}x{dim}"
            )));
        }
        let m = ComplexMatrix::from_fn(dim, dim, |r, c| C64::new(doc.real[r][c], doc.imag[r][c]));
        Self::new(m)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| TomoError::io(path, e))?;
        let doc: DensityMatrixJson = serde_json::from_str(&text)
            .map_err(|e| TomoError::input(format!("{}: {e}", path.display())))?;
        Self::from_json(&doc)
    }
}

/// On-disk form: `{"n": int, "real": [[...]], "imag": [[...]]}`, row-major.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DensityMatrixJson {
    pub n: usize,
    pub real: Vec<Vec<f64>>,
    pub imag: Vec<Vec<f64>>,
}
