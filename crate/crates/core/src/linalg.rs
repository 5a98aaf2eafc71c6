//! Dense complex matrix helpers shared by the state, simulator and solver code.
//!
//! Qubit `q` of an `n`-qubit register maps to bit `n - 1 - q` of a basis
//! index, so qubit 0 is the most significant bit.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64 as C64;

use crate::error::{Result, TomoError};

pub type ComplexMatrix = DMatrix<C64>;

/// Largest register handled by the dense representation.
pub const MAX_QUBITS: usize = 8;

/// Tolerance used when checking that an operator is Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-8;

/// Eigenvalues above `-PSD_TOL` count as nonnegative.
pub const PSD_TOL: f64 = 1e-8;

pub(crate) fn check_qubits(n: usize) -> Result<()> {
    if n == 0 {
        return Err(TomoError::input("qubit count must be at least 1"));
    }
    if n > MAX_QUBITS {
        return Err(TomoError::Capacity { n, max: MAX_QUBITS });
    }
    Ok(())
}

/// Returns `Some(n)` when `dim == 2^n`.
pub fn qubits_for_dim(dim: usize) -> Option<usize> {
    if dim >= 2 && dim.is_power_of_two() {
        Some(dim.trailing_zeros() as usize)
    } else {
        None
    }
}

pub fn identity(dim: usize) -> ComplexMatrix {
    ComplexMatrix::identity(dim, dim)
}

pub fn trace(m: &ComplexMatrix) -> C64 {
    m.diagonal().iter().sum()
}

/// Largest entry-wise deviation from Hermiticity, `max |m - m†|`.
pub fn hermitian_defect(m: &ComplexMatrix) -> f64 {
    let dim = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..dim {
        for j in i..dim {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// `Tr(a b)` without forming the product.
pub fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> C64 {
    let dim = a.nrows();
    let mut acc = C64::new(0.0, 0.0);
    for j in 0..dim {
        for k in 0..dim {
            acc += a[(j, k)] * b[(k, j)];
        }
    }
    acc
}

pub fn frobenius_sq(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum()
}

/// Hermitian eigendecomposition, eigenvalues in ascending order.
pub fn hermitian_eigen(m: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = ComplexMatrix::from_fn(m.nrows(), order.len(), |r, c| {
        eig.eigenvectors[(r, order[c])]
    });
    (values, vectors)
}

pub fn min_eigenvalue(m: &ComplexMatrix) -> f64 {
    hermitian_eigen(&hermitian_part(m)).0[0]
}

/// Frobenius-nearest positive semidefinite matrix: eigenvalues below zero are
/// clamped and the spectrum reassembled.
pub fn psd_project(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !h.is_square() {
        return Err(TomoError::input("psd_project needs a square matrix"));
    }
    let defect = hermitian_defect(h);
    if defect > HERMITIAN_TOL {
        return Err(TomoError::input(format!(
            "matrix is not Hermitian (defect {defect:.3e})"
        )));
    }
    Ok(psd_project_hermitian(&hermitian_part(h)))
}

/// Same as [`psd_project`] for an input already known to be Hermitian.
pub(crate) fn psd_project_hermitian(h: &ComplexMatrix) -> ComplexMatrix {
    let (values, vectors) = hermitian_eigen(h);
    let dim = h.nrows();
    let mut out = ComplexMatrix::zeros(dim, dim);
    for (k, &lambda) in values.iter().enumerate() {
        if lambda <= 0.0 {
            continue;
        }
        let v = vectors.column(k);
        for c in 0..dim {
            let vc = v[c].conj() * lambda;
            if vc == C64::new(0.0, 0.0) {
                continue;
            }
            for r in 0..dim {
                out[(r, c)] += v[r] * vc;
            }
        }
    }
    hermitian_part(&out)
}

fn subspace_offsets(qubits: &[usize], n: usize) -> (usize, Vec<usize>) {
    let k = qubits.len();
    let bits: Vec<usize> = qubits.iter().map(|&q| 1usize << (n - 1 - q)).collect();
    let mask = bits.iter().fold(0, |acc, b| acc | b);
    let offsets = (0..1usize << k)
        .map(|s| {
            bits.iter()
                .enumerate()
                .filter(|(i, _)| (s >> (k - 1 - i)) & 1 == 1)
                .fold(0, |acc, (_, b)| acc | b)
        })
        .collect();
    (mask, offsets)
}

/// Left-multiplies `m` in place by `gate` acting on `qubits` of an `n`-qubit
/// register. `qubits[0]` is the most significant index of `gate`.
pub fn apply_local_left(m: &mut ComplexMatrix, gate: &ComplexMatrix, qubits: &[usize], n: usize) {
    let (mask, offsets) = subspace_offsets(qubits, n);
    let sub = offsets.len();
    debug_assert_eq!(gate.nrows(), sub);
    let dim = 1usize << n;
    let mut buf = vec![C64::new(0.0, 0.0); sub];
    for col in 0..m.ncols() {
        for base in (0..dim).filter(|b| b & mask == 0) {
            for (s, off) in offsets.iter().enumerate() {
                buf[s] = m[(base | off, col)];
            }
            for (r, off) in offsets.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for (s, value) in buf.iter().enumerate() {
                    acc += gate[(r, s)] * value;
                }
                m[(base | off, col)] = acc;
            }
        }
    }
}

/// Computes `U m U†` where `U` is the product of the given local operators,
/// applied in slice order.
pub fn conjugate_local(
    m: &ComplexMatrix,
    ops: &[(&ComplexMatrix, &[usize])],
    n: usize,
) -> ComplexMatrix {
    let mut out = m.clone();
    for (gate, qubits) in ops {
        apply_local_left(&mut out, gate, qubits, n);
    }
    let mut out = out.adjoint();
    for (gate, qubits) in ops {
        apply_local_left(&mut out, gate, qubits, n);
    }
    out.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn clamps_negative_eigenvalue() {
        let h = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            c(1.0, 0.0),
            c(-0.5, 0.0),
        ]));
        let p = psd_project(&h).unwrap();
        assert!((p[(0, 0)] - c(1.0, 0.0)).norm() < 1e-12);
        assert!(p[(1, 1)].norm() < 1e-12);
    }

    #[test]
    fn pauli_x_projects_onto_plus_state() {
        let h = ComplexMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        );
        let p = psd_project(&h).unwrap();
        for z in p.iter() {
            assert!((z - c(0.5, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let h = ComplexMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        );
        assert!(matches!(psd_project(&h), Err(TomoError::Input(_))));
    }

    #[test]
    fn eigen_residuals_are_small() {
        let m = ComplexMatrix::from_fn(8, 8, |r, col| {
            c((r * 3 + col) as f64 * 0.1, (r as f64 - col as f64) * 0.2)
        });
        let h = hermitian_part(&m);
        let (values, vectors) = hermitian_eigen(&h);
        for (k, lambda) in values.iter().enumerate() {
            let v = vectors.column(k).into_owned();
            let residual = (&h * &v - v.scale(*lambda)).norm();
            assert!(residual <= 1e-9, "residual {residual}");
        }
    }

    #[test]
    fn local_application_matches_kronecker() {
        let hadamard = ComplexMatrix::from_row_slice(
            2,
            2,
            &[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)],
        )
        .scale(std::f64::consts::FRAC_1_SQRT_2);
        let m = ComplexMatrix::from_fn(8, 8, |r, col| c(r as f64 + 0.5, col as f64 * 0.25));
        let i2 = identity(2);
        let full = i2.kronecker(&hadamard).kronecker(&i2);
        let mut local = m.clone();
        apply_local_left(&mut local, &hadamard, &[1], 3);
        assert!((local - &full * &m).norm() < 1e-12);

        let conj = conjugate_local(&m, &[(&hadamard, &[1])], 3);
        assert!((conj - &full * &m * full.adjoint()).norm() < 1e-12);
    }

    #[test]
    fn qubit_dimension_lookup() {
        assert_eq!(qubits_for_dim(2), Some(1));
        assert_eq!(qubits_for_dim(256), Some(8));
        assert_eq!(qubits_for_dim(6), None);
        assert_eq!(qubits_for_dim(1), None);
    }
}
