use crate::density::DensityMatrix;
use crate::error::{Result, TomoError};
use crate::linalg::{frobenius_sq, trace_product};

fn same_dim(a: &DensityMatrix, b: &DensityMatrix) -> Result<()> {
    if a.n() != b.n() {
        return Err(TomoError::input(format!(
            "states have {} and {} qubits",
            a.n(),
            b.n()
        )));
    }
    Ok(())
}

/// Squared Frobenius distance `Tr[(ρE-ρT)†(ρE-ρT)]`.
pub fn mse(rho_e: &DensityMatrix, rho_t: &DensityMatrix) -> Result<f64> {
    same_dim(rho_e, rho_t)?;
    Ok(frobenius_sq(&(rho_e.matrix() - rho_t.matrix())))
}

/// Overlap `Tr(ρE ρT)`. This is not the Uhlmann fidelity; it equals
/// `⟨ψ|ρE|ψ⟩` when `ρT = |ψ⟩⟨ψ|`.
pub fn fidelity(rho_e: &DensityMatrix, rho_t: &DensityMatrix) -> Result<f64> {
    same_dim(rho_e, rho_t)?;
    Ok(trace_product(rho_e.matrix(), rho_t.matrix()).re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{ghz, to_density, PureState};
    use num_complex::Complex64 as C64;

    fn basis(b: usize) -> DensityMatrix {
        let mut v = vec![C64::new(0.0, 0.0); 2];
        v[b] = C64::new(1.0, 0.0);
        to_density(&PureState::new(v).unwrap())
    }

    #[test]
    fn mse_examples() {
        let mixed = DensityMatrix::maximally_mixed(1).unwrap();
        assert_eq!(mse(&basis(0), &basis(0)).unwrap(), 0.0);
        assert!((mse(&basis(0), &basis(1)).unwrap() - 2.0).abs() < 1e-15);
        assert!((mse(&basis(0), &mixed).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn fidelity_examples() {
        assert!((fidelity(&basis(0), &basis(0)).unwrap() - 1.0).abs() < 1e-15);
        assert!(fidelity(&basis(0), &basis(1)).unwrap().abs() < 1e-15);
        for n in 1..=5 {
            let g = to_density(&ghz(n).unwrap());
            let mixed = DensityMatrix::maximally_mixed(n).unwrap();
            let expect = 1.0 / (1usize << n) as f64;
            assert!((fidelity(&g, &mixed).unwrap() - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn dimension_mismatch() {
        let a = DensityMatrix::maximally_mixed(1).unwrap();
        let b = DensityMatrix::maximally_mixed(2).unwrap();
        assert!(mse(&a, &b).is_err());
        assert!(fidelity(&a, &b).is_err());
    }
}
