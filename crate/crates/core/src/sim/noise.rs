use serde::{Deserialize, Serialize};

use super::gates::Gate;
use crate::density::DensityMatrix;
use crate::error::{Result, TomoError};
use crate::linalg::{check_qubits, conjugate_local, ComplexMatrix};

/// Gate and readout error rates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    /// Depolarizing probability after each single-qubit gate.
    pub a: f64,
    /// Depolarizing probability after each two-qubit gate.
    pub b: f64,
    /// Independent flip probability of each measured bit.
    pub readout_flip: f64,
}

impl Default for NoiseModel {
    fn default() -> Self {
        NoiseModel {
            a: 0.002,
            b: 0.005,
            readout_flip: 0.01,
        }
    }
}

impl NoiseModel {
    pub fn noiseless() -> Self {
        NoiseModel {
            a: 0.0,
            b: 0.0,
            readout_flip: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [
            ("a", self.a),
            ("b", self.b),
            ("readout_flip", self.readout_flip),
        ] {
            check_probability(name, p)?;
        }
        Ok(())
    }
}

pub(crate) fn check_probability(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(TomoError::input(format!(
            "{name} = {p} is not a probability"
        )));
    }
    Ok(())
}

/// `(1-p) ρ + p (I/2^k ⊗ Tr_Q ρ)` on the qubit set `Q`.
pub(crate) fn depolarize_matrix(
    m: &ComplexMatrix,
    qubits: &[usize],
    p: f64,
    n: usize,
) -> ComplexMatrix {
    if p == 0.0 {
        return m.clone();
    }
    let mask = qubits
        .iter()
        .fold(0usize, |acc, &q| acc | (1usize << (n - 1 - q)));
    let k = qubits.len();
    let subsets: Vec<usize> = (0..1usize << n).filter(|s| s & !mask == 0).collect();
    let dim = 1usize << n;
    let weight = p / (1usize << k) as f64;
    let mut out = m.scale(1.0 - p);
    for j in 0..dim {
        for i in 0..dim {
            if i & mask != j & mask {
                continue;
            }
            let (io, jo) = (i & !mask, j & !mask);
            let reduced: num_complex::Complex64 = subsets.iter().map(|s| m[(io | s, jo | s)]).sum();
            out[(i, j)] += reduced * weight;
        }
    }
    out
}

pub fn apply_depolarizing(rho: &DensityMatrix, qubits: &[usize], p: f64) -> Result<DensityMatrix> {
    check_probability("p", p)?;
    let n = rho.n();
    if qubits.is_empty() || qubits.len() > 2 {
        return Err(TomoError::input("depolarizing acts on one or two qubits"));
    }
    if qubits.iter().any(|&q| q >= n) || (qubits.len() == 2 && qubits[0] == qubits[1]) {
        return Err(TomoError::input(format!(
            "invalid qubit set {qubits:?} for {n} qubits"
        )));
    }
    DensityMatrix::hermitian_unit_trace(depolarize_matrix(rho.matrix(), qubits, p, n))
}

/// Applies each gate's unitary followed by depolarizing noise on its qubits.
pub fn evolve(
    rho: &ComplexMatrix,
    circuit: &[Gate],
    noise: &NoiseModel,
    n: usize,
) -> Result<ComplexMatrix> {
    noise.validate()?;
    let mut m = rho.clone();
    for gate in circuit {
        gate.validate(n)?;
        let qubits = gate.qubits();
        let u = gate.matrix();
        m = conjugate_local(&m, &[(&u, &qubits)], n);
        let p = if gate.is_two_qubit() {
            noise.b
        } else {
            noise.a
        };
        m = depolarize_matrix(&m, &qubits, p, n);
    }
    Ok(m)
}

/// Exact noisy density matrix produced by `circuit` from `|0…0⟩`.
pub fn simulate_noisy_state(
    circuit: &[Gate],
    noise: &NoiseModel,
    n: usize,
) -> Result<DensityMatrix> {
    check_qubits(n)?;
    let dim = 1usize << n;
    let mut start = ComplexMatrix::zeros(dim, dim);
    start[(0, 0)] = num_complex::Complex64::new(1.0, 0.0);
    DensityMatrix::new(evolve(&start, circuit, noise, n)?)
}
