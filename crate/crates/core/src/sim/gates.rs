use num_complex::Complex64 as C64;

use crate::error::{Result, TomoError};
use crate::linalg::{check_qubits, ComplexMatrix};
use crate::states::StateKind;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    H(usize),
    S(usize),
    Sdg(usize),
    /// Rotation about Y by the given angle in radians.
    Ry(usize, f64),
    /// `diag(1, e^{iφ})`.
    Phase(usize, f64),
    Cz(usize, usize),
    Cnot {
        control: usize,
        target: usize,
    },
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::S(q) | Gate::Sdg(q) | Gate::Ry(q, _) | Gate::Phase(q, _) => vec![q],
            Gate::Cz(a, b) => vec![a, b],
            Gate::Cnot { control, target } => vec![control, target],
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cz(..) | Gate::Cnot { .. })
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let qs = self.qubits();
        if let Some(&q) = qs.iter().find(|&&q| q >= n) {
            return Err(TomoError::input(format!(
                "{self:?} targets qubit {q} of a {n}-qubit register"
            )));
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(TomoError::input(format!("{self:?} repeats a target qubit")));
        }
        Ok(())
    }

    /// Unitary on the gate's own qubits, first listed qubit most significant.
    pub fn matrix(&self) -> ComplexMatrix {
        let o = C64::new(0.0, 0.0);
        let l = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        match *self {
            Gate::H(_) => ComplexMatrix::from_row_slice(2, 2, &[l, l, l, -l])
                .scale(std::f64::consts::FRAC_1_SQRT_2),
            Gate::S(_) => ComplexMatrix::from_row_slice(2, 2, &[l, o, o, i]),
            Gate::Sdg(_) => ComplexMatrix::from_row_slice(2, 2, &[l, o, o, -i]),
            Gate::Ry(_, theta) => {
                let (s, c) = (theta / 2.0).sin_cos();
                ComplexMatrix::from_row_slice(
                    2,
                    2,
                    &[
                        C64::new(c, 0.0),
                        C64::new(-s, 0.0),
                        C64::new(s, 0.0),
                        C64::new(c, 0.0),
                    ],
                )
            }
            Gate::Phase(_, phi) => {
                ComplexMatrix::from_row_slice(2, 2, &[l, o, o, C64::from_polar(1.0, phi)])
            }
            Gate::Cz(..) => {
                let mut m = ComplexMatrix::identity(4, 4);
                m[(3, 3)] = -l;
                m
            }
            Gate::Cnot { .. } => ComplexMatrix::from_row_slice(
                4,
                4,
                &[l, o, o, o, o, l, o, o, o, o, o, l, o, o, l, o],
            ),
        }
    }
}

/// Controlled-RY(θ) from RY and CNOT.
fn controlled_ry(control: usize, target: usize, theta: f64) -> [Gate; 4] {
    [
        Gate::Ry(target, theta / 2.0),
        Gate::Cnot { control, target },
        Gate::Ry(target, -theta / 2.0),
        Gate::Cnot { control, target },
    ]
}

/// Preparation circuit acting on `|0…0⟩`.
///
/// * GHZ: `H(0)` then a CNOT ladder.
/// * Cluster: `H` on every qubit then `CZ` on adjacent pairs.
/// * W: excite qubit 0, then pass the excitation down the chain with
///   controlled-RY splits and CNOTs.
pub fn prepare_circuit(kind: StateKind, n: usize) -> Result<Vec<Gate>> {
    check_qubits(n)?;
    if n < kind.min_qubits() {
        return Err(TomoError::input(format!(
            "{kind} state needs at least {} qubits",
            kind.min_qubits()
        )));
    }
    let mut gates = Vec::new();
    match kind {
        StateKind::Ghz => {
            gates.push(Gate::H(0));
            gates.extend((0..n - 1).map(|q| Gate::Cnot {
                control: q,
                target: q + 1,
            }));
        }
        StateKind::Cluster => {
            gates.extend((0..n).map(Gate::H));
            gates.extend((0..n - 1).map(|q| Gate::Cz(q, q + 1)));
        }
        StateKind::W => {
            gates.push(Gate::Ry(0, std::f64::consts::PI));
            for k in 0..n - 1 {
                let theta = 2.0 * (1.0 / (n - k) as f64).sqrt().acos();
                gates.extend(controlled_ry(k, k + 1, theta));
                gates.push(Gate::Cnot {
                    control: k + 1,
                    target: k,
                });
            }
        }
    }
    Ok(gates)
}

/// Preparation circuit followed by a phase gate that multiplies the
/// highest-index amplitude by `e^{iφ}`. Defined for GHZ (last qubit) and W
/// (first qubit), where that amplitude is isolated by a single qubit.
pub fn prepare_circuit_with_phase(kind: StateKind, n: usize, phi: f64) -> Result<Vec<Gate>> {
    let mut gates = prepare_circuit(kind, n)?;
    match kind {
        StateKind::Ghz => gates.push(Gate::Phase(n - 1, phi)),
        StateKind::W => gates.push(Gate::Phase(0, phi)),
        StateKind::Cluster => {
            return Err(TomoError::input(
                "phase variant is only defined for ghz and w circuits",
            ));
        }
    }
    Ok(gates)
}
