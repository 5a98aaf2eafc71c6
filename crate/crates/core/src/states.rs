//! Benchmark target states: GHZ, W, linear cluster, and a relative-phase variant.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::density::DensityMatrix;
use crate::error::{Result, TomoError};
use crate::linalg::check_qubits;

/// Default relative phase for the "with phase" variant.
pub const DEFAULT_PHASE: f64 = std::f64::consts::FRAC_PI_2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Ghz,
    W,
    Cluster,
}

impl StateKind {
    pub fn name(self) -> &'static str {
        match self {
            StateKind::Ghz => "ghz",
            StateKind::W => "w",
            StateKind::Cluster => "cluster",
        }
    }

    pub fn min_qubits(self) -> usize {
        match self {
            StateKind::Ghz => 1,
            StateKind::W | StateKind::Cluster => 2,
        }
    }

    pub fn build(self, n: usize) -> Result<PureState> {
        match self {
            StateKind::Ghz => ghz(n),
            StateKind::W => w(n),
            StateKind::Cluster => cluster(n),
        }
    }
}

impl fmt::Display for StateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StateKind {
    type Err = TomoError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ghz" => Ok(StateKind::Ghz),
            "w" => Ok(StateKind::W),
            "cluster" => Ok(StateKind::Cluster),
            other => Err(TomoError::input(format!("unknown state kind {other:?}"))),
        }
    }
}

/// Normalized `n`-qubit state vector, basis index MSB = qubit 0.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    n: usize,
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        let n = crate::linalg::qubits_for_dim(amplitudes.len())
            .ok_or_else(|| TomoError::input("amplitude count is not a power of two"))?;
        check_qubits(n)?;
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(TomoError::input(format!(
                "state norm is {norm}, expected 1"
            )));
        }
        Ok(PureState { n, amplitudes })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `|⟨self|other⟩|²`.
    pub fn overlap(&self, other: &PureState) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum::<C64>()
            .norm_sqr()
    }
}

fn zeros(n: usize) -> Vec<C64> {
    vec![C64::new(0.0, 0.0); 1usize << n]
}

pub fn ghz(n: usize) -> Result<PureState> {
    check_qubits(n)?;
    let mut amps = zeros(n);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    amps[0] = C64::new(h, 0.0);
    amps[(1usize << n) - 1] = C64::new(h, 0.0);
    PureState::new(amps)
}

pub fn w(n: usize) -> Result<PureState> {
    if n < 2 {
        return Err(TomoError::input("W state needs at least 2 qubits"));
    }
    check_qubits(n)?;
    let mut amps = zeros(n);
    let a = C64::new(1.0 / (n as f64).sqrt(), 0.0);
    for q in 0..n {
        amps[1usize << q] = a;
    }
    PureState::new(amps)
}

/// Linear cluster state: `H` on every qubit of `|0…0⟩`, then `CZ` on each
/// adjacent pair.
pub fn cluster(n: usize) -> Result<PureState> {
    if n < 2 {
        return Err(TomoError::input("cluster state needs at least 2 qubits"));
    }
    check_qubits(n)?;
    let dim = 1usize << n;
    let mut amps = vec![C64::new(1.0 / (dim as f64).sqrt(), 0.0); dim];
    for q in 0..n - 1 {
        let pair = (1usize << (n - 1 - q)) | (1usize << (n - 2 - q));
        for (b, amp) in amps.iter_mut().enumerate() {
            if b & pair == pair {
                *amp = -*amp;
            }
        }
    }
    PureState::new(amps)
}

/// Multiplies the highest-index nonzero amplitude by `e^{iφ}`.
pub fn with_phase(state: &PureState, phi: f64) -> PureState {
    let mut amps = state.amplitudes.clone();
    if let Some(last) = amps.iter().rposition(|a| a.norm() > 0.0) {
        amps[last] *= C64::from_polar(1.0, phi);
    }
    PureState {
        n: state.n,
        amplitudes: amps,
    }
}

pub fn to_density(state: &PureState) -> DensityMatrix {
    DensityMatrix::from_pure(&state.amplitudes).expect("normalized pure state")
}
