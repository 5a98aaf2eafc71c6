//! Pauli letters and strings, the Stokes (Pauli-basis) expansion of a density
//! matrix, and product-eigenbasis projector sets for measurement settings.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::density::DensityMatrix;
use crate::error::{Result, TomoError};
use crate::linalg::{check_qubits, conjugate_local, ComplexMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn from_char(c: char) -> Result<Self> {
        match c {
            'I' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            other => Err(TomoError::input(format!("invalid Pauli letter {other:?}"))),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// The 2×2 matrix of a single Pauli letter.
pub fn pauli_matrix(letter: Pauli) -> ComplexMatrix {
    let o = C64::new(0.0, 0.0);
    let l = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let entries = match letter {
        Pauli::I => [l, o, o, l],
        Pauli::X => [o, l, l, o],
        Pauli::Y => [o, -i, i, o],
        Pauli::Z => [l, o, o, -l],
    };
    ComplexMatrix::from_row_slice(2, 2, &entries)
}

/// A word over {I, X, Y, Z}; the leftmost letter acts on qubit 0.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliString(Vec<Pauli>);

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> Self {
        PauliString(letters)
    }

    pub fn identity(n: usize) -> Self {
        PauliString(vec![Pauli::I; n])
    }

    pub fn repeat(letter: Pauli, n: usize) -> Self {
        PauliString(vec![letter; n])
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&p| p == Pauli::I)
    }

    /// A measurement setting has no identity letters.
    pub fn is_setting(&self) -> bool {
        !self.0.is_empty() && self.0.iter().all(|&p| p != Pauli::I)
    }

    pub fn count(&self, letter: Pauli) -> usize {
        self.0.iter().filter(|&&p| p == letter).count()
    }

    fn bit(&self, q: usize) -> usize {
        1usize << (self.0.len() - 1 - q)
    }

    /// Basis-index bits flipped by the operator (X and Y letters).
    pub fn flip_mask(&self) -> usize {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, p)| matches!(p, Pauli::X | Pauli::Y))
            .fold(0, |acc, (q, _)| acc | self.bit(q))
    }

    /// Basis-index bits that pick up a sign (Z and Y letters).
    pub fn phase_mask(&self) -> usize {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, p)| matches!(p, Pauli::Y | Pauli::Z))
            .fold(0, |acc, (q, _)| acc | self.bit(q))
    }

    /// Bits of every non-identity letter.
    pub fn support_mask(&self) -> usize {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, p)| **p != Pauli::I)
            .fold(0, |acc, (q, _)| acc | self.bit(q))
    }

    /// All `4^n` strings in lexicographic I < X < Y < Z order.
    pub fn all(n: usize) -> Vec<PauliString> {
        words(n, &Pauli::ALL)
    }
}

/// Every word of length `n` over `alphabet`, in lexicographic order of the alphabet.
pub(crate) fn words(n: usize, alphabet: &[Pauli]) -> Vec<PauliString> {
    let mut out = vec![Vec::with_capacity(n)];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                alphabet.iter().map(move |&p| {
                    let mut w = prefix.clone();
                    w.push(p);
                    w
                })
            })
            .collect();
    }
    out.into_iter().map(PauliString).collect()
}

impl FromStr for PauliString {
    type Err = TomoError;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .trim()
            .chars()
            .map(Pauli::from_char)
            .collect::<Result<Vec<_>>>()?;
        if letters.is_empty() {
            return Err(TomoError::input("empty Pauli string"));
        }
        Ok(PauliString(letters))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.0 {
            write!(f, "{}", p.as_char())?;
        }
        Ok(())
    }
}

impl Serialize for PauliString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Dense `2^n × 2^n` operator; the leftmost letter is the most significant
/// tensor factor.
pub fn pauli_operator(s: &PauliString) -> Result<ComplexMatrix> {
    check_qubits(s.len())?;
    let mut letters = s.letters().iter();
    let first = pauli_matrix(*letters.next().expect("nonempty"));
    Ok(letters.fold(first, |acc, &p| acc.kronecker(&pauli_matrix(p))))
}

/// Nonzero entry of row `row` of the Pauli operator: its column and value.
///
/// Column is `row ^ flip_mask`; value is `i^{#Y} (-1)^{popcount(col & phase_mask)}`.
pub(crate) fn pauli_row_entry(s: &PauliString, row: usize) -> (usize, C64) {
    let col = row ^ s.flip_mask();
    let sign = if (col & s.phase_mask()).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    };
    let phase = match s.count(Pauli::Y) % 4 {
        0 => C64::new(sign, 0.0),
        1 => C64::new(0.0, sign),
        2 => C64::new(-sign, 0.0),
        _ => C64::new(0.0, -sign),
    };
    (col, phase)
}

/// `Tr(σ_s ρ)` for a Hermitian matrix, computed in `O(2^n)`.
pub(crate) fn pauli_expectation(m: &ComplexMatrix, s: &PauliString) -> C64 {
    (0..m.nrows())
        .map(|row| {
            let (col, value) = pauli_row_entry(s, row);
            value * m[(col, row)]
        })
        .sum()
}

/// Stokes parameter `c_s = Tr(σ_s ρ)`.
pub fn stokes_parameter(rho: &DensityMatrix, s: &PauliString) -> Result<f64> {
    if s.len() != rho.n() {
        return Err(TomoError::input(format!(
            "Pauli string {s} has length {} but the state has {} qubits",
            s.len(),
            rho.n()
        )));
    }
    Ok(pauli_expectation(rho.matrix(), s).re)
}

/// `ρ = 2^{-n} Σ c_u σ_u`. Missing strings count as zero; the identity
/// coefficient must equal one. The result is Hermitian but not necessarily PSD.
pub fn density_from_stokes(n: usize, coeffs: &BTreeMap<PauliString, f64>) -> Result<DensityMatrix> {
    check_qubits(n)?;
    let id = PauliString::identity(n);
    match coeffs.get(&id) {
        Some(c) if (c - 1.0).abs() <= 1e-12 => {}
        Some(c) => {
            return Err(TomoError::input(format!(
                "identity coefficient must be 1 (trace constraint), got {c}"
            )))
        }
        None => {
            return Err(TomoError::input(
                "identity coefficient missing (trace constraint)",
            ))
        }
    }
    let dim = 1usize << n;
    let mut m = ComplexMatrix::zeros(dim, dim);
    for (s, &c) in coeffs {
        if s.len() != n {
            return Err(TomoError::input(format!(
                "Pauli string {s} does not have length {n}"
            )));
        }
        if c == 0.0 {
            continue;
        }
        for row in 0..dim {
            let (col, value) = pauli_row_entry(s, row);
            m[(row, col)] += value * c;
        }
    }
    DensityMatrix::hermitian_unit_trace(m.unscale(dim as f64))
}

/// Rank-one product projectors onto the joint eigenbasis of a measurement
/// setting.
///
/// Outcome `b` is indexed like a computational basis state: bit value 0 on a
/// qubit selects the +1 eigenvector of that qubit's letter, 1 the -1
/// eigenvector. Projectors are kept in product form and materialized on demand.
#[derive(Clone, Debug)]
pub struct ProjectorSet {
    setting: PauliString,
    /// Per qubit, a unitary whose row `k` is the conjugate of eigenvector `k`.
    rotations: Vec<ComplexMatrix>,
}

fn eigenbasis_rotation(letter: Pauli) -> ComplexMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let r = C64::new(h, 0.0);
    let i = C64::new(0.0, h);
    let entries = match letter {
        Pauli::Z | Pauli::I => [
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(1.0, 0.0),
        ],
        Pauli::X => [r, r, r, -r],
        // rows: <+i| = (1, -i)/√2, <-i| = (1, i)/√2
        Pauli::Y => [r, -i, r, i],
    };
    ComplexMatrix::from_row_slice(2, 2, &entries)
}

/// Projector set of an identity-free setting.
pub fn eigenbasis_projectors(s: &PauliString) -> Result<ProjectorSet> {
    check_qubits(s.len())?;
    if !s.is_setting() {
        return Err(TomoError::input(format!(
            "measurement setting {s} contains I; marginalize a setting without I instead"
        )));
    }
    Ok(ProjectorSet {
        setting: s.clone(),
        rotations: s
            .letters()
            .iter()
            .map(|&p| eigenbasis_rotation(p))
            .collect(),
    })
}

impl ProjectorSet {
    pub fn setting(&self) -> &PauliString {
        &self.setting
    }

    pub fn n(&self) -> usize {
        self.setting.len()
    }

    /// Number of projectors, `2^n`.
    pub fn len(&self) -> usize {
        1usize << self.n()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Product of single-qubit eigenvalues for outcome `b`.
    pub fn sign(&self, b: usize) -> f64 {
        if b.count_ones().is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    pub fn signs(&self) -> Vec<f64> {
        (0..self.len()).map(|b| self.sign(b)).collect()
    }

    /// Dense projector `M_{s,b}`.
    pub fn projector(&self, b: usize) -> ComplexMatrix {
        let n = self.n();
        let mut out = ComplexMatrix::from_element(1, 1, C64::new(1.0, 0.0));
        for (q, rot) in self.rotations.iter().enumerate() {
            let k = (b >> (n - 1 - q)) & 1;
            let v = rot.row(k).adjoint();
            out = out.kronecker(&(&v * v.adjoint()));
        }
        out
    }

    /// All projectors in outcome order. Allocates `8^n` entries.
    pub fn projectors(&self) -> Vec<ComplexMatrix> {
        (0..self.len()).map(|b| self.projector(b)).collect()
    }

    fn ops(&self) -> Vec<(ComplexMatrix, [usize; 1])> {
        self.rotations
            .iter()
            .enumerate()
            .map(|(q, r)| (r.clone(), [q]))
            .collect()
    }

    /// Maps `m` into the setting's eigenbasis, `U m U†`.
    pub(crate) fn rotate(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let ops = self.ops();
        let refs: Vec<(&ComplexMatrix, &[usize])> = ops.iter().map(|(g, q)| (g, &q[..])).collect();
        conjugate_local(m, &refs, self.n())
    }

    /// `Tr(M_{s,b} m)` for every outcome `b`.
    pub fn probabilities(&self, m: &ComplexMatrix) -> Vec<f64> {
        self.rotate(m).diagonal().iter().map(|z| z.re).collect()
    }

    /// `Σ_b w_b M_{s,b}`.
    pub fn weighted_sum(&self, weights: &[f64]) -> ComplexMatrix {
        let diag = nalgebra::DVector::from_iterator(
            weights.len(),
            weights.iter().map(|&w| C64::new(w, 0.0)),
        );
        let d = ComplexMatrix::from_diagonal(&diag);
        let ops: Vec<(ComplexMatrix, [usize; 1])> = self
            .rotations
            .iter()
            .enumerate()
            .map(|(q, r)| (r.adjoint(), [q]))
            .collect();
        let refs: Vec<(&ComplexMatrix, &[usize])> = ops.iter().map(|(g, q)| (g, &q[..])).collect();
        conjugate_local(&d, &refs, self.n())
    }
}

/// Outcome label of basis index `b`, one character per qubit.
pub fn outcome_label(b: usize, n: usize) -> String {
    (0..n)
        .map(|q| {
            if (b >> (n - 1 - q)) & 1 == 1 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

pub fn parse_outcome(label: &str, n: usize) -> Result<usize> {
    if label.len() != n || !label.chars().all(|c| c == '0' || c == '1') {
        return Err(TomoError::input(format!(
            "outcome {label:?} is not a {n}-bit string"
        )));
    }
    Ok(usize::from_str_radix(label, 2).expect("validated bitstring"))
}
