//! Measurement plans: full tomography and the reduced Pauli setting sets.
//!
//! Real-part settings carry an even number of Y letters and imaginary-part
//! settings an odd number; states with real density matrices have vanishing
//! odd-Y Stokes parameters, so the imaginary part can be skipped for them.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Result, TomoError};
use crate::linalg::{check_qubits, MAX_QUBITS};
use crate::pauli::{words, Pauli, PauliString};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlanMode {
    Full,
    ReducedWithPhase,
    ReducedNoPhase,
    MinimalXz,
}

impl PlanMode {
    pub fn name(self) -> &'static str {
        match self {
            PlanMode::Full => "full",
            PlanMode::ReducedWithPhase => "reduced_with_phase",
            PlanMode::ReducedNoPhase => "reduced_no_phase",
            PlanMode::MinimalXz => "minimal_xz",
        }
    }
}

impl fmt::Display for PlanMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PlanMode {
    type Err = TomoError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(PlanMode::Full),
            "reduced_with_phase" => Ok(PlanMode::ReducedWithPhase),
            "reduced_no_phase" => Ok(PlanMode::ReducedNoPhase),
            "minimal_xz" | "minimal" => Ok(PlanMode::MinimalXz),
            other => Err(TomoError::input(format!("unknown plan mode {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum YParity {
    Even,
    Odd,
}

pub fn y_parity(s: &PauliString) -> YParity {
    if s.count(Pauli::Y).is_multiple_of(2) {
        YParity::Even
    } else {
        YParity::Odd
    }
}

/// Ordered list of identity-free settings for an `n`-qubit register.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasurementPlan {
    n: usize,
    mode: PlanMode,
    settings: Vec<PauliString>,
}

impl MeasurementPlan {
    fn from_settings(n: usize, mode: PlanMode, settings: Vec<PauliString>) -> Self {
        let mut seen = HashSet::new();
        let settings = settings
            .into_iter()
            .filter(|s| seen.insert(s.clone()))
            .collect();
        MeasurementPlan { n, mode, settings }
    }

    pub fn build(n: usize, mode: PlanMode) -> Result<Self> {
        match mode {
            PlanMode::Full => full_plan(n),
            PlanMode::ReducedWithPhase => reduced_plan(n, true),
            PlanMode::ReducedNoPhase => reduced_plan(n, false),
            PlanMode::MinimalXz => minimal_xz_plan(n),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> PlanMode {
        self.mode
    }

    pub fn settings(&self) -> &[PauliString] {
        &self.settings
    }

    pub fn len(&self) -> usize {
        self.settings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.settings.is_empty()
    }

    pub fn contains(&self, s: &PauliString) -> bool {
        self.settings.contains(s)
    }

    /// JSON array of setting strings, e.g. `["XX","ZZ","YY","YZ","ZY"]`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.settings).expect("strings serialize")
    }
}

/// All `3^n` settings over {X, Y, Z} in lexicographic order.
pub fn full_plan(n: usize) -> Result<MeasurementPlan> {
    check_qubits(n)?;
    Ok(MeasurementPlan::from_settings(
        n,
        PlanMode::Full,
        words(n, &[Pauli::X, Pauli::Y, Pauli::Z]),
    ))
}

fn real_part_settings(n: usize) -> Vec<PauliString> {
    let mut out = vec![
        PauliString::repeat(Pauli::X, n),
        PauliString::repeat(Pauli::Z, n),
    ];
    if n.is_multiple_of(2) {
        out.push(PauliString::repeat(Pauli::Y, n));
    } else {
        let mut letters = vec![Pauli::Y; n - 1];
        letters.push(Pauli::Z);
        out.push(PauliString::new(letters));
    }
    out
}

/// Strings over {Y, Z} with one or three Y letters, fewer Ys than qubits
/// (except the single-qubit case, which uses Y itself).
fn imaginary_part_settings(n: usize) -> Vec<PauliString> {
    words(n, &[Pauli::Y, Pauli::Z])
        .into_iter()
        .filter(|s| {
            let k = s.count(Pauli::Y);
            (k == 1 || k == 3) && (k < n || n == 1)
        })
        .collect()
}

/// Reduced setting set: real-part settings first, then (with `has_phase`) the
/// imaginary-part settings.
pub fn reduced_plan(n: usize, has_phase: bool) -> Result<MeasurementPlan> {
    check_qubits(n)?;
    let mut settings = real_part_settings(n);
    let mode = if has_phase {
        settings.extend(imaginary_part_settings(n));
        PlanMode::ReducedWithPhase
    } else {
        PlanMode::ReducedNoPhase
    };
    Ok(MeasurementPlan::from_settings(n, mode, settings))
}

/// The two settings `X^{⊗n}` and `Z^{⊗n}`.
pub fn minimal_xz_plan(n: usize) -> Result<MeasurementPlan> {
    check_qubits(n)?;
    Ok(MeasurementPlan::from_settings(
        n,
        PlanMode::MinimalXz,
        vec![
            PauliString::repeat(Pauli::X, n),
            PauliString::repeat(Pauli::Z, n),
        ],
    ))
}

pub fn setting_count(n: usize, mode: PlanMode) -> Result<usize> {
    Ok(MeasurementPlan::build(n, mode)?.len())
}

/// One row of the setting-count comparison table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CountRow {
    pub n: usize,
    pub full: usize,
    pub reduced_with_phase: usize,
    pub reduced_no_phase: usize,
    pub minimal_xz: usize,
}

pub fn count_table(n_max: usize) -> Result<Vec<CountRow>> {
    if n_max > MAX_QUBITS {
        return Err(TomoError::Capacity {
            n: n_max,
            max: MAX_QUBITS,
        });
    }
    (1..=n_max)
        .map(|n| {
            Ok(CountRow {
                n,
                full: setting_count(n, PlanMode::Full)?,
                reduced_with_phase: setting_count(n, PlanMode::ReducedWithPhase)?,
                reduced_no_phase: setting_count(n, PlanMode::ReducedNoPhase)?,
                minimal_xz: setting_count(n, PlanMode::MinimalXz)?,
            })
        })
        .collect()
}
