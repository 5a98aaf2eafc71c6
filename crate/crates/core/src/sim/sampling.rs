use std::collections::BTreeMap;
use std::path::Path;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::gates::Gate;
use super::noise::{check_probability, NoiseModel};
use crate::density::DensityMatrix;
use crate::error::{Result, TomoError};
use crate::linalg::conjugate_local;
use crate::pauli::{outcome_label, parse_outcome, Pauli, PauliString};

/// Empirical outcome frequencies of one measurement setting.
///
/// `shots == 0` marks analytic (infinite-shot) frequencies. Outcomes missing
/// from `frequencies` were never observed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub setting: PauliString,
    pub shots: u64,
    pub frequencies: BTreeMap<String, f64>,
}

impl MeasurementRecord {
    pub fn n(&self) -> usize {
        self.setting.len()
    }

    pub fn validate(&self) -> Result<()> {
        if !self.setting.is_setting() {
            return Err(TomoError::input(format!(
                "record setting {} contains I",
                self.setting
            )));
        }
        let mut total = 0.0;
        for (label, &f) in &self.frequencies {
            parse_outcome(label, self.n())?;
            if !(0.0..=1.0 + 1e-12).contains(&f) {
                return Err(TomoError::input(format!(
                    "frequency {f} for {label} is out of range"
                )));
            }
            total += f;
        }
        if (total - 1.0).abs() > 1e-9 {
            return Err(TomoError::input(format!(
                "frequencies for {} sum to {total}",
                self.setting
            )));
        }
        Ok(())
    }

    /// Frequencies as a dense vector indexed by outcome.
    pub fn frequency_vector(&self) -> Result<Vec<f64>> {
        let n = self.n();
        let mut out = vec![0.0; 1usize << n];
        for (label, &f) in &self.frequencies {
            out[parse_outcome(label, n)?] = f;
        }
        Ok(out)
    }
}

/// A set of records sharing one register plus the generation parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub n: usize,
    pub seed: u64,
    pub noise: NoiseModel,
    pub records: Vec<MeasurementRecord>,
}

impl Dataset {
    pub fn validate(&self) -> Result<()> {
        for rec in &self.records {
            if rec.n() != self.n {
                return Err(TomoError::input(format!(
                    "record {} does not match the dataset's {} qubits",
                    rec.setting, self.n
                )));
            }
            rec.validate()?;
        }
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| TomoError::io(path, e))?;
        let ds: Dataset = serde_json::from_str(&text)
            .map_err(|e| TomoError::input(format!("{}: {e}", path.display())))?;
        ds.validate()?;
        Ok(ds)
    }
}

/// Rotation into the computational basis: X → H, Y → S† then H, Z → nothing.
fn basis_change(setting: &PauliString) -> Vec<Gate> {
    setting
        .letters()
        .iter()
        .enumerate()
        .flat_map(|(q, p)| match p {
            Pauli::X => vec![Gate::H(q)],
            Pauli::Y => vec![Gate::Sdg(q), Gate::H(q)],
            _ => vec![],
        })
        .collect()
}

fn flip_bits(probs: &mut [f64], n: usize, flip: f64) {
    if flip == 0.0 {
        return;
    }
    for q in 0..n {
        let bit = 1usize << (n - 1 - q);
        for b in (0..probs.len()).filter(|b| b & bit == 0) {
            let (p0, p1) = (probs[b], probs[b | bit]);
            probs[b] = (1.0 - flip) * p0 + flip * p1;
            probs[b | bit] = (1.0 - flip) * p1 + flip * p0;
        }
    }
}

/// Outcome distribution of `setting` on `rho`, including readout flips.
pub fn exact_distribution(
    rho: &DensityMatrix,
    setting: &PauliString,
    readout_flip: f64,
) -> Result<Vec<f64>> {
    check_probability("readout_flip", readout_flip)?;
    let n = rho.n();
    if setting.len() != n || !setting.is_setting() {
        return Err(TomoError::input(format!(
            "setting {setting} is not an identity-free {n}-qubit string"
        )));
    }
    let gates = basis_change(setting);
    let mats: Vec<_> = gates.iter().map(|g| (g.matrix(), g.qubits())).collect();
    let ops: Vec<_> = mats.iter().map(|(m, q)| (m, q.as_slice())).collect();
    let rotated = conjugate_local(rho.matrix(), &ops, n);
    let mut probs: Vec<f64> = rotated.diagonal().iter().map(|z| z.re.max(0.0)).collect();
    flip_bits(&mut probs, n, readout_flip);
    let total: f64 = probs.iter().sum();
    probs.iter_mut().for_each(|p| *p /= total);
    Ok(probs)
}

/// Analytic frequencies, recorded with `shots = 0`.
pub fn exact_record(
    rho: &DensityMatrix,
    setting: &PauliString,
    readout_flip: f64,
) -> Result<MeasurementRecord> {
    let n = rho.n();
    let probs = exact_distribution(rho, setting, readout_flip)?;
    let frequencies = probs
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > 0.0)
        .map(|(b, &p)| (outcome_label(b, n), p))
        .collect();
    Ok(MeasurementRecord {
        setting: setting.clone(),
        shots: 0,
        frequencies,
    })
}

/// Draws `shots` outcomes of `setting` with a generator seeded by `seed`.
pub fn sample_setting(
    rho: &DensityMatrix,
    setting: &PauliString,
    shots: u64,
    readout_flip: f64,
    seed: u64,
) -> Result<MeasurementRecord> {
    if shots == 0 {
        return Err(TomoError::input("shots must be at least 1"));
    }
    let n = rho.n();
    let probs = exact_distribution(rho, setting, readout_flip)?;
    let dist = WeightedIndex::new(&probs)
        .map_err(|e| TomoError::input(format!("bad distribution: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; probs.len()];
    for _ in 0..shots {
        counts[dist.sample(&mut rng)] += 1;
    }
    let frequencies = counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(b, &c)| (outcome_label(b, n), c as f64 / shots as f64))
        .collect();
    Ok(MeasurementRecord {
        setting: setting.clone(),
        shots,
        frequencies,
    })
}

/// `p⁺ - p⁻` of the record's own setting.
pub fn expectation_from_record(rec: &MeasurementRecord) -> Result<f64> {
    marginal_expectation(rec, &rec.setting)
}

/// Expectation of a string whose non-identity letters agree with the
/// record's setting, obtained by marginalizing the outcome bits under `I`.
pub fn marginal_expectation(rec: &MeasurementRecord, s: &PauliString) -> Result<f64> {
    let n = rec.n();
    if s.len() != n {
        return Err(TomoError::input(format!("{s} does not have {n} letters")));
    }
    let compatible = s
        .letters()
        .iter()
        .zip(rec.setting.letters())
        .all(|(a, b)| *a == Pauli::I || a == b);
    if !compatible {
        return Err(TomoError::input(format!(
            "{s} is not measured by setting {}",
            rec.setting
        )));
    }
    let support = s.support_mask();
    let mut value = 0.0;
    for (label, &f) in &rec.frequencies {
        let b = parse_outcome(label, n)?;
        if (b & support).count_ones().is_multiple_of(2) {
            value += f;
        } else {
            value -= f;
        }
    }
    Ok(value)
}
