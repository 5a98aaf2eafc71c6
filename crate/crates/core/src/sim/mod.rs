//! Circuit-level simulator: exact noisy density-matrix evolution and
//! finite-shot sampling of Pauli measurement settings.

mod gates;
mod noise;
mod sampling;

pub use gates::{prepare_circuit, prepare_circuit_with_phase, Gate};
pub use noise::{apply_depolarizing, evolve, simulate_noisy_state, NoiseModel};
pub use sampling::{
    exact_distribution, exact_record, expectation_from_record, marginal_expectation,
    sample_setting, Dataset, MeasurementRecord,
};
