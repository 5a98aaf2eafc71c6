//! Multi-qubit quantum state tomography from reduced Pauli measurement sets.
//!
//! * [`pauli`], [`linalg`], [`density`]: Pauli strings, Stokes parameters,
//!   eigenbasis projectors and PSD projection on dense complex matrices.
//! * [`states`]: GHZ, W and linear cluster targets.
//! * [`plan`]: full and reduced measurement plans.
//! * [`sim`]: noisy circuit simulation and shot sampling.
//! * [`recovery`]: regularized least-squares objective and the accelerated
//!   projected-gradient solver.
//! * [`metrics`], [`experiment`]: accuracy metrics and reproducible sweeps.

pub mod density;
pub mod error;
pub mod experiment;
pub mod linalg;
pub mod metrics;
pub mod pauli;
pub mod plan;
pub mod recovery;
pub mod sim;
pub mod states;

pub use density::DensityMatrix;
pub use error::{Result, TomoError};
pub use linalg::{psd_project, ComplexMatrix, MAX_QUBITS};
pub use pauli::{
    density_from_stokes, eigenbasis_projectors, pauli_matrix, pauli_operator, stokes_parameter,
    Pauli, PauliString, ProjectorSet,
};
pub use plan::{
    full_plan, minimal_xz_plan, reduced_plan, setting_count, y_parity, MeasurementPlan, PlanMode,
    YParity,
};
pub use recovery::{
    empirical_mse, gradient, lipschitz_bound, nesterov_solve, objective, SolverConfig,
    SolverResult, StepRule, StopReason, TomographyData,
};
pub use states::{cluster, ghz, to_density, w, with_phase, PureState, StateKind};
