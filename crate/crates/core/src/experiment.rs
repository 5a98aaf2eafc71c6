//! Simulation → sampling → reconstruction sweeps and their CSV reports.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::DensityMatrix;
use crate::error::{Result, TomoError};
use crate::linalg::MAX_QUBITS;
use crate::metrics::{fidelity, mse};
use crate::plan::{MeasurementPlan, PlanMode};
use crate::recovery::{nesterov_solve, SolverConfig, TomographyData};
use crate::sim::{
    exact_record, prepare_circuit, prepare_circuit_with_phase, sample_setting,
    simulate_noisy_state, Dataset, MeasurementRecord, NoiseModel,
};
use crate::states::{to_density, with_phase, StateKind};

pub const DEFAULT_SHOTS: u64 = 8192;

fn default_shots() -> u64 {
    DEFAULT_SHOTS
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub state: StateKind,
    /// Relative phase in radians; absent means the plain state.
    #[serde(default)]
    pub phase: Option<f64>,
    pub n_min: usize,
    pub n_max: usize,
    pub plan: PlanMode,
    #[serde(default = "default_shots")]
    pub shots: u64,
    /// Use analytic outcome probabilities instead of sampling.
    #[serde(default)]
    pub exact_frequencies: bool,
    #[serde(default)]
    pub noise: NoiseModel,
    /// Optional list of two-qubit error rates; each value replaces `noise.b`
    /// for one pass over the qubit range.
    #[serde(default)]
    pub b_sweep: Option<Vec<f64>>,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// When false, `wall_time` is reported as zero so reports are byte-stable.
    #[serde(default = "default_true")]
    pub record_wall_time: bool,
}

impl ExperimentConfig {
    pub fn new(state: StateKind, n_min: usize, n_max: usize, plan: PlanMode) -> Self {
        ExperimentConfig {
            state,
            phase: None,
            n_min,
            n_max,
            plan,
            shots: DEFAULT_SHOTS,
            exact_frequencies: false,
            noise: NoiseModel::default(),
            b_sweep: None,
            solver: SolverConfig::default(),
            seed: 0,
            output: None,
            record_wall_time: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_min < 1 || self.n_min > self.n_max {
            return Err(TomoError::input(format!(
                "invalid qubit range {}..={}",
                self.n_min, self.n_max
            )));
        }
        if self.n_max > MAX_QUBITS {
            return Err(TomoError::Capacity {
                n: self.n_max,
                max: MAX_QUBITS,
            });
        }
        if self.n_min < self.state.min_qubits() {
            return Err(TomoError::input(format!(
                "{} needs at least {} qubits",
                self.state,
                self.state.min_qubits()
            )));
        }
        if !self.exact_frequencies && self.shots == 0 {
            return Err(TomoError::input("shots must be at least 1"));
        }
        self.noise.validate()?;
        for &b in self.b_sweep.iter().flatten() {
            NoiseModel { b, ..self.noise }.validate()?;
        }
        self.solver.validate()
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| TomoError::io(path, e))?;
        serde_json::from_str(&text)
            .map_err(|e| TomoError::input(format!("{}: {e}", path.display())))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportRow {
    pub n: usize,
    pub state: StateKind,
    pub plan: PlanMode,
    pub settings: usize,
    pub shots: u64,
    pub a: f64,
    pub b: f64,
    pub readout_flip: f64,
    /// Against the ideal target.
    pub mse: f64,
    /// Against the ideal target.
    pub fidelity: f64,
    /// Against the exact noisy state the data was drawn from.
    pub oracle_mse: f64,
    pub iterations: usize,
    pub wall_time: f64,
    pub seed: u64,
    pub error: Option<String>,
}

/// Everything needed to reconstruct one point of a sweep.
pub struct PreparedRow {
    pub target: DensityMatrix,
    pub noisy: DensityMatrix,
    pub plan: MeasurementPlan,
    pub dataset: Dataset,
}

fn setting_seeds(row_seed: u64, count: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(row_seed);
    (0..count).map(|_| rng.next_u64()).collect()
}

/// Builds the target, evolves the noisy circuit, and samples every setting.
#[allow(clippy::too_many_arguments)]
pub fn prepare_row(
    state: StateKind,
    phase: Option<f64>,
    n: usize,
    mode: PlanMode,
    noise: &NoiseModel,
    shots: u64,
    exact_frequencies: bool,
    seed: u64,
) -> Result<PreparedRow> {
    let pure = state.build(n)?;
    let (pure, circuit) = match phase {
        Some(phi) => (
            with_phase(&pure, phi),
            prepare_circuit_with_phase(state, n, phi)?,
        ),
        None => (pure, prepare_circuit(state, n)?),
    };
    let target = to_density(&pure);
    let noisy = simulate_noisy_state(&circuit, noise, n)?;
    let plan = MeasurementPlan::build(n, mode)?;
    let seeds = setting_seeds(seed, plan.len());
    let records = plan
        .settings()
        .iter()
        .zip(seeds)
        .map(|(s, sub_seed)| {
            if exact_frequencies {
                exact_record(&noisy, s, noise.readout_flip)
            } else {
                sample_setting(&noisy, s, shots, noise.readout_flip, sub_seed)
            }
        })
        .collect::<Result<Vec<MeasurementRecord>>>()?;
    Ok(PreparedRow {
        target,
        noisy,
        plan,
        dataset: Dataset {
            n,
            seed,
            noise: *noise,
            records,
        },
    })
}

struct RowSpec {
    n: usize,
    noise: NoiseModel,
    seed: u64,
}

fn run_row(cfg: &ExperimentConfig, spec: &RowSpec) -> ReportRow {
    let started = Instant::now();
    let settings = MeasurementPlan::build(spec.n, cfg.plan)
        .map(|p| p.len())
        .unwrap_or(0);
    let mut row = ReportRow {
        n: spec.n,
        state: cfg.state,
        plan: cfg.plan,
        settings,
        shots: if cfg.exact_frequencies { 0 } else { cfg.shots },
        a: spec.noise.a,
        b: spec.noise.b,
        readout_flip: spec.noise.readout_flip,
        mse: f64::NAN,
        fidelity: f64::NAN,
        oracle_mse: f64::NAN,
        iterations: 0,
        wall_time: 0.0,
        seed: spec.seed,
        error: None,
    };
    let outcome = (|| -> Result<()> {
        let prepared = prepare_row(
            cfg.state,
            cfg.phase,
            spec.n,
            cfg.plan,
            &spec.noise,
            cfg.shots,
            cfg.exact_frequencies,
            spec.seed,
        )?;
        let data = TomographyData::from_records(&prepared.dataset.records)?;
        let result = nesterov_solve(&data, &cfg.solver, None)?;
        row.mse = mse(&result.rho_hat, &prepared.target)?;
        row.fidelity = fidelity(&result.rho_hat, &prepared.target)?;
        row.oracle_mse = mse(&result.rho_hat, &prepared.noisy)?;
        row.iterations = result.iterations;
        Ok(())
    })();
    if let Err(e) = outcome {
        row.error = Some(e.to_string());
    }
    if cfg.record_wall_time {
        row.wall_time = started.elapsed().as_secs_f64();
    }
    row
}

/// Runs every (b, n) point of the sweep. Row `i` uses seed `cfg.seed + i`;
/// rows run concurrently and are returned in sweep order. A failing row keeps
/// its error message and NaN metrics.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ReportRow>> {
    cfg.validate()?;
    let b_values = cfg.b_sweep.clone().unwrap_or_else(|| vec![cfg.noise.b]);
    let specs: Vec<RowSpec> = b_values
        .iter()
        .flat_map(|&b| (cfg.n_min..=cfg.n_max).map(move |n| (b, n)))
        .enumerate()
        .map(|(i, (b, n))| RowSpec {
            n,
            noise: NoiseModel { b, ..cfg.noise },
            seed: cfg.seed.wrapping_add(i as u64),
        })
        .collect();
    Ok(specs.par_iter().map(|spec| run_row(cfg, spec)).collect())
}

pub const REPORT_HEADER: &str =
    "n,state,plan,settings,shots,a,b,readout_flip,mse,fidelity,iterations,wall_time,seed";

/// CSV text for `rows`. Floats use the shortest representation that
/// round-trips exactly.
pub fn render_report(rows: &[ReportRow]) -> String {
    let mut text = format!("{REPORT_HEADER}\n");
    for r in rows {
        text.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.n,
            r.state,
            r.plan,
            r.settings,
            r.shots,
            r.a,
            r.b,
            r.readout_flip,
            r.mse,
            r.fidelity,
            r.iterations,
            r.wall_time,
            r.seed
        ));
    }
    text
}

pub fn write_report(rows: &[ReportRow], path: &Path) -> Result<()> {
    std::fs::write(path, render_report(rows)).map_err(|e| TomoError::io(path, e))
}

/// Setting counts for `n = 1..=n_max` as CSV text.
pub fn count_report(n_max: usize) -> Result<String> {
    let mut text = String::from("n,full,reduced_with_phase,reduced_no_phase,minimal_xz\n");
    for row in crate::plan::count_table(n_max)? {
        text.push_str(&format!(
            "{},{},{},{},{}\n",
            row.n, row.full, row.reduced_with_phase, row.reduced_no_phase, row.minimal_xz
        ));
    }
    Ok(text)
}
