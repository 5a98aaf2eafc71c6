//! PSD-constrained least-squares recovery of a density matrix from
//! measurement frequencies.
//!
//! The smooth objective is
//!
//! ```text
//! F(ρ) = Σ_{u,b} ½ [Tr(M_{u,b} ρ) - f_{u,b}]² + c1 ‖ρ‖_F² + c2 Tr ρ
//! ```
//!
//! minimized over ρ ⪰ 0 by an accelerated projected-gradient loop with
//! momentum `t_k = (1 + √(1 + 4 t_{k-1}²)) / 2` and projection onto the PSD
//! cone after every gradient step.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::DensityMatrix;
use crate::error::{Result, TomoError};
use crate::linalg::{frobenius_sq, hermitian_part, psd_project_hermitian, trace, ComplexMatrix};
use crate::pauli::{eigenbasis_projectors, ProjectorSet};
use crate::plan::MeasurementPlan;
use crate::sim::{exact_distribution, MeasurementRecord};

/// One setting's projectors paired with its observed frequencies.
#[derive(Clone, Debug)]
pub struct DataRecord {
    pub projectors: ProjectorSet,
    pub frequencies: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct TomographyData {
    n: usize,
    records: Vec<DataRecord>,
}

impl TomographyData {
    pub fn new(n: usize, records: Vec<DataRecord>) -> Result<Self> {
        if records.is_empty() {
            return Err(TomoError::input(
                "tomography data needs at least one record",
            ));
        }
        for r in &records {
            if r.projectors.n() != n || r.frequencies.len() != r.projectors.len() {
                return Err(TomoError::input(format!(
                    "record {} does not match {n} qubits",
                    r.projectors.setting()
                )));
            }
        }
        Ok(TomographyData { n, records })
    }

    pub fn from_records(records: &[MeasurementRecord]) -> Result<Self> {
        let n = records
            .first()
            .ok_or_else(|| TomoError::input("tomography data needs at least one record"))?
            .n();
        let records = records
            .iter()
            .map(|rec| {
                if rec.n() != n {
                    return Err(TomoError::input(format!(
                        "record {} has {} qubits, expected {n}",
                        rec.setting,
                        rec.n()
                    )));
                }
                rec.validate()?;
                Ok(DataRecord {
                    projectors: eigenbasis_projectors(&rec.setting)?,
                    frequencies: rec.frequency_vector()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, records)
    }

    /// Analytic outcome probabilities of `rho` for every setting of `plan`.
    pub fn exact(rho: &DensityMatrix, plan: &MeasurementPlan) -> Result<Self> {
        if plan.n() != rho.n() {
            return Err(TomoError::input("plan and state sizes differ"));
        }
        let records = plan
            .settings()
            .iter()
            .map(|s| {
                Ok(DataRecord {
                    projectors: eigenbasis_projectors(s)?,
                    frequencies: exact_distribution(rho, s, 0.0)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(rho.n(), records)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn records(&self) -> &[DataRecord] {
        &self.records
    }

    pub fn projector_count(&self) -> usize {
        self.records.iter().map(|r| r.projectors.len()).sum()
    }

    fn check_dim(&self, rho: &ComplexMatrix) -> Result<()> {
        let dim = 1usize << self.n;
        if rho.nrows() != dim || rho.ncols() != dim {
            return Err(TomoError::input(format!(
                "matrix is {}x{}, data expects {dim}x{dim}",
                rho.nrows(),
                rho.ncols()
            )));
        }
        Ok(())
    }

    /// `Tr(M_{u,b} ρ) - f_{u,b}` per record.
    fn residuals(&self, rho: &ComplexMatrix) -> Vec<Vec<f64>> {
        self.records
            .par_iter()
            .map(|r| {
                r.projectors
                    .probabilities(rho)
                    .iter()
                    .zip(&r.frequencies)
                    .map(|(p, f)| p - f)
                    .collect()
            })
            .collect()
    }

    fn residual_sq_sum(&self, rho: &ComplexMatrix) -> f64 {
        self.residuals(rho).iter().flatten().map(|r| r * r).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum StepRule {
    /// Constant step `1 / L` with `L` from [`lipschitz_bound`].
    #[default]
    FixedLipschitz,
    /// Start from a small `L` and double it until the descent condition holds.
    Backtracking,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub c1: f64,
    pub c2: f64,
    pub max_iter: usize,
    /// Relative objective change below which the loop stops.
    pub obj_tol: f64,
    /// Data-consistency threshold on [`empirical_mse`].
    pub mse_stop: f64,
    pub step_rule: StepRule,
    /// Reset momentum whenever the objective increases.
    pub restart: bool,
    /// Carried into reports; the solver itself is deterministic.
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            c1: 1e-4,
            c2: 0.0,
            max_iter: 5000,
            obj_tol: 1e-9,
            mse_stop: 1e-8,
            step_rule: StepRule::FixedLipschitz,
            restart: true,
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.c1 >= 0.0 && self.c2 >= 0.0) {
            return Err(TomoError::input("regularizer weights must be nonnegative"));
        }
        if self.max_iter == 0 {
            return Err(TomoError::input("max_iter must be at least 1"));
        }
        if !(self.obj_tol > 0.0 && self.mse_stop > 0.0) {
            return Err(TomoError::input("tolerances must be positive"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    ObjectiveTol,
    MseStop,
    MaxIter,
}

#[derive(Clone, Debug)]
pub struct SolverResult {
    pub rho_hat: DensityMatrix,
    pub iterations: usize,
    /// Objective after each iteration, starting with the initial point.
    pub objective_trace: Vec<f64>,
    pub converged: bool,
    pub stop_reason: StopReason,
    /// Objective of the returned, trace-normalized estimate.
    pub final_objective: f64,
}

/// Diagnostics written next to the estimate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolverReport {
    #[serde(flatten)]
    pub rho: crate::density::DensityMatrixJson,
    pub iterations: usize,
    pub converged: bool,
    pub stop_reason: StopReason,
    pub final_objective: f64,
}

impl SolverResult {
    pub fn report(&self) -> SolverReport {
        SolverReport {
            rho: self.rho_hat.to_json(),
            iterations: self.iterations,
            converged: self.converged,
            stop_reason: self.stop_reason,
            final_objective: self.final_objective,
        }
    }
}

fn regularizer(rho: &ComplexMatrix, cfg: &SolverConfig) -> f64 {
    cfg.c1 * frobenius_sq(rho) + cfg.c2 * trace(rho).re
}

pub fn objective(rho: &ComplexMatrix, data: &TomographyData, cfg: &SolverConfig) -> Result<f64> {
    data.check_dim(rho)?;
    Ok(0.5 * data.residual_sq_sum(rho) + regularizer(rho, cfg))
}

/// `Σ_{u,b} [Tr(M ρ) - f] M + 2 c1 ρ + c2 I`.
pub fn gradient(
    rho: &ComplexMatrix,
    data: &TomographyData,
    cfg: &SolverConfig,
) -> Result<ComplexMatrix> {
    data.check_dim(rho)?;
    Ok(gradient_unchecked(rho, data, cfg))
}

fn gradient_unchecked(
    rho: &ComplexMatrix,
    data: &TomographyData,
    cfg: &SolverConfig,
) -> ComplexMatrix {
    let parts: Vec<ComplexMatrix> = data
        .records
        .par_iter()
        .map(|r| {
            let res: Vec<f64> = r
                .projectors
                .probabilities(rho)
                .iter()
                .zip(&r.frequencies)
                .map(|(p, f)| p - f)
                .collect();
            r.projectors.weighted_sum(&res)
        })
        .collect();
    let dim = rho.nrows();
    let mut g = rho.scale(2.0 * cfg.c1);
    for p in parts {
        g += p;
    }
    if cfg.c2 != 0.0 {
        for i in 0..dim {
            g[(i, i)] += cfg.c2;
        }
    }
    hermitian_part(&g)
}

/// `Σ ‖M_{u,b}‖_F² + 2 c1`, i.e. the projector count plus `2 c1`.
pub fn lipschitz_bound(data: &TomographyData, cfg: &SolverConfig) -> f64 {
    data.projector_count() as f64 + 2.0 * cfg.c1
}

/// Mean of `[Tr(M_{u,b} ρ) - f_{u,b}]²` over all projector/frequency pairs.
pub fn empirical_mse(rho: &ComplexMatrix, data: &TomographyData) -> Result<f64> {
    data.check_dim(rho)?;
    Ok(data.residual_sq_sum(rho) / data.projector_count() as f64)
}

/// Objective and data fit of `x / Tr x`, computed from the residuals of `x`.
fn normalized_objective(
    x: &ComplexMatrix,
    data: &TomographyData,
    cfg: &SolverConfig,
) -> Option<f64> {
    let tr = trace(x).re;
    if tr <= f64::MIN_POSITIVE {
        return None;
    }
    let scaled = x.unscale(tr);
    Some(0.5 * data.residual_sq_sum(&scaled) + regularizer(&scaled, cfg))
}

struct Step {
    point: ComplexMatrix,
    objective: f64,
}

fn projected_step(y: &ComplexMatrix, grad: &ComplexMatrix, lipschitz: f64) -> ComplexMatrix {
    psd_project_hermitian(&hermitian_part(&(y - grad.unscale(lipschitz))))
}

/// Accelerated projected gradient from `init` (maximally mixed by default).
pub fn nesterov_solve(
    data: &TomographyData,
    cfg: &SolverConfig,
    init: Option<&DensityMatrix>,
) -> Result<SolverResult> {
    cfg.validate()?;
    let start = match init {
        Some(rho) => {
            if rho.n() != data.n {
                return Err(TomoError::input(
                    "initial state size does not match the data",
                ));
            }
            rho.clone()
        }
        None => DensityMatrix::maximally_mixed(data.n)?,
    };
    let bound = lipschitz_bound(data, cfg);
    let mut lipschitz = match cfg.step_rule {
        StepRule::FixedLipschitz => bound,
        StepRule::Backtracking => 1.0f64.min(bound),
    };

    let mut x = start.matrix().clone();
    let mut x_prev = x.clone();
    let mut t_prev = 1.0f64;
    let f_init = objective(&x, data, cfg)?;
    let mut f_prev = f_init;
    let mut objective_trace = vec![f_init];
    let mut best = Step {
        point: x.clone(),
        objective: f_init,
    };
    let mut stop_reason = StopReason::MaxIter;
    let mut iterations = 0;

    for k in 1..=cfg.max_iter {
        iterations = k;
        let t = (1.0 + (1.0 + 4.0 * t_prev * t_prev).sqrt()) / 2.0;
        let y = &x + (&x - &x_prev).scale((t_prev - 1.0) / t);
        let grad = gradient_unchecked(&y, data, cfg);

        let mut x_new = projected_step(&y, &grad, lipschitz);
        if cfg.step_rule == StepRule::Backtracking {
            let f_y = 0.5 * data.residual_sq_sum(&y) + regularizer(&y, cfg);
            loop {
                let d = &x_new - &y;
                let model = f_y
                    + crate::linalg::trace_product(&grad, &d).re
                    + 0.5 * lipschitz * frobenius_sq(&d);
                let f_new = 0.5 * data.residual_sq_sum(&x_new) + regularizer(&x_new, cfg);
                if f_new <= model + 1e-15 * f_y.abs().max(1.0) || lipschitz >= bound {
                    break;
                }
                lipschitz = (2.0 * lipschitz).min(bound);
                x_new = projected_step(&y, &grad, lipschitz);
            }
        }

        let f_new = 0.5 * data.residual_sq_sum(&x_new) + regularizer(&x_new, cfg);
        objective_trace.push(f_new);

        if let Some(f_norm) = normalized_objective(&x_new, data, cfg) {
            if f_norm < best.objective {
                best = Step {
                    point: x_new.clone(),
                    objective: f_norm,
                };
            }
        }

        let mse = data.residual_sq_sum(&x_new) / data.projector_count() as f64;
        let rel_change = (f_new - f_prev).abs() / f_prev.abs().max(f64::MIN_POSITIVE);

        if cfg.restart && f_new > f_prev {
            t_prev = 1.0;
            x_prev = x_new.clone();
        } else {
            t_prev = t;
            x_prev = std::mem::replace(&mut x, x_new.clone());
        }
        x = x_new;
        f_prev = f_new;

        if mse < cfg.mse_stop {
            stop_reason = StopReason::MseStop;
            break;
        }
        if rel_change < cfg.obj_tol {
            stop_reason = StopReason::ObjectiveTol;
            break;
        }
    }

    let tr = trace(&best.point).re;
    if tr <= f64::MIN_POSITIVE {
        return Err(TomoError::Degenerate("estimate has zero trace".into()));
    }
    let rho_hat = DensityMatrix::new(best.point.unscale(tr))?;
    let final_objective = objective(rho_hat.matrix(), data, cfg)?;
    Ok(SolverResult {
        rho_hat,
        iterations,
        objective_trace,
        converged: stop_reason != StopReason::MaxIter,
        stop_reason,
        final_objective,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plan::full_plan;
    use std::collections::BTreeMap;

    fn ket0() -> DensityMatrix {
        let mut m = ComplexMatrix::zeros(2, 2);
        m[(0, 0)] = num_complex::Complex64::new(1.0, 0.0);
        DensityMatrix::new(m).unwrap()
    }

    fn z_record() -> TomographyData {
        let rec = MeasurementRecord {
            setting: "Z".parse().unwrap(),
            shots: 1,
            frequencies: BTreeMap::from([("0".to_string(), 1.0)]),
        };
        TomographyData::from_records(&[rec]).unwrap()
    }

    fn plain() -> SolverConfig {
        SolverConfig {
            c1: 0.0,
            c2: 0.0,
            ..SolverConfig::default()
        }
    }

    #[test]
    fn objective_examples() {
        let data = TomographyData::exact(&ket0(), &full_plan(1).unwrap()).unwrap();
        assert!(objective(ket0().matrix(), &data, &plain()).unwrap().abs() < 1e-15);
        let trace_only = SolverConfig { c2: 1.0, ..plain() };
        assert!((objective(ket0().matrix(), &data, &trace_only).unwrap() - 1.0).abs() < 1e-15);

        let mixed = DensityMatrix::maximally_mixed(1).unwrap();
        assert!((objective(mixed.matrix(), &z_record(), &plain()).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn gradient_examples() {
        let data = TomographyData::exact(&ket0(), &full_plan(1).unwrap()).unwrap();
        assert!(gradient(ket0().matrix(), &data, &plain()).unwrap().norm() < 1e-12);
        let c1_only = SolverConfig { c1: 1.0, ..plain() };
        let g = gradient(ket0().matrix(), &data, &c1_only).unwrap();
        assert!((g - ket0().matrix().scale(2.0)).norm() < 1e-12);
    }

    #[test]
    fn dimension_mismatch_is_an_input_error() {
        let rho = DensityMatrix::maximally_mixed(2).unwrap();
        assert!(matches!(
            objective(rho.matrix(), &z_record(), &plain()),
            Err(TomoError::Input(_))
        ));
        assert!(gradient(rho.matrix(), &z_record(), &plain()).is_err());
        assert!(empirical_mse(rho.matrix(), &z_record()).is_err());
    }

    #[test]
    fn lipschitz_examples() {
        assert_eq!(lipschitz_bound(&z_record(), &plain()), 2.0);
        let rho = DensityMatrix::maximally_mixed(2).unwrap();
        let plan = crate::plan::minimal_xz_plan(2).unwrap();
        let data = TomographyData::exact(&rho, &plan).unwrap();
        assert_eq!(lipschitz_bound(&data, &plain()), 8.0);
    }

    #[test]
    fn empirical_mse_examples() {
        let mixed = DensityMatrix::maximally_mixed(1).unwrap();
        let data = z_record();
        assert!((empirical_mse(mixed.matrix(), &data).unwrap() - 0.25).abs() < 1e-15);
        let exact = TomographyData::exact(&ket0(), &full_plan(1).unwrap()).unwrap();
        assert!(empirical_mse(ket0().matrix(), &exact).unwrap() < 1e-30);

        let obj = objective(mixed.matrix(), &data, &plain()).unwrap();
        let link = 2.0 * obj / data.projector_count() as f64;
        assert!((empirical_mse(mixed.matrix(), &data).unwrap() - link).abs() < 1e-15);
    }

    #[test]
    fn single_iteration_accounting() {
        let data = TomographyData::exact(&ket0(), &full_plan(1).unwrap()).unwrap();
        let cfg = SolverConfig {
            max_iter: 1,
            ..plain()
        };
        let res = nesterov_solve(&data, &cfg, None).unwrap();
        assert_eq!(res.iterations, 1);
        assert!(!res.converged);
        assert_eq!(res.stop_reason, StopReason::MaxIter);
        assert_eq!(res.objective_trace.len(), 2);
    }

    #[test]
    fn empty_data_and_bad_config() {
        assert!(TomographyData::from_records(&[]).is_err());
        let cfg = SolverConfig {
            max_iter: 0,
            ..plain()
        };
        assert!(nesterov_solve(&z_record(), &cfg, None).is_err());
        let cfg = SolverConfig {
            c1: -1.0,
            ..plain()
        };
        assert!(nesterov_solve(&z_record(), &cfg, None).is_err());
    }

    #[test]
    fn recovers_ground_state_from_full_plan() {
        let data = TomographyData::exact(&ket0(), &full_plan(1).unwrap()).unwrap();
        let cfg = SolverConfig {
            mse_stop: 1e-18,
            max_iter: 20_000,
            ..plain()
        };
        let res = nesterov_solve(&data, &cfg, None).unwrap();
        let err = crate::linalg::frobenius_sq(&(res.rho_hat.matrix() - ket0().matrix()));
        assert!(err <= 1e-6, "mse {err}");
    }
}
