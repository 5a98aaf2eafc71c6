use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qtomo::experiment::{
    count_report, prepare_row, render_report, run_experiment, write_report, ExperimentConfig,
};
use qtomo::metrics::{fidelity, mse};
use qtomo::sim::{Dataset, NoiseModel};
use qtomo::{
    nesterov_solve, DensityMatrix, MeasurementPlan, PlanMode, SolverConfig, StateKind, TomoError,
    TomographyData,
};

#[derive(Parser)]
#[command(
    name = "qtomo",
    version,
    about = "Pauli-measurement state tomography toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Full,
    Reduced,
    Minimal,
}

#[derive(Subcommand)]
enum Command {
    /// Print a measurement plan as a JSON array of settings.
    Plan {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "reduced")]
        mode: ModeArg,
        /// Include imaginary-part settings (reduced mode).
        #[arg(long)]
        phase: bool,
        /// Print the setting-count table for 1..=n instead.
        #[arg(long)]
        counts: bool,
    },
    /// Simulate a noisy preparation and emit a measurement dataset.
    Simulate {
        #[arg(long)]
        state: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "reduced_with_phase")]
        plan: String,
        /// Relative phase in radians applied to the target.
        #[arg(long)]
        phase: Option<f64>,
        #[arg(long, default_value_t = 8192)]
        shots: u64,
        /// Emit analytic frequencies instead of sampled ones.
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.002)]
        a: f64,
        #[arg(long, default_value_t = 0.005)]
        b: f64,
        #[arg(long, default_value_t = 0.01)]
        readout_flip: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reconstruct a density matrix from a dataset.
    Reconstruct {
        #[arg(long)]
        data: PathBuf,
        /// Solver config JSON (c1, c2, max_iter, obj_tol, mse_stop, step_rule, seed).
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an experiment config and write the CSV report.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare two density matrix files.
    Metrics {
        #[arg(long)]
        estimate: PathBuf,
        #[arg(long)]
        target: PathBuf,
    },
}

fn emit(text: &str, out: Option<&Path>) -> qtomo::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| TomoError::io(path, e)),
        None => {
            println!("{}", text.trim_end());
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

fn run(cli: Cli) -> qtomo::Result<()> {
    match cli.command {
        Command::Plan {
            n,
            mode,
            phase,
            counts,
        } => {
            if counts {
                return emit(&count_report(n)?, None);
            }
            let mode = match mode {
                ModeArg::Full => PlanMode::Full,
                ModeArg::Reduced if phase => PlanMode::ReducedWithPhase,
                ModeArg::Reduced => PlanMode::ReducedNoPhase,
                ModeArg::Minimal => PlanMode::MinimalXz,
            };
            emit(&MeasurementPlan::build(n, mode)?.to_json(), None)
        }
        Command::Simulate {
            state,
            n,
            plan,
            phase,
            shots,
            exact,
            seed,
            a,
            b,
            readout_flip,
            out,
        } => {
            let state: StateKind = state.parse()?;
            let plan: PlanMode = plan.parse()?;
            let noise = NoiseModel { a, b, readout_flip };
            noise.validate()?;
            if !exact && shots == 0 {
                return Err(TomoError::Input("shots must be at least 1".into()));
            }
            let prepared = prepare_row(state, phase, n, plan, &noise, shots, exact, seed)?;
            emit(&to_json(&prepared.dataset), out.as_deref())
        }
        Command::Reconstruct { data, config, out } => {
            let dataset = Dataset::read(&data)?;
            let cfg = match config {
                Some(path) => {
                    let text =
                        std::fs::read_to_string(&path).map_err(|e| TomoError::io(&path, e))?;
                    serde_json::from_str::<SolverConfig>(&text)
                        .map_err(|e| TomoError::Input(format!("{}: {e}", path.display())))?
                }
                None => SolverConfig::default(),
            };
            let data = TomographyData::from_records(&dataset.records)?;
            let result = nesterov_solve(&data, &cfg, None)?;
            emit(&to_json(&result.report()), out.as_deref())
        }
        Command::Experiment { config, out } => {
            let cfg = ExperimentConfig::read(&config)?;
            let rows = run_experiment(&cfg)?;
            for row in &rows {
                if let Some(err) = &row.error {
                    eprintln!("row n={} b={}: {err}", row.n, row.b);
                }
            }
            match out.or(cfg.output.clone()) {
                Some(path) => write_report(&rows, &path),
                None => emit(&render_report(&rows), None),
            }
        }
        Command::Metrics { estimate, target } => {
            let e = DensityMatrix::read(&estimate)?;
            let t = DensityMatrix::read(&target)?;
            #[derive(Serialize)]
            struct Metrics {
                mse: f64,
                fidelity: f64,
            }
            emit(
                &to_json(&Metrics {
                    mse: mse(&e, &t)?,
                    fidelity: fidelity(&e, &t)?,
                }),
                None,
            )
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
