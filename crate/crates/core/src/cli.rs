//! Command-line front end.
//!
//! Exit codes: 0 success, 2 invalid arguments or data, 3 solver divergence,
//! 4 I/O failure. Every failure prints a single diagnostic line to stderr.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::io_metrics::{self, compare, emit_csv, emit_pgm, emit_report, read_file, write_file, StateDescription};
use crate::phase_space::{wigner_from_density, DensityMatrix, Dimension, DiscreteWigner};
use crate::solver::{reconstruct, BasisKind, BregmanSettings, ReconstructionReport, SparseBasis};
use crate::states::{coherent_wigner_closed_form, fock_density, random_density, CoherentStateParams};
use crate::tomography::{build_full_matrix, measure, MeasurementVector, SamplingMode, SensingMatrix, SensingPlan};

pub const FIG1_DIMENSION: usize = 19;
pub const FIG1_AMPLITUDE: f64 = 1.472;
pub const FIG1_ROWS: usize = 285;
pub const DEFAULT_SEED: u64 = 7;

#[derive(Debug, Parser)]
#[command(name = "wigner-cs", version, about = "Discrete Wigner function tomography with sparse recovery")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write the Wigner grid of a reference state as CSV and PGM.
    Generate {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, default_value = "truth.csv")]
        csv: PathBuf,
        #[arg(long, default_value = "truth.pgm")]
        pgm: PathBuf,
    },
    /// Draw a sensing plan and write the exact line probabilities.
    Measure {
        #[command(flatten)]
        state: StateArgs,
        /// Measure this grid instead of a generated state.
        #[arg(long)]
        wigner: Option<PathBuf>,
        #[command(flatten)]
        plan: PlanArgs,
        #[arg(long = "plan", default_value = "plan.txt")]
        plan_out: PathBuf,
        #[arg(long, default_value = "measurements.csv")]
        measurements: PathBuf,
    },
    /// Recover a grid, either from plan and measurement files or end to end.
    Reconstruct {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        plan: PlanArgs,
        /// Plan file written by `measure`; requires --measurements-in.
        #[arg(long = "plan-in", requires = "measurements_in")]
        plan_in: Option<PathBuf>,
        #[arg(long = "measurements-in", requires = "plan_in")]
        measurements_in: Option<PathBuf>,
        /// Reference grid for metrics when reconstructing from files.
        #[arg(long)]
        truth: Option<PathBuf>,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, default_value = "report.toml")]
        report: PathBuf,
        #[arg(long, default_value = "recovered.csv")]
        csv: PathBuf,
        #[arg(long, default_value = "recovered.pgm")]
        pgm: PathBuf,
        #[arg(long)]
        metrics: Option<PathBuf>,
    },
    /// Compare two grid CSV files.
    Compare {
        #[arg(long)]
        truth: PathBuf,
        #[arg(long)]
        estimate: PathBuf,
        #[arg(long, default_value = "metrics.toml")]
        out: PathBuf,
    },
    /// d = 19 coherent state, |α| = 1.472, 285 random rows, pixel basis.
    #[command(name = "reproduce-fig1")]
    ReproduceFig1 {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 0.0)]
        phase: f64,
        #[arg(long = "out-dir", default_value = ".")]
        out_dir: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum StateKind {
    Coherent,
    Fock,
    Mixed,
    Random,
}

#[derive(Debug, Args)]
struct StateArgs {
    #[arg(long, default_value_t = FIG1_DIMENSION)]
    d: usize,
    #[arg(long, value_enum, default_value = "coherent")]
    state: StateKind,
    #[arg(long)]
    amplitude: Option<f64>,
    #[arg(long)]
    phase: Option<f64>,
    #[arg(long)]
    level: Option<usize>,
    /// Seeds both the random state and the row selection.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    rank: Option<usize>,
}

#[derive(Debug, Args)]
struct PlanArgs {
    #[arg(long, default_value = "row-random")]
    mode: SamplingMode,
    #[arg(long, default_value_t = FIG1_ROWS)]
    rows: usize,
}

#[derive(Debug, Args)]
struct SolverArgs {
    #[arg(long, default_value = "pixel")]
    basis: BasisKind,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long = "max-iters")]
    max_iters: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    /// Disable kicking in the Bregman iteration.
    #[arg(long = "no-kick")]
    no_kick: bool,
}

impl SolverArgs {
    fn settings(&self) -> BregmanSettings<f64> {
        BregmanSettings {
            mu_threshold: self.mu,
            delta_step: self.delta,
            max_iters: self.max_iters,
            residual_tol: self.tol,
            kicking: !self.no_kick,
        }
    }
}

impl StateArgs {
    fn validate(&self) -> Result<Dimension> {
        let dim = Dimension::new(self.d)?;
        let reject = |flag: &str| {
            Err(Error::InvalidParameter(format!(
                "--{flag} does not apply to --state {:?}",
                self.state
            )))
        };
        if self.state != StateKind::Coherent {
            if self.amplitude.is_some() {
                return reject("amplitude");
            }
            if self.phase.is_some() {
                return reject("phase");
            }
        }
        if self.state != StateKind::Fock && self.level.is_some() {
            return reject("level");
        }
        if self.state != StateKind::Random && self.rank.is_some() {
            return reject("rank");
        }
        Ok(dim)
    }

    fn describe(&self) -> StateDescription {
        let mut desc = StateDescription {
            kind: format!("{:?}", self.state).to_lowercase(),
            amplitude: None,
            phase: None,
            level: None,
            seed: None,
            rank: None,
            source_file: None,
        };
        match self.state {
            StateKind::Coherent => {
                desc.amplitude = Some(self.amplitude.unwrap_or(FIG1_AMPLITUDE));
                desc.phase = Some(self.phase.unwrap_or(0.0));
            }
            StateKind::Fock => desc.level = Some(self.level.unwrap_or(0)),
            StateKind::Mixed => {}
            StateKind::Random => {
                desc.seed = Some(self.seed);
                desc.rank = Some(self.rank.unwrap_or(self.d));
            }
        }
        desc
    }

    fn wigner(&self) -> Result<DiscreteWigner<f64>> {
        let dim = self.validate()?;
        match self.state {
            StateKind::Coherent => {
                let params = CoherentStateParams::new(
                    dim,
                    self.amplitude.unwrap_or(FIG1_AMPLITUDE),
                    self.phase.unwrap_or(0.0),
                )?;
                coherent_wigner_closed_form(&params)
            }
            StateKind::Fock => wigner_from_density(&fock_density(dim, self.level.unwrap_or(0))?),
            StateKind::Mixed => wigner_from_density(&DensityMatrix::maximally_mixed(dim)),
            StateKind::Random => {
                wigner_from_density(&random_density(dim, self.seed, self.rank.unwrap_or(self.d))?)
            }
        }
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, A>(args: I) -> i32
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let text = e.to_string();
            eprintln!("{}", text.lines().next().unwrap_or("invalid arguments"));
            return 2;
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NonFinite(_) => 3,
        Error::Io { .. } => 4,
        _ => 2,
    }
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Generate { state, csv, pgm } => {
            let w = state.wigner()?;
            emit_csv(&w, &csv)?;
            emit_pgm(&w, &pgm)
        }
        Command::Measure {
            state,
            wigner,
            plan,
            plan_out,
            measurements,
        } => {
            state.validate()?;
            let w = match wigner {
                Some(path) => DiscreteWigner::from_csv(&read_file(&path)?)?,
                None => state.wigner()?,
            };
            let plan = SensingPlan {
                mode: plan.mode,
                count: plan.rows,
                seed: state.seed,
            };
            let dim = w.dim();
            let full = build_full_matrix(dim)?;
            let rows = SensingMatrix::from_indices(&full, plan.select(dim)?)?;
            let y = measure(&w, &rows)?;
            write_file(&plan_out, plan.to_text(dim, rows.row_indices()).as_bytes())?;
            write_file(&measurements, y.to_csv().as_bytes())
        }
        Command::Reconstruct {
            state,
            plan,
            plan_in,
            measurements_in,
            truth,
            solver,
            report,
            csv,
            pgm,
            metrics,
        } => {
            let basis_kind = solver.basis;
            let settings = solver.settings();
            let (rep, desc) = match (plan_in, measurements_in) {
                (Some(plan_path), Some(meas_path)) => {
                    let (plan, dim, rows) = SensingPlan::from_text(&read_file(&plan_path)?)?;
                    let y = MeasurementVector::from_csv(&read_file(&meas_path)?)?;
                    let full = build_full_matrix(dim)?;
                    let sensing = SensingMatrix::from_indices(&full, rows)?;
                    let basis = SparseBasis::new(basis_kind, dim.grid_len());
                    let mut rep = reconstruct(&y, &sensing, &basis, &settings)?;
                    rep.plan = Some(plan);
                    if let Some(path) = truth {
                        let t = DiscreteWigner::from_csv(&read_file(&path)?)?;
                        rep.metrics = Some(compare(&t, &rep.w_hat)?);
                    }
                    let desc = StateDescription {
                        kind: "from-file".into(),
                        amplitude: None,
                        phase: None,
                        level: None,
                        seed: None,
                        rank: None,
                        source_file: Some(meas_path.display().to_string()),
                    };
                    (rep, desc)
                }
                _ => {
                    let w = state.wigner()?;
                    let plan = SensingPlan {
                        mode: plan.mode,
                        count: plan.rows,
                        seed: state.seed,
                    };
                    (end_to_end(&w, plan, basis_kind, &settings)?, state.describe())
                }
            };
            emit_report(&rep, Some(&desc), &report)?;
            emit_csv(&rep.w_hat, &csv)?;
            emit_pgm(&rep.w_hat, &pgm)?;
            if let (Some(path), Some(m)) = (metrics, rep.metrics.as_ref()) {
                write_file(&path, io_metrics::metrics_to_string(m)?.as_bytes())?;
            }
            Ok(())
        }
        Command::Compare { truth, estimate, out } => {
            let t = DiscreteWigner::<f64>::from_csv(&read_file(&truth)?)?;
            let e = DiscreteWigner::<f64>::from_csv(&read_file(&estimate)?)?;
            let m = compare(&t, &e)?;
            let text = io_metrics::metrics_to_string(&m)?;
            print!("{text}");
            write_file(&out, text.as_bytes())
        }
        Command::ReproduceFig1 {
            seed,
            phase,
            out_dir,
            solver,
        } => {
            let out = reproduce_fig1(seed, phase, &solver.settings(), solver.basis, &out_dir)?;
            let m = out.metrics.expect("metrics attached");
            println!(
                "rows={} iterations={} status={} relative_l2={:.6e} support_jaccard={:.4}",
                out.row_indices.len(),
                out.iterations,
                out.status,
                m.relative_l2,
                m.support_jaccard
            );
            Ok(())
        }
    }
}

/// Measures `truth` through `plan` and reconstructs it, attaching metrics.
pub fn end_to_end(
    truth: &DiscreteWigner<f64>,
    plan: SensingPlan,
    basis: BasisKind,
    settings: &BregmanSettings<f64>,
) -> Result<ReconstructionReport<f64>> {
    let dim = truth.dim();
    let full = build_full_matrix(dim)?;
    let rows = SensingMatrix::from_indices(&full, plan.select(dim)?)?;
    let y = measure(truth, &rows)?;
    let basis = SparseBasis::new(basis, dim.grid_len());
    let mut rep = reconstruct(&y, &rows, &basis, settings)?;
    rep.plan = Some(plan);
    rep.metrics = Some(compare(truth, &rep.w_hat)?);
    Ok(rep)
}

/// Writes `truth.{csv,pgm}`, `recovered.{csv,pgm}` and `report.toml` into `out_dir`.
pub fn reproduce_fig1(
    seed: u64,
    phase: f64,
    settings: &BregmanSettings<f64>,
    basis: BasisKind,
    out_dir: &Path,
) -> Result<ReconstructionReport<f64>> {
    let dim = Dimension::new(FIG1_DIMENSION)?;
    let params = CoherentStateParams::new(dim, FIG1_AMPLITUDE, phase)?;
    let truth = coherent_wigner_closed_form(&params)?;
    let plan = SensingPlan {
        mode: SamplingMode::RowRandom,
        count: FIG1_ROWS,
        seed,
    };
    let rep = end_to_end(&truth, plan, basis, settings)?;
    let desc = StateDescription {
        kind: "coherent".into(),
        amplitude: Some(FIG1_AMPLITUDE),
        phase: Some(params.phase),
        level: None,
        seed: None,
        rank: None,
        source_file: None,
    };
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    emit_csv(&truth, &out_dir.join("truth.csv"))?;
    emit_pgm(&truth, &out_dir.join("truth.pgm"))?;
    emit_csv(&rep.w_hat, &out_dir.join("recovered.csv"))?;
    emit_pgm(&rep.w_hat, &out_dir.join("recovered.pgm"))?;
    emit_report(&rep, Some(&desc), &out_dir.join("report.toml"))?;
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unknown_flags_and_bad_combinations() {
        assert_eq!(run(["wigner-cs", "generate", "--bogus"]), 2);
        assert_eq!(run(["wigner-cs", "generate", "--state", "fock", "--amplitude", "1"]), 2);
        assert_eq!(run(["wigner-cs", "generate", "--state", "mixed", "--rank", "2"]), 2);
        assert_eq!(run(["wigner-cs", "generate", "--d", "4"]), 2);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::NonFinite(3)), 3);
        assert_eq!(exit_code(&Error::io("x", std::io::Error::other("boom"))), 4);
        assert_eq!(exit_code(&Error::InvalidDimension(4)), 2);
    }
}
