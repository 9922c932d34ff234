//! Grid error metrics and the file emitters: binary PGM images and the
//! TOML experiment report.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase_space::{Dimension, DiscreteWigner};
use crate::rng;
use crate::scalar::Real;
use crate::solver::ReconstructionReport;
use crate::tomography::{SamplingMode, SensingPlan};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridMetrics<T: Real> {
    /// `‖Ŵ − W‖₂ / ‖W‖₂`.
    pub relative_l2: T,
    /// `‖Ŵ − W‖∞`.
    pub max_abs: T,
    /// Jaccard overlap of the supports `{|v| > 1e-6·max|W|}`.
    pub support_jaccard: T,
}

/// Support threshold relative to the largest magnitude of the reference grid.
pub const SUPPORT_THRESHOLD: f64 = 1e-6;

pub fn compare<T: Real>(truth: &DiscreteWigner<T>, estimate: &DiscreteWigner<T>) -> Result<GridMetrics<T>> {
    if truth.dim() != estimate.dim() {
        return Err(Error::DimensionMismatch {
            expected: truth.dim().get(),
            actual: estimate.dim().get(),
        });
    }
    let diff = estimate.values() - truth.values();
    let truth_norm = truth.values().norm();
    let diff_norm = diff.norm();
    let relative_l2 = if diff_norm == T::zero() {
        T::zero()
    } else {
        diff_norm / truth_norm
    };
    let cutoff = T::lit(SUPPORT_THRESHOLD) * truth.values().amax();
    let mut inter = 0usize;
    let mut union = 0usize;
    for (a, b) in truth.values().iter().zip(estimate.values().iter()) {
        let (ia, ib) = (a.abs() > cutoff, b.abs() > cutoff);
        inter += usize::from(ia && ib);
        union += usize::from(ia || ib);
    }
    let support_jaccard = if union == 0 {
        T::one()
    } else {
        T::of(inter) / T::of(union)
    };
    Ok(GridMetrics {
        relative_l2,
        max_abs: diff.amax(),
        support_jaccard,
    })
}

/// Binary 8-bit PGM (P5): row `m`, column `mu`, the maximum black and the
/// minimum white; a constant grid is mid-gray.
pub fn pgm_bytes<T: Real>(w: &DiscreteWigner<T>) -> Vec<u8> {
    let d = w.dim().get();
    let max = w.values().max();
    let min = w.values().min();
    let mut out = format!("P5\n{d} {d}\n255\n").into_bytes();
    for m in 0..d {
        for mu in 0..d {
            let px = if max == min {
                128
            } else {
                let level = T::lit(255.0) * (max - w.get(m, mu)) / (max - min);
                level.round().as_f64().clamp(0.0, 255.0) as u8
            };
            out.push(px);
        }
    }
    out
}

pub fn emit_pgm<T: Real>(w: &DiscreteWigner<T>, path: &Path) -> Result<()> {
    write_file(path, &pgm_bytes(w))
}

pub fn emit_csv<T: Real>(w: &DiscreteWigner<T>, path: &Path) -> Result<()> {
    write_file(path, w.to_csv().as_bytes())
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

pub fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Parameters of the source state, as recorded in reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateDescription {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phase: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source_file: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ReportFile {
    format: String,
    d: usize,
    rng: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    state: Option<StateDescription>,
    plan: PlanSection,
    basis: BasisSection,
    solver: SolverSection,
    result: ResultSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    metrics: Option<MetricsSection>,
}

#[derive(Debug, Serialize, Deserialize)]
struct PlanSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    mode: Option<String>,
    count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    rows: Vec<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
struct BasisSection {
    kind: String,
    ordering: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct SolverSection {
    algorithm: String,
    mu_threshold: f64,
    delta_step: f64,
    max_iters: usize,
    residual_tol: f64,
    kicking: bool,
}

#[derive(Debug, Serialize, Deserialize)]
struct ResultSection {
    status: String,
    iterations: usize,
    relative_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsSection {
    pub relative_l2: f64,
    pub max_abs: f64,
    pub support_jaccard: f64,
}

impl<T: Real> From<&GridMetrics<T>> for MetricsSection {
    fn from(m: &GridMetrics<T>) -> Self {
        MetricsSection {
            relative_l2: m.relative_l2.as_f64(),
            max_abs: m.max_abs.as_f64(),
            support_jaccard: m.support_jaccard.as_f64(),
        }
    }
}

pub const REPORT_FORMAT: &str = "wigner-cs-report/1";

pub fn report_to_string<T: Real>(report: &ReconstructionReport<T>, state: Option<&StateDescription>) -> Result<String> {
    let file = ReportFile {
        format: REPORT_FORMAT.into(),
        d: report.w_hat.dim().get(),
        rng: rng::ALGORITHM.into(),
        state: state.cloned(),
        plan: PlanSection {
            mode: report.plan.map(|p| p.mode.to_string()),
            count: report.row_indices.len(),
            seed: report.plan.map(|p| p.seed),
            rows: report.row_indices.clone(),
        },
        basis: BasisSection {
            kind: report.basis.to_string(),
            ordering: "raster m*d+mu".into(),
        },
        solver: SolverSection {
            algorithm: "linearized-bregman".into(),
            mu_threshold: report.config.mu_threshold.as_f64(),
            delta_step: report.config.delta_step.as_f64(),
            max_iters: report.config.max_iters,
            residual_tol: report.config.residual_tol.as_f64(),
            kicking: report.config.kicking,
        },
        result: ResultSection {
            status: report.status.to_string(),
            iterations: report.iterations,
            relative_residual: report.relative_residual.as_f64(),
        },
        metrics: report.metrics.as_ref().map(MetricsSection::from),
    };
    toml::to_string(&file).map_err(|e| Error::Parse(e.to_string()))
}

pub fn emit_report<T: Real>(
    report: &ReconstructionReport<T>,
    state: Option<&StateDescription>,
    path: &Path,
) -> Result<()> {
    write_file(path, report_to_string(report, state)?.as_bytes())
}

/// Recovers the sensing plan from a report, re-deriving the rows from the
/// seed and checking them against the recorded list.
pub fn load_plan_from_report(text: &str) -> Result<(SensingPlan, Dimension, Vec<usize>)> {
    let file: ReportFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let dim = Dimension::new(file.d)?;
    let (mode, seed) = match (file.plan.mode, file.plan.seed) {
        (Some(mode), Some(seed)) => (mode.parse::<SamplingMode>()?, seed),
        _ => return Err(Error::Parse("report has no seeded plan".into())),
    };
    let plan = SensingPlan {
        mode,
        count: file.plan.count,
        seed,
    };
    if plan.select(dim)? != file.plan.rows {
        return Err(Error::Parse("report rows do not match its plan seed".into()));
    }
    Ok((plan, dim, file.plan.rows))
}

pub fn metrics_to_string<T: Real>(metrics: &GridMetrics<T>) -> Result<String> {
    #[derive(Serialize)]
    struct Wrapper {
        metrics: MetricsSection,
    }
    toml::to_string(&Wrapper {
        metrics: metrics.into(),
    })
    .map_err(|e| Error::Parse(e.to_string()))
}
