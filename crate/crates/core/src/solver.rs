//! Sparse recovery: `min ‖x′‖₁ subject to y = Φ Ψ x′`, solved by linearized
//! Bregman iteration over a pixel or orthonormal cosine basis, plus the two
//! reference solvers used to check it (full-data least squares and a
//! brute-force ℓ1 search over small supports).

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::io_metrics::GridMetrics;
use crate::phase_space::DiscreteWigner;
use crate::rng::{self, Stream};
use crate::scalar::Real;
use crate::tomography::{MeasurementVector, SensingMatrix, SensingPlan};

/// Soft threshold `sign(x)·max(|x| − t, 0)`.
pub fn shrink<T: Real>(x: T, t: T) -> T {
    if x > t {
        x - t
    } else if x < -t {
        x + t
    } else {
        T::zero()
    }
}

pub fn shrink_vec<T: Real>(v: &DVector<T>, t: T) -> DVector<T> {
    v.map(|x| shrink(x, t))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    Pixel,
    Cosine,
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BasisKind::Pixel => "pixel",
            BasisKind::Cosine => "cosine",
        })
    }
}

impl FromStr for BasisKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pixel" => Ok(BasisKind::Pixel),
            "cosine" => Ok(BasisKind::Cosine),
            other => Err(Error::Parse(format!("unknown basis {other:?}"))),
        }
    }
}

/// Orthonormal sparsifying basis on raster-ordered vectors of length `n`.
///
/// `forward` maps a signal to its coefficients (identity, or the orthonormal
/// DCT-II); `synthesize` is its adjoint and inverse, the `Ψ` in `x = Ψx′`.
#[derive(Debug, Clone)]
pub struct SparseBasis<T: Real> {
    kind: BasisKind,
    n: usize,
    dct: Option<DMatrix<T>>,
}

impl<T: Real> SparseBasis<T> {
    pub fn new(kind: BasisKind, n: usize) -> Self {
        let dct = match kind {
            BasisKind::Pixel => None,
            BasisKind::Cosine => Some(dct2_matrix(n)),
        };
        SparseBasis { kind, n, dct }
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn forward(&self, x: &DVector<T>) -> DVector<T> {
        match &self.dct {
            None => x.clone(),
            Some(c) => c * x,
        }
    }

    pub fn synthesize(&self, coeffs: &DVector<T>) -> DVector<T> {
        match &self.dct {
            None => coeffs.clone(),
            Some(c) => c.tr_mul(coeffs),
        }
    }

    /// `Φ Ψ` for a sensing matrix `Φ`.
    pub fn compose(&self, phi: &DMatrix<T>) -> DMatrix<T> {
        match &self.dct {
            None => phi.clone(),
            Some(c) => phi * c.transpose(),
        }
    }
}

/// `C[k][j] = s_k cos(π(2j + 1)k / 2n)`, `s_0 = √(1/n)`, `s_k = √(2/n)`.
fn dct2_matrix<T: Real>(n: usize) -> DMatrix<T> {
    let nf = T::of(n);
    let s0 = (T::one() / nf).sqrt();
    let sk = (T::lit(2.0) / nf).sqrt();
    DMatrix::from_fn(n, n, |k, j| {
        let scale = if k == 0 { s0 } else { sk };
        // reduce the angle modulo 4n half-periods before the cosine
        let phase = ((2 * j + 1) * k) % (4 * n);
        scale * (T::PI() * T::of(phase) / (T::lit(2.0) * nf)).cos()
    })
}

/// Largest squared singular value of `a`, by power iteration on `AᵀA` from a
/// seeded start vector until the Rayleigh estimate changes by < 1e-6 relative.
pub fn spectral_norm_sq<T: Real>(a: &DMatrix<T>) -> Result<T> {
    const MAX_ITERS: usize = 10_000;
    if a.ncols() == 0 || a.amax() == T::zero() {
        return Err(Error::InvalidParameter("spectral norm of a zero matrix".into()));
    }
    let mut rng = rng::generator(0, Stream::PowerIteration);
    let mut v = DVector::from_fn(a.ncols(), |_, _| T::lit(StandardNormal.sample(&mut rng)));
    v.normalize_mut();
    let mut estimate = T::zero();
    for _ in 0..MAX_ITERS {
        let w = a.tr_mul(&(a * &v));
        let next = v.dot(&w);
        let norm = w.norm();
        if norm == T::zero() {
            // start vector in the null space; fall back to the flat vector
            v = DVector::from_element(a.ncols(), T::one()).normalize();
            continue;
        }
        v = w / norm;
        if (next - estimate).abs() <= T::tol(1e-6) * next {
            return Ok(norm.max(next));
        }
        estimate = next;
    }
    Err(Error::PowerIterationStalled(MAX_ITERS))
}

/// Parameters of the linearized Bregman iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BregmanConfig<T: Real> {
    /// Shrinkage level `μ`.
    pub mu_threshold: T,
    /// Step `δ`.
    pub delta_step: T,
    pub max_iters: usize,
    /// Stop once `‖y − Au‖ / ‖y‖` is at or below this.
    pub residual_tol: T,
    /// Skip stagnation phases by advancing the dual variable in one step.
    pub kicking: bool,
}

/// Multiplier on `‖Aᵀy‖∞` used for the automatic shrinkage level.
pub const AUTO_MU_FACTOR: f64 = 10.0;
/// Automatic step is this over the (margin-inflated) spectral norm squared.
pub const AUTO_STEP: f64 = 1.8;
pub const SPECTRAL_MARGIN: f64 = 1.01;
pub const DEFAULT_MAX_ITERS: usize = 20_000;
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-6;

impl<T: Real> BregmanConfig<T> {
    /// `δ = 1.8 / (1.01·‖A‖²)` and `μ = 10·‖Aᵀy‖∞`.
    pub fn auto(a: &DMatrix<T>, y: &DVector<T>) -> Result<Self> {
        let norm_sq = spectral_norm_sq(a)? * T::lit(SPECTRAL_MARGIN);
        let aty = a.tr_mul(y).amax();
        let mu = if aty > T::zero() { T::lit(AUTO_MU_FACTOR) * aty } else { T::one() };
        Ok(BregmanConfig {
            mu_threshold: mu,
            delta_step: T::lit(AUTO_STEP) / norm_sq,
            max_iters: DEFAULT_MAX_ITERS,
            residual_tol: T::lit(DEFAULT_RESIDUAL_TOL),
            kicking: true,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: T| v.is_finite() && v > T::zero();
        if !positive(self.mu_threshold) || !positive(self.delta_step) || !positive(self.residual_tol) {
            return Err(Error::InvalidParameter(
                "mu, delta and tolerance must be positive and finite".into(),
            ));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidParameter("max_iters must be positive".into()));
        }
        Ok(())
    }
}

/// Per-field overrides on top of [`BregmanConfig::auto`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BregmanSettings<T: Real> {
    pub mu_threshold: Option<T>,
    pub delta_step: Option<T>,
    pub max_iters: Option<usize>,
    pub residual_tol: Option<T>,
    pub kicking: bool,
}

impl<T: Real> Default for BregmanSettings<T> {
    fn default() -> Self {
        BregmanSettings {
            mu_threshold: None,
            delta_step: None,
            max_iters: None,
            residual_tol: None,
            kicking: true,
        }
    }
}

impl<T: Real> BregmanSettings<T> {
    pub fn resolve(&self, a: &DMatrix<T>, y: &DVector<T>) -> Result<BregmanConfig<T>> {
        let mut cfg = BregmanConfig::auto(a, y)?;
        if let Some(mu) = self.mu_threshold {
            cfg.mu_threshold = mu;
        }
        if let Some(delta) = self.delta_step {
            cfg.delta_step = delta;
        }
        if let Some(n) = self.max_iters {
            cfg.max_iters = n;
        }
        if let Some(tol) = self.residual_tol {
            cfg.residual_tol = tol;
        }
        cfg.kicking = self.kicking;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverStatus {
    Converged,
    MaxIters,
}

impl fmt::Display for SolverStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolverStatus::Converged => "converged",
            SolverStatus::MaxIters => "max-iters",
        })
    }
}

#[derive(Debug, Clone)]
pub struct BregmanOutcome<T: Real> {
    pub u: DVector<T>,
    pub iterations: usize,
    pub relative_residual: T,
    pub status: SolverStatus,
    /// Relative residual after each iteration.
    pub history: Vec<T>,
}

/// Linearized Bregman iteration:
/// `v ← v + Aᵀ(y − Au)`, `u ← δ·shrink(v, μ)`, from `u = v = 0`.
///
/// With `kicking`, an iteration that leaves `u` unchanged advances the
/// inactive part of `v` by the smallest multiple of the gradient that makes
/// one more entry cross the threshold.
pub fn linearized_bregman<T: Real>(
    a: &DMatrix<T>,
    y: &DVector<T>,
    cfg: &BregmanConfig<T>,
) -> Result<BregmanOutcome<T>> {
    cfg.validate()?;
    if a.nrows() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            actual: y.len(),
        });
    }
    let n = a.ncols();
    let y_norm = y.norm();
    if y_norm == T::zero() {
        return Ok(BregmanOutcome {
            u: DVector::zeros(n),
            iterations: 1,
            relative_residual: T::zero(),
            status: SolverStatus::Converged,
            history: vec![T::zero()],
        });
    }

    let mu = cfg.mu_threshold;
    let mut u = DVector::<T>::zeros(n);
    let mut v = DVector::<T>::zeros(n);
    let mut residual = y.clone();
    let mut stagnant = true;
    let mut history = Vec::new();
    let mut rel = T::one();

    for iter in 1..=cfg.max_iters {
        let mut g = a.tr_mul(&residual);
        if cfg.kicking && stagnant {
            if let Some(steps) = kick_steps(&u, &v, &g, mu) {
                for i in 0..n {
                    if u[i] == T::zero() {
                        g[i] *= steps;
                    }
                }
            }
        }
        v += &g;
        let next = shrink_vec(&v, mu) * cfg.delta_step;
        let change = (&next - &u).amax();
        stagnant = change <= T::tol(1e-14) * next.amax();
        u = next;
        residual = y - a * &u;
        rel = residual.norm() / y_norm;
        if !rel.is_finite() || u.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite(iter));
        }
        history.push(rel);
        if rel <= cfg.residual_tol {
            return Ok(BregmanOutcome {
                u,
                iterations: iter,
                relative_residual: rel,
                status: SolverStatus::Converged,
                history,
            });
        }
    }
    Ok(BregmanOutcome {
        u,
        iterations: cfg.max_iters,
        relative_residual: rel,
        status: SolverStatus::MaxIters,
        history,
    })
}

/// Number of gradient steps until the first inactive entry of `v` reaches
/// `±μ`, when that is more than one.
fn kick_steps<T: Real>(u: &DVector<T>, v: &DVector<T>, g: &DVector<T>, mu: T) -> Option<T> {
    let mut best: Option<T> = None;
    for i in 0..u.len() {
        if u[i] != T::zero() || g[i] == T::zero() {
            continue;
        }
        let target = if g[i] > T::zero() { mu } else { -mu };
        let steps = ((target - v[i]) / g[i]).ceil();
        best = Some(best.map_or(steps, |b| b.min(steps)));
    }
    best.filter(|&s| s > T::one())
}

/// Brute-force ℓ1 minimizer over supports of size `≤ k_max`.
///
/// Every support is solved by restricted least squares; candidates whose
/// residual is within `1e-9·‖y‖` are feasible and the smallest ℓ1 norm wins.
/// Ties go to the smaller support, then the lexicographically first one.
pub fn l1_oracle<T: Real>(a: &DMatrix<T>, y: &DVector<T>, k_max: usize) -> Result<DVector<T>> {
    let n = a.ncols();
    if n > 24 || k_max > 3 {
        return Err(Error::InvalidParameter(format!(
            "l1 oracle is limited to 24 columns and supports of 3, got {n} and {k_max}"
        )));
    }
    let feasible_tol = T::tol(1e-9) * y.norm();
    let mut best: Option<(T, DVector<T>)> = None;
    for k in 0..=k_max.min(n) {
        for support in (0..n).combinations(k) {
            let mut x = DVector::zeros(n);
            if k > 0 {
                let sub = a.select_columns(support.iter());
                let coeffs = sub
                    .svd(true, true)
                    .solve(y, T::default_epsilon())
                    .map_err(|e| Error::InvalidParameter(e.to_string()))?;
                for (&col, &c) in support.iter().zip(coeffs.iter()) {
                    x[col] = c;
                }
            }
            if (y - a * &x).norm() > feasible_tol {
                continue;
            }
            let l1 = x.lp_norm(1);
            let better = match &best {
                None => true,
                Some((b, _)) => l1 < *b - T::tol(1e-12) * b.max(T::one()),
            };
            if better {
                best = Some((l1, x));
            }
        }
    }
    best.map(|(_, x)| x).ok_or(Error::NoFeasibleSparseSolution(k_max))
}

#[derive(Debug, Clone)]
pub struct LeastSquares<T: Real> {
    pub x: DVector<T>,
    /// `‖y − Ax‖`.
    pub residual: T,
}

/// Minimum-residual solution of `Ax = y` via column-pivoted QR.
pub fn least_squares_baseline<T: Real>(a: &DMatrix<T>, y: &DVector<T>) -> Result<LeastSquares<T>> {
    let (m, n) = a.shape();
    if m != y.len() {
        return Err(Error::DimensionMismatch {
            expected: m,
            actual: y.len(),
        });
    }
    let qr = a.clone().col_piv_qr();
    let r = qr.r();
    let rank = qr_rank(&r, m.max(n));
    if rank < n {
        return Err(Error::RankDeficient { rank, cols: n });
    }
    let mut qty = y.clone();
    qr.q_tr_mul(&mut qty);
    let mut x = r
        .view((0, 0), (n, n))
        .solve_upper_triangular(&qty.rows(0, n))
        .ok_or(Error::RankDeficient { rank, cols: n })?;
    qr.p().inv_permute_rows(&mut x);
    let residual = (y - a * &x).norm();
    Ok(LeastSquares { x, residual })
}

fn qr_rank<T: Real>(r: &DMatrix<T>, size: usize) -> usize {
    let diag: Vec<T> = (0..r.nrows().min(r.ncols())).map(|i| r[(i, i)].abs()).collect();
    let Some(&lead) = diag.first() else { return 0 };
    let cutoff = lead * T::of(size) * T::default_epsilon();
    diag.iter().take_while(|&&v| v > cutoff).count()
}

/// Singular values above `σ_max · max(m, n) · ε`.
pub fn numerical_rank<T: Real>(a: &DMatrix<T>) -> usize {
    let sv = a.clone().svd(false, false).singular_values;
    let max = sv.amax();
    let cutoff = max * T::of(a.nrows().max(a.ncols())) * T::default_epsilon();
    sv.iter().filter(|&&s| s > cutoff).count()
}

/// Result of one sparse reconstruction, with everything needed to rerun it.
#[derive(Debug, Clone)]
pub struct ReconstructionReport<T: Real> {
    pub w_hat: DiscreteWigner<T>,
    pub coefficients: DVector<T>,
    pub iterations: usize,
    pub relative_residual: T,
    pub status: SolverStatus,
    pub plan: Option<SensingPlan>,
    pub row_indices: Vec<usize>,
    pub basis: BasisKind,
    pub config: BregmanConfig<T>,
    pub metrics: Option<GridMetrics<T>>,
}

/// Solves for the basis coefficients against `Υ = ΦΨ` and maps them back to
/// a grid.
pub fn reconstruct<T: Real>(
    y: &MeasurementVector<T>,
    rows: &SensingMatrix<T>,
    basis: &SparseBasis<T>,
    settings: &BregmanSettings<T>,
) -> Result<ReconstructionReport<T>> {
    let dim = rows.dim();
    if y.row_indices != rows.row_indices() {
        return Err(Error::InvalidParameter(
            "measurement rows do not match the sensing matrix".into(),
        ));
    }
    if basis.len() != dim.grid_len() {
        return Err(Error::DimensionMismatch {
            expected: dim.grid_len(),
            actual: basis.len(),
        });
    }
    let upsilon = basis.compose(rows.rows());
    let yv = y.as_vector();
    let config = settings.resolve(&upsilon, &yv)?;
    let outcome = linearized_bregman(&upsilon, &yv, &config)?;
    let raster = basis.synthesize(&outcome.u);
    let w_hat = DiscreteWigner::from_raster(dim, raster.as_slice())?;
    Ok(ReconstructionReport {
        w_hat,
        coefficients: outcome.u,
        iterations: outcome.iterations,
        relative_residual: outcome.relative_residual,
        status: outcome.status,
        plan: None,
        row_indices: rows.row_indices().to_vec(),
        basis: basis.kind(),
        config,
        metrics: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn shrink_examples() {
        assert_eq!(shrink(3.0, 1.0), 2.0);
        assert_eq!(shrink(-0.5, 1.0), 0.0);
        assert_eq!(shrink(-4.0, 1.5), -2.5);
    }

    proptest! {
        #[test]
        fn shrink_odd_and_nonexpansive(x in -1e3f64..1e3, y in -1e3f64..1e3, t in 1e-6f64..1e2) {
            prop_assert_eq!(shrink(-x, t), -shrink(x, t));
            prop_assert!((shrink(x, t) - shrink(y, t)).abs() <= (x - y).abs() + 1e-12);
        }

        #[test]
        fn bases_are_orthonormal(seed in 0u64..1000, cosine in any::<bool>()) {
            let kind = if cosine { BasisKind::Cosine } else { BasisKind::Pixel };
            let basis = SparseBasis::<f64>::new(kind, 49);
            let mut rng = rng::generator(seed, Stream::Synthetic);
            let x = DVector::from_fn(49, |_, _| -> f64 { StandardNormal.sample(&mut rng) });
            let back = basis.synthesize(&basis.forward(&x));
            prop_assert!((back - &x).amax() <= 1e-12);
            prop_assert!((basis.forward(&x).norm() - x.norm()).abs() <= 1e-12 * x.norm());
        }
    }

    #[test]
    fn dct_matches_definition() {
        // direct sum definition of the orthonormal DCT-II
        let n = 8;
        let x = DVector::from_fn(n, |i, _| (i as f64 * 0.7).sin() + 0.1 * i as f64);
        let got = SparseBasis::new(BasisKind::Cosine, n).forward(&x);
        for k in 0..n {
            let s = if k == 0 { (1.0 / n as f64).sqrt() } else { (2.0 / n as f64).sqrt() };
            let want: f64 = (0..n)
                .map(|j| x[j] * (std::f64::consts::PI * (2 * j + 1) as f64 * k as f64 / (2 * n) as f64).cos())
                .sum::<f64>()
                * s;
            assert_abs_diff_eq!(got[k], want, epsilon = 1e-13);
        }
        let full = SparseBasis::<f64>::new(BasisKind::Cosine, 361);
        let c = full.dct.as_ref().unwrap();
        assert!((c * c.transpose() - DMatrix::identity(361, 361)).amax() <= 1e-12);
    }

    #[test]
    fn spectral_norm_examples() {
        let eye = DMatrix::<f64>::identity(4, 4);
        assert_abs_diff_eq!(spectral_norm_sq(&eye).unwrap(), 1.0, epsilon = 1e-6);
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![3.0f64, 1.0]));
        assert_abs_diff_eq!(spectral_norm_sq(&d).unwrap(), 9.0, epsilon = 1e-5);
        assert!(spectral_norm_sq(&DMatrix::<f64>::zeros(2, 2)).is_err());
    }

    #[test]
    fn bregman_zero_data() {
        let a = DMatrix::<f64>::identity(4, 4);
        let y = DVector::zeros(4);
        let cfg = BregmanConfig::auto(&a, &y).unwrap();
        let out = linearized_bregman(&a, &y, &cfg).unwrap();
        assert_eq!(out.iterations, 1);
        assert!(out.u.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn bregman_decoupled_identity() {
        let a = DMatrix::<f64>::identity(4, 4);
        let y = DVector::from_vec(vec![5.0, 0.0, 0.0, 0.0]);
        for kicking in [false, true] {
            let cfg = BregmanConfig {
                mu_threshold: 1.0,
                delta_step: 1.0,
                max_iters: 1000,
                residual_tol: 1e-6,
                kicking,
            };
            let out = linearized_bregman(&a, &y, &cfg).unwrap();
            assert_eq!(out.status, SolverStatus::Converged);
            assert!(out.relative_residual <= 1e-6);
            assert!(out.u[0] != 0.0 && out.u.rows(1, 3).iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn bregman_reports_divergence() {
        let a = DMatrix::<f64>::identity(2, 2) * 1e150;
        let y = DVector::from_vec(vec![1e150, 0.0]);
        let cfg = BregmanConfig {
            mu_threshold: 1e-300,
            delta_step: 1e10,
            max_iters: 100,
            residual_tol: 1e-12,
            kicking: false,
        };
        assert!(matches!(linearized_bregman(&a, &y, &cfg), Err(Error::NonFinite(_))));
    }

    #[test]
    fn config_validation() {
        let bad = BregmanConfig { mu_threshold: -1.0, delta_step: 1.0, max_iters: 5, residual_tol: 1e-6, kicking: true };
        assert!(bad.validate().is_err());
        let bad = BregmanConfig { max_iters: 0, mu_threshold: 1.0, ..bad };
        assert!(bad.validate().is_err());
    }

    fn gaussian(rows: usize, cols: usize, seed: u64) -> DMatrix<f64> {
        let mut rng = rng::generator(seed, Stream::Synthetic);
        let scale = 1.0 / (rows as f64).sqrt();
        DMatrix::from_fn(rows, cols, |_, _| {
            let z: f64 = StandardNormal.sample(&mut rng);
            scale * z
        })
    }

    #[test]
    fn oracle_examples() {
        let a = DMatrix::<f64>::identity(3, 3);
        let y = DVector::from_vec(vec![0.0, 2.0, 0.0]);
        assert!((l1_oracle(&a, &y, 3).unwrap() - &y).amax() <= 1e-14);
        let z = l1_oracle(&a, &DVector::zeros(3), 2).unwrap();
        assert!(z.iter().all(|&v| v == 0.0));
        let y = DVector::from_vec(vec![1.0, 2.0, 3.0]);
        assert!(matches!(l1_oracle(&a, &y, 2), Err(Error::NoFeasibleSparseSolution(2))));
        assert!(l1_oracle(&DMatrix::<f64>::zeros(3, 25), &DVector::zeros(3), 1).is_err());
    }

    #[test]
    fn oracle_recovers_planted_8x12() {
        let a = gaussian(8, 12, 41);
        let mut x = DVector::zeros(12);
        x[2] = 1.3;
        x[9] = -0.8;
        let got = l1_oracle(&a, &(&a * &x), 2).unwrap();
        assert!((got - x).amax() <= 1e-10);
    }

    #[test]
    fn bregman_matches_oracle_20x40() {
        let a = gaussian(20, 40, 5);
        let mut x = DVector::zeros(40);
        x[3] = 1.0;
        x[17] = -2.0;
        x[31] = 0.7;
        let y = &a * &x;
        let mut cfg = BregmanConfig::auto(&a, &y).unwrap();
        cfg.residual_tol = 1e-10;
        cfg.max_iters = 200_000;
        let out = linearized_bregman(&a, &y, &cfg).unwrap();
        assert_eq!(out.status, SolverStatus::Converged);
        let support: Vec<usize> = (0..40).filter(|&i| out.u[i].abs() > 1e-6).collect();
        assert_eq!(support, vec![3, 17, 31]);
        assert!((&out.u - &x).amax() <= 1e-4);
    }

    #[test]
    fn least_squares_examples() {
        let a = DMatrix::<f64>::identity(5, 5);
        let y = DVector::from_fn(5, |i, _| i as f64 - 1.5);
        let ls = least_squares_baseline(&a, &y).unwrap();
        assert!((ls.x - &y).amax() <= 1e-15);
        let tall = gaussian(12, 5, 9);
        let x = DVector::from_fn(5, |i, _| (i as f64).cos());
        let ls = least_squares_baseline(&tall, &(&tall * &x)).unwrap();
        assert!((ls.x - x).amax() <= 1e-12);
        let mut def = tall.clone();
        let c0 = def.column(0).clone_owned();
        def.set_column(1, &c0);
        assert!(matches!(
            least_squares_baseline(&def, &DVector::zeros(12)),
            Err(Error::RankDeficient { rank: 4, cols: 5 })
        ));
    }

    #[test]
    fn rank() {
        assert_eq!(numerical_rank(&gaussian(6, 4, 1)), 4);
        let mut m = gaussian(6, 4, 1);
        let c = m.column(0) * 2.0;
        m.set_column(3, &c);
        assert_eq!(numerical_rank(&m), 3);
    }

    #[test]
    fn basis_kind_parse() {
        assert_eq!("cosine".parse::<BasisKind>().unwrap(), BasisKind::Cosine);
        assert!("wavelet".parse::<BasisKind>().is_err());
    }
}
