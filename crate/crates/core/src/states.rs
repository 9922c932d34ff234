//! Reference states: Fock states, finite-dimensional coherent states, random
//! mixed states, and the closed-form Wigner function of the finite coherent
//! state built from probabilists' Hermite polynomials and their roots.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::phase_space::{hermitize, DensityMatrix, Dimension, DiscreteWigner};
use crate::rng::{self, Stream};
use crate::scalar::{cis, Real};

/// `||α| e^{iφ}⟩_s` with `s = d − 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentStateParams<T: Real> {
    pub dim: Dimension,
    pub amplitude: T,
    /// Reduced into `[0, 2π)` on construction.
    pub phase: T,
}

impl<T: Real> CoherentStateParams<T> {
    pub fn new(dim: Dimension, amplitude: T, phase: T) -> Result<Self> {
        if !amplitude.is_finite() || amplitude < T::zero() {
            return Err(Error::InvalidParameter(format!(
                "coherent amplitude must be finite and non-negative, got {amplitude}"
            )));
        }
        if !phase.is_finite() {
            return Err(Error::InvalidParameter(format!("phase must be finite, got {phase}")));
        }
        let tau = T::TAU();
        let mut phase = phase % tau;
        if phase < T::zero() {
            phase += tau;
        }
        if phase >= tau {
            phase = T::zero();
        }
        Ok(CoherentStateParams {
            dim,
            amplitude,
            phase,
        })
    }

    /// Top Fock level `s = d − 1`.
    pub fn top_level(&self) -> usize {
        self.dim.get() - 1
    }
}

/// Probabilists' Hermite polynomial by the three-term recurrence
/// `He_{n+1} = x He_n − n He_{n−1}`.
pub fn hermite_he<T: Real>(n: usize, x: T) -> T {
    hermite_pair(n, x).1
}

/// `(He_{n−1}(x), He_n(x))`, with `He_{−1} = 0`.
fn hermite_pair<T: Real>(n: usize, x: T) -> (T, T) {
    let (mut prev, mut cur) = (T::zero(), T::one());
    for j in 0..n {
        let next = x * cur - T::of(j) * prev;
        prev = cur;
        cur = next;
    }
    (prev, cur)
}

/// Newton correction `|He_n(x) / He_n'(x)|` relative to `max(1, |x|)`: the
/// scale-free distance from `x` to the nearest root, used to check roots.
pub fn hermite_relative_residual<T: Real>(n: usize, x: T) -> T {
    if n == 0 {
        return T::one();
    }
    let (prev, value) = hermite_pair(n, x);
    let slope = T::of(n) * prev;
    if slope == T::zero() {
        return value.abs();
    }
    (value / slope).abs() / x.abs().max(T::one())
}

/// Zeros of `He_order`, ascending: the eigenvalues of the symmetric
/// tridiagonal Jacobi matrix with zero diagonal and off-diagonal `√1 … √(order−1)`.
pub fn hermite_roots<T: Real>(order: usize) -> Result<Vec<T>> {
    if order == 0 {
        return Err(Error::InvalidParameter("Hermite order must be >= 1".into()));
    }
    let mut jacobi = DMatrix::<T>::zeros(order, order);
    for i in 1..order {
        let b = T::of(i).sqrt();
        jacobi[(i - 1, i)] = b;
        jacobi[(i, i - 1)] = b;
    }
    let mut roots: Vec<T> = jacobi.symmetric_eigenvalues().iter().copied().collect();
    roots.sort_by(|a, b| a.partial_cmp(b).expect("finite root"));
    Ok(roots)
}

fn ln_factorial<T: Real>(n: usize) -> T {
    (2..=n).fold(T::zero(), |acc, i| acc + T::of(i).ln())
}

/// Hermite roots of order `s + 1` and `He_j` at each root for `j ∈ 0..=s+1`,
/// stored as sign and natural log of the magnitude.
#[derive(Debug, Clone)]
pub struct HermiteBasis<T: Real> {
    order: usize,
    roots: Vec<T>,
    log_abs: Vec<Vec<T>>,
    sign: Vec<Vec<T>>,
}

impl<T: Real> HermiteBasis<T> {
    pub fn new(order: usize) -> Result<Self> {
        let roots = hermite_roots::<T>(order)?;
        let mut log_abs = vec![vec![T::zero(); order]; order + 1];
        let mut sign = vec![vec![T::one(); order]; order + 1];
        for (k, &x) in roots.iter().enumerate() {
            let (mut prev, mut cur) = (T::zero(), T::one());
            for j in 0..=order {
                if j > 0 {
                    let next = x * cur - T::of(j - 1) * prev;
                    prev = cur;
                    cur = next;
                }
                log_abs[j][k] = cur.abs().ln();
                sign[j][k] = if cur < T::zero() { -T::one() } else { T::one() };
            }
        }
        Ok(HermiteBasis {
            order,
            roots,
            log_abs,
            sign,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn roots(&self) -> &[T] {
        &self.roots
    }

    /// `He_j(x_k)`; may overflow for large orders, use the log tables instead.
    pub fn value(&self, j: usize, k: usize) -> T {
        self.sign[j][k] * self.log_abs[j][k].exp()
    }
}

/// Kernel `G[η][k]` of the closed form for one value of `M`:
///
/// `G_{ηk} = (s!)²/(s+1)³ Σ_{p,q} exp[i(x_q − x_p)|α|] He_k(x_p) He_{M−k+η(s+1)}(x_q) / [He_s(x_p) He_s(x_q)]²`.
///
/// Entries whose second Hermite index falls outside `0..=s` are left at zero.
#[derive(Debug, Clone)]
pub struct GKernel<T: Real> {
    pub m_index: usize,
    pub values: [Vec<Complex<T>>; 2],
}

impl<T: Real> GKernel<T> {
    pub fn new(basis: &HermiteBasis<T>, amplitude: T, m_index: usize) -> Self {
        let s = basis.order() - 1;
        let x = basis.roots();
        let prefactor = T::lit(2.0) * ln_factorial::<T>(s) - T::lit(3.0) * T::of(s + 1).ln();
        let mut values = [vec![Complex::from(T::zero()); s + 1], vec![Complex::from(T::zero()); s + 1]];
        for (eta, table) in values.iter_mut().enumerate() {
            for (k, g) in table.iter_mut().enumerate() {
                let j = match (m_index + eta * (s + 1)).checked_sub(k) {
                    Some(j) if j <= s => j,
                    _ => continue,
                };
                let mut acc = Complex::from(T::zero());
                for p in 0..=s {
                    for q in 0..=s {
                        let ln_mag = prefactor + basis.log_abs[k][p] + basis.log_abs[j][q]
                            - T::lit(2.0) * (basis.log_abs[s][p] + basis.log_abs[s][q]);
                        let sign = basis.sign[k][p] * basis.sign[j][q];
                        acc += cis((x[q] - x[p]) * amplitude) * (sign * ln_mag.exp());
                    }
                }
                *g = acc;
            }
        }
        GKernel { m_index, values }
    }
}

/// Closed-form Wigner grid of the finite-dimensional coherent state.
///
/// For each grid point, `M = 2m mod d` and `θ = 2πμ/d + φ + π/2`:
///
/// `W(m, μ) = Σ_{k=M+1}^{s} e^{i(2k−M−s−1)θ} G_{1k} / [k!(M−k+s+1)!]^{1/2}
///          + Σ_{k=0}^{M}   e^{i(2k−M)θ}     G_{0k} / [k!(M−k)!]^{1/2}`.
///
/// The imaginary residue must stay below 1e-8.
pub fn coherent_wigner_closed_form<T: Real>(params: &CoherentStateParams<T>) -> Result<DiscreteWigner<T>> {
    let basis = HermiteBasis::new(params.dim.get())?;
    coherent_wigner_with_basis(params, &basis)
}

pub fn coherent_wigner_with_basis<T: Real>(
    params: &CoherentStateParams<T>,
    basis: &HermiteBasis<T>,
) -> Result<DiscreteWigner<T>> {
    let d = params.dim.get();
    if basis.order() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: basis.order(),
        });
    }
    let s = d - 1;
    let ln_fact: Vec<T> = (0..=s).map(ln_factorial::<T>).collect();
    let half = T::lit(0.5);
    let kernels: Vec<GKernel<T>> = (0..d).map(|m_index| GKernel::new(basis, params.amplitude, m_index)).collect();

    let mut values = DMatrix::zeros(d, d);
    let mut residue = T::zero();
    for m in 0..d {
        let big_m = (2 * m) % d;
        let g = &kernels[big_m];
        for mu in 0..d {
            let theta = T::TAU() * T::of(mu) / T::of(d) + params.phase + T::FRAC_PI_2();
            let mut acc = Complex::from(T::zero());
            for k in (big_m + 1)..=s {
                let j = big_m + s + 1 - k;
                let winding = T::of(2 * k) - T::of(big_m + s + 1);
                let weight = (-half * (ln_fact[k] + ln_fact[j])).exp();
                acc += cis(winding * theta) * g.values[1][k] * weight;
            }
            for k in 0..=big_m {
                let j = big_m - k;
                let winding = T::of(2 * k) - T::of(big_m);
                let weight = (-half * (ln_fact[k] + ln_fact[j])).exp();
                acc += cis(winding * theta) * g.values[0][k] * weight;
            }
            residue = residue.max(acc.im.abs());
            values[(m, mu)] = acc.re;
        }
    }
    let tolerance = T::tol(1e-8);
    if residue > tolerance {
        return Err(Error::ImaginaryResidue {
            residue: residue.as_f64(),
            tolerance: tolerance.as_f64(),
        });
    }
    DiscreteWigner::new(params.dim, values)
}

/// Truncated displacement `exp(α a_s† − α* a_s)|0⟩` as a projector.
///
/// The generator is anti-Hermitian, so `i·G` is Hermitian with eigenpairs
/// `(λ, V)` and `exp(G) = V diag(e^{−iλ}) V†`.
pub fn coherent_density<T: Real>(params: &CoherentStateParams<T>) -> Result<DensityMatrix<T>> {
    let d = params.dim.get();
    let alpha = cis(params.phase) * params.amplitude;
    let mut generator = DMatrix::<Complex<T>>::zeros(d, d);
    for n in 1..d {
        let root = T::of(n).sqrt();
        // a|n⟩ = √n |n−1⟩ and a†|n−1⟩ = √n |n⟩
        generator[(n, n - 1)] += alpha * root;
        generator[(n - 1, n)] -= alpha.conj() * root;
    }
    let hermitian = hermitize(generator.map(|z| z * Complex::i()));
    let eig = hermitian.symmetric_eigen();
    let v = &eig.eigenvectors;
    let psi = DVector::from_fn(d, |row, _| {
        (0..d).fold(Complex::from(T::zero()), |acc, j| {
            acc + v[(row, j)] * cis(-eig.eigenvalues[j]) * v[(0, j)].conj()
        })
    });
    DensityMatrix::from_pure(params.dim, &psi)
}

/// Infinite-dimensional coherent-state amplitudes `e^{−|α|²/2} αⁿ/√n!`
/// truncated to `d` levels and renormalized. Kept as a comparison state.
pub fn truncated_coherent_density<T: Real>(params: &CoherentStateParams<T>) -> Result<DensityMatrix<T>> {
    let d = params.dim.get();
    let alpha = cis(params.phase) * params.amplitude;
    let mut psi = DVector::from_element(d, Complex::from(T::one()));
    for n in 1..d {
        psi[n] = psi[n - 1] * alpha / T::of(n).sqrt();
    }
    DensityMatrix::from_pure(params.dim, &psi)
}

/// `|level⟩⟨level|`.
pub fn fock_density<T: Real>(dim: Dimension, level: usize) -> Result<DensityMatrix<T>> {
    let d = dim.get();
    if level >= d {
        return Err(Error::InvalidParameter(format!(
            "Fock level {level} out of range for d = {d}"
        )));
    }
    let mut entries = DMatrix::zeros(d, d);
    entries[(level, level)] = Complex::from(T::one());
    DensityMatrix::new(dim, entries)
}

/// `GG†/tr(GG†)` for a seeded `d × rank` complex Gaussian `G`.
pub fn random_density<T: Real>(dim: Dimension, seed: u64, rank: usize) -> Result<DensityMatrix<T>> {
    let d = dim.get();
    if rank == 0 || rank > d {
        return Err(Error::InvalidParameter(format!(
            "rank must be in 1..={d}, got {rank}"
        )));
    }
    let mut rng = rng::generator(seed, Stream::RandomState);
    let mut draw = || T::lit(StandardNormal.sample(&mut rng));
    let g = DMatrix::from_fn(d, rank, |_, _| {
        let re = draw();
        Complex::new(re, draw())
    });
    let gg = &g * g.adjoint();
    let trace = gg.diagonal().iter().fold(T::zero(), |acc, z| acc + z.re);
    let inv = Complex::from(T::one() / trace);
    DensityMatrix::new(dim, hermitize(gg.map(|z| z * inv)))
}
