//! Discrete phase space of an odd-dimensional system: density matrices,
//! Wigner grids over `Z_d × Z_d`, the forward/inverse Wigner transform and
//! the CSV grid format.
//!
//! Grid convention: `values[(m, mu)]` with `m` the number label (row) and
//! `mu` the quantized phase label (column). The raster vectorization used by
//! the measurement and sparsifying operators is `index = m·d + mu`.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{cis, modulus, Real};

/// Hilbert-space dimension; always odd and at least 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dimension(usize);

impl Dimension {
    pub fn new(d: usize) -> Result<Self> {
        if d < 3 || d % 2 == 0 {
            return Err(Error::InvalidDimension(d));
        }
        Ok(Dimension(d))
    }

    pub fn get(self) -> usize {
        self.0
    }

    pub fn grid_len(self) -> usize {
        self.0 * self.0
    }

    pub fn is_prime(self) -> bool {
        let d = self.0;
        (3..).step_by(2).take_while(|f| f * f <= d).all(|f| d % f != 0)
    }

    pub fn require_prime(self) -> Result<Self> {
        if self.is_prime() {
            Ok(self)
        } else {
            Err(Error::NotPrime(self.0))
        }
    }

    /// Multiplicative inverse of 2 modulo d.
    pub fn inv2(self) -> usize {
        (self.0 + 1) / 2
    }
}

/// Hermitian, unit-trace operator on `C^d` in the Fock/spin basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Real> {
    dim: Dimension,
    entries: DMatrix<Complex<T>>,
}

impl<T: Real> DensityMatrix<T> {
    /// Checks shape, Hermiticity (1e-12) and unit trace (1e-12). Positivity
    /// is left to [`DensityMatrix::validate_psd`].
    pub fn new(dim: Dimension, entries: DMatrix<Complex<T>>) -> Result<Self> {
        let d = dim.get();
        if entries.nrows() != d || entries.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: entries.nrows().max(entries.ncols()),
            });
        }
        let mut dev = T::zero();
        for a in 0..d {
            for b in 0..d {
                dev = dev.max(modulus(entries[(a, b)] - entries[(b, a)].conj()));
            }
        }
        if dev > T::tol(1e-12) {
            return Err(Error::NotHermitian(dev.as_f64()));
        }
        let trace = entries.diagonal().iter().fold(T::zero(), |acc, z| acc + z.re);
        if (trace - T::one()).abs() > T::tol(1e-12) {
            return Err(Error::NotUnitTrace(trace.as_f64()));
        }
        Ok(DensityMatrix { dim, entries })
    }

    /// Projector onto `psi`, normalized.
    pub fn from_pure(dim: Dimension, psi: &DVector<Complex<T>>) -> Result<Self> {
        let norm = psi.iter().fold(T::zero(), |acc, z| acc + z.re * z.re + z.im * z.im).sqrt();
        if norm == T::zero() {
            return Err(Error::InvalidParameter("zero state vector".into()));
        }
        let psi = psi.unscale(norm);
        let rho = &psi * psi.adjoint();
        Self::new(dim, hermitize(rho))
    }

    pub fn maximally_mixed(dim: Dimension) -> Self {
        let d = dim.get();
        let entries = DMatrix::from_diagonal_element(d, d, Complex::from(T::one() / T::of(d)));
        DensityMatrix { dim, entries }
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn entries(&self) -> &DMatrix<Complex<T>> {
        &self.entries
    }

    pub fn get(&self, a: usize, b: usize) -> Complex<T> {
        self.entries[(a, b)]
    }

    pub fn populations(&self) -> Vec<T> {
        self.entries.diagonal().iter().map(|z| z.re).collect()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<T> {
        let eig = self.entries.clone().symmetric_eigen();
        let mut ev: Vec<T> = eig.eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalue"));
        ev
    }

    /// Fails if the smallest eigenvalue is below -1e-10.
    pub fn validate_psd(&self) -> Result<()> {
        let min = self.eigenvalues()[0];
        if min < -T::tol(1e-10) {
            Err(Error::NotPositive(min.as_f64()))
        } else {
            Ok(())
        }
    }

    /// `tr(ρ²)`.
    pub fn purity(&self) -> T {
        self.entries.iter().fold(T::zero(), |acc, z| acc + z.re * z.re + z.im * z.im)
    }

    /// `λ ρ + (1 − λ) σ`.
    pub fn mix(&self, other: &Self, lambda: T) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim.get(),
                actual: other.dim.get(),
            });
        }
        let l = Complex::from(lambda);
        let r = Complex::from(T::one() - lambda);
        Self::new(self.dim, self.entries.map(|z| z * l) + other.entries.map(|z| z * r))
    }
}

/// Averages `m` with its adjoint to remove rounding-level anti-Hermitian parts.
pub(crate) fn hermitize<T: Real>(m: DMatrix<Complex<T>>) -> DMatrix<Complex<T>> {
    let half = Complex::from(T::lit(0.5));
    (&m + m.adjoint()).map(|z| z * half)
}

/// Real quasi-probability grid `W(m, mu)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteWigner<T: Real> {
    dim: Dimension,
    values: DMatrix<T>,
}

impl<T: Real> DiscreteWigner<T> {
    pub fn new(dim: Dimension, values: DMatrix<T>) -> Result<Self> {
        let d = dim.get();
        if values.nrows() != d || values.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: values.nrows().max(values.ncols()),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("non-finite Wigner value".into()));
        }
        Ok(DiscreteWigner { dim, values })
    }

    /// Builds a grid from its raster vector (`index = m·d + mu`).
    pub fn from_raster(dim: Dimension, raster: &[T]) -> Result<Self> {
        let d = dim.get();
        if raster.len() != d * d {
            return Err(Error::DimensionMismatch {
                expected: d * d,
                actual: raster.len(),
            });
        }
        Self::new(dim, DMatrix::from_row_slice(d, d, raster))
    }

    pub fn raster(&self) -> DVector<T> {
        let d = self.dim.get();
        DVector::from_fn(d * d, |i, _| self.values[(i / d, i % d)])
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn values(&self) -> &DMatrix<T> {
        &self.values
    }

    pub fn get(&self, m: usize, mu: usize) -> T {
        self.values[(m, mu)]
    }

    pub fn total(&self) -> T {
        self.values.iter().fold(T::zero(), |acc, &v| acc + v)
    }

    pub fn scaled(&self, c: T) -> Self {
        DiscreteWigner {
            dim: self.dim,
            values: self.values.map(|v| v * c),
        }
    }

    /// CSV text: the dimension on the first line, then one line per `m`
    /// holding the `d` values over `mu` with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let d = self.dim.get();
        let mut out = format!("{d}\n");
        for m in 0..d {
            for mu in 0..d {
                if mu > 0 {
                    out.push(',');
                }
                write!(out, "{:.16e}", self.values[(m, mu)]).expect("write to string");
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty grid file".into()))?;
        let d: usize = header
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad dimension line {header:?}")))?;
        let dim = Dimension::new(d)?;
        let mut raster = Vec::with_capacity(d * d);
        for (m, line) in lines.enumerate() {
            let row: Vec<&str> = line.split(',').collect();
            if row.len() != d {
                return Err(Error::Parse(format!("row {m} has {} values, expected {d}", row.len())));
            }
            for field in row {
                let v: f64 = field
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad value {field:?} in row {m}")))?;
                raster.push(T::lit(v));
            }
        }
        if raster.len() != d * d {
            return Err(Error::Parse(format!("expected {d} rows, got {}", raster.len() / d)));
        }
        Self::from_raster(dim, &raster)
    }
}

/// Forward transform:
/// `W(m, mu) = (1/d) Σ_n exp(−4πi·mu·n/d) ρ[(m−n) mod d][(m+n) mod d]`.
///
/// The complex sum is formed in full and its imaginary part must stay below
/// 1e-12 before it is dropped.
pub fn wigner_from_density<T: Real>(rho: &DensityMatrix<T>) -> Result<DiscreteWigner<T>> {
    let dim = rho.dim();
    let d = dim.get();
    let kernel = phase_table::<T>(d, -T::one());
    let inv_d = T::one() / T::of(d);
    let mut values = DMatrix::zeros(d, d);
    let mut residue = T::zero();
    for m in 0..d {
        for mu in 0..d {
            let mut acc = Complex::from(T::zero());
            for n in 0..d {
                let a = (m + d - n) % d;
                let b = (m + n) % d;
                acc += kernel[(2 * mu * n) % d] * rho.get(a, b);
            }
            residue = residue.max(acc.im.abs() * inv_d);
            values[(m, mu)] = acc.re * inv_d;
        }
    }
    let tolerance = T::tol(1e-12);
    if residue > tolerance {
        return Err(Error::ImaginaryResidue {
            residue: residue.as_f64(),
            tolerance: tolerance.as_f64(),
        });
    }
    DiscreteWigner::new(dim, values)
}

/// Inverse transform: for each `(a, b)`, `m = (a+b)/2`, `n = m − a` (mod d)
/// and `ρ_ab = Σ_mu exp(+4πi·mu·n/d) W(m, mu)`.
///
/// The result is Hermitian for any real grid; it has unit trace only when the
/// grid sums to one, and positivity is not checked.
pub fn density_from_wigner<T: Real>(w: &DiscreteWigner<T>) -> Result<DensityMatrix<T>> {
    let dim = w.dim();
    let d = dim.get();
    let kernel = phase_table::<T>(d, T::one());
    let inv2 = dim.inv2();
    let mut entries = DMatrix::zeros(d, d);
    for a in 0..d {
        for b in 0..d {
            let m = ((a + b) * inv2) % d;
            let n = (m + d - a) % d;
            let mut acc = Complex::from(T::zero());
            for mu in 0..d {
                acc += kernel[(2 * mu * n) % d] * w.get(m, mu);
            }
            entries[(a, b)] = acc;
        }
    }
    DensityMatrix::new(dim, hermitize(entries))
}

/// `p[m] = Σ_mu W(m, mu)`.
pub fn number_marginal<T: Real>(w: &DiscreteWigner<T>) -> Vec<T> {
    w.values()
        .row_iter()
        .map(|row| row.iter().fold(T::zero(), |acc, &v| acc + v))
        .collect()
}

/// `exp(sign·2πi·j/d)` for `j ∈ 0..d`; the Wigner kernel is `table[(2·mu·n) mod d]`.
fn phase_table<T: Real>(d: usize, sign: T) -> Vec<Complex<T>> {
    let step = T::TAU() / T::of(d);
    (0..d).map(|j| cis(sign * step * T::of(j))).collect()
}
