//! Line geometry on the discrete phase space and the exact line-sum
//! measurement model.
//!
//! A sheared line `(τ, μ0)` holds the points `{(m, (μ0 − 2mτ) mod d)}`; a
//! vertical line `m0` holds `{(m0, μ)}`. The `d` sheared families plus the
//! vertical family give `(d + 1)·d` rows, ordered `(τ = 0..d, μ0 = 0..d)`
//! followed by `(m0 = 0..d)`. Columns follow the raster order `m·d + μ`.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::phase_space::{Dimension, DiscreteWigner};
use crate::rng::{self, Stream};
use crate::scalar::Real;

/// 1 iff `k ≡ 0 (mod a)`.
pub fn modular_kronecker(k: i64, a: u64) -> Result<u8> {
    if a == 0 {
        return Err(Error::InvalidParameter("modulus must be positive".into()));
    }
    Ok(u8::from(k.rem_euclid(a as i64) == 0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LineFamily {
    Sheared(usize),
    Vertical,
}

impl LineFamily {
    /// Position of the family in row order; vertical is last.
    pub fn index(self, dim: Dimension) -> usize {
        match self {
            LineFamily::Sheared(tau) => tau,
            LineFamily::Vertical => dim.get(),
        }
    }

    pub fn from_index(index: usize, dim: Dimension) -> Self {
        if index == dim.get() {
            LineFamily::Vertical
        } else {
            LineFamily::Sheared(index)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PhaseSpaceLine {
    pub family: LineFamily,
    /// `μ0` for sheared lines, `m0` for vertical ones.
    pub offset: usize,
}

impl PhaseSpaceLine {
    pub fn points(&self, dim: Dimension) -> Vec<(usize, usize)> {
        let d = dim.get();
        match self.family {
            LineFamily::Sheared(tau) => (0..d)
                .map(|m| (m, (self.offset + d * d - (2 * m * tau) % d) % d))
                .collect(),
            LineFamily::Vertical => (0..d).map(|mu| (self.offset, mu)).collect(),
        }
    }

    /// Row of this line in the full matrix.
    pub fn row_index(&self, dim: Dimension) -> usize {
        self.family.index(dim) * dim.get() + self.offset
    }

    pub fn from_row_index(row: usize, dim: Dimension) -> Self {
        let d = dim.get();
        PhaseSpaceLine {
            family: LineFamily::from_index(row / d, dim),
            offset: row % d,
        }
    }
}

impl fmt::Display for PhaseSpaceLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            LineFamily::Sheared(tau) => write!(f, "tau={tau},mu0={}", self.offset),
            LineFamily::Vertical => write!(f, "vertical,m0={}", self.offset),
        }
    }
}

/// All `(d + 1)·d` line indicators as a dense 0/1 matrix.
#[derive(Debug, Clone)]
pub struct MeasurementMatrix<T: Real> {
    dim: Dimension,
    rows: DMatrix<T>,
    labels: Vec<PhaseSpaceLine>,
}

/// Requires `d` prime; composite odd `d` does not give an informationally
/// complete line set.
pub fn build_full_matrix<T: Real>(dim: Dimension) -> Result<MeasurementMatrix<T>> {
    let dim = dim.require_prime()?;
    let d = dim.get();
    let labels: Vec<PhaseSpaceLine> = (0..(d + 1) * d)
        .map(|r| PhaseSpaceLine::from_row_index(r, dim))
        .collect();
    let mut rows = DMatrix::zeros(labels.len(), d * d);
    for (r, line) in labels.iter().enumerate() {
        for (m, mu) in line.points(dim) {
            rows[(r, m * d + mu)] = T::one();
        }
    }
    Ok(MeasurementMatrix { dim, rows, labels })
}

impl<T: Real> MeasurementMatrix<T> {
    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn rows(&self) -> &DMatrix<T> {
        &self.rows
    }

    pub fn labels(&self) -> &[PhaseSpaceLine] {
        &self.labels
    }

    pub fn row_count(&self) -> usize {
        self.labels.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplingMode {
    /// Distinct rows drawn uniformly.
    RowRandom,
    /// Whole families drawn uniformly; every kept family contributes all `d` rows.
    FamilyRandom,
}

impl fmt::Display for SamplingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SamplingMode::RowRandom => "row-random",
            SamplingMode::FamilyRandom => "family-random",
        })
    }
}

impl FromStr for SamplingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "row-random" => Ok(SamplingMode::RowRandom),
            "family-random" => Ok(SamplingMode::FamilyRandom),
            other => Err(Error::Parse(format!("unknown sampling mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SensingPlan {
    pub mode: SamplingMode,
    pub count: usize,
    pub seed: u64,
}

impl SensingPlan {
    pub fn validate(&self, dim: Dimension) -> Result<()> {
        let d = dim.get();
        let total = (d + 1) * d;
        if self.count == 0 || self.count > total {
            return Err(Error::InvalidParameter(format!(
                "row count must be in 1..={total}, got {}",
                self.count
            )));
        }
        if self.mode == SamplingMode::FamilyRandom && self.count % d != 0 {
            return Err(Error::InvalidParameter(format!(
                "family-random sampling needs a row count divisible by d = {d}, got {}",
                self.count
            )));
        }
        Ok(())
    }

    /// Selected row indices of the full matrix, ascending.
    pub fn select(&self, dim: Dimension) -> Result<Vec<usize>> {
        self.validate(dim)?;
        let d = dim.get();
        let total = (d + 1) * d;
        if self.count == total {
            return Ok((0..total).collect());
        }
        let mut rng = rng::generator(self.seed, Stream::RowSelection);
        let mut rows = match self.mode {
            SamplingMode::RowRandom => rng::shuffled_prefix(&mut rng, total, self.count),
            SamplingMode::FamilyRandom => rng::shuffled_prefix(&mut rng, d + 1, self.count / d)
                .into_iter()
                .flat_map(|family| family * d..(family + 1) * d)
                .collect(),
        };
        rows.sort_unstable();
        Ok(rows)
    }

    /// Plain-text plan file: `key=value` header lines followed by the
    /// ascending row-index list.
    pub fn to_text(&self, dim: Dimension, rows: &[usize]) -> String {
        let list: Vec<String> = rows.iter().map(usize::to_string).collect();
        format!(
            "# sensing plan\nmode={}\ncount={}\nseed={}\nd={}\nrng={}\nrows={}\n",
            self.mode,
            self.count,
            self.seed,
            dim.get(),
            rng::ALGORITHM,
            list.join(",")
        )
    }

    /// Parses a plan file and re-derives its rows, failing if the stored
    /// list disagrees with the seed.
    pub fn from_text(text: &str) -> Result<(Self, Dimension, Vec<usize>)> {
        let mut mode = None;
        let mut count = None;
        let mut seed = None;
        let mut d = None;
        let mut rows = None;
        for line in text.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("plan line without '=': {line:?}")))?;
            let bad = |what: &str| Error::Parse(format!("bad {what} in plan: {value:?}"));
            match key {
                "mode" => mode = Some(value.parse::<SamplingMode>()?),
                "count" => count = Some(value.parse::<usize>().map_err(|_| bad("count"))?),
                "seed" => seed = Some(value.parse::<u64>().map_err(|_| bad("seed"))?),
                "d" => d = Some(value.parse::<usize>().map_err(|_| bad("d"))?),
                "rng" => {
                    if value != rng::ALGORITHM {
                        return Err(Error::Parse(format!("plan was drawn with generator {value:?}")));
                    }
                }
                "rows" => {
                    rows = Some(
                        value
                            .split(',')
                            .filter(|s| !s.is_empty())
                            .map(|s| s.parse::<usize>().map_err(|_| bad("row index")))
                            .collect::<Result<Vec<_>>>()?,
                    )
                }
                _ => return Err(Error::Parse(format!("unknown plan key {key:?}"))),
            }
        }
        let missing = |k: &str| Error::Parse(format!("plan is missing {k}"));
        let plan = SensingPlan {
            mode: mode.ok_or_else(|| missing("mode"))?,
            count: count.ok_or_else(|| missing("count"))?,
            seed: seed.ok_or_else(|| missing("seed"))?,
        };
        let dim = Dimension::new(d.ok_or_else(|| missing("d"))?)?;
        let rows = rows.ok_or_else(|| missing("rows"))?;
        if plan.select(dim)? != rows {
            return Err(Error::Parse("plan rows do not match its seed".into()));
        }
        Ok((plan, dim, rows))
    }
}

/// Rows of the full matrix kept by a plan, in ascending index order.
#[derive(Debug, Clone)]
pub struct SensingMatrix<T: Real> {
    dim: Dimension,
    rows: DMatrix<T>,
    row_indices: Vec<usize>,
}

impl<T: Real> SensingMatrix<T> {
    pub fn from_indices(full: &MeasurementMatrix<T>, row_indices: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = row_indices.iter().find(|&&r| r >= full.row_count()) {
            return Err(Error::InvalidParameter(format!("row index {bad} out of range")));
        }
        let rows = full.rows().select_rows(row_indices.iter());
        Ok(SensingMatrix {
            dim: full.dim(),
            rows,
            row_indices,
        })
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn rows(&self) -> &DMatrix<T> {
        &self.rows
    }

    pub fn row_indices(&self) -> &[usize] {
        &self.row_indices
    }

    pub fn lines(&self) -> Vec<PhaseSpaceLine> {
        self.row_indices
            .iter()
            .map(|&r| PhaseSpaceLine::from_row_index(r, self.dim))
            .collect()
    }
}

pub fn sample_rows<T: Real>(full: &MeasurementMatrix<T>, plan: &SensingPlan) -> Result<SensingMatrix<T>> {
    SensingMatrix::from_indices(full, plan.select(full.dim())?)
}

/// Line probabilities `pr(line)`, one per kept row.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementVector<T: Real> {
    pub values: Vec<T>,
    pub row_indices: Vec<usize>,
}

impl<T: Real> MeasurementVector<T> {
    pub fn as_vector(&self) -> DVector<T> {
        DVector::from_column_slice(&self.values)
    }

    pub fn scaled(&self, c: T) -> Self {
        MeasurementVector {
            values: self.values.iter().map(|&v| v * c).collect(),
            row_indices: self.row_indices.clone(),
        }
    }

    /// CSV with a `row,probability` header, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("row,probability\n");
        for (r, v) in self.row_indices.iter().zip(&self.values) {
            out.push_str(&format!("{r},{v:.16e}\n"));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut values = Vec::new();
        let mut row_indices = Vec::new();
        for (i, line) in text.lines().enumerate().skip(1) {
            if line.trim().is_empty() {
                continue;
            }
            let (r, v) = line
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("measurement line {i} is malformed")))?;
            row_indices.push(r.trim().parse().map_err(|_| Error::Parse(format!("bad row on line {i}")))?);
            let v: f64 = v.trim().parse().map_err(|_| Error::Parse(format!("bad value on line {i}")))?;
            values.push(T::lit(v));
        }
        Ok(MeasurementVector { values, row_indices })
    }
}

/// Exact line sums `y = Φ·vec(W)`.
pub fn measure<T: Real>(w: &DiscreteWigner<T>, rows: &SensingMatrix<T>) -> Result<MeasurementVector<T>> {
    if w.dim() != rows.dim() {
        return Err(Error::DimensionMismatch {
            expected: rows.dim().get(),
            actual: w.dim().get(),
        });
    }
    let y = rows.rows() * w.raster();
    Ok(MeasurementVector {
        values: y.iter().copied().collect(),
        row_indices: rows.row_indices().to_vec(),
    })
}
