use std::io::Write;

use serde::{Deserialize, Serialize};

use super::grid::TimeGrid;
use super::params::StableParams;
use super::seed::SeedSpec;
use crate::error::{Error, Result};

/// Process values observed at the points of a [`TimeGrid`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubordinatorPath {
    grid: TimeGrid,
    values: Vec<f64>,
}

impl SubordinatorPath {
    /// Wraps precomputed values, checking they are nonnegative and nondecreasing.
    pub fn from_values(grid: TimeGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Grid(format!(
                "path has {} values for {} grid points",
                values.len(),
                grid.len()
            )));
        }
        if values.first().is_some_and(|&v| !(v >= 0.0)) || values.windows(2).any(|w| !(w[0] <= w[1])) {
            return Err(Error::domain("path values must be nonnegative and nondecreasing"));
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn times(&self) -> &[f64] {
        self.grid.points()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn horizon(&self) -> f64 {
        self.grid.horizon()
    }

    /// `S_T`.
    pub fn terminal(&self) -> f64 {
        *self.values.last().expect("path is never empty")
    }

    /// `S_ε`.
    pub fn initial(&self) -> f64 {
        self.values[0]
    }

    /// The path observed from grid index `from` onwards.
    pub fn tail(&self, from: usize) -> Result<SubordinatorPath> {
        Ok(SubordinatorPath {
            grid: self.grid.tail(from)?,
            values: self.values[from..].to_vec(),
        })
    }

    /// Writes `time,value` rows with 17 significant digits.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let ser = |e: csv::Error| Error::Serialize(e.to_string());
        w.write_record(["time", "value"]).map_err(ser)?;
        for (t, v) in self.times().iter().zip(&self.values) {
            w.write_record([format!("{t:.16e}"), format!("{v:.16e}")]).map_err(ser)?;
        }
        w.flush().map_err(|e| Error::Serialize(e.to_string()))?;
        Ok(())
    }
}

/// Reusable sampler for many replicate paths on one grid.
///
/// The increment scales `(t_{i+1} - t_i)^{1/α}` are computed once.
#[derive(Debug, Clone)]
pub struct PathSampler {
    params: StableParams,
    grid: TimeGrid,
    scales: Vec<f64>,
}

impl PathSampler {
    pub fn new(params: StableParams, grid: TimeGrid) -> Self {
        let inv_alpha = 1.0 / params.alpha();
        let pts = grid.points();
        let scales = std::iter::once(pts[0])
            .chain(pts.windows(2).map(|w| w[1] - w[0]))
            .map(|dt| dt.powf(inv_alpha))
            .collect();
        Self { params, grid, scales }
    }

    pub fn params(&self) -> &StableParams {
        &self.params
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn sample(&self, seed: SeedSpec) -> SubordinatorPath {
        let mut rng = seed.rng();
        let mut level = 0.0;
        let values = self
            .scales
            .iter()
            .map(|scale| {
                level += scale * self.params.sample(&mut rng);
                level
            })
            .collect();
        SubordinatorPath {
            grid: self.grid.clone(),
            values,
        }
    }
}

/// Samples one path; the value at `ε` is the increment from time 0.
pub fn sample_path(params: &StableParams, grid: &TimeGrid, seed: SeedSpec) -> SubordinatorPath {
    PathSampler::new(*params, grid.clone()).sample(seed)
}

/// The `α = 1` path `S_t = t`.
pub fn deterministic_path(grid: &TimeGrid) -> SubordinatorPath {
    SubordinatorPath {
        grid: grid.clone(),
        values: grid.points().to_vec(),
    }
}
