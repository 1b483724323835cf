use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of halvings used by the default dyadic grid, giving `ε = T·2^{-40}`.
pub const DEFAULT_LEVELS: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum GridKind {
    /// `ε` followed by `T·k/n` for `k = 1..=n`.
    Uniform { intervals: usize },
    /// `T·q^k` for `k = levels, ..., 0`.
    Geometric { ratio: f64, levels: usize },
}

/// Strictly increasing observation times in `(0, T]`.
///
/// The first point is the truncation level `ε > 0` and the last is the
/// horizon `T`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    points: Vec<f64>,
    kind: GridKind,
}

impl TimeGrid {
    /// Geometric grid `{T q^k : k = levels, ..., 0}`.
    pub fn geometric(horizon: f64, ratio: f64, levels: usize) -> Result<Self> {
        check_horizon(horizon)?;
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::Grid(format!("geometric ratio must lie in (0,1), got {ratio}")));
        }
        let levels_i32 = i32::try_from(levels).map_err(|_| Error::Grid("too many levels".into()))?;
        let points: Vec<f64> = (0..=levels_i32).rev().map(|k| horizon * ratio.powi(k)).collect();
        if !(points[0] > 0.0) {
            return Err(Error::Grid(format!(
                "smallest grid point underflows: {horizon}·{ratio}^{levels}"
            )));
        }
        if points.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Grid("geometric grid is not strictly increasing in floating point".into()));
        }
        Ok(Self {
            points,
            kind: GridKind::Geometric { ratio, levels },
        })
    }

    /// Dyadic grid `{T 2^{-k}}`, the blocks used in the moment bound.
    pub fn dyadic(horizon: f64, levels: usize) -> Result<Self> {
        Self::geometric(horizon, 0.5, levels)
    }

    /// Default grid: dyadic with [`DEFAULT_LEVELS`] levels.
    pub fn default_for(horizon: f64) -> Result<Self> {
        Self::dyadic(horizon, DEFAULT_LEVELS)
    }

    /// `ε` followed by `n` equal steps `T/n, 2T/n, ..., T`.
    pub fn uniform(horizon: f64, intervals: usize, epsilon: f64) -> Result<Self> {
        check_horizon(horizon)?;
        if intervals == 0 {
            return Err(Error::Grid("uniform grid needs at least one interval".into()));
        }
        let step = horizon / intervals as f64;
        if !(epsilon > 0.0 && epsilon < step) {
            return Err(Error::Grid(format!(
                "uniform grid epsilon must lie in (0, T/n) = (0, {step}), got {epsilon}"
            )));
        }
        let mut points = Vec::with_capacity(intervals + 1);
        points.push(epsilon);
        points.extend((1..=intervals).map(|k| if k == intervals { horizon } else { horizon * k as f64 / intervals as f64 }));
        Ok(Self {
            points,
            kind: GridKind::Uniform { intervals },
        })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn horizon(&self) -> f64 {
        *self.points.last().expect("grid is never empty")
    }

    pub fn epsilon(&self) -> f64 {
        self.points[0]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_dyadic(&self) -> bool {
        matches!(self.kind, GridKind::Geometric { ratio, .. } if ratio == 0.5)
    }

    /// The grid restricted to `points[from..]`, so that `points[from]` becomes `ε`.
    pub fn tail(&self, from: usize) -> Result<TimeGrid> {
        if from >= self.points.len() {
            return Err(Error::Grid(format!("cannot drop {from} of {} grid points", self.points.len())));
        }
        let kind = match self.kind {
            GridKind::Geometric { ratio, levels } => GridKind::Geometric {
                ratio,
                levels: levels - from,
            },
            GridKind::Uniform { intervals } => GridKind::Uniform {
                intervals: intervals - from,
            },
        };
        Ok(TimeGrid {
            points: self.points[from..].to_vec(),
            kind,
        })
    }

    /// Index of the grid point equal to `t` up to a relative `1e-9`.
    pub fn index_of(&self, t: f64) -> Option<usize> {
        self.points.iter().position(|&x| ((x - t) / t).abs() <= 1e-9)
    }
}

fn check_horizon(horizon: f64) -> Result<()> {
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::Grid(format!("horizon T must be > 0, got {horizon}")));
    }
    Ok(())
}
