//! Probe states over an effective spectrum and the Bayesian figures of merit
//! evaluated on them.

mod averaged;
mod measurement;
mod probe;
mod qfi;

use serde::{Deserialize, Serialize};

pub use averaged::{averaged_state, AveragedState};
pub use measurement::{
    circular_error, holevo_variance, holevo_variance_from_errors, CanonicalMeasurement, CircularEstimate,
    DEFAULT_GRID,
};
pub use probe::ProbeState;
pub use qfi::{qfi_mixed, qfi_pure, variance_reduction};

use crate::error::{Error, Result};

/// Prior over the unknown frequency (or phase).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Prior {
    /// Uniform on `[lower, lower + width)`.
    Flat { lower: f64, width: f64 },
    /// Normal with the given mean and standard deviation.
    Gaussian { mean: f64, std_dev: f64 },
}

impl Prior {
    pub fn flat(width: f64) -> Result<Self> {
        let p = Prior::Flat { lower: 0.0, width };
        p.validate()?;
        Ok(p)
    }

    pub fn gaussian(mean: f64, std_dev: f64) -> Result<Self> {
        let p = Prior::Gaussian { mean, std_dev };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let (loc, w) = match *self {
            Prior::Flat { lower, width } => (lower, width),
            Prior::Gaussian { mean, std_dev } => (mean, std_dev),
        };
        if !(w > 0.0) || !w.is_finite() || !loc.is_finite() {
            return Err(Error::InvalidInput(format!("prior width must be positive and finite, got {w}")));
        }
        Ok(())
    }

    /// `W₀`: support width of a flat prior or standard deviation of a Gaussian one.
    pub fn width(&self) -> f64 {
        match *self {
            Prior::Flat { width, .. } => width,
            Prior::Gaussian { std_dev, .. } => std_dev,
        }
    }
}
