use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::config::Tolerances;
use crate::error::{Error, Result};

/// Normalised amplitudes over the levels of an effective spectrum, lowest level first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct ProbeState {
    amplitudes: Vec<Complex64>,
}

impl TryFrom<Vec<Complex64>> for ProbeState {
    type Error = Error;

    fn try_from(v: Vec<Complex64>) -> Result<Self> {
        ProbeState::new(v)
    }
}

impl From<ProbeState> for Vec<Complex64> {
    fn from(p: ProbeState) -> Self {
        p.amplitudes
    }
}

impl ProbeState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidState("probe has no levels".into()));
        }
        let norm2: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum();
        if !((norm2 - 1.0).abs() <= Tolerances::DEFAULT.state * amplitudes.len() as f64) {
            return Err(Error::InvalidState(format!("probe norm² is {norm2}")));
        }
        Ok(Self { amplitudes })
    }

    /// Normalise arbitrary nonzero amplitudes.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidState("cannot normalise a zero vector".into()));
        }
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|c| c / norm).collect(),
        })
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::normalized(amplitudes.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    /// Equal superposition of the lowest and highest level.
    pub fn ghz(levels: usize) -> Result<Self> {
        if levels < 2 {
            return Err(Error::Degenerate(format!("GHZ probe needs two levels, got {levels}")));
        }
        let mut a = vec![Complex64::new(0.0, 0.0); levels];
        a[0] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        a[levels - 1] = a[0];
        Ok(Self { amplitudes: a })
    }

    /// `c_μ = √(2/(L+1))·sin(πμ/(L+1))`, `μ = 1..=L`.
    pub fn berry_wiseman(levels: usize) -> Result<Self> {
        if levels < 2 {
            return Err(Error::Degenerate(format!("sine probe needs two levels, got {levels}")));
        }
        let l1 = (levels + 1) as f64;
        let scale = (2.0 / l1).sqrt();
        let a = (1..=levels)
            .map(|mu| Complex64::new(scale * (PI * mu as f64 / l1).sin(), 0.0))
            .collect();
        Self::new(a)
    }

    pub fn uniform(levels: usize) -> Result<Self> {
        Self::from_real(&vec![1.0; levels])
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `c_μ ← c_μ·exp(−i ω t Γ_μ)`.
    pub fn evolve(&self, levels: &[f64], omega: f64, t: f64) -> Result<Self> {
        if levels.len() != self.len() {
            return Err(Error::LengthMismatch { expected: self.len(), actual: levels.len() });
        }
        if !(t >= 0.0) {
            return Err(Error::InvalidInput(format!("evolution time must be non-negative, got {t}")));
        }
        let amplitudes = self
            .amplitudes
            .iter()
            .zip(levels)
            .map(|(c, &g)| c * Complex64::from_polar(1.0, -omega * t * g))
            .collect();
        Ok(Self { amplitudes })
    }

    /// Mean and variance of the level values in this state.
    pub fn generator_moments(&self, levels: &[f64]) -> (f64, f64) {
        let mean: f64 = self.amplitudes.iter().zip(levels).map(|(c, g)| c.norm_sqr() * g).sum();
        let var: f64 = self
            .amplitudes
            .iter()
            .zip(levels)
            .map(|(c, g)| c.norm_sqr() * (g - mean).powi(2))
            .sum();
        (mean, var)
    }
}
