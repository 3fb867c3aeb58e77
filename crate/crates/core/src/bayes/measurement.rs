//! Canonical (covariant) phase measurement and circular figures of merit.
//!
//! For amplitudes `c_μ` on an equally spaced ladder the outcome density is
//! `p(θ) = |Σ_μ c_μ e^{iμθ}|²/2π`. A probe that picked up the phase `φ` per
//! level step yields `p(θ − φ)`, so the outcome is an estimate of `φ`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ProbeState;
use crate::error::{Error, Result};

/// Default number of CDF grid cells on `[0, 2π)`.
pub const DEFAULT_GRID: usize = 1 << 14;

/// Outcome sampler for the canonical phase measurement of a probe.
#[derive(Debug, Clone)]
pub struct CanonicalMeasurement {
    /// Autocorrelations `a_d = Σ_ν c_{ν+d} c_ν*`, `d = 0..L`.
    autocorrelation: Vec<Complex64>,
    /// Exact CDF at the grid nodes `2πk/grid`, `k = 0..=grid`.
    cdf: Vec<f64>,
}

impl CanonicalMeasurement {
    pub fn new(probe: &ProbeState) -> Self {
        Self::with_grid(probe, DEFAULT_GRID).expect("default grid is valid")
    }

    pub fn with_grid(probe: &ProbeState, grid: usize) -> Result<Self> {
        if grid < DEFAULT_GRID {
            return Err(Error::InvalidInput(format!(
                "measurement grid needs at least {DEFAULT_GRID} cells, got {grid}"
            )));
        }
        let c = probe.amplitudes();
        let autocorrelation = (0..c.len())
            .map(|d| (0..c.len() - d).map(|nu| c[nu + d] * c[nu].conj()).sum())
            .collect();
        let mut m = Self {
            autocorrelation,
            cdf: Vec::new(),
        };
        let mut cdf: Vec<f64> = (0..=grid).map(|k| m.cdf_exact(TAU * k as f64 / grid as f64)).collect();
        // the trigonometric terms vanish at 2π; pin the endpoints and remove
        // rounding-level non-monotonicity
        cdf[0] = 0.0;
        let total = cdf[grid];
        for i in 1..=grid {
            cdf[i] = (cdf[i] / total).max(cdf[i - 1]);
        }
        cdf[grid] = 1.0;
        m.cdf = cdf;
        Ok(m)
    }

    pub fn grid(&self) -> usize {
        self.cdf.len() - 1
    }

    /// Outcome density at `θ` for a probe that accumulated no phase.
    pub fn density(&self, theta: f64) -> f64 {
        let a = &self.autocorrelation;
        let mut s = a[0].re;
        for (d, ad) in a.iter().enumerate().skip(1) {
            s += 2.0 * (ad * Complex64::from_polar(1.0, d as f64 * theta)).re;
        }
        s / TAU
    }

    /// `∫_0^θ p`, evaluated term by term.
    pub fn cdf_exact(&self, theta: f64) -> f64 {
        let a = &self.autocorrelation;
        let mut s = a[0].re * theta;
        for (d, ad) in a.iter().enumerate().skip(1) {
            let d = d as f64;
            let e = (Complex64::from_polar(1.0, d * theta) - 1.0) / Complex64::new(0.0, d);
            s += 2.0 * (ad * e).re;
        }
        s / TAU
    }

    /// Probability mass of `[a, b] ⊂ [0, 2π]`.
    pub fn probability(&self, a: f64, b: f64) -> f64 {
        self.cdf_exact(b) - self.cdf_exact(a)
    }

    /// `⟨e^{iθ}⟩` of the outcome distribution.
    pub fn mean_resultant(&self) -> Complex64 {
        self.autocorrelation.get(1).map_or(Complex64::new(0.0, 0.0), |a| a.conj())
    }

    /// Draw an outcome in `[0, 2π)` by inverse-CDF with linear interpolation on the grid.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        self.invert(u)
    }

    /// Outcome for a probe that accumulated phase `phi` per level step.
    pub fn sample_shifted<R: Rng + ?Sized>(&self, rng: &mut R, phi: f64) -> f64 {
        (self.sample(rng) + phi).rem_euclid(TAU)
    }

    fn invert(&self, u: f64) -> f64 {
        let grid = self.grid();
        // first node with cdf >= u
        let k = self.cdf.partition_point(|&c| c < u).clamp(1, grid);
        let (c0, c1) = (self.cdf[k - 1], self.cdf[k]);
        let frac = if c1 > c0 { (u - c0) / (c1 - c0) } else { 0.5 };
        let theta = TAU * ((k - 1) as f64 + frac) / grid as f64;
        if theta >= TAU {
            0.0
        } else {
            theta
        }
    }
}

/// Holevo variance `S⁻² − 1` from the sharpness `S = |Σ_μ c_μ* c_{μ+1}|` of a
/// probe on a unit-gap ladder. Infinite when `S = 0`.
pub fn holevo_variance(probe: &ProbeState) -> f64 {
    let c = probe.amplitudes();
    let s: Complex64 = c.windows(2).map(|w| w[0].conj() * w[1]).sum();
    let s = s.norm();
    if s == 0.0 {
        f64::INFINITY
    } else {
        1.0 / (s * s) - 1.0
    }
}

/// Empirical circular statistic with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircularEstimate {
    pub value: f64,
    pub stderr: f64,
    pub sharpness: f64,
    pub samples: usize,
}

/// Holevo variance `|⟨e^{i e}⟩|⁻² − 1` of phase errors, with a delta-method standard error.
pub fn holevo_variance_from_errors(errors: &[f64]) -> Result<CircularEstimate> {
    if errors.is_empty() {
        return Err(Error::InvalidInput("no samples".into()));
    }
    let n = errors.len() as f64;
    let mean: Complex64 = errors.iter().map(|&e| Complex64::from_polar(1.0, e)).sum::<Complex64>() / n;
    let s = mean.norm();
    if s == 0.0 {
        return Ok(CircularEstimate {
            value: f64::INFINITY,
            stderr: f64::INFINITY,
            sharpness: 0.0,
            samples: errors.len(),
        });
    }
    let dir = mean.arg();
    let var = errors.iter().map(|&e| ((e - dir).cos() - s).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    let se_s = (var / n).sqrt();
    Ok(CircularEstimate {
        value: 1.0 / (s * s) - 1.0,
        stderr: 2.0 * se_s / (s * s * s),
        sharpness: s,
        samples: errors.len(),
    })
}

/// `estimate − truth` wrapped into `[−period/2, period/2)`.
pub fn circular_error(estimate: f64, truth: f64, period: f64) -> f64 {
    (estimate - truth + period / 2.0).rem_euclid(period) - period / 2.0
}
