//! Seeded Monte-Carlo checks: collective dephasing of spin-configuration
//! coherences, and end-to-end single-shot estimation trials.
//!
//! Every random draw comes from a ChaCha8 stream keyed by `(seed, index)`, so
//! results are independent of the number of worker threads.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bayes::{circular_error, holevo_variance_from_errors, CanonicalMeasurement, CircularEstimate, Prior, ProbeState};
use crate::dfs_control::{EffectiveSpectrum, SpinConfig};
use crate::error::{Error, Result};
use crate::field_geometry::{dfs_condition, NoiseModel};

/// Minimum number of trials accepted by [`mc_dephase_check`].
pub const MIN_DEPHASE_TRIALS: usize = 1000;

/// Trials per parallel chunk. Fixed so the reduction tree does not depend on
/// the thread count.
const CHUNK: usize = 4096;

/// Bootstrap resamples for the MSE confidence interval.
pub const BOOTSTRAP_RESAMPLES: usize = 1000;

fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Distribution of the random phase `φ_k` picked up by each noise source per shot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PhaseDistribution {
    /// Independent zero-mean normals with one standard deviation per source.
    Gaussian { std_devs: Vec<f64> },
    /// Independent uniform phases on the full circle.
    Uniform,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DephasingChannel {
    noise: NoiseModel,
    phases: PhaseDistribution,
}

impl DephasingChannel {
    pub fn new(noise: NoiseModel, phases: PhaseDistribution) -> Result<Self> {
        if let PhaseDistribution::Gaussian { std_devs } = &phases {
            if std_devs.len() != noise.len() {
                return Err(Error::LengthMismatch { expected: noise.len(), actual: std_devs.len() });
            }
            if let Some(bad) = std_devs.iter().position(|s| !(*s >= 0.0) || !s.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "phase standard deviation {} of source {bad} must be non-negative",
                    std_devs[bad]
                )));
            }
        }
        Ok(Self { noise, phases })
    }

    pub fn noise(&self) -> &NoiseModel {
        &self.noise
    }

    pub fn phases(&self) -> &PhaseDistribution {
        &self.phases
    }

    /// `p_k = f_k·(s − r)` for every source.
    fn projections(&self, s: &SpinConfig, r: &SpinConfig) -> Vec<f64> {
        let diff = s.difference(r);
        self.noise.fields().iter().map(|f| f.dot(&diff)).collect()
    }
}

/// Factor by which the `|s⟩⟨r|` coherence is multiplied after averaging over the noise phases.
pub fn dephase_coherence(s: &SpinConfig, r: &SpinConfig, channel: &DephasingChannel) -> f64 {
    if dfs_condition(s, r, &channel.noise) {
        return 1.0;
    }
    let p = channel.projections(s, r);
    match &channel.phases {
        PhaseDistribution::Gaussian { std_devs } => {
            let exponent: f64 = p.iter().zip(std_devs).map(|(p, sd)| (sd * p).powi(2)).sum();
            (-exponent / 2.0).exp()
        }
        PhaseDistribution::Uniform => p
            .iter()
            .map(|&p| if p == 0.0 { 1.0 } else { (PI * p).sin() / (PI * p) })
            .product(),
    }
}

/// Sample mean and standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
}

impl Estimate {
    /// `|mean − target|` in units of the standard error; zero when both vanish.
    pub fn z_score(&self, target: f64) -> f64 {
        let d = (self.mean - target).abs();
        if d == 0.0 {
            0.0
        } else {
            d / self.stderr
        }
    }
}

/// Per-chunk running sums `(n, Σx, Σx²)`.
fn moments<F>(trials: usize, f: F) -> (f64, f64)
where
    F: Fn(usize) -> f64 + Sync,
{
    let chunks = trials.div_ceil(CHUNK);
    let partial: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            (c * CHUNK..((c + 1) * CHUNK).min(trials)).fold((0.0, 0.0), |(s, s2), i| {
                let x = f(i);
                (s + x, s2 + x * x)
            })
        })
        .collect();
    partial.into_iter().fold((0.0, 0.0), |(a, b), (c, d)| (a + c, b + d))
}

/// Monte-Carlo estimate of `E[cos Σ_k φ_k p_k]`, the real part of the averaged
/// coherence phase factor (the imaginary part vanishes for symmetric phase laws).
pub fn mc_dephase_check(
    s: &SpinConfig,
    r: &SpinConfig,
    channel: &DephasingChannel,
    trials: usize,
    seed: u64,
) -> Result<Estimate> {
    if trials < MIN_DEPHASE_TRIALS {
        return Err(Error::InvalidInput(format!(
            "dephasing check needs at least {MIN_DEPHASE_TRIALS} trials, got {trials}"
        )));
    }
    let p = channel.projections(s, r);
    let draw = |i: usize| {
        let mut rng = stream(seed, i as u64);
        let phase: f64 = match &channel.phases {
            PhaseDistribution::Gaussian { std_devs } => p
                .iter()
                .zip(std_devs)
                .map(|(p, &sd)| {
                    let z: f64 = rng.sample(rand_distr::StandardNormal);
                    sd * z * p
                })
                .sum(),
            PhaseDistribution::Uniform => p.iter().map(|p| rng.random_range(-PI..PI) * p).sum(),
        };
        phase.cos()
    };
    let (sum, sum_sq) = moments(trials, draw);
    let n = trials as f64;
    let mean = sum / n;
    let var = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
    Ok(Estimate { mean, stderr: (var / n).sqrt(), samples: trials })
}

/// Readout used in an estimation trial.
#[derive(Debug, Clone)]
pub enum TrialProtocol {
    /// One canonical measurement after evolving for `t` under a prior on `ω`.
    SingleShot { probe: ProbeState, spectrum: EffectiveSpectrum, prior: Prior, t: f64 },
    /// Successive single shots; round `k` evolves for `times[k]` under a flat
    /// prior of width `windows[k]` re-centred on the previous estimate.
    Adaptive { probe: ProbeState, spectrum: EffectiveSpectrum, prior: Prior, times: Vec<f64>, windows: Vec<f64> },
}

impl TrialProtocol {
    fn parts(&self) -> (&ProbeState, &EffectiveSpectrum, &Prior) {
        match self {
            TrialProtocol::SingleShot { probe, spectrum, prior, .. }
            | TrialProtocol::Adaptive { probe, spectrum, prior, .. } => (probe, spectrum, prior),
        }
    }

    fn validate(&self) -> Result<f64> {
        let (probe, spectrum, prior) = self.parts();
        prior.validate()?;
        if probe.len() != spectrum.len() {
            return Err(Error::LengthMismatch { expected: probe.len(), actual: spectrum.len() });
        }
        if spectrum.len() < 2 || spectrum.delta() == 0.0 {
            return Err(Error::Degenerate("estimation needs at least two distinct levels".into()));
        }
        let gap = spectrum.uniform_gap().ok_or(Error::NotLinear)?;
        let times: &[f64] = match self {
            TrialProtocol::SingleShot { t, .. } => std::slice::from_ref(t),
            TrialProtocol::Adaptive { times, windows, .. } => {
                if times.len() != windows.len() || times.is_empty() {
                    return Err(Error::InvalidInput("adaptive trials need one window per round".into()));
                }
                times
            }
        };
        if times.iter().any(|t| !(*t > 0.0) || !t.is_finite()) {
            return Err(Error::InvalidInput("evolution times must be positive".into()));
        }
        Ok(gap)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    /// Stream index; with the run seed it regenerates the trial.
    pub index: u64,
    pub seed: u64,
    pub omega: f64,
    /// Raw outcome of the last canonical measurement, in `[0, 2π)`.
    pub outcome: f64,
    pub estimate: f64,
    /// Squared error, wrapped onto the last round's ambiguity interval.
    pub squared_error: f64,
    /// Error as phase per level step of the last round.
    pub phase_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub trials: usize,
    pub seed: u64,
    pub mse: f64,
    pub mse_stderr: f64,
    /// 95% percentile bootstrap interval of the MSE.
    pub mse_ci95: (f64, f64),
    /// Holevo variance of the phase errors.
    pub holevo: CircularEstimate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRun {
    pub records: Vec<TrialRecord>,
    pub summary: TrialSummary,
}

fn prior_center(prior: &Prior) -> f64 {
    match *prior {
        Prior::Flat { lower, width } => lower + width / 2.0,
        Prior::Gaussian { mean, .. } => mean,
    }
}

fn draw_omega<R: Rng>(prior: &Prior, rng: &mut R) -> f64 {
    match *prior {
        Prior::Flat { lower, width } => lower + width * rng.random::<f64>(),
        Prior::Gaussian { mean, std_dev } => Normal::new(mean, std_dev).expect("validated prior").sample(rng),
    }
}

/// One canonical readout: returns `(outcome, estimate, period)`. The estimate
/// is the branch of `θ/(t·gap)` closest to `center`.
fn single_shot<R: Rng>(m: &CanonicalMeasurement, omega: f64, center: f64, t: f64, gap: f64, rng: &mut R) -> (f64, f64, f64) {
    let rate = t * gap;
    let period = TAU / rate;
    let theta = m.sample_shifted(rng, (omega * rate).rem_euclid(TAU));
    let estimate = center + circular_error(theta / rate, center, period);
    (theta, estimate, period)
}

/// Run `trials` seeded estimation trials. Refuses degenerate (zero-gap) spectra.
pub fn run_estimation_trials(protocol: &TrialProtocol, trials: usize, seed: u64) -> Result<TrialRun> {
    if trials < 2 {
        return Err(Error::InvalidInput(format!("need at least two trials, got {trials}")));
    }
    let gap = protocol.validate()?;
    let (probe, _, prior) = protocol.parts();
    let measurement = CanonicalMeasurement::new(probe);
    let center = prior_center(prior);

    let run_one = |i: usize| -> TrialRecord {
        let mut rng = stream(seed, i as u64);
        let omega = draw_omega(prior, &mut rng);
        let (outcome, estimate, period, rate) = match protocol {
            TrialProtocol::SingleShot { t, .. } => {
                let (o, e, p) = single_shot(&measurement, omega, center, *t, gap, &mut rng);
                (o, e, p, t * gap)
            }
            TrialProtocol::Adaptive { times, .. } => {
                let mut c = center;
                let mut last = (0.0, c, 0.0, 0.0);
                for &t in times {
                    let (o, e, p) = single_shot(&measurement, omega, c, t, gap, &mut rng);
                    c = e;
                    last = (o, e, p, t * gap);
                }
                last
            }
        };
        let err = match protocol {
            TrialProtocol::SingleShot { .. } => circular_error(estimate, omega, period),
            // later rounds do not wrap: a wrong branch is a real error
            TrialProtocol::Adaptive { .. } => estimate - omega,
        };
        TrialRecord {
            index: i as u64,
            seed,
            omega,
            outcome,
            estimate,
            squared_error: err * err,
            phase_error: circular_error(err * rate, 0.0, TAU),
        }
    };

    let records: Vec<TrialRecord> = (0..trials).into_par_iter().map(run_one).collect();
    let summary = summarize(&records, seed)?;
    Ok(TrialRun { records, summary })
}

fn summarize(records: &[TrialRecord], seed: u64) -> Result<TrialSummary> {
    let n = records.len() as f64;
    let sq: Vec<f64> = records.iter().map(|r| r.squared_error).collect();
    let mse = sq.iter().sum::<f64>() / n;
    let var = sq.iter().map(|x| (x - mse).powi(2)).sum::<f64>() / (n - 1.0);
    let phase: Vec<f64> = records.iter().map(|r| r.phase_error).collect();
    Ok(TrialSummary {
        trials: records.len(),
        seed,
        mse,
        mse_stderr: (var / n).sqrt(),
        mse_ci95: bootstrap_mean_ci(&sq, BOOTSTRAP_RESAMPLES, 0.95, seed ^ 0xB007),
        holevo: holevo_variance_from_errors(&phase)?,
    })
}

/// Percentile bootstrap interval for the mean of `xs`.
pub fn bootstrap_mean_ci(xs: &[f64], resamples: usize, level: f64, seed: u64) -> (f64, f64) {
    let n = xs.len();
    let mut means: Vec<f64> = (0..resamples)
        .into_par_iter()
        .map(|b| {
            let mut rng = stream(seed, b as u64);
            (0..n).map(|_| xs[rng.random_range(0..n)]).sum::<f64>() / n as f64
        })
        .collect();
    means.sort_by(f64::total_cmp);
    let tail = (1.0 - level) / 2.0;
    let at = |q: f64| means[((q * resamples as f64) as usize).min(resamples - 1)];
    (at(tail), at(1.0 - tail))
}
