//! Estimation protocols built on an effective spectrum of range `Δ` with `L`
//! levels: a single shot under a flat prior, non-adaptive repetition, the
//! geometric adaptive schedule, and a fixed-time shot under a Gaussian prior.
//!
//! Protocol construction is pure; [`simulate`] attaches Monte-Carlo results.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::bayes::{holevo_variance, variance_reduction, Prior, ProbeState};
use crate::dfs_control::EffectiveSpectrum;
use crate::error::{Error, Result};
use crate::montecarlo::{run_estimation_trials, TrialProtocol, TrialSummary};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProtocolKind {
    SingleShotFlat,
    Repeated,
    Adaptive,
    FixedTime,
}

/// A predicted quantity together with the closed form it was evaluated from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub name: String,
    pub value: f64,
    pub formula: String,
}

impl Prediction {
    fn new(name: &str, value: f64, formula: &str) -> Self {
        Self { name: name.into(), value, formula: formula.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Round {
    pub k: usize,
    /// Interaction time `t_k`.
    pub time: f64,
    /// Prior width `W_{k−1}` entering the round.
    pub prior_width: f64,
    /// Width `W_k` after the round.
    pub width: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `tW₀Δ` small: only the extremal levels matter.
    Ghz,
    /// `tW₀Δ/(L−1)` inside the optimal window: the sine probe is preferred.
    SineProbe,
    Intermediate,
    /// `tW₀Δ/L` large: phase wraps many times; choose a shorter time.
    OverRotated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeFamily {
    Ghz,
    SineProbe,
}

impl ProbeFamily {
    pub fn build(self, levels: usize) -> Result<ProbeState> {
        match self {
            ProbeFamily::Ghz => ProbeState::ghz(levels),
            ProbeFamily::SineProbe => ProbeState::berry_wiseman(levels),
        }
    }
}

/// Thresholds standing in for `≪ 1`, the optimal window and `≫ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RegimeThresholds {
    /// `tW₀Δ` below this is the GHZ regime.
    pub ghz_max: f64,
    /// Optimal window for `tW₀Δ/(L−1)`.
    pub window: (f64, f64),
    /// `tW₀Δ/L` above this is over-rotated.
    pub over_rotated: f64,
}

impl Default for RegimeThresholds {
    fn default() -> Self {
        Self { ghz_max: 0.1, window: (0.5, 1.0), over_rotated: 10.0 }
    }
}

impl RegimeThresholds {
    pub fn classify(&self, t: f64, w0: f64, delta: f64, levels: usize) -> Regime {
        let x = t * w0 * delta;
        let l = levels as f64;
        if x < self.ghz_max {
            Regime::Ghz
        } else if x / l > self.over_rotated {
            Regime::OverRotated
        } else if levels >= 2 && (self.window.0..=self.window.1).contains(&(x / (l - 1.0))) {
            Regime::SineProbe
        } else {
            Regime::Intermediate
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Resources {
    pub total_time: f64,
    /// Time actually spent in interactions.
    pub used_time: f64,
    pub rounds: usize,
    pub levels: usize,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolReport {
    pub kind: ProtocolKind,
    pub prior: Prior,
    pub predictions: Vec<Prediction>,
    pub simulated: Option<TrialSummary>,
    pub schedule: Vec<Round>,
    pub regime: Option<Regime>,
    pub probe: Option<ProbeFamily>,
    pub resources: Resources,
    pub notes: Vec<String>,
}

impl ProtocolReport {
    pub fn prediction(&self, name: &str) -> Option<f64> {
        self.predictions.iter().find(|p| p.name == name).map(|p| p.value)
    }

    /// Interaction time of a single-shot report.
    pub fn interaction_time(&self) -> Option<f64> {
        self.prediction("t1").or_else(|| self.schedule.first().map(|r| r.time))
    }
}

fn ladder(spectrum: &EffectiveSpectrum) -> Result<(usize, f64)> {
    let (l, delta) = (spectrum.len(), if spectrum.len() > 1 { spectrum.delta() } else { 0.0 });
    if l < 2 || !(delta > 0.0) {
        return Err(Error::Degenerate(format!("need at least two distinct levels, got L = {l}")));
    }
    Ok((l, delta))
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{name} must be positive and finite, got {v}")))
    }
}

/// `t₁ = 2π(L−1)/(W₀Δ)`: the phase spread of the flat prior exactly fills one period per level step.
pub fn single_shot_time(levels: usize, delta: f64, w0: f64) -> f64 {
    TAU * (levels - 1) as f64 / (w0 * delta)
}

/// One shot with the sine probe under a flat prior of width `W₀`.
pub fn single_shot_flat(spectrum: &EffectiveSpectrum, w0: f64) -> Result<ProtocolReport> {
    let (l, delta) = ladder(spectrum)?;
    positive("prior width", w0)?;
    let t1 = single_shot_time(l, delta, w0);
    let lf = l as f64;
    let probe = ProbeState::berry_wiseman(l)?;
    let sine = w0 * w0 / (4.0 * PI * PI) * holevo_variance(&probe);
    let mut notes = Vec::new();
    if !spectrum.is_linear() {
        notes.push("spectrum is not equally spaced; predictions assume an L-level ladder".into());
    }
    Ok(ProtocolReport {
        kind: ProtocolKind::SingleShotFlat,
        prior: Prior::flat(w0)?,
        predictions: vec![
            Prediction::new("t1", t1, "2*pi*(L-1)/(W0*Delta)"),
            Prediction::new("mse", w0 * w0 / (4.0 * (lf - 1.0).powi(2)), "W0^2/(4*(L-1)^2)"),
            Prediction::new("mse_asymptotic", w0 * w0 / (4.0 * lf * lf), "W0^2/(4*L^2)"),
            Prediction::new("holevo_sine_probe", sine, "W0^2/(4*pi^2)*tan^2(pi/(L+1))"),
        ],
        simulated: None,
        schedule: vec![],
        regime: None,
        probe: Some(ProbeFamily::SineProbe),
        resources: Resources { total_time: t1, used_time: t1, rounds: 1, levels: l, delta },
        notes,
    })
}

/// `ν = ⌊T/t₁⌋` independent single shots without updating the prior.
pub fn repeat_protocol(spectrum: &EffectiveSpectrum, w0: f64, total_time: f64) -> Result<ProtocolReport> {
    let mut report = single_shot_flat(spectrum, w0)?;
    positive("total time", total_time)?;
    let t1 = report.prediction("t1").unwrap_or(f64::NAN);
    if total_time < t1 {
        return Err(Error::InsufficientTime(format!("T = {total_time} is shorter than one shot t1 = {t1}")));
    }
    let nu = (total_time / t1).floor();
    let (l, delta) = (report.resources.levels as f64, report.resources.delta);
    let single = report.prediction("mse").unwrap_or(f64::NAN);
    let asym = report.prediction("mse_asymptotic").unwrap_or(f64::NAN);
    let scaling = w0 / (2.0 * total_time * l * delta);
    report.kind = ProtocolKind::Repeated;
    report.predictions = vec![
        Prediction::new("t1", t1, "2*pi*(L-1)/(W0*Delta)"),
        Prediction::new("repetitions", nu, "floor(T/t1)"),
        Prediction::new("mse", single / nu, "W0^2/(4*(L-1)^2)/nu"),
        Prediction::new("mse_asymptotic", asym / nu, "W0^2/(4*L^2)/nu"),
        Prediction::new("mse_scaling_form", scaling, "W0/(2*T*L*Delta)"),
        Prediction::new("scaling_form_ratio", (asym / nu) / scaling, "(W0^2/(4*L^2)/nu)/(W0/(2*T*L*Delta))"),
    ];
    report.resources.total_time = total_time;
    report.resources.used_time = nu * t1;
    report.resources.rounds = nu as usize;
    report.notes.push(format!("unused time {}", total_time - nu * t1));
    Ok(report)
}

/// Largest `n` with `(2L)^n ≤ ratio`.
fn max_rounds(levels: usize, ratio: f64) -> usize {
    let base = 2.0 * levels as f64;
    let mut n = 0;
    let mut pow = base;
    while pow <= ratio {
        n += 1;
        pow *= base;
    }
    n
}

/// Closed form of `Σ_{k=1}^n t_k` for the geometric schedule.
pub fn adaptive_total_time(levels: usize, delta: f64, w0: f64, rounds: usize) -> f64 {
    let base = 2.0 * levels as f64;
    single_shot_time(levels, delta, w0) * (base.powi(rounds as i32) - 1.0) / (base - 1.0)
}

/// Geometric schedule `W_k = W₀(2L)^{−k}`, `t_k = 2π(L−1)/(Δ W_{k−1})`.
pub fn adaptive_schedule(spectrum: &EffectiveSpectrum, w0: f64, total_time: f64) -> Result<ProtocolReport> {
    let (l, delta) = ladder(spectrum)?;
    positive("prior width", w0)?;
    positive("total time", total_time)?;
    let ratio = delta * w0 * total_time / PI;
    let base = 2.0 * l as f64;
    if ratio < base {
        return Err(Error::InsufficientTime(format!(
            "Delta*W0*T/pi = {ratio} is below 2L = {base}; not even one round fits"
        )));
    }
    let n = max_rounds(l, ratio);
    let mut schedule = Vec::with_capacity(n);
    let mut width = w0;
    for k in 1..=n {
        let time = single_shot_time(l, delta, width);
        let next = w0 * base.powi(-(k as i32));
        schedule.push(Round { k, time, prior_width: width, width: next });
        width = next;
    }
    let used: f64 = schedule.iter().map(|r| r.time).sum();
    let closed = adaptive_total_time(l, delta, w0, n);
    let bound = PI / (total_time * delta);
    let mut notes = vec![format!("unused time {}", total_time - used)];
    if used > total_time {
        return Err(Error::InvalidState(format!("schedule uses {used} > T = {total_time}")));
    }
    if width * total_time * delta < PI * (1.0 - 4.0 * f64::EPSILON) {
        notes.push("final width below pi/(T*Delta)".into());
    }
    Ok(ProtocolReport {
        kind: ProtocolKind::Adaptive,
        prior: Prior::flat(w0)?,
        predictions: vec![
            Prediction::new("rounds", n as f64, "floor(log_{2L}(Delta*W0*T/pi))"),
            Prediction::new("final_width", width, "W0*(2L)^-n"),
            Prediction::new("width_bound", bound, "pi/(T*Delta)"),
            Prediction::new("total_time_closed_form", closed, "2*pi*(L-1)/(W0*Delta)*((2L)^n-1)/(2L-1)"),
            Prediction::new("total_time_sum", used, "sum_k t_k"),
        ],
        simulated: None,
        schedule,
        regime: None,
        probe: Some(ProbeFamily::SineProbe),
        resources: Resources { total_time, used_time: used, rounds: n, levels: l, delta },
        notes,
    })
}

/// One shot of fixed duration `t` under a Gaussian prior; picks the probe by regime.
pub fn fixed_time_single_shot(
    spectrum: &EffectiveSpectrum,
    prior: &Prior,
    t: f64,
    thresholds: &RegimeThresholds,
) -> Result<ProtocolReport> {
    let (l, delta) = ladder(spectrum)?;
    positive("interaction time", t)?;
    if !matches!(prior, Prior::Gaussian { .. }) {
        return Err(Error::InvalidInput("fixed-time protocol needs a Gaussian prior".into()));
    }
    prior.validate()?;
    let w0 = prior.width();
    let regime = thresholds.classify(t, w0, delta, l);
    let ghz = variance_reduction(&ProbeState::ghz(l)?, prior, spectrum, t)?;
    let sine = variance_reduction(&ProbeState::berry_wiseman(l)?, prior, spectrum, t)?;
    let mut notes = Vec::new();
    let probe = match regime {
        Regime::Ghz => ProbeFamily::Ghz,
        Regime::SineProbe => ProbeFamily::SineProbe,
        Regime::Intermediate if ghz < sine => ProbeFamily::Ghz,
        Regime::Intermediate => ProbeFamily::SineProbe,
        Regime::OverRotated => {
            let suggested = thresholds.window.1 * (l - 1) as f64 / (w0 * delta);
            notes.push(format!("over-rotated: choose a shorter interaction time, e.g. t = {suggested}"));
            ProbeFamily::SineProbe
        }
    };
    let chosen = if probe == ProbeFamily::Ghz { ghz } else { sine };
    let x = t * w0 * delta;
    Ok(ProtocolReport {
        kind: ProtocolKind::FixedTime,
        prior: *prior,
        predictions: vec![
            Prediction::new("x", x, "t*W0*Delta"),
            Prediction::new("x_per_gap", x / (l - 1) as f64, "t*W0*Delta/(L-1)"),
            Prediction::new("variance_reduction", chosen, "1-W0^2*F(rho_bar)"),
            Prediction::new("variance_reduction_ghz", ghz, "1-W0^2*F(rho_bar[GHZ])"),
            Prediction::new("variance_reduction_sine", sine, "1-W0^2*F(rho_bar[sine])"),
            Prediction::new("posterior_variance", chosen * w0 * w0, "W0^2*(1-W0^2*F)"),
        ],
        simulated: None,
        schedule: vec![],
        regime: Some(regime),
        probe: Some(probe),
        resources: Resources { total_time: t, used_time: t, rounds: 1, levels: l, delta },
        notes,
    })
}

/// Attach Monte-Carlo results for `trials` seeded trials.
///
/// Repeated protocols simulate one shot (the ν-fold average follows from
/// independence); adaptive ones run the idealized re-flattened chain.
pub fn simulate(report: &mut ProtocolReport, spectrum: &EffectiveSpectrum, trials: usize, seed: u64) -> Result<()> {
    let l = spectrum.len();
    let family = report.probe.unwrap_or(ProbeFamily::SineProbe);
    let probe = family.build(l)?;
    let protocol = match report.kind {
        ProtocolKind::SingleShotFlat | ProtocolKind::Repeated | ProtocolKind::FixedTime => {
            let t = report
                .interaction_time()
                .unwrap_or(report.resources.total_time);
            TrialProtocol::SingleShot { probe, spectrum: spectrum.clone(), prior: report.prior, t }
        }
        ProtocolKind::Adaptive => TrialProtocol::Adaptive {
            probe,
            spectrum: spectrum.clone(),
            prior: report.prior,
            times: report.schedule.iter().map(|r| r.time).collect(),
            windows: report.schedule.iter().map(|r| r.prior_width).collect(),
        },
    };
    let run = run_estimation_trials(&protocol, trials, seed)?;
    report.simulated = Some(run.summary);
    Ok(())
}
