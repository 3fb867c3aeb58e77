//! JSON scenario schema: an array, signal and noise profiles, a prior, a
//! protocol, a seed and a trial count.
//!
//! ```json
//! {
//!   "array": { "placement": "exponential", "qubits": 4 },
//!   "signal": { "kind": "gradient", "slope": 1.0 },
//!   "noise": [ { "kind": "constant" } ],
//!   "prior": { "kind": "flat", "lower": 0.0, "width": 1.0 },
//!   "protocol": { "kind": "single_shot_flat" },
//!   "seed": 7,
//!   "trials": 100000
//! }
//! ```

use serde::{Deserialize, Serialize};

use crate::bayes::Prior;
use crate::dfs_control::{dfs_spectrum, extremal_anchor, EffectiveSpectrum};
use crate::error::{Error, Result};
use crate::field_geometry::{orthogonal_complement, FieldLabel, NoiseModel, SensorArray, SpatialField};
use crate::placement::{self, Family, PlacementPlan};
use crate::protocols::{self, ProtocolReport, RegimeThresholds};

pub const DEFAULT_TRIALS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ArraySpec {
    Placement {
        placement: Family,
        qubits: usize,
    },
    Explicit(SensorArray),
}

/// Field profile evaluated at the site positions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Profile {
    Values { values: Vec<f64> },
    Constant {
        #[serde(default = "one")]
        value: f64,
    },
    /// `offset + slope·r`
    Gradient {
        #[serde(default = "one")]
        slope: f64,
        #[serde(default)]
        offset: f64,
    },
    /// `strength·|r − source|^(−alpha)`
    PowerLaw {
        alpha: f64,
        source: f64,
        #[serde(default = "one")]
        strength: f64,
    },
}

fn one() -> f64 {
    1.0
}

impl Profile {
    pub fn evaluate(&self, positions: &[f64]) -> Vec<f64> {
        match self {
            Profile::Values { values } => values.clone(),
            Profile::Constant { value } => vec![*value; positions.len()],
            Profile::Gradient { slope, offset } => positions.iter().map(|r| offset + slope * r).collect(),
            Profile::PowerLaw { alpha, source, strength } => {
                positions.iter().map(|r| strength * (r - source).abs().powf(-alpha)).collect()
            }
        }
    }
}

/// Equally spaced ladder used in place of the array's own spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ladder {
    pub levels: usize,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProtocolKindSpec {
    SingleShotFlat,
    Repeated { total_time: f64 },
    Adaptive { total_time: f64 },
    FixedTime {
        t: f64,
        #[serde(default)]
        thresholds: RegimeThresholds,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolSpec {
    #[serde(flatten)]
    pub kind: ProtocolKindSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ladder: Option<Ladder>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub array: ArraySpec,
    /// Defaults to a unit gradient.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signal: Option<Profile>,
    /// Defaults to a single spatially constant source; `[]` means no noise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<Vec<Profile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prior: Option<Prior>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub protocol: Option<ProtocolSpec>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: usize,
}

fn default_trials() -> usize {
    DEFAULT_TRIALS
}

/// The array and fields a scenario resolves to.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub array: SensorArray,
    pub signal: SpatialField,
    pub noise: NoiseModel,
    pub plan: Option<PlacementPlan>,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    /// Schema-level checks that do not need any numerics.
    pub fn validate(&self) -> Result<()> {
        if let ArraySpec::Placement { placement, .. } = self.array {
            if !matches!(placement, Family::TwoPoint | Family::Linear | Family::Exponential) {
                return Err(Error::InvalidInput(format!(
                    "placement {} needs a profile inverse and is not available from a scenario",
                    placement.name()
                )));
            }
        }
        if let Some(prior) = &self.prior {
            prior.validate()?;
        }
        if self.trials < 2 {
            return Err(Error::InvalidInput(format!("trials must be at least 2, got {}", self.trials)));
        }
        if let Some(Ladder { levels, delta }) = self.protocol.as_ref().and_then(|p| p.ladder) {
            if levels < 2 || !(delta > 0.0) {
                return Err(Error::InvalidInput(format!("ladder needs L >= 2 and delta > 0, got {levels}, {delta}")));
            }
        }
        Ok(())
    }

    fn uses_default_fields(&self) -> bool {
        self.signal.is_none() && self.noise.is_none()
    }

    pub fn resolve(&self) -> Result<Resolved> {
        let (array, plan) = match &self.array {
            ArraySpec::Placement { placement, qubits } => {
                let plan = match placement {
                    Family::TwoPoint => placement::two_point_placement(*qubits)?,
                    Family::Linear => placement::linear_placement(*qubits)?,
                    Family::Exponential => placement::exponential_placement(*qubits)?,
                    other => return Err(Error::InvalidInput(format!("unsupported placement {}", other.name()))),
                };
                (plan.array.clone(), Some(plan))
            }
            ArraySpec::Explicit(a) => (a.clone(), None),
        };
        let pos = array.positions();
        let signal_profile = self.signal.clone().unwrap_or(Profile::Gradient { slope: 1.0, offset: 0.0 });
        let signal = SpatialField::new(checked(signal_profile.evaluate(pos), pos.len())?, FieldLabel::Signal)?;
        let noise_profiles = self.noise.clone().unwrap_or_else(|| vec![Profile::Constant { value: 1.0 }]);
        let fields = noise_profiles
            .iter()
            .enumerate()
            .map(|(k, p)| SpatialField::noise(k + 1, checked(p.evaluate(pos), pos.len())?))
            .collect::<Result<Vec<_>>>()?;
        let noise = if fields.is_empty() { NoiseModel::none(array.len()) } else { NoiseModel::new(array.len(), fields)? };
        Ok(Resolved { array, signal, noise, plan })
    }

    /// Effective spectrum of the array's decoherence-free subspace.
    pub fn spectrum(&self) -> Result<EffectiveSpectrum> {
        let r = self.resolve()?;
        if let (Some(plan), true) = (&r.plan, self.uses_default_fields()) {
            return plan.enumerated_spectrum();
        }
        let f_perp = orthogonal_complement(&r.signal, &r.noise)?;
        let anchor = extremal_anchor(&r.array, &f_perp);
        let pairing = r.plan.as_ref().map(|p| p.pairing.clone()).unwrap_or_default();
        dfs_spectrum(&r.array, &r.noise, &f_perp, &anchor, &pairing)
    }

    /// Spectrum the protocol runs on: the explicit ladder if given, else the array's.
    pub fn protocol_spectrum(&self) -> Result<EffectiveSpectrum> {
        match self.protocol.as_ref().and_then(|p| p.ladder) {
            Some(Ladder { levels, delta }) => EffectiveSpectrum::linear(levels, delta),
            None => self.spectrum(),
        }
    }

    /// Predicted report for the scenario's protocol on `spectrum`.
    pub fn report_on(&self, spectrum: &EffectiveSpectrum) -> Result<ProtocolReport> {
        let spec = self
            .protocol
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("scenario has no protocol".into()))?;
        let prior = self.prior.ok_or_else(|| Error::InvalidInput("scenario has no prior".into()))?;
        let flat_width = || match prior {
            Prior::Flat { width, .. } => Ok(width),
            Prior::Gaussian { .. } => Err(Error::InvalidInput("this protocol needs a flat prior".into())),
        };
        let mut report = match &spec.kind {
            ProtocolKindSpec::SingleShotFlat => protocols::single_shot_flat(spectrum, flat_width()?)?,
            ProtocolKindSpec::Repeated { total_time } => protocols::repeat_protocol(spectrum, flat_width()?, *total_time)?,
            ProtocolKindSpec::Adaptive { total_time } => protocols::adaptive_schedule(spectrum, flat_width()?, *total_time)?,
            ProtocolKindSpec::FixedTime { t, thresholds } => {
                protocols::fixed_time_single_shot(spectrum, &prior, *t, thresholds)?
            }
        };
        // keep the scenario's prior location for simulation
        if let (Prior::Flat { .. }, Prior::Flat { .. }) = (report.prior, prior) {
            report.prior = prior;
        }
        Ok(report)
    }
}

fn checked(values: Vec<f64>, sites: usize) -> Result<Vec<f64>> {
    if values.len() != sites {
        return Err(Error::LengthMismatch { expected: sites, actual: values.len() });
    }
    if let Some((site, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(Error::NonFinite { site, value });
    }
    Ok(values)
}
