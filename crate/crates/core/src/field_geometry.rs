//! Sensor arrays, field profiles sampled at the sensor sites, and the
//! geometry of the decoherence-free condition.
//!
//! A field with spatial profile `f(r)` couples to the array through the
//! vector `f = (f(r_1), …, f(r_J))`. Two spin configurations `s` and `r`
//! keep their coherence under a collective noise source with profile `f_k`
//! exactly when `f_k·(s − r) = 0`, and the signal imprints the phase
//! difference `f_⊥·(s − r)` where `f_⊥` is the part of the signal profile
//! orthogonal to every noise profile.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::dfs_control::SpinConfig;
use crate::error::{Error, Result};

/// `J` sensor sites, each carrying `n_j` equally spaced local levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawArray", into = "RawArray")]
pub struct SensorArray {
    positions: Vec<f64>,
    quanta_per_site: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawArray {
    positions: Vec<f64>,
    quanta_per_site: Vec<usize>,
}

impl TryFrom<RawArray> for SensorArray {
    type Error = Error;

    fn try_from(raw: RawArray) -> Result<Self> {
        SensorArray::new(raw.positions, raw.quanta_per_site)
    }
}

impl From<SensorArray> for RawArray {
    fn from(a: SensorArray) -> Self {
        RawArray {
            positions: a.positions,
            quanta_per_site: a.quanta_per_site,
        }
    }
}

impl SensorArray {
    pub fn new(positions: Vec<f64>, quanta_per_site: Vec<usize>) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::InvalidInput("sensor array needs at least one site".into()));
        }
        if quanta_per_site.len() != positions.len() {
            return Err(Error::LengthMismatch {
                expected: positions.len(),
                actual: quanta_per_site.len(),
            });
        }
        if let Some((site, &value)) = positions.iter().enumerate().find(|(_, p)| !p.is_finite()) {
            return Err(Error::NonFinite { site, value });
        }
        if let Some(j) = quanta_per_site.iter().position(|&n| n < 2) {
            return Err(Error::InvalidInput(format!(
                "site {j} needs at least two levels, got {}",
                quanta_per_site[j]
            )));
        }
        for i in 0..positions.len() {
            for j in i + 1..positions.len() {
                if positions[i] == positions[j] {
                    return Err(Error::InvalidInput(format!(
                        "sites {i} and {j} share position {}",
                        positions[i]
                    )));
                }
            }
        }
        Ok(Self {
            positions,
            quanta_per_site,
        })
    }

    /// One qubit per site.
    pub fn qubits(positions: Vec<f64>) -> Result<Self> {
        let n = positions.len();
        Self::new(positions, vec![2; n])
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn quanta_per_site(&self) -> &[usize] {
        &self.quanta_per_site
    }

    /// Largest local spin at site `j`: levels run over `-(n_j-1)/2 ..= (n_j-1)/2`.
    pub fn max_spin(&self, j: usize) -> f64 {
        (self.quanta_per_site[j] - 1) as f64 / 2.0
    }

    /// Local spin values available at site `j`, ascending.
    pub fn local_spins(&self, j: usize) -> Vec<f64> {
        let top = self.max_spin(j);
        (0..self.quanta_per_site[j]).map(|m| m as f64 - top).collect()
    }

    /// Total number of physical spin configurations, `∏ n_j`.
    pub fn configuration_count(&self) -> u128 {
        self.quanta_per_site
            .iter()
            .fold(1u128, |acc, &n| acc.saturating_mul(n as u128))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldLabel {
    Signal,
    Noise(usize),
    /// Derived quantity, e.g. the noise-orthogonal signal component.
    Derived,
}

/// Field amplitudes at the sensor sites.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpatialField {
    values: Vec<f64>,
    label: FieldLabel,
}

impl SpatialField {
    pub fn new(values: Vec<f64>, label: FieldLabel) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput("field needs at least one site".into()));
        }
        if let Some((site, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { site, value });
        }
        if values.iter().all(|&v| v == 0.0) {
            return Err(Error::InvalidInput("field is identically zero".into()));
        }
        Ok(Self { values, label })
    }

    pub fn signal(values: Vec<f64>) -> Result<Self> {
        Self::new(values, FieldLabel::Signal)
    }

    pub fn noise(k: usize, values: Vec<f64>) -> Result<Self> {
        Self::new(values, FieldLabel::Noise(k))
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn label(&self) -> FieldLabel {
        self.label
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn dot(&self, other: &[f64]) -> f64 {
        dot(&self.values, other)
    }

    pub fn norm(&self) -> f64 {
        norm(&self.values)
    }

    /// Largest absolute component.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// `K` linearly independent collective noise profiles on a `J`-site array.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseModel {
    sites: usize,
    fields: Vec<SpatialField>,
    basis: Vec<Vec<f64>>,
}

impl NoiseModel {
    pub fn new(sites: usize, fields: Vec<SpatialField>) -> Result<Self> {
        for f in &fields {
            if f.len() != sites {
                return Err(Error::LengthMismatch {
                    expected: sites,
                    actual: f.len(),
                });
            }
        }
        if !fields.is_empty() && fields.len() >= sites {
            return Err(Error::NoComplement {
                noise: fields.len(),
                sites,
            });
        }
        let rank = numerical_rank(&fields, Tolerances::DEFAULT.rank);
        if rank < fields.len() {
            return Err(Error::DependentNoise {
                rank,
                count: fields.len(),
            });
        }
        let basis = orthonormal_basis(fields.iter().map(|f| f.values()));
        Ok(Self {
            sites,
            fields,
            basis,
        })
    }

    /// No noise sources.
    pub fn none(sites: usize) -> Self {
        Self {
            sites,
            fields: Vec::new(),
            basis: Vec::new(),
        }
    }

    /// Single spatially constant noise source (global phase noise).
    pub fn global(sites: usize) -> Result<Self> {
        Self::new(sites, vec![SpatialField::noise(1, vec![1.0; sites])?])
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn fields(&self) -> &[SpatialField] {
        &self.fields
    }

    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    /// Orthogonal projection of `v` onto the span of the noise fields.
    pub fn project(&self, v: &[f64]) -> Vec<f64> {
        let residual = self.reject(v);
        v.iter().zip(&residual).map(|(a, b)| a - b).collect()
    }

    /// Component of `v` orthogonal to every noise field.
    ///
    /// Modified Gram-Schmidt against the stored orthonormal basis, run twice.
    pub fn reject(&self, v: &[f64]) -> Vec<f64> {
        let mut out = v.to_vec();
        for _ in 0..2 {
            for q in &self.basis {
                let c = dot(q, &out);
                for (o, qi) in out.iter_mut().zip(q) {
                    *o -= c * qi;
                }
            }
        }
        out
    }
}

/// Evaluate `profile` at every site.
pub fn sample_field<F>(profile: F, array: &SensorArray, label: FieldLabel) -> Result<SpatialField>
where
    F: Fn(f64) -> f64,
{
    let values: Vec<f64> = array.positions().iter().map(|&r| profile(r)).collect();
    if let Some((site, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(Error::NonFinite { site, value });
    }
    SpatialField::new(values, label)
}

/// The component `f_⊥` of `signal` orthogonal to all noise fields.
pub fn orthogonal_complement(signal: &SpatialField, noise: &NoiseModel) -> Result<SpatialField> {
    if signal.len() != noise.sites() {
        return Err(Error::LengthMismatch {
            expected: noise.sites(),
            actual: signal.len(),
        });
    }
    let perp = noise.reject(signal.values());
    if norm(&perp) < Tolerances::DEFAULT.orthogonality * signal.norm() {
        return Err(Error::NoSignalComponent);
    }
    SpatialField::new(perp, FieldLabel::Derived).map_err(|_| Error::NoSignalComponent)
}

/// True when the coherence between `s` and `r` survives every noise source.
pub fn dfs_condition(s: &SpinConfig, r: &SpinConfig, noise: &NoiseModel) -> bool {
    let diff = s.difference(r);
    let diff_norm = norm(&diff);
    if diff_norm == 0.0 {
        return true;
    }
    let tol = Tolerances::DEFAULT.orthogonality;
    noise
        .fields()
        .iter()
        .all(|f| f.dot(&diff).abs() <= tol * f.norm() * diff_norm)
}

/// Phase-rate difference `f_⊥·(s − r)` between two configurations.
pub fn effective_signal_gap(s: &SpinConfig, r: &SpinConfig, f_perp: &SpatialField) -> f64 {
    f_perp.dot(&s.difference(r))
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn orthonormal_basis<'a>(vectors: impl Iterator<Item = &'a [f64]>) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let mut w = v.to_vec();
        for _ in 0..2 {
            for q in &basis {
                let c = dot(q, &w);
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= c * qi;
                }
            }
        }
        let n = norm(&w);
        if n > 0.0 {
            w.iter_mut().for_each(|x| *x /= n);
            basis.push(w);
        }
    }
    basis
}

fn numerical_rank(fields: &[SpatialField], rel_tol: f64) -> usize {
    if fields.is_empty() {
        return 0;
    }
    let rows = fields[0].len();
    let m = DMatrix::from_fn(rows, fields.len(), |i, k| fields[k].values()[i]);
    let sv = m.singular_values();
    let largest = sv.iter().cloned().fold(0.0f64, f64::max);
    if largest == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * largest).count()
}
