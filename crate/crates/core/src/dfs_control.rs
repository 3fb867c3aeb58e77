//! Decoherence-free spin configurations and the dynamical control that
//! realises them.
//!
//! A site whose population is inverted at a fraction `α` of the evolution
//! time accumulates phase as if it carried the time-averaged spin
//! `(2α − 1)·s_max`. Choosing these fractions per site lets a probe use
//! effective spins that are not half-integers, which is what makes spin
//! vectors parallel to an arbitrary `f_⊥` (and equally spaced effective
//! spectra) reachable.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::field_geometry::{dfs_condition, effective_signal_gap, NoiseModel, SensorArray, SpatialField};

/// Upper bound on `∏ n_j` for explicit enumeration.
pub const ENUMERATION_LIMIT: u128 = 1 << 24;

/// Effective time-averaged spin per site.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SpinConfig(Vec<f64>);

impl SpinConfig {
    pub fn new(spins: Vec<f64>) -> Self {
        Self(spins)
    }

    pub fn spins(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `self − other`, componentwise.
    pub fn difference(&self, other: &SpinConfig) -> Vec<f64> {
        assert_eq!(self.len(), other.len(), "spin configurations differ in length");
        self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()
    }

    pub fn scaled(&self, factor: f64) -> SpinConfig {
        SpinConfig(self.0.iter().map(|s| s * factor).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// Population inversions of one site, as fractions of the evolution time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiteSchedule {
    pub start: Sign,
    pub local_max: f64,
    pub flips: Vec<f64>,
}

impl SiteSchedule {
    /// Spin at time fraction `x ∈ [0, 1)`.
    pub fn spin_at(&self, x: f64) -> f64 {
        let passed = self.flips.iter().filter(|&&f| f <= x).count();
        let sign = if passed % 2 == 0 { self.start } else { self.start.flipped() };
        sign.value() * self.local_max
    }

    /// Time average over `[0, 1]`, by integrating the piecewise-constant trajectory.
    pub fn realized_average(&self) -> f64 {
        let mut edges = Vec::with_capacity(self.flips.len() + 2);
        edges.push(0.0);
        edges.extend(self.flips.iter().copied());
        edges.push(1.0);
        let mut sign = self.start;
        let mut total = 0.0;
        for w in edges.windows(2) {
            total += sign.value() * self.local_max * (w[1] - w[0]);
            sign = sign.flipped();
        }
        total
    }

    /// Phase accumulated over time `t` under field amplitude `field`.
    pub fn accumulated_phase(&self, field: f64, t: f64) -> f64 {
        field * self.realized_average() * t
    }
}

/// One [`SiteSchedule`] per site.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlipSchedule {
    pub sites: Vec<SiteSchedule>,
}

impl FlipSchedule {
    pub fn realized_config(&self) -> SpinConfig {
        SpinConfig(self.sites.iter().map(SiteSchedule::realized_average).collect())
    }
}

/// Schedule holding a site at `+local_max` for a fraction
/// `α = (target + local_max) / (2·local_max)` and at `−local_max` afterwards.
pub fn flip_schedule_for(target: f64, local_max: f64) -> Result<SiteSchedule> {
    if !(local_max > 0.0) || !target.is_finite() {
        return Err(Error::InvalidInput(format!(
            "flip schedule needs a positive local spin, got {local_max}"
        )));
    }
    let slack = Tolerances::DEFAULT.orthogonality * local_max;
    if target.abs() > local_max + slack {
        return Err(Error::Unreachable(format!(
            "effective spin {target} exceeds local spin {local_max}"
        )));
    }
    let target = target.clamp(-local_max, local_max);
    let alpha = (target + local_max) / (2.0 * local_max);
    let schedule = if alpha >= 1.0 {
        SiteSchedule { start: Sign::Plus, local_max, flips: vec![] }
    } else if alpha <= 0.0 {
        SiteSchedule { start: Sign::Minus, local_max, flips: vec![] }
    } else {
        SiteSchedule { start: Sign::Plus, local_max, flips: vec![alpha] }
    };
    Ok(schedule)
}

/// Sorted eigenvalues of the signal generator restricted to a set of
/// decoherence-free configurations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectiveSpectrum {
    levels: Vec<f64>,
    /// Representative configuration per level; empty for abstract spectra.
    configs: Vec<SpinConfig>,
}

impl EffectiveSpectrum {
    /// Sort `(eigenvalue, configuration)` pairs and merge levels closer than
    /// `level_merge · Δ`, keeping the first configuration seen.
    pub fn from_pairs(mut pairs: Vec<(f64, SpinConfig)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::Degenerate("no levels".into()));
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let range = pairs.last().unwrap().0 - pairs[0].0;
        let tol = Tolerances::DEFAULT.level_merge * range;
        let mut levels: Vec<f64> = Vec::new();
        let mut configs = Vec::new();
        for (value, config) in pairs {
            match levels.last() {
                Some(&last) if value - last <= tol => {}
                _ => {
                    levels.push(value);
                    configs.push(config);
                }
            }
        }
        Ok(Self { levels, configs })
    }

    /// Levels without configurations.
    pub fn from_levels(levels: Vec<f64>) -> Result<Self> {
        let mut s = Self::from_pairs(levels.into_iter().map(|l| (l, SpinConfig(vec![]))).collect())?;
        s.configs.clear();
        Ok(s)
    }

    /// `count` equally spaced levels spanning `[−Δ/2, Δ/2]`.
    pub fn linear(count: usize, delta: f64) -> Result<Self> {
        if count == 0 {
            return Err(Error::Degenerate("no levels".into()));
        }
        if count == 1 {
            return Ok(Self { levels: vec![0.0], configs: vec![] });
        }
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::Degenerate(format!("spectral range {delta}")));
        }
        let gap = delta / (count - 1) as f64;
        let levels = (0..count).map(|k| -delta / 2.0 + k as f64 * gap).collect();
        Ok(Self { levels, configs: vec![] })
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn configs(&self) -> &[SpinConfig] {
        &self.configs
    }

    /// Number of distinct levels `L`.
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Spectral range `Δ = Γ_max − Γ_min`.
    pub fn delta(&self) -> f64 {
        self.levels.last().unwrap() - self.levels[0]
    }

    /// Smallest gap between consecutive levels; zero for a single level.
    pub fn min_gap(&self) -> f64 {
        if self.levels.len() < 2 {
            return 0.0;
        }
        self.levels.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
    }

    /// Common gap when all consecutive gaps agree to `level_merge` relative tolerance.
    pub fn uniform_gap(&self) -> Option<f64> {
        if self.levels.len() < 2 {
            return None;
        }
        let gap = self.delta() / (self.levels.len() - 1) as f64;
        let tol = Tolerances::DEFAULT.level_merge * gap;
        self.levels
            .windows(2)
            .all(|w| ((w[1] - w[0]) - gap).abs() <= tol)
            .then_some(gap)
    }

    pub fn is_linear(&self) -> bool {
        self.uniform_gap().is_some()
    }

    /// Rows `(index, eigenvalue, configuration)`.
    pub fn csv_rows(&self) -> Vec<(usize, f64, Option<&SpinConfig>)> {
        self.levels
            .iter()
            .enumerate()
            .map(|(i, &l)| (i, l, self.configs.get(i)))
            .collect()
    }
}

/// Ladder probe of n+1 configurations parallel to `f_⊥`.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderProbe {
    pub configs: Vec<SpinConfig>,
    /// Per-site schedule realising the effective spin of the `m = 1/2` level.
    pub schedule: FlipSchedule,
    pub spectrum: EffectiveSpectrum,
    /// Local dimension `⌈n·|f_⊥^j| / f_⊥^max⌉` of the economy variant.
    pub economy_dimensions: Vec<usize>,
}

/// Configurations `s_m = m·f_⊥/f_⊥^max` for `m = −n/2 ..= n/2`.
pub fn ladder_probe(f_perp: &SpatialField, n: usize) -> Result<LadderProbe> {
    if !n.is_multiple_of(2) {
        return Err(Error::InvalidInput(format!("ladder size must be even, got {n}")));
    }
    let fmax = f_perp.max_abs();
    if fmax == 0.0 {
        return Err(Error::NoSignalComponent);
    }
    let unit = SpinConfig(f_perp.values().iter().map(|v| v / fmax).collect());
    let half = (n / 2) as i64;
    let configs: Vec<SpinConfig> = (-half..=half).map(|m| unit.scaled(m as f64)).collect();
    let pairs = configs
        .iter()
        .map(|c| (f_perp.dot(c.spins()), c.clone()))
        .collect();
    let spectrum = EffectiveSpectrum::from_pairs(pairs)?;
    let sites = f_perp
        .values()
        .iter()
        .map(|v| flip_schedule_for(v / (2.0 * fmax), 0.5))
        .collect::<Result<Vec<_>>>()?;
    let economy_dimensions = f_perp
        .values()
        .iter()
        .map(|v| {
            let d = n as f64 * v.abs() / fmax;
            // values within rounding of an integer must not round up
            let r = d.round();
            if (d - r).abs() < 1e-9 { r as usize } else { d.ceil() as usize }
        })
        .collect();
    Ok(LadderProbe {
        configs,
        schedule: FlipSchedule { sites },
        spectrum,
        economy_dimensions,
    })
}

/// Configuration with `s_j = sign(f_⊥^j)·s_max,j`, maximising `f_⊥·s`.
pub fn extremal_anchor(array: &SensorArray, f_perp: &SpatialField) -> SpinConfig {
    SpinConfig(
        f_perp
            .values()
            .iter()
            .enumerate()
            .map(|(j, &f)| if f < 0.0 { -array.max_spin(j) } else { array.max_spin(j) })
            .collect(),
    )
}

/// Restriction on the enumerated configurations: paired sites carry opposite spins.
pub type Pairing = [(usize, usize)];

/// All physical configurations in the decoherence-free subspace of `anchor`,
/// sorted by `f_⊥·(c − anchor)`.
pub fn enumerate_dfs_configs(
    array: &SensorArray,
    noise: &NoiseModel,
    f_perp: &SpatialField,
    anchor: &SpinConfig,
) -> Result<Vec<SpinConfig>> {
    enumerate_dfs_configs_paired(array, noise, f_perp, anchor, &[])
}

/// As [`enumerate_dfs_configs`], keeping only configurations where every
/// pair `(i, j)` in `pairing` has `s_i = −s_j`.
pub fn enumerate_dfs_configs_paired(
    array: &SensorArray,
    noise: &NoiseModel,
    f_perp: &SpatialField,
    anchor: &SpinConfig,
    pairing: &Pairing,
) -> Result<Vec<SpinConfig>> {
    let sites = array.len();
    for len in [noise.sites(), f_perp.len(), anchor.len()] {
        if len != sites {
            return Err(Error::LengthMismatch { expected: sites, actual: len });
        }
    }
    for &(i, j) in pairing {
        if i >= sites || j >= sites || i == j {
            return Err(Error::InvalidInput(format!("invalid pair ({i}, {j})")));
        }
    }
    let count = array.configuration_count();
    if count > ENUMERATION_LIMIT {
        return Err(Error::TooLarge { count, limit: ENUMERATION_LIMIT });
    }
    let spins: Vec<Vec<f64>> = (0..sites).map(|j| array.local_spins(j)).collect();
    let radices: Vec<u64> = array.quanta_per_site().iter().map(|&n| n as u64).collect();
    let mut found: Vec<SpinConfig> = (0..count as u64)
        .into_par_iter()
        .filter_map(|mut index| {
            let mut s = Vec::with_capacity(sites);
            for (j, &radix) in radices.iter().enumerate() {
                s.push(spins[j][(index % radix) as usize]);
                index /= radix;
            }
            if pairing.iter().any(|&(i, j)| s[i] != -s[j]) {
                return None;
            }
            let c = SpinConfig(s);
            dfs_condition(&c, anchor, noise).then_some(c)
        })
        .collect();
    found.sort_by(|a, b| {
        effective_signal_gap(a, anchor, f_perp).total_cmp(&effective_signal_gap(b, anchor, f_perp))
    });
    Ok(found)
}

/// Spectrum `{f_⊥·c}` over the decoherence-free configurations of `anchor`.
pub fn dfs_spectrum(
    array: &SensorArray,
    noise: &NoiseModel,
    f_perp: &SpatialField,
    anchor: &SpinConfig,
    pairing: &Pairing,
) -> Result<EffectiveSpectrum> {
    let configs = enumerate_dfs_configs_paired(array, noise, f_perp, anchor, pairing)?;
    if configs.is_empty() {
        return Err(Error::Degenerate("anchor violates the pairing constraint".into()));
    }
    EffectiveSpectrum::from_pairs(configs.into_iter().map(|c| (f_perp.dot(c.spins()), c)).collect())
}

/// Equal spacing of a two-coordinate decoherence-free subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct Equalized {
    /// Reduced effective spin of the first coordinate.
    pub s_eff: f64,
    pub schedule: SiteSchedule,
    pub spectrum: EffectiveSpectrum,
}

/// Reduce the first coordinate's spin to `s_eff = f_⊥²/(4 f_⊥¹)` so that the
/// projections of `(±s_eff, m)` onto `f_⊥` are equally spaced, where the second
/// coordinate has `second_levels` ladder levels (two for a qubit).
pub fn equalize_multidim(f_perp: &[f64], second_levels: usize) -> Result<Equalized> {
    if f_perp.len() != 2 {
        return Err(Error::LengthMismatch { expected: 2, actual: f_perp.len() });
    }
    if second_levels < 2 {
        return Err(Error::InvalidInput("second coordinate needs at least two levels".into()));
    }
    let (f1, f2) = (f_perp[0], f_perp[1]);
    let scale = f1.abs().max(f2.abs());
    if scale == 0.0 || f1.abs() <= Tolerances::DEFAULT.orthogonality * scale {
        return Err(Error::Degenerate("first component of f_perp vanishes".into()));
    }
    if f2.abs() <= Tolerances::DEFAULT.orthogonality * scale {
        return Err(Error::Degenerate("second component of f_perp vanishes".into()));
    }
    let s_eff = f2 / (4.0 * f1);
    let schedule = flip_schedule_for(s_eff, 0.5)?;
    let top = (second_levels - 1) as f64 / 2.0;
    let mut pairs = Vec::with_capacity(2 * second_levels);
    for sign in [-1.0, 1.0] {
        for m in 0..second_levels {
            let c = SpinConfig(vec![sign * s_eff, m as f64 - top]);
            pairs.push((c.spins()[0] * f1 + c.spins()[1] * f2, c));
        }
    }
    let spectrum = EffectiveSpectrum::from_pairs(pairs)?;
    Ok(Equalized { s_eff, schedule, spectrum })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeMode {
    /// Targets closed under negation; each `±λ` pair uses one degenerate copy
    /// switched between the `±Δ/2` eigenstates.
    Symmetric,
    /// Arbitrary targets; each eigenstate is mixed with an effective
    /// zero-energy level. Needs two auxiliary levels per copy.
    Asymmetric,
}

/// Time fractions spent in the `+Δ/2`, `−Δ/2` and zero-energy states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShapedLevel {
    pub target: f64,
    pub at_plus: f64,
    pub at_minus: f64,
    pub at_zero: f64,
}

impl ShapedLevel {
    pub fn effective_value(&self, delta: f64) -> f64 {
        (self.at_plus - self.at_minus) * delta / 2.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShapedSpectrum {
    pub spectrum: EffectiveSpectrum,
    pub levels: Vec<ShapedLevel>,
    pub needs_zero_level: bool,
}

/// Realise `targets` from a two-level decoherence-free subspace of range
/// `delta` with `degeneracy` copies of each eigenstate.
pub fn shape_spectrum(delta: f64, degeneracy: usize, targets: &[f64], mode: ShapeMode) -> Result<ShapedSpectrum> {
    if !(delta > 0.0) {
        return Err(Error::Degenerate(format!("spectral range {delta}")));
    }
    if targets.is_empty() {
        return Err(Error::InvalidInput("no target levels".into()));
    }
    let half = delta / 2.0;
    let slack = Tolerances::DEFAULT.level_merge * delta;
    if let Some(t) = targets.iter().find(|t| !t.is_finite() || t.abs() > half + slack) {
        return Err(Error::Unreachable(format!("level {t} outside [-{half}, {half}]")));
    }
    if targets.len() > 2 * degeneracy {
        return Err(Error::Unreachable(format!(
            "{} levels need {} degenerate copies, {} available",
            targets.len(),
            targets.len().div_ceil(2),
            degeneracy
        )));
    }
    let levels: Vec<ShapedLevel> = match mode {
        ShapeMode::Symmetric => {
            for t in targets {
                if !targets.iter().any(|u| (u + t).abs() <= slack) {
                    return Err(Error::InvalidInput(format!("level {t} has no mirror level")));
                }
            }
            targets
                .iter()
                .map(|&t| {
                    let alpha = ((t + half) / delta).clamp(0.0, 1.0);
                    ShapedLevel { target: t, at_plus: alpha, at_minus: 1.0 - alpha, at_zero: 0.0 }
                })
                .collect()
        }
        ShapeMode::Asymmetric => targets
            .iter()
            .map(|&t| {
                let beta = (t.abs() / half).clamp(0.0, 1.0);
                let (at_plus, at_minus) = if t >= 0.0 { (beta, 0.0) } else { (0.0, beta) };
                ShapedLevel { target: t, at_plus, at_minus, at_zero: 1.0 - beta }
            })
            .collect(),
    };
    // Single effective coordinate carrying field Δ with spin ±1/2 at the extremes.
    let pairs = levels
        .iter()
        .map(|l| {
            let value = l.effective_value(delta);
            (value, SpinConfig(vec![value / delta]))
        })
        .collect();
    Ok(ShapedSpectrum {
        spectrum: EffectiveSpectrum::from_pairs(pairs)?,
        levels,
        needs_zero_level: mode == ShapeMode::Asymmetric,
    })
}
