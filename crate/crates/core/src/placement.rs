//! Sensor placements for sensing a gradient (or any profile `f(r)`) under
//! spatially constant phase noise.
//!
//! All spins are in units where a qubit carries `±1/2`. The protected
//! subspace is the set of configurations with vanishing total spin; plans
//! that use logical qubits additionally require paired sites to be
//! antiparallel.

use std::collections::BTreeSet;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::dfs_control::{self, EffectiveSpectrum, SpinConfig};
use crate::error::{Error, Result};
use crate::field_geometry::{orthogonal_complement, NoiseModel, SensorArray, SpatialField};

/// Exact rational value.
pub type Exact = Ratio<i64>;

/// Largest qubit count accepted by the exponential families.
pub const MAX_EXPONENTIAL_QUBITS: usize = 48;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    TwoPoint,
    Linear,
    Exponential,
    ArbitraryLinear,
    ArbitraryExponential,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::TwoPoint => "two_point",
            Family::Linear => "linear",
            Family::Exponential => "exponential",
            Family::ArbitraryLinear => "arbitrary_linear",
            Family::ArbitraryExponential => "arbitrary_exponential",
        }
    }
}

/// `Δ`, `L` and the level spacing of an equally spaced spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub delta: f64,
    pub levels: usize,
    pub gap: f64,
}

impl SpectrumSummary {
    /// The levels `−Δ/2 + k·gap`, `k = 0..levels`.
    pub fn level_set(&self) -> Vec<f64> {
        (0..self.levels)
            .map(|k| -self.delta / 2.0 + k as f64 * self.gap)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlacementPlan {
    pub family: Family,
    pub qubits: usize,
    pub array: SensorArray,
    /// Signal profile at each site.
    pub field: Vec<f64>,
    /// Logical-qubit pairs `(j, −j)`; empty when the plan uses the full protected subspace.
    pub pairing: Vec<(usize, usize)>,
    /// Closed-form spectrum realised inside the protected subspace.
    pub predicted: SpectrumSummary,
}

impl PlacementPlan {
    pub fn positions(&self) -> &[f64] {
        self.array.positions()
    }

    /// Signal component orthogonal to the constant noise profile.
    pub fn f_perp(&self) -> Result<SpatialField> {
        let noise = NoiseModel::global(self.array.len())?;
        orthogonal_complement(&SpatialField::signal(self.field.clone())?, &noise)
    }

    /// Spectrum obtained by enumerating every protected configuration.
    pub fn enumerated_spectrum(&self) -> Result<EffectiveSpectrum> {
        let f_perp = self.f_perp()?;
        if !self.pairing.is_empty() && self.pairing.len() * 2 == self.array.len() {
            return self.enumerate_logical(&f_perp);
        }
        let noise = NoiseModel::global(self.array.len())?;
        let anchor = dfs_control::extremal_anchor(&self.array, &f_perp);
        dfs_control::dfs_spectrum(&self.array, &noise, &f_perp, &anchor, &self.pairing)
    }

    fn enumerate_logical(&self, f_perp: &SpatialField) -> Result<EffectiveSpectrum> {
        let pairs = self.pairing.len();
        if pairs > 24 {
            return Err(Error::TooLarge {
                count: 1u128 << pairs,
                limit: dfs_control::ENUMERATION_LIMIT,
            });
        }
        let mut out = Vec::with_capacity(1 << pairs);
        for mask in 0u64..(1u64 << pairs) {
            let mut s = vec![0.0; self.array.len()];
            for (p, &(i, j)) in self.pairing.iter().enumerate() {
                let up = if mask >> p & 1 == 1 { 0.5 } else { -0.5 };
                s[i] = up;
                s[j] = -up;
            }
            let c = SpinConfig::new(s);
            out.push((f_perp.dot(c.spins()), c));
        }
        EffectiveSpectrum::from_pairs(out)
    }

    /// For each logical pair, the eigenvalues `(Ĝ₁, Ĝ₀)` of `|+⟩_L = |↑⟩_j|↓⟩_{−j}`.
    pub fn logical_eigenvalues(&self) -> Vec<(f64, f64)> {
        self.pairing
            .iter()
            .map(|&(i, j)| {
                let (si, sj) = (0.5, -0.5);
                (si + sj, self.field[i] * si + self.field[j] * sj)
            })
            .collect()
    }

    /// Tabulated closed form of `Δ` and `L` for the gradient families.
    pub fn tabulated(&self) -> Option<(Exact, u64)> {
        tabulated(self.family, self.qubits).ok()
    }
}

fn check_even(n: usize) -> Result<()> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::InvalidInput(format!(
            "qubit count must be even and at least 2, got {n}"
        )));
    }
    Ok(())
}

/// `N/2` qubits at each end of the interval.
pub fn two_point_placement(n: usize) -> Result<PlacementPlan> {
    check_even(n)?;
    let array = SensorArray::new(vec![-0.5, 0.5], vec![n / 2 + 1; 2])?;
    Ok(PlacementPlan {
        family: Family::TwoPoint,
        qubits: n,
        field: array.positions().to_vec(),
        array,
        pairing: vec![],
        predicted: SpectrumSummary {
            delta: n as f64 / 2.0,
            levels: n / 2 + 1,
            gap: 1.0,
        },
    })
}

/// Equally spaced qubits `r_{±j} = ±(j − 1/2)/(N − 1)`, ascending.
pub fn linear_placement(n: usize) -> Result<PlacementPlan> {
    check_even(n)?;
    let positions: Vec<f64> = (1..=n)
        .map(|j| (2.0 * j as f64 - 1.0 - n as f64) / (2.0 * (n as f64 - 1.0)))
        .collect();
    let nf = n as f64;
    let array = SensorArray::qubits(positions)?;
    Ok(PlacementPlan {
        family: Family::Linear,
        qubits: n,
        field: array.positions().to_vec(),
        array,
        pairing: vec![],
        predicted: SpectrumSummary {
            delta: nf * nf / (4.0 * (nf - 1.0)),
            levels: n * n / 4 + 1,
            gap: 1.0 / (nf - 1.0),
        },
    })
}

fn pair_order(n: usize, value: impl Fn(usize, f64) -> f64) -> Vec<f64> {
    (1..=n / 2)
        .flat_map(|j| [value(j, 1.0), value(j, -1.0)])
        .collect()
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n / 2).map(|p| (2 * p, 2 * p + 1)).collect()
}

fn exponential_summary(n: usize, a: f64) -> SpectrumSummary {
    let levels = 1usize << (n / 2);
    let delta = 2.0 * a * (1.0 - (-(n as f64) / 2.0).exp2());
    SpectrumSummary {
        delta,
        levels,
        gap: delta / (levels - 1) as f64,
    }
}

/// Logical qubits at `r_{±j} = ±(1/2)/2^{j−1}`, listed as `r_{+1}, r_{−1}, r_{+2}, …`.
pub fn exponential_placement(n: usize) -> Result<PlacementPlan> {
    check_even(n)?;
    if n > MAX_EXPONENTIAL_QUBITS {
        return Err(Error::TooLarge {
            count: n as u128,
            limit: MAX_EXPONENTIAL_QUBITS as u128,
        });
    }
    let positions = pair_order(n, |j, sign| sign * 0.5 / (1u64 << (j - 1)) as f64);
    let array = SensorArray::qubits(positions)?;
    Ok(PlacementPlan {
        family: Family::Exponential,
        qubits: n,
        field: array.positions().to_vec(),
        array,
        pairing: pairs(n),
        predicted: exponential_summary(n, 1.0),
    })
}

/// How to find a position with a prescribed profile value.
pub enum Inverse<'a> {
    /// Caller-supplied inverse of the profile.
    Function(&'a dyn Fn(f64) -> f64),
    /// Bisection on `[lo, hi]`, which must bracket the target value.
    Bisection { lo: f64, hi: f64 },
}

fn invert(profile: &dyn Fn(f64) -> f64, inverse: &Inverse<'_>, target: f64) -> Result<f64> {
    let scale = 1.0 + target.abs();
    let r = match inverse {
        Inverse::Function(f) => f(target),
        Inverse::Bisection { lo, hi } => bisect(profile, target, *lo, *hi)?,
    };
    if !r.is_finite() {
        return Err(Error::Unreachable(format!("no position with profile value {target}")));
    }
    let got = profile(r);
    if !((got - target).abs() <= 1e-9 * scale) {
        return Err(Error::Unreachable(format!(
            "inverse maps {target} to {r}, where the profile is {got}"
        )));
    }
    Ok(r)
}

fn bisect(profile: &dyn Fn(f64) -> f64, target: f64, lo: f64, hi: f64) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, fb) = (profile(a) - target, profile(b) - target);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa * fb < 0.0) {
        return Err(Error::Unreachable(format!(
            "profile value {target} is not bracketed by [{lo}, {hi}]"
        )));
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m == a || m == b {
            break;
        }
        let fm = profile(m) - target;
        if fm == 0.0 {
            return Ok(m);
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Positions where the profile takes the values `a(j − 1/2)/(N − 1) + b`.
pub fn arbitrary_linear_placement(
    profile: &dyn Fn(f64) -> f64,
    inverse: Inverse<'_>,
    n: usize,
    a: f64,
    b: f64,
) -> Result<PlacementPlan> {
    check_even(n)?;
    if a == 0.0 || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidInput(format!("slope must be finite and nonzero, got {a}")));
    }
    let nf = n as f64;
    let field: Vec<f64> = (1..=n)
        .map(|j| a * (j as f64 - 0.5) / (nf - 1.0) + b)
        .collect();
    let positions = field
        .iter()
        .map(|&f| invert(profile, &inverse, f))
        .collect::<Result<Vec<_>>>()?;
    let array = SensorArray::qubits(positions)?;
    Ok(PlacementPlan {
        family: Family::ArbitraryLinear,
        qubits: n,
        field,
        array,
        pairing: vec![],
        predicted: SpectrumSummary {
            delta: a.abs() * nf * nf / (4.0 * (nf - 1.0)),
            levels: n * n / 4 + 1,
            gap: a.abs() / (nf - 1.0),
        },
    })
}

/// Logical pairs with `f(r_{±j}) = ½(f_max + f_min ± (f_max − f_min)/2^{j−1})`.
pub fn arbitrary_exponential_placement(
    profile: &dyn Fn(f64) -> f64,
    inverse: Inverse<'_>,
    f_max: f64,
    f_min: f64,
    n: usize,
) -> Result<PlacementPlan> {
    check_even(n)?;
    if n > MAX_EXPONENTIAL_QUBITS {
        return Err(Error::TooLarge {
            count: n as u128,
            limit: MAX_EXPONENTIAL_QUBITS as u128,
        });
    }
    if !(f_max > f_min) || !f_max.is_finite() || !f_min.is_finite() {
        return Err(Error::InvalidInput(format!(
            "need f_max > f_min, got {f_max} and {f_min}"
        )));
    }
    let a = f_max - f_min;
    let field = pair_order(n, |j, sign| {
        0.5 * (f_max + f_min + sign * a / (1u64 << (j - 1)) as f64)
    });
    let positions = field
        .iter()
        .map(|&f| invert(profile, &inverse, f))
        .collect::<Result<Vec<_>>>()?;
    let array = SensorArray::qubits(positions)?;
    Ok(PlacementPlan {
        family: Family::ArbitraryExponential,
        qubits: n,
        field,
        array,
        pairing: pairs(n),
        predicted: exponential_summary(n, a),
    })
}

/// Tabulated closed forms of `(Δ, L)` for the three gradient families.
pub fn tabulated(family: Family, n: usize) -> Result<(Exact, u64)> {
    check_even(n)?;
    let ni = n as i64;
    match family {
        Family::TwoPoint => Ok((Exact::from_integer(ni), (n / 2) as u64)),
        Family::Linear => Ok((Exact::new(ni * ni, 4 * (ni - 1)), (n * n / 4) as u64)),
        Family::Exponential => {
            if n > MAX_EXPONENTIAL_QUBITS {
                return Err(Error::TooLarge {
                    count: n as u128,
                    limit: MAX_EXPONENTIAL_QUBITS as u128,
                });
            }
            let levels = 1i64 << (n / 2);
            Ok((Exact::new(2 * (levels - 1), levels), levels as u64))
        }
        other => Err(Error::InvalidInput(format!(
            "no tabulated closed form for {}",
            other.name()
        ))),
    }
}

/// Protected-subspace levels of a gradient family, enumerated in exact arithmetic.
pub fn exact_levels(family: Family, n: usize) -> Result<Vec<Exact>> {
    check_even(n)?;
    let ni = n as i64;
    let mut set = BTreeSet::new();
    match family {
        Family::TwoPoint => {
            // local spins m = k − N/4 at r = ±1/2; protection forces m₋ = −m₊
            for k in 0..=ni / 2 {
                let m_plus = Exact::new(4 * k - ni, 4);
                let m_minus = -m_plus;
                set.insert(Exact::new(1, 2) * m_plus - Exact::new(1, 2) * m_minus);
            }
        }
        Family::Linear => {
            if n > 24 {
                return Err(Error::TooLarge {
                    count: 1u128 << n,
                    limit: dfs_control::ENUMERATION_LIMIT,
                });
            }
            let positions: Vec<Exact> = (1..=ni)
                .map(|j| Exact::new(2 * j - 1 - ni, 2 * (ni - 1)))
                .collect();
            for mask in 0u32..(1u32 << n) {
                if mask.count_ones() as usize != n / 2 {
                    continue;
                }
                let level = positions
                    .iter()
                    .enumerate()
                    .map(|(j, &r)| if mask >> j & 1 == 1 { r / 2 } else { -r / 2 })
                    .sum();
                set.insert(level);
            }
        }
        Family::Exponential => {
            let pairs = n / 2;
            if pairs > 24 {
                return Err(Error::TooLarge {
                    count: 1u128 << pairs,
                    limit: dfs_control::ENUMERATION_LIMIT,
                });
            }
            // an antiparallel pair at ±r contributes ±r
            let radii: Vec<Exact> = (1..=pairs).map(|j| Exact::new(1, 1i64 << j)).collect();
            for mask in 0u32..(1u32 << pairs) {
                let level = radii
                    .iter()
                    .enumerate()
                    .map(|(p, &r)| if mask >> p & 1 == 1 { r } else { -r })
                    .sum();
                set.insert(level);
            }
        }
        other => {
            return Err(Error::InvalidInput(format!(
                "exact enumeration covers the gradient families, not {}",
                other.name()
            )))
        }
    }
    Ok(set.into_iter().collect())
}

/// One row of the `Δ`/`L` summary table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub family: Family,
    pub qubits: usize,
    /// Tabulated closed form.
    pub delta: Exact,
    pub levels: u64,
    /// Exact enumeration of the protected subspace.
    pub delta_dfs: Exact,
    pub levels_dfs: u64,
    pub gap_dfs: Exact,
}

/// Summary rows for every gradient family and every qubit count in `qubits`.
pub fn table1(qubits: impl IntoIterator<Item = usize>) -> Result<Vec<TableRow>> {
    let mut rows = Vec::new();
    for n in qubits {
        for family in [Family::TwoPoint, Family::Linear, Family::Exponential] {
            let (delta, levels) = tabulated(family, n)?;
            let exact = exact_levels(family, n)?;
            let gap_dfs = exact
                .windows(2)
                .map(|w| w[1] - w[0])
                .min()
                .unwrap_or_else(|| Exact::from_integer(0));
            rows.push(TableRow {
                family,
                qubits: n,
                delta,
                levels,
                delta_dfs: exact[exact.len() - 1] - exact[0],
                levels_dfs: exact.len() as u64,
                gap_dfs,
            });
        }
    }
    Ok(rows)
}

/// True when `a` and `b` agree as sets after merging points within `level_merge · Δ`.
pub fn same_level_set(a: &[f64], b: &[f64], delta: f64) -> bool {
    let tol = Tolerances::DEFAULT.level_merge * delta.abs().max(f64::MIN_POSITIVE);
    let merged = |v: &[f64]| -> Vec<f64> {
        let mut v = v.to_vec();
        v.sort_by(f64::total_cmp);
        let mut out: Vec<f64> = Vec::new();
        for x in v {
            if out.last().is_none_or(|&l| x - l > tol) {
                out.push(x);
            }
        }
        out
    };
    let (a, b) = (merged(a), merged(b));
    a.len() == b.len() && a.iter().zip(&b).all(|(x, y)| (x - y).abs() <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn ex(n: i64, d: i64) -> Exact {
        Exact::new(n, d)
    }

    #[test]
    fn tabulated_examples() {
        assert_eq!(tabulated(Family::TwoPoint, 4).unwrap(), (ex(4, 1), 2));
        assert_eq!(tabulated(Family::TwoPoint, 2).unwrap(), (ex(2, 1), 1));
        assert_eq!(tabulated(Family::TwoPoint, 12).unwrap(), (ex(12, 1), 6));
        assert_eq!(tabulated(Family::Linear, 4).unwrap(), (ex(4, 3), 4));
        assert_eq!(tabulated(Family::Linear, 8).unwrap(), (ex(16, 7), 16));
        assert_eq!(tabulated(Family::Exponential, 4).unwrap(), (ex(3, 2), 4));
        assert_eq!(tabulated(Family::Exponential, 8).unwrap(), (ex(15, 8), 16));
        assert!(tabulated(Family::Linear, 5).is_err());
    }

    #[test]
    fn two_point_plan() {
        let p = two_point_placement(4).unwrap();
        assert_eq!(p.tabulated(), Some((ex(4, 1), 2)));
        assert_eq!(p.array.quanta_per_site(), &[3, 3]);
        let s = p.enumerated_spectrum().unwrap();
        assert_eq!(s.levels(), &[-1.0, 0.0, 1.0]);
        assert!(two_point_placement(3).is_err());
    }

    #[test]
    fn linear_plan_n4() {
        let p = linear_placement(4).unwrap();
        let expected = [-0.5, -1.0 / 6.0, 1.0 / 6.0, 0.5];
        for (a, b) in p.positions().iter().zip(expected) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(p.predicted.delta, 4.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.predicted.gap, 1.0 / 3.0, epsilon = 1e-15);
        // brute force over all 16 configurations with vanishing total spin
        let s = p.enumerated_spectrum().unwrap();
        assert_eq!(s.len(), 5);
        assert!(s.is_linear());
        assert_eq!(
            exact_levels(Family::Linear, 4).unwrap(),
            vec![ex(-2, 3), ex(-1, 3), ex(0, 1), ex(1, 3), ex(2, 3)]
        );
    }

    #[test]
    fn linear_plan_n8() {
        let p = linear_placement(8).unwrap();
        assert_abs_diff_eq!(p.predicted.delta, 16.0 / 7.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.predicted.gap, 1.0 / 7.0, epsilon = 1e-15);
        assert!(same_level_set(
            p.enumerated_spectrum().unwrap().levels(),
            &p.predicted.level_set(),
            p.predicted.delta
        ));
    }

    #[test]
    fn linear_realizability_up_to_16() {
        for n in (2..=16).step_by(2) {
            let levels = exact_levels(Family::Linear, n).unwrap();
            let gap = ex(1, n as i64 - 1);
            assert!(levels.windows(2).all(|w| w[1] - w[0] == gap), "gap hole at N={n}");
            assert_eq!(levels.len(), n * n / 4 + 1);
        }
    }

    #[test]
    fn exponential_plans() {
        let p = exponential_placement(4).unwrap();
        assert_eq!(p.positions(), &[0.5, -0.5, 0.25, -0.25]);
        assert_abs_diff_eq!(p.predicted.delta, 1.5);
        assert_eq!(p.predicted.levels, 4);

        let p = exponential_placement(2).unwrap();
        assert_abs_diff_eq!(p.predicted.delta, 1.0);
        assert_eq!(p.predicted.levels, 2);

        let p = exponential_placement(6).unwrap();
        assert_abs_diff_eq!(p.predicted.delta, 1.75);
        let s = p.enumerated_spectrum().unwrap();
        assert_eq!(s.len(), 8);
        assert!(s.is_linear());
        assert!(same_level_set(s.levels(), &p.predicted.level_set(), 1.75));
    }

    #[test]
    fn unpaired_exponential_subspace_is_not_equidistant() {
        let mut p = exponential_placement(4).unwrap();
        p.pairing.clear();
        let s = p.enumerated_spectrum().unwrap();
        assert_eq!(s.len(), 5);
        assert!(!s.is_linear());
    }

    #[test]
    fn arbitrary_linear_identity_profile() {
        let id = |r: f64| r;
        let p = arbitrary_linear_placement(&id, Inverse::Function(&id), 4, 1.0, 0.0).unwrap();
        let lin = linear_placement(4).unwrap();
        // same f_perp; positions shifted by N/(2(N−1))
        for (a, b) in p.positions().iter().zip(lin.positions()) {
            assert_abs_diff_eq!(a - b, 2.0 / 3.0, epsilon = 1e-15);
        }
        let (fa, fb) = (p.f_perp().unwrap(), lin.f_perp().unwrap());
        for (a, b) in fa.values().iter().zip(fb.values()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-15);
        }
        assert!(same_level_set(
            p.enumerated_spectrum().unwrap().levels(),
            lin.enumerated_spectrum().unwrap().levels(),
            p.predicted.delta
        ));

        let p2 = arbitrary_linear_placement(&id, Inverse::Function(&id), 4, 2.0, 0.0).unwrap();
        assert_abs_diff_eq!(p2.predicted.delta, 8.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn arbitrary_linear_cubic_profile() {
        let cube = |r: f64| r * r * r;
        let root = |f: f64| f.cbrt();
        let p = arbitrary_linear_placement(&cube, Inverse::Function(&root), 4, 1.0, 0.0).unwrap();
        for (r, f) in p.positions().iter().zip(&p.field) {
            assert_abs_diff_eq!(r.powi(3), *f, epsilon = 1e-14);
        }
        let id = |r: f64| r;
        let q = arbitrary_linear_placement(&id, Inverse::Function(&id), 4, 1.0, 0.0).unwrap();
        assert!(same_level_set(
            p.enumerated_spectrum().unwrap().levels(),
            q.enumerated_spectrum().unwrap().levels(),
            q.predicted.delta
        ));
        // bisection fallback finds the same positions
        let b = arbitrary_linear_placement(&cube, Inverse::Bisection { lo: -2.0, hi: 2.0 }, 4, 1.0, 0.0).unwrap();
        for (x, y) in b.positions().iter().zip(p.positions()) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-12);
        }
    }

    #[test]
    fn arbitrary_linear_out_of_range() {
        let sq = |r: f64| r * r;
        let err = arbitrary_linear_placement(&sq, Inverse::Bisection { lo: 0.0, hi: 1.0 }, 4, 1.0, 0.0);
        assert!(matches!(err, Err(Error::Unreachable(_))));
    }

    #[test]
    fn arbitrary_exponential_examples() {
        let id = |r: f64| r;
        let p = arbitrary_exponential_placement(&id, Inverse::Function(&id), 0.5, -0.5, 4).unwrap();
        assert_eq!(p.positions(), exponential_placement(4).unwrap().positions());

        let sq = |r: f64| r * r;
        let sqrt = |f: f64| f.sqrt();
        let p = arbitrary_exponential_placement(&sq, Inverse::Function(&sqrt), 1.0, 0.0, 4).unwrap();
        assert_eq!(p.field, vec![1.0, 0.0, 0.75, 0.25]);
        let expected = [1.0, 0.0, 3f64.sqrt() / 2.0, 0.5];
        for (a, b) in p.positions().iter().zip(expected) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
        assert_eq!(p.pairing, vec![(0, 1), (2, 3)]);
        for ((g1, g0), &(i, j)) in p.logical_eigenvalues().iter().zip(&p.pairing) {
            assert_eq!(*g1, 0.0);
            assert_abs_diff_eq!(*g0, (p.field[i] - p.field[j]) / 2.0, epsilon = 1e-15);
        }
        let s = p.enumerated_spectrum().unwrap();
        assert!(same_level_set(s.levels(), &p.predicted.level_set(), p.predicted.delta));

        let p = arbitrary_exponential_placement(&sq, Inverse::Function(&sqrt), 3.0, 1.0, 2).unwrap();
        assert_eq!(p.predicted.levels, 2);
        assert_abs_diff_eq!(p.predicted.delta, 2.0);
    }

    #[test]
    fn gradient_plans_are_antisymmetric() {
        for n in [4, 6, 8, 10] {
            let p = linear_placement(n).unwrap();
            let f = p.f_perp().unwrap();
            for j in 0..n {
                assert_abs_diff_eq!(f.values()[j], -f.values()[n - 1 - j], epsilon = 1e-15);
            }
            let p = exponential_placement(n).unwrap();
            let f = p.f_perp().unwrap();
            for &(i, j) in &p.pairing {
                assert_abs_diff_eq!(f.values()[i], -f.values()[j], epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn trade_off_ordering() {
        // strict for N ≥ 10; at smaller N the linear and exponential values cross
        for n in (10..=16).step_by(2) {
            let rows = table1([n]).unwrap();
            let (tp, li, ex) = (&rows[0], &rows[1], &rows[2]);
            assert!(tp.delta > li.delta && li.delta > ex.delta);
            assert!(tp.levels < li.levels && li.levels < ex.levels);
            assert!(tp.delta_dfs > li.delta_dfs && li.delta_dfs > ex.delta_dfs);
            assert!(tp.levels_dfs < li.levels_dfs && li.levels_dfs < ex.levels_dfs);
        }
    }

    #[test]
    fn table_rows() {
        let rows = table1([8]).unwrap();
        assert_eq!((rows[0].delta, rows[0].levels), (ex(8, 1), 4));
        assert_eq!((rows[1].delta, rows[1].levels), (ex(16, 7), 16));
        assert_eq!((rows[2].delta, rows[2].levels), (ex(15, 8), 16));
        assert_eq!((rows[0].delta_dfs, rows[0].levels_dfs), (ex(4, 1), 5));
        assert_eq!((rows[1].delta_dfs, rows[1].levels_dfs), (ex(16, 7), 17));
        assert_eq!((rows[2].delta_dfs, rows[2].levels_dfs), (ex(15, 8), 16));
        assert_eq!(rows[2].gap_dfs, ex(1, 8));
    }
}
