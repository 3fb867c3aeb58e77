use num_complex::Complex64;

use super::{averaged_state, AveragedState, Prior, ProbeState};
use crate::config::Tolerances;
use crate::dfs_control::EffectiveSpectrum;
use crate::error::{Error, Result};

/// Quantum Fisher information `4t²·Var(Γ)` of a pure probe for the generator `Ĝ₀t`.
pub fn qfi_pure(probe: &ProbeState, levels: &[f64], t: f64) -> Result<f64> {
    if levels.len() != probe.len() {
        return Err(Error::LengthMismatch { expected: probe.len(), actual: levels.len() });
    }
    let (_, var) = probe.generator_moments(levels);
    Ok(4.0 * t * t * var)
}

/// Symmetric-logarithmic-derivative QFI of `state` for the diagonal generator `Ĝ₀t`:
/// `F = 2 Σ_{k,l} (λ_k − λ_l)²/(λ_k + λ_l)·|⟨k|Ĝ₀t|l⟩|²`.
pub fn qfi_mixed(state: &AveragedState, levels: &[f64], t: f64) -> Result<f64> {
    let n = state.dim();
    if levels.len() != n {
        return Err(Error::LengthMismatch { expected: n, actual: levels.len() });
    }
    let tol = Tolerances::DEFAULT;
    let eig = state.eigen();
    let lambda: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    if let Some(&min) = lambda.iter().min_by(|a, b| a.total_cmp(b)) {
        if min < -tol.psd {
            return Err(Error::InvalidState(format!("negative eigenvalue {min}")));
        }
    }
    let v = &eig.eigenvectors;
    let mut f = 0.0;
    for k in 0..n {
        for l in 0..n {
            let (a, b) = (lambda[k].max(0.0), lambda[l].max(0.0));
            let sum = a + b;
            if sum <= tol.eigen_floor || k == l {
                continue;
            }
            let h: Complex64 = (0..n).map(|i| v[(i, k)].conj() * levels[i] * v[(i, l)]).sum();
            f += (a - b).powi(2) / sum * h.norm_sqr();
        }
    }
    Ok(2.0 * t * t * f)
}

/// `W₁²/W₀² = 1 − W₀²·F(ρ̄, Ĝ₀t)` for a Gaussian prior of standard deviation `W₀`.
pub fn variance_reduction(
    probe: &ProbeState,
    prior: &Prior,
    spectrum: &EffectiveSpectrum,
    t: f64,
) -> Result<f64> {
    let state = averaged_state(probe, prior, spectrum, t)?;
    let w0 = prior.width();
    Ok(1.0 - w0 * w0 * qfi_mixed(&state, spectrum.levels(), t)?)
}
