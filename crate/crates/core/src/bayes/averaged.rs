use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::{Prior, ProbeState};
use crate::config::Tolerances;
use crate::dfs_control::EffectiveSpectrum;
use crate::error::{Error, Result};

/// Prior-weighted density matrix in the generator eigenbasis.
#[derive(Debug, Clone, PartialEq)]
pub struct AveragedState {
    rho: DMatrix<Complex64>,
}

impl AveragedState {
    /// Validates hermiticity, unit trace and positivity.
    pub fn new(rho: DMatrix<Complex64>) -> Result<Self> {
        if !rho.is_square() || rho.nrows() == 0 {
            return Err(Error::InvalidState("density matrix must be square and nonempty".into()));
        }
        let tol = Tolerances::DEFAULT;
        let n = rho.nrows();
        let herm_tol = tol.state * n as f64;
        for i in 0..n {
            for j in 0..=i {
                if (rho[(i, j)] - rho[(j, i)].conj()).norm() > herm_tol {
                    return Err(Error::InvalidState(format!("not Hermitian at ({i}, {j})")));
                }
            }
        }
        let trace = rho.trace();
        if (trace.re - 1.0).abs() > herm_tol || trace.im.abs() > herm_tol {
            return Err(Error::InvalidState(format!("trace is {trace}")));
        }
        let state = Self { rho };
        let min = state.eigen().eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -tol.psd {
            return Err(Error::InvalidState(format!("negative eigenvalue {min}")));
        }
        Ok(state)
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn pure(probe: &ProbeState) -> Self {
        let c = probe.amplitudes();
        let n = c.len();
        Self {
            rho: DMatrix::from_fn(n, n, |i, j| c[i] * c[j].conj()),
        }
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.rho
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    /// Hermitian eigendecomposition.
    pub fn eigen(&self) -> SymmetricEigen<Complex64, nalgebra::Dyn> {
        // symmetrise to remove rounding asymmetry before the Hermitian solver
        let h = (&self.rho + self.rho.adjoint()) * Complex64::new(0.5, 0.0);
        h.symmetric_eigen()
    }
}

/// `ρ̄_{nm} = c_n c_m*·exp(−i ω̄ t (Γ_n − Γ_m))·exp(−t²W₀²Δ²(n−m)²/(2(L−1)²))`
/// for a Gaussian prior of mean `ω̄` and standard deviation `W₀` over an
/// equally spaced spectrum.
pub fn averaged_state(
    probe: &ProbeState,
    prior: &Prior,
    spectrum: &EffectiveSpectrum,
    t: f64,
) -> Result<AveragedState> {
    let Prior::Gaussian { mean, std_dev } = *prior else {
        return Err(Error::InvalidInput("averaged state needs a Gaussian prior".into()));
    };
    prior.validate()?;
    if spectrum.len() != probe.len() {
        return Err(Error::LengthMismatch { expected: probe.len(), actual: spectrum.len() });
    }
    if !(t >= 0.0) {
        return Err(Error::InvalidInput(format!("evolution time must be non-negative, got {t}")));
    }
    let l = spectrum.len();
    let gap = if l == 1 {
        0.0
    } else {
        spectrum.uniform_gap().ok_or(Error::NotLinear)?
    };
    let c = probe.amplitudes();
    let levels = spectrum.levels();
    let width = t * std_dev * gap;
    let rho = DMatrix::from_fn(l, l, |n, m| {
        let d = n as f64 - m as f64;
        let damping = (-(width * d).powi(2) / 2.0).exp();
        let drift = Complex64::from_polar(1.0, -mean * t * (levels[n] - levels[m]));
        c[n] * c[m].conj() * drift * damping
    });
    Ok(AveragedState { rho })
}
