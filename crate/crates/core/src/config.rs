/// Numerical tolerances used across the crate. All are relative to the
/// natural scale of the quantity being compared.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// `|a·b| <= orthogonality * |a| * |b|` counts as orthogonal.
    pub orthogonality: f64,
    /// Singular values below `rank * σ_max` do not count towards the rank.
    pub rank: f64,
    /// Two levels closer than `level_merge * Δ` are the same level.
    pub level_merge: f64,
    /// Eigenvalue pairs with `λ_k + λ_l` below this are skipped in the mixed-state QFI.
    pub eigen_floor: f64,
    /// Most negative eigenvalue accepted for a density matrix.
    pub psd: f64,
    /// Normalisation and hermiticity tolerance for states.
    pub state: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        orthogonality: 1e-12,
        rank: 1e-10,
        level_merge: 1e-9,
        eigen_floor: 1e-12,
        psd: 1e-10,
        state: 1e-12,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
