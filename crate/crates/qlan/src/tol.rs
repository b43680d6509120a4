//! Single tolerance policy threaded through all constructors.

/// Numerical tolerances. One instance is passed to every validating
/// constructor so a whole experiment shares a consistent policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// General validation tolerance (Hermiticity, trace, PSD, unitarity).
    pub tol: f64,
    /// Eigenvalues above this count towards the numerical rank.
    pub rank_cutoff: f64,
    /// Smallest admissible eigenvalue gap of a center state; the local
    /// parametrization divides by `μ_i - μ_j`.
    pub gap_min: f64,
    /// Largest HS distance at which local-parameter extraction is trusted.
    pub loc_radius: f64,
    /// Residual allowed in the defining identity of a projective 2-design.
    pub design_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            rank_cutoff: 1e-9,
            gap_min: 1e-6,
            loc_radius: 0.1,
            design_tol: 1e-12,
        }
    }
}

impl Tolerances {
    pub fn with_rank_cutoff(mut self, rank_cutoff: f64) -> Self {
        self.rank_cutoff = rank_cutoff;
        self
    }

    pub fn with_loc_radius(mut self, loc_radius: f64) -> Self {
        self.loc_radius = loc_radius;
        self
    }
}
