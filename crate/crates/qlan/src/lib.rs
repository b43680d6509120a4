//! Optimal estimation of low-rank qudit states.
//!
//! A qudit is a `d`-dimensional quantum state, described by a density matrix:
//! a Hermitian, positive-semidefinite, unit-trace complex matrix. When the
//! state has rank `r < d` and its nonzero spectrum `μ₁ > … > μ_r > 0` is
//! non-degenerate, an ensemble of `n` identical copies behaves, for large `n`,
//! like a much simpler Gaussian experiment: an `(r−1)`-variate normal carrying
//! the eigenvalue perturbations plus one two-dimensional Gaussian mode per
//! rotation parameter — thermal for mode `(i,j)` with `j ≤ r`, pure for
//! `j > r`. This crate implements both ends of that correspondence and the
//! estimators whose risks it makes computable:
//!
//! - [`state`] — density matrices, observables, POVMs, Born-rule sampling and
//!   the trace / Hilbert-Schmidt distances;
//! - [`local`] — the local parametrization `ρ_{θ}` of rank-`r` states around a
//!   center (su(d) generators, rotations, first-order form, quadratic loss);
//! - [`tomography`] — the preliminary estimator: 2-design POVM, least-squares
//!   inversion and the rank-detecting spectral-thresholding loop;
//! - [`gaussian`] — the limiting Gaussian experiment, covariant (heterodyne)
//!   measurement sampling, Bayes shrinkage, and every closed-form risk;
//! - [`functional`] — estimation of a linear functional `Tr(Aρ)`: sample-mean
//!   estimator, variance target, and the least-favorable-family lower bound;
//! - [`schur_weyl`] — brute-force verification of the Schur-Weyl combinatorics
//!   (tableaux, projectors, block probabilities) at small `d`, `n`.
//!
//! Everything that samples takes an explicit seed; all types are immutable
//! after construction, so Monte Carlo loops parallelize by deriving one seed
//! per replicate.

pub mod error;
pub mod functional;
pub mod gaussian;
pub mod linalg;
pub mod local;
pub mod random;
pub mod schur_weyl;
pub mod state;
pub mod tol;
pub mod tomography;

pub use error::{Error, Result};
pub use tol::Tolerances;

pub use functional::{
    functional_minimax_check, functional_value, least_favorable_family, lower_bound_identity,
    sample_mean_estimator, FunctionalProblem, LowerBoundPieces, MinimaxCheck, SampleMeanPlan,
};
pub use gaussian::{
    bayes_risk_1d, bayes_risk_mode, bayes_shrinkage, build_model, classical_bayes_risk,
    covariant_estimate, minimax_constant, sample_covariant, GaussianLimitModel, GaussianSample,
};
pub use local::{
    extract_local_params, first_order_state, local_state, quadratic_loss_check, rotation,
    su_generators, theta_loss, CenterState, LocalParams,
};
pub use state::{
    born_probabilities, expectation, hs_distance, sample_outcomes, trace_distance, validate_state,
    variance, DensityMatrix, Observable, Povm,
};
pub use tomography::{
    least_squares, make_two_design, preliminary_estimate, spectral_threshold, ThresholdResult,
    TwoDesign,
};
