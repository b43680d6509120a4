//! The limiting classical-quantum Gaussian experiment and its closed-form
//! risks.
//!
//! For a center with spectrum `μ_1 > … > μ_r > 0` in dimension `d`, the
//! experiment is a product of
//!
//! - a classical `(r-1)`-variate normal `N(u, V_μ)` with the multinomial
//!   covariance `V_μ = diag(μ) - μμ^T` (first `r-1` coordinates), and
//! - one two-dimensional Gaussian mode per pair `(i, j)`, `i ≤ r < j` pure
//!   and `i < j ≤ r` thermal with temperature `β_ij = ln(μ_i/μ_j)` and
//!   quadrature variance `σ²_β = coth(β/2)/2` (pure modes have `σ² = 1/2`).
//!
//! Measuring a mode with the covariant (heterodyne) measurement yields a
//! bivariate normal centered at the shift `ξ = √2(Re z, Im z)` with
//! covariance `((2σ² + 1)/2) I₂`; outcomes are sampled directly from this
//! law rather than through any Fock-space truncation, since the law is
//! exact. Bayes-optimal estimation under a Gaussian prior shrinks the
//! covariant outcome by `c = 2σ₀²/(2σ₀² + 2σ² + 1)`.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::local::{CenterState, LocalParams};

/// `ξ = √2 (Re z, Im z)`: the canonical real coordinates of a mode shift.
pub fn xi_from_z(z: C64) -> [f64; 2] {
    [2f64.sqrt() * z.re, 2f64.sqrt() * z.im]
}

/// Inverse of [`xi_from_z`].
pub fn z_from_xi(xi: [f64; 2]) -> C64 {
    C64::new(xi[0], xi[1]) / 2f64.sqrt()
}

/// Description of the limiting experiment for one center.
#[derive(Debug, Clone)]
pub struct GaussianLimitModel {
    dim: usize,
    rank: usize,
    mu: Vec<f64>,
    classical_cov: DMatrix<f64>,
    classical_chol: Option<Cholesky<f64, Dyn>>,
    mode_index: Vec<(usize, usize)>,
    /// `β_ij = ln(μ_i/μ_j)`, infinite for pure modes.
    temperatures: Vec<f64>,
    /// `σ²_β = coth(β/2)/2`, `1/2` for pure modes.
    variances: Vec<f64>,
}

impl GaussianLimitModel {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn classical_cov(&self) -> &DMatrix<f64> {
        &self.classical_cov
    }

    pub fn mode_index(&self) -> &[(usize, usize)] {
        &self.mode_index
    }

    pub fn temperatures(&self) -> &[f64] {
        &self.temperatures
    }

    pub fn variances(&self) -> &[f64] {
        &self.variances
    }
}

/// Quadrature variance of a thermal state, `coth(β/2)/2`.
pub fn sigma2_of_beta(beta: f64) -> f64 {
    if beta.is_infinite() {
        0.5
    } else {
        1.0 / (beta / 2.0).tanh() / 2.0
    }
}

/// Build the limiting model of a center state.
pub fn build_model(center: &CenterState) -> Result<GaussianLimitModel> {
    let r = center.rank();
    let mu = center.mu().to_vec();
    let k = r - 1;
    let classical_cov = DMatrix::from_fn(k, k, |i, j| {
        if i == j {
            mu[i] * (1.0 - mu[i])
        } else {
            -mu[i] * mu[j]
        }
    });
    let classical_chol = if k > 0 {
        Some(Cholesky::new(classical_cov.clone()).ok_or(Error::NotSpd)?)
    } else {
        None
    };
    let mode_index = center.mode_pairs();
    let mut temperatures = Vec::with_capacity(mode_index.len());
    let mut variances = Vec::with_capacity(mode_index.len());
    for &(i, j) in &mode_index {
        let beta = if j < r {
            (mu[i] / mu[j]).ln()
        } else {
            f64::INFINITY
        };
        temperatures.push(beta);
        variances.push(sigma2_of_beta(beta));
    }
    Ok(GaussianLimitModel {
        dim: center.dim(),
        rank: r,
        mu,
        classical_cov,
        classical_chol,
        mode_index,
        temperatures,
        variances,
    })
}

/// One draw of the experiment: the classical block and one heterodyne
/// outcome per mode (ξ-coordinates).
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianSample {
    pub classical: Vec<f64>,
    pub modes: Vec<[f64; 2]>,
}

/// Sample the experiment at local parameters `θ`: classical `N(u, V_μ)`,
/// mode `(i,j)` a bivariate normal centered at `ν_ij = √2(Re z, Im z)` with
/// per-coordinate variance `(2σ²_β + 1)/2`. Deterministic given the seed.
pub fn sample_covariant(
    model: &GaussianLimitModel,
    theta: &LocalParams,
    seed: u64,
) -> Result<GaussianSample> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    sample_covariant_with(model, theta, &mut rng)
}

/// [`sample_covariant`] drawing from a caller-owned generator.
pub fn sample_covariant_with<R: Rng>(
    model: &GaussianLimitModel,
    theta: &LocalParams,
    rng: &mut R,
) -> Result<GaussianSample> {
    let k = model.rank - 1;
    if theta.u.len() != k || theta.z.len() != model.mode_index.len() {
        return Err(Error::IndexMismatch);
    }
    let mut classical = Vec::with_capacity(k);
    if k > 0 {
        let g = DVector::from_fn(k, |_, _| StandardNormal.sample(rng));
        let correlated = model
            .classical_chol
            .as_ref()
            .expect("rank > 1 has a classical block")
            .l()
            * g;
        for (i, &u) in theta.u.iter().enumerate() {
            classical.push(u + correlated[i]);
        }
    }
    let mut modes = Vec::with_capacity(model.mode_index.len());
    for (z, &s2) in theta.z.iter().zip(&model.variances) {
        let nu = xi_from_z(*z);
        let sd = ((2.0 * s2 + 1.0) / 2.0).sqrt();
        let g1: f64 = StandardNormal.sample(rng);
        let g2: f64 = StandardNormal.sample(rng);
        modes.push([nu[0] + sd * g1, nu[1] + sd * g2]);
    }
    Ok(GaussianSample { classical, modes })
}

/// The covariant estimator: `û` is the classical block verbatim and
/// `ẑ_ij = (X₁ + iX₂)/√2` per mode.
pub fn covariant_estimate(sample: &GaussianSample) -> LocalParams {
    LocalParams {
        u: sample.classical.clone(),
        z: sample.modes.iter().map(|&m| z_from_xi(m)).collect(),
    }
}

/// The minimax risk constant of the limiting model,
/// `Σ_{i≤r} μ_i(1-μ_i) + Σ_{(i,j)} 2μ_i`.
pub fn minimax_constant(model: &GaussianLimitModel) -> f64 {
    minimax_constant_of(&model.mu, model.dim)
}

/// [`minimax_constant`] from a spectrum directly.
pub fn minimax_constant_of(mu: &[f64], dim: usize) -> f64 {
    let r = mu.len();
    let classical: f64 = mu.iter().map(|&m| m * (1.0 - m)).sum();
    let quantum: f64 = (0..r).map(|i| 2.0 * mu[i] * ((dim - i - 1) as f64)).sum();
    classical + quantum
}

/// Bayes-optimal shrinkage of a covariant outcome under the prior
/// `ξ ~ N₂(0, σ₀² I₂)`: returns `c·X` with `c = 2σ₀²/(2σ₀² + 2σ² + 1)`.
pub fn bayes_shrinkage(sample_mode: [f64; 2], sigma2: f64, sigma0_2: f64) -> [f64; 2] {
    let c = 2.0 * sigma0_2 / (2.0 * sigma0_2 + 2.0 * sigma2 + 1.0);
    [c * sample_mode[0], c * sample_mode[1]]
}

/// Bayes risk of one mode under the matching Gaussian prior:
/// `2σ₀²(2σ²_β + 1) / (2(σ₀² + σ²_β) + 1)`. At `σ² = 1/2` this reduces to
/// the pure-state value `2σ₀²/(σ₀² + 1)`.
pub fn bayes_risk_mode(sigma2_beta: f64, sigma0_2: f64) -> f64 {
    2.0 * sigma0_2 * (2.0 * sigma2_beta + 1.0) / (2.0 * (sigma0_2 + sigma2_beta) + 1.0)
}

/// Bayes risk of the conjugate Gaussian location model:
/// `E‖u - E[u|Y]‖² = Tr((Σ₁⁻¹ + Σ₂⁻¹)⁻¹)` for `Y ~ N(u, Σ₁)`,
/// `u ~ N(0, Σ₂)`.
pub fn classical_bayes_risk(cov1: &DMatrix<f64>, cov2: &DMatrix<f64>) -> Result<f64> {
    let inv1 = Cholesky::new(cov1.clone()).ok_or(Error::NotSpd)?.inverse();
    let inv2 = Cholesky::new(cov2.clone()).ok_or(Error::NotSpd)?.inverse();
    let combined = Cholesky::new(inv1 + inv2).ok_or(Error::NotSpd)?.inverse();
    Ok(combined.trace())
}

/// Bayes risk for a one-dimensional shift `t·τ` of a Gaussian with
/// covariance `Σ` under the prior `t ~ N(0, b)`:
/// `a₀ b / (a₀ + b)` with `a₀ = (τ^T Σ⁻¹ τ)⁻¹`.
pub fn bayes_risk_1d(tau: &DVector<f64>, sigma: &DMatrix<f64>, b: f64) -> Result<f64> {
    let qform = quadratic_form(tau, sigma)?;
    let a0 = 1.0 / qform;
    Ok(a0 * b / (a0 + b))
}

/// `τ^T Σ⁻¹ τ` for SPD `Σ`.
pub fn quadratic_form(tau: &DVector<f64>, sigma: &DMatrix<f64>) -> Result<f64> {
    if sigma.nrows() != tau.len() {
        return Err(Error::DimensionMismatch {
            expected: tau.len(),
            got: sigma.nrows(),
        });
    }
    let chol = Cholesky::new(sigma.clone()).ok_or(Error::NotSpd)?;
    let solved = chol.solve(tau);
    Ok(tau.dot(&solved))
}

/// Monte Carlo estimate of the prior mass pushed outside the truncation
/// region: `E[‖ξ‖² 1{‖ξ‖∞ > radius}]` under `ξ ~ N₂(0, σ₀² I₂)`. This is
/// the tail term that vanishes as the truncation radius grows.
pub fn prior_truncation_tail(sigma0_2: f64, radius: f64, draws: u64, seed: u64) -> f64 {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let sd = sigma0_2.sqrt();
    let mut acc = 0.0;
    for _ in 0..draws {
        let g1: f64 = StandardNormal.sample(&mut rng);
        let g2: f64 = StandardNormal.sample(&mut rng);
        let (x, y) = (sd * g1, sd * g2);
        if x.abs().max(y.abs()) > radius {
            acc += x * x + y * y;
        }
    }
    acc / draws as f64
}
