//! Estimation of a linear functional `Ψ(ρ) = Tr(Aρ)`.
//!
//! Measuring the observable `A` itself on every copy and averaging attains
//! asymptotic variance `V²_ρ₀ = <Ã²>_ρ₀` (with `Ã = A - <A>ρ₀`), and no
//! measurement strategy does better: the least favorable one-parameter
//! family `ρ_t = ρ₀ + t·scale·Ĥ` with `Ĥ = (Ãρ₀ + ρ₀Ã)/(2V²)` maps to a
//! one-dimensional Gaussian shift problem whose information satisfies
//! `τ^T Σ⁻¹ τ = 1/V²`, matching the upper bound exactly.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::gaussian::{build_model, quadratic_form};
use crate::linalg::CMat;
use crate::local::{CenterState, LocalParams};
use crate::state::{multinomial_counts, DensityMatrix, Observable, Povm};
use crate::tol::Tolerances;

/// A functional-estimation problem: center state, observable, and the two
/// scalars every bound is phrased in, `x = <A>_ρ₀` and `y = V²_ρ₀`.
#[derive(Debug, Clone)]
pub struct FunctionalProblem {
    center: CenterState,
    a: Observable,
    /// `A` conjugated into the center's eigenbasis.
    a_in_basis: CMat,
    x: f64,
    y: f64,
}

impl FunctionalProblem {
    /// Build the problem and check the explicit variance formula
    /// `y = Σ μ_i (A_ii - x)² + Σ_(i,j) |A_ji|² (μ_i + μ_j)` (eigenbasis
    /// entries, `μ_j = 0` past the rank) against the direct evaluation.
    pub fn new(center: CenterState, a: Observable, tol: &Tolerances) -> Result<Self> {
        if a.dim() != center.dim() {
            return Err(Error::DimensionMismatch {
                expected: center.dim(),
                got: a.dim(),
            });
        }
        let a_in_basis = center.basis().adjoint() * a.entries() * center.basis();
        let r = center.rank();
        let mu = center.mu();
        let x: f64 = (0..r).map(|i| mu[i] * a_in_basis[(i, i)].re).sum();
        let mut y: f64 = (0..r)
            .map(|i| mu[i] * (a_in_basis[(i, i)].re - x).powi(2))
            .sum();
        for &(i, j) in &center.mode_pairs() {
            let mj = if j < r { mu[j] } else { 0.0 };
            y += a_in_basis[(j, i)].norm_sqr() * (mu[i] + mj);
        }
        // cross-check against Tr(ρ₀ Ã²)
        let rho0 = center.density(tol)?;
        let direct = crate::state::variance(&rho0, &a)?;
        debug_assert!(
            (y - direct).abs() <= 1e-10 * (1.0 + y.abs()),
            "variance formula mismatch: {y} vs {direct}"
        );
        Ok(Self {
            center,
            a,
            a_in_basis,
            x,
            y,
        })
    }

    pub fn center(&self) -> &CenterState {
        &self.center
    }

    pub fn observable(&self) -> &Observable {
        &self.a
    }

    /// `<A>_ρ₀`.
    pub fn x(&self) -> f64 {
        self.x
    }

    /// `V²_ρ₀ = <Ã²>_ρ₀`, the variance target.
    pub fn y(&self) -> f64 {
        self.y
    }
}

/// `Ψ(ρ) = Tr(Aρ)`.
pub fn functional_value(rho: &DensityMatrix, a: &Observable) -> Result<f64> {
    crate::state::expectation(rho, a)
}

/// Measure the eigenprojectors of `A` on `n` copies of `rho_true` and return
/// the average observed eigenvalue. Deterministic given the seed.
pub fn sample_mean_estimator(
    rho_true: &DensityMatrix,
    a: &Observable,
    n: u64,
    seed: u64,
    tol: &Tolerances,
) -> Result<f64> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    sample_mean_with(rho_true, a, n, &mut rng, tol)
}

/// [`sample_mean_estimator`] drawing from a caller-owned generator.
pub fn sample_mean_with<R: Rng>(
    rho_true: &DensityMatrix,
    a: &Observable,
    n: u64,
    rng: &mut R,
    tol: &Tolerances,
) -> Result<f64> {
    Ok(SampleMeanPlan::new(rho_true, a, tol)?.draw(n, rng))
}

/// Precomputed eigenvalues and outcome probabilities of the eigenprojector
/// measurement, for Monte Carlo loops that re-measure the same pair.
#[derive(Debug, Clone)]
pub struct SampleMeanPlan {
    eigenvalues: Vec<f64>,
    probs: Vec<f64>,
}

impl SampleMeanPlan {
    pub fn new(rho_true: &DensityMatrix, a: &Observable, tol: &Tolerances) -> Result<Self> {
        let (eigenvalues, eigenvectors) = a.diagonalize();
        let povm = Povm::projective(&eigenvectors, tol)?;
        let probs = crate::state::born_probabilities_tol(rho_true, &povm, tol)?;
        Ok(Self { eigenvalues, probs })
    }

    /// One sample mean over `n` copies.
    pub fn draw<R: Rng>(&self, n: u64, rng: &mut R) -> f64 {
        let counts = multinomial_counts(&self.probs, n, rng);
        let total: f64 = counts
            .iter()
            .zip(&self.eigenvalues)
            .map(|(&c, &l)| c as f64 * l)
            .sum();
        total / n as f64
    }
}

/// The least favorable family direction: the traceless observable `Ĥ` with
/// `Tr(AĤ) = 1`, and the per-unit-`t` local parameters it corresponds to.
pub fn least_favorable_family(problem: &FunctionalProblem) -> Result<(Observable, LocalParams)> {
    let tol = Tolerances::default();
    let y = problem.y;
    if y <= 1e-12 {
        return Err(Error::DegenerateFunctional { variance: y });
    }
    let center = &problem.center;
    let d = center.dim();
    let r = center.rank();
    let mu = center.mu();
    // Ĥ = (Ã ρ₀ + ρ₀ Ã) / (2y) in the eigenbasis, then rotated back
    let rho0_diag = CMat::from_diagonal(&nalgebra::DVector::from_fn(d, |i, _| {
        C64::new(if i < r { mu[i] } else { 0.0 }, 0.0)
    }));
    let a_tilde = &problem.a_in_basis - CMat::identity(d, d) * C64::new(problem.x, 0.0);
    let h_in_basis = (&a_tilde * &rho0_diag + &rho0_diag * &a_tilde) * C64::new(0.5 / y, 0.0);
    let h_ambient = center.basis() * &h_in_basis * center.basis().adjoint();
    let hhat = Observable::new(h_ambient, &tol)?;

    // direction per unit t: ŭ_i = (A_ii - x) μ_i / y (first r-1 free),
    // ζ̆_ij = A_ji (μ_i + μ_j) / (2y), converted to z-coordinates
    let u: Vec<f64> = (0..r - 1)
        .map(|i| (problem.a_in_basis[(i, i)].re - problem.x) * mu[i] / y)
        .collect();
    let z: Vec<C64> = center
        .mode_pairs()
        .iter()
        .map(|&(i, j)| {
            let mj = if j < r { mu[j] } else { 0.0 };
            let zeta = problem.a_in_basis[(j, i)] * C64::new((mu[i] + mj) / (2.0 * y), 0.0);
            zeta / C64::new(center.gap(i, j).sqrt(), 0.0)
        })
        .collect();
    let direction = LocalParams::new(u, z, d, r)?;
    Ok((hhat, direction))
}

/// The pieces of the matching lower bound: shift vector `τ`, covariance `Σ`
/// of the limiting one-parameter model, and the quadratic form
/// `q = τ^T Σ⁻¹ τ`, which satisfies `q·y = 1`.
#[derive(Debug, Clone)]
pub struct LowerBoundPieces {
    pub tau: DVector<f64>,
    pub sigma: DMatrix<f64>,
    pub qform: f64,
}

/// Assemble `τ = ŭ ⊕ √(2/(μ_i-μ_j))(Re ζ̆, Im ζ̆)` and
/// `Σ = V_μ ⊕ σ²_ij I₂`, and evaluate `τ^T Σ⁻¹ τ`.
pub fn lower_bound_identity(problem: &FunctionalProblem) -> Result<LowerBoundPieces> {
    let y = problem.y;
    if y <= 1e-12 {
        return Err(Error::DegenerateFunctional { variance: y });
    }
    let center = &problem.center;
    let r = center.rank();
    let mu = center.mu();
    let model = build_model(center)?;
    let modes = center.mode_pairs();
    let dim = (r - 1) + 2 * modes.len();
    let mut tau = DVector::zeros(dim);
    for i in 0..r - 1 {
        tau[i] = (problem.a_in_basis[(i, i)].re - problem.x) * mu[i] / y;
    }
    for (k, &(i, j)) in modes.iter().enumerate() {
        let mj = if j < r { mu[j] } else { 0.0 };
        let zeta = problem.a_in_basis[(j, i)] * C64::new((mu[i] + mj) / (2.0 * y), 0.0);
        let coeff = (2.0 / center.gap(i, j)).sqrt();
        tau[r - 1 + 2 * k] = coeff * zeta.re;
        tau[r - 1 + 2 * k + 1] = coeff * zeta.im;
    }
    let mut sigma = DMatrix::zeros(dim, dim);
    for i in 0..r - 1 {
        for j in 0..r - 1 {
            sigma[(i, j)] = model.classical_cov()[(i, j)];
        }
    }
    for (k, &s2) in model.variances().iter().enumerate() {
        sigma[(r - 1 + 2 * k, r - 1 + 2 * k)] = s2;
        sigma[(r - 1 + 2 * k + 1, r - 1 + 2 * k + 1)] = s2;
    }
    let qform = quadratic_form(&tau, &sigma)?;
    Ok(LowerBoundPieces { tau, sigma, qform })
}

/// Matching upper and lower bounds for one problem.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct MinimaxCheck {
    /// Monte Carlo estimate of `n·E(X̄ - Ψ)²`.
    pub mc_nmse: f64,
    pub mc_stderr: f64,
    /// The target `V²_ρ₀` both bounds meet.
    pub target: f64,
    /// `bayes_risk_1d(τ, Σ, b)`; approaches the target as `b → ∞`.
    pub bayes_1d: f64,
    /// `bayes_1d · (1 + y/b) - y`, zero by algebra.
    pub bayes_identity_residual: f64,
}

/// Monte Carlo upper bound against the closed-form lower bound: estimates
/// the scaled mean-square error of the sample mean at the problem's center
/// and evaluates the one-dimensional Bayes risk with prior variance `b`.
pub fn functional_minimax_check(
    problem: &FunctionalProblem,
    n: u64,
    reps: u64,
    b: f64,
    seed: u64,
    tol: &Tolerances,
) -> Result<MinimaxCheck> {
    let rho0 = problem.center.density(tol)?;
    let psi = functional_value(&rho0, &problem.a)?;
    let plan = SampleMeanPlan::new(&rho0, &problem.a, tol)?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..reps {
        let loss = n as f64 * (plan.draw(n, &mut rng) - psi).powi(2);
        sum += loss;
        sum_sq += loss * loss;
    }
    let mean = sum / reps as f64;
    let var = (sum_sq / reps as f64 - mean * mean).max(0.0);
    let stderr = (var / reps as f64).sqrt();
    let pieces = lower_bound_identity(problem)?;
    let bayes = crate::gaussian::bayes_risk_1d(&pieces.tau, &pieces.sigma, b)?;
    Ok(MinimaxCheck {
        mc_nmse: mean,
        mc_stderr: stderr,
        target: problem.y,
        bayes_1d: bayes,
        bayes_identity_residual: bayes * (1.0 + problem.y / b) - problem.y,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::bayes_risk_1d;
    use crate::linalg;
    use crate::local::first_order_state;
    use crate::random::{random_hermitian, random_spectrum, random_unitary};
    use approx::assert_abs_diff_eq;
    use rand::Rng;

    fn tols() -> Tolerances {
        Tolerances::default()
    }

    fn random_problem<R: Rng>(d: usize, rng: &mut R) -> FunctionalProblem {
        let t = tols();
        loop {
            let r = rng.random_range(1..=d);
            let mu = random_spectrum(r, 0.05, rng);
            let basis = random_unitary(d, rng);
            let center = CenterState::new(d, mu, Some(basis), &t).unwrap();
            let a = Observable::new(random_hermitian(d, rng), &t).unwrap();
            let problem = FunctionalProblem::new(center, a, &t).unwrap();
            if problem.y() > 1e-6 {
                return problem;
            }
        }
    }

    #[test]
    fn functional_examples() {
        let t = tols();
        let rho = DensityMatrix::from_diagonal(&[0.7, 0.3], &t).unwrap();
        let id = Observable::new(CMat::identity(2, 2), &t).unwrap();
        assert_abs_diff_eq!(functional_value(&rho, &id).unwrap(), 1.0, epsilon = 1e-12);
        let mut z = CMat::zeros(2, 2);
        z[(0, 0)] = C64::new(1.0, 0.0);
        z[(1, 1)] = C64::new(-1.0, 0.0);
        let a = Observable::new(z, &t).unwrap();
        assert_abs_diff_eq!(functional_value(&rho, &a).unwrap(), 0.4, epsilon = 1e-12);
    }

    #[test]
    fn functional_is_linear() {
        let t = tols();
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let a = Observable::new(random_hermitian(3, &mut rng), &t).unwrap();
        let r1 = DensityMatrix::from_diagonal(&[0.5, 0.3, 0.2], &t).unwrap();
        let r2 = DensityMatrix::from_diagonal(&[0.1, 0.1, 0.8], &t).unwrap();
        let alpha = 0.3;
        let mix = DensityMatrix::new(
            r1.entries() * C64::new(alpha, 0.0) + r2.entries() * C64::new(1.0 - alpha, 0.0),
            &t,
        )
        .unwrap();
        let lhs = functional_value(&mix, &a).unwrap();
        let rhs = alpha * functional_value(&r1, &a).unwrap()
            + (1.0 - alpha) * functional_value(&r2, &a).unwrap();
        assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-12);
    }

    #[test]
    fn sample_mean_is_exact_on_eigenstates() {
        let t = tols();
        let rho = DensityMatrix::from_diagonal(&[1.0, 0.0], &t).unwrap();
        let mut m = CMat::zeros(2, 2);
        m[(0, 0)] = C64::new(2.5, 0.0);
        m[(1, 1)] = C64::new(-1.0, 0.0);
        let a = Observable::new(m, &t).unwrap();
        for seed in 0..5 {
            let est = sample_mean_estimator(&rho, &a, 50, seed, &t).unwrap();
            assert_abs_diff_eq!(est, 2.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn sample_mean_is_unbiased_and_attains_the_variance() {
        let t = tols();
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let rho = DensityMatrix::from_diagonal(&[0.7, 0.3], &t).unwrap();
        let mut m = CMat::zeros(2, 2);
        m[(0, 0)] = C64::new(1.0, 0.0);
        m[(1, 1)] = C64::new(-1.0, 0.0);
        let a = Observable::new(m, &t).unwrap();
        let psi = functional_value(&rho, &a).unwrap();
        let target = crate::state::variance(&rho, &a).unwrap(); // 0.84
        let n = 10_000u64;
        let reps = 100_000;
        let mut acc = 0.0;
        let mut mean = 0.0;
        for _ in 0..reps {
            let est = sample_mean_with(&rho, &a, n, &mut rng, &t).unwrap();
            acc += n as f64 * (est - psi).powi(2);
            mean += est;
        }
        let nmse = acc / reps as f64;
        assert!((nmse - target).abs() / target < 0.02, "{nmse} vs {target}");
        assert!(
            (mean / reps as f64 - psi).abs() < 5.0 * (target / (n as f64 * reps as f64)).sqrt()
        );
    }

    #[test]
    fn identity_observable_is_degenerate() {
        let t = tols();
        let center = CenterState::new(2, vec![0.6, 0.4], None, &t).unwrap();
        let a = Observable::new(CMat::identity(2, 2), &t).unwrap();
        let problem = FunctionalProblem::new(center, a, &t).unwrap();
        assert!(matches!(
            least_favorable_family(&problem),
            Err(Error::DegenerateFunctional { .. })
        ));
        assert!(matches!(
            lower_bound_identity(&problem),
            Err(Error::DegenerateFunctional { .. })
        ));
    }

    #[test]
    fn hhat_identities_hold() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..100 {
            let d = rng.random_range(2..=4);
            let problem = random_problem(d, &mut rng);
            let (hhat, _) = least_favorable_family(&problem).unwrap();
            let tr = linalg::trace(hhat.entries());
            assert!(tr.norm() < 1e-10, "Tr H = {tr}");
            let tr_ah = linalg::trace(&(problem.observable().entries() * hhat.entries()));
            assert!(
                (tr_ah - C64::new(1.0, 0.0)).norm() < 1e-10,
                "Tr AH = {tr_ah}"
            );
        }
    }

    #[test]
    fn first_order_state_tracks_the_family() {
        // ρ₀ + t·scale·Ĥ equals the first-order state at t·direction.
        let tol = tols();
        let mut rng = ChaCha12Rng::seed_from_u64(9);
        for _ in 0..20 {
            let d = rng.random_range(2..=4);
            let problem = random_problem(d, &mut rng);
            let (hhat, dir) = least_favorable_family(&problem).unwrap();
            let scale = 0.01;
            let tval = 0.7;
            let theta = LocalParams {
                u: dir.u.iter().map(|x| x * tval).collect(),
                z: dir.z.iter().map(|z| z * C64::new(tval, 0.0)).collect(),
            };
            let lin = first_order_state(problem.center(), &theta, scale).unwrap();
            let target = problem.center().density(&tol).unwrap().entries()
                + hhat.entries() * C64::new(tval * scale, 0.0);
            assert!(
                linalg::frobenius(&(&lin - &target)) < 1e-10,
                "family mismatch"
            );
        }
    }

    #[test]
    fn lower_bound_identity_is_one_over_y() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for _ in 0..100 {
            let d = rng.random_range(2..=4);
            let problem = random_problem(d, &mut rng);
            let pieces = lower_bound_identity(&problem).unwrap();
            assert!(
                (pieces.qform * problem.y() - 1.0).abs() <= 1e-8,
                "q·y = {}",
                pieces.qform * problem.y()
            );
        }
    }

    #[test]
    fn diagonal_and_offdiagonal_special_cases() {
        let t = tols();
        // diagonal A: quantum part of τ vanishes, classical form gives 1/y
        let center = CenterState::new(3, vec![0.5, 0.3, 0.2], None, &t).unwrap();
        let mut m = CMat::zeros(3, 3);
        m[(0, 0)] = C64::new(1.0, 0.0);
        m[(1, 1)] = C64::new(-0.5, 0.0);
        m[(2, 2)] = C64::new(0.25, 0.0);
        let problem = FunctionalProblem::new(center, Observable::new(m, &t).unwrap(), &t).unwrap();
        let pieces = lower_bound_identity(&problem).unwrap();
        for k in 2..pieces.tau.len() {
            assert_abs_diff_eq!(pieces.tau[k], 0.0, epsilon = 1e-14);
        }
        assert!((pieces.qform * problem.y() - 1.0).abs() < 1e-10);

        // purely off-diagonal A: classical part of τ vanishes and
        // q = Σ 4|ζ̆|²/(μ_i + μ_j) = 1/y
        let center = CenterState::new(3, vec![0.6, 0.4], None, &t).unwrap();
        let mut m = CMat::zeros(3, 3);
        m[(1, 0)] = C64::new(0.3, 0.7);
        m[(0, 1)] = m[(1, 0)].conj();
        m[(2, 0)] = C64::new(-0.2, 0.1);
        m[(0, 2)] = m[(2, 0)].conj();
        let problem = FunctionalProblem::new(center, Observable::new(m, &t).unwrap(), &t).unwrap();
        let pieces = lower_bound_identity(&problem).unwrap();
        assert_abs_diff_eq!(pieces.tau[0], 0.0, epsilon = 1e-14);
        let mut direct = 0.0;
        let mu = [0.6, 0.4, 0.0];
        for (&(i, j), zeta) in problem.center().mode_pairs().iter().zip([
            problem.a_in_basis[(1, 0)] * C64::new((0.6 + 0.4) / (2.0 * problem.y()), 0.0),
            problem.a_in_basis[(2, 0)] * C64::new(0.6 / (2.0 * problem.y()), 0.0),
            problem.a_in_basis[(2, 1)] * C64::new(0.4 / (2.0 * problem.y()), 0.0),
        ]) {
            direct += 4.0 * zeta.norm_sqr() / (mu[i] + mu[j]);
        }
        assert!((direct * problem.y() - 1.0).abs() < 1e-10);
        assert!((pieces.qform - direct).abs() < 1e-10);
    }

    #[test]
    fn variance_formula_matches_direct_evaluation() {
        // y = Σ μ_i (A_ii - x)² + Σ |A_ji|² (μ_i + μ_j) against Tr(ρ₀ Ã²)
        let t = tols();
        let mut rng = ChaCha12Rng::seed_from_u64(19);
        for _ in 0..50 {
            let d = rng.random_range(2..=4);
            let problem = random_problem(d, &mut rng);
            let rho0 = problem.center().density(&t).unwrap();
            let direct = crate::state::variance(&rho0, problem.observable()).unwrap();
            assert!(
                (problem.y() - direct).abs() <= 1e-10 * (1.0 + direct),
                "{} vs {}",
                problem.y(),
                direct
            );
        }
    }

    #[test]
    fn minimax_check_brackets_the_target() {
        let t = tols();
        let center = CenterState::new(2, vec![0.7, 0.3], None, &t).unwrap();
        let mut m = CMat::zeros(2, 2);
        m[(0, 0)] = C64::new(1.0, 0.0);
        m[(1, 1)] = C64::new(-1.0, 0.0);
        let problem = FunctionalProblem::new(center, Observable::new(m, &t).unwrap(), &t).unwrap();
        assert_abs_diff_eq!(problem.y(), 0.84, epsilon = 1e-12);
        let check = functional_minimax_check(&problem, 10_000, 20_000, 5.0, 99, &t).unwrap();
        assert!((check.mc_nmse - 0.84).abs() <= 3.0 * check.mc_stderr);
        assert!(check.bayes_identity_residual.abs() <= 1e-10);
        assert!(check.bayes_1d < check.target);
    }

    #[test]
    fn bayes_1d_rearrangement() {
        // bayes_risk_1d(τ, Σ, b)·(1 + y/b) = y when τᵀΣ⁻¹τ = 1/y.
        let mut rng = ChaCha12Rng::seed_from_u64(13);
        for _ in 0..20 {
            let d = rng.random_range(2..=4);
            let problem = random_problem(d, &mut rng);
            let pieces = lower_bound_identity(&problem).unwrap();
            let b = 3.7;
            let risk = bayes_risk_1d(&pieces.tau, &pieces.sigma, b).unwrap();
            assert!((risk * (1.0 + problem.y() / b) - problem.y()).abs() < 1e-10);
        }
    }

    #[test]
    fn variance_is_stable_on_a_small_neighborhood() {
        // |V²_ρ - V²_ρ₀| ≤ 2(‖A²‖ + 2‖A‖²)·0.01 for HS distance ≤ 0.01.
        let t = tols();
        let mut rng = ChaCha12Rng::seed_from_u64(17);
        for _ in 0..30 {
            let d = rng.random_range(2..=4);
            let rho0 = crate::state::validate_state(
                crate::random::random_density_matrix(d, d, &mut rng),
                &t,
            )
            .unwrap();
            let a = Observable::new(random_hermitian(d, &mut rng), &t).unwrap();
            // perturb within HS radius 0.01
            let mut noise = random_hermitian(d, &mut rng);
            noise -= CMat::identity(d, d) * (linalg::trace(&noise) / C64::new(d as f64, 0.0));
            let norm = linalg::frobenius(&noise);
            noise *= C64::new(0.009 / norm, 0.0);
            let rho = match crate::state::validate_state(rho0.entries() + &noise, &t) {
                Ok(r) => r,
                Err(_) => continue, // positivity can fail near the boundary
            };
            let v0 = crate::state::variance(&rho0, &a).unwrap();
            let v1 = crate::state::variance(&rho, &a).unwrap();
            let a2 = a.entries() * a.entries();
            let (avals, _) = linalg::eigh(a.entries());
            let (a2vals, _) = linalg::eigh(&a2);
            let op_a = avals.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
            let op_a2 = a2vals.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
            let bound = 2.0 * (op_a2 + 2.0 * op_a * op_a) * 0.01;
            assert!((v1 - v0).abs() <= bound, "{} > {}", (v1 - v0).abs(), bound);
        }
    }

    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;
}
