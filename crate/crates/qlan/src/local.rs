//! Local parametrization of rank-`r` qudits around a center state.
//!
//! A center is a rank-`r` state with non-degenerate spectrum
//! `μ_1 > … > μ_r > 0`. Nearby rank-`r` states are written
//! `ρ_θ = U(z) diag(μ + u, 0) U(z)^H` where `u` perturbs the eigenvalues
//! (`u_r = -Σ u_i` keeps the trace) and the complex parameters `z_ij`,
//! `1 ≤ i ≤ r`, `i < j ≤ d`, generate the rotation. Callers pass the scale
//! `1/√n` so that `θ` stays of order one.
//!
//! To first order the state is linear in `θ`, with `ζ_ij = z_ij √(μ_i - μ_j)`
//! sitting in the `(j, i)` entry (and its conjugate mirrored above the
//! diagonal); this makes the squared Hilbert-Schmidt distance between two
//! nearby states a quadratic form in `θ`, the loss [`theta_loss`].

use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec};
use crate::state::{hs_distance, DensityMatrix};
use crate::tol::Tolerances;

/// Center of the local model: spectrum and eigenbasis.
#[derive(Debug, Clone)]
pub struct CenterState {
    dim: usize,
    rank: usize,
    mu: Vec<f64>,
    basis: CMat,
}

impl CenterState {
    /// Validate a center: `μ` strictly decreasing with every consecutive gap
    /// and the smallest eigenvalue at least `gap_min`, summing to one, and a
    /// unitary eigenbasis.
    pub fn new(dim: usize, mu: Vec<f64>, basis: Option<CMat>, tol: &Tolerances) -> Result<Self> {
        let rank = mu.len();
        if rank == 0 || rank > dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: rank,
            });
        }
        for w in mu.windows(2) {
            let gap = w[0] - w[1];
            if gap < tol.gap_min {
                return Err(Error::GapTooSmall {
                    gap,
                    min: tol.gap_min,
                });
            }
        }
        if mu[rank - 1] < tol.gap_min {
            return Err(Error::GapTooSmall {
                gap: mu[rank - 1],
                min: tol.gap_min,
            });
        }
        let sum: f64 = mu.iter().sum();
        if (sum - 1.0).abs() > tol.tol {
            return Err(Error::NotUnitTrace {
                deviation: (sum - 1.0).abs(),
            });
        }
        let basis = basis.unwrap_or_else(|| CMat::identity(dim, dim));
        if basis.nrows() != dim || basis.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: basis.nrows(),
            });
        }
        let dev = linalg::unitarity_deviation(&basis);
        if dev > tol.tol {
            return Err(Error::NotHermitian { deviation: dev });
        }
        Ok(Self {
            dim,
            rank,
            mu,
            basis,
        })
    }

    /// Center taken from a validated state's eigendecomposition (top `rank`
    /// eigenvalues, renormalized to unit sum).
    pub fn from_density(rho: &DensityMatrix, tol: &Tolerances) -> Result<Self> {
        let rank = rho.rank();
        let mut mu: Vec<f64> = rho.eigenvalues()[..rank].to_vec();
        let total: f64 = mu.iter().sum();
        mu.iter_mut().for_each(|m| *m /= total);
        Self::new(rho.dim(), mu, Some(rho.eigenvectors().clone()), tol)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn basis(&self) -> &CMat {
        &self.basis
    }

    /// `μ_i - μ_j` for a mode pair, with `μ_j = 0` beyond the rank.
    pub fn gap(&self, i: usize, j: usize) -> f64 {
        let mj = if j < self.rank { self.mu[j] } else { 0.0 };
        self.mu[i] - mj
    }

    /// Ordered mode pairs `(i, j)`, `0 ≤ i < r`, `i < j < d`.
    pub fn mode_pairs(&self) -> Vec<(usize, usize)> {
        mode_pairs(self.dim, self.rank)
    }

    /// The center as a density matrix `B diag(μ, 0) B^H`.
    pub fn density(&self, tol: &Tolerances) -> Result<DensityMatrix> {
        let diag = CMat::from_diagonal(&CVec::from_fn(self.dim, |i, _| {
            C64::new(if i < self.rank { self.mu[i] } else { 0.0 }, 0.0)
        }));
        DensityMatrix::new(&self.basis * diag * self.basis.adjoint(), tol)
    }
}

/// Ordered mode pairs `(i, j)`, `0 ≤ i < r`, `i < j < d` (lexicographic).
pub fn mode_pairs(dim: usize, rank: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for i in 0..rank {
        for j in (i + 1)..dim {
            pairs.push((i, j));
        }
    }
    pairs
}

/// Local parameters `θ = (u, z)`: `r - 1` free eigenvalue perturbations and
/// one complex rotation parameter per mode pair.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalParams {
    pub u: Vec<f64>,
    pub z: Vec<C64>,
}

impl LocalParams {
    pub fn new(u: Vec<f64>, z: Vec<C64>, dim: usize, rank: usize) -> Result<Self> {
        if u.len() != rank - 1 || z.len() != mode_pairs(dim, rank).len() {
            return Err(Error::IndexMismatch);
        }
        if u.iter().any(|x| !x.is_finite())
            || z.iter().any(|x| !x.re.is_finite() || !x.im.is_finite())
        {
            return Err(Error::IndexMismatch);
        }
        Ok(Self { u, z })
    }

    pub fn zero(dim: usize, rank: usize) -> Self {
        Self {
            u: vec![0.0; rank - 1],
            z: vec![C64::new(0.0, 0.0); mode_pairs(dim, rank).len()],
        }
    }

    /// Number of free real dimensions, `(r-1) + 2·#modes`.
    pub fn real_dim(&self) -> usize {
        self.u.len() + 2 * self.z.len()
    }

    /// Euclidean norm over all free real coordinates.
    pub fn norm(&self) -> f64 {
        let s: f64 = self.u.iter().map(|x| x * x).sum::<f64>()
            + self.z.iter().map(|z| z.norm_sqr()).sum::<f64>();
        s.sqrt()
    }

    /// Uniform draw from the ball of the given radius.
    pub fn random_in_ball<R: Rng>(dim: usize, rank: usize, radius: f64, rng: &mut R) -> Self {
        let mut theta = Self::zero(dim, rank);
        let dims = theta.real_dim();
        let mut g: Vec<f64> = (0..dims).map(|_| StandardNormal.sample(rng)).collect();
        let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        let scale = if norm > 0.0 {
            radius * rng.random::<f64>().powf(1.0 / dims as f64) / norm
        } else {
            0.0
        };
        g.iter_mut().for_each(|x| *x *= scale);
        for (k, x) in theta.u.iter_mut().enumerate() {
            *x = g[k];
        }
        let off = theta.u.len();
        for (k, z) in theta.z.iter_mut().enumerate() {
            *z = C64::new(g[off + 2 * k], g[off + 2 * k + 1]);
        }
        theta
    }
}

fn check_index_sets(center: &CenterState, theta: &LocalParams) -> Result<()> {
    if theta.u.len() != center.rank - 1
        || theta.z.len() != mode_pairs(center.dim, center.rank).len()
    {
        return Err(Error::IndexMismatch);
    }
    Ok(())
}

/// The `d² - 1` generators of su(d): `H_j = E_jj - E_(j+1)(j+1)` for
/// `j < d-1`, and for each `j < k` the pair `iE_jk - iE_kj` and
/// `E_jk + E_kj`. All traceless Hermitian.
pub fn su_generators(d: usize) -> Vec<crate::state::Observable> {
    let tol = Tolerances::default();
    let mut gens = Vec::with_capacity(d * d - 1);
    for j in 0..d - 1 {
        let mut h = CMat::zeros(d, d);
        h[(j, j)] = C64::new(1.0, 0.0);
        h[(j + 1, j + 1)] = C64::new(-1.0, 0.0);
        gens.push(crate::state::Observable::new(h, &tol).expect("Hermitian by construction"));
    }
    for j in 0..d {
        for k in (j + 1)..d {
            gens.push(
                crate::state::Observable::new(t_asym(d, j, k), &tol)
                    .expect("Hermitian by construction"),
            );
            gens.push(
                crate::state::Observable::new(t_sym(d, j, k), &tol)
                    .expect("Hermitian by construction"),
            );
        }
    }
    gens
}

/// `T_{j,k} = iE_jk - iE_kj` for `j < k`.
pub(crate) fn t_asym(d: usize, j: usize, k: usize) -> CMat {
    let mut m = CMat::zeros(d, d);
    m[(j, k)] = C64::new(0.0, 1.0);
    m[(k, j)] = C64::new(0.0, -1.0);
    m
}

/// `T_{k,j} = E_jk + E_kj` for `j < k`.
pub(crate) fn t_sym(d: usize, j: usize, k: usize) -> CMat {
    let mut m = CMat::zeros(d, d);
    m[(j, k)] = C64::new(1.0, 0.0);
    m[(k, j)] = C64::new(1.0, 0.0);
    m
}

/// The rotation `U(θ) = exp(i Σ [Re(ζ') T_ij + Im(ζ') T_ji]/(μ_i - μ_j))`
/// with `ζ'_ij = scale · z_ij · √(μ_i - μ_j)`, in the center's eigenbasis.
pub fn rotation(center: &CenterState, theta: &LocalParams, scale: f64) -> Result<CMat> {
    check_index_sets(center, theta)?;
    let tol = Tolerances::default();
    let d = center.dim;
    let mut exponent = CMat::zeros(d, d);
    for (&(i, j), z) in center.mode_pairs().iter().zip(&theta.z) {
        let gap = center.gap(i, j);
        if gap < tol.gap_min {
            return Err(Error::GapTooSmall {
                gap,
                min: tol.gap_min,
            });
        }
        let c = scale / gap.sqrt();
        exponent += t_asym(d, i, j) * C64::new(c * z.re, 0.0);
        exponent += t_sym(d, i, j) * C64::new(c * z.im, 0.0);
    }
    Ok(linalg::exp_i_hermitian(&exponent))
}

fn perturbed_diagonal(center: &CenterState, theta: &LocalParams, scale: f64) -> Result<Vec<f64>> {
    let tol = Tolerances::default();
    let r = center.rank;
    let mut diag = vec![0.0; center.dim];
    let u_sum: f64 = theta.u.iter().sum();
    for (i, slot) in diag.iter_mut().enumerate().take(r) {
        let ui = if i < r - 1 { theta.u[i] } else { -u_sum };
        let v = center.mu[i] + scale * ui;
        if v < -tol.tol {
            return Err(Error::DiagonalOutOfRange { index: i, value: v });
        }
        *slot = v.max(0.0);
    }
    Ok(diag)
}

/// The rank-`r` state at local parameters `θ` and the given scale,
/// `B U(θ) diag(μ + scale·u, 0) U(θ)^H B^H`.
pub fn local_state(
    center: &CenterState,
    theta: &LocalParams,
    scale: f64,
    tol: &Tolerances,
) -> Result<DensityMatrix> {
    let diag = perturbed_diagonal(center, theta, scale)?;
    let u = rotation(center, theta, scale)?;
    let d = center.dim;
    let diag_m = CMat::from_diagonal(&CVec::from_fn(d, |i, _| C64::new(diag[i], 0.0)));
    let m = &center.basis * &u * diag_m * u.adjoint() * center.basis.adjoint();
    DensityMatrix::new(m, tol)
}

/// First-order form of [`local_state`]: Hermitian, trace one, with
/// `scale·ζ_ij` in entry `(j, i)` and a zero lower-right block. Not
/// necessarily positive.
pub fn first_order_state(center: &CenterState, theta: &LocalParams, scale: f64) -> Result<CMat> {
    let diag = perturbed_diagonal(center, theta, scale)?;
    let d = center.dim;
    let mut m = CMat::zeros(d, d);
    for (i, &v) in diag.iter().enumerate() {
        m[(i, i)] = C64::new(v, 0.0);
    }
    for (&(i, j), z) in center.mode_pairs().iter().zip(&theta.z) {
        let zeta = z * C64::new(scale * center.gap(i, j).sqrt(), 0.0);
        m[(j, i)] = zeta;
        m[(i, j)] = zeta.conj();
    }
    Ok(&center.basis * m * center.basis.adjoint())
}

/// First-order inverse of [`first_order_state`]: rotate `ρ` into the
/// center's eigenbasis and read off `u` and `z`. Errors with `NotLocal`
/// when `ρ` is farther than `loc_radius` from the center in HS distance.
pub fn extract_local_params(
    rho: &DensityMatrix,
    center: &CenterState,
    scale: f64,
    tol: &Tolerances,
) -> Result<LocalParams> {
    if rho.dim() != center.dim {
        return Err(Error::DimensionMismatch {
            expected: center.dim,
            got: rho.dim(),
        });
    }
    let distance = hs_distance(rho, &center.density(tol)?)?;
    if distance > tol.loc_radius {
        return Err(Error::NotLocal {
            distance,
            radius: tol.loc_radius,
        });
    }
    let rot = center.basis.adjoint() * rho.entries() * &center.basis;
    let r = center.rank;
    let u: Vec<f64> = (0..r - 1)
        .map(|i| (rot[(i, i)].re - center.mu[i]) / scale)
        .collect();
    let z: Vec<C64> = center
        .mode_pairs()
        .iter()
        .map(|&(i, j)| rot[(j, i)] / C64::new(scale * center.gap(i, j).sqrt(), 0.0))
        .collect();
    LocalParams::new(u, z, center.dim, center.rank)
}

/// Quadratic loss
/// `Σ (Δu_i)² + (Σ Δu_i)² + 2 Σ (μ_i - μ_j) |Δz_ij|²` (with `μ_j = 0` past
/// the rank). Symmetric and zero iff the parameters agree.
pub fn theta_loss(center: &CenterState, theta1: &LocalParams, theta2: &LocalParams) -> f64 {
    let du: Vec<f64> = theta1.u.iter().zip(&theta2.u).map(|(a, b)| a - b).collect();
    let mut loss: f64 = du.iter().map(|x| x * x).sum();
    let s: f64 = du.iter().sum();
    loss += s * s;
    for ((&(i, j), z1), z2) in center.mode_pairs().iter().zip(&theta1.z).zip(&theta2.z) {
        loss += 2.0 * center.gap(i, j) * (z1 - z2).norm_sqr();
    }
    loss
}

/// One row of the local quadratic-loss comparison table.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct QuadraticLossRow {
    pub n: u64,
    /// `‖ρ_(θ1/√n) - ρ_(θ2/√n)‖₂²`
    pub hs_sq: f64,
    /// `loss(θ1, θ2) / n`
    pub loss_over_n: f64,
    /// `hs_sq / (loss/n)`; approaches one as `n` grows.
    pub ratio: f64,
}

/// Compare the exact squared HS distance of two local states against the
/// quadratic loss across a grid of `n`.
pub fn quadratic_loss_check(
    center: &CenterState,
    theta1: &LocalParams,
    theta2: &LocalParams,
    n_list: &[u64],
    tol: &Tolerances,
) -> Result<Vec<QuadraticLossRow>> {
    let loss = theta_loss(center, theta1, theta2);
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let scale = 1.0 / (n as f64).sqrt();
        let a = local_state(center, theta1, scale, tol)?;
        let b = local_state(center, theta2, scale, tol)?;
        let hs = hs_distance(&a, &b)?;
        let hs_sq = hs * hs;
        let loss_over_n = loss / n as f64;
        let ratio = if loss_over_n == 0.0 && hs_sq < 1e-300 {
            1.0
        } else {
            hs_sq / loss_over_n
        };
        rows.push(QuadraticLossRow {
            n,
            hs_sq,
            loss_over_n,
            ratio,
        });
    }
    Ok(rows)
}
