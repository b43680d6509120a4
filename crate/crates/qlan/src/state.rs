//! Quantum primitives: states, observables, POVMs, Born-rule probabilities
//! and seeded outcome sampling, state distances.
//!
//! A state is a density matrix: Hermitian, positive semidefinite, unit trace.
//! A POVM is a family of PSD operators summing to the identity; measuring a
//! state `ρ` with POVM `{M_i}` produces outcome `i` with probability
//! `Tr(ρ M_i)`.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec};
use crate::tol::Tolerances;

/// Validated density matrix with its eigendecomposition and numerical rank.
///
/// Immutable after validation; safe to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    entries: CMat,
    eigenvalues: Vec<f64>,
    eigenvectors: CMat,
    rank: usize,
}

impl DensityMatrix {
    /// Validate `m` as a density matrix. See [`validate_state`].
    pub fn new(m: CMat, tol: &Tolerances) -> Result<Self> {
        validate_state(m, tol)
    }

    /// Diagonal state from a probability vector (entries may include zeros).
    pub fn from_diagonal(probs: &[f64], tol: &Tolerances) -> Result<Self> {
        let d = probs.len();
        let m = CMat::from_fn(d, d, |i, j| {
            if i == j {
                C64::new(probs[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        validate_state(m, tol)
    }

    /// Pure state `|v><v|` from a unit vector.
    pub fn pure(v: &CVec, tol: &Tolerances) -> Result<Self> {
        let m = v * v.adjoint();
        validate_state(m, tol)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &CMat {
        &self.entries
    }

    /// Eigenvalues sorted descending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Eigenvectors as columns, matching [`Self::eigenvalues`]; phases fixed
    /// deterministically.
    pub fn eigenvectors(&self) -> &CMat {
        &self.eigenvectors
    }

    /// Numerical rank: eigenvalues above the configured cutoff.
    pub fn rank(&self) -> usize {
        self.rank
    }
}

/// Validated Hermitian observable.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    dim: usize,
    entries: CMat,
}

impl Observable {
    pub fn new(m: CMat, tol: &Tolerances) -> Result<Self> {
        let dev = linalg::hermiticity_deviation(&m);
        if dev > tol.tol {
            return Err(Error::NotHermitian { deviation: dev });
        }
        Ok(Self {
            dim: m.nrows(),
            entries: m,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &CMat {
        &self.entries
    }

    /// Spectral decomposition: eigenvalues descending, eigenvectors as columns.
    pub fn diagonalize(&self) -> (Vec<f64>, CMat) {
        linalg::eigh(&self.entries)
    }
}

/// Validated POVM: PSD elements summing to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    dim: usize,
    elements: Vec<CMat>,
    labels: Vec<String>,
}

impl Povm {
    pub fn new(elements: Vec<CMat>, labels: Vec<String>, tol: &Tolerances) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::LengthMismatch {
                expected: 1,
                got: 0,
            });
        }
        if labels.len() != elements.len() {
            return Err(Error::LengthMismatch {
                expected: elements.len(),
                got: labels.len(),
            });
        }
        let dim = elements[0].nrows();
        let mut sum = CMat::zeros(dim, dim);
        for e in &elements {
            if e.nrows() != dim || e.ncols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: e.nrows(),
                });
            }
            let dev = linalg::hermiticity_deviation(e);
            if dev > tol.tol {
                return Err(Error::NotHermitian { deviation: dev });
            }
            let (vals, _) = linalg::eigh(e);
            let min = vals.last().copied().unwrap_or(0.0);
            if min < -tol.tol {
                return Err(Error::NotPsd {
                    min_eigenvalue: min,
                });
            }
            sum += e;
        }
        let mut dev: f64 = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                let target = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((sum[(i, j)] - C64::new(target, 0.0)).norm());
            }
        }
        if dev > tol.tol {
            return Err(Error::NotUnitTrace { deviation: dev });
        }
        Ok(Self {
            dim,
            elements,
            labels,
        })
    }

    /// Projective measurement onto the columns of a unitary.
    pub fn projective(basis: &CMat, tol: &Tolerances) -> Result<Self> {
        let d = basis.nrows();
        let mut elements = Vec::with_capacity(d);
        let mut labels = Vec::with_capacity(d);
        for k in 0..d {
            let col = basis.column(k).into_owned();
            elements.push(&col * col.adjoint());
            labels.push(format!("e{k}"));
        }
        Self::new(elements, labels, tol)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[CMat] {
        &self.elements
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

/// Validate a square complex matrix as a density matrix: Hermitian within
/// `tol`, unit trace within `tol`, smallest eigenvalue `>= -tol`. Records the
/// numerical rank (eigenvalues above `rank_cutoff`).
pub fn validate_state(m: CMat, tol: &Tolerances) -> Result<DensityMatrix> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            got: m.ncols(),
        });
    }
    let dev = linalg::hermiticity_deviation(&m);
    if dev > tol.tol {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let tr = linalg::trace(&m);
    let tr_dev = (tr - C64::new(1.0, 0.0)).norm();
    if tr_dev > tol.tol {
        return Err(Error::NotUnitTrace { deviation: tr_dev });
    }
    let (eigenvalues, eigenvectors) = linalg::eigh(&m);
    let min = *eigenvalues.last().expect("nonempty spectrum");
    if min < -tol.tol {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
        });
    }
    let rank = eigenvalues.iter().filter(|&&l| l > tol.rank_cutoff).count();
    Ok(DensityMatrix {
        dim: m.nrows(),
        entries: m,
        eigenvalues,
        eigenvectors,
        rank,
    })
}

/// Born-rule outcome probabilities `p_i = Tr(ρ M_i)`.
///
/// Negative values of magnitude within `tol` are clamped to zero and the
/// vector renormalized; larger negatives signal an invalid state/POVM pair
/// and are an error.
pub fn born_probabilities(rho: &DensityMatrix, povm: &Povm) -> Result<Vec<f64>> {
    born_probabilities_tol(rho, povm, &Tolerances::default())
}

/// [`born_probabilities`] with an explicit tolerance policy.
pub fn born_probabilities_tol(
    rho: &DensityMatrix,
    povm: &Povm,
    tol: &Tolerances,
) -> Result<Vec<f64>> {
    if rho.dim() != povm.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            got: povm.dim(),
        });
    }
    let mut probs = Vec::with_capacity(povm.len());
    for e in povm.elements() {
        let p = (e * rho.entries()).diagonal().iter().sum::<C64>().re;
        if p < -tol.tol {
            return Err(Error::NegativeProbability { value: p });
        }
        probs.push(p.max(0.0));
    }
    let total: f64 = probs.iter().sum();
    probs.iter_mut().for_each(|p| *p /= total);
    Ok(probs)
}

/// Multinomial counts of size `n` over `probs`, drawn as a chain of
/// conditional binomials (cost grows with the number of outcomes, not with
/// `n`). Deterministic given the generator state.
pub fn multinomial_counts<R: Rng>(probs: &[f64], n: u64, rng: &mut R) -> Vec<u64> {
    let m = probs.len();
    let mut counts = vec![0u64; m];
    let mut remaining = n;
    let mut rest = 1.0f64;
    for k in 0..m.saturating_sub(1) {
        if remaining == 0 || rest <= 0.0 {
            break;
        }
        let p = (probs[k] / rest).clamp(0.0, 1.0);
        let c = Binomial::new(remaining, p)
            .expect("clamped probability")
            .sample(rng);
        counts[k] = c;
        remaining -= c;
        rest -= probs[k];
    }
    counts[m - 1] += remaining;
    counts
}

/// Sample `n` measurement outcomes of `povm` on `rho`; returns per-outcome
/// counts. Deterministic given `seed`.
pub fn sample_outcomes(rho: &DensityMatrix, povm: &Povm, n: u64, seed: u64) -> Result<Vec<u64>> {
    let probs = born_probabilities(rho, povm)?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    Ok(multinomial_counts(&probs, n, &mut rng))
}

/// Expectation `Tr(Aρ)`.
pub fn expectation(rho: &DensityMatrix, obs: &Observable) -> Result<f64> {
    if rho.dim() != obs.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            got: obs.dim(),
        });
    }
    Ok((obs.entries() * rho.entries())
        .diagonal()
        .iter()
        .sum::<C64>()
        .re)
}

/// Variance `Tr(A²ρ) - Tr(Aρ)²`; tiny negatives from roundoff are clamped
/// to zero.
pub fn variance(rho: &DensityMatrix, obs: &Observable) -> Result<f64> {
    if rho.dim() != obs.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            got: obs.dim(),
        });
    }
    let a2 = obs.entries() * obs.entries();
    let second = (&a2 * rho.entries()).diagonal().iter().sum::<C64>().re;
    let first = expectation(rho, obs)?;
    Ok((second - first * first).max(0.0))
}

/// Trace-norm distance `Σ |eig(a - b)|`.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    let diff = a.entries() - b.entries();
    let (vals, _) = linalg::eigh(&diff);
    Ok(vals.iter().map(|l| l.abs()).sum())
}

/// Hilbert-Schmidt distance (Frobenius norm of the difference).
pub fn hs_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    Ok(linalg::frobenius(&(a.entries() - b.entries())))
}
