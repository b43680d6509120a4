//! Preliminary estimator: 2-design POVM, least-squares inversion, and the
//! rank-detecting spectral-thresholding loop.
//!
//! A 2-design here is a finite set of unit vectors `{|v_i>}` whose rank-1
//! projectors satisfy `(1/m) Σ (|v_i><v_i|)^⊗2 = P_sym / C(d+1, 2)`. Complete
//! sets of mutually unbiased bases realize it for prime-power dimensions;
//! explicit constructions are provided for `d = 2, 3, 4, 5`. Rescaled by
//! `d/m`, the projectors form the tomographic POVM, and the linear inversion
//! `L = (d+1) Σ f_i |v_i><v_i| - I` is an unbiased estimator of the state.
//!
//! The thresholding loop walks the spectrum of `L` from below: while the
//! smallest surviving eigenvalue is `<= 2ε` it is zeroed and its value spread
//! evenly over the survivors, which keeps the trace fixed and detects the
//! rank.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec};
use crate::state::{born_probabilities_tol, multinomial_counts, DensityMatrix, Povm};
use crate::tol::Tolerances;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// A projective 2-design given by unit vectors in `C^d`.
#[derive(Debug, Clone)]
pub struct TwoDesign {
    dim: usize,
    vectors: Vec<CVec>,
}

impl TwoDesign {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[CVec] {
        &self.vectors
    }

    /// The POVM `{(d/m) |v_i><v_i|}`.
    pub fn povm(&self, tol: &Tolerances) -> Result<Povm> {
        let scale = C64::new(self.dim as f64 / self.len() as f64, 0.0);
        let elements: Vec<CMat> = self
            .vectors
            .iter()
            .map(|v| (v * v.adjoint()) * scale)
            .collect();
        let labels = (0..self.len()).map(|i| format!("v{i}")).collect();
        Povm::new(elements, labels, tol)
    }

    /// Max-abs residual of the defining identity
    /// `(1/m) Σ (|v><v|)^⊗2 - P_sym / C(d+1,2)`.
    pub fn identity_residual(&self) -> f64 {
        let d = self.dim;
        let d2 = d * d;
        let mut sum = CMat::zeros(d2, d2);
        for v in &self.vectors {
            let p = v * v.adjoint();
            sum += linalg::kron(&p, &p);
        }
        sum /= C64::new(self.len() as f64, 0.0);
        // P_sym = (I + SWAP)/2, scaled by 1/C(d+1,2)
        let scale = 2.0 / (d as f64 * (d as f64 + 1.0));
        let mut residual: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let swap = if i == l && j == k { 1.0 } else { 0.0 };
                        let ident = if i == k && j == l { 1.0 } else { 0.0 };
                        let target = 0.5 * (ident + swap) * scale;
                        let got = sum[(i * d + j, k * d + l)];
                        residual = residual.max((got - C64::new(target, 0.0)).norm());
                    }
                }
            }
        }
        residual
    }
}

fn qubit_mub_vectors() -> Vec<CVec> {
    let s = 1.0 / 2f64.sqrt();
    let c = |re: f64, im: f64| C64::new(re, im);
    vec![
        CVec::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)]),
        CVec::from_vec(vec![c(0.0, 0.0), c(1.0, 0.0)]),
        CVec::from_vec(vec![c(s, 0.0), c(s, 0.0)]),
        CVec::from_vec(vec![c(s, 0.0), c(-s, 0.0)]),
        CVec::from_vec(vec![c(s, 0.0), c(0.0, s)]),
        CVec::from_vec(vec![c(s, 0.0), c(0.0, -s)]),
    ]
}

/// MUBs for odd prime `d`: the computational basis plus, for each
/// `k = 0..d-1`, the basis with components `ω^(k j² + t j) / √d`.
fn odd_prime_mub_vectors(d: usize) -> Vec<CVec> {
    let mut vectors = Vec::with_capacity(d * (d + 1));
    for t in 0..d {
        vectors.push(CVec::from_fn(d, |j, _| {
            C64::new(if j == t { 1.0 } else { 0.0 }, 0.0)
        }));
    }
    let norm = 1.0 / (d as f64).sqrt();
    for k in 0..d {
        for t in 0..d {
            vectors.push(CVec::from_fn(d, |j, _| {
                let phase =
                    2.0 * std::f64::consts::PI * ((k * j * j + t * j) % d) as f64 / d as f64;
                C64::new(phase.cos() * norm, phase.sin() * norm)
            }));
        }
    }
    vectors
}

fn pauli(which: char) -> CMat {
    let c = |re: f64, im: f64| C64::new(re, im);
    match which {
        'I' => CMat::identity(2, 2),
        'X' => CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]),
        'Y' => CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]),
        'Z' => CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]),
        _ => unreachable!(),
    }
}

fn two_qubit(a: char, b: char) -> CMat {
    linalg::kron(&pauli(a), &pauli(b))
}

/// MUBs for `d = 4` from the partition of the two-qubit Pauli operators into
/// five commuting classes; each basis vector is the joint eigenvector
/// `(I + s₁A)(I + s₂B)/4` of a generating pair `(A, B)`.
fn two_qubit_mub_vectors() -> Vec<CVec> {
    let pairs = [
        ('Z', 'I', 'I', 'Z'),
        ('X', 'I', 'I', 'X'),
        ('Y', 'I', 'I', 'Y'),
        ('X', 'Y', 'Y', 'Z'),
        ('Y', 'X', 'Z', 'Y'),
    ];
    let id = CMat::identity(4, 4);
    let mut vectors = Vec::with_capacity(20);
    for (a1, a2, b1, b2) in pairs {
        let a = two_qubit(a1, a2);
        let b = two_qubit(b1, b2);
        for s1 in [1.0f64, -1.0] {
            for s2 in [1.0f64, -1.0] {
                let proj = (&id + &a * C64::new(s1, 0.0))
                    * (&id + &b * C64::new(s2, 0.0))
                    * C64::new(0.25, 0.0);
                // rank-1 projector: normalize its heaviest column
                let mut best = 0;
                let mut best_val = 0.0;
                for j in 0..4 {
                    let w = proj[(j, j)].re;
                    if w > best_val + 1e-14 {
                        best_val = w;
                        best = j;
                    }
                }
                let col = proj.column(best).into_owned();
                vectors.push(&col / C64::new(best_val.sqrt(), 0.0));
            }
        }
    }
    vectors
}

/// Build the 2-design for a supported dimension (`2..=5`): the complete
/// mutually unbiased basis set, `m = d(d+1)` vectors.
pub fn make_two_design(d: usize) -> Result<TwoDesign> {
    let vectors = match d {
        2 => qubit_mub_vectors(),
        3 | 5 => odd_prime_mub_vectors(d),
        4 => two_qubit_mub_vectors(),
        _ => return Err(Error::UnsupportedDimension { dim: d }),
    };
    debug_assert_eq!(vectors.len(), d * (d + 1));
    let design = TwoDesign { dim: d, vectors };
    debug_assert!(
        design.identity_residual() <= Tolerances::default().design_tol,
        "construction violates the 2-design identity"
    );
    Ok(design)
}

/// Least-squares inversion of design frequencies:
/// `L = (d+1) Σ f_i |v_i><v_i| - I`. Hermitian with unit trace, but not
/// necessarily positive.
pub fn least_squares(design: &TwoDesign, frequencies: &[f64]) -> Result<CMat> {
    if frequencies.len() != design.len() {
        return Err(Error::LengthMismatch {
            expected: design.len(),
            got: frequencies.len(),
        });
    }
    let d = design.dim();
    let mut acc = CMat::zeros(d, d);
    for (f, v) in frequencies.iter().zip(design.vectors()) {
        acc += (v * v.adjoint()) * C64::new(*f, 0.0);
    }
    Ok(acc * C64::new(d as f64 + 1.0, 0.0) - CMat::identity(d, d))
}

/// Outcome of the spectral-thresholding loop.
#[derive(Debug, Clone)]
pub struct ThresholdResult {
    /// The physical (thresholded) estimate.
    pub estimate: DensityMatrix,
    /// Rank detected by the loop, `d - k̂ + 1`.
    pub detected_rank: usize,
    /// Eigenvalue vector after each redistribution step, starting from the
    /// input spectrum.
    pub eigen_trace: Vec<Vec<f64>>,
}

/// Threshold the spectrum of a Hermitian unit-trace matrix at `2ε`.
///
/// Eigenvalues are processed from the smallest up: while the current smallest
/// nonzero eigenvalue is `<= 2ε` (ties count as below) it is zeroed and its
/// value divided evenly among the survivors. Eigenvectors of the input are
/// kept, so the estimate is `U diag(λ̃) U^H`. Redistribution is trace-neutral,
/// and the surviving eigenvalues all lie in `(2ε, 1]`.
pub fn spectral_threshold(lhat: &CMat, eps: f64, tol: &Tolerances) -> Result<ThresholdResult> {
    // 2ε must leave room below the trace, or every eigenvalue gets zeroed
    debug_assert!(eps > 0.0 && eps < 0.5, "threshold 2ε must lie in (0, 1)");
    let dev = linalg::hermiticity_deviation(lhat);
    if dev > tol.tol {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let tr_dev = (linalg::trace(lhat) - C64::new(1.0, 0.0)).norm();
    if tr_dev > tol.tol {
        return Err(Error::NotUnitTrace { deviation: tr_dev });
    }
    let d = lhat.nrows();
    let (mut vals, vecs) = linalg::eigh(lhat);
    let mut eigen_trace = vec![vals.clone()];
    let mut detected_rank = d;
    for k in 1..=d {
        let idx = d - k; // position d-k+1 in 1-based indexing
        if vals[idx] > 2.0 * eps {
            detected_rank = d - k + 1;
            break;
        }
        let removed = vals[idx];
        vals[idx] = 0.0;
        let survivors = d - k;
        if survivors == 0 {
            // can only happen for 2ε >= 1; keep an all-zero spectrum
            detected_rank = 0;
            eigen_trace.push(vals.clone());
            break;
        }
        for v in vals.iter_mut().take(survivors) {
            *v += removed / survivors as f64;
        }
        eigen_trace.push(vals.clone());
    }
    let diag = CMat::from_diagonal(&CVec::from_iterator(
        d,
        vals.iter().map(|&l| C64::new(l, 0.0)),
    ));
    let estimate = DensityMatrix::new(&vecs * diag * vecs.adjoint(), tol)?;
    Ok(ThresholdResult {
        estimate,
        detected_rank,
        eigen_trace,
    })
}

/// Full preliminary-estimator pipeline: sample `n` outcomes of the design
/// POVM on `rho_true`, invert the frequencies, threshold at `2ε`.
pub fn preliminary_estimate(
    rho_true: &DensityMatrix,
    n: u64,
    eps: f64,
    seed: u64,
    tol: &Tolerances,
) -> Result<ThresholdResult> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    preliminary_estimate_with(rho_true, n, eps, &mut rng, tol)
}

/// [`preliminary_estimate`] drawing from a caller-owned generator, for
/// replicate-parallel campaigns.
pub fn preliminary_estimate_with<R: rand::Rng>(
    rho_true: &DensityMatrix,
    n: u64,
    eps: f64,
    rng: &mut R,
    tol: &Tolerances,
) -> Result<ThresholdResult> {
    let design = make_two_design(rho_true.dim())?;
    let povm = design.povm(tol)?;
    let probs = born_probabilities_tol(rho_true, &povm, tol)?;
    let counts = multinomial_counts(&probs, n, rng);
    let freqs: Vec<f64> = counts.iter().map(|&c| c as f64 / n as f64).collect();
    let lhat = least_squares(&design, &freqs)?;
    spectral_threshold(&lhat, eps, tol)
}
