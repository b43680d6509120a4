//! Seeded generators for random test objects: Ginibre matrices, Haar-ish
//! unitaries, random states and spectra.
//!
//! Parallel Monte Carlo derives one generator per replicate from
//! `seed_base + worker_index` (the harness uses XOR, which is equivalent for
//! this purpose); each generator is private to its worker.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::{CMat, CVec};

fn standard_complex<R: Rng>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im) / 2f64.sqrt()
}

/// Matrix of i.i.d. standard complex Gaussians.
pub fn ginibre<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> CMat {
    DMatrix::from_fn(rows, cols, |_, _| standard_complex(rng))
}

/// Random Hermitian matrix `(G + G^H)/2` with Ginibre `G`.
pub fn random_hermitian<R: Rng>(d: usize, rng: &mut R) -> CMat {
    let g = ginibre(d, d, rng);
    (&g + g.adjoint()) * C64::new(0.5, 0.0)
}

/// Haar-distributed unitary via QR of a Ginibre matrix with the standard
/// phase correction.
pub fn random_unitary<R: Rng>(d: usize, rng: &mut R) -> CMat {
    let g = ginibre(d, d, rng);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 {
            rjj / rjj.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Random unit vector in `C^d`.
pub fn random_pure<R: Rng>(d: usize, rng: &mut R) -> CVec {
    let v = CVec::from_fn(d, |_, _| standard_complex(rng));
    let n = v.norm();
    v / C64::new(n, 0.0)
}

/// Random rank-`r` density matrix `W W^H / Tr(W W^H)`.
pub fn random_density_matrix<R: Rng>(d: usize, r: usize, rng: &mut R) -> CMat {
    let w = ginibre(d, r, rng);
    let m = &w * w.adjoint();
    let t: f64 = (0..d).map(|i| m[(i, i)].re).sum();
    m / C64::new(t, 0.0)
}

/// Random strictly-decreasing probability vector of length `r` with all
/// consecutive gaps and the smallest entry at least `gap_min`. Resamples
/// until the constraint holds, so it is deterministic given the generator.
pub fn random_spectrum<R: Rng>(r: usize, gap_min: f64, rng: &mut R) -> Vec<f64> {
    loop {
        let mut raw: Vec<f64> = (0..r).map(|_| rng.random::<f64>().ln().abs()).collect();
        let total: f64 = raw.iter().sum();
        raw.iter_mut().for_each(|x| *x /= total);
        raw.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let gaps_ok = raw.windows(2).all(|w| w[0] - w[1] >= gap_min) && raw[r - 1] >= gap_min;
        if gaps_ok {
            return raw;
        }
    }
}
