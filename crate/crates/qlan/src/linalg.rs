//! Complex-matrix helpers: Hermitian eigendecomposition with a deterministic
//! convention, matrix exponential, and small utilities shared by the crate.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

/// Max-abs entry of `m - m^H`.
pub fn hermiticity_deviation(m: &CMat) -> f64 {
    let mut dev: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

/// Trace as a complex number.
pub fn trace(m: &CMat) -> C64 {
    (0..m.nrows()).map(|i| m[(i, i)]).sum()
}

/// Frobenius (Hilbert-Schmidt) norm.
pub fn frobenius(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues are returned sorted descending. Each eigenvector's phase is
/// fixed by making its largest-magnitude component real and positive (ties
/// broken by lowest index), so downstream localization sees a deterministic
/// basis.
pub fn eigh(m: &CMat) -> (Vec<f64>, CMat) {
    let d = m.nrows();
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .expect("non-finite eigenvalue")
    });
    let values: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = CMat::zeros(d, d);
    for (col, &k) in order.iter().enumerate() {
        let v = eig.eigenvectors.column(k);
        let mut best = 0;
        let mut best_mag = 0.0;
        for i in 0..d {
            let mag = v[i].norm();
            if mag > best_mag + 1e-14 {
                best_mag = mag;
                best = i;
            }
        }
        let phase = if best_mag > 0.0 {
            v[best].conj() / best_mag
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..d {
            vectors[(i, col)] = v[i] * phase;
        }
    }
    (values, vectors)
}

/// `exp(i·A)` for Hermitian `A`, computed by eigendecomposition. Exact at
/// these dimensions; no scaling-and-squaring needed.
pub fn exp_i_hermitian(a: &CMat) -> CMat {
    let (values, vectors) = eigh(a);
    let phases = CVec::from_iterator(
        values.len(),
        values.iter().map(|&l| C64::new(l.cos(), l.sin())),
    );
    &vectors * CMat::from_diagonal(&phases) * vectors.adjoint()
}

/// Max-abs entry of `u·u^H - I`.
pub fn unitarity_deviation(u: &CMat) -> f64 {
    let d = u.nrows();
    let prod = u * u.adjoint();
    let mut dev: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let target = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((prod[(i, j)] - C64::new(target, 0.0)).norm());
        }
    }
    dev
}

/// Kronecker product.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Real matrix from a complex one that is known to be real within `tol`;
/// panics in debug builds otherwise.
pub fn real_part(m: &CMat) -> DMatrix<f64> {
    debug_assert!(m.iter().all(|z| z.im.abs() < 1e-9));
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)].re)
}
