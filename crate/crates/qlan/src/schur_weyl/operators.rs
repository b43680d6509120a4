//! Group-algebra operators on `(C^d)^⊗n`: row symmetrizers `p_λ`, column
//! antisymmetrizers `q_λ`, Young symmetrizers `y_λ = q_λ p_λ`, and the basis
//! vectors `|m_λ> = y_λ f_m / ‖y_λ f_m‖`.
//!
//! Permutations act lazily as index permutations of tensor positions; dense
//! `d^n × d^n` matrices are materialized only on demand and only below a
//! small size cap. Tensor indices are little-endian mixed-radix integers
//! (factor 0 is the lowest digit), so serialized vectors are portable.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::CMat;

use super::tableau::{MultiplicityMatrix, YoungDiagram};

/// Largest tensor-space dimension `d^n` operators will touch.
pub const DIM_MAX: usize = 6561;

/// Sparse real vector on the tensor basis, keyed by encoded index.
pub type SparseVec = BTreeMap<usize, f64>;

/// The `n`-fold tensor power of `C^d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TensorSpace {
    pub d: usize,
    pub n: usize,
    pub dim: usize,
}

impl TensorSpace {
    pub fn new(d: usize, n: usize) -> Result<Self> {
        let dim = (d as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if dim > DIM_MAX as u128 {
            return Err(Error::TooLarge {
                what: "tensor dimension d^n",
                size: dim.min(usize::MAX as u128) as usize,
                limit: DIM_MAX,
            });
        }
        Ok(Self {
            d,
            n,
            dim: dim as usize,
        })
    }

    /// Encode a letter word into the little-endian mixed-radix index.
    pub fn encode(&self, word: &[u8]) -> usize {
        debug_assert_eq!(word.len(), self.n);
        let mut idx = 0usize;
        let mut base = 1usize;
        for &w in word {
            idx += w as usize * base;
            base *= self.d;
        }
        idx
    }

    /// Inverse of [`Self::encode`].
    pub fn decode(&self, mut idx: usize) -> Vec<u8> {
        let mut word = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            word.push((idx % self.d) as u8);
            idx /= self.d;
        }
        word
    }
}

/// Canonical tensor positions of the boxes of `lambda`, row-wise: box
/// `(i, c)` sits at position `offset_i + c`.
fn row_positions(lambda: &YoungDiagram) -> Vec<Vec<usize>> {
    let mut offset = 0;
    let mut rows = Vec::with_capacity(lambda.num_rows());
    for i in 0..lambda.num_rows() {
        rows.push((offset..offset + lambda.row(i)).collect());
        offset += lambda.row(i);
    }
    rows
}

fn column_positions(lambda: &YoungDiagram) -> Vec<Vec<usize>> {
    let rows = row_positions(lambda);
    let mut cols = Vec::new();
    for c in 0..lambda.row(0) {
        let mut col = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            if lambda.row(i) > c {
                col.push(row[c]);
            }
        }
        cols.push(col);
    }
    cols
}

/// All permutations of `set` as `(sign, mapping)` pairs, where `mapping[k]`
/// is the image of `set[k]`.
fn subset_permutations(set: &[usize]) -> Vec<(f64, Vec<usize>)> {
    let k = set.len();
    let mut perms = Vec::new();
    let mut current: Vec<usize> = (0..k).collect();
    // Heap's algorithm; every swap is a genuine transposition, so the
    // running sign is the parity of the current permutation
    fn heap(
        a: &mut Vec<usize>,
        k: usize,
        sign: &mut f64,
        set: &[usize],
        out: &mut Vec<(f64, Vec<usize>)>,
    ) {
        if k <= 1 {
            out.push((*sign, a.iter().map(|&i| set[i]).collect()));
            return;
        }
        for i in 0..k - 1 {
            heap(a, k - 1, sign, set, out);
            if k.is_multiple_of(2) {
                a.swap(i, k - 1);
            } else {
                a.swap(0, k - 1);
            }
            *sign = -*sign;
        }
        heap(a, k - 1, sign, set, out);
    }
    let mut sign = 1.0;
    heap(&mut current, k.max(1), &mut sign, set, &mut perms);
    perms
}

/// Cartesian product of per-subset permutations into full position maps of
/// length `n`; signs multiply (all `+1` when `signed` is false).
fn group_elements(subsets: &[Vec<usize>], n: usize, signed: bool) -> Vec<(f64, Vec<usize>)> {
    let mut acc: Vec<(f64, Vec<usize>)> = vec![(1.0, (0..n).collect())];
    for subset in subsets {
        let perms = subset_permutations(subset);
        let mut next = Vec::with_capacity(acc.len() * perms.len());
        for (s0, base) in &acc {
            for (s1, mapped) in &perms {
                let mut full = base.clone();
                for (k, &src) in subset.iter().enumerate() {
                    full[src] = mapped[k];
                }
                let sign = if signed { s0 * s1 } else { 1.0 };
                next.push((sign, full));
            }
        }
        acc = next;
    }
    acc
}

fn apply_perm_word(word: &[u8], perm: &[usize]) -> Vec<u8> {
    let mut out = vec![0u8; word.len()];
    for (p, &letter) in word.iter().enumerate() {
        out[perm[p]] = letter;
    }
    out
}

fn row_terms(lambda: &YoungDiagram, n: usize) -> Vec<(f64, Vec<usize>)> {
    group_elements(&row_positions(lambda), n, false)
}

fn column_terms(lambda: &YoungDiagram, n: usize) -> Vec<(f64, Vec<usize>)> {
    group_elements(&column_positions(lambda), n, true)
}

fn apply_terms(v: &SparseVec, terms: &[(f64, Vec<usize>)], space: &TensorSpace) -> SparseVec {
    let mut out = SparseVec::new();
    for (&idx, &coeff) in v {
        let word = space.decode(idx);
        for (sign, perm) in terms {
            let permuted = apply_perm_word(&word, perm);
            *out.entry(space.encode(&permuted)).or_insert(0.0) += sign * coeff;
        }
    }
    out.retain(|_, c| c.abs() > 1e-300);
    out
}

/// Which group-algebra element a [`TensorOperator`] applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectorKind {
    /// `p_λ = Σ_{σ ∈ R_λ} σ`
    Rows,
    /// `q_λ = Σ_{σ ∈ C_λ} sgn(σ) σ`
    Columns,
    /// `y_λ = q_λ p_λ`
    Young,
}

/// Lazy group-algebra operator on the tensor space.
#[derive(Debug, Clone)]
pub struct TensorOperator {
    space: TensorSpace,
    lambda: YoungDiagram,
    kind: ProjectorKind,
}

impl TensorOperator {
    pub fn space(&self) -> TensorSpace {
        self.space
    }

    pub fn kind(&self) -> ProjectorKind {
        self.kind
    }

    /// Apply to a sparse vector.
    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let n = self.space.n;
        match self.kind {
            ProjectorKind::Rows => apply_terms(v, &row_terms(&self.lambda, n), &self.space),
            ProjectorKind::Columns => apply_terms(v, &column_terms(&self.lambda, n), &self.space),
            ProjectorKind::Young => {
                let p = apply_terms(v, &row_terms(&self.lambda, n), &self.space);
                apply_terms(&p, &column_terms(&self.lambda, n), &self.space)
            }
        }
    }

    /// Materialize as a dense matrix; capped to keep memory in check.
    pub fn to_dense(&self, dense_limit: usize) -> Result<DMatrix<f64>> {
        let dim = self.space.dim;
        if dim > dense_limit {
            return Err(Error::TooLarge {
                what: "dense operator dimension",
                size: dim,
                limit: dense_limit,
            });
        }
        let mut m = DMatrix::zeros(dim, dim);
        for col in 0..dim {
            let mut v = SparseVec::new();
            v.insert(col, 1.0);
            for (row, val) in self.apply(&v) {
                m[(row, col)] = val;
            }
        }
        Ok(m)
    }
}

/// The projector-style operator of `lambda` on `(C^d)^⊗n`, `n` the number
/// of boxes.
pub fn projector(lambda: &YoungDiagram, d: usize, kind: ProjectorKind) -> Result<TensorOperator> {
    let space = TensorSpace::new(d, lambda.boxes())?;
    Ok(TensorOperator {
        space,
        lambda: lambda.clone(),
        kind,
    })
}

/// `y_λ f_m` as a sparse vector (integer coefficients).
pub fn young_vector(lambda: &YoungDiagram, m: &MultiplicityMatrix, d: usize) -> Result<SparseVec> {
    let space = TensorSpace::new(d, lambda.boxes())?;
    let word = m.word(lambda)?;
    let mut f = SparseVec::new();
    f.insert(space.encode(&word), 1.0);
    let p = apply_terms(&f, &row_terms(lambda, space.n), &space);
    Ok(apply_terms(&p, &column_terms(lambda, space.n), &space))
}

/// Normalized basis vector `|m_λ> = y_λ f_m / ‖y_λ f_m‖` and its norm.
pub fn basis_vector(
    lambda: &YoungDiagram,
    m: &MultiplicityMatrix,
    d: usize,
) -> Result<(SparseVec, f64)> {
    let mut v = young_vector(lambda, m, d)?;
    let norm = sparse_norm(&v);
    if norm == 0.0 {
        return Err(Error::NotSemistandard);
    }
    for c in v.values_mut() {
        *c /= norm;
    }
    Ok((v, norm))
}

pub fn sparse_dot(a: &SparseVec, b: &SparseVec) -> f64 {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    small
        .iter()
        .filter_map(|(k, va)| large.get(k).map(|vb| va * vb))
        .sum()
}

pub fn sparse_norm(v: &SparseVec) -> f64 {
    v.values().map(|c| c * c).sum::<f64>().sqrt()
}

/// `<f_a | q_λ U^⊗n f_b>` two ways: by explicit operator application (left)
/// and as the product of column-minor determinants
/// `Π_c det(U[t_a^c, t_b^c])` (right).
pub fn det_inner_product(
    lambda: &YoungDiagram,
    a: &MultiplicityMatrix,
    b: &MultiplicityMatrix,
    u: &CMat,
) -> Result<(C64, C64)> {
    let d = u.nrows();
    TensorSpace::new(d, lambda.boxes())?;
    let word_a = a.word(lambda)?;
    let word_b = b.word(lambda)?;
    // left side: Σ_{σ∈C_λ} sgn(σ) Π_p U[(σ·a)(p), b(p)]
    let mut lhs = C64::new(0.0, 0.0);
    for (sign, perm) in column_terms(lambda, lambda.boxes()) {
        let moved = apply_perm_word(&word_a, &perm);
        let mut prod = C64::new(sign, 0.0);
        for (p, &letter_b) in word_b.iter().enumerate() {
            prod *= u[(moved[p] as usize, letter_b as usize)];
            if prod.norm_sqr() == 0.0 {
                break;
            }
        }
        lhs += prod;
    }
    // right side: product of column minors
    let fill_a = a.filling(lambda)?;
    let fill_b = b.filling(lambda)?;
    let mut rhs = C64::new(1.0, 0.0);
    for c in 0..lambda.row(0) {
        let len = lambda.column_len(c);
        let minor = CMat::from_fn(len, len, |s, t| {
            u[(fill_a[s][c] as usize, fill_b[t][c] as usize)]
        });
        rhs *= det_small(&minor);
    }
    Ok((lhs, rhs))
}

fn det_small(m: &CMat) -> C64 {
    match m.nrows() {
        0 => C64::new(1.0, 0.0),
        1 => m[(0, 0)],
        2 => m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)],
        3 => {
            m[(0, 0)] * (m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)])
                - m[(0, 1)] * (m[(1, 0)] * m[(2, 2)] - m[(1, 2)] * m[(2, 0)])
                + m[(0, 2)] * (m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)])
        }
        _ => m.clone().lu().determinant(),
    }
}

/// Apply the diagonal operator `ρ^⊗n`, `ρ = diag(weights)`, to a sparse
/// vector: each component is scaled by the product of its letters' weights.
pub fn apply_diagonal_power(v: &SparseVec, weights: &[f64], space: &TensorSpace) -> SparseVec {
    let mut out = SparseVec::new();
    for (&idx, &coeff) in v {
        let word = space.decode(idx);
        let factor: f64 = word.iter().map(|&w| weights[w as usize]).product();
        if factor != 0.0 {
            out.insert(idx, coeff * factor);
        }
    }
    out
}
