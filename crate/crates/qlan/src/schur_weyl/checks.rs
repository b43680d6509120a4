//! Brute-force verification of the combinatorial identities behind the
//! Gaussian limit: orbit counting, quasi-orthogonality of tableau basis
//! vectors, and the block probabilities of a tensor-power state.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::local::CenterState;

use super::operators::{basis_vector, sparse_dot};
use super::tableau::{enumerate_ssyt, syt_dim, MultiplicityMatrix, YoungDiagram};

/// Distinct permutations of a multiset of letters.
fn multiset_permutations(counts: &BTreeMap<u8, usize>) -> Vec<Vec<u8>> {
    let total: usize = counts.values().sum();
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(total);
    fn rec(
        counts: &mut BTreeMap<u8, usize>,
        total: usize,
        current: &mut Vec<u8>,
        out: &mut Vec<Vec<u8>>,
    ) {
        if current.len() == total {
            out.push(current.clone());
            return;
        }
        let letters: Vec<u8> = counts
            .iter()
            .filter(|(_, &c)| c > 0)
            .map(|(&l, _)| l)
            .collect();
        for l in letters {
            *counts.get_mut(&l).unwrap() -= 1;
            current.push(l);
            rec(counts, total, current, out);
            current.pop();
            *counts.get_mut(&l).unwrap() += 1;
        }
    }
    let mut counts = counts.clone();
    rec(&mut counts, total, &mut current, &mut out);
    out
}

fn row_multiset(
    lambda: &YoungDiagram,
    m: &MultiplicityMatrix,
    i: usize,
) -> Result<BTreeMap<u8, usize>> {
    let d = m.alphabet();
    let borrowed: usize = (i + 1..d).map(|j| m.get(i, j)).sum();
    if borrowed > lambda.row(i) {
        return Err(Error::NotSemistandard);
    }
    let mut counts = BTreeMap::new();
    if lambda.row(i) > borrowed {
        counts.insert(i as u8, lambda.row(i) - borrowed);
    }
    for j in i + 1..d {
        let c = m.get(i, j);
        if c > 0 {
            counts.insert(j as u8, c);
        }
    }
    Ok(counts)
}

/// Enumerate the admissible row-permutation orbit of `f_m` with `Γ = 0`:
/// arrangements where no column repeats a letter and every non-identity
/// column is a single substitution. Exact for small `|m|`.
pub fn count_v0(lambda: &YoungDiagram, m: &MultiplicityMatrix) -> Result<u64> {
    const M_MAX: usize = 4;
    const N_MAX: usize = 8;
    if m.total() > M_MAX {
        return Err(Error::TooLarge {
            what: "multiplicity total |m|",
            size: m.total(),
            limit: M_MAX,
        });
    }
    if lambda.boxes() > N_MAX {
        return Err(Error::TooLarge {
            what: "boxes",
            size: lambda.boxes(),
            limit: N_MAX,
        });
    }
    let k = lambda.num_rows();
    let per_row: Vec<Vec<Vec<u8>>> = (0..k)
        .map(|i| Ok(multiset_permutations(&row_multiset(lambda, m, i)?)))
        .collect::<Result<_>>()?;
    let total_m = m.total();
    let mut count = 0u64;
    let mut choice = vec![0usize; k];
    'outer: loop {
        let rows: Vec<&Vec<u8>> = (0..k).map(|i| &per_row[i][choice[i]]).collect();
        // admissible: no column contains a repeated letter
        let mut admissible = true;
        let mut modified_cols = 0usize;
        'cols: for c in 0..lambda.row(0) {
            let len = lambda.column_len(c);
            let mut seen = [false; 16];
            let mut is_identity = true;
            for (i, row) in rows.iter().enumerate().take(len) {
                let letter = row[c] as usize;
                if seen[letter] {
                    admissible = false;
                    break 'cols;
                }
                seen[letter] = true;
                if letter != i {
                    is_identity = false;
                }
            }
            if !is_identity {
                modified_cols += 1;
            }
        }
        if admissible && total_m == modified_cols {
            count += 1;
        }
        // advance the mixed-radix choice counter
        for i in 0..k {
            choice[i] += 1;
            if choice[i] < per_row[i].len() {
                continue 'outer;
            }
            choice[i] = 0;
        }
        break;
    }
    Ok(count)
}

/// Leading term of the `Γ = 0` orbit count,
/// `Π (λ_i - λ_j)^(m_ij) / m_ij!`.
pub fn formula_v0(lambda: &YoungDiagram, m: &MultiplicityMatrix) -> f64 {
    let mut value = 1.0;
    for (&(i, j), &c) in m.iter() {
        let gap = (lambda.row(i) - lambda.row(j)) as f64;
        let fact: f64 = (1..=c).map(|x| x as f64).product();
        value *= gap.powi(c as i32) / fact;
    }
    value
}

/// Outcome of the exact-orthogonality test for a pair of basis vectors.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct QuasiOrthCheck {
    /// The row-balance condition forces `<m_λ|l_λ> = 0`.
    pub forced_zero: bool,
    /// Explicit inner product of the normalized vectors.
    pub inner_product: f64,
}

/// Check whether two tableau basis vectors are forced orthogonal: they are
/// whenever the row-balance vectors differ at any row. Always computes the
/// explicit inner product for cross-checking.
pub fn quasi_orthogonality_zero(
    lambda: &YoungDiagram,
    m: &MultiplicityMatrix,
    l: &MultiplicityMatrix,
    d: usize,
) -> Result<QuasiOrthCheck> {
    let forced = (0..lambda.num_rows()).any(|i| m.row_balance(i) != l.row_balance(i));
    let (vm, _) = basis_vector(lambda, m, d)?;
    let (vl, _) = basis_vector(lambda, l, d)?;
    Ok(QuasiOrthCheck {
        forced_zero: forced,
        inner_product: sparse_dot(&vm, &vl),
    })
}

/// Schur polynomial `s_λ(x_1..x_d)` by direct tableau enumeration.
fn schur_polynomial(lambda: &YoungDiagram, x: &[f64]) -> Result<f64> {
    let d = x.len();
    let mut total = 0.0;
    for m in enumerate_ssyt(lambda, d)? {
        let word = m.word(lambda)?;
        let weight: f64 = word.iter().map(|&w| x[w as usize]).product();
        total += weight;
    }
    Ok(total)
}

/// Block probabilities of `ρ^⊗n` for `ρ = diag(μ + u/√n, 0, …)`:
/// `p_λ = s_λ(spectrum) · dim K_λ` over all diagrams of `n` boxes with at
/// most `d` rows. Diagrams with more rows than the rank carry exactly zero
/// probability; the full map sums to one.
pub fn block_probabilities(
    center: &CenterState,
    u: &[f64],
    n: usize,
) -> Result<Vec<(YoungDiagram, f64)>> {
    let r = center.rank();
    if u.len() != r - 1 {
        return Err(Error::IndexMismatch);
    }
    let scale = 1.0 / (n as f64).sqrt();
    let mut spectrum = vec![0.0; center.dim()];
    let u_sum: f64 = u.iter().sum();
    for i in 0..r {
        let ui = if i < r - 1 { u[i] } else { -u_sum };
        let v = center.mu()[i] + scale * ui;
        if v < 0.0 {
            return Err(Error::DiagonalOutOfRange { index: i, value: v });
        }
        spectrum[i] = v;
    }
    let mut out = Vec::new();
    for lam in YoungDiagram::partitions(n, center.dim()) {
        let p = schur_polynomial(&lam, &spectrum)? * syt_dim(&lam) as f64;
        out.push((lam, p));
    }
    Ok(out)
}

/// One structured record of the verification battery.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub check: String,
    pub lambda: Option<Vec<usize>>,
    pub n: Option<usize>,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckRecord {
    fn new(
        check: impl Into<String>,
        lambda: Option<&YoungDiagram>,
        n: Option<usize>,
        residual: f64,
        tolerance: f64,
    ) -> Self {
        Self {
            check: check.into(),
            lambda: lambda.map(|l| l.rows().to_vec()),
            n,
            residual,
            tolerance,
            pass: residual.abs() <= tolerance,
        }
    }

    /// Informational record: reported but never failing.
    fn info(
        check: impl Into<String>,
        lambda: Option<&YoungDiagram>,
        n: Option<usize>,
        residual: f64,
    ) -> Self {
        Self {
            check: check.into(),
            lambda: lambda.map(|l| l.rows().to_vec()),
            n,
            residual,
            tolerance: f64::INFINITY,
            pass: true,
        }
    }
}

/// Run the whole brute-force battery for alphabet size `d` up to `n_max`
/// tensor factors. Dense-operator checks are restricted to small spaces.
pub fn run_verification(d: usize, n_max: usize, seed: u64) -> Result<Vec<CheckRecord>> {
    use super::operators::{det_inner_product, projector, ProjectorKind};
    use crate::random::random_unitary;
    use rand::{Rng, SeedableRng};

    let mut records = Vec::new();
    let n_max = n_max.min(8);

    // Schur-Weyl completeness: Σ dim(H_λ) dim(K_λ) = d^n, exactly.
    for n in 1..=n_max.min(6) {
        let total: u128 = YoungDiagram::partitions(n, d)
            .iter()
            .map(|lam| super::tableau::weyl_dim(lam, d) * syt_dim(lam))
            .sum();
        let gap = (total as i128 - (d as i128).pow(n as u32)).unsigned_abs() as f64;
        records.push(CheckRecord::new(
            "schur-weyl-completeness",
            None,
            Some(n),
            gap,
            0.0,
        ));
    }

    // SSYT count vs Weyl dimension.
    for n in 1..=n_max.min(6) {
        for lam in YoungDiagram::partitions(n, d) {
            let count = enumerate_ssyt(&lam, d)?.len() as f64;
            let dim = super::tableau::weyl_dim(&lam, d) as f64;
            records.push(CheckRecord::new(
                "ssyt-count-vs-weyl-dim",
                Some(&lam),
                Some(n),
                count - dim,
                0.0,
            ));
        }
    }

    // projector scaling p² = |R_λ| p, q² = |C_λ| q on small dense spaces
    for n in 1..=n_max {
        if (d as u128).pow(n as u32) > 729 {
            break;
        }
        for lam in YoungDiagram::partitions(n, d) {
            let p = projector(&lam, d, ProjectorKind::Rows)?.to_dense(729)?;
            let scale: f64 = lam
                .rows()
                .iter()
                .map(|&r| (1..=r).product::<usize>() as f64)
                .product();
            let resid = (&p * &p - &p * scale).abs().max();
            records.push(CheckRecord::new(
                "p-squared-scaling",
                Some(&lam),
                Some(n),
                resid,
                1e-12,
            ));
            let q = projector(&lam, d, ProjectorKind::Columns)?.to_dense(729)?;
            let qscale: f64 = (0..lam.row(0))
                .map(|c| (1..=lam.column_len(c)).product::<usize>() as f64)
                .product();
            let resid = (&q * &q - &q * qscale).abs().max();
            records.push(CheckRecord::new(
                "q-squared-scaling",
                Some(&lam),
                Some(n),
                resid,
                1e-12,
            ));
        }
    }

    // basis vectors: unit norm for every semistandard filling
    for n in 1..=n_max.min(6) {
        for lam in YoungDiagram::partitions(n, d) {
            let mut worst = 0.0f64;
            for m in enumerate_ssyt(&lam, d)? {
                let (v, _) = basis_vector(&lam, &m, d)?;
                worst = worst.max((super::operators::sparse_norm(&v) - 1.0).abs());
            }
            records.push(CheckRecord::new(
                "basis-vector-norm",
                Some(&lam),
                Some(n),
                worst,
                1e-12,
            ));
        }
    }

    // determinant inner-product identity on random instances
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
    let pool: Vec<YoungDiagram> = (2..=n_max.clamp(2, 5))
        .flat_map(|n| YoungDiagram::partitions(n, d))
        .collect();
    let mut worst = 0.0f64;
    let mut done = 0;
    while done < 50 {
        let lam = &pool[rng.random_range(0..pool.len())];
        let fillings = enumerate_ssyt(lam, d)?;
        if fillings.is_empty() {
            continue;
        }
        let a = &fillings[rng.random_range(0..fillings.len())];
        let b = &fillings[rng.random_range(0..fillings.len())];
        let u = random_unitary(d, &mut rng);
        let (lhs, rhs) = det_inner_product(lam, a, b, &u)?;
        worst = worst.max((lhs - rhs).norm());
        done += 1;
    }
    records.push(CheckRecord::new(
        "determinant-inner-product",
        None,
        None,
        worst,
        1e-10,
    ));

    // exact-zero condition: differing row balances force orthogonality
    for n in 2..=n_max.min(6) {
        for lam in YoungDiagram::partitions(n, d) {
            let fillings = enumerate_ssyt(&lam, d)?;
            let mut worst_forced = 0.0f64;
            let mut worst_free = 0.0f64;
            for (ai, a) in fillings.iter().enumerate() {
                for b in fillings.iter().skip(ai + 1) {
                    let chk = quasi_orthogonality_zero(&lam, a, b, d)?;
                    if chk.forced_zero {
                        worst_forced = worst_forced.max(chk.inner_product.abs());
                    } else {
                        worst_free = worst_free.max(chk.inner_product.abs());
                    }
                }
            }
            records.push(CheckRecord::new(
                "forced-orthogonality",
                Some(&lam),
                Some(n),
                worst_forced,
                1e-12,
            ));
            if worst_free > 0.0 {
                records.push(CheckRecord::info(
                    "free-pair-overlap",
                    Some(&lam),
                    Some(n),
                    worst_free,
                ));
            }
        }
    }

    // orbit counting: hand cases plus the reported leading-term gap
    if d >= 2 {
        let lam = YoungDiagram::new(vec![3, 1])?;
        let m = MultiplicityMatrix::new(d, &[((0, 1), 1)])?;
        let count = count_v0(&lam, &m)? as f64;
        records.push(CheckRecord::new(
            "count-v0-single-substitution",
            Some(&lam),
            Some(4),
            count - (lam.row(0) - lam.row(1)) as f64,
            0.0,
        ));
        let m0 = MultiplicityMatrix::zero(d);
        records.push(CheckRecord::new(
            "count-v0-empty",
            Some(&lam),
            Some(4),
            count_v0(&lam, &m0)? as f64 - 1.0,
            0.0,
        ));
        let flat = YoungDiagram::new(vec![4])?;
        let m2 = MultiplicityMatrix::new(d, &[((0, 1), 2)])?;
        let count = count_v0(&flat, &m2)? as f64;
        let lead = formula_v0(&flat, &m2);
        records.push(CheckRecord::info(
            "count-v0-leading-term-gap",
            Some(&flat),
            Some(4),
            (count - lead) / lead,
        ));
    }

    // block probabilities: sum to one, vanish beyond the rank
    let tol = crate::tol::Tolerances::default();
    let center = if d >= 2 {
        CenterState::new(d, vec![0.7, 0.3], None, &tol)?
    } else {
        return Ok(records);
    };
    for n in 1..=n_max {
        let blocks = block_probabilities(&center, &[0.2], n)?;
        let total: f64 = blocks.iter().map(|(_, p)| p).sum();
        records.push(CheckRecord::new(
            "block-probability-sum",
            None,
            Some(n),
            total - 1.0,
            1e-10,
        ));
        let leak: f64 = blocks
            .iter()
            .filter(|(lam, _)| lam.num_rows() > center.rank())
            .map(|(_, p)| p.abs())
            .sum();
        records.push(CheckRecord::new(
            "block-probability-null-rows",
            None,
            Some(n),
            leak,
            0.0,
        ));
    }

    Ok(records)
}

/// Convenience: residual-weighted failure count of a record set.
pub fn failures(records: &[CheckRecord]) -> usize {
    records.iter().filter(|r| !r.pass).count()
}
