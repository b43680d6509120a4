//! Young diagrams, semistandard tableaux, and the two dimension formulas.
//!
//! A diagram `λ = (λ_1 ≥ … ≥ λ_k > 0)` with `n` boxes indexes one block
//! `H_λ ⊗ K_λ` of the tensor space `(C^d)^⊗n`. `dim H_λ` counts semistandard
//! tableaux (rows nondecreasing, columns strictly increasing, entries `< d`)
//! and `dim K_λ` counts standard tableaux. A semistandard filling is encoded
//! by its multiplicity matrix `m`, where `m[i][j]` is the number of `j`
//! entries in row `i` (`i < j`); row `i` then holds `λ_i - Σ_j m[i][j]`
//! copies of `i` followed by the larger letters in increasing order.
//!
//! Indices are 0-based throughout.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Integer partition with weakly decreasing positive rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct YoungDiagram {
    rows: Vec<usize>,
}

impl YoungDiagram {
    /// Build from row lengths; trailing zeros are dropped.
    pub fn new(mut rows: Vec<usize>) -> Result<Self> {
        while rows.last() == Some(&0) {
            rows.pop();
        }
        if rows.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotSemistandard);
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Total number of boxes.
    pub fn boxes(&self) -> usize {
        self.rows.iter().sum()
    }

    /// Row length with zero padding past the last row.
    pub fn row(&self, i: usize) -> usize {
        self.rows.get(i).copied().unwrap_or(0)
    }

    /// Length of column `c` (number of rows with at least `c+1` boxes).
    pub fn column_len(&self, c: usize) -> usize {
        self.rows.iter().filter(|&&r| r > c).count()
    }

    /// All partitions of `n` with at most `max_rows` rows, in a fixed
    /// (lexicographically decreasing) order.
    pub fn partitions(n: usize, max_rows: usize) -> Vec<YoungDiagram> {
        fn rec(
            remaining: usize,
            max_part: usize,
            rows_left: usize,
            prefix: &mut Vec<usize>,
            out: &mut Vec<YoungDiagram>,
        ) {
            if remaining == 0 {
                out.push(YoungDiagram {
                    rows: prefix.clone(),
                });
                return;
            }
            if rows_left == 0 {
                return;
            }
            let hi = remaining.min(max_part);
            let lo = remaining.div_ceil(rows_left);
            for part in (lo..=hi).rev() {
                prefix.push(part);
                rec(remaining - part, part, rows_left - 1, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        let mut prefix = Vec::new();
        rec(n, n, max_rows, &mut prefix, &mut out);
        out
    }
}

/// Multiplicity encoding of a semistandard filling: `m[(i, j)]` counts the
/// letter `j` in row `i` for `i < j < d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityMatrix {
    d: usize,
    counts: BTreeMap<(usize, usize), usize>,
}

impl MultiplicityMatrix {
    pub fn new(d: usize, entries: &[((usize, usize), usize)]) -> Result<Self> {
        let mut counts = BTreeMap::new();
        for &((i, j), c) in entries {
            if j <= i || j >= d {
                return Err(Error::IndexMismatch);
            }
            if c > 0 {
                counts.insert((i, j), c);
            }
        }
        Ok(Self { d, counts })
    }

    pub fn zero(d: usize) -> Self {
        Self {
            d,
            counts: BTreeMap::new(),
        }
    }

    pub fn alphabet(&self) -> usize {
        self.d
    }

    pub fn get(&self, i: usize, j: usize) -> usize {
        self.counts.get(&(i, j)).copied().unwrap_or(0)
    }

    /// `|m| = Σ m[(i,j)]`.
    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize), &usize)> {
        self.counts.iter()
    }

    /// Row balance at letter `i`: boxes row `i` lends out minus boxes it
    /// receives, `Σ_{j>i} m[i][j] - Σ_{j<i} m[j][i]`. Two basis vectors with
    /// different balance vectors are exactly orthogonal.
    pub fn row_balance(&self, i: usize) -> i64 {
        let lent: i64 = self
            .counts
            .iter()
            .filter(|&(&(a, _), _)| a == i)
            .map(|(_, &c)| c as i64)
            .sum();
        let received: i64 = self
            .counts
            .iter()
            .filter(|&(&(_, b), _)| b == i)
            .map(|(_, &c)| c as i64)
            .sum();
        lent - received
    }

    /// The semistandard row contents this matrix encodes: row `i` gets
    /// `λ_i - Σ m[i][j]` copies of `i` followed by each `j` repeated
    /// `m[i][j]` in increasing order. Errors when the counts overflow the
    /// row or the columns fail to increase strictly.
    pub fn filling(&self, lambda: &YoungDiagram) -> Result<Vec<Vec<u8>>> {
        let k = lambda.num_rows();
        let mut rows = Vec::with_capacity(k);
        for i in 0..k {
            let borrowed: usize = (i + 1..self.d).map(|j| self.get(i, j)).sum();
            if borrowed > lambda.row(i) {
                return Err(Error::NotSemistandard);
            }
            let mut row = vec![i as u8; lambda.row(i) - borrowed];
            for j in i + 1..self.d {
                row.extend(std::iter::repeat_n(j as u8, self.get(i, j)));
            }
            rows.push(row);
        }
        for i in 1..k {
            for (c, &entry) in rows[i].iter().enumerate() {
                if entry <= rows[i - 1][c] {
                    return Err(Error::NotSemistandard);
                }
            }
        }
        Ok(rows)
    }

    /// Row-wise word of the filling (tensor-factor letters in canonical
    /// position order).
    pub fn word(&self, lambda: &YoungDiagram) -> Result<Vec<u8>> {
        Ok(self.filling(lambda)?.concat())
    }
}

/// All semistandard fillings of `lambda` with entries `< d`, as
/// multiplicity matrices. The count equals the Weyl dimension of `H_λ`.
pub fn enumerate_ssyt(lambda: &YoungDiagram, d: usize) -> Result<Vec<MultiplicityMatrix>> {
    const N_MAX: usize = 8;
    if lambda.boxes() > N_MAX {
        return Err(Error::TooLarge {
            what: "boxes",
            size: lambda.boxes(),
            limit: N_MAX,
        });
    }
    let k = lambda.num_rows();
    let mut out = Vec::new();
    if k == 0 {
        out.push(MultiplicityMatrix::zero(d));
        return Ok(out);
    }
    if k > d {
        return Ok(out);
    }
    // fill row by row, cell by cell, tracking the previous row
    fn rec(
        lambda: &YoungDiagram,
        d: usize,
        row: usize,
        col: usize,
        current: &mut Vec<Vec<u8>>,
        out: &mut Vec<MultiplicityMatrix>,
    ) {
        let k = lambda.num_rows();
        if row == k {
            let mut entries = Vec::new();
            for (i, r) in current.iter().enumerate() {
                let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
                for &e in r {
                    if e as usize != i {
                        *counts.entry(e as usize).or_default() += 1;
                    }
                }
                for (j, c) in counts {
                    entries.push(((i, j), c));
                }
            }
            out.push(MultiplicityMatrix::new(d, &entries).expect("valid filling"));
            return;
        }
        if col == lambda.row(row) {
            rec(lambda, d, row + 1, 0, current, out);
            return;
        }
        let min_left = if col > 0 { current[row][col - 1] } else { 0 };
        let min_above = if row > 0 && lambda.row(row - 1) > col {
            current[row - 1][col] + 1
        } else {
            0
        };
        let lo = min_left.max(min_above).max(row as u8);
        for e in lo..d as u8 {
            current[row].push(e);
            rec(lambda, d, row, col + 1, current, out);
            current[row].pop();
        }
    }
    let mut current: Vec<Vec<u8>> = vec![Vec::new(); k];
    rec(lambda, d, 0, 0, &mut current, &mut out);
    Ok(out)
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Weyl dimension of `H_λ` for alphabet size `d`:
/// `Π_{i<j≤d} (λ_i - λ_j + j - i)/(j - i)`.
pub fn weyl_dim(lambda: &YoungDiagram, d: usize) -> u128 {
    if lambda.num_rows() > d {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..d {
        for j in i + 1..d {
            let li = lambda.row(i) as i128;
            let lj = lambda.row(j) as i128;
            num *= (li - lj + (j - i) as i128) as u128;
            den *= (j - i) as u128;
            let g = gcd(num, den);
            num /= g;
            den /= g;
        }
    }
    debug_assert_eq!(den, 1);
    num
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Dimension of the symmetric-group block `K_λ` (number of standard
/// tableaux): `n! Π_{i<j≤k}(λ_i - λ_j + j - i) / Π_i (λ_i + k - i)!` for any
/// `k` at least the number of rows.
pub fn syt_dim(lambda: &YoungDiagram) -> u128 {
    let k = lambda.num_rows().max(1);
    let mut num = factorial(lambda.boxes());
    let mut den: u128 = 1;
    for i in 0..k {
        for j in i + 1..k {
            num *= (lambda.row(i) - lambda.row(j) + j - i) as u128;
        }
        den *= factorial(lambda.row(i) + k - 1 - i);
        let g = gcd(num, den);
        num /= g;
        den /= g;
    }
    debug_assert_eq!(den, 1);
    num
}

/// Same dimension via hook lengths, used as an independent cross-check:
/// `n! / Π_boxes hook`.
pub fn syt_dim_hooks(lambda: &YoungDiagram) -> u128 {
    let mut num = factorial(lambda.boxes());
    let mut den: u128 = 1;
    for i in 0..lambda.num_rows() {
        for c in 0..lambda.row(i) {
            let arm = lambda.row(i) - c - 1;
            let leg = lambda.rows()[i..].iter().filter(|&&r| r > c).count() - 1;
            den *= (arm + leg + 1) as u128;
            let g = gcd(num, den);
            num /= g;
            den /= g;
        }
    }
    debug_assert_eq!(den, 1);
    num
}
