//! Exact Smith normal form of integer matrices.
//!
//! Only the rank and the elementary-divisor chain are computed; the
//! unimodular transform factors are never materialized. Arithmetic is
//! arbitrary precision throughout: even small inputs can grow intermediate
//! entries past machine words.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Sparse integer matrix in column-major form: each column stores its
/// nonzero `(row, value)` entries sorted by row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseIntMatrix {
    n_rows: usize,
    columns: Vec<Vec<(usize, BigInt)>>,
}

impl SparseIntMatrix {
    pub fn zero(n_rows: usize, n_cols: usize) -> Self {
        Self {
            n_rows,
            columns: vec![Vec::new(); n_cols],
        }
    }

    /// Builds a matrix from `(row, col, value)` triplets. Entries at the
    /// same position are summed; zero sums are dropped.
    pub fn from_triplets(
        n_rows: usize,
        n_cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, BigInt)>,
    ) -> Result<Self> {
        let mut columns: Vec<std::collections::BTreeMap<usize, BigInt>> =
            vec![Default::default(); n_cols];
        for (r, c, v) in triplets {
            if r >= n_rows || c >= n_cols {
                return Err(Error::Input(format!(
                    "matrix entry ({r}, {c}) outside a {n_rows}x{n_cols} matrix"
                )));
            }
            *columns[c].entry(r).or_insert_with(BigInt::zero) += v;
        }
        Ok(Self {
            n_rows,
            columns: columns
                .into_iter()
                .map(|col| col.into_iter().filter(|(_, v)| !v.is_zero()).collect())
                .collect(),
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n_rows: n,
            columns: (0..n).map(|i| vec![(i, BigInt::from(1))]).collect(),
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn entry_count(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    /// Nonzero entries of one column, sorted by row.
    pub fn column(&self, c: usize) -> &[(usize, BigInt)] {
        &self.columns[c]
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        self.columns[c]
            .binary_search_by_key(&r, |(row, _)| *row)
            .map(|i| self.columns[c][i].1.clone())
            .unwrap_or_else(|_| BigInt::zero())
    }

    /// All nonzero entries as `(row, col, value)`, column-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v)))
    }

    /// Matrix product `self * rhs` (dimensions must agree).
    pub fn multiply(&self, rhs: &SparseIntMatrix) -> SparseIntMatrix {
        assert_eq!(
            self.n_cols(),
            rhs.n_rows(),
            "dimension mismatch: {}x{} times {}x{}",
            self.n_rows(),
            self.n_cols(),
            rhs.n_rows(),
            rhs.n_cols()
        );
        let columns = rhs
            .columns
            .iter()
            .map(|rhs_col| {
                let mut acc: std::collections::BTreeMap<usize, BigInt> = Default::default();
                for (mid, weight) in rhs_col {
                    for (r, v) in &self.columns[*mid] {
                        *acc.entry(*r).or_insert_with(BigInt::zero) += v * weight;
                    }
                }
                acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        SparseIntMatrix {
            n_rows: self.n_rows,
            columns,
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut rows = vec![vec![BigInt::zero(); self.n_cols()]; self.n_rows];
        for (r, c, v) in self.entries() {
            rows[r][c] = v.clone();
        }
        rows
    }
}

/// Rank and elementary-divisor chain of an integer matrix.
///
/// `divisors` has length `rank`; every entry is positive and divides the
/// next one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub rank: usize,
    pub divisors: Vec<BigInt>,
}

/// Computes the Smith normal form invariants of `matrix`.
///
/// Strategy: pick the nonzero entry of minimum absolute value (ties broken
/// by smallest row, then column) as the pivot, clear its row and column
/// with symmetric-remainder division steps, re-picking whenever a nonzero
/// remainder survives, and recurse on the trailing submatrix. Divisibility
/// violations along the diagonal are repaired afterwards by replacing
/// adjacent pairs with (gcd, lcm) until the chain stabilizes. The
/// minimum-magnitude pivot keeps intermediate growth tame at the scales
/// this library targets.
pub fn smith_normal_form(matrix: &SparseIntMatrix) -> SmithDecomposition {
    let n_rows = matrix.n_rows();
    let n_cols = matrix.n_cols();
    let mut a = matrix.to_dense();
    let mut diagonal: Vec<BigInt> = Vec::new();

    let mut k = 0;
    while k < n_rows.min(n_cols) {
        let Some((pi, pj)) = min_abs_pivot(&a, k, n_rows, n_cols) else {
            break;
        };
        a.swap(k, pi);
        swap_columns(&mut a, k, pj);

        loop {
            let mut leftover = false;
            // Row steps shrink the entries below the pivot in column k.
            for i in k + 1..n_rows {
                if a[i][k].is_zero() {
                    continue;
                }
                let q = nearest_quotient(&a[i][k], &a[k][k]);
                if !q.is_zero() {
                    for j in k..n_cols {
                        let delta = &q * &a[k][j];
                        a[i][j] -= delta;
                    }
                }
                leftover |= !a[i][k].is_zero();
            }
            // Column steps shrink the entries right of the pivot in row k.
            for j in k + 1..n_cols {
                if a[k][j].is_zero() {
                    continue;
                }
                let q = nearest_quotient(&a[k][j], &a[k][k]);
                if !q.is_zero() {
                    for row in a.iter_mut().skip(k) {
                        let delta = &q * &row[k];
                        row[j] -= delta;
                    }
                }
                leftover |= !a[k][j].is_zero();
            }
            if !leftover {
                break;
            }
            // A remainder strictly smaller than the pivot survived; make
            // the smallest entry the new pivot and repeat.
            let (pi, pj) = min_abs_pivot(&a, k, n_rows, n_cols)
                .expect("pivot cannot vanish while remainders are nonzero");
            a.swap(k, pi);
            swap_columns(&mut a, k, pj);
        }

        diagonal.push(a[k][k].abs());
        k += 1;
    }

    // Repair the divisibility chain: (x, y) -> (gcd, lcm) preserves the
    // multiset of elementary divisors and sorts each prime's exponents.
    loop {
        let mut changed = false;
        for i in 0..diagonal.len().saturating_sub(1) {
            if !(&diagonal[i + 1] % &diagonal[i]).is_zero() {
                let g = diagonal[i].gcd(&diagonal[i + 1]);
                let l = &diagonal[i] / &g * &diagonal[i + 1];
                diagonal[i] = g;
                diagonal[i + 1] = l;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    SmithDecomposition {
        rank: diagonal.len(),
        divisors: diagonal,
    }
}

/// Rank of `matrix` over the integers (equivalently over the rationals).
pub fn rank(matrix: &SparseIntMatrix) -> usize {
    smith_normal_form(matrix).rank
}

/// Position of the nonzero entry of minimum absolute value in the trailing
/// submatrix starting at `(k, k)`, scanning row-major so ties resolve to
/// the smallest row, then column.
fn min_abs_pivot(
    a: &[Vec<BigInt>],
    k: usize,
    n_rows: usize,
    n_cols: usize,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in k..n_rows {
        for j in k..n_cols {
            if a[i][j].is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if a[bi][bj].abs() <= a[i][j].abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

fn swap_columns(a: &mut [Vec<BigInt>], c1: usize, c2: usize) {
    if c1 != c2 {
        for row in a.iter_mut() {
            row.swap(c1, c2);
        }
    }
}

/// Quotient q minimizing |a - q*b| (symmetric remainder).
fn nearest_quotient(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut q, r) = a.div_rem(b);
    if r.abs() * 2 > b.abs() {
        // Shift the remainder by one multiple of b towards zero.
        if r.sign() == b.sign() {
            q += 1;
        } else {
            q -= 1;
        }
    }
    q
}
