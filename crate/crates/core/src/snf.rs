//! Exact integer matrices and Smith normal form.
//!
//! Used to decide whether a presentation abelianizes to the trivial group:
//! the relation matrix of exponent sums has Smith normal form with as many
//! diagonal ones as generators exactly when the abelianization vanishes.
//! All arithmetic is over arbitrary-precision integers, since elimination
//! can grow entries well past machine words even for small inputs.

use alloc::vec::Vec;
use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};

/// A dense integer matrix, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: alloc::vec![BigInt::zero(); rows * cols] }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = IntMatrix::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = BigInt::from(v);
            }
        }
        m
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }
}

impl core::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// The diagonal of the Smith normal form: non-negative entries
/// `d_1 | d_2 | ... | d_k` with `k = min(rows, cols)`, zeros included.
pub fn smith_normal_form(matrix: &IntMatrix) -> Vec<BigUint> {
    let mut m = matrix.clone();
    let k = m.rows.min(m.cols);
    let mut diag = Vec::with_capacity(k);
    for t in 0..k {
        loop {
            // Find the entry of smallest nonzero magnitude in the
            // remaining block and move it to the pivot position.
            let mut best: Option<(usize, usize)> = None;
            for i in t..m.rows {
                for j in t..m.cols {
                    if m[(i, j)].is_zero() {
                        continue;
                    }
                    let better = match best {
                        None => true,
                        Some(b) => m[(i, j)].magnitude() < m[b].magnitude(),
                    };
                    if better {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                // Remaining block is zero; the rest of the diagonal is too.
                break;
            };
            swap_rows(&mut m, t, pi);
            swap_cols(&mut m, t, pj);
            // Reduce column and row against the pivot.
            let mut dirty = false;
            for i in t + 1..m.rows {
                if m[(i, t)].is_zero() {
                    continue;
                }
                let q = div_rounded(&m[(i, t)], &m[(t, t)]);
                if !q.is_zero() {
                    row_sub_mul(&mut m, i, t, &q);
                }
                if !m[(i, t)].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..m.cols {
                if m[(t, j)].is_zero() {
                    continue;
                }
                let q = div_rounded(&m[(t, j)], &m[(t, t)]);
                if !q.is_zero() {
                    col_sub_mul(&mut m, j, t, &q);
                }
                if !m[(t, j)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // Row and column are clear. Enforce the divisibility chain: if
            // some remaining entry is not divisible by the pivot, fold its
            // row into row t and restart the reduction.
            let pivot = m[(t, t)].clone();
            let mut offender = None;
            'scan: for i in t + 1..m.rows {
                for j in t + 1..m.cols {
                    if !(&m[(i, j)] % &pivot).is_zero() {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    row_add(&mut m, t, i);
                }
                None => break,
            }
        }
        diag.push(m[(t, t)].magnitude().clone());
    }
    diag
}

/// True when the cokernel of the matrix (columns = generators) is trivial,
/// i.e. the Smith normal form has a 1 for every column.
pub fn cokernel_trivial(matrix: &IntMatrix) -> bool {
    use num_traits::One;
    let ones = smith_normal_form(matrix).iter().filter(|d| d.is_one()).count();
    ones == matrix.cols
}

fn swap_rows(m: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..m.cols {
        let tmp = m[(a, j)].clone();
        m[(a, j)] = m[(b, j)].clone();
        m[(b, j)] = tmp;
    }
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..m.rows {
        let tmp = m[(i, a)].clone();
        m[(i, a)] = m[(i, b)].clone();
        m[(i, b)] = tmp;
    }
}

/// row_a -= q * row_b.
fn row_sub_mul(m: &mut IntMatrix, a: usize, b: usize, q: &BigInt) {
    for j in 0..m.cols {
        let delta = q * &m[(b, j)];
        m[(a, j)] -= delta;
    }
}

/// col_a -= q * col_b.
fn col_sub_mul(m: &mut IntMatrix, a: usize, b: usize, q: &BigInt) {
    for i in 0..m.rows {
        let delta = q * &m[(i, b)];
        m[(i, a)] -= delta;
    }
}

/// row_a += row_b.
fn row_add(m: &mut IntMatrix, a: usize, b: usize) {
    for j in 0..m.cols {
        let delta = m[(b, j)].clone();
        m[(a, j)] += delta;
    }
}

/// Quotient rounded toward the nearest integer, so the remainder magnitude
/// is at most half the divisor: guarantees strict decrease of the minimal
/// magnitude during reduction.
fn div_rounded(n: &BigInt, d: &BigInt) -> BigInt {
    let (q, r) = num_integer::Integer::div_mod_floor(n, d);
    if r * BigInt::from(2) >= d.abs() {
        q + 1
    } else {
        q
    }
}
