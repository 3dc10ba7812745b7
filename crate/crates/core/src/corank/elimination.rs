//! Fraction-free (Bareiss) row echelon form over the Gaussian integers.
//!
//! Rows are scaled to clear denominators first, which leaves the row space
//! unchanged. Every intermediate entry is a minor of the scaled input, so
//! the division by the previous pivot is exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::algebra::{GaussianInteger, GaussianRational};

#[derive(Clone, Debug)]
pub struct Echelon {
    /// Nonzero rows in echelon form.
    pub rows: Vec<Vec<GaussianInteger>>,
    /// Pivot column of each row, strictly increasing.
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Scales each row by the lcm of its denominators.
pub fn integer_rows(rows: &[Vec<GaussianRational>]) -> Vec<Vec<GaussianInteger>> {
    rows.iter()
        .map(|row| {
            let scale = row
                .iter()
                .fold(BigInt::one(), |acc, c| acc.lcm(&c.denom_lcm()));
            row.iter().map(|c| c.to_gaussian_integer(&scale)).collect()
        })
        .collect()
}

/// Row echelon form of `rows` (all of equal length) by Bareiss elimination.
pub fn fraction_free_echelon(mut rows: Vec<Vec<GaussianInteger>>) -> Echelon {
    let ncols = rows.first().map_or(0, Vec::len);
    let nrows = rows.len();
    let mut prev = GaussianInteger::one();
    let mut r = 0;
    let mut pivots = Vec::new();
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let pivot = &pivot_row[col];
        for row in tail.iter_mut() {
            let lead = row[col].clone();
            for j in col + 1..ncols {
                let t = pivot.mul(&row[j]).sub(&lead.mul(&pivot_row[j]));
                row[j] = t.div_exact(&prev);
            }
            row[col] = GaussianInteger::new(BigInt::zero(), BigInt::zero());
        }
        prev = rows[r][col].clone();
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    Echelon { rows, pivots }
}
