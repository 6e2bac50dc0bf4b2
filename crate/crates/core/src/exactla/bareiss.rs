//! Fraction-free (Bareiss) elimination over ℤ.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::sparse::SparseIntMatrix;

/// Exact rank over ℚ by one-step fraction-free elimination.
///
/// Every intermediate entry is a minor of the input, so entries stay bounded
/// by Hadamard's inequality and all divisions are exact.
pub fn rank_fraction_free(m: &SparseIntMatrix) -> usize {
    let mut a = m.to_dense();
    rank_dense(&mut a, m.cols())
}

pub(crate) fn rank_dense(a: &mut [Vec<BigInt>], cols: usize) -> usize {
    let rows = a.len();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pivot);
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let v = &a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c];
                a[r][c] = v / &prev;
            }
            a[r][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let m = SparseIntMatrix::from_dense(&[vec![1, 0], vec![2, 1], vec![0, 2]]);
        assert_eq!(rank_fraction_free(&m), 2);
        let m = SparseIntMatrix::from_dense(&[vec![1, 1], vec![1, 1]]);
        assert_eq!(rank_fraction_free(&m), 1);
        assert_eq!(rank_fraction_free(&SparseIntMatrix::zeros(3, 2)), 0);
    }

    #[test]
    fn skipped_columns_keep_divisions_exact() {
        // Pivot columns 0 and 2 with column 1 dependent.
        let m = SparseIntMatrix::from_dense(&[vec![2, 4, 1, 3], vec![4, 8, 5, 1], vec![6, 12, 3, 7]]);
        assert_eq!(rank_fraction_free(&m), 3);
        let m = SparseIntMatrix::from_dense(&[vec![3, 6, 9], vec![1, 2, 3], vec![2, 4, 7]]);
        assert_eq!(rank_fraction_free(&m), 2);
    }
}
