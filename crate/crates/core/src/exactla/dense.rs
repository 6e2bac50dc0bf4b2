//! Dense reduced row echelon form over ℚ, kernels and particular solutions.

use num_traits::{One, Zero};

use crate::rational::Rational;

/// Reduced row echelon form of a rational matrix together with the
/// invertible transform `T` such that `T·A = R`.
#[derive(Clone, Debug)]
pub struct Rref {
    cols: usize,
    /// Nonzero rows of `R` (one per pivot).
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
    /// Full transform, one row per input row; the first `rank` rows produce `rows`.
    transform: Vec<Vec<Rational>>,
}

impl Rref {
    pub fn new(a: &[Vec<Rational>], cols: usize) -> Self {
        let n = a.len();
        let mut r: Vec<Vec<Rational>> = a.to_vec();
        let mut t: Vec<Vec<Rational>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..cols {
            if rank == n {
                break;
            }
            let Some(p) = (rank..n).find(|&i| !r[i][col].is_zero()) else {
                continue;
            };
            r.swap(rank, p);
            t.swap(rank, p);
            let inv = r[rank][col].recip();
            scale(&mut r[rank], &inv);
            scale(&mut t[rank], &inv);
            for i in 0..n {
                if i != rank && !r[i][col].is_zero() {
                    let factor = r[i][col].clone();
                    let (pr, pt) = (r[rank].clone(), t[rank].clone());
                    sub_scaled(&mut r[i], &pr, &factor);
                    sub_scaled(&mut t[i], &pt, &factor);
                }
            }
            pivots.push(col);
            rank += 1;
        }
        r.truncate(rank);
        Rref { cols, rows: r, pivots, transform: t }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols).filter(|&c| !is_pivot[c]).collect()
    }

    /// Basis of `{x : A x = 0}`, one vector per free column; the vector for
    /// free column `c` has a 1 at `c` and 0 at every other free column.
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        self.free_columns()
            .into_iter()
            .map(|free| {
                let mut v = vec![Rational::zero(); self.cols];
                v[free] = Rational::one();
                for (row, &piv) in self.rows.iter().zip(&self.pivots) {
                    v[piv] = -row[free].clone();
                }
                v
            })
            .collect()
    }

    /// A solution of `A x = b` with every free coordinate zero, if one exists.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(b.len(), self.transform.len(), "right-hand side length");
        let tb: Vec<Rational> =
            self.transform.iter().map(|trow| trow.iter().zip(b).map(|(x, y)| x * y).sum()).collect();
        if tb[self.rank()..].iter().any(|v| !v.is_zero()) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (i, &piv) in self.pivots.iter().enumerate() {
            x[piv] = tb[i].clone();
        }
        Some(x)
    }
}

fn scale(row: &mut [Rational], by: &Rational) {
    for v in row.iter_mut() {
        *v *= by;
    }
}

fn sub_scaled(row: &mut [Rational], pivot: &[Rational], factor: &Rational) {
    for (v, p) in row.iter_mut().zip(pivot) {
        if !p.is_zero() {
            *v -= p * factor;
        }
    }
}
