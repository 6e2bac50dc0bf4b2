use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Sparse integer matrix in row-major form. Entries are arbitrary precision;
/// zeros are never stored and column indices within a row are increasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, BigInt)>>,
}

impl SparseIntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseIntMatrix { rows, cols, data: vec![Vec::new(); rows] }
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, BigInt)>,
    ) -> Result<Self> {
        let mut data: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); rows];
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(Error::Shape(format!("entry ({r}, {c}) outside {rows}x{cols}")));
            }
            data[r].push((c, v));
        }
        for row in &mut data {
            row.sort_by_key(|(c, _)| *c);
            let mut merged: Vec<(usize, BigInt)> = Vec::with_capacity(row.len());
            for (c, v) in row.drain(..) {
                match merged.last_mut() {
                    Some((lc, lv)) if *lc == c => *lv += v,
                    _ => merged.push((c, v)),
                }
            }
            merged.retain(|(_, v)| !v.is_zero());
            *row = merged;
        }
        Ok(SparseIntMatrix { rows, cols, data })
    }

    pub fn from_dense<T: Into<BigInt> + Clone>(dense: &[Vec<T>]) -> Self {
        let cols = dense.first().map_or(0, Vec::len);
        let data = dense
            .iter()
            .map(|row| {
                assert_eq!(row.len(), cols, "ragged dense matrix");
                row.iter()
                    .cloned()
                    .map(Into::into)
                    .enumerate()
                    .filter(|(_, v): &(usize, BigInt)| !v.is_zero())
                    .collect()
            })
            .collect();
        SparseIntMatrix { rows: dense.len(), cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn row(&self, i: usize) -> &[(usize, BigInt)] {
        &self.data[i]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[(usize, BigInt)]> {
        self.data.iter().map(Vec::as_slice)
    }

    pub fn get(&self, i: usize, j: usize) -> BigInt {
        match self.data[i].binary_search_by_key(&j, |(c, _)| *c) {
            Ok(pos) => self.data[i][pos].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut out = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (i, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                out[i][*c] = v.clone();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut data: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); self.cols];
        for (i, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                data[*c].push((i, v.clone()));
            }
        }
        SparseIntMatrix { rows: self.cols, cols: self.rows, data }
    }

    /// The submatrix on the given row and column indices (in the given order).
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut col_map = vec![usize::MAX; self.cols];
        for (new, &old) in cols.iter().enumerate() {
            col_map[old] = new;
        }
        let data = rows
            .iter()
            .map(|&r| {
                let mut row: Vec<(usize, BigInt)> = self.data[r]
                    .iter()
                    .filter(|(c, _)| col_map[*c] != usize::MAX)
                    .map(|(c, v)| (col_map[*c], v.clone()))
                    .collect();
                row.sort_by_key(|(c, _)| *c);
                row
            })
            .collect();
        SparseIntMatrix { rows: rows.len(), cols: cols.len(), data }
    }

    /// Keeps the columns for which `keep` holds, preserving their order.
    pub fn select_columns(&self, keep: impl Fn(usize) -> bool) -> Self {
        let cols: Vec<usize> = (0..self.cols).filter(|&c| keep(c)).collect();
        let rows: Vec<usize> = (0..self.rows).collect();
        self.submatrix(&rows, &cols)
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &SparseIntMatrix) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::Shape(format!("cannot stack {} and {} columns", self.cols, other.cols)));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(SparseIntMatrix { rows: self.rows + other.rows, cols: self.cols, data })
    }

    /// Multiplies row `i` by `factor` (a zero factor clears the row).
    pub fn scale_row(&mut self, i: usize, factor: &BigInt) {
        if factor.is_zero() {
            self.data[i].clear();
        } else {
            for (_, v) in &mut self.data[i] {
                *v *= factor;
            }
        }
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        if x.len() != self.cols {
            return Err(Error::Shape(format!("vector of length {} for {} columns", x.len(), self.cols)));
        }
        Ok(self.data.iter().map(|row| row.iter().map(|(c, v)| v * &x[*c]).sum()).collect())
    }
}
