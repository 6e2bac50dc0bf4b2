//! Arithmetic and sparse row echelon form over `𝔽_p` for word-sized primes.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rand::Rng;

use super::sparse::SparseIntMatrix;

/// Witness set that makes Miller–Rabin deterministic below 2⁶⁴.
const MR_BASES: [u64; 7] = [2, 325, 9375, 28178, 450775, 9780504, 1795265022];

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (if s >= p as u128 { s - p as u128 } else { s }) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue modulo a prime.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(small) {
            return n == small;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_BASES {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A uniformly drawn prime in `[2⁶¹, 2⁶²)`.
pub fn random_prime<R: Rng + ?Sized>(rng: &mut R) -> u64 {
    loop {
        let candidate = rng.gen_range((1u64 << 61)..(1u64 << 62)) | 1;
        if is_prime_u64(candidate) {
            return candidate;
        }
    }
}

/// Residue of an integer in `[0, p)`.
pub fn reduce(v: &BigInt, p: u64) -> u64 {
    if let Some(small) = v.to_i64() {
        return small.rem_euclid(p as i64) as u64;
    }
    let r = (v.abs() % BigInt::from(p)).to_u64().expect("residue fits in u64");
    if v.is_negative() && r != 0 {
        p - r
    } else {
        r
    }
}

/// Sparse row with increasing column indices and nonzero residues.
pub(crate) type ModRow = Vec<(u32, u64)>;

/// Incremental row echelon form over `𝔽_p`.
///
/// Rows are inserted one at a time; each is reduced against the stored pivot
/// rows (only ever eliminating its current leading entry) and, if it survives,
/// becomes the pivot row for its leading column.
pub(crate) struct Echelon {
    p: u64,
    pivots: Vec<Option<ModRow>>,
    rank: usize,
}

impl Echelon {
    pub fn new(cols: usize, p: u64) -> Self {
        Echelon { p, pivots: vec![None; cols], rank: 0 }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Inserts a row; returns whether it increased the rank.
    pub fn insert(&mut self, mut row: ModRow) -> bool {
        let p = self.p;
        let mut scratch = Vec::new();
        while let Some(&(lead, lead_val)) = row.first() {
            match &self.pivots[lead as usize] {
                Some(pivot) => {
                    // pivot has leading coefficient 1
                    let factor = p - lead_val;
                    axpy_into(&row, pivot, factor, p, &mut scratch);
                    std::mem::swap(&mut row, &mut scratch);
                }
                None => {
                    let inv = inv_mod(lead_val, p);
                    for (_, v) in row.iter_mut() {
                        *v = mul_mod(*v, inv, p);
                    }
                    self.pivots[lead as usize] = Some(row);
                    self.rank += 1;
                    return true;
                }
            }
        }
        false
    }
}

/// `out = row + factor·pivot`, dropping zeros; both inputs sorted by column.
fn axpy_into(row: &[(u32, u64)], pivot: &[(u32, u64)], factor: u64, p: u64, out: &mut ModRow) {
    out.clear();
    out.reserve(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let take_row = j >= pivot.len() || (i < row.len() && row[i].0 < pivot[j].0);
        let take_pivot = i >= row.len() || (j < pivot.len() && pivot[j].0 < row[i].0);
        if take_row {
            out.push(row[i]);
            i += 1;
        } else if take_pivot {
            out.push((pivot[j].0, mul_mod(pivot[j].1, factor, p)));
            j += 1;
        } else {
            let v = add_mod(row[i].1, mul_mod(pivot[j].1, factor, p), p);
            if v != 0 {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
}

/// Column and row orders that keep banded window matrices banded: columns by
/// their first occupied row, rows by their leading (re-labelled) column.
pub(crate) fn banded_order(m: &SparseIntMatrix) -> (Vec<u32>, Vec<usize>) {
    let mut first_row = vec![usize::MAX; m.cols()];
    for (i, row) in m.row_iter().enumerate() {
        for (c, _) in row {
            first_row[*c] = first_row[*c].min(i);
        }
    }
    let mut col_order: Vec<usize> = (0..m.cols()).collect();
    col_order.sort_by_key(|&c| (first_row[c], c));
    let mut relabel = vec![0u32; m.cols()];
    for (new, &old) in col_order.iter().enumerate() {
        relabel[old] = new as u32;
    }
    let mut row_order: Vec<usize> = (0..m.rows()).collect();
    let lead = |i: usize| m.row(i).iter().map(|(c, _)| relabel[*c]).min().unwrap_or(u32::MAX);
    row_order.sort_by_key(|&i| (lead(i), i));
    (relabel, row_order)
}

/// Rank of an integer matrix modulo `p`.
pub fn rank_mod_p(m: &SparseIntMatrix, p: u64) -> usize {
    let (relabel, row_order) = banded_order(m);
    rank_mod_p_ordered(m, p, &relabel, &row_order)
}

pub(crate) fn rank_mod_p_ordered(m: &SparseIntMatrix, p: u64, relabel: &[u32], row_order: &[usize]) -> usize {
    let mut ech = Echelon::new(m.cols(), p);
    let limit = m.rows().min(m.cols());
    for &i in row_order {
        if ech.rank() == limit {
            break;
        }
        let mut row: ModRow = m
            .row(i)
            .iter()
            .filter_map(|(c, v)| {
                let r = reduce(v, p);
                (r != 0).then_some((relabel[*c], r))
            })
            .collect();
        row.sort_unstable_by_key(|(c, _)| *c);
        ech.insert(row);
    }
    ech.rank()
}
