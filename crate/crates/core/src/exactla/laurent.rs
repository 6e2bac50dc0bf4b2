//! Closed-form oracles: generic rank of a Laurent polynomial matrix over
//! `ℤ[ℤ^d]`, and the kernel trace of the regular representation of a finite group.

use itertools::Itertools;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::modp::{add_mod, inv_mod, mul_mod, pow_mod, random_prime, reduce, Echelon, ModRow};
use super::rank::kernel_dim_q;
use crate::error::{Error, Result};
use crate::groupring::{window_matrix, RingElem, RingMatrix};
use crate::rational::Rational;

/// Default seed for the random evaluation points.
pub const DEFAULT_ORACLE_SEED: u64 = 0x0_12ac1e;

/// Random evaluation trials whose ranks are maximized.
const TRIALS: usize = 3;

/// Matrices with at most this many rows and columns are ranked symbolically.
const MINOR_LIMIT: usize = 4;

fn require_zd(f: &RingMatrix) -> Result<()> {
    match f.group() {
        crate::groups::GroupSpec::Zd { .. } => Ok(()),
        other => Err(Error::Unsupported(format!("generic rank needs a free abelian group, got {other:?}"))),
    }
}

pub fn generic_rank_laurent(f: &RingMatrix) -> Result<usize> {
    generic_rank_laurent_seeded(f, DEFAULT_ORACLE_SEED)
}

/// Rank of `f(z₁,…,z_d)` over the rational function field.
///
/// Small matrices are decided exactly by expanding minors in the group ring.
/// Larger ones are evaluated at random points of `𝔽_p` for random 62-bit
/// primes; by Schwartz–Zippel a nonzero minor of total degree `D` vanishes at
/// a random point with probability at most `D/p`, and the maximum over the
/// trials is returned.
pub fn generic_rank_laurent_seeded(f: &RingMatrix, seed: u64) -> Result<usize> {
    require_zd(f)?;
    let f = f.clear_denominators();
    if f.rows() <= MINOR_LIMIT && f.cols() <= MINOR_LIMIT {
        return Ok(rank_by_minors(&f));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = f.group().free_rank();
    let mut best = 0;
    for _ in 0..TRIALS {
        let p = random_prime(&mut rng);
        let point: Vec<u64> = (0..d).map(|_| rng.gen_range(1..p)).collect();
        best = best.max(rank_at_point(&f, &point, p)?);
    }
    Ok(best)
}

/// Rank over `𝔽_p` of `f` evaluated at `z = point` (all coordinates nonzero mod `p`).
pub fn rank_at_point(f: &RingMatrix, point: &[u64], p: u64) -> Result<usize> {
    require_zd(f)?;
    if point.len() != f.group().free_rank() || point.iter().any(|&z| z % p == 0) {
        return Err(Error::Input("evaluation point must have nonzero coordinates of the right length".into()));
    }
    let f = f.clear_denominators();
    let inverses: Vec<u64> = point.iter().map(|&z| inv_mod(z % p, p)).collect();
    let eval = |e: &RingElem| -> u64 {
        e.terms().iter().fold(0u64, |acc, (g, c)| {
            let mono = g.coords().iter().enumerate().fold(1u64, |m, (i, &u)| {
                let base = if u >= 0 { point[i] % p } else { inverses[i] };
                mul_mod(m, pow_mod(base, u.unsigned_abs(), p), p)
            });
            let coeff = reduce(c.numer(), p);
            add_mod(acc, mul_mod(coeff, mono, p), p)
        })
    };
    let mut ech = Echelon::new(f.cols(), p);
    for j in 0..f.rows() {
        let row: ModRow = (0..f.cols())
            .filter_map(|k| {
                let v = eval(f.entry(j, k));
                (v != 0).then_some((k as u32, v))
            })
            .collect();
        ech.insert(row);
    }
    Ok(ech.rank())
}

/// Largest `r` with a nonvanishing `r×r` minor, by exact cofactor expansion.
fn rank_by_minors(f: &RingMatrix) -> usize {
    let max = f.rows().min(f.cols());
    for r in (1..=max).rev() {
        for rows in (0..f.rows()).combinations(r) {
            for cols in (0..f.cols()).combinations(r) {
                if !determinant(f, &rows, &cols).is_zero() {
                    return r;
                }
            }
        }
    }
    0
}

fn determinant(f: &RingMatrix, rows: &[usize], cols: &[usize]) -> RingElem {
    let group = f.group();
    if rows.len() == 1 {
        return f.entry(rows[0], cols[0]).clone();
    }
    let mut acc = RingElem::zero(group);
    for (i, &c) in cols.iter().enumerate() {
        let entry = f.entry(rows[0], c);
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = entry.try_mul(&determinant(f, &rows[1..], &rest)).expect("same group");
        acc = if i % 2 == 0 { acc.try_add(&term) } else { acc.try_sub(&term) }.expect("same group");
    }
    acc
}

/// `dim ker(f on ℚΓ^{n×1}) / |Γ|` for a finite group `Γ`.
pub fn regular_rep_kernel(f: &RingMatrix) -> Result<Rational> {
    let group = f.group();
    let Some(order) = group.order().filter(|_| group.is_finite()) else {
        return Err(Error::Unsupported(format!("regular representation needs a finite group, got {group:?}")));
    };
    let whole = group.folner_set(1)?;
    let w = window_matrix(&f.clear_denominators(), &whole)?;
    Ok(Rational::new(BigInt::from(kernel_dim_q(&w.matrix)), BigInt::from(order)))
}
