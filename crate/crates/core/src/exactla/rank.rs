//! Certified rank over ℚ.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bareiss::rank_fraction_free;
use super::modp::{banded_order, random_prime, rank_mod_p, rank_mod_p_ordered};
use super::sparse::SparseIntMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RankMethod {
    FractionFree,
    ModularMultiPrime,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankCertificate {
    pub rank: usize,
    pub method: RankMethod,
    /// Primes used, in the order they were drawn (empty for fraction-free).
    pub primes: Vec<u64>,
    /// For the modular method: at least two distinct primes attained the
    /// reported rank and the spot check passed.
    pub agreement: bool,
}

#[derive(Clone, Debug)]
pub struct RankOptions {
    pub seed: u64,
    /// Upper limit on the number of primes tried before giving up on agreement.
    pub max_primes: usize,
    /// Matrices whose larger side is at most this use fraction-free elimination.
    pub fraction_free_limit: usize,
    /// Side length of the random minor re-checked by fraction-free elimination.
    pub spot_check_size: usize,
}

impl Default for RankOptions {
    fn default() -> Self {
        RankOptions { seed: 0x5eed_f01e, max_primes: 8, fraction_free_limit: 64, spot_check_size: 32 }
    }
}

pub fn rank_q(m: &SparseIntMatrix) -> RankCertificate {
    rank_q_with(m, &RankOptions::default())
}

/// Exact rank over ℚ.
///
/// Small matrices are eliminated fraction-free. Larger ones are ranked modulo
/// random 62-bit primes: the rank mod `p` never exceeds the rational rank and
/// drops only when `p` divides every maximal nonvanishing minor, which for a
/// random prime of this size happens with probability far below 2⁻⁴⁰ at window
/// scale. Primes are added until two attain the same (maximal) rank and a
/// random minor ranked fraction-free agrees with its modular ranks.
pub fn rank_q_with(m: &SparseIntMatrix, opts: &RankOptions) -> RankCertificate {
    if m.rows() == 0 || m.cols() == 0 || m.nnz() == 0 {
        return RankCertificate { rank: 0, method: RankMethod::FractionFree, primes: vec![], agreement: true };
    }
    if m.rows().max(m.cols()) <= opts.fraction_free_limit {
        return RankCertificate {
            rank: rank_fraction_free(m),
            method: RankMethod::FractionFree,
            primes: vec![],
            agreement: true,
        };
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let max_primes = opts.max_primes.max(2);
    let primes: Vec<u64> = {
        let mut v: Vec<u64> = Vec::with_capacity(max_primes);
        while v.len() < max_primes {
            let p = random_prime(&mut rng);
            if !v.contains(&p) {
                v.push(p);
            }
        }
        v
    };
    let (relabel, row_order) = banded_order(m);
    let rank_at = |p: u64| rank_mod_p_ordered(m, p, &relabel, &row_order);

    let mut ranks: Vec<usize> = primes[..2].par_iter().map(|&p| rank_at(p)).collect();
    let mut spot_ok = spot_check(m, &primes[..2], opts.spot_check_size, &mut rng);
    loop {
        let best = *ranks.iter().max().expect("at least two primes");
        let hits = ranks.iter().filter(|&&r| r == best).count();
        if hits >= 2 && spot_ok {
            return RankCertificate {
                rank: best,
                method: RankMethod::ModularMultiPrime,
                primes: primes[..ranks.len()].to_vec(),
                agreement: true,
            };
        }
        if ranks.len() == max_primes {
            return RankCertificate {
                rank: best,
                method: RankMethod::ModularMultiPrime,
                primes: primes[..ranks.len()].to_vec(),
                agreement: false,
            };
        }
        let p = primes[ranks.len()];
        ranks.push(rank_at(p));
        if !spot_ok {
            spot_ok = spot_check(m, &[p], opts.spot_check_size, &mut rng);
        }
    }
}

/// Ranks a random minor both fraction-free and modulo each prime.
fn spot_check<R: Rng>(m: &SparseIntMatrix, primes: &[u64], size: usize, rng: &mut R) -> bool {
    let k_rows = size.min(m.rows());
    let k_cols = size.min(m.cols());
    let mut rows = sample(rng, m.rows(), k_rows).into_vec();
    let mut cols = sample(rng, m.cols(), k_cols).into_vec();
    rows.sort_unstable();
    cols.sort_unstable();
    let minor = m.submatrix(&rows, &cols);
    let exact = rank_fraction_free(&minor);
    primes.iter().all(|&p| rank_mod_p(&minor, p) == exact)
}

/// Dimension of the right kernel `{x : Mx = 0}` over ℚ.
pub fn kernel_dim_q(m: &SparseIntMatrix) -> usize {
    m.cols() - rank_q(m).rank
}
