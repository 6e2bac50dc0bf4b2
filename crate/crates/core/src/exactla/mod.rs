//! Exact linear algebra over ℤ and ℚ at window scale.

mod bareiss;
mod dense;
mod laurent;
pub mod modp;
mod rank;
mod sparse;

pub use bareiss::rank_fraction_free;
pub use dense::Rref;
pub use laurent::{
    generic_rank_laurent, generic_rank_laurent_seeded, rank_at_point, regular_rep_kernel, DEFAULT_ORACLE_SEED,
};
pub use rank::{kernel_dim_q, rank_q, rank_q_with, RankCertificate, RankMethod, RankOptions};
pub use sparse::SparseIntMatrix;
