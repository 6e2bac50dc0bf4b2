use crate::exactla::RankOptions;
use crate::groups::DEFAULT_ELEMENT_BUDGET;
use crate::rational::{ratio, Rational};

/// Knobs shared by every engine. All randomness is derived from `seed`.
#[derive(Clone, Debug)]
pub struct EngineConfig {
    /// Convergence tolerance for density series.
    pub tolerance: Rational,
    pub seed: u64,
    /// Cap on the number of group elements (or matrix rows/columns) per window.
    pub max_window_elements: usize,
    /// Cap on the number of primes per modular rank.
    pub max_primes: usize,
    /// Cap on the number of sampled points per packing.
    pub max_samples: usize,
    /// Number of window enlargements tried before an intersection is flagged
    /// as unstabilized.
    pub erank_max_steps: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            tolerance: ratio(1, 100),
            seed: 0,
            max_window_elements: DEFAULT_ELEMENT_BUDGET,
            max_primes: 8,
            max_samples: 4096,
            erank_max_steps: 8,
        }
    }
}

impl EngineConfig {
    /// Rank options for one computation; `salt` decorrelates computations
    /// that share a configuration while keeping every run reproducible.
    pub fn rank_options(&self, salt: u64) -> RankOptions {
        RankOptions {
            seed: self.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15),
            max_primes: self.max_primes,
            ..RankOptions::default()
        }
    }
}
