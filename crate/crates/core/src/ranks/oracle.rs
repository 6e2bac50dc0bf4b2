use num_bigint::BigInt;

use super::presentation::ModulePresentation;
use crate::error::Result;
use crate::exactla::{generic_rank_laurent_seeded, regular_rep_kernel};
use crate::groups::GroupSpec;
use crate::rational::Rational;

/// Closed-form value of the common limit, where one is available:
/// `n` for free modules, `n − generic rank` over `ℤ^d`, and the regular
/// representation kernel trace over finite groups. `None` otherwise.
pub fn oracle_value(p: &ModulePresentation, seed: u64) -> Result<Option<Rational>> {
    let n = Rational::from_integer(BigInt::from(p.n()));
    if p.m() == 0 {
        return Ok(Some(n));
    }
    let f = p.relations();
    match p.group() {
        g if g.is_finite() => Ok(Some(regular_rep_kernel(f)?)),
        GroupSpec::Zd { .. } => {
            let r = generic_rank_laurent_seeded(f, seed)?;
            Ok(Some(n - Rational::from_integer(BigInt::from(r))))
        }
        _ => Ok(None),
    }
}
