//! Kernel densities of window restrictions, and the exact per-window identity
//! relating them to submodule ranks through the involution.

use num_bigint::BigInt;
use serde::Serialize;

use super::config::EngineConfig;
use super::presentation::{GeneratorList, ModulePresentation};
use super::span::span_rank;
use crate::error::Result;
use crate::exactla::{rank_q_with, RankCertificate};
use crate::groupring::{window_matrix_on, RingMatrix};
use crate::groups::FolnerSet;
use crate::rational::Rational;

/// `dim_ℚ(ker f ∩ (ℚ[F])^{n×1})` with its rank certificate (none for `m = 0`).
pub fn elek_kernel_dim(
    p: &ModulePresentation,
    window: &FolnerSet,
    cfg: &EngineConfig,
) -> Result<(usize, Option<RankCertificate>)> {
    if p.m() == 0 {
        return Ok((p.n() * window.len(), None));
    }
    kernel_on_window(&p.relations().clear_denominators(), window, cfg)
}

fn kernel_on_window(
    f: &RingMatrix,
    window: &FolnerSet,
    cfg: &EngineConfig,
) -> Result<(usize, Option<RankCertificate>)> {
    let w = window_matrix_on(f, window.elements(), cfg.max_window_elements)?;
    let cert = rank_q_with(&w.matrix, &cfg.rank_options(0x5eed ^ window.len() as u64));
    Ok((w.cols() - cert.rank, Some(cert)))
}

/// `dim_ℚ(ker f ∩ (ℚ[F])^{n×1}) / |F|`.
pub fn elek_kernel_density(p: &ModulePresentation, window: &FolnerSet) -> Result<Rational> {
    let (dim, _) = elek_kernel_dim(p, window, &EngineConfig::default())?;
    Ok(Rational::new(BigInt::from(dim), BigInt::from(window.len())))
}

/// Both sides of `rank⟨F⁻¹A_f⟩ = m|F| − dim_ℚ(ker f* ∩ (ℚ[F])^{m×1})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    /// `rank⟨F⁻¹A_f⟩`, from the span of translated rows of `f`.
    pub span_rank: usize,
    /// `m|F| − dim ker(f* on F)`, from the window matrix of the involution.
    pub kernel_side: usize,
    pub holds: bool,
}

pub fn per_window_identity(f: &RingMatrix, window: &FolnerSet, cfg: &EngineConfig) -> Result<IdentityCheck> {
    let m = f.rows();
    if m == 0 {
        return Ok(IdentityCheck { span_rank: 0, kernel_side: 0, holds: true });
    }
    let f = f.clear_denominators();
    let (lhs, _) = span_rank(&GeneratorList::rows_of(&f), window, cfg)?;
    let (ker, _) = kernel_on_window(&f.involution(), window, cfg)?;
    let rhs = m * window.len() - ker;
    Ok(IdentityCheck { span_rank: lhs, kernel_side: rhs, holds: lhs == rhs })
}

pub fn per_window_identity_check(f: &RingMatrix, window: &FolnerSet) -> Result<bool> {
    Ok(per_window_identity(f, window, &EngineConfig::default())?.holds)
}
