//! Rank engines: mean rank through submodule densities, von Neumann–Lück rank
//! through window kernel densities, and Elek rank through window-growth
//! intersections; plus density series, rationality snapping and the
//! randomized identity suites.

mod config;
mod elek;
mod erank;
mod oracle;
mod presentation;
mod series;
mod span;
pub mod suites;

pub use config::EngineConfig;
pub use elek::{elek_kernel_density, elek_kernel_dim, per_window_identity, per_window_identity_check, IdentityCheck};
pub use erank::{erank_dual_restriction_dim, erank_span_dim, quotient_span_rank, StabilizedDim};
pub use oracle::oracle_value;
pub use presentation::{GeneratorList, ModulePresentation};
pub use series::{
    erank_series, gap, mrank_of_presentation, on_grid, rationality_snap, snap_to_grid, submodule_series,
    validate_schedule, vnd_series, Bound, DensitySeries, Quantity, RationalitySnap, SeriesRecord, SeriesStatus,
};
pub use span::{span_rank, span_rank_on, submodule_rank_density};
