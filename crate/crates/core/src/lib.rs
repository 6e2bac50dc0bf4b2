//! Exact computation of mean rank, von Neumann–Lück rank and Elek rank for
//! finitely presented modules over integral group rings of concrete amenable
//! groups, together with a metric mean dimension estimator for the dual
//! algebraic actions.

pub mod error;
pub mod exactla;
pub mod groupring;
pub mod groups;
pub mod mmdim;
pub mod ranks;
pub mod rational;

pub use error::{Error, Result};
