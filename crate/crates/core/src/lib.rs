//! Logarithmic coefficients of inverse functions for classes of univalent
//! functions: truncated series kernel, class constructions, sharp bounds and
//! verification campaigns.

pub mod bounds;
pub mod families;
pub mod harness;
pub mod invlog;
mod kernel;
pub mod series;
