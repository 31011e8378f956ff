//! Exact-arithmetic finite-geometry engine for scattered linear sets of
//! pseudoregulus type on a projective line PG(1, q^t): construction by
//! projection of a subgeometry, by field reduction onto a norm hypersurface,
//! and as an exterior splash, together with exhaustive verification of the
//! associated counting results at desk scale.

pub mod cli;
pub mod curves;
pub mod error;
pub mod fieldred;
pub mod gf;
pub mod hypersurface;
pub mod linset;
pub mod projspace;

pub use error::{Error, Result};
pub use gf::FieldTower;

/// Entry point used by the command-line binary; returns the exit status.
pub fn run_cli() -> i32 {
    cli::run()
}
