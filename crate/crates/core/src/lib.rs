//! Expected fixed-point statistics of uniformly random degree-n covers of the
//! closed genus-2 surface.
//!
//! The crate is organised bottom-up: [`asympt`] (Laurent series), [`symrep`]
//! (symmetric-group representations), [`words`] (the surface group),
//! [`tiled`] (tiled surfaces), [`core_surface`], [`resolve`], [`expect`]
//! (the representation-theoretic formulas) and [`oracle`] (brute force).

#![allow(clippy::needless_range_loop)]

pub mod asympt;
pub mod core_surface;
pub mod error;
pub mod expect;
pub mod modular;
pub mod oracle;
pub mod perm;
pub mod resolve;
pub mod symrep;
pub mod tiled;
pub mod words;

pub use asympt::LaurentSeries;
pub use error::{Error, Result};
pub use symrep::{Partition, SkewShape, Tableau};
pub use tiled::TiledSurface;
pub use words::{CyclicWord, Letter, Word};

/// Number of worker threads requested through `COVSTAT_THREADS`, if set.
pub fn configured_threads() -> Option<usize> {
    std::env::var("COVSTAT_THREADS").ok().and_then(|s| s.parse().ok()).filter(|&n| n > 0)
}
