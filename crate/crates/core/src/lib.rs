//! Weighted persistence diagrams of Vietoris-Rips filtrations over finite
//! metric-measure spaces.
//!
//! The pipeline runs: metric-measure space -> critical grid and VR filtration
//! (`filtration`) -> birth-death function over GF(2) (`homology`) -> persistence
//! diagram by Mobius inversion, plus flip-measure weights (`diagram`) ->
//! displacement/edit distances between (weighted) diagrams (`dist`). `metric`
//! holds the space types and the Gromov-Hausdorff / Gromov-Wasserstein solvers
//! used as comparison baselines, `verify` bundles the reproducible empirical
//! checks of the stability inequalities, and `report` the serializable result
//! schemas.

// The numeric kernels index parallel arrays and bit positions by one shared
// loop variable; zip/enumerate chains read worse there.
#![allow(clippy::needless_range_loop)]

pub mod builtin;
pub mod diagram;
pub mod dist;
pub mod error;
pub mod filtration;
mod flow;
pub mod homology;
pub mod io;
pub mod metric;
mod opt;
pub mod report;
pub mod tol;
pub mod verify;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
