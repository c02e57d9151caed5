//! Subset selection from large non-dominated candidate sets.
//!
//! The crate is organised bottom-up:
//!
//! * [`point`] holds the objective-space data model (point sets, dominance,
//!   ideal/nadir points, seeded random streams).
//! * [`sampler`] draws uniform candidate sets on the six triangular and
//!   inverted-triangular front geometries.
//! * [`hypervolume`] computes exact hypervolume (WFG) and the ray-based
//!   contribution approximation.
//! * [`indicators`] implements IGD, IGD+, the additive epsilon indicator and
//!   the uniformity level.
//! * [`selectors`] contains the ten subset-selection methods and the lazy
//!   greedy engine they share.
//!
//! All objectives are minimized.
//!
//! Data-parallel inner loops go through [`exec`], which uses rayon when the
//! `parallel` feature is enabled (the default) and plain iterators otherwise.

pub mod error;
pub mod exec;
pub mod hypervolume;
pub mod indicators;
pub mod point;
pub mod sampler;
pub mod selectors;

pub use error::{Error, Result};
pub use point::{dominates, ideal_nadir, nondominated_filter, reference_point, PointSet, Seed};
pub use selectors::{Method, SelectParams, SelectionResult};
