//! Numerical toolkit for γ-uniformly distributed point sequences on the
//! torus: Weyl sums, analytic Fourier transforms of annuli and spheres, and
//! exact geometric incidence counts with their main-term / remainder split.

pub mod error;
pub mod exec;
pub mod fourier;
pub mod generators;
pub mod geometry;
pub mod harness;
pub mod incidence;
pub mod numeric;
pub mod rng;
pub mod weyl;

pub use error::{Error, Result};
pub use exec::Exec;
pub use geometry::{Metric, Point, PointSequence, Provenance, RegionSpec};
