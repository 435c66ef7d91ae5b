//! Exact configuration counting over the residue rings Z_n^d (odd n):
//! dot-product sets, distance sets, k-star incidence functions, and
//! simplex congruence types, together with the closed-form size thresholds
//! that guarantee ring coverage, a discrete-Fourier cross-check layer, and
//! a seeded experiment harness behind the `zngeom` CLI.
//!
//! Counting is exact integer arithmetic throughout; the Fourier layer is
//! double-precision with explicit tolerances and never feeds back into
//! integer claims. All randomized paths draw from seeded, stream-split
//! generators and produce thread-count-independent results.

pub mod dist;
pub mod dot;
pub mod error;
pub mod fourier;
pub mod harness;
pub mod hist;
mod moments;
pub mod points;
pub mod ring;
pub mod simplex;

pub use error::{Error, Result};
pub use hist::{StarHistogram, ValueHistogram};
pub use moments::{moment_bounds, MomentBoundCheck};
pub use points::PointSet;
pub use ring::Modulus;
pub use simplex::{CensusMode, Metric, SimplexType, TypeCensus};
