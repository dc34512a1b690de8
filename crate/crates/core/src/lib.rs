//! Exact geometry of absolute normalized norms on the plane, their duals,
//! the classes of polygonal norms that admit centers, and denial margins.

pub mod approx;
pub mod centers;
pub mod classify;
pub mod denial;
pub mod error;
pub(crate) mod fpoly;
pub mod geometry;
pub mod norm;
pub mod rational;
pub mod slice;
pub mod spec_io;
#[cfg(test)]
mod testgen;

pub use error::{Error, Result};
pub use geometry::{Functional2, Vec2};
pub use norm::{AbsNorm2, BlackBoxNorm, NormCandidate, PolygonNorm, ValidationReport};
pub use rational::Rat;
