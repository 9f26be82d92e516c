//! Exact computational geometry and dynamics over fields of Puiseux series.
//!
//! The crate provides, bottom up:
//!
//! - truncated Puiseux series with exact Gaussian-rational coefficients and
//!   a certified precision model ([`puiseux`]);
//! - polynomials and rational functions over those coefficients ([`cpoly`]);
//! - points and closed balls of the projective line over the series field,
//!   with the combinatorics of their partial order ([`berkline`]);
//! - Moebius transformations over the series field and their action on
//!   points and balls ([`moebius`]);
//! - one-parameter families of rational maps: reduction, images of balls,
//!   tangent maps, and local degrees ([`ratmap`]);
//! - limiting trees of spheres for marked families, covers between trees,
//!   and their verification ([`trees`]);
//! - iteration on trees: orbits of balls, periodic vertices, and rescaling
//!   limits ([`dynamics`]);
//! - a command-line front end with a stable JSON report format ([`cli`]).
//!
//! All core computations are exact; floating point appears only in numeric
//! cross-checks and in the evaluation helpers.

pub mod berkline;
pub mod cli;
pub mod cpoly;
pub mod dynamics;
pub mod error;
pub mod exact;
pub mod moebius;
pub mod puiseux;
pub mod ratmap;
pub mod trees;

pub use error::{Error, Result};
