//! Dynamics of the transcendental Hénon family
//!
//! ```text
//!     F(z, w) = (e^{-z^m} + a w, z),      a = delta e^{2 pi i / m},
//! ```
//!
//! with integer `m >= 2` and real `delta > 2`. The crate provides:
//!
//! - the map, its inverse, orbits and the closed-form iterate ([`dynamics`]),
//! - sector / ray / absorbing-set geometry and seeded samplers ([`geometry`]),
//! - the permutation `gamma(a, b) = (b + 1, a)` on `Z_m x Z_m`, its cycle
//!   decomposition and the angular-slice assignment ([`combinatorics`]),
//! - limit functions `h1`, `h2`, the conjugacy to the linear model
//!   `L(z, w) = (a w, z)` and numeric diagnostics ([`limits`]),
//! - an escape / cycle-classification raster renderer ([`render`]),
//! - structured verification suites shared with the CLI ([`verify`]).
//!
//! All samplers are seeded and deterministic; all raster output is
//! byte-stable across worker counts.

pub mod chebyshev;
pub mod combinatorics;
pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod limits;
pub mod log_complex;
pub mod params;
pub mod parse;
pub mod point;
pub mod render;
pub mod sphere;
pub mod verify;

pub use error::Error;
pub use params::Params;
pub use point::ComplexPair;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
