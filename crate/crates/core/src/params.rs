//! Map parameters.

use crate::error::Error;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Parameters of the family F(z, w) = (e^{-z^m} + a w, z).
///
/// `a = delta e^{2 pi i / m}` and `big_delta = 1 / (delta - 1)` are derived
/// once in the constructor; `big_delta` strictly bounds the magnitude of the
/// tail series along orbits that stay in the sector union.
#[derive(Clone, Copy, Debug)]
pub struct Params {
    m: u32,
    delta: f64,
    a: Complex64,
    big_delta: f64,
}

impl Params {
    /// Requires m >= 2 and finite delta > 2.
    pub fn new(m: u32, delta: f64) -> Result<Self, Error> {
        if m < 2 {
            return Err(Error::Param(format!("m must be >= 2, got {m}")));
        }
        if !(delta.is_finite() && delta > 2.0) {
            return Err(Error::Param(format!("delta must be finite and > 2, got {delta}")));
        }
        let a = Complex64::from_polar(delta, 2.0 * PI / m as f64);
        Ok(Self { m, delta, a, big_delta: 1.0 / (delta - 1.0) })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// The rotation-scaling coefficient a = delta e^{2 pi i / m}; |a| = delta.
    pub fn a(&self) -> Complex64 {
        self.a
    }

    /// 1 / (delta - 1), strictly less than 1.
    pub fn big_delta(&self) -> f64 {
        self.big_delta
    }

    /// Half-aperture tangent tan(pi / 2m) of the invariant sectors.
    pub fn sector_half_tan(&self) -> f64 {
        (PI / (2.0 * self.m as f64)).tan()
    }
}
