//! Point type for the two-dimensional phase space.

use num_complex::Complex64;
use std::fmt;

/// A point (z, w) in C^2.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ComplexPair {
    pub z: Complex64,
    pub w: Complex64,
}

impl ComplexPair {
    pub fn new(z: Complex64, w: Complex64) -> Self {
        Self { z, w }
    }

    /// Both coordinates from real parts only.
    pub fn from_re(z: f64, w: f64) -> Self {
        Self::new(Complex64::new(z, 0.0), Complex64::new(w, 0.0))
    }

    pub fn is_finite(&self) -> bool {
        self.z.is_finite() && self.w.is_finite()
    }

    /// Max of the two coordinate magnitudes.
    pub fn norm_max(&self) -> f64 {
        self.z.norm().max(self.w.norm())
    }

    /// Euclidean distance to `other` in C^2.
    pub fn dist(&self, other: &ComplexPair) -> f64 {
        ((self.z - other.z).norm_sqr() + (self.w - other.w).norm_sqr()).sqrt()
    }
}

impl fmt::Display for ComplexPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.z, self.w)
    }
}
