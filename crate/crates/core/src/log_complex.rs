//! Log-domain evaluation of z^m.
//!
//! Powers of large complex numbers overflow binary64 long before the
//! quantities built from them (real parts compared against thresholds,
//! magnitudes of e^{-z^m}) stop being meaningful. Everything here works on
//! the pair (m ln|z|, m arg z) once m ln|z| passes `LOG_DOMAIN_THRESHOLD`,
//! and on plain binary64 repeated squaring below it.

use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

/// Above this value of m ln|z|, z^m is evaluated in the log domain.
/// exp(700) ~ 1.01e304 still fits binary64 with room for the squaring chain.
pub const LOG_DOMAIN_THRESHOLD: f64 = 700.0;

/// A nonzero complex number stored as (log magnitude, principal phase).
#[derive(Clone, Copy, Debug)]
pub struct LogComplex {
    pub log_mag: f64,
    /// Principal value in (-pi, pi].
    pub phase: f64,
}

impl LogComplex {
    /// None for z = 0 (no logarithm).
    pub fn from_complex(z: Complex64) -> Option<Self> {
        if z == Complex64::new(0.0, 0.0) {
            return None;
        }
        Some(Self { log_mag: z.norm().ln(), phase: z.arg() })
    }

    /// (z)^m in the log domain: exact scaling of the log magnitude, phase
    /// reduced back to the principal branch.
    pub fn powi(self, m: u32) -> Self {
        Self { log_mag: self.log_mag * m as f64, phase: wrap_angle(self.phase * m as f64) }
    }

    /// Real part, allowed to round to +/-inf.
    pub fn re(self) -> f64 {
        let c = self.phase.cos();
        if c == 0.0 {
            return 0.0;
        }
        c.signum() * (self.log_mag + c.abs().ln()).exp()
    }

    /// Imaginary part, allowed to round to +/-inf.
    pub fn im(self) -> f64 {
        let s = self.phase.sin();
        if s == 0.0 {
            return 0.0;
        }
        s.signum() * (self.log_mag + s.abs().ln()).exp()
    }
}

/// Reduce an angle to the principal branch (-pi, pi].
pub fn wrap_angle(t: f64) -> f64 {
    if t > -PI && t <= PI {
        return t;
    }
    let r = t.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// z^m by binary exponentiation. Caller keeps m ln|z| at or below
/// `LOG_DOMAIN_THRESHOLD` so no intermediate square overflows.
pub fn pow_m(z: Complex64, m: u32) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    let mut base = z;
    let mut e = m;
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        e >>= 1;
        if e > 0 {
            base *= base;
        }
    }
    acc
}

/// Re(z^m) with the log-domain guard; total over all finite z, may return
/// +/-inf when the true value leaves binary64 range.
pub fn re_pow_m(z: Complex64, m: u32) -> f64 {
    let norm = z.norm();
    if norm == 0.0 {
        return 0.0;
    }
    let lm = m as f64 * norm.ln();
    if lm <= LOG_DOMAIN_THRESHOLD {
        pow_m(z, m).re
    } else {
        LogComplex { log_mag: norm.ln(), phase: z.arg() }.powi(m).re()
    }
}
