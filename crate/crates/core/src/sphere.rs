//! Values on the Riemann sphere and the chordal metric.

use num_complex::Complex64;
use std::fmt;

/// Magnitude above which chordal distances are computed through the
/// inversion z -> 1/z (an isometry of the chordal metric) to avoid
/// overflowing |z|^2.
const INVERSION_THRESHOLD: f64 = 1e100;

/// A point of the Riemann sphere: a finite complex number or infinity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SphereValue {
    Finite(Complex64),
    Infinity,
}

impl SphereValue {
    /// The ratio z / w as a sphere point. None when the ratio is 0/0 or
    /// otherwise carries no information (NaN operands).
    pub fn ratio(z: Complex64, w: Complex64) -> Option<Self> {
        if !z.is_finite() || !w.is_finite() {
            return None;
        }
        let zero = Complex64::new(0.0, 0.0);
        if w == zero {
            return if z == zero { None } else { Some(SphereValue::Infinity) };
        }
        let q = z / w;
        if q.is_finite() {
            Some(SphereValue::Finite(q))
        } else {
            // |z| huge against |w| tiny: the quotient left binary64 range.
            Some(SphereValue::Infinity)
        }
    }

    pub fn finite(self) -> Option<Complex64> {
        match self {
            SphereValue::Finite(v) => Some(v),
            SphereValue::Infinity => None,
        }
    }

    pub fn is_zero(self) -> bool {
        matches!(self, SphereValue::Finite(v) if v == Complex64::new(0.0, 0.0))
    }

    /// 1/z on the sphere (0 <-> infinity).
    pub fn invert(self) -> Self {
        match self {
            SphereValue::Infinity => SphereValue::Finite(Complex64::new(0.0, 0.0)),
            SphereValue::Finite(v) => {
                if v == Complex64::new(0.0, 0.0) {
                    SphereValue::Infinity
                } else {
                    let inv = v.inv();
                    if inv.is_finite() {
                        SphereValue::Finite(inv)
                    } else {
                        SphereValue::Infinity
                    }
                }
            }
        }
    }

    /// Principal argument of a finite nonzero value.
    pub fn arg(self) -> Option<f64> {
        match self {
            SphereValue::Finite(v) if v != Complex64::new(0.0, 0.0) => Some(v.arg()),
            _ => None,
        }
    }

    /// Chordal (Riemann-sphere) distance; symmetric, at most 2, zero iff
    /// the two points coincide.
    pub fn chordal(self, other: SphereValue) -> f64 {
        use SphereValue::*;
        match (self, other) {
            (Infinity, Infinity) => 0.0,
            (Finite(z), Infinity) | (Infinity, Finite(z)) => {
                let n = z.norm();
                if n > 1.0 {
                    // Factored so |z| beyond the square-root of f64::MAX
                    // still gives a nonzero distance.
                    2.0 / (n * (1.0 + 1.0 / (n * n)).sqrt())
                } else {
                    2.0 / (1.0 + n * n).sqrt()
                }
            }
            (Finite(z), Finite(w)) => {
                let (nz, nw) = (z.norm(), w.norm());
                if nz > INVERSION_THRESHOLD && nw > INVERSION_THRESHOLD {
                    // z -> 1/z is a chordal isometry; both images are small.
                    return self.invert().chordal(other.invert());
                }
                if nw > INVERSION_THRESHOLD {
                    return other.chordal(self);
                }
                let scaled = if nz > INVERSION_THRESHOLD {
                    // Factor |z| out of both sides; |w| <= the threshold, so
                    // neither the difference nor 1 + |w|^2 can overflow.
                    (z - w).norm() / nz / ((1.0 + 1.0 / (nz * nz)).sqrt() * (1.0 + nw * nw).sqrt())
                } else {
                    (z - w).norm() / ((1.0 + nz * nz).sqrt() * (1.0 + nw * nw).sqrt())
                };
                // Clamped: rounding near antipodal pairs can land a few
                // ulps above the true supremum 2.
                (2.0 * scaled).min(2.0)
            }
        }
    }

    /// Chordal closeness test; `tol` defaults to 1e-9 via [`APPROX_TOL`].
    pub fn approx_eq(self, other: SphereValue, tol: f64) -> bool {
        self.chordal(other) <= tol
    }
}

/// Default chordal equality tolerance.
pub const APPROX_TOL: f64 = 1e-9;

impl From<Complex64> for SphereValue {
    fn from(v: Complex64) -> Self {
        if v.is_finite() {
            SphereValue::Finite(v)
        } else {
            SphereValue::Infinity
        }
    }
}

impl fmt::Display for SphereValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SphereValue::Finite(v) => write!(f, "{v}"),
            SphereValue::Infinity => write!(f, "inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fin(re: f64, im: f64) -> SphereValue {
        SphereValue::Finite(Complex64::new(re, im))
    }

    #[test]
    fn zero_to_infinity_is_diameter() {
        assert_eq!(fin(0.0, 0.0).chordal(SphereValue::Infinity), 2.0);
    }

    #[test]
    fn symmetric_and_bounded() {
        let pts = [
            fin(0.0, 0.0),
            fin(1.0, -2.0),
            fin(1e-200, 0.0),
            fin(3e200, 1e150),
            SphereValue::Infinity,
        ];
        for &x in &pts {
            for &y in &pts {
                let d = x.chordal(y);
                assert!(d.is_finite() && (0.0..=2.0 + 1e-15).contains(&d));
                assert_eq!(d, y.chordal(x));
                if x == y {
                    assert_eq!(d, 0.0);
                }
            }
        }
    }

    #[test]
    fn huge_values_sit_near_infinity() {
        let d = fin(1e200, 0.0).chordal(SphereValue::Infinity);
        assert!(d > 0.0 && d < 1e-150);
        // Inversion isometry on representable values.
        let x = fin(3.0, 4.0);
        let y = fin(-0.25, 1.5);
        let d0 = x.chordal(y);
        let d1 = x.invert().chordal(y.invert());
        assert!((d0 - d1).abs() <= 1e-12 * d0);
    }

    #[test]
    fn mixed_magnitudes_terminate() {
        // One huge and one tiny operand used to re-invert forever.
        let d = fin(1e300, 0.0).chordal(fin(1e-300, 0.0));
        assert!((d - 2.0).abs() < 1e-12, "near-antipodal pair: d = {d}");
        let d = fin(1e300, 0.0).chordal(fin(0.0, 0.0));
        assert!((d - 2.0).abs() < 1e-12);
        assert_eq!(
            fin(1e150, 2.0).chordal(fin(-3.0, 4.0)).to_bits(),
            fin(-3.0, 4.0).chordal(fin(1e150, 2.0)).to_bits(),
        );
    }

    #[test]
    fn ratio_edge_cases() {
        let zero = Complex64::new(0.0, 0.0);
        assert_eq!(SphereValue::ratio(zero, zero), None);
        assert_eq!(SphereValue::ratio(Complex64::new(1.0, 0.0), zero), Some(SphereValue::Infinity));
        assert_eq!(
            SphereValue::ratio(Complex64::new(6.0, 0.0), Complex64::new(3.0, 0.0)),
            Some(fin(2.0, 0.0))
        );
        assert_eq!(SphereValue::ratio(Complex64::new(f64::NAN, 0.0), zero), None);
    }

    #[test]
    fn antipodal_reach() {
        // d(z, -1/conj(z)) = 2 for any finite nonzero z (antipodal points).
        let z = Complex64::new(0.7, -1.3);
        let anti = -z.conj().inv();
        let d = SphereValue::Finite(z).chordal(SphereValue::Finite(anti));
        assert!((d - 2.0).abs() < 1e-12);
    }
}
