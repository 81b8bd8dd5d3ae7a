//! The map F(z, w) = (e^{-z^m} + a w, z): evaluation, orbits, closed form.

use crate::error::Error;
use crate::log_complex::{pow_m, LogComplex, LOG_DOMAIN_THRESHOLD};
use crate::params::Params;
use crate::point::ComplexPair;
use num_complex::Complex64;
use std::fmt;

/// Re(z^m) above which e^{-z^m} is returned as exactly 0 (the true value is
/// below the smallest positive subnormal) with the underflow flag set.
pub const F_UNDERFLOW_RE: f64 = 745.0;

/// Re(z^m) below which |e^{-z^m}| overflows binary64.
pub const F_OVERFLOW_RE: f64 = -709.0;

/// Orbit coordinates past this magnitude truncate iteration.
pub const COORD_GUARD: f64 = 1e300;

/// Result of one f evaluation. `underflowed` marks the exact-zero return;
/// it is benign wherever f enters additively.
#[derive(Clone, Copy, Debug)]
pub struct FEval {
    pub value: Complex64,
    pub underflowed: bool,
}

/// e^{-z^m}, with z^m evaluated by repeated squaring while m ln|z| stays at
/// or below the log-domain threshold and through [`LogComplex`] above it.
pub fn eval_f(z: Complex64, p: &Params) -> Result<FEval, Error> {
    if !z.is_finite() {
        return Err(Error::Overflow);
    }
    let m = p.m();
    let norm = z.norm();
    if norm == 0.0 || (m as f64) * norm.ln() <= LOG_DOMAIN_THRESHOLD {
        let zm = pow_m(z, m);
        return f_from_power(zm.re, zm.im);
    }
    let zm = LogComplex { log_mag: norm.ln(), phase: z.arg() }.powi(m);
    let re = zm.re();
    if re > F_UNDERFLOW_RE {
        return Ok(FEval { value: Complex64::new(0.0, 0.0), underflowed: true });
    }
    if re < F_OVERFLOW_RE {
        return Err(Error::Overflow);
    }
    // |z^m| >= e^700 yet Re(z^m) within thresholds: the phase of z^m sits
    // within ~1e-300 of +/-pi/2. |f| is still exact; the oscillatory factor
    // uses the reduced imaginary part and is best-effort.
    let im = zm.im();
    f_from_power(re, if im.is_finite() { im } else { 0.0 })
}

fn f_from_power(re: f64, im: f64) -> Result<FEval, Error> {
    if re > F_UNDERFLOW_RE {
        Ok(FEval { value: Complex64::new(0.0, 0.0), underflowed: true })
    } else if re < F_OVERFLOW_RE {
        Err(Error::Overflow)
    } else {
        Ok(FEval { value: (-Complex64::new(re, im)).exp(), underflowed: false })
    }
}

/// One application of F together with the underflow flag of its f term.
#[derive(Clone, Copy, Debug)]
pub struct MapStep {
    pub point: ComplexPair,
    pub f_underflowed: bool,
}

/// F(z, w) = (e^{-z^m} + a w, z).
pub fn apply_f(pt: ComplexPair, p: &Params) -> Result<MapStep, Error> {
    let fe = eval_f(pt.z, p)?;
    let z1 = fe.value + p.a() * pt.w;
    if !z1.is_finite() {
        return Err(Error::Overflow);
    }
    Ok(MapStep { point: ComplexPair::new(z1, pt.z), f_underflowed: fe.underflowed })
}

/// F^{-1}(z, w) = (w, (z - e^{-w^m}) / a).
pub fn apply_f_inverse(pt: ComplexPair, p: &Params) -> Result<ComplexPair, Error> {
    let fe = eval_f(pt.w, p)?;
    let w0 = (pt.z - fe.value) / p.a();
    if !w0.is_finite() {
        return Err(Error::Overflow);
    }
    Ok(ComplexPair::new(pt.w, w0))
}

/// Status of the step from orbit point n to point n + 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepFlag {
    Ok,
    /// e^{-z^m} underflowed to exactly 0; the step is still valid.
    FUnderflow,
    /// The next point left the coordinate guard (or binary64 entirely);
    /// iteration stops and the offending point is not recorded.
    CoordinateOverflow,
}

impl fmt::Display for StepFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepFlag::Ok => write!(f, "ok"),
            StepFlag::FUnderflow => write!(f, "f-underflowed-to-zero"),
            StepFlag::CoordinateOverflow => write!(f, "coordinate-overflow"),
        }
    }
}

/// A finite orbit prefix. `flags()[n]` describes the transition from
/// `points()[n]`; when the last flag is `CoordinateOverflow` the orbit was
/// truncated and has one flag per recorded point, otherwise one fewer.
#[derive(Clone, Debug)]
pub struct Orbit {
    points: Vec<ComplexPair>,
    flags: Vec<StepFlag>,
    params: Params,
}

impl Orbit {
    /// Number of recorded points (iterates 0 ..= len - 1).
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, n: usize) -> Option<ComplexPair> {
        self.points.get(n).copied()
    }

    pub fn points(&self) -> &[ComplexPair] {
        &self.points
    }

    pub fn flags(&self) -> &[StepFlag] {
        &self.flags
    }

    pub fn flag(&self, n: usize) -> Option<StepFlag> {
        self.flags.get(n).copied()
    }

    /// True when iteration stopped at the coordinate guard.
    pub fn truncated(&self) -> bool {
        self.flags.last() == Some(&StepFlag::CoordinateOverflow)
    }

    pub fn params(&self) -> &Params {
        &self.params
    }
}

/// Iterate F up to `n_max` times. Never fails: overflow truncates the orbit
/// with a `CoordinateOverflow` flag instead.
pub fn iterate(pt: ComplexPair, n_max: usize, p: &Params) -> Orbit {
    let mut points = Vec::with_capacity(n_max + 1);
    let mut flags = Vec::with_capacity(n_max);
    points.push(pt);
    let mut cur = pt;
    for _ in 0..n_max {
        if !cur.is_finite() {
            flags.push(StepFlag::CoordinateOverflow);
            break;
        }
        match apply_f(cur, p) {
            Err(_) => {
                flags.push(StepFlag::CoordinateOverflow);
                break;
            }
            Ok(step) => {
                if step.point.norm_max() > COORD_GUARD {
                    flags.push(StepFlag::CoordinateOverflow);
                    break;
                }
                flags.push(if step.f_underflowed { StepFlag::FUnderflow } else { StepFlag::Ok });
                points.push(step.point);
                cur = step.point;
            }
        }
    }
    Orbit { points, flags, params: *p }
}

/// a^k with an overflow guard on |a|^k = delta^k.
pub(crate) fn coeff_power(p: &Params, k: u32) -> Result<Complex64, Error> {
    if k as f64 * p.delta().ln() > 709.0 {
        return Err(Error::Overflow);
    }
    Ok(p.a().powu(k))
}

/// F^n(pt) through the closed-form iterate:
///
/// ```text
/// F^{2k}(z0, w0)   = (a^k z0 + a^k S1(k),  a^k w0 + a^k S2(k))
/// F^{2k+1}(z0, w0) = (a^{k+1} w0 + a^{k+1} S2(k+1),  a^k z0 + a^k S1(k))
/// S1(k) = sum_{j=1..k} a^{-j} f(z_{2j-1}),  S2(k) = sum_{j=1..k} a^{-j} f(z_{2j-2})
/// ```
///
/// Agrees with [`iterate`] to rounding; fails with `Overflow` when the
/// prefix orbit truncates or a^k leaves binary64 range.
pub fn closed_form_iterate(pt: ComplexPair, n: usize, p: &Params) -> Result<ComplexPair, Error> {
    if n == 0 {
        return Ok(pt);
    }
    let k = n / 2;
    let even = n % 2 == 0;
    // Highest z index needed by the sums.
    let needed = if even { 2 * k - 1 } else { 2 * k };
    let orbit = iterate(pt, needed, p);
    if orbit.len() < needed + 1 {
        return Err(Error::Overflow);
    }
    let inv_a = p.a().inv();
    let mut s1 = Complex64::new(0.0, 0.0);
    let mut s2 = Complex64::new(0.0, 0.0);
    let mut s2_extra = Complex64::new(0.0, 0.0);
    let mut pw = Complex64::new(1.0, 0.0);
    for j in 1..=k {
        pw *= inv_a;
        s1 += pw * eval_f(orbit.points()[2 * j - 1].z, p)?.value;
        s2 += pw * eval_f(orbit.points()[2 * j - 2].z, p)?.value;
    }
    if !even {
        // S2(k+1) extends S2(k) by the j = k + 1 term.
        s2_extra = pw * inv_a * eval_f(orbit.points()[2 * k].z, p)?.value;
    }
    let ak = coeff_power(p, k as u32)?;
    let out = if even {
        ComplexPair::new(ak * (pt.z + s1), ak * (pt.w + s2))
    } else {
        let ak1 = coeff_power(p, k as u32 + 1)?;
        ComplexPair::new(ak1 * (pt.w + s2 + s2_extra), ak * (pt.z + s1))
    };
    if !out.is_finite() {
        return Err(Error::Overflow);
    }
    Ok(out)
}
