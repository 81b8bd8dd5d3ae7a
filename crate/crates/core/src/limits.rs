//! Tail series, limit ratios, the conjugacy to the linear model, and
//! diagnostics along escaping orbits.

use crate::dynamics::{coeff_power, eval_f, iterate, Orbit};
use crate::error::Error;
use crate::geometry::{in_s, ray_angle, SectorPair};
use crate::log_complex::re_pow_m;
use crate::params::Params;
use crate::point::ComplexPair;
use crate::sphere::SphereValue;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// Default truncation tolerance for the tail series.
pub const DEFAULT_SERIES_TOL: f64 = 1e-16;

/// Saturation level for the harmonic diagnostic.
pub const DIAGNOSTIC_CLAMP: f64 = 1e300;

/// The two convergent tails along an orbit that stays in S:
///
/// ```text
/// delta1 = sum_{j>=1} a^{-j} e^{-z_{2j-1}^m}
/// delta2 = sum_{j>=1} a^{-j} e^{-z_{2j-2}^m}
/// ```
///
/// Each term is bounded by delta^{-j}, so both tails are bounded by
/// 1/(delta - 1) < 1.
#[derive(Clone, Copy, Debug)]
pub struct DeltaSums {
    pub delta1: Complex64,
    pub delta2: Complex64,
    /// Terms summed per tail.
    pub terms: usize,
}

fn series_terms(tol: f64, p: &Params) -> Result<usize, Error> {
    if !(tol > 0.0 && tol < 1.0 && tol.is_finite()) {
        return Err(Error::Param(format!("series tolerance {tol} must lie in (0, 1)")));
    }
    let j_max = ((1.0 / tol).ln() / p.delta().ln()).ceil() as usize;
    let j_max = j_max.max(1);
    if j_max > 1_000_000 {
        return Err(Error::Param(format!(
            "series tolerance {tol} needs {j_max} terms at delta = {}",
            p.delta()
        )));
    }
    Ok(j_max)
}

fn series_with_orbit(
    pt: ComplexPair,
    p: &Params,
    tol: f64,
) -> Result<(DeltaSums, Orbit), Error> {
    let j_max = series_terms(tol, p)?;
    let steps = 2 * j_max;
    let orbit = iterate(pt, steps, p);
    for (n, q) in orbit.points().iter().enumerate() {
        if !in_s(q.z, p.m()) {
            return Err(Error::OrbitLeftS { step: n });
        }
    }
    if orbit.len() < steps + 1 {
        return Err(Error::Overflow);
    }
    let inv_a = p.a().inv();
    let mut pw = Complex64::new(1.0, 0.0);
    let mut delta1 = Complex64::new(0.0, 0.0);
    let mut delta2 = Complex64::new(0.0, 0.0);
    for j in 1..=j_max {
        pw *= inv_a;
        delta1 += pw * eval_f(orbit.points()[2 * j - 1].z, p)?.value;
        delta2 += pw * eval_f(orbit.points()[2 * j - 2].z, p)?.value;
    }
    Ok((DeltaSums { delta1, delta2, terms: j_max }, orbit))
}

/// Sum both tails at `pt` to truncation tolerance `tol`. Fails with
/// `OrbitLeftS` if a forward iterate's first coordinate leaves S within
/// the summation window, or `Overflow` if the orbit leaves binary64 range
/// before the window closes.
pub fn delta_series(pt: ComplexPair, p: &Params, tol: f64) -> Result<DeltaSums, Error> {
    Ok(series_with_orbit(pt, p, tol)?.0)
}

/// The two limit ratios at a point, with the agreement residual between
/// the series route and the orbit-ratio route.
#[derive(Clone, Copy, Debug)]
pub struct LimitEstimate {
    /// lim z_{2k} / w_{2k} = (z_0 + delta1) / (w_0 + delta2).
    pub h1: SphereValue,
    /// lim z_{2k+1} / w_{2k+1} = a (w_0 + delta2) / (z_0 + delta1).
    pub h2: SphereValue,
    pub delta1: Complex64,
    pub delta2: Complex64,
    pub terms_used: usize,
    /// Max chordal distance between the two routes, over both parities.
    pub residual: f64,
}

/// Estimate both limit ratios by two independent routes and cross-check:
/// the closed-form tails against the raw coordinate ratios deep along the
/// orbit. Routes further apart than 100 tol fail with `Disagreement`.
pub fn estimate_h(pt: ComplexPair, p: &Params, tol: f64) -> Result<LimitEstimate, Error> {
    let (sums, orbit) = series_with_orbit(pt, p, tol)?;
    let disagree = |distance: f64| Error::Disagreement { distance, allowed: 100.0 * tol };
    let num1 = pt.z + sums.delta1;
    let den1 = pt.w + sums.delta2;
    let h1 = SphereValue::ratio(num1, den1).ok_or_else(|| disagree(f64::INFINITY))?;
    let h2 = SphereValue::ratio(p.a() * den1, num1).ok_or_else(|| disagree(f64::INFINITY))?;
    let last_odd = orbit.len() - 2;
    let last_even = orbit.len() - 1;
    let even_pt = orbit.points()[last_even];
    let odd_pt = orbit.points()[last_odd];
    let r_even = SphereValue::ratio(even_pt.z, even_pt.w).ok_or_else(|| disagree(f64::INFINITY))?;
    let r_odd = SphereValue::ratio(odd_pt.z, odd_pt.w).ok_or_else(|| disagree(f64::INFINITY))?;
    let residual = h1.chordal(r_even).max(h2.chordal(r_odd));
    if residual.is_nan() || residual > 100.0 * tol {
        return Err(disagree(residual));
    }
    Ok(LimitEstimate {
        h1,
        h2,
        delta1: sums.delta1,
        delta2: sums.delta2,
        terms_used: sums.terms,
        residual,
    })
}

/// Orientation for [`linear_model`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// n-th iterate of the linear model L(z, w) = (a w, z), forward or
/// backward:
///
/// ```text
/// L^{2k}  = (a^k z, a^k w)          L^{-2k}     = (z / a^k, w / a^k)
/// L^{2k+1} = (a^{k+1} w, a^k z)     L^{-(2k+1)} = (w / a^k, z / a^{k+1})
/// ```
pub fn linear_model(
    pt: ComplexPair,
    n: u32,
    p: &Params,
    dir: Direction,
) -> Result<ComplexPair, Error> {
    let k = n / 2;
    let out = match dir {
        Direction::Forward => {
            let ak = coeff_power(p, k)?;
            if n % 2 == 0 {
                ComplexPair::new(ak * pt.z, ak * pt.w)
            } else {
                ComplexPair::new(coeff_power(p, k + 1)? * pt.w, ak * pt.z)
            }
        }
        Direction::Backward => {
            let inv = p.a().inv();
            let ik = inv.powu(k);
            if n % 2 == 0 {
                ComplexPair::new(ik * pt.z, ik * pt.w)
            } else {
                ComplexPair::new(ik * pt.w, ik * inv * pt.z)
            }
        }
    };
    if !out.is_finite() {
        return Err(Error::Overflow);
    }
    Ok(out)
}

/// The conjugating change of coordinates phi(z, w) = (z + delta1, w + delta2),
/// which satisfies phi(F(pt)) = L(phi(pt)) and moves no point by more than
/// sqrt(2) in either coordinate.
pub fn conjugacy_phi(pt: ComplexPair, p: &Params, tol: f64) -> Result<ComplexPair, Error> {
    let sums = delta_series(pt, p, tol)?;
    Ok(ComplexPair::new(pt.z + sums.delta1, pt.w + sums.delta2))
}

/// Value of the harmonic diagnostic u_n = -Re(z_n^m) / n, clamped to
/// [-1e300, 1e300].
#[derive(Clone, Copy, Debug)]
pub struct Diagnostic {
    pub value: f64,
    /// Set when the raw value left the clamp range or the orbit left
    /// binary64 range before step n (the diagnostic keeps the sign of
    /// Re(z^m) at the deepest recorded point).
    pub saturated: bool,
}

/// u_n at a point, by direct iteration. n must be positive.
pub fn harmonic_diagnostic(pt: ComplexPair, n: u32, p: &Params) -> Result<Diagnostic, Error> {
    if n == 0 {
        return Err(Error::Param("diagnostic index must be positive".into()));
    }
    let orbit = iterate(pt, n as usize, p);
    if orbit.len() <= n as usize {
        let last = orbit.points().last().copied().unwrap_or(pt);
        let sign = re_pow_m(last.z, p.m());
        let value = if sign < 0.0 { DIAGNOSTIC_CLAMP } else { -DIAGNOSTIC_CLAMP };
        return Ok(Diagnostic { value, saturated: true });
    }
    let u = -re_pow_m(orbit.points()[n as usize].z, p.m()) / n as f64;
    if u > DIAGNOSTIC_CLAMP {
        Ok(Diagnostic { value: DIAGNOSTIC_CLAMP, saturated: true })
    } else if u < -DIAGNOSTIC_CLAMP {
        Ok(Diagnostic { value: -DIAGNOSTIC_CLAMP, saturated: true })
    } else {
        Ok(Diagnostic { value: u, saturated: false })
    }
}

/// Largest pairwise chordal distance between the h1 values at the given
/// points. Points where the estimate fails are skipped; fewer than two
/// usable values give 0.
pub fn h1_spread(points: &[ComplexPair], p: &Params, tol: f64) -> f64 {
    let values: Vec<SphereValue> = points
        .iter()
        .filter_map(|&pt| estimate_h(pt, p, tol).ok().map(|e| e.h1))
        .collect();
    let mut spread: f64 = 0.0;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            spread = spread.max(values[i].chordal(values[j]));
        }
    }
    spread
}

/// Evidence that h1 is non-constant on the invariant piece over sector
/// pair `pair`: sample points there with varied coordinate ratio and
/// measure the chordal spread of h1. Fewer than two samples give 0.
pub fn rank_probe(pair: SectorPair, p: &Params, samples: usize, seed: u64) -> f64 {
    if samples < 2 {
        return 0.0;
    }
    let m = p.m();
    let m_lower = 20.0 * m as f64;
    let half = PI / (2.0 * m as f64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<ComplexPair> = (0..samples)
        .map(|_| {
            let rz = m_lower * (1.000001 + 9.0 * rng.gen::<f64>());
            let rw = m_lower * (1.000001 + 9.0 * rng.gen::<f64>());
            let az = ray_angle(pair.a % m, m) + 0.8 * half * (rng.gen::<f64>() - 0.5);
            let aw = ray_angle(pair.b % m, m) + 0.8 * half * (rng.gen::<f64>() - 0.5);
            ComplexPair::new(Complex64::from_polar(rz, az), Complex64::from_polar(rw, aw))
        })
        .collect();
    h1_spread(&points, p, 1e-12)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::apply_f;
    use crate::geometry::{sample_a, slice_index, SliceIndex};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn term_count_follows_tolerance() {
        let p = Params::new(2, 3.0).unwrap();
        assert_eq!(series_terms(1e-16, &p).unwrap(), 34);
        assert!(series_terms(1e-8, &p).unwrap() < series_terms(1e-16, &p).unwrap());
        assert!(series_terms(0.0, &p).is_err());
        assert!(series_terms(1.0, &p).is_err());
        assert!(series_terms(f64::NAN, &p).is_err());
    }

    #[test]
    fn tails_frozen_at_a_real_point() {
        // m = 2, delta = 3, start (8, 8). The j = 1 terms dominate:
        // delta1 ~ -e^{-z_1^2}/3 with z_1 = e^{-64} - 24, delta2 = -e^{-64}/3.
        // 60-digit oracle on the binary64 orbit:
        let p = Params::new(2, 3.0).unwrap();
        let sums = delta_series(ComplexPair::from_re(8.0, 8.0), &p, 1e-16).unwrap();
        let d1 = -2.3402225995015782e-251;
        let d2 = -5.346036301828792e-29;
        assert!((sums.delta1.re / d1 - 1.0).abs() <= 1e-12, "delta1 = {}", sums.delta1);
        assert!(sums.delta1.im.abs() <= d1.abs() * 1e-12);
        assert!((sums.delta2.re / d2 - 1.0).abs() <= 1e-12, "delta2 = {}", sums.delta2);
        assert!(sums.delta2.im.abs() <= d2.abs() * 1e-12);
    }

    #[test]
    fn tails_match_brute_force() {
        // Independent route: sum 200 terms directly from a long orbit.
        let p = Params::new(2, 3.0).unwrap();
        let pt = ComplexPair::new(c(2.5, 0.3), c(2.2, -0.4));
        let orbit = iterate(pt, 400, &p);
        assert_eq!(orbit.len(), 401);
        let inv = p.a().inv();
        let mut pw = Complex64::new(1.0, 0.0);
        let mut b1 = Complex64::new(0.0, 0.0);
        let mut b2 = Complex64::new(0.0, 0.0);
        for j in 1..=200usize {
            pw *= inv;
            b1 += pw * eval_f(orbit.points()[2 * j - 1].z, &p).unwrap().value;
            b2 += pw * eval_f(orbit.points()[2 * j - 2].z, &p).unwrap().value;
        }
        let sums = delta_series(pt, &p, 1e-16).unwrap();
        assert!((sums.delta1 - b1).norm() <= 1e-15);
        assert!((sums.delta2 - b2).norm() <= 1e-15);
        assert!(sums.delta1.norm() < p.big_delta());
        assert!(sums.delta2.norm() < p.big_delta());
    }

    #[test]
    fn tails_with_immediate_underflow() {
        // m = 3, start (5, 50): e^{-z^m} underflows to exact zero from
        // step 1 on, so delta1 is exactly zero and delta2 is exactly its
        // first term.
        let p = Params::new(3, 3.0).unwrap();
        let pt = ComplexPair::from_re(5.0, 50.0);
        let sums = delta_series(pt, &p, 1e-16).unwrap();
        assert_eq!(sums.delta1, c(0.0, 0.0));
        let first = p.a().inv() * eval_f(c(5.0, 0.0), &p).unwrap().value;
        assert_eq!(sums.delta2, first);
        assert!(sums.delta2.norm() > 0.0);
    }

    #[test]
    fn leaving_the_sector_union_is_reported() {
        let p = Params::new(2, 3.0).unwrap();
        let off = ComplexPair::new(c(0.0, 2.0), c(0.0, 2.0));
        assert!(matches!(
            delta_series(off, &p, 1e-12),
            Err(Error::OrbitLeftS { step: 0 })
        ));
        // First coordinate fine, the next iterate's is not: z_1 = e^{-64} - 6i.
        let late = ComplexPair::new(c(8.0, 0.0), c(0.0, 2.0));
        assert!(matches!(
            delta_series(late, &p, 1e-12),
            Err(Error::OrbitLeftS { step: 1 })
        ));
    }

    #[test]
    fn tail_recursion_identity() {
        // delta1(F pt) = a delta2(pt) - e^{-z_0^m}; delta2(F pt) = delta1(pt).
        let p = Params::new(2, 3.0).unwrap();
        let pt = ComplexPair::new(c(2.5, 0.3), c(2.2, -0.4));
        let here = delta_series(pt, &p, 1e-16).unwrap();
        let next = delta_series(apply_f(pt, &p).unwrap().point, &p, 1e-16).unwrap();
        let expect = p.a() * here.delta2 - eval_f(pt.z, &p).unwrap().value;
        assert!((next.delta1 - expect).norm() <= 1e-14 * (1.0 + expect.norm()));
        assert!((next.delta2 - here.delta1).norm() <= 1e-14);
    }

    #[test]
    fn limit_ratios_on_ray_samples() {
        let p = Params::new(2, 3.0).unwrap();
        for pt in sample_a(SectorPair::new(0, 0), 10.0, 16, 5, 2) {
            let est = estimate_h(pt, &p, 1e-12).unwrap();
            assert!(est.residual <= 1e-10);
            // Product law: h1 h2 = a.
            let h1 = est.h1.finite().unwrap();
            let h2 = est.h2.finite().unwrap();
            assert!((h1 * h2 - p.a()).norm() <= 1e-12 * p.a().norm());
            // Slice targets for the cycle through (0, 0): U_0 and U_1.
            assert_eq!(slice_index(est.h1, 2), Some(SliceIndex(0)));
            assert_eq!(slice_index(est.h2, 2), Some(SliceIndex(1)));
        }
    }

    #[test]
    fn residual_is_the_reported_cross_check() {
        // A small-scale start whose orbit stays in S: the estimate must
        // succeed, and the residual it reports must equal the chordal gap
        // between the series ratios and the deep orbit ratios.
        let p = Params::new(2, 3.0).unwrap();
        let pt = ComplexPair::from_re(0.5, 0.5);
        let est = estimate_h(pt, &p, 1e-12).unwrap();
        assert!(est.residual <= 1e-10, "residual = {}", est.residual);
        let steps = 2 * est.terms_used;
        let orbit = iterate(pt, steps, &p);
        let deep_even = orbit.points()[steps];
        let deep_odd = orbit.points()[steps - 1];
        let r_even = SphereValue::ratio(deep_even.z, deep_even.w).unwrap();
        let r_odd = SphereValue::ratio(deep_odd.z, deep_odd.w).unwrap();
        let expect = est.h1.chordal(r_even).max(est.h2.chordal(r_odd));
        assert_eq!(est.residual, expect);
    }

    #[test]
    fn linear_model_closed_forms() {
        let p = Params::new(3, 2.5).unwrap();
        let pt = ComplexPair::new(c(1.5, -0.5), c(0.25, 2.0));
        let one = linear_model(pt, 1, &p, Direction::Forward).unwrap();
        assert_eq!(one.z, p.a() * pt.w);
        assert_eq!(one.w, pt.z);
        let two = linear_model(pt, 2, &p, Direction::Forward).unwrap();
        assert_eq!(two.z, p.a() * pt.z);
        assert_eq!(two.w, p.a() * pt.w);
        // Composition: L^5 = L^2(L^3).
        let five = linear_model(pt, 5, &p, Direction::Forward).unwrap();
        let by_parts =
            linear_model(linear_model(pt, 3, &p, Direction::Forward).unwrap(), 2, &p, Direction::Forward)
                .unwrap();
        assert!(five.dist(&by_parts) <= 1e-12 * (1.0 + five.norm_max()));
        for n in 0..=7 {
            let fwd = linear_model(pt, n, &p, Direction::Forward).unwrap();
            let back = linear_model(fwd, n, &p, Direction::Backward).unwrap();
            assert!(back.dist(&pt) <= 1e-12 * (1.0 + pt.norm_max()), "n={n}");
        }
        assert!(matches!(
            linear_model(pt, 2000, &p, Direction::Forward),
            Err(Error::Overflow)
        ));
    }

    #[test]
    fn conjugacy_intertwines_the_maps() {
        let p = Params::new(2, 3.0).unwrap();
        for pt in [
            ComplexPair::new(c(2.5, 0.3), c(2.2, -0.4)),
            ComplexPair::new(c(3.0, -0.2), c(-0.5, 0.1)),
            ComplexPair::from_re(8.0, 8.0),
        ] {
            let lhs = conjugacy_phi(apply_f(pt, &p).unwrap().point, &p, 1e-16).unwrap();
            let rhs = linear_model(conjugacy_phi(pt, &p, 1e-16).unwrap(), 1, &p, Direction::Forward)
                .unwrap();
            assert!(
                lhs.dist(&rhs) <= 1e-10 * (1.0 + rhs.norm_max()),
                "pt={pt} lhs={lhs} rhs={rhs}"
            );
            // The change of coordinates moves points by less than sqrt(2)
            // per coordinate (each tail is below 1/(delta-1) < 1).
            let phi = conjugacy_phi(pt, &p, 1e-16).unwrap();
            assert!(phi.dist(&pt) < std::f64::consts::SQRT_2);
        }
    }

    #[test]
    fn diagnostic_values() {
        let p = Params::new(2, 3.0).unwrap();
        // z_1 = 1 from the origin, so u_1 = -1 exactly, for any m.
        let d = harmonic_diagnostic(ComplexPair::from_re(0.0, 0.0), 1, &p).unwrap();
        assert_eq!(d.value, -1.0);
        assert!(!d.saturated);
        assert!(harmonic_diagnostic(ComplexPair::from_re(0.0, 0.0), 0, &p).is_err());
        // Deep starts saturate negative once Re(z_n^m) passes the clamp.
        let d = harmonic_diagnostic(ComplexPair::from_re(1e200, 1e200), 3, &p).unwrap();
        assert_eq!(d.value, -DIAGNOSTIC_CLAMP);
        assert!(d.saturated);
        // Orbit truncation before n keeps the sign of the deepest point.
        let d = harmonic_diagnostic(ComplexPair::from_re(1e299, 1e299), 5, &p).unwrap();
        assert_eq!(d.value, -DIAGNOSTIC_CLAMP);
        assert!(d.saturated);
    }

    #[test]
    fn diagnostic_tracks_orbit_growth() {
        // Along an escaping orbit u_n falls below -1 and diverges. The full
        // sequence is not monotone (|z_n| stalls every other step when the
        // start has equal coordinates), so compare within each parity class.
        let p = Params::new(2, 3.0).unwrap();
        let pt = ComplexPair::from_re(10.0, 10.0);
        let u: Vec<f64> = (1..=12u32)
            .map(|n| harmonic_diagnostic(pt, n, &p).unwrap().value)
            .collect();
        assert!(u.iter().all(|&v| v < -1.0));
        for i in 0..u.len() - 2 {
            assert!(u[i + 2] < u[i], "n={}", i + 1);
        }
        // The stall is real: u_2 sits above u_1.
        assert!(u[1] > u[0]);
    }

    #[test]
    fn spread_detects_variation_and_degeneracy() {
        let p = Params::new(3, 3.0).unwrap();
        let spread = rank_probe(SectorPair::new(0, 0), &p, 16, 11);
        assert!(spread > 0.1, "spread = {spread}");
        assert_eq!(rank_probe(SectorPair::new(0, 0), &p, 1, 11), 0.0);
        // Proportional points share h1 bit for bit: their tails underflow
        // to exact zero and (2t)/(2s) rounds like t/s.
        let pts = [ComplexPair::from_re(60.0, 50.0), ComplexPair::from_re(120.0, 100.0)];
        assert_eq!(h1_spread(&pts, &p, 1e-12), 0.0);
    }
}
