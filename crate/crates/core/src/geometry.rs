//! Sectors, invariant wedge pairs, absorbing regions, and direction slices.

use crate::error::Error;
use crate::log_complex::re_pow_m;
use crate::params::Params;
use crate::point::ComplexPair;
use crate::sphere::SphereValue;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{PI, TAU};
use std::fmt;

/// e^{-2 pi i k / m}: rotates sector k onto the positive real axis.
pub fn rotor(k: u32, m: u32) -> Complex64 {
    Complex64::from_polar(1.0, -TAU * k as f64 / m as f64)
}

/// Central ray angle of sector k.
pub fn ray_angle(k: u32, m: u32) -> f64 {
    TAU * k as f64 / m as f64
}

/// Index of the open sector S_k = { |Im(z e^{-2 pi i k/m})| < tan(pi/2m) Re(z e^{-2 pi i k/m}) }
/// containing z, if any. Consecutive sectors are separated by gaps of
/// angular width pi/m, so at most one index matches.
pub fn sector_index(z: Complex64, m: u32) -> Option<u32> {
    if !z.is_finite() || z.norm_sqr() == 0.0 {
        return None;
    }
    let k = (z.arg() * m as f64 / TAU).round() as i64;
    let rotated = z * Complex64::from_polar(1.0, -TAU * k as f64 / m as f64);
    let half_tan = (PI / (2.0 * m as f64)).tan();
    if rotated.im.abs() < half_tan * rotated.re {
        Some(k.rem_euclid(m as i64) as u32)
    } else {
        None
    }
}

/// Membership in the sector union S = { Re(z^m) > 0 }.
pub fn in_s(z: Complex64, m: u32) -> bool {
    re_pow_m(z, m) > 0.0
}

/// An ordered pair of sector indices: z in S_a, w in S_b.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SectorPair {
    pub a: u32,
    pub b: u32,
}

impl SectorPair {
    pub fn new(a: u32, b: u32) -> Self {
        SectorPair { a, b }
    }
}

impl fmt::Display for SectorPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.a < 10 && self.b < 10 {
            write!(f, "{}{}", self.a, self.b)
        } else {
            write!(f, "{},{}", self.a, self.b)
        }
    }
}

/// Sector labels of both coordinates, if each lies in some sector.
pub fn sector_pair(pt: &ComplexPair, m: u32) -> Option<SectorPair> {
    Some(SectorPair::new(sector_index(pt.z, m)?, sector_index(pt.w, m)?))
}

fn cone_member(v: Complex64, k: u32, sigma: f64, r: f64, m: u32) -> bool {
    if !v.is_finite() {
        return false;
    }
    let rotated = v * rotor(k, m);
    rotated.re >= r && rotated.im.abs() <= sigma * rotated.re
}

/// Membership in the closed wedge pair W over sectors `pair`: each
/// coordinate sits in the closed cone of slope `sigma` around its central
/// ray, with rotated real part at least `r_first` (z) / `r_second` (w).
pub fn in_w(
    pt: &ComplexPair,
    pair: SectorPair,
    sigma: f64,
    r_first: f64,
    r_second: f64,
    p: &Params,
) -> Result<bool, Error> {
    let half_tan = p.sector_half_tan();
    if !(sigma > 0.0 && sigma < half_tan) {
        return Err(Error::Param(format!(
            "wedge slope {sigma} must lie in (0, {half_tan})"
        )));
    }
    if !(r_first > 0.0 && r_first.is_finite() && r_second > 0.0 && r_second.is_finite()) {
        return Err(Error::Param(format!(
            "wedge radii ({r_first}, {r_second}) must be positive and finite"
        )));
    }
    if pair.a >= p.m() || pair.b >= p.m() {
        return Err(Error::Param(format!(
            "sector pair {pair} out of range for m = {}",
            p.m()
        )));
    }
    Ok(in_w_unchecked(pt, pair, sigma, r_first, r_second, p.m()))
}

/// [`in_w`] without parameter validation.
pub fn in_w_unchecked(
    pt: &ComplexPair,
    pair: SectorPair,
    sigma: f64,
    r_first: f64,
    r_second: f64,
    m: u32,
) -> bool {
    cone_member(pt.z, pair.a, sigma, r_first, m) && cone_member(pt.w, pair.b, sigma, r_second, m)
}

/// Sector pair of the n-th wedge in the forward schedule started at (0, b):
/// even n = 2j gives (j, b + j), odd n = 2j + 1 gives (b + j + 1, j), mod m.
pub fn mu_schedule(n: u32, b: u32, m: u32) -> SectorPair {
    let j = n / 2;
    if n % 2 == 0 {
        SectorPair::new(j % m, (b + j) % m)
    } else {
        SectorPair::new((b + j + 1) % m, j % m)
    }
}

/// The widening-slope, growing-radius wedge schedule W_n. Defaults choose
/// the base radius so that F(W_n) lands in W_{n+1} for every n.
#[derive(Clone, Copy, Debug)]
pub struct WSchedule {
    m: u32,
    delta: f64,
    r0: f64,
}

impl WSchedule {
    pub fn new(p: &Params) -> Self {
        WSchedule { m: p.m(), delta: p.delta(), r0: default_r0(p) }
    }

    /// Override the base radius (must be positive and finite).
    pub fn with_r0(p: &Params, r0: f64) -> Result<Self, Error> {
        if !(r0 > 0.0 && r0.is_finite()) {
            return Err(Error::Param(format!("base radius {r0} must be positive and finite")));
        }
        Ok(WSchedule { m: p.m(), delta: p.delta(), r0 })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    /// Slope of the n-th wedge: ((n+1)/(n+2)) tan(pi/2m), increasing
    /// toward the full sector slope.
    pub fn sigma(&self, n: u32) -> f64 {
        let nf = n as f64;
        (nf + 1.0) / (nf + 2.0) * (PI / (2.0 * self.m as f64)).tan()
    }

    /// Radius of the n-th wedge: (delta/2)^{n/2} R_0.
    pub fn radius(&self, n: u32) -> f64 {
        (self.delta * 0.5).sqrt().powi(n as i32) * self.r0
    }

    /// (first-coordinate radius, second-coordinate radius) for wedge n:
    /// (R_n, R_{n-1}), with both R_0 at n = 0.
    pub fn radius_pair(&self, n: u32) -> (f64, f64) {
        (self.radius(n), self.radius(n.saturating_sub(1)))
    }
}

/// Smallest viable base radius, times a 10% safety factor. Wedge-to-wedge
/// invariance under F needs R_{n-1} > 2 / (delta (sigma_{n+1} - sigma_n))
/// for every n >= 0 (with R_{-1} = R_0), i.e.
///
/// ```text
/// R_0 >= (2/delta)^{(n+1)/2} (n+2)(n+3) / tan(pi/2m)
/// ```
///
/// The right side is log-concave in n, so the supremum sits at the unique
/// interior critical point; a short integer scan around it is exact.
pub fn default_r0(p: &Params) -> f64 {
    let rho = 2.0 / p.delta();
    let t = -rho.ln() / 2.0;
    let g = |n: f64| rho.powf((n + 1.0) / 2.0) * (n + 2.0) * (n + 3.0);
    // Critical point of ln g: t n^2 + (5t - 2) n + (6t - 5) = 0.
    let n_crit = ((2.0 - 5.0 * t) + (t * t + 4.0).sqrt()) / (2.0 * t);
    let lo = (n_crit - 4.0).floor().max(0.0) as u64;
    let mut sup: f64 = 0.0;
    for n in lo..=lo + 8 {
        sup = sup.max(g(n as f64));
    }
    sup = sup.max(g(0.0));
    1.1 * (sup / p.sector_half_tan()).max(2.0)
}

/// Membership in the n-th wedge of the schedule started at sector pair (0, b).
pub fn in_w_n(pt: &ComplexPair, n: u32, b: u32, sched: &WSchedule) -> bool {
    let pair = mu_schedule(n, b, sched.m);
    let (r1, r2) = sched.radius_pair(n);
    in_w_unchecked(pt, pair, sched.sigma(n), r1, r2, sched.m)
}

/// Membership in the absorbing region I(C) = { Re(z^m) > C^m } for one
/// coordinate. Expects C >= 1.
pub fn in_i(z: Complex64, m: u32, c_abs: f64) -> bool {
    re_pow_m(z, m) > c_abs.powi(m as i32)
}

/// Both coordinates in I(C).
pub fn in_i_pair(pt: &ComplexPair, m: u32, c_abs: f64) -> bool {
    in_i(pt.z, m, c_abs) && in_i(pt.w, m, c_abs)
}

/// First iterate index n <= n_max at which both coordinates lie in I(C),
/// or None if that never happens along the recorded orbit.
pub fn absorbed_horizon(
    pt: ComplexPair,
    p: &Params,
    c_abs: f64,
    n_max: usize,
) -> Option<usize> {
    let orbit = crate::dynamics::iterate(pt, n_max, p);
    orbit
        .points()
        .iter()
        .position(|q| in_i_pair(q, p.m(), c_abs))
}

/// Deterministic samples on the central rays of sector pair `pair`, with
/// independent radii in (M, 10M]. Every sample lies in A_pair(M).
pub fn sample_a(pair: SectorPair, m_lower: f64, count: usize, seed: u64, m: u32) -> Vec<ComplexPair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let theta_z = ray_angle(pair.a % m, m);
    let theta_w = ray_angle(pair.b % m, m);
    (0..count)
        .map(|_| {
            let rz = m_lower * (1.000001 + 9.0 * rng.gen::<f64>());
            let rw = m_lower * (1.000001 + 9.0 * rng.gen::<f64>());
            ComplexPair::new(
                Complex64::from_polar(rz, theta_z),
                Complex64::from_polar(rw, theta_w),
            )
        })
        .collect()
}

/// Deterministic samples strictly inside the n-th wedge of the schedule
/// started at (0, b): rotated real parts in (1.01 R, 10.09 R), rotated
/// slopes within 99% of sigma(n).
pub fn sample_w_n(n: u32, b: u32, sched: &WSchedule, count: usize, seed: u64) -> Vec<ComplexPair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pair = mu_schedule(n, b, sched.m);
    let (r1, r2) = sched.radius_pair(n);
    let sigma = sched.sigma(n);
    let coord = |k: u32, r: f64, rng: &mut ChaCha8Rng| {
        let re = r * (1.01 + 9.0 * rng.gen::<f64>());
        let im = sigma * re * (-0.99 + 1.98 * rng.gen::<f64>());
        Complex64::new(re, im) * Complex64::from_polar(1.0, ray_angle(k, sched.m))
    };
    (0..count)
        .map(|_| {
            let z = coord(pair.a, r1, &mut rng);
            let w = coord(pair.b, r2, &mut rng);
            ComplexPair::new(z, w)
        })
        .collect()
}

/// Index of one of the m open direction slices U_j, arcs of width 2 pi / m
/// centered at angles 2 pi j / m.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SliceIndex(pub u32);

impl fmt::Display for SliceIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "U_{}", self.0)
    }
}

/// Slice containing the angle theta, if theta lies strictly inside one.
pub fn slice_index_angle(theta: f64, m: u32) -> Option<SliceIndex> {
    if !theta.is_finite() {
        return None;
    }
    let k = (theta * m as f64 / TAU).round();
    let diff = theta - TAU * k / m as f64;
    if diff.abs() < PI / m as f64 {
        Some(SliceIndex((k as i64).rem_euclid(m as i64) as u32))
    } else {
        None
    }
}

/// Slice containing the direction of a sphere value. Zero and infinity
/// carry no direction.
pub fn slice_index(v: SphereValue, m: u32) -> Option<SliceIndex> {
    slice_index_angle(v.arg()?, m)
}

/// Re(v e^{-2 pi i k / m}): the growth coordinate along sector k.
pub fn rotated_real_part(v: Complex64, k: u32, m: u32) -> f64 {
    (v * rotor(k, m)).re
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn sector_examples() {
        assert_eq!(sector_index(Complex64::from_polar(1.0, TAU * 3.0 / 7.0), 7), Some(3));
        // i sits in the gap between the two sectors of m = 2.
        assert_eq!(sector_index(c(0.0, 1.0), 2), None);
        assert_eq!(sector_index(c(1.0, 0.1), 2), Some(0));
        assert_eq!(sector_index(c(-5.0, 0.2), 2), Some(1));
        assert_eq!(sector_index(c(0.0, 0.0), 3), None);
        assert_eq!(sector_index(c(f64::NAN, 0.0), 3), None);
    }

    #[test]
    fn sector_boundary_margins() {
        // Angles just inside / outside the half-opening pi/2m resolve
        // correctly: the 1e-12 margin dwarfs rotation rounding.
        for m in [2u32, 3, 5, 8] {
            let half = PI / (2.0 * m as f64);
            for k in 0..m {
                let base = ray_angle(k, m);
                let inside = Complex64::from_polar(3.0, base + half * (1.0 - 1e-12));
                let outside = Complex64::from_polar(3.0, base + half * (1.0 + 1e-12));
                assert_eq!(sector_index(inside, m), Some(k), "m={m} k={k}");
                assert_eq!(sector_index(outside, m), None, "m={m} k={k}");
            }
        }
    }

    #[test]
    fn union_membership_matches_sector_search() {
        for m in [2u32, 5, 9] {
            for i in 0..720 {
                let theta = TAU * i as f64 / 720.0 + 1e-4;
                for r in [1.0, 7.5, 1e200] {
                    let z = Complex64::from_polar(r, theta);
                    // Skip angles within 1e-3 of a sector boundary where the
                    // two formulas may round differently.
                    let frac = (theta * m as f64 / TAU).round() - theta * m as f64 / TAU;
                    let dist_to_edge = (0.25 - frac.abs()).abs() * TAU / m as f64;
                    if dist_to_edge < 1e-3 {
                        continue;
                    }
                    assert_eq!(in_s(z, m), sector_index(z, m).is_some(), "m={m} z={z}");
                }
            }
        }
    }

    #[test]
    fn sector_rotation_equivariance() {
        let m = 7u32;
        let step = Complex64::from_polar(1.0, TAU / m as f64);
        for i in 0..100 {
            let theta = 0.9 * (PI / (2.0 * m as f64)) * ((i as f64 / 50.0) - 1.0);
            let z = Complex64::from_polar(2.0, theta);
            let base = sector_index(z, m).unwrap();
            assert_eq!(sector_index(z * step, m), Some((base + 1) % m));
        }
    }

    #[test]
    fn pair_display() {
        assert_eq!(SectorPair::new(0, 3).to_string(), "03");
        assert_eq!(SectorPair::new(11, 2).to_string(), "11,2");
    }

    #[test]
    fn wedge_validation() {
        let p = Params::new(5, 3.0).unwrap();
        let pt = ComplexPair::from_re(10.0, 10.0);
        let tanc = p.sector_half_tan();
        assert!(in_w(&pt, SectorPair::new(0, 0), tanc * 0.5, 1.0, 1.0, &p).is_ok());
        assert!(in_w(&pt, SectorPair::new(0, 0), tanc, 1.0, 1.0, &p).is_err());
        assert!(in_w(&pt, SectorPair::new(0, 0), -0.1, 1.0, 1.0, &p).is_err());
        assert!(in_w(&pt, SectorPair::new(0, 0), tanc * 0.5, 0.0, 1.0, &p).is_err());
        assert!(in_w(&pt, SectorPair::new(5, 0), tanc * 0.5, 1.0, 1.0, &p).is_err());
    }

    #[test]
    fn wedge_membership_cases() {
        let p = Params::new(2, 3.0).unwrap();
        let sigma = 0.3;
        // Sector pair (1, 0): z near the negative real axis.
        let pair = SectorPair::new(1, 0);
        let inside = ComplexPair::new(c(-5.0, 0.5), c(4.0, -0.9));
        assert!(in_w(&inside, pair, sigma, 2.0, 2.0, &p).unwrap());
        // Rotated real part below the radius bound.
        let shallow = ComplexPair::new(c(-1.5, 0.1), c(4.0, 0.0));
        assert!(!in_w(&shallow, pair, sigma, 2.0, 2.0, &p).unwrap());
        // Slope outside sigma.
        let steep = ComplexPair::new(c(-5.0, 2.0), c(4.0, 0.0));
        assert!(!in_w(&steep, pair, sigma, 2.0, 2.0, &p).unwrap());
        // Closed boundary: slope exactly sigma, checked in sector 0 where
        // the rotor is exact.
        let edge0 = ComplexPair::new(c(4.0, 4.0 * sigma), c(4.0, 0.0));
        assert!(in_w(&edge0, SectorPair::new(0, 0), sigma, 2.0, 2.0, &p).unwrap());
        assert!(in_w(&edge0, SectorPair::new(0, 0), sigma, 4.0, 2.0, &p).unwrap());
        assert!(!in_w(&edge0, SectorPair::new(0, 0), sigma, 4.0000001, 2.0, &p).unwrap());
    }

    #[test]
    fn schedule_slopes_and_radii() {
        let p = Params::new(5, 3.0).unwrap();
        let sched = WSchedule::new(&p);
        let tanc = p.sector_half_tan();
        assert!((sched.sigma(0) - 0.5 * tanc).abs() <= 1e-15);
        for n in 0..100 {
            assert!(sched.sigma(n) < sched.sigma(n + 1), "slopes increase");
            assert!(sched.sigma(n + 1) < tanc, "slopes stay below the sector slope");
            assert!(sched.radius(n) < sched.radius(n + 1), "radii increase");
        }
        assert_eq!(sched.radius(0), sched.r0());
        let r2 = sched.radius(2);
        assert!((r2 - 1.5 * sched.r0()).abs() <= 1e-12 * r2);
        assert_eq!(sched.radius_pair(0), (sched.r0(), sched.r0()));
        let (hi, lo) = sched.radius_pair(3);
        assert_eq!(hi, sched.radius(3));
        assert_eq!(lo, sched.radius(2));
    }

    #[test]
    fn base_radius_frozen_values() {
        // m = 5, delta = 3: sup over n of (2/3)^{(n+1)/2} (n+2)(n+3) is
        // 1440/81 at n = 7; divided by tan(pi/10) and scaled by 1.1 this
        // gives 60.186.
        let p = Params::new(5, 3.0).unwrap();
        let r0 = default_r0(&p);
        assert!((60.0..60.4).contains(&r0), "r0 = {r0}");
        // m = 2: tan(pi/4) = 1, same supremum.
        let p2 = Params::new(2, 3.0).unwrap();
        let r02 = default_r0(&p2);
        assert!((19.4..19.7).contains(&r02), "r0 = {r02}");
    }

    #[test]
    fn base_radius_dominates_invariance_requirement() {
        // The step condition: R_{n-1} (sigma_{n+1} - sigma_n) > 2/delta for
        // every n, with R_{-1} = R_0. This is what default_r0 must secure.
        for m in [2u32, 3, 5, 8, 12] {
            for delta in [2.2f64, 3.0, 5.0] {
                let p = Params::new(m, delta).unwrap();
                let sched = WSchedule::new(&p);
                for n in 0..200u32 {
                    let r_prev = sched.radius(n.saturating_sub(1));
                    let gap = sched.sigma(n + 1) - sched.sigma(n);
                    assert!(
                        r_prev * gap > 2.0 / delta,
                        "m={m} delta={delta} n={n}: {} <= {}",
                        r_prev * gap,
                        2.0 / delta
                    );
                }
            }
        }
    }

    #[test]
    fn schedule_pair_walk() {
        // mu(n) for (0, 2), m = 5 follows (0,2) (3,0) (1,3) (4,1) (2,4) (0,2) ...
        let expect = [(0, 2), (3, 0), (1, 3), (4, 1), (2, 4), (0, 2), (3, 0)];
        for (n, &(a, b)) in expect.iter().enumerate() {
            assert_eq!(mu_schedule(n as u32, 2, 5), SectorPair::new(a, b), "n={n}");
        }
        assert_eq!(mu_schedule(0, 3, 6), SectorPair::new(0, 3));
        assert_eq!(mu_schedule(1, 3, 6), SectorPair::new(4, 0));
    }

    #[test]
    fn absorbing_region_examples() {
        assert!(in_i(c(2.0, 0.0), 2, 1.0));
        assert!(!in_i(c(0.0, 2.0), 2, 1.0));
        assert!(in_i(c(2.0, 0.0), 2, 1.5));
        assert!(!in_i(c(1.4, 0.0), 2, 1.5));
        // Boundary is strict.
        assert!(!in_i(c(1.0, 0.0), 2, 1.0));
        // I(C) sits inside S.
        let mut hits = 0;
        for i in 0..360 {
            let z = Complex64::from_polar(2.5, TAU * i as f64 / 360.0);
            if in_i(z, 3, 1.0) {
                assert!(in_s(z, 3));
                hits += 1;
            }
        }
        assert!(hits > 0);
    }

    #[test]
    fn absorption_step_counts() {
        let p = Params::new(2, 3.0).unwrap();
        // Deep in the sector product: absorbed immediately.
        assert_eq!(absorbed_horizon(ComplexPair::from_re(10.0, 10.0), &p, 1.0, 10), Some(0));
        // From the origin the orbit needs four steps to put both
        // coordinates past C = 1.
        assert_eq!(absorbed_horizon(ComplexPair::from_re(0.0, 0.0), &p, 1.0, 50), Some(4));
        // (2i, 2i) alternates: one coordinate always has negative Re z^2.
        let osc = ComplexPair::new(c(0.0, 2.0), c(0.0, 2.0));
        assert_eq!(absorbed_horizon(osc, &p, 1.0, 20), None);
    }

    #[test]
    fn ray_samples_deterministic_and_in_place() {
        let pair = SectorPair::new(2, 4);
        let s1 = sample_a(pair, 10.0, 16, 42, 5);
        let s2 = sample_a(pair, 10.0, 16, 42, 5);
        let s3 = sample_a(pair, 10.0, 16, 43, 5);
        assert_eq!(s1.len(), 16);
        for (u, v) in s1.iter().zip(&s2) {
            assert_eq!(u.z, v.z);
            assert_eq!(u.w, v.w);
        }
        assert!(s1.iter().zip(&s3).any(|(u, v)| u.z != v.z || u.w != v.w));
        for pt in &s1 {
            assert_eq!(sector_pair(pt, 5), Some(pair));
            assert!(pt.z.norm() > 10.0 && pt.z.norm() <= 100.1);
            assert!(pt.w.norm() > 10.0 && pt.w.norm() <= 100.1);
            assert!(rotated_real_part(pt.z, 2, 5) > 10.0);
            assert!(rotated_real_part(pt.w, 4, 5) > 10.0);
        }
    }

    #[test]
    fn wedge_samples_lie_in_their_wedge() {
        let p = Params::new(5, 3.0).unwrap();
        let sched = WSchedule::new(&p);
        for b in 0..5 {
            for n in 0..6 {
                for pt in sample_w_n(n, b, &sched, 8, 7 + n as u64) {
                    assert!(in_w_n(&pt, n, b, &sched), "n={n} b={b} pt={pt}");
                }
            }
        }
    }

    #[test]
    fn slice_examples_and_boundary() {
        assert_eq!(slice_index_angle(0.0, 5), Some(SliceIndex(0)));
        assert_eq!(slice_index_angle(TAU / 5.0, 5), Some(SliceIndex(1)));
        assert_eq!(slice_index_angle(-TAU / 5.0, 5), Some(SliceIndex(4)));
        // The boundary angle pi/m is rejected exactly: scaling by the
        // power of two in tau/m commutes with rounding, so the comparison
        // reduces to p < p.
        assert_eq!(slice_index_angle(PI / 5.0, 5), None);
        assert_eq!(slice_index_angle(-PI / 5.0, 5), None);
        assert_eq!(slice_index_angle(f64::NAN, 5), None);
        assert_eq!(slice_index(SphereValue::Infinity, 5), None);
        assert_eq!(slice_index(SphereValue::Finite(c(0.0, 0.0)), 5), None);
        assert_eq!(
            slice_index(SphereValue::Finite(Complex64::from_polar(2.0, TAU * 2.0 / 5.0)), 5),
            Some(SliceIndex(2))
        );
        assert_eq!(SliceIndex(3).to_string(), "U_3");
    }

    #[test]
    fn rotated_real_part_on_ray() {
        let v = Complex64::from_polar(2.0, TAU * 3.0 / 7.0);
        assert!((rotated_real_part(v, 3, 7) - 2.0).abs() <= 1e-14);
        assert!(rotated_real_part(v, 0, 7) < 2.0);
    }
}
