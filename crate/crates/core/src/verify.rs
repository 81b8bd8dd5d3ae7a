//! Structured self-checks: each suite re-derives a family of claimed
//! properties at runtime and reports measured error against a pinned
//! tolerance. A report passes iff measured <= tolerance.

use crate::chebyshev::chebyshev_t;
use crate::combinatorics::{cycle_decomposition, gamma, gamma_power, limit_slice_map};
use crate::dynamics::{apply_f, iterate};
use crate::error::Error;
use crate::geometry::{
    absorbed_horizon, in_w_n, mu_schedule, rotated_real_part, sample_a, sample_w_n, sector_pair,
    slice_index, SectorPair, WSchedule,
};
use crate::limits::{
    conjugacy_phi, delta_series, estimate_h, harmonic_diagnostic, linear_model, rank_probe,
    Direction, DIAGNOSTIC_CLAMP,
};
use crate::params::Params;
use crate::point::ComplexPair;
use crate::sphere::SphereValue;
use serde::Serialize;
use std::collections::HashSet;
use std::fmt;

/// Check families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Combinatorics,
    Cycling,
    Growth,
    Limits,
    Conjugacy,
    Diagnostic,
    All,
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Suite::Combinatorics => "combinatorics",
            Suite::Cycling => "cycling",
            Suite::Growth => "growth",
            Suite::Limits => "limits",
            Suite::Conjugacy => "conjugacy",
            Suite::Diagnostic => "diagnostic",
            Suite::All => "all",
        };
        f.write_str(name)
    }
}

/// Outcome of one check. `passed` is always `measured <= tolerance`.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub suite: Suite,
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub tolerance: f64,
    pub detail: String,
}

fn report(suite: Suite, name: &str, measured: f64, tolerance: f64, detail: String) -> CheckReport {
    CheckReport { suite, name: name.into(), passed: measured <= tolerance, measured, tolerance, detail }
}

/// Parameters for a verification run. `r0` overrides the derived base
/// radius of the wedge schedule; `None` keeps the default.
#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    pub m: u32,
    pub delta: f64,
    pub c_abs: f64,
    pub seed: u64,
    pub r0: Option<f64>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { m: 5, delta: 3.0, c_abs: 1.0, seed: 0, r0: None }
    }
}

fn schedule_for(p: &Params, cfg: &VerifyConfig) -> Result<WSchedule, Error> {
    match cfg.r0 {
        Some(r0) => WSchedule::with_r0(p, r0),
        None => Ok(WSchedule::new(p)),
    }
}

/// Run one suite (or all of them) and collect reports.
pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<Vec<CheckReport>, Error> {
    let p = Params::new(cfg.m, cfg.delta)?;
    if !(cfg.c_abs >= 1.0 && cfg.c_abs.is_finite()) {
        return Err(Error::Param(format!("absorbing radius {} must be >= 1", cfg.c_abs)));
    }
    let sched = schedule_for(&p, cfg)?;
    let mut out = Vec::new();
    match suite {
        Suite::Combinatorics => combinatorics_checks(&p, &mut out),
        Suite::Cycling => cycling_checks(&p, cfg, &sched, &mut out),
        Suite::Growth => growth_checks(&p, cfg, &mut out),
        Suite::Limits => limits_checks(&p, cfg, &mut out),
        Suite::Conjugacy => conjugacy_checks(&p, cfg, &mut out),
        Suite::Diagnostic => diagnostic_checks(&p, cfg, &sched, &mut out),
        Suite::All => {
            combinatorics_checks(&p, &mut out);
            cycling_checks(&p, cfg, &sched, &mut out);
            growth_checks(&p, cfg, &mut out);
            limits_checks(&p, cfg, &mut out);
            conjugacy_checks(&p, cfg, &mut out);
            diagnostic_checks(&p, cfg, &sched, &mut out);
        }
    }
    Ok(out)
}

fn combinatorics_checks(p: &Params, out: &mut Vec<CheckReport>) {
    let suite = Suite::Combinatorics;
    let m = p.m();
    let dec = cycle_decomposition(m);

    let expected = m.div_ceil(2) as usize;
    out.push(report(
        suite,
        "cycle-count-formula",
        (dec.cycles().len() as f64 - expected as f64).abs(),
        0.0,
        format!("{} cycles, formula says {expected}", dec.cycles().len()),
    ));

    let mut seen = HashSet::new();
    let mut duplicates = 0u64;
    for c in dec.cycles() {
        for &q in c.members() {
            if !seen.insert(q) {
                duplicates += 1;
            }
        }
    }
    let missing = (m * m) as usize - seen.len();
    out.push(report(
        suite,
        "cycle-partition",
        (duplicates + missing as u64) as f64,
        0.0,
        format!("{} members cover the {}x{} grid", seen.len(), m, m),
    ));

    let mut walk_mismatch = 0u64;
    for a in 0..m {
        for b in 0..m {
            let start = SectorPair::new(a, b);
            let mut cur = start;
            for n in 0..=4 * m {
                if gamma_power(start, n, m) != cur {
                    walk_mismatch += 1;
                }
                cur = gamma(cur, m);
            }
        }
    }
    out.push(report(
        suite,
        "walk-closed-form",
        walk_mismatch as f64,
        0.0,
        format!("gamma powers checked to n = {}", 4 * m),
    ));

    let mut sum_mismatch = 0u64;
    for c in dec.cycles() {
        let (j1, j2) = limit_slice_map(c.representative().b, m);
        if (j1.0 + j2.0) % m != 1 % m {
            sum_mismatch += 1;
        }
    }
    out.push(report(
        suite,
        "slice-target-sum",
        sum_mismatch as f64,
        0.0,
        "slice indices of each cycle sum to 1 mod m".into(),
    ));

    let mut sched_mismatch = 0u64;
    for b in 0..m {
        for n in 0..=4 * m {
            if mu_schedule(n, b, m) != gamma_power(SectorPair::new(0, b), n, m) {
                sched_mismatch += 1;
            }
        }
    }
    out.push(report(
        suite,
        "schedule-matches-walk",
        sched_mismatch as f64,
        0.0,
        "wedge schedule follows the walk from (0, b)".into(),
    ));
}

fn cycling_checks(p: &Params, cfg: &VerifyConfig, sched: &WSchedule, out: &mut Vec<CheckReport>) {
    let suite = Suite::Cycling;
    let m = p.m();
    let m_lower = (20 * m) as f64;

    let mut violations = 0u64;
    let mut checked = 0u64;
    for b in 0..m {
        for start in [SectorPair::new(0, b), SectorPair::new(b, (b + 2) % m)] {
            for pt in sample_a(start, m_lower, 6, cfg.seed ^ b as u64, m) {
                let orbit = iterate(pt, (4 * m) as usize, p);
                for (n, q) in orbit.points().iter().enumerate() {
                    checked += 1;
                    if sector_pair(q, m) != Some(gamma_power(start, n as u32, m)) {
                        violations += 1;
                    }
                }
            }
        }
    }
    out.push(report(
        suite,
        "ray-cycling",
        violations as f64,
        0.0,
        format!("{checked} orbit points follow the walk"),
    ));

    let mut violations = 0u64;
    let mut checked = 0u64;
    for b in 0..m {
        for n in 0..=12u32 {
            for pt in sample_w_n(n, b, sched, 4, cfg.seed ^ (31 * n as u64 + b as u64)) {
                checked += 1;
                match apply_f(pt, p) {
                    Ok(step) if in_w_n(&step.point, n + 1, b, sched) => {}
                    _ => violations += 1,
                }
            }
        }
    }
    out.push(report(
        suite,
        "wedge-invariance",
        violations as f64,
        0.0,
        format!("{checked} wedge points map into the next wedge (r0 = {:.3})", sched.radius(0)),
    ));

    let floor = m_lower.max(1.5 * cfg.c_abs);
    let mut violations = 0u64;
    for b in 0..m {
        for pt in sample_a(SectorPair::new(b, b), floor, 4, cfg.seed ^ (97 + b as u64), m) {
            if absorbed_horizon(pt, p, cfg.c_abs, 4) != Some(0) {
                violations += 1;
            }
        }
    }
    out.push(report(
        suite,
        "deep-ray-absorption",
        violations as f64,
        0.0,
        format!("ray points past {floor} start absorbed at C = {}", cfg.c_abs),
    ));
}

fn growth_checks(p: &Params, cfg: &VerifyConfig, out: &mut Vec<CheckReport>) {
    let suite = Suite::Growth;
    let m = p.m();
    let m_lower = (20 * m) as f64;
    let lambda = 0.99 * ((p.delta() - 1.0) * m_lower - 1.0);
    out.push(report(
        suite,
        "growth-parameter-positive",
        if lambda > 0.0 { 0.0 } else { 1.0 },
        0.0,
        format!("lambda = {lambda:.6}"),
    ));

    let mut violations = 0u64;
    let mut checked = 0u64;
    for b in 0..m {
        let start = SectorPair::new(0, b);
        for pt in sample_a(start, m_lower, 4, cfg.seed ^ (7 * b as u64), m) {
            let orbit = iterate(pt, 80, p);
            let rho0 = rotated_real_part(pt.z, 0, m);
            let rho0_w = rotated_real_part(pt.w, b, m);
            for n in 1..=40usize {
                let lower_even = rho0 + n as f64 * lambda;
                let lower_odd = rho0_w + n as f64 * lambda;
                if let Some(q) = orbit.point(2 * n) {
                    checked += 1;
                    let s = gamma_power(start, 2 * n as u32, m).a;
                    if rotated_real_part(q.z, s, m) <= lower_even {
                        violations += 1;
                    }
                }
                if let Some(q) = orbit.point(2 * n - 1) {
                    checked += 1;
                    let s = gamma_power(start, 2 * n as u32 - 1, m).a;
                    if rotated_real_part(q.z, s, m) <= lower_odd {
                        violations += 1;
                    }
                }
            }
        }
    }
    out.push(report(
        suite,
        "linear-growth-floor",
        violations as f64,
        0.0,
        format!("{checked} rotated real parts beat the linear floor, lambda = {lambda:.3}"),
    ));
}

fn limits_checks(p: &Params, cfg: &VerifyConfig, out: &mut Vec<CheckReport>) {
    let suite = Suite::Limits;
    let m = p.m();
    let m_lower = (20 * m) as f64;
    let bound = p.big_delta();

    let mut violations = 0u64;
    let mut worst: f64 = 0.0;
    let mut checked = 0u64;
    for b in 0..m {
        for start in [SectorPair::new(0, b), SectorPair::new((b + 1) % m, b)] {
            for pt in sample_a(start, m_lower, 8, cfg.seed ^ (11 * b as u64), m) {
                if let Ok(sums) = delta_series(pt, p, 1e-16) {
                    checked += 1;
                    let mag = sums.delta1.norm().max(sums.delta2.norm());
                    worst = worst.max(mag / bound);
                    if !(sums.delta1.norm() < bound && sums.delta2.norm() < bound) {
                        violations += 1;
                    }
                } else {
                    violations += 1;
                }
            }
        }
    }
    out.push(report(
        suite,
        "tail-bound",
        violations as f64,
        0.0,
        format!("{checked} samples, worst |tail| / (1/(delta-1)) = {worst:.3e}"),
    ));

    let mut violations = 0u64;
    let mut worst_ratio: f64 = 0.0;
    for pt in sample_a(SectorPair::new(0, 0), m_lower, 3, cfg.seed ^ 5, m) {
        if let Ok(est) = estimate_h(pt, p, 1e-12) {
            let orbit = iterate(pt, 40, p);
            let errs: Vec<f64> = (0..=20)
                .filter_map(|k| orbit.point(2 * k))
                .filter_map(|q| SphereValue::ratio(q.z, q.w))
                .map(|r| r.chordal(est.h1))
                .collect();
            for w in errs.windows(2) {
                if w[0] > 1e-13 {
                    let ratio = w[1] / w[0];
                    worst_ratio = worst_ratio.max(ratio);
                    if w[1] > (2.0 * w[0] / p.delta()).max(1e-13) {
                        violations += 1;
                    }
                }
            }
        } else {
            violations += 1;
        }
    }
    out.push(report(
        suite,
        "ratio-convergence-rate",
        violations as f64,
        0.0,
        format!("even-step ratio error contracts; worst step factor = {worst_ratio:.3e}"),
    ));

    let mut worst_rel: f64 = 0.0;
    let mut failures = 0u64;
    for b in 0..m {
        for pt in sample_a(SectorPair::new(0, b), m_lower, 4, cfg.seed ^ (13 * b as u64), m) {
            match estimate_h(pt, p, 1e-12) {
                Ok(est) => match (est.h1.finite(), est.h2.finite()) {
                    (Some(h1), Some(h2)) => {
                        worst_rel = worst_rel.max((h1 * h2 - p.a()).norm() / p.a().norm());
                    }
                    _ => failures += 1,
                },
                Err(_) => failures += 1,
            }
        }
    }
    out.push(report(
        suite,
        "product-law",
        if failures > 0 { 1.0 } else { worst_rel },
        1e-9,
        format!("max |h1 h2 - a| / |a| = {worst_rel:.3e}, {failures} failures"),
    ));

    let mut violations = 0u64;
    let mut checked = 0u64;
    for b in 0..m {
        let (j1, j2) = limit_slice_map(b, m);
        for pt in sample_a(SectorPair::new(0, b), m_lower, 4, cfg.seed ^ (17 * b as u64), m) {
            checked += 1;
            match estimate_h(pt, p, 1e-12) {
                Ok(est)
                    if slice_index(est.h1, m) == Some(j1) && slice_index(est.h2, m) == Some(j2) => {}
                _ => violations += 1,
            }
        }
    }
    out.push(report(
        suite,
        "slice-containment",
        violations as f64,
        0.0,
        format!("{checked} limit pairs land in their cycle's slices"),
    ));

    let spread = rank_probe(SectorPair::new(0, 0), p, 12, cfg.seed ^ 23);
    out.push(report(
        suite,
        "rank-spread",
        (0.1 - spread).max(0.0),
        0.0,
        format!("h1 spread over one sector pair = {spread:.3}"),
    ));
}

fn conjugacy_checks(p: &Params, cfg: &VerifyConfig, out: &mut Vec<CheckReport>) {
    let suite = Suite::Conjugacy;
    let m = p.m();
    // Small base radius so the tails are significant relative to the
    // coordinates.
    let mut samples = Vec::new();
    for b in 0..m {
        samples.extend(sample_a(SectorPair::new(0, b), 3.0, 4, cfg.seed ^ (3 * b as u64), m));
    }

    let mut worst_rel: f64 = 0.0;
    let mut failures = 0u64;
    for &pt in &samples {
        let chained =
            apply_f(pt, p).and_then(|step| conjugacy_phi(step.point, p, 1e-16));
        let direct = conjugacy_phi(pt, p, 1e-16)
            .and_then(|phi| linear_model(phi, 1, p, Direction::Forward));
        match (chained, direct) {
            (Ok(lhs), Ok(rhs)) => {
                worst_rel = worst_rel.max(lhs.dist(&rhs) / (1.0 + rhs.norm_max()));
            }
            _ => failures += 1,
        }
    }
    out.push(report(
        suite,
        "intertwining",
        if failures > 0 { 1.0 } else { worst_rel },
        1e-8,
        format!("max relative defect of phi(F(pt)) = L(phi(pt)) over {} points", samples.len()),
    ));

    let mut worst_move: f64 = 0.0;
    let mut failures = 0u64;
    for &pt in &samples {
        match delta_series(pt, p, 1e-16) {
            Ok(sums) => {
                worst_move = worst_move.max(sums.delta1.norm()).max(sums.delta2.norm());
            }
            Err(_) => failures += 1,
        }
    }
    out.push(report(
        suite,
        "near-identity",
        if failures > 0 { f64::INFINITY } else { worst_move },
        p.big_delta(),
        format!("max per-coordinate displacement of phi = {worst_move:.3e}"),
    ));

    let probe = ComplexPair::new(
        num_complex::Complex64::new(1.5, -0.5),
        num_complex::Complex64::new(0.25, 2.0),
    );
    let mut worst_rt: f64 = 0.0;
    for n in 0..=9u32 {
        if let Ok(fwd) = linear_model(probe, n, p, Direction::Forward) {
            if let Ok(back) = linear_model(fwd, n, p, Direction::Backward) {
                worst_rt = worst_rt.max(back.dist(&probe) / (1.0 + probe.norm_max()));
            }
        }
    }
    out.push(report(
        suite,
        "linear-round-trip",
        worst_rt,
        1e-12,
        "L^n then L^-n returns the start".into(),
    ));

    let mut worst_rec: f64 = 0.0;
    let mut failures = 0u64;
    for &pt in &samples {
        let step = match apply_f(pt, p) {
            Ok(s) => s,
            Err(_) => {
                failures += 1;
                continue;
            }
        };
        let f0 = match crate::dynamics::eval_f(pt.z, p) {
            Ok(fe) => fe.value,
            Err(_) => {
                failures += 1;
                continue;
            }
        };
        match (delta_series(pt, p, 1e-16), delta_series(step.point, p, 1e-16)) {
            (Ok(here), Ok(next)) => {
                let expect = p.a() * here.delta2 - f0;
                worst_rec = worst_rec
                    .max((next.delta1 - expect).norm() / (1.0 + expect.norm()))
                    .max((next.delta2 - here.delta1).norm());
            }
            _ => failures += 1,
        }
    }
    out.push(report(
        suite,
        "tail-recursion",
        if failures > 0 { 1.0 } else { worst_rec },
        1e-10,
        "tails obey the one-step recursion that drives the conjugacy".into(),
    ));
}

fn diagnostic_checks(p: &Params, cfg: &VerifyConfig, sched: &WSchedule, out: &mut Vec<CheckReport>) {
    let suite = Suite::Diagnostic;
    let m = p.m();
    let m_lower = (20 * m) as f64;

    let mut violations = 0u64;
    for b in 0..m {
        for pt in sample_a(SectorPair::new(0, b), m_lower, 3, cfg.seed ^ (41 * b as u64), m) {
            // u_n interleaves two scales (even and odd steps stall in
            // turn), so monotonicity holds per parity class, not per step.
            let mut prev = [f64::INFINITY; 2];
            for n in 1..=25u32 {
                let d = match harmonic_diagnostic(pt, n, p) {
                    Ok(d) => d,
                    Err(_) => {
                        violations += 1;
                        break;
                    }
                };
                if n >= 10 && d.value >= -1.0 {
                    violations += 1;
                }
                if d.value >= prev[(n % 2) as usize] {
                    violations += 1;
                }
                prev[(n % 2) as usize] = d.value;
                if d.saturated {
                    break;
                }
            }
        }
    }
    out.push(report(
        suite,
        "divergence",
        violations as f64,
        0.0,
        "u_n drops below -1 and falls along each parity class".into(),
    ));

    let tanc = p.sector_half_tan();
    let mut violations = 0u64;
    let mut checked = 0u64;
    for b in 0..m {
        for pt in sample_w_n(0, b, sched, 3, cfg.seed ^ (43 + b as u64)) {
            for n in 1..=10u32 {
                let sigma = sched.sigma(n);
                // cos of the cone's half-opening: (n+2)/sqrt(tanc^2 (n+1)^2 + (n+2)^2).
                let u_cos = 1.0 / (1.0 + sigma * sigma).sqrt();
                let bound = -sched.radius(n).powi(m as i32) * chebyshev_t(m, u_cos) / n as f64;
                if !bound.is_finite() {
                    continue;
                }
                checked += 1;
                match harmonic_diagnostic(pt, n, p) {
                    Ok(d) => {
                        if d.value > bound + bound.abs() * 1e-9 {
                            violations += 1;
                        }
                    }
                    Err(_) => violations += 1,
                }
            }
        }
    }
    out.push(report(
        suite,
        "cone-power-bound",
        violations as f64,
        0.0,
        format!("{checked} diagnostics sit under the wedge-schedule bound (tanc = {tanc:.3})"),
    ));

    let mut worst: f64 = 0.0;
    for n in 2..=16u32 {
        for i in 0..1000 {
            let theta = std::f64::consts::TAU * i as f64 / 1000.0;
            worst = worst.max((chebyshev_t(n, theta.cos()) - (n as f64 * theta).cos()).abs());
        }
    }
    out.push(report(
        suite,
        "cosine-identity",
        worst,
        1e-12,
        "T_n(cos t) = cos(n t) on a dense grid, n <= 16".into(),
    ));

    let deep = ComplexPair::from_re(1e200, 1e200);
    let sat = harmonic_diagnostic(deep, 3, p);
    let ok = matches!(sat, Ok(d) if d.saturated && d.value == -DIAGNOSTIC_CLAMP);
    out.push(report(
        suite,
        "saturation",
        if ok { 0.0 } else { 1.0 },
        0.0,
        "deep starts clamp negative".into(),
    ));
}
