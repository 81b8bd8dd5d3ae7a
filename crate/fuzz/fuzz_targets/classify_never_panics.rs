//! Pixel classification runs on untrusted window coordinates, so it must
//! be total: any start point, any small budget, no panic, and the reported
//! iteration count must stay within the budget.

#![no_main]

use henon_core::params::Params;
use henon_core::point::ComplexPair;
use henon_core::render::{classify, ClassKind};
use libfuzzer_sys::fuzz_target;
use num_complex::Complex64;

fuzz_target!(|input: (u8, u8, f64, f64, f64, f64)| {
    let (m_raw, budget_raw, zr, zi, wr, wi) = input;
    let m = 2 + u32::from(m_raw) % 7;
    let budget = 1 + usize::from(budget_raw) % 64;
    let p = Params::new(m, 2.5).expect("valid parameters");
    let pt = ComplexPair::new(Complex64::new(zr, zi), Complex64::new(wr, wi));
    let c = classify(pt, &p, budget, 1.0).expect("classify is total");
    assert!(c.iterations_used <= budget, "{} > {budget}", c.iterations_used);
    if let ClassKind::Cycle { period, .. } = c.kind {
        let m = m as usize;
        assert!(period == 2 * m || (m % 2 == 1 && period == m), "period {period} for m = {m}");
    }
});
