//! eval_f and the one-step maps must be total over all binary64 inputs:
//! every input yields Ok with finite members or a typed error, never a
//! panic and never a silent NaN.

#![no_main]

use henon_core::dynamics::{apply_f, apply_f_inverse, eval_f};
use henon_core::params::Params;
use henon_core::point::ComplexPair;
use libfuzzer_sys::fuzz_target;
use num_complex::Complex64;

fuzz_target!(|input: (u8, f64, f64, f64, f64, f64)| {
    let (m_raw, delta_raw, zr, zi, wr, wi) = input;
    let m = 2 + u32::from(m_raw) % 15;
    let delta = if delta_raw.is_finite() { 2.0 + delta_raw.abs().min(1e6) } else { 3.0 };
    let Ok(p) = Params::new(m, delta) else { return };

    let z = Complex64::new(zr, zi);
    if let Ok(ev) = eval_f(z, &p) {
        assert!(ev.value.is_finite(), "eval_f passed non-finite through for z = {z}");
    }

    let pt = ComplexPair::new(z, Complex64::new(wr, wi));
    if let Ok(step) = apply_f(pt, &p) {
        assert!(step.point.z.is_finite() && step.point.w.is_finite());
    }
    if let Ok(back) = apply_f_inverse(pt, &p) {
        assert!(back.z.is_finite() && back.w.is_finite());
    }
});
