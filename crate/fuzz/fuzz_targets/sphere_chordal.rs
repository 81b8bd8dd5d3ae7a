//! The chordal metric must stay within [0, 2], be symmetric, and put every
//! value at distance 0 from itself, for any binary64 ratio inputs.

#![no_main]

use henon_core::sphere::SphereValue;
use libfuzzer_sys::fuzz_target;
use num_complex::Complex64;

fuzz_target!(|input: (f64, f64, f64, f64, f64, f64, f64, f64)| {
    let (a, b, c, d, e, f, g, h) = input;
    let v1 = SphereValue::ratio(Complex64::new(a, b), Complex64::new(c, d));
    let v2 = SphereValue::ratio(Complex64::new(e, f), Complex64::new(g, h));
    let (Some(v1), Some(v2)) = (v1, v2) else { return };

    let d12 = v1.chordal(v2);
    let d21 = v2.chordal(v1);
    assert!((0.0..=2.0).contains(&d12), "chordal {d12} out of range");
    assert_eq!(d12.to_bits(), d21.to_bits(), "asymmetric: {d12} vs {d21}");
    assert_eq!(v1.chordal(v1), 0.0);
    assert_eq!(v2.chordal(v2), 0.0);
});
