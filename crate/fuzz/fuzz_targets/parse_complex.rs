//! The complex-literal parser takes arbitrary command-line text. It must
//! never panic, and whatever it accepts must survive a format/parse round
//! trip bit for bit.

#![no_main]

use henon_core::parse::{format_complex, parse_complex};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(z) = parse_complex(s) else { return };
    assert!(z.re.is_finite() && z.im.is_finite(), "accepted non-finite {s:?}");
    let back = parse_complex(&format_complex(z)).expect("own output parses");
    assert_eq!(z.re.to_bits(), back.re.to_bits(), "re drifted for {s:?}");
    assert_eq!(z.im.to_bits(), back.im.to_bits(), "im drifted for {s:?}");
});
