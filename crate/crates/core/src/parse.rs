//! Complex literals for the command line: `RE`, `IMi`, or `RE+IMi` /
//! `RE-IMi`, where both parts are plain f64 literals. No whitespace, no
//! parentheses, no implicit 1 before `i`, and non-finite values are
//! rejected.

use crate::error::Error;
use num_complex::Complex64;

fn parse_part(s: &str, whole: &str) -> Result<f64, Error> {
    let v: f64 = s
        .parse()
        .map_err(|_| Error::Param(format!("cannot parse complex literal {whole:?}")))?;
    if !v.is_finite() {
        return Err(Error::Param(format!("complex literal {whole:?} is not finite")));
    }
    Ok(v)
}

/// Split index of the sign that separates the real part from the imaginary
/// part: the last `+`/`-` beyond position 0 that is not an exponent sign.
fn split_index(s: &str) -> Option<usize> {
    let mut prev = None;
    let mut found = None;
    for (i, ch) in s.char_indices() {
        if i > 0 && (ch == '+' || ch == '-') && !matches!(prev, Some('e') | Some('E')) {
            found = Some(i);
        }
        prev = Some(ch);
    }
    found
}

/// Parse a complex literal.
pub fn parse_complex(s: &str) -> Result<Complex64, Error> {
    if s.is_empty() {
        return Err(Error::Param("empty complex literal".into()));
    }
    match s.strip_suffix('i') {
        None => Ok(Complex64::new(parse_part(s, s)?, 0.0)),
        Some(body) => match split_index(body) {
            None => Ok(Complex64::new(0.0, parse_part(body, s)?)),
            Some(j) => Ok(Complex64::new(
                parse_part(&body[..j], s)?,
                parse_part(&body[j..], s)?,
            )),
        },
    }
}

/// Format a finite complex value so that [`parse_complex`] reads back the
/// same bits: shortest round-tripping decimal for each part, explicit sign
/// on the imaginary part.
pub fn format_complex(z: Complex64) -> String {
    format!("{}{:+}i", z.re, z.im)
}
