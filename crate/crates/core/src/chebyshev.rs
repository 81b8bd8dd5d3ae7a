//! Chebyshev polynomials of the first kind.

/// T_n(x) by the three-term recurrence T_{k+1} = 2 x T_k - T_{k-1}.
/// Satisfies T_n(cos t) = cos(n t).
pub fn chebyshev_t(n: u32, x: f64) -> f64 {
    match n {
        0 => 1.0,
        1 => x,
        _ => {
            let mut prev = 1.0;
            let mut cur = x;
            for _ in 2..=n {
                let next = 2.0 * x * cur - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}
