//! Entropy helpers (base-2, with `0 log 0 = 0`).

use num_bigint::BigUint;

/// Slack absorbed when an argument of [`h2`] strays outside `[0, 1]`.
const UNIT_SLACK: f64 = 1e-15;

/// `-x log2 x`, zero at `x = 0`.
pub fn neg_xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Binary entropy function.
pub fn h2(x: f64) -> f64 {
    debug_assert!(
        (-UNIT_SLACK..=1.0 + UNIT_SLACK).contains(&x) || x.is_nan(),
        "h2 argument {x} outside [0, 1]"
    );
    let x = x.clamp(0.0, 1.0);
    neg_xlog2x(x) + neg_xlog2x(1.0 - x)
}

/// Entropy of a (not necessarily normalised) list of probabilities.
pub fn entropy<I: IntoIterator<Item = f64>>(probs: I) -> f64 {
    probs.into_iter().map(neg_xlog2x).sum()
}

/// `log2` of an arbitrary-precision integer; `-inf` for zero.
pub fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 64 {
        let small: u64 = x.iter_u64_digits().next().unwrap_or(0);
        return (small as f64).log2();
    }
    let shift = bits - 64;
    let top: u64 = (x >> shift).iter_u64_digits().next().unwrap_or(0);
    (top as f64).log2() + shift as f64
}
