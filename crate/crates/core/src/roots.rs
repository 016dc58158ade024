//! Bracketed bisection used by every solver in the crate.

use crate::error::{Error, Result};

/// Outcome of a bisection run.
#[derive(Clone, Copy, Debug)]
pub struct Bisection {
    /// Point on the side where the function is non-negative.
    pub root: f64,
    /// Function value at `root`.
    pub value: f64,
    pub iterations: usize,
}

/// Bisects `f` on `[lo, hi]` where `f(lo) >= 0 >= f(hi)` or the reverse.
///
/// Stops once the bracket is narrower than `tol` and `|f(root)| <= tol`, or
/// when the bracket can no longer be split in floating point.
pub fn bisect<F>(mut f: F, lo: f64, hi: f64, tol: f64, max_iter: usize) -> Result<Bisection>
where
    F: FnMut(f64) -> f64,
{
    let f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo.is_nan() || f_hi.is_nan() {
        return Err(Error::Bracket(format!("NaN at the ends of [{lo}, {hi}]")));
    }
    // orient so that the predicate `f(x) >= 0` holds on the `pos` side
    let (mut pos, mut neg, mut f_pos) = if f_lo >= 0.0 && f_hi <= 0.0 {
        (lo, hi, f_lo)
    } else if f_lo <= 0.0 && f_hi >= 0.0 {
        (hi, lo, f_hi)
    } else {
        return Err(Error::Bracket(format!(
            "f({lo}) = {f_lo} and f({hi}) = {f_hi} have the same sign"
        )));
    };
    if f_pos == 0.0 {
        return Ok(Bisection {
            root: pos,
            value: 0.0,
            iterations: 0,
        });
    }
    for iterations in 1..=max_iter {
        let mid = 0.5 * (pos + neg);
        if mid == pos || mid == neg {
            return Ok(Bisection {
                root: pos,
                value: f_pos,
                iterations,
            });
        }
        let f_mid = f(mid);
        if f_mid >= 0.0 {
            pos = mid;
            f_pos = f_mid;
        } else {
            neg = mid;
        }
        if f_pos == 0.0 || ((pos - neg).abs() <= tol && f_pos.abs() <= tol) {
            return Ok(Bisection {
                root: pos,
                value: f_pos,
                iterations,
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        context: format!("bracket [{}, {}] still open", pos.min(neg), pos.max(neg)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt2() {
        let r = bisect(|x| 2.0 - x * x, 0.0, 2.0, 1e-12, 200).unwrap();
        assert!((r.root - 2f64.sqrt()).abs() < 1e-11);
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-12, 200).unwrap();
        assert!((r.root - 2f64.sqrt()).abs() < 1e-11);
    }

    #[test]
    fn rejects_unbracketed() {
        assert!(matches!(
            bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-9, 100),
            Err(Error::Bracket(_))
        ));
    }

    #[test]
    fn iteration_cap() {
        assert!(matches!(
            bisect(|x| 0.3 - x, 0.0, 1.0, 1e-12, 3),
            Err(Error::NoConvergence { .. })
        ));
    }
}
