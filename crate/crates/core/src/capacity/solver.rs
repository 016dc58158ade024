//! Capacity of the single-source cascade.
//!
//! At the optimum every hop carries the same rate `C`. For a candidate `C`
//! the first relay's listen fraction is fixed by the first hop, and each
//! further listen fraction is the unique root of `h_hop(p_i, ·) = C` on
//! `[1 - p_i, 1]` (the hop entropy is increasing in its second argument).
//! The residual of the final hop into the sink decides whether `C` was too
//! small or too large, and an outer bisection on `C` closes the gap.

use serde::{Deserialize, Serialize};

use super::profile::{h_first_hop, hop_unchecked, ListenProfile};
use crate::error::{Error, Result};
use crate::roots::bisect;

/// Inner root-finding tolerance on listen fractions.
pub const INNER_TOL: f64 = 1e-15;
/// Default outer tolerance on the rate.
pub const DEFAULT_TOL: f64 = 1e-9;
const MAX_ITER: usize = 400;

/// A solved capacity problem.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CapacityResult {
    /// Capacity in bits per channel use.
    pub value: f64,
    pub profile: ListenProfile,
    /// Residual of the defining equation at `value`.
    pub residual: f64,
    pub iterations: usize,
}

/// Walks the chain of equal-rate hops for candidate rate `rate`.
///
/// Returns the signed residual (positive: `rate` can still grow) and the
/// listen fractions found so far.
fn chain_residual(rate: f64, m: usize, q: u32) -> Result<(f64, Vec<f64>)> {
    let log_q1 = f64::from(q + 1).log2();
    let mut p = Vec::with_capacity(m);
    p.push((rate / log_q1).clamp(0.0, 1.0));
    for _ in 0..m.saturating_sub(2) {
        let p_i = *p.last().unwrap();
        let lo = (1.0 - p_i).max(0.0);
        let at_hi = hop_unchecked(p_i, 1.0, q);
        if at_hi < rate {
            // even a fully listening next relay cannot carry `rate`
            return Ok((at_hi - rate, p));
        }
        let at_lo = hop_unchecked(p_i, lo, q);
        if at_lo > rate {
            // the hop carries more than `rate` at its smallest admissible listen fraction
            return Ok((at_lo - rate, p));
        }
        let root = bisect(|x| rate - hop_unchecked(p_i, x, q), lo, 1.0, INNER_TOL, MAX_ITER)?;
        p.push(root.root);
    }
    let last = *p.last().unwrap();
    Ok((hop_unchecked(last, 1.0, q) - rate, p))
}

/// Capacity `C_{m-1}(q)` of a cascade with `m - 1` relays.
pub fn solve_capacity(m: usize, q: u32, tol: f64) -> Result<CapacityResult> {
    if m < 1 || q < 1 {
        return Err(Error::Domain(format!("need m >= 1 and q >= 1, got m = {m}, q = {q}")));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let log_q1 = f64::from(q + 1).log2();
    if m == 1 {
        return Ok(CapacityResult {
            value: log_q1,
            profile: ListenProfile::new(q, vec![])?,
            residual: 0.0,
            iterations: 0,
        });
    }

    let (g_lo, _) = chain_residual(0.0, m, q)?;
    let (g_hi, _) = chain_residual(log_q1, m, q)?;
    if g_lo < 0.0 || g_hi > 0.0 {
        return Err(Error::Bracket(format!(
            "residual g(0) = {g_lo}, g(log2(q+1)) = {g_hi} for m = {m}, q = {q}"
        )));
    }

    // keep g(lo) >= 0 > g(hi); g(0) can vanish (q = 1), so the trivial end is never accepted
    let (mut lo, mut hi) = (0.0_f64, log_q1);
    let mut iterations = 0;
    loop {
        let (g_lo, _) = chain_residual(lo, m, q)?;
        if lo > 0.0 && hi - lo <= tol && g_lo.abs() <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        iterations += 1;
        if iterations > MAX_ITER {
            return Err(Error::NoConvergence {
                iterations: MAX_ITER,
                context: format!("rate bracket [{lo}, {hi}] still open (m = {m}, q = {q})"),
            });
        }
        if chain_residual(mid, m, q)?.0 >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (residual, mut p) = chain_residual(lo, m, q)?;
    if p.len() != m - 1 || residual.abs() > tol {
        return Err(Error::NoConvergence {
            iterations,
            context: format!("residual {residual} exceeds tolerance {tol} (m = {m}, q = {q})"),
        });
    }
    p.push(1.0);
    let profile = ListenProfile::from_full(q, p)?;
    Ok(CapacityResult {
        value: lo,
        profile,
        residual: residual.abs(),
        iterations,
    })
}

/// Capacity of the single-relay cascade from the fixed point
/// `p log2(q+1) = H(X_1)`.
///
/// With `no_silence_detection` the relay cannot tell a quiet source from a
/// transmitting one, so `p_{X_0 X_1}(N, N) = 0` and the first hop carries
/// `p log2 q` instead.
pub fn capacity_single_relay(q: u32, no_silence_detection: bool) -> Result<CapacityResult> {
    if q < 1 {
        return Err(Error::Domain("q must be at least 1".into()));
    }
    if no_silence_detection && q == 1 {
        return Err(Error::Unsupported(
            "without silence detection a unary alphabet carries nothing into the relay".into(),
        ));
    }
    let first_hop = |p: f64| {
        if no_silence_detection {
            p * f64::from(q).log2()
        } else {
            h_first_hop(p, q)
        }
    };
    // f(1/2) < 0 < f(1) for every q; the trivial root at p = 0 (q = 1) stays outside
    let root = bisect(
        |p| first_hop(p) - hop_unchecked(p, 1.0, q),
        1.0,
        0.5,
        INNER_TOL,
        MAX_ITER,
    )?;
    let p = root.root;
    let value = first_hop(p).min(hop_unchecked(p, 1.0, q));
    Ok(CapacityResult {
        value,
        profile: ListenProfile::new(q, vec![p])?,
        residual: root.value.abs(),
        iterations: root.iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn direct_pipe() {
        let r = solve_capacity(1, 2, 1e-9).unwrap();
        assert!((r.value - 3f64.log2()).abs() < 1e-15);
        let r = solve_capacity(1, 1, 1e-9).unwrap();
        assert_eq!(r.value, 1.0);
    }

    #[test]
    fn single_relay_binary() {
        let r = solve_capacity(2, 2, 1e-9).unwrap();
        assert!((r.value - 1.1389).abs() < 1e-4);
        assert!((r.profile.p(1) - 0.7185).abs() < 1e-3);
        assert!(r.residual <= 1e-9);
    }

    #[test]
    fn fixed_point_variants() {
        let r = capacity_single_relay(2, false).unwrap();
        assert!((r.value - 1.1389).abs() < 1e-4);
        assert!((r.profile.p(1) - 0.7185).abs() < 1e-3);
        let r = capacity_single_relay(1, false).unwrap();
        assert!((r.value - 0.7729).abs() < 1e-4);
        assert!((r.profile.p(1) - 0.7729).abs() < 1e-3);
        let r = capacity_single_relay(2, true).unwrap();
        assert!((r.value - 0.8295).abs() < 1e-3);
        assert!(matches!(capacity_single_relay(1, true), Err(Error::Unsupported(_))));
    }

    #[test]
    fn fixed_point_agrees_with_chain_solver() {
        for q in 1..=6 {
            let a = capacity_single_relay(q, false).unwrap().value;
            let b = solve_capacity(2, q, 1e-10).unwrap().value;
            assert!((a - b).abs() < 1e-8, "q = {q}: {a} vs {b}");
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(solve_capacity(0, 2, 1e-9).is_err());
        assert!(solve_capacity(2, 0, 1e-9).is_err());
        assert!(solve_capacity(2, 2, 0.0).is_err());
        assert!(solve_capacity(2, 2, f64::NAN).is_err());
    }

    #[test]
    fn equal_rate_property() {
        for (m, q) in [(3, 1), (5, 2), (11, 3)] {
            let tol = 1e-9;
            let r = solve_capacity(m, q, tol).unwrap();
            for h in r.profile.hop_entropies() {
                assert!(
                    (h - r.value).abs() <= 10.0 * tol,
                    "m = {m}, q = {q}: {h} vs {}",
                    r.value
                );
            }
        }
    }
}
