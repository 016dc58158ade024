//! Explicit regions for one relay, two sources and a binary alphabet.
//!
//! Node 0 and relay 1 both inject messages and `q = 2`. With listen fraction
//! `p` for the relay, `R_0 <= p log2 3` and `R_0 + R_1 <= H(X_1) = (1 - p) +
//! H2(p)`. The timing code adds `R_1 <= 1 - p` as soon as `R_0 > 0`.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{RateVector, RegionKind, REGION_TOL};
use crate::capacity::capacity_single_relay;
use crate::entropy::h2;
use crate::error::{Error, Result};
use crate::roots::bisect;

/// Slack on the upper end of the `R_0` domain, so the four-decimal value
/// 1.1389 of the single-relay capacity is accepted.
pub const DOMAIN_SLACK: f64 = 5e-5;

fn log3() -> f64 {
    3f64.log2()
}

/// Single-relay binary capacity `C_1(2)`, the largest `R_0`.
fn c1() -> f64 {
    capacity_single_relay(2, false)
        .expect("the binary fixed point is bracketed")
        .value
}

/// Upper boundary of the cut-set region, `R_1` as a function of `R_0`.
pub fn two_source_cutset_boundary(r0: f64) -> Result<f64> {
    let c1 = c1();
    if !(0.0..=c1 + DOMAIN_SLACK).contains(&r0) {
        return Err(Error::Domain(format!("R_0 = {r0} outside [0, {c1}]")));
    }
    Ok(cutset_curve(r0).max(0.0))
}

fn cutset_curve(r0: f64) -> f64 {
    let l = log3();
    if r0 <= l / 3.0 {
        l - r0
    } else {
        let p = (r0 / l).min(1.0);
        h2(p) + (1.0 - p) - r0
    }
}

/// Where the relay-source cap starts to bind.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    /// Relay listen fraction at which `H(X_0 | X_1) = H(X_1) - p̄_1`.
    pub p1: f64,
    /// Smallest source rate on the achievable curve.
    pub r0_min: f64,
    /// Largest relay rate once the source is active.
    pub r1_max: f64,
}

/// Solves `p log2 3 = H2(p)`, the crossing of the linear source term and the
/// concave sum-rate term minus the relay cap.
pub fn two_source_achievable_threshold() -> Result<Threshold> {
    let root = bisect(|p| h2(p) - p * log3(), 0.5, 1.0, 1e-13, 400)?;
    let p1 = root.root;
    Ok(Threshold {
        p1,
        r0_min: p1 * log3(),
        r1_max: 1.0 - p1,
    })
}

/// Explicit membership test for the two-source instance (union over profiles).
pub fn two_source_contains(rv: &RateVector, kind: RegionKind) -> Result<bool> {
    let [r0, r1] = rv.rates() else {
        return Err(Error::LengthMismatch {
            expected: 2,
            found: rv.len(),
        });
    };
    let (r0, r1) = (*r0, *r1);
    if r0 > c1() + REGION_TOL {
        return Ok(false);
    }
    let t = two_source_achievable_threshold()?;
    let bound = match kind {
        RegionKind::CutSet => cutset_curve(r0),
        RegionKind::AchievablePart if r0 == 0.0 => log3(),
        RegionKind::AchievablePart if r0 <= t.r0_min => 1.0 - r0 / log3(),
        RegionKind::AchievablePart => cutset_curve(r0),
        RegionKind::TimingRegion if r0 <= t.r0_min => log3() + (t.r1_max - log3()) * r0 / t.r0_min,
        RegionKind::TimingRegion => cutset_curve(r0),
    };
    Ok(r1 <= bound + REGION_TOL)
}

/// Label of a point in [`two_source_region_curves`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveTag {
    /// Boundary of the cut-set region.
    Cutset,
    /// Boundary of the achievable part, away from the isolated point.
    Achievable,
    /// The isolated point `(0, log2 3)` of the achievable part.
    AchievablePoint,
    /// Boundary of the convex hull.
    Timing,
    /// `(0, log2 3)`.
    Star,
    /// The threshold point where the relay cap binds.
    Circle,
}

impl fmt::Display for CurveTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CurveTag::Cutset => "cutset",
            CurveTag::Achievable => "achievable",
            CurveTag::AchievablePoint => "achievable_point",
            CurveTag::Timing => "timing",
            CurveTag::Star => "star",
            CurveTag::Circle => "circle",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionPoint {
    #[serde(rename = "region_tag")]
    pub tag: CurveTag,
    #[serde(rename = "R0")]
    pub r0: f64,
    #[serde(rename = "R1")]
    pub r1: f64,
}

/// Samples `[lo, hi]` with spacing `step`, always including both ends.
fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let mut xs = Vec::new();
    let mut k = 0u32;
    loop {
        let x = lo + f64::from(k) * step;
        if x >= hi - 1e-12 {
            break;
        }
        xs.push(x);
        k += 1;
    }
    xs.push(hi);
    xs
}

/// Polylines of the three regions, sampled every `step` in `R_0`.
///
/// Cut-set: the two-branch boundary over `[0, C_1(2)]`. Achievable part:
/// `R_1 = 1 - R_0 / log2 3` up to the threshold, then the cut-set boundary,
/// plus the isolated point `(0, log2 3)`. Hull: the segment from
/// `(0, log2 3)` to the threshold point, then the cut-set boundary.
pub fn two_source_region_curves(step: f64) -> Result<Vec<RegionPoint>> {
    if !(step > 0.0 && step <= 0.1) {
        return Err(Error::Domain(format!("step must lie in (0, 0.1], got {step}")));
    }
    let c1 = c1();
    let l = log3();
    let t = two_source_achievable_threshold()?;
    let mut out = Vec::new();
    let mut push = |tag, r0: f64, r1: f64| {
        out.push(RegionPoint {
            tag,
            r0,
            r1: r1.max(0.0),
        })
    };

    let mut xs = grid(0.0, c1, step);
    xs.push(l / 3.0);
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    for &x in &xs {
        push(CurveTag::Cutset, x, cutset_curve(x));
    }

    for x in grid(0.0, t.r0_min, step) {
        push(CurveTag::Achievable, x, 1.0 - x / l);
    }
    let upper = grid(t.r0_min, c1, step);
    for &x in &upper {
        push(CurveTag::Achievable, x, cutset_curve(x));
    }
    push(CurveTag::AchievablePoint, 0.0, l);

    for x in grid(0.0, t.r0_min, step) {
        push(CurveTag::Timing, x, l + (t.r1_max - l) * x / t.r0_min);
    }
    for &x in &upper[1..] {
        push(CurveTag::Timing, x, cutset_curve(x));
    }
    push(CurveTag::Star, 0.0, l);
    push(CurveTag::Circle, t.r0_min, t.r1_max);
    Ok(out)
}
