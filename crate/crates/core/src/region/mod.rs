//! Multi-source rate regions.
//!
//! For a listen profile, the sum of the rates injected at or before source
//! `v` is limited by the weakest hop downstream of `v`. The timing code adds
//! one more restriction: a relay source that also forwards traffic may only
//! use the symbol values of its word, not the slot pattern.

pub mod sampler;
pub mod two_source;

use serde::{Deserialize, Serialize};

use crate::capacity::ListenProfile;
use crate::error::{Error, Result};
use crate::model::CascadeSpec;

pub use sampler::{general_region_sample, ProfileGrid};
pub use two_source::{
    two_source_achievable_threshold, two_source_contains, two_source_cutset_boundary, two_source_region_curves,
    CurveTag, RegionPoint, Threshold,
};

/// Tolerance used by membership tests and Pareto dominance.
pub const REGION_TOL: f64 = 1e-9;

/// Rates `(R_0, …, R_{|V_s|-1})` in bits per use, one per source in cascade order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct RateVector(Vec<f64>);

impl RateVector {
    pub fn new(rates: Vec<f64>) -> Result<Self> {
        if let Some(r) = rates.iter().find(|r| !(r.is_finite() && **r >= 0.0)) {
            return Err(Error::Domain(format!("rates must be finite and non-negative, got {r}")));
        }
        Ok(RateVector(rates))
    }

    pub fn zeros(len: usize) -> Self {
        RateVector(vec![0.0; len])
    }

    pub fn rates(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    /// `true` when `self` is at least `other` everywhere and larger somewhere.
    pub fn dominates(&self, other: &RateVector, tol: f64) -> bool {
        let ge = self.0.iter().zip(&other.0).all(|(a, b)| *a >= b - tol);
        let gt = self.0.iter().zip(&other.0).any(|(a, b)| *a > b + tol);
        ge && gt
    }
}

impl TryFrom<Vec<f64>> for RateVector {
    type Error = Error;

    fn try_from(rates: Vec<f64>) -> Result<Self> {
        RateVector::new(rates)
    }
}

impl From<RateVector> for Vec<f64> {
    fn from(rv: RateVector) -> Self {
        rv.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionKind {
    /// The cut-set region: only the sum-rate constraints.
    CutSet,
    /// The part of the capacity region reached by timing codes.
    AchievablePart,
    /// The convex hull of the timing-code region (two-source instance only).
    TimingRegion,
}

/// Sum-rate bounds `min_{v+1 <= i <= m} H(Y_i | X_i)`, one per source of `spec`.
pub fn sum_rate_bounds(spec: &CascadeSpec, profile: &ListenProfile) -> Result<Vec<f64>> {
    check_profile(spec, profile)?;
    let hops = profile.hop_entropies();
    Ok(spec
        .sources()
        .iter()
        .map(|&v| hops[v..].iter().copied().fold(f64::INFINITY, f64::min))
        .collect())
}

/// Own-rate caps `p̄_v log2 q` for the relay sources of `spec`; entry 0 is infinite.
pub fn relay_caps(spec: &CascadeSpec, profile: &ListenProfile) -> Result<Vec<f64>> {
    check_profile(spec, profile)?;
    let log_q = f64::from(spec.q()).log2();
    Ok(spec
        .sources()
        .iter()
        .map(|&v| {
            if v == 0 {
                f64::INFINITY
            } else {
                (1.0 - profile.p(v)) * log_q
            }
        })
        .collect())
}

fn check_profile(spec: &CascadeSpec, profile: &ListenProfile) -> Result<()> {
    if profile.m() != spec.m() || profile.q() != spec.q() {
        return Err(Error::InvalidProfile(format!(
            "profile has m = {}, q = {}; cascade has m = {}, q = {}",
            profile.m(),
            profile.q(),
            spec.m(),
            spec.q()
        )));
    }
    Ok(())
}

/// Whether `rv` lies in the region of kind `kind` at the given profile.
///
/// The relay-source cap is lifted only when every upstream rate is exactly
/// zero; rates are treated as given values, not as results of computation.
/// [`RegionKind::TimingRegion`] is a union over profiles and is only defined
/// for the two-source cascade `m = 2`, `q = 2`, where `profile` is ignored.
pub fn membership(spec: &CascadeSpec, profile: &ListenProfile, rv: &RateVector, kind: RegionKind) -> Result<bool> {
    if rv.len() != spec.sources().len() {
        return Err(Error::LengthMismatch {
            expected: spec.sources().len(),
            found: rv.len(),
        });
    }
    if kind == RegionKind::TimingRegion {
        if spec.m() != 2 || spec.q() != 2 || spec.sources() != [0, 1] {
            return Err(Error::Unsupported(
                "the timing region is available for m = 2, q = 2 with sources {0, 1}".into(),
            ));
        }
        return two_source_contains(rv, kind);
    }
    let bounds = sum_rate_bounds(spec, profile)?;
    let r = rv.rates();
    let mut prefix = 0.0;
    for (k, bound) in bounds.iter().enumerate() {
        prefix += r[k];
        if prefix > bound + REGION_TOL {
            return Ok(false);
        }
        if kind == RegionKind::AchievablePart && k > 0 && r[..k].iter().any(|&x| x != 0.0) {
            let cap = relay_caps(spec, profile)?[k];
            if r[k] > cap + REGION_TOL {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_source() -> CascadeSpec {
        CascadeSpec::new(2, 2, vec![0, 1]).unwrap()
    }

    #[test]
    fn single_source_capacity_point() {
        let spec = two_source();
        let p = ListenProfile::new(2, vec![0.7185]).unwrap();
        // 0.7185 is rounded, so the bound itself is met to about 1e-4
        let bounds = sum_rate_bounds(&spec, &p).unwrap();
        assert!((bounds[0] - 1.1389).abs() < 2e-4);
        let rv_in = RateVector::new(vec![bounds[0], 0.0]).unwrap();
        assert!(membership(&spec, &p, &rv_in, RegionKind::CutSet).unwrap());
        assert!(!membership(&spec, &p, &RateVector::new(vec![1.2, 0.0]).unwrap(), RegionKind::CutSet).unwrap());
    }

    #[test]
    fn relay_only_point_is_achievable() {
        let spec = two_source();
        // the uniform marginal of X_1 is reached with p_1 = 1/3
        let p = ListenProfile::new(2, vec![1.0 / 3.0]).unwrap();
        let star = RateVector::new(vec![0.0, 3f64.log2()]).unwrap();
        assert!(membership(&spec, &p, &star, RegionKind::AchievablePart).unwrap());
        let nudged = RateVector::new(vec![1e-6, 3f64.log2() - 1e-6]).unwrap();
        assert!(membership(&spec, &p, &nudged, RegionKind::CutSet).unwrap());
        assert!(!membership(&spec, &p, &nudged, RegionKind::AchievablePart).unwrap());
    }

    #[test]
    fn outside_at_every_profile() {
        let spec = two_source();
        let rv = RateVector::new(vec![1.2, 0.1]).unwrap();
        for k in 0..=1000 {
            let p = ListenProfile::new(2, vec![f64::from(k) / 1000.0]).unwrap();
            assert!(!membership(&spec, &p, &rv, RegionKind::CutSet).unwrap());
        }
    }

    #[test]
    fn argument_checks() {
        let spec = two_source();
        let p = ListenProfile::new(2, vec![0.5]).unwrap();
        assert!(membership(&spec, &p, &RateVector::zeros(1), RegionKind::CutSet).is_err());
        let other = ListenProfile::new(2, vec![0.5, 0.6]).unwrap();
        assert!(membership(&spec, &other, &RateVector::zeros(2), RegionKind::CutSet).is_err());
        assert!(RateVector::new(vec![-0.1]).is_err());
        assert!(RateVector::new(vec![f64::NAN]).is_err());
        let three = CascadeSpec::new(3, 2, vec![0, 1]).unwrap();
        let p3 = ListenProfile::new(2, vec![0.5, 0.6]).unwrap();
        assert!(membership(&three, &p3, &RateVector::zeros(2), RegionKind::TimingRegion).is_err());
        assert!(membership(&three, &p3, &RateVector::zeros(2), RegionKind::AchievablePart).unwrap());
    }
}
