//! Grid sweep over listen profiles for cascades with up to three sources.

use serde::{Deserialize, Serialize};

use super::{relay_caps, sum_rate_bounds, RateVector, REGION_TOL};
use crate::capacity::ListenProfile;
use crate::error::{Error, Result};
use crate::model::CascadeSpec;

/// Most sources the sampler handles.
pub const MAX_SOURCES: usize = 3;

/// Listen fractions `k / resolution` for every relay, at most `max_profiles` of them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileGrid {
    pub resolution: usize,
    pub max_profiles: usize,
}

impl Default for ProfileGrid {
    fn default() -> Self {
        ProfileGrid {
            resolution: 100,
            max_profiles: 1_000_000,
        }
    }
}

impl ProfileGrid {
    /// Every admissible profile of the grid (`p_i + p_{i+1} >= 1`).
    pub fn profiles(&self, m: usize, q: u32) -> Result<Vec<ListenProfile>> {
        if self.resolution == 0 {
            return Err(Error::Domain("grid resolution must be positive".into()));
        }
        let axis = self.resolution + 1;
        let total = (axis as u128).checked_pow((m - 1) as u32);
        if total.is_none_or(|t| t > self.max_profiles as u128) {
            return Err(Error::TooLarge(format!(
                "{axis}^{} grid profiles exceed the cap of {}",
                m - 1,
                self.max_profiles
            )));
        }
        let r = self.resolution;
        let mut out = Vec::new();
        let mut idx = vec![0usize; m - 1];
        loop {
            let admissible = idx.windows(2).all(|w| w[0] + w[1] >= r);
            if admissible {
                let p = idx.iter().map(|&k| k as f64 / r as f64).collect();
                out.push(ListenProfile::new(q, p)?);
            }
            let mut i = idx.len();
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                idx[i] += 1;
                if idx[i] <= r {
                    break;
                }
                idx[i] = 0;
            }
        }
    }
}

/// Vertices of the rate polytope at one profile.
///
/// Let `j` be the first source with a non-zero rate. Sources before `j` are
/// silent, source `j` is uncapped and every later relay source is capped.
/// For each such `j` and each priority order of the remaining sources, rates
/// are raised greedily in that order.
pub fn profile_vertices(spec: &CascadeSpec, profile: &ListenProfile) -> Result<Vec<RateVector>> {
    let bounds = sum_rate_bounds(spec, profile)?;
    let caps = relay_caps(spec, profile)?;
    let k = bounds.len();
    let mut out = Vec::new();
    for first in 0..k {
        let mut order: Vec<usize> = (first..k).collect();
        loop {
            let mut r = vec![0.0; k];
            for &s in &order {
                let cap = if s > first { caps[s] } else { f64::INFINITY };
                let room = (s..k)
                    .map(|c| bounds[c] - (0..=c).filter(|&j| j != s).map(|j| r[j]).sum::<f64>())
                    .fold(cap, f64::min);
                r[s] = room.max(0.0);
            }
            out.push(RateVector(r));
            if !next_permutation(&mut order) {
                break;
            }
        }
    }
    Ok(out)
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Rate vectors not dominated by any other, within [`REGION_TOL`].
pub fn pareto_frontier(mut points: Vec<RateVector>) -> Vec<RateVector> {
    points.sort_by(|a, b| b.sum().total_cmp(&a.sum()));
    let mut front: Vec<RateVector> = Vec::new();
    for p in points {
        let covered = front.iter().any(|f| {
            f.dominates(&p, REGION_TOL)
                || f.rates()
                    .iter()
                    .zip(p.rates())
                    .all(|(a, b)| (a - b).abs() <= REGION_TOL)
        });
        if !covered {
            front.retain(|f| !p.dominates(f, REGION_TOL));
            front.push(p);
        }
    }
    front
}

/// Pareto frontier of the achievable part over every profile of `grid`.
pub fn general_region_sample(spec: &CascadeSpec, grid: &ProfileGrid) -> Result<Vec<RateVector>> {
    if spec.sources().len() > MAX_SOURCES {
        return Err(Error::Unsupported(format!(
            "the sampler handles at most {MAX_SOURCES} sources, got {}",
            spec.sources().len()
        )));
    }
    let mut points = Vec::new();
    for profile in grid.profiles(spec.m(), spec.q())? {
        points.extend(profile_vertices(spec, &profile)?);
    }
    Ok(pareto_frontier(points))
}
