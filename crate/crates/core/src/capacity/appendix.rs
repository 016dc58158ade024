//! Numerical checks of the structural facts behind the unbounded-cascade
//! capacity: monotone decrease in the number of relays, convergence of the
//! listen fractions, the final inequality of the argument, and convergence of
//! finite-cascade capacities to the closed form.

use serde::Serialize;

use super::closed_form::capacity_infinite;
use super::solver::{solve_capacity, DEFAULT_TOL};
use crate::error::{Error, Result};

/// Cascade sizes swept by [`appendix_checks`].
pub const SWEEP_M: [usize; 14] = [1, 2, 3, 4, 5, 6, 8, 11, 16, 21, 31, 41, 61, 101];
/// Largest allowed gap `|C_{100}(q) - C_∞(q)|`.
pub const CONVERGENCE_GAP: f64 = 1e-3;
/// Largest allowed `|p_last(101) - p_last(102)|`.
pub const PROFILE_GAP: f64 = 1e-3;

#[derive(Clone, Debug, Serialize)]
pub struct InequalityCheck {
    pub q: u32,
    /// `(q+1)^{(1 + 1/sqrt(4q+1))/2}`
    pub lhs: f64,
    /// `(1 + sqrt(4q+1)) / 2`
    pub rhs: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct QChecks {
    pub q: u32,
    /// `(m, C_{m-1}(q))` over [`SWEEP_M`].
    pub capacities: Vec<(usize, f64)>,
    /// `(m, |p_last(m) - p_last(m+1)|)` where `p_last` is the listen fraction
    /// of the relay next to the sink.
    pub profile_gaps: Vec<(usize, f64)>,
    pub infinite_gap: f64,
    pub inequality: InequalityCheck,
}

#[derive(Clone, Debug, Serialize)]
pub struct AppendixReport {
    pub per_q: Vec<QChecks>,
    pub failures: Vec<String>,
}

impl AppendixReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn into_result(self) -> Result<Self> {
        if self.passed() {
            Ok(self)
        } else {
            Err(Error::CheckFailed(self.failures.join("; ")))
        }
    }
}

/// `(lhs, rhs)` of `(q+1)^{(1+1/sqrt(4q+1))/2} >= (1+sqrt(4q+1))/2`.
pub fn final_inequality(q: u32) -> InequalityCheck {
    let r = (4.0 * f64::from(q) + 1.0).sqrt();
    InequalityCheck {
        q,
        lhs: f64::from(q + 1).powf(0.5 * (1.0 + 1.0 / r)),
        rhs: 0.5 * (1.0 + r),
    }
}

fn last_relay_listen(m: usize, q: u32) -> Result<f64> {
    let profile = solve_capacity(m, q, DEFAULT_TOL)?.profile;
    Ok(profile.p(m - 1))
}

/// Runs every check for `q = 1..=q_max`; failures are collected in the report.
pub fn appendix_checks(q_max: u32) -> Result<AppendixReport> {
    if q_max < 1 {
        return Err(Error::Domain("q_max must be at least 1".into()));
    }
    let mut per_q = Vec::new();
    let mut failures = Vec::new();
    for q in 1..=q_max {
        let capacities: Vec<(usize, f64)> = SWEEP_M
            .iter()
            .map(|&m| solve_capacity(m, q, DEFAULT_TOL).map(|r| (m, r.value)))
            .collect::<Result<_>>()?;
        for w in capacities.windows(2) {
            if w[1].1 > w[0].1 + 10.0 * DEFAULT_TOL {
                failures.push(format!(
                    "q = {q}: capacity increases from m = {} ({}) to m = {} ({})",
                    w[0].0, w[0].1, w[1].0, w[1].1
                ));
            }
        }

        let mut profile_gaps = Vec::new();
        for &m in SWEEP_M.iter().filter(|&&m| m >= 2) {
            let gap = (last_relay_listen(m, q)? - last_relay_listen(m + 1, q)?).abs();
            profile_gaps.push((m, gap));
        }
        if let Some(&(m, gap)) = profile_gaps.last() {
            if gap >= PROFILE_GAP {
                failures.push(format!("q = {q}: listen-fraction gap {gap} at m = {m}"));
            }
        }

        let far = capacities.last().map(|&(_, c)| c).unwrap_or(f64::NAN);
        let infinite_gap = (far - capacity_infinite(q)).abs();
        if infinite_gap.is_nan() || infinite_gap >= CONVERGENCE_GAP {
            failures.push(format!("q = {q}: |C_100 - C_inf| = {infinite_gap}"));
        }
        if far < capacity_infinite(q) - 10.0 * DEFAULT_TOL {
            failures.push(format!("q = {q}: finite cascade below the unbounded-cascade capacity"));
        }

        let inequality = final_inequality(q);
        if inequality.lhs < inequality.rhs {
            failures.push(format!(
                "q = {q}: inequality fails ({} < {})",
                inequality.lhs, inequality.rhs
            ));
        }
        per_q.push(QChecks {
            q,
            capacities,
            profile_gaps,
            infinite_gap,
            inequality,
        });
    }
    Ok(AppendixReport { per_q, failures })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inequality_at_unit_alphabet() {
        let c = final_inequality(1);
        assert!((c.lhs - 1.651).abs() < 1e-3);
        assert!((c.rhs - 1.618).abs() < 1e-3);
    }

    #[test]
    fn small_sweep_passes() {
        let report = appendix_checks(3).unwrap();
        assert!(report.passed(), "{:?}", report.failures);
        let q2 = &report.per_q[1];
        assert!((q2.capacities[1].1 - 1.1389).abs() < 1e-4);
        assert!((q2.capacities[2].1 - 1.0665).abs() < 1e-4);
    }

    #[test]
    fn table_gap_for_forty_relays() {
        let c40 = solve_capacity(41, 1, DEFAULT_TOL).unwrap().value;
        assert!((c40 - capacity_infinite(1)).abs() <= 4e-4);
    }
}
