//! Listen profiles, the per-hop conditional entropies and the structured
//! adjacent-pair input distributions they induce.

use serde::{Deserialize, Serialize};

use crate::entropy::{entropy, h2};
use crate::error::{Error, Result};
use crate::model::{channel_output, Symbol};

/// Slack applied when validating probabilities produced by floating-point code.
pub(crate) const PROB_SLACK: f64 = 1e-12;

/// Per-node listen fractions `p_1, …, p_m` with `p_m = 1` (the sink).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ListenProfile {
    q: u32,
    p: Vec<f64>,
}

impl ListenProfile {
    /// Builds a profile from the relay listen fractions `p_1, …, p_{m-1}`.
    pub fn new(q: u32, relays: Vec<f64>) -> Result<Self> {
        let mut p = relays;
        p.push(1.0);
        Self::from_full(q, p)
    }

    /// Builds a profile from `p_1, …, p_m`; the last entry must be 1.
    pub fn from_full(q: u32, p: Vec<f64>) -> Result<Self> {
        if q < 1 {
            return Err(Error::InvalidProfile("q must be at least 1".into()));
        }
        match p.last() {
            Some(&last) if (last - 1.0).abs() <= PROB_SLACK => {}
            Some(&last) => {
                return Err(Error::InvalidProfile(format!(
                    "the sink always listens (p_m = 1), got {last}"
                )))
            }
            None => return Err(Error::InvalidProfile("empty profile".into())),
        }
        for (i, &pi) in p.iter().enumerate() {
            if !(-PROB_SLACK..=1.0 + PROB_SLACK).contains(&pi) {
                return Err(Error::InvalidProfile(format!("p_{} = {pi} not in [0, 1]", i + 1)));
            }
        }
        for i in 0..p.len().saturating_sub(1) {
            if p[i] + p[i + 1] < 1.0 - PROB_SLACK {
                return Err(Error::InvalidProfile(format!(
                    "p_{} + p_{} = {} < 1",
                    i + 1,
                    i + 2,
                    p[i] + p[i + 1]
                )));
            }
        }
        let p = p.into_iter().map(|x| x.clamp(0.0, 1.0)).collect();
        Ok(ListenProfile { q, p })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Number of hops (nodes are `0..=m`).
    pub fn m(&self) -> usize {
        self.p.len()
    }

    /// Listen fraction of node `i`, `1 <= i <= m`.
    pub fn p(&self, i: usize) -> f64 {
        self.p[i - 1]
    }

    /// `p_1, …, p_m`.
    pub fn values(&self) -> &[f64] {
        &self.p
    }

    /// Conditional entropies `H(Y_i | X_i)` for `i = 1..=m`.
    pub fn hop_entropies(&self) -> Vec<f64> {
        let q = self.q;
        let mut out = Vec::with_capacity(self.m());
        out.push(h_first_hop(self.p[0], q));
        for i in 1..self.m() {
            out.push(hop_unchecked(self.p[i - 1], self.p[i], q));
        }
        out
    }

    /// `min_i H(Y_i | X_i)` over all hops.
    pub fn bottleneck(&self) -> f64 {
        self.hop_entropies().into_iter().fold(f64::INFINITY, f64::min)
    }
}

/// `H(Y_1 | X_1) = p_1 log2(q + 1)`.
pub fn h_first_hop(p1: f64, q: u32) -> f64 {
    p1 * f64::from(q + 1).log2()
}

/// `H(Y_{i+1} | X_{i+1})` for listen fractions `p_i` (upstream) and `p_next`.
///
/// Requires `p_next >= 1 - p_i`.
pub fn h_hop(p_i: f64, p_next: f64, q: u32) -> Result<f64> {
    if !(0.0..=1.0).contains(&p_i) || !(0.0..=1.0).contains(&p_next) {
        return Err(Error::Domain(format!(
            "listen fractions ({p_i}, {p_next}) not in [0, 1]"
        )));
    }
    if p_next < 1.0 - p_i - PROB_SLACK {
        return Err(Error::Domain(format!("p_next = {p_next} < 1 - p_i = {}", 1.0 - p_i)));
    }
    Ok(hop_unchecked(p_i, p_next, q))
}

pub(crate) fn hop_unchecked(p_i: f64, p_next: f64, q: u32) -> f64 {
    let transmit = 1.0 - p_i;
    let timing = if p_next <= 0.0 {
        0.0
    } else {
        p_next * h2((transmit / p_next).min(1.0))
    };
    transmit * f64::from(q).log2() + timing
}

/// Joint distribution of `(X_{i-1}, X_i)` over `(Q ∪ {N})²`.
///
/// Rows are indexed by `X_{i-1}`, columns by `X_i`; `N` sits at index `q`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairPmf {
    q: u32,
    index: usize,
    table: Vec<f64>,
}

impl PairPmf {
    /// Builds the structured pmf of hop `i` (`1 <= i <= m`) for `profile`.
    pub fn structured(profile: &ListenProfile, i: usize) -> Result<Self> {
        let m = profile.m();
        if i < 1 || i > m {
            return Err(Error::Domain(format!("hop index {i} not in 1..={m}")));
        }
        let q = profile.q();
        let qf = f64::from(q);
        let size = q as usize + 1;
        let quiet = q as usize;
        let p_i = profile.p(i);
        let mut table = vec![0.0; size * size];
        if i == 1 {
            for row in 0..size {
                table[row * size + quiet] = p_i / (qf + 1.0);
            }
            for col in 0..quiet {
                table[quiet * size + col] = (1.0 - p_i) / qf;
            }
        } else {
            let p_prev = profile.p(i - 1);
            for row in 0..quiet {
                table[row * size + quiet] = (1.0 - p_prev) / qf;
            }
            for col in 0..quiet {
                table[quiet * size + col] = (1.0 - p_i) / qf;
            }
            let both_quiet = p_i - (1.0 - p_prev);
            if both_quiet < -PROB_SLACK {
                return Err(Error::InvalidProfile(format!(
                    "negative (N, N) mass {both_quiet} at hop {i}"
                )));
            }
            table[quiet * size + quiet] = both_quiet.max(0.0);
        }
        Ok(PairPmf { q, index: i, table })
    }

    /// Wraps an explicit table (row-major, `(q+1)²` entries).
    pub fn from_table(q: u32, index: usize, table: Vec<f64>) -> Result<Self> {
        let size = q as usize + 1;
        if table.len() != size * size {
            return Err(Error::Domain(format!("expected {} entries", size * size)));
        }
        if table.iter().any(|&x| x < -PROB_SLACK) {
            return Err(Error::Domain("negative probability".into()));
        }
        let total: f64 = table.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Domain(format!("probabilities sum to {total}")));
        }
        Ok(PairPmf { q, index, table })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn get(&self, upstream: Symbol, own: Symbol) -> f64 {
        let size = self.q as usize + 1;
        self.table[upstream.index(self.q) * size + own.index(self.q)]
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    /// Marginal of `X_{i-1}`.
    pub fn row_marginal(&self) -> Vec<f64> {
        let size = self.q as usize + 1;
        (0..size)
            .map(|r| self.table[r * size..(r + 1) * size].iter().sum())
            .collect()
    }

    /// Marginal of `X_i`.
    pub fn column_marginal(&self) -> Vec<f64> {
        let size = self.q as usize + 1;
        (0..size)
            .map(|c| (0..size).map(|r| self.table[r * size + c]).sum())
            .collect()
    }

    /// `H(Y_i | X_i)` by explicit summation over the table.
    pub fn output_conditional_entropy(&self) -> f64 {
        let q = self.q;
        let size = q as usize + 1;
        let mut joint = vec![0.0; size * size];
        for r in 0..size {
            for c in 0..size {
                let x_up = Symbol::from_index(r, q);
                let x_own = Symbol::from_index(c, q);
                let y = channel_output(x_up, x_own);
                joint[y.index(q) * size + c] += self.table[r * size + c];
            }
        }
        entropy(joint) - entropy(self.column_marginal())
    }

    /// Relabels transmission symbols: symbol `k` becomes `perm[k]` on both axes.
    pub fn permute_symbols(&self, perm: &[u32]) -> Result<Self> {
        let q = self.q as usize;
        let mut seen = vec![false; q];
        if perm.len() != q
            || perm
                .iter()
                .any(|&k| (k as usize) >= q || std::mem::replace(&mut seen[k as usize], true))
        {
            return Err(Error::Domain("not a permutation of the transmission alphabet".into()));
        }
        let map = |i: usize| if i == q { q } else { perm[i] as usize };
        let size = q + 1;
        let mut table = vec![0.0; size * size];
        for r in 0..size {
            for c in 0..size {
                table[map(r) * size + map(c)] = self.table[r * size + c];
            }
        }
        Ok(PairPmf {
            q: self.q,
            index: self.index,
            table,
        })
    }
}

/// The structured pmf of hop `i`; see [`PairPmf::structured`].
pub fn pair_pmf(profile: &ListenProfile, i: usize) -> Result<PairPmf> {
    PairPmf::structured(profile, i)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_hop_values() {
        assert!((h_first_hop(0.7185, 2) - 1.1389).abs() < 1e-3);
        assert_eq!(h_first_hop(0.0, 5), 0.0);
        assert!((h_first_hop(1.0, 1) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn hop_values() {
        assert!((h_hop(0.7185, 1.0, 2).unwrap() - 1.1389).abs() < 1e-3);
        assert_eq!(h_hop(1.0, 0.3, 2).unwrap(), 0.0);
        assert_eq!(h_hop(1.0, 0.0, 3).unwrap(), 0.0);
        assert!((h_hop(0.7729, 1.0, 1).unwrap() - 0.7729).abs() < 1e-3);
        assert!(matches!(h_hop(0.3, 0.5, 2), Err(Error::Domain(_))));
    }

    #[test]
    fn hop_increasing_in_next() {
        let mut prev = h_hop(0.6, 0.4, 2).unwrap();
        for k in 1..=60 {
            let p = 0.4 + 0.6 * f64::from(k) / 60.0;
            let v = h_hop(0.6, p, 2).unwrap();
            assert!(v >= prev - 1e-15);
            prev = v;
        }
    }

    #[test]
    fn table_three_layout() {
        let profile = ListenProfile::new(2, vec![0.6]).unwrap();
        let pmf = pair_pmf(&profile, 1).unwrap();
        let n = Symbol::Quiet;
        let t = |k| Symbol::Transmit(k);
        for s in [t(0), t(1), n] {
            assert!((pmf.get(s, n) - 0.2).abs() < 1e-15);
        }
        assert!((pmf.get(n, t(0)) - 0.2).abs() < 1e-15);
        assert!((pmf.get(n, t(1)) - 0.2).abs() < 1e-15);
        assert_eq!(pmf.get(t(0), t(1)), 0.0);
        assert!((pmf.table().iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn table_four_with_silent_upstream() {
        let profile = ListenProfile::new(2, vec![1.0, 0.5]).unwrap();
        let pmf = pair_pmf(&profile, 2).unwrap();
        let rows = pmf.row_marginal();
        assert_eq!(rows[0], 0.0);
        assert_eq!(rows[1], 0.0);
        assert!((rows[2] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pmf_entropy_matches_closed_forms() {
        let profile = ListenProfile::new(3, vec![0.7, 0.6, 0.8]).unwrap();
        let hops = profile.hop_entropies();
        for i in 1..=profile.m() {
            let pmf = pair_pmf(&profile, i).unwrap();
            assert!((pmf.output_conditional_entropy() - hops[i - 1]).abs() < 1e-12);
            assert!((pmf.column_marginal()[3] - profile.p(i)).abs() < 1e-15);
        }
    }

    #[test]
    fn profile_validation() {
        assert!(ListenProfile::new(2, vec![0.3, 0.5]).is_err());
        assert!(ListenProfile::new(2, vec![1.2]).is_err());
        assert!(ListenProfile::from_full(2, vec![0.7, 0.9]).is_err());
        assert!(ListenProfile::new(0, vec![0.5]).is_err());
        let p = ListenProfile::new(1, vec![]).unwrap();
        assert_eq!(p.m(), 1);
        assert_eq!(p.hop_entropies(), vec![1.0]);
    }

    #[test]
    fn permutation_rejects_non_permutations() {
        let profile = ListenProfile::new(3, vec![0.7]).unwrap();
        let pmf = pair_pmf(&profile, 2).unwrap();
        assert!(pmf.permute_symbols(&[0, 0, 1]).is_err());
        assert!(pmf.permute_symbols(&[0, 1]).is_err());
        assert!(pmf.permute_symbols(&[2, 0, 1]).is_ok());
    }
}
