//! Exhaustive cut-set oracle on full joint input distributions.
//!
//! The network is deterministic, so the cut value of `S ⊆ {v+1, …, m-1}` is
//! `H(Y_S, Y_m | X_S)`. Enumerating every cut on an explicit joint gives an
//! independent check of the closed-form hop entropies and of the claim that
//! the chain cuts `{i, …, m-1}` dominate all others.

use std::collections::HashMap;

use super::profile::{pair_pmf, ListenProfile, PairPmf};
use crate::entropy::entropy;
use crate::error::{Error, Result};
use crate::model::{channel_output, Symbol};

/// Largest cascade the oracle enumerates.
pub const MAX_ORACLE_M: usize = 12;
const DOMINANCE_SLACK: f64 = 1e-12;

/// Explicit joint pmf over `(X_0, …, X_m)`, stored by its support.
#[derive(Clone, Debug)]
pub struct StructuredJoint {
    m: usize,
    q: u32,
    support: Vec<(Vec<Symbol>, f64)>,
}

impl StructuredJoint {
    /// Markov chain `X_m → X_{m-1} → … → X_0` whose adjacent pairs are the
    /// structured pmfs of `profile`.
    pub fn from_profile(profile: &ListenProfile) -> Result<Self> {
        let m = profile.m();
        let q = profile.q();
        let pairs: Vec<PairPmf> = (1..=m).map(|i| pair_pmf(profile, i)).collect::<Result<_>>()?;
        let size = q as usize + 1;
        let mut support = Vec::new();
        // x is filled from the sink side: x[m] first, then x[m-1], ...
        let mut x = vec![Symbol::Quiet; m + 1];
        fn extend(
            node: usize,
            prob: f64,
            x: &mut Vec<Symbol>,
            pairs: &[PairPmf],
            size: usize,
            q: u32,
            out: &mut Vec<(Vec<Symbol>, f64)>,
        ) {
            if node == 0 {
                out.push((x.clone(), prob));
                return;
            }
            // condition X_{node-1} on X_node through pair `node`
            let pair = &pairs[node - 1];
            let own = x[node];
            let marginal = pair.column_marginal()[own.index(q)];
            if marginal <= 0.0 {
                return;
            }
            for r in 0..size {
                let up = Symbol::from_index(r, q);
                let joint = pair.get(up, own);
                if joint <= 0.0 {
                    continue;
                }
                x[node - 1] = up;
                extend(node - 1, prob * joint / marginal, x, pairs, size, q, out);
            }
        }
        extend(m, 1.0, &mut x, &pairs, size, q, &mut support);
        Ok(StructuredJoint { m, q, support })
    }

    /// A joint with the same adjacent-pair marginals as
    /// [`StructuredJoint::from_profile`] that is not Markov: given `X_1 = N`
    /// the symbols `X_0` and `X_2` are coupled. Requires `m >= 3`.
    pub fn coupled(profile: &ListenProfile, strength: f64) -> Result<Self> {
        if profile.m() < 3 {
            return Err(Error::Domain("coupling needs at least two relays".into()));
        }
        if !(0.0..1.0).contains(&strength) {
            return Err(Error::Domain("coupling strength must lie in [0, 1)".into()));
        }
        let markov = Self::from_profile(profile)?;
        let (a, b) = (Symbol::Transmit(0), Symbol::Quiet);
        let (c, d) = (Symbol::Transmit(0), Symbol::Quiet);
        let mut corner = HashMap::new();
        for (x, p) in &markov.support {
            if x[1] == Symbol::Quiet {
                *corner.entry((x[0], x[2])).or_insert(0.0) += p;
            }
        }
        let mass = |u, w| corner.get(&(u, w)).copied().unwrap_or(0.0);
        let floor = [mass(a, c), mass(a, d), mass(b, c), mass(b, d)]
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if floor <= 0.0 {
            return Err(Error::Domain("profile leaves no room for a coupling".into()));
        }
        let eps = strength * floor;
        let support = markov
            .support
            .iter()
            .map(|(x, p)| {
                let sign = if x[1] != Symbol::Quiet {
                    0.0
                } else if (x[0] == a && x[2] == c) || (x[0] == b && x[2] == d) {
                    1.0
                } else if (x[0] == a && x[2] == d) || (x[0] == b && x[2] == c) {
                    -1.0
                } else {
                    0.0
                };
                let scale = if sign == 0.0 {
                    1.0
                } else {
                    1.0 + sign * eps / mass(x[0], x[2])
                };
                (x.clone(), p * scale)
            })
            .collect();
        Ok(StructuredJoint {
            m: markov.m,
            q: markov.q,
            support,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn support(&self) -> &[(Vec<Symbol>, f64)] {
        &self.support
    }

    pub fn total_mass(&self) -> f64 {
        self.support.iter().map(|(_, p)| p).sum()
    }

    /// Marginal of `(X_{i-1}, X_i)` as a row-major `(q+1)²` table.
    pub fn pair_marginal(&self, i: usize) -> Vec<f64> {
        let size = self.q as usize + 1;
        let mut table = vec![0.0; size * size];
        for (x, p) in &self.support {
            table[x[i - 1].index(self.q) * size + x[i].index(self.q)] += p;
        }
        table
    }

    fn received(&self, x: &[Symbol], i: usize) -> Symbol {
        if i == self.m {
            x[self.m - 1]
        } else {
            channel_output(x[i - 1], x[i])
        }
    }

    /// `H(Y_S, Y_m | X_S)` for the cut `cut` (sorted relay indices).
    pub fn cut_value(&self, cut: &[usize]) -> f64 {
        let mut with_outputs: HashMap<Vec<usize>, f64> = HashMap::new();
        let mut inputs_only: HashMap<Vec<usize>, f64> = HashMap::new();
        let q = self.q;
        for (x, p) in &self.support {
            let xs: Vec<usize> = cut.iter().map(|&s| x[s].index(q)).collect();
            let mut key = xs.clone();
            key.extend(cut.iter().map(|&s| self.received(x, s).index(q)));
            key.push(self.received(x, self.m).index(q));
            *with_outputs.entry(key).or_insert(0.0) += p;
            *inputs_only.entry(xs).or_insert(0.0) += p;
        }
        entropy(with_outputs.into_values()) - entropy(inputs_only.into_values())
    }
}

/// One enumerated cut.
#[derive(Clone, Debug, PartialEq)]
pub struct CutValue {
    pub cut: Vec<usize>,
    pub value: f64,
}

/// Result of an exhaustive cut enumeration for one source node.
#[derive(Clone, Debug)]
pub struct CutSetReport {
    pub source: usize,
    pub cuts: Vec<CutValue>,
    pub min_value: f64,
    pub argmin: Vec<usize>,
    /// Minimum over the empty cut and the chain cuts `{i, …, m-1}`.
    pub chain_min: f64,
    /// Cuts whose value falls below that of their chain cut.
    pub dominance_violations: Vec<(Vec<usize>, Vec<usize>)>,
}

impl CutSetReport {
    /// `true` when every cut is dominated by its chain cut and the global
    /// minimum is attained on a chain cut.
    pub fn chain_cuts_suffice(&self) -> bool {
        self.dominance_violations.is_empty() && (self.chain_min - self.min_value).abs() <= DOMINANCE_SLACK
    }
}

/// Enumerates every cut `S ⊆ {v+1, …, m-1}` for source node `v`.
pub fn cutset_min_entropy(joint: &StructuredJoint, v: usize) -> Result<CutSetReport> {
    let m = joint.m();
    if m > MAX_ORACLE_M {
        return Err(Error::TooLarge(format!(
            "cut enumeration limited to m <= {MAX_ORACLE_M}, got {m}"
        )));
    }
    if v >= m {
        return Err(Error::Domain(format!("source node {v} must lie in 0..{m}")));
    }
    let relays: Vec<usize> = (v + 1..m).collect();
    let mut cuts = Vec::with_capacity(1 << relays.len());
    let mut values = HashMap::new();
    for mask in 0usize..(1 << relays.len()) {
        let cut: Vec<usize> = relays
            .iter()
            .enumerate()
            .filter(|(j, _)| mask & (1 << j) != 0)
            .map(|(_, &s)| s)
            .collect();
        let value = joint.cut_value(&cut);
        values.insert(cut.clone(), value);
        cuts.push(CutValue { cut, value });
    }
    let chain = |i: usize| -> Vec<usize> { (i..m).collect() };
    let mut dominance_violations = Vec::new();
    let mut chain_min = values[&Vec::new()];
    for i in v + 1..m {
        chain_min = chain_min.min(values[&chain(i)]);
    }
    for cv in &cuts {
        if let Some(&first) = cv.cut.first() {
            let dominating = chain(first);
            if cv.value < values[&dominating] - DOMINANCE_SLACK {
                dominance_violations.push((cv.cut.clone(), dominating));
            }
        }
    }
    let best = cuts
        .iter()
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .expect("at least the empty cut");
    Ok(CutSetReport {
        source: v,
        min_value: best.value,
        argmin: best.cut.clone(),
        chain_min,
        cuts,
        dominance_violations,
    })
}

/// `min_{v+1 <= i <= m} H(Y_i | X_i)` for the structured pmfs of `profile`.
pub fn pairwise_bound(profile: &ListenProfile, v: usize) -> f64 {
    profile.hop_entropies()[v..]
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}
