//! Exact codebook-size bounds for timing codes and their large-block limits.
//!
//! Relay `i` spends `n_i` slots of each length-`n` block transmitting and
//! can therefore produce `q^{n_i} C(n - n_{i+1}, n_i)` distinct words: `q`
//! symbols on each of its `n_i` slots, placed anywhere its successor listens.

use num_bigint::BigUint;
use num_integer::binomial;
use num_traits::{One, Pow, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::capacity::{solve_capacity, ListenProfile, DEFAULT_TOL};
use crate::entropy::{h2, log2_big};
use crate::error::{Error, Result};
use crate::model::CascadeSpec;

/// Largest number of budget vectors [`optimal_budgets`] enumerates.
pub const EXHAUSTIVE_CAP: u64 = 200_000;

/// Transmit-slot counts `n_1, …, n_{m-1}` of the relays for block length `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawBudgets")]
pub struct BudgetVector {
    n: usize,
    budgets: Vec<usize>,
}

#[derive(Deserialize)]
struct RawBudgets {
    n: usize,
    budgets: Vec<usize>,
}

impl TryFrom<RawBudgets> for BudgetVector {
    type Error = Error;

    fn try_from(raw: RawBudgets) -> Result<Self> {
        BudgetVector::new(raw.n, raw.budgets)
    }
}

impl BudgetVector {
    pub fn new(n: usize, budgets: Vec<usize>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidBudget("block length must be positive".into()));
        }
        if let Some((i, &b)) = budgets.iter().enumerate().find(|(_, &b)| b >= n) {
            return Err(Error::InvalidBudget(format!("n_{} = {b} must be below n = {n}", i + 1)));
        }
        for (i, w) in budgets.windows(2).enumerate() {
            if w[0] + w[1] > n {
                return Err(Error::InvalidBudget(format!(
                    "n_{} + n_{} = {} exceeds n = {n}",
                    i + 1,
                    i + 2,
                    w[0] + w[1]
                )));
            }
        }
        Ok(BudgetVector { n, budgets })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of hops; the relays are `1..m`.
    pub fn m(&self) -> usize {
        self.budgets.len() + 1
    }

    pub fn budgets(&self) -> &[usize] {
        &self.budgets
    }

    /// `n_i` for `1 <= i <= m`, with `n_m = 0`.
    pub fn at(&self, i: usize) -> usize {
        assert!(i >= 1 && i <= self.m(), "budget index {i} outside 1..={}", self.m());
        self.budgets.get(i - 1).copied().unwrap_or(0)
    }

    /// The listen fractions `p_i = (n - n_i) / n`.
    pub fn listen_profile(&self, q: u32) -> Result<ListenProfile> {
        let n = self.n as f64;
        ListenProfile::new(q, self.budgets.iter().map(|&b| (n - b as f64) / n).collect())
    }
}

/// Message-set sizes `|W_0|, …, |W_{|V_s|-1}|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MessageSetSizes(pub Vec<BigUint>);

impl MessageSetSizes {
    pub fn new(sizes: Vec<BigUint>) -> Result<Self> {
        if sizes.iter().any(Zero::is_zero) {
            return Err(Error::InvalidBudget("message sets must be non-empty".into()));
        }
        Ok(MessageSetSizes(sizes))
    }

    pub fn product(&self) -> BigUint {
        self.0.iter().product()
    }

    /// Rates `log2 |W_k| / n`.
    pub fn rates(&self, n: usize) -> Vec<f64> {
        self.0.iter().map(|w| log2_big(w) / n as f64).collect()
    }

    /// Sizes as `u64` where they fit.
    pub fn to_u64(&self) -> Option<Vec<u64>> {
        self.0.iter().map(ToPrimitive::to_u64).collect()
    }
}

fn pow(base: u32, exp: usize) -> BigUint {
    Pow::pow(BigUint::from(base), exp)
}

fn choose(n: usize, k: usize) -> BigUint {
    if k > n {
        BigUint::zero()
    } else {
        binomial(BigUint::from(n), BigUint::from(k))
    }
}

/// `q^{n_i} C(n - n_{i+1}, n_i)` for relay `1 <= i <= m - 1`.
pub fn sequences_available(i: usize, bv: &BudgetVector, q: u32) -> Result<BigUint> {
    if i < 1 || i >= bv.m() {
        return Err(Error::InvalidBudget(format!("relay index {i} outside 1..{}", bv.m())));
    }
    let (ni, next) = (bv.at(i), bv.at(i + 1));
    Ok(pow(q, ni) * choose(bv.n - next, ni))
}

fn min_available(from: usize, bv: &BudgetVector, q: u32) -> Result<Option<BigUint>> {
    let mut best: Option<BigUint> = None;
    for i in from..bv.m() {
        let s = sequences_available(i, bv, q)?;
        best = Some(match best {
            Some(b) if b <= s => b,
            _ => s,
        });
    }
    Ok(best)
}

/// Largest source message set, `min{(q+1)^{n-n_1}, min_i q^{n_i} C(n-n_{i+1}, n_i)}`.
pub fn max_w0(bv: &BudgetVector, q: u32) -> BigUint {
    let mut best = pow(q + 1, bv.n - bv.at(1));
    if let Some(relays) = min_available(1, bv, q).expect("relay indices are in range") {
        best = best.min(relays);
    }
    best
}

/// Largest own message set at relay source `v` given the upstream sizes
/// `|W_0|, …, |W_{α(v)-1}|`.
///
/// The bottleneck from `v` to the sink has to carry the combined messages.
/// When some upstream information passes through `v`, its slot pattern is
/// already fixed by that information and only the `q^{n_v}` symbol values
/// remain for the own message.
pub fn max_w_relay(v: usize, prior: &MessageSetSizes, bv: &BudgetVector, q: u32) -> Result<BigUint> {
    if v < 1 || v >= bv.m() {
        return Err(Error::InvalidBudget(format!("relay source {v} outside 1..{}", bv.m())));
    }
    let prior_product = prior.product();
    if prior_product.is_zero() {
        return Err(Error::InvalidBudget("upstream message sets multiply to zero".into()));
    }
    let bottleneck = min_available(v, bv, q)?.expect("v is a relay");
    let mut size = bottleneck / &prior_product;
    if prior_product > BigUint::one() {
        size = size.min(pow(q, bv.at(v)));
    }
    Ok(size)
}

/// Sizes of every message set of `spec`, filled in cascade order.
pub fn message_set_sizes(spec: &CascadeSpec, bv: &BudgetVector) -> Result<MessageSetSizes> {
    if spec.m() != bv.m() {
        return Err(Error::InvalidBudget(format!(
            "budget vector has m = {}, cascade has m = {}",
            bv.m(),
            spec.m()
        )));
    }
    let mut sizes = vec![max_w0(bv, spec.q())];
    for &v in &spec.sources()[1..] {
        let prior = MessageSetSizes(sizes.clone());
        sizes.push(max_w_relay(v, &prior, bv, spec.q())?);
    }
    Ok(MessageSetSizes(sizes))
}

/// `log2 C(n, k) / n`, which tends to `H2(k/n)` for fixed `k/n`.
pub fn binom_entropy_limit(n: usize, k: usize) -> f64 {
    assert!(n >= 1 && k <= n, "need 0 <= k <= n and n >= 1, got n = {n}, k = {k}");
    log2_big(&choose(n, k)) / n as f64
}

/// Large-block rate bounds of a listen profile.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AsymptoticBounds {
    /// Per-hop terms: `p_1 log2(q+1)` followed by
    /// `p̄_i log2 q + p_{i+1} H2(p̄_i / p_{i+1})` for `i = 1..m-1`.
    pub hops: Vec<f64>,
    /// Bound on `R_0`.
    pub r0: f64,
    /// For each relay source `v`: `(v, bound on R_0 + … + R_{α(v)}, bound on R_{α(v)})`.
    /// The second bound is `p̄_v log2 q` and applies when upstream traffic passes `v`.
    pub relays: Vec<(usize, f64, f64)>,
}

/// Evaluates the large-block limits of the counting bounds for `profile`.
pub fn asymptotic_rate_bounds(profile: &ListenProfile, sources: &[usize]) -> Result<AsymptoticBounds> {
    let q = f64::from(profile.q());
    let m = profile.m();
    let p = profile.values();
    let mut hops = vec![p[0] * (q + 1.0).log2()];
    for i in 1..m {
        let bar = 1.0 - p[i - 1];
        let next = p[i];
        if next + 1e-12 < bar {
            return Err(Error::InvalidProfile(format!(
                "p_{} = {next} below 1 - p_{i} = {bar}",
                i + 1
            )));
        }
        let timing = if next <= 0.0 {
            0.0
        } else {
            next * h2((bar / next).min(1.0))
        };
        hops.push(bar * q.log2() + timing);
    }
    let r0 = hops.iter().copied().fold(f64::INFINITY, f64::min);
    let mut relays = Vec::new();
    for &v in sources.iter().filter(|&&v| v != 0) {
        if v >= m {
            return Err(Error::InvalidCascade(format!("relay source {v} outside 1..{m}")));
        }
        let sum = hops[v..].iter().copied().fold(f64::INFINITY, f64::min);
        relays.push((v, sum, (1.0 - p[v - 1]) * q.log2()));
    }
    Ok(AsymptoticBounds { hops, r0, relays })
}

/// Budgets maximising `|W_0|` at block length `n`.
///
/// Small instances are searched exhaustively (ties go to the vector with the
/// smaller leading budgets); larger ones round the capacity-achieving listen
/// fractions.
pub fn optimal_budgets(n: usize, m: usize, q: u32) -> Result<BudgetVector> {
    if n == 0 || m == 0 || q == 0 {
        return Err(Error::InvalidBudget(format!(
            "need n, m, q >= 1, got n = {n}, m = {m}, q = {q}"
        )));
    }
    if m == 1 {
        return BudgetVector::new(n, vec![]);
    }
    if m == 2 {
        return Ok(best_single_relay(n, q));
    }
    let count = (n as u64).checked_pow((m - 1) as u32);
    if count.is_some_and(|c| c <= EXHAUSTIVE_CAP) {
        return exhaustive(n, m, q);
    }
    rounded(n, m, q)
}

fn best_single_relay(n: usize, q: u32) -> BudgetVector {
    // C(n, k) updated incrementally so long blocks stay cheap
    let mut binom = BigUint::one();
    let mut qpow = BigUint::one();
    let mut best = (BigUint::zero(), 0);
    for k in 0..n {
        let size = pow(q + 1, n - k).min(&qpow * &binom);
        if size > best.0 {
            best = (size, k);
        }
        binom = binom * BigUint::from(n - k) / BigUint::from(k + 1);
        qpow *= q;
    }
    BudgetVector {
        n,
        budgets: vec![best.1],
    }
}

fn exhaustive(n: usize, m: usize, q: u32) -> Result<BudgetVector> {
    let mut budgets = vec![0; m - 1];
    let mut best: Option<(BigUint, Vec<usize>)> = None;
    loop {
        if let Ok(bv) = BudgetVector::new(n, budgets.clone()) {
            let size = max_w0(&bv, q);
            if best.as_ref().is_none_or(|(b, _)| size > *b) {
                best = Some((size, budgets.clone()));
            }
        }
        // odometer with the first budget most significant, so ties keep the smaller n_1
        let mut i = budgets.len();
        loop {
            if i == 0 {
                let (_, b) = best.expect("the all-zero vector is valid");
                return BudgetVector::new(n, b);
            }
            i -= 1;
            budgets[i] += 1;
            if budgets[i] < n {
                break;
            }
            budgets[i] = 0;
        }
    }
}

fn rounded(n: usize, m: usize, q: u32) -> Result<BudgetVector> {
    let profile = solve_capacity(m, q, DEFAULT_TOL)?.profile;
    let nf = n as f64;
    let mut budgets: Vec<usize> = (1..m)
        .map(|i| ((1.0 - profile.p(i)) * nf).round().clamp(0.0, nf - 1.0) as usize)
        .collect();
    for i in 1..budgets.len() {
        if budgets[i - 1] + budgets[i] > n {
            budgets[i] = n - budgets[i - 1];
        }
    }
    BudgetVector::new(n, budgets)
}

/// `log2 |W_0| / n` for the best budgets at block length `n`.
pub fn optimal_counting_rate(n: usize, m: usize, q: u32) -> Result<f64> {
    let bv = optimal_budgets(n, m, q)?;
    Ok(log2_big(&max_w0(&bv, q)) / n as f64)
}
