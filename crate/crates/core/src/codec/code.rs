//! Pipelined timing codes for a cascade.
//!
//! In block `b` node `k` forwards `w_0(b - k)`. It writes its payload into
//! the slots its successor listens to in the same block; the successor's
//! slot pattern is a function of messages node `k` decoded earlier, so node
//! `k` can always work it out. While node `k + 1` is still quiet (blocks
//! `b <= k + 1`) the payload goes into the first slots of the block. Node
//! `m - 1` writes into all `n` slots since the sink always listens.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::payload::PayloadMap;
use crate::combinatorics::{max_w0, BudgetVector};
use crate::entropy::log2_big;
use crate::error::{Error, Result};
use crate::model::{CascadeSpec, Symbol, Word};

/// Encoder of one node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeCode {
    pub node: usize,
    pub payload: PayloadMap,
    /// Size of the node's own message set, for relay sources.
    pub own_size: Option<u64>,
}

/// A complete code: one encoder per transmitting node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimingCode {
    pub spec: CascadeSpec,
    pub block_len: usize,
    /// `|W_0|`.
    pub w0_size: u64,
    /// Encoders of nodes `0..m`.
    pub nodes: Vec<NodeCode>,
}

impl TimingCode {
    pub fn new(spec: CascadeSpec, block_len: usize, w0_size: u64, nodes: Vec<NodeCode>) -> Result<Self> {
        let code = TimingCode {
            spec,
            block_len,
            w0_size,
            nodes,
        };
        code.validate()?;
        Ok(code)
    }

    fn validate(&self) -> Result<()> {
        let m = self.spec.m();
        let q = self.spec.q();
        let n = self.block_len;
        if n == 0 || self.w0_size == 0 {
            return Err(Error::InvalidCode("block length and |W_0| must be positive".into()));
        }
        if self.nodes.len() != m || self.nodes.iter().enumerate().any(|(k, c)| c.node != k) {
            return Err(Error::InvalidCode(format!("need encoders for nodes 0..{m} in order")));
        }
        for (k, c) in self.nodes.iter().enumerate() {
            c.payload.validate(q)?;
            let expected = if k + 1 == m { n } else { n - self.budget(k + 1)? };
            if c.payload.len() != expected {
                return Err(Error::InvalidCode(format!(
                    "node {k} payload has length {}, its successor listens in {expected} slots",
                    c.payload.len()
                )));
            }
            if k > 0 && matches!(c.payload, PayloadMap::Digits { .. }) {
                return Err(Error::InvalidCode(format!(
                    "relay {k} must keep a fixed transmit count"
                )));
            }
            if c.payload.capacity(q) < BigUint::from(self.w0_size) {
                return Err(Error::InvalidCode(format!(
                    "node {k} cannot represent |W_0| = {}",
                    self.w0_size
                )));
            }
            let is_source = k > 0 && self.spec.is_source(k);
            match (&c.payload, c.own_size, is_source) {
                (PayloadMap::Patterns { .. }, Some(size), true) => {
                    if k + 1 != m {
                        return Err(Error::Unsupported(
                            "relay sources are supported only next to the sink".into(),
                        ));
                    }
                    if size == 0 || c.payload.own_capacity(q).unwrap_or_default() < BigUint::from(size) {
                        return Err(Error::InvalidCode(format!("own message set of node {k} does not fit")));
                    }
                }
                (PayloadMap::Patterns { .. }, _, _) | (_, Some(_), _) | (_, None, true) => {
                    return Err(Error::InvalidCode(format!(
                        "node {k}: own messages need a pattern map at a relay source"
                    )));
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Transmit count `n_k` of relay `k`, or 0 for the sink.
    pub fn budget(&self, k: usize) -> Result<usize> {
        if k == self.spec.m() {
            return Ok(0);
        }
        self.nodes[k]
            .payload
            .weight()
            .ok_or_else(|| Error::InvalidCode(format!("relay {k} has no fixed transmit count")))
    }

    pub fn budgets(&self) -> Result<BudgetVector> {
        let b = (1..self.spec.m()).map(|k| self.budget(k)).collect::<Result<_>>()?;
        BudgetVector::new(self.block_len, b)
    }

    /// Own message set sizes in source order, starting with `|W_0|`.
    pub fn message_sizes(&self) -> Vec<u64> {
        let mut out = vec![self.w0_size];
        out.extend(self.nodes.iter().filter_map(|c| c.own_size));
        out
    }

    /// Rates `log2 |W_k| / n`.
    pub fn rates(&self) -> Vec<f64> {
        self.message_sizes()
            .iter()
            .map(|&s| (s as f64).log2() / self.block_len as f64)
            .collect()
    }

    /// Slots where node `k` writes its payload, given the transmit slots of
    /// node `k + 1` (`None` while that node is quiet or is the sink).
    pub fn write_slots(&self, k: usize, successor: Option<&[usize]>) -> Vec<usize> {
        let len = self.nodes[k].payload.len();
        match successor {
            Some(tx) => (0..self.block_len).filter(|t| !tx.contains(t)).collect(),
            None => (0..len).collect(),
        }
    }

    /// Transmit slots of node `j` in block `b`, from the forwarded messages
    /// `w_0(b - j), w_0(b - j - 1), …` supplied by `known(t) = w_0(t)`.
    pub fn pattern_in_block(
        &self,
        j: usize,
        b: usize,
        known: &dyn Fn(usize) -> Option<u64>,
    ) -> Result<Option<Vec<usize>>> {
        if j >= self.spec.m() || b <= j {
            return Ok(None);
        }
        let succ = self.pattern_in_block(j + 1, b, known)?;
        let slots = self.write_slots(j, succ.as_deref());
        let u = known(b - j).ok_or_else(|| Error::InvalidCode(format!("w_0({}) unknown", b - j)))?;
        let local = self.nodes[j].payload.pattern(u, self.spec.q())?;
        Ok(Some(local.into_iter().map(|t| slots[t]).collect()))
    }

    /// Word of node `k` for forwarded message `u` (and own message), writing into `slots`.
    pub fn word(&self, k: usize, slots: &[usize], u: u64, own: Option<u64>) -> Result<Word> {
        let payload = self.nodes[k].payload.encode(u, own, self.spec.q())?;
        let mut symbols = vec![Symbol::Quiet; self.block_len];
        for (&t, s) in slots.iter().zip(payload) {
            symbols[t] = s;
        }
        Word::new(symbols, self.spec.q())
    }

    /// Reads node `k`'s payload back from `received` at `slots`.
    pub fn read(&self, k: usize, slots: &[usize], received: &Word) -> Result<(u64, Option<u64>)> {
        let symbols: Vec<Symbol> = slots.iter().map(|&t| received.get(t)).collect();
        self.nodes[k].payload.decode(&symbols, self.spec.q())
    }

    /// `log2 |W_0| / n`.
    pub fn source_rate(&self) -> f64 {
        (self.w0_size as f64).log2() / self.block_len as f64
    }
}

/// `|W_0|` of the single-relay code, `min{(q+1)^{n-n_1}, q^{n_1} C(n, n_1)}`.
fn single_relay_size(n: usize, n1: usize, q: u32) -> Result<BigUint> {
    if q < 1 {
        return Err(Error::Domain("q must be at least 1".into()));
    }
    if n1 == 0 || n1 >= n {
        return Err(Error::InvalidBudget(format!(
            "the relay needs 1 <= n_1 < n, got n = {n}, n_1 = {n1}"
        )));
    }
    let source = PayloadMap::Digits {
        len: n - n1,
        radix: q + 1,
    };
    let relay = PayloadMap::Timing { len: n, weight: n1 };
    Ok(source.capacity(q).min(relay.capacity(q)))
}

/// The single-relay timing code with block length `n` and `n_1` relay
/// transmissions per block.
///
/// The relay maps `w` to the `(w div q^{n_1})`-th position set and the
/// digits of `w mod q^{n_1}`. The source writes big-endian digits into the
/// relay's listen slots, in base `q` when `q^{n-n_1}` words suffice and in
/// base `q + 1` (with `N` as a digit) otherwise.
pub fn build_single_relay_code(n: usize, n1: usize, q: u32) -> Result<TimingCode> {
    let size = single_relay_size(n, n1, q)?;
    let w0_size = size
        .to_u64()
        .ok_or_else(|| Error::TooLarge(format!("|W_0| = {size} does not fit a 64-bit index")))?;
    let binary_fits = BigUint::from(q).pow((n - n1) as u32) >= size;
    let radix = if binary_fits { q } else { q + 1 };
    let spec = CascadeSpec::single_source(2, q)?;
    TimingCode::new(
        spec,
        n,
        w0_size,
        vec![
            NodeCode {
                node: 0,
                payload: PayloadMap::Digits { len: n - n1, radix },
                own_size: None,
            },
            NodeCode {
                node: 1,
                payload: PayloadMap::Timing { len: n, weight: n1 },
                own_size: None,
            },
        ],
    )
}

/// `log2 |W_0| / n` of the single-relay code, exact for any block length.
pub fn counting_rate(n: usize, n1: usize, q: u32) -> Result<f64> {
    Ok(log2_big(&single_relay_size(n, n1, q)?) / n as f64)
}

/// The three-node, two-source code with `n = 4`, `n_1 = 1`, `n_2 = 2`, `q = 2`.
///
/// Node 2 picks one of four slot pairs from `w_0` and carries its own
/// `w_1` in the two binary symbols. Node 1 and the source each send one
/// symbol in the first two or three slots their successor listens to.
pub fn build_table2_code() -> Result<TimingCode> {
    let spec = CascadeSpec::new(3, 2, vec![0, 2])?;
    TimingCode::new(
        spec,
        4,
        4,
        vec![
            NodeCode {
                node: 0,
                payload: PayloadMap::Timing { len: 3, weight: 1 },
                own_size: None,
            },
            NodeCode {
                node: 1,
                payload: PayloadMap::Timing { len: 2, weight: 1 },
                own_size: None,
            },
            NodeCode {
                node: 2,
                payload: PayloadMap::Patterns {
                    len: 4,
                    // NBNB, BNBN, NBBN, BNNB
                    patterns: vec![vec![1, 3], vec![0, 2], vec![1, 2], vec![0, 3]],
                },
                own_size: Some(4),
            },
        ],
    )
}

/// Checks that the code meets the size bound for its budgets.
pub fn matches_counting_bound(code: &TimingCode) -> Result<bool> {
    let bv = code.budgets()?;
    Ok(BigUint::from(code.w0_size) == max_w0(&bv, code.spec.q()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_relay_sizes() {
        let code = build_single_relay_code(4, 1, 2).unwrap();
        assert_eq!(code.w0_size, 8);
        assert_eq!(code.source_rate(), 0.75);
        assert!(matches!(code.nodes[0].payload, PayloadMap::Digits { radix: 2, .. }));
        assert_eq!(build_single_relay_code(2, 1, 1).unwrap().w0_size, 2);
        assert!(build_single_relay_code(4, 0, 2).is_err());
        assert!(build_single_relay_code(4, 4, 2).is_err());
        assert!(matches_counting_bound(&code).unwrap());
        let ternary = build_single_relay_code(6, 3, 2).unwrap();
        assert!(matches!(ternary.nodes[0].payload, PayloadMap::Digits { radix: 3, .. }));
    }

    #[test]
    fn counting_rates() {
        assert_eq!(counting_rate(4, 1, 2).unwrap(), 0.75);
        assert!(counting_rate(1024, 288, 2).unwrap() >= 1.10);
    }

    #[test]
    fn table2_node_words() {
        let code = build_table2_code().unwrap();
        let w2 = code.word(2, &[0, 1, 2, 3], 0, Some(3)).unwrap();
        assert_eq!(w2.to_string(), "N1N1");
        // pattern a = NBNB leaves slots 0 and 2 to node 1
        let slots = code.write_slots(1, Some(&[1, 3]));
        assert_eq!(code.word(1, &slots, 2, None).unwrap().to_string(), "NN0N");
        assert_eq!(code.rates().iter().sum::<f64>(), 1.0);
        assert!(matches_counting_bound(&code).unwrap());
    }

    #[test]
    fn rejects_inconsistent_codes() {
        let mut code = build_table2_code().unwrap();
        code.nodes[1].payload = PayloadMap::Timing { len: 3, weight: 1 };
        assert!(code.validate().is_err());
        let mut code = build_table2_code().unwrap();
        code.nodes[2].own_size = None;
        assert!(code.validate().is_err());
        let mut code = build_table2_code().unwrap();
        code.w0_size = 5;
        assert!(code.validate().is_err());
    }
}
