//! Alphabets, the deterministic half-duplex link and symbol-clocked cascade
//! simulation.
//!
//! Every link carries symbols from `{0, …, q-1} ∪ {N}`. A node that emits a
//! transmission symbol hears only itself; a quiet node hears its upstream
//! neighbour verbatim. The sink (node `m`) never transmits.

use std::fmt;

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One channel use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Transmit(u32),
    Quiet,
}

impl Symbol {
    pub fn is_quiet(self) -> bool {
        matches!(self, Symbol::Quiet)
    }

    pub fn is_transmit(self) -> bool {
        !self.is_quiet()
    }

    /// Dense index in `0..=q`, with `Quiet` mapped to `q`.
    pub fn index(self, q: u32) -> usize {
        match self {
            Symbol::Transmit(k) => k as usize,
            Symbol::Quiet => q as usize,
        }
    }

    /// Inverse of [`Symbol::index`].
    pub fn from_index(index: usize, q: u32) -> Symbol {
        if index == q as usize {
            Symbol::Quiet
        } else {
            Symbol::Transmit(index as u32)
        }
    }

    fn check(self, q: u32) -> Result<()> {
        match self {
            Symbol::Transmit(k) if k >= q => Err(Error::SymbolOutOfRange { symbol: k, q }),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Transmit(k) => write!(f, "{k}"),
            Symbol::Quiet => f.write_str("N"),
        }
    }
}

/// Output of link `(i-1, i)` as seen by node `i`.
///
/// A transmitting node hears itself; a quiet node hears `upstream`.
pub fn channel_output(upstream: Symbol, own: Symbol) -> Symbol {
    match own {
        Symbol::Quiet => upstream,
        Symbol::Transmit(_) => own,
    }
}

/// Topology and source set of a relay cascade with nodes `0..=m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawCascadeSpec", into = "RawCascadeSpec")]
pub struct CascadeSpec {
    m: usize,
    q: u32,
    sources: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawCascadeSpec {
    m: usize,
    q: u32,
    sources: Vec<usize>,
}

impl TryFrom<RawCascadeSpec> for CascadeSpec {
    type Error = Error;

    fn try_from(raw: RawCascadeSpec) -> Result<Self> {
        CascadeSpec::new(raw.m, raw.q, raw.sources)
    }
}

impl From<CascadeSpec> for RawCascadeSpec {
    fn from(spec: CascadeSpec) -> Self {
        RawCascadeSpec {
            m: spec.m,
            q: spec.q,
            sources: spec.sources,
        }
    }
}

impl CascadeSpec {
    /// `sources` must be strictly increasing, start at node 0 and exclude the sink.
    pub fn new(m: usize, q: u32, sources: Vec<usize>) -> Result<Self> {
        if m < 1 {
            return Err(Error::InvalidCascade("m must be at least 1".into()));
        }
        if q < 1 {
            return Err(Error::InvalidCascade("q must be at least 1".into()));
        }
        if sources.first() != Some(&0) {
            return Err(Error::InvalidCascade("node 0 must be a source".into()));
        }
        if sources.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidCascade(
                "sources must be listed in strictly increasing order".into(),
            ));
        }
        if sources.iter().any(|&v| v >= m) {
            return Err(Error::InvalidCascade(format!(
                "sources must lie in 0..{m}; the sink cannot be a source"
            )));
        }
        Ok(CascadeSpec { m, q, sources })
    }

    /// Cascade with node 0 as the only source.
    pub fn single_source(m: usize, q: u32) -> Result<Self> {
        Self::new(m, q, vec![0])
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn sources(&self) -> &[usize] {
        &self.sources
    }

    /// Rank of `node` within the source list.
    pub fn alpha(&self, node: usize) -> Option<usize> {
        self.sources.iter().position(|&v| v == node)
    }

    pub fn is_source(&self, node: usize) -> bool {
        self.alpha(node).is_some()
    }

    pub fn relays(&self) -> std::ops::Range<usize> {
        1..self.m
    }
}

/// A block of channel uses.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>, q: u32) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::InvalidWord("words have length at least 1".into()));
        }
        for s in &symbols {
            s.check(q)?;
        }
        Ok(Word(symbols))
    }

    /// The all-quiet word of length `n`.
    pub fn quiet(n: usize) -> Self {
        Word(vec![Symbol::Quiet; n.max(1)])
    }

    /// Parses the textual form over `0`–`9` and `N`.
    pub fn parse(text: &str, q: u32) -> Result<Self> {
        let symbols = text
            .chars()
            .map(|c| match c {
                'N' | 'n' => Ok(Symbol::Quiet),
                d if d.is_ascii_digit() => Ok(Symbol::Transmit(d as u32 - '0' as u32)),
                other => Err(Error::InvalidWord(format!("unexpected character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Word::new(symbols, q)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn get(&self, slot: usize) -> Symbol {
        self.0[slot]
    }

    /// Number of transmission symbols.
    pub fn weight(&self) -> usize {
        self.0.iter().filter(|s| s.is_transmit()).count()
    }

    pub fn transmit_slots(&self) -> Vec<usize> {
        (0..self.len()).filter(|&t| self.0[t].is_transmit()).collect()
    }

    pub fn listen_slots(&self) -> Vec<usize> {
        (0..self.len()).filter(|&t| self.0[t].is_quiet()).collect()
    }

    pub fn is_quiet(&self) -> bool {
        self.weight() == 0
    }

    fn check(&self, q: u32) -> Result<()> {
        self.0.iter().try_for_each(|s| s.check(q))
    }

    /// Textual form, available when every transmission symbol is a single digit.
    pub fn to_text(&self) -> Option<String> {
        self.0
            .iter()
            .map(|s| match s {
                Symbol::Transmit(k) if *k >= 10 => None,
                s => Some(s.to_string()),
            })
            .collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_text() {
            Some(text) => f.write_str(&text),
            None => {
                let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
                write!(f, "[{}]", parts.join(","))
            }
        }
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self.to_text() {
            Some(text) => serializer.serialize_str(&text),
            None => {
                let raw: Vec<Option<u32>> = self
                    .0
                    .iter()
                    .map(|s| match s {
                        Symbol::Transmit(k) => Some(*k),
                        Symbol::Quiet => None,
                    })
                    .collect();
                raw.serialize(serializer)
            }
        }
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Array(Vec<Option<u32>>),
        }
        let symbols = match Raw::deserialize(deserializer)? {
            Raw::Text(text) => Word::parse(&text, u32::MAX).map_err(de::Error::custom)?.0,
            Raw::Array(raw) => raw
                .into_iter()
                .map(|s| s.map_or(Symbol::Quiet, Symbol::Transmit))
                .collect(),
        };
        Word::new(symbols, u32::MAX).map_err(de::Error::custom)
    }
}

fn check_inputs(spec: &CascadeSpec, inputs: &[Word]) -> Result<usize> {
    if inputs.len() != spec.m() {
        return Err(Error::InvalidCascade(format!(
            "expected {} input words (nodes 0..{}), got {}",
            spec.m(),
            spec.m() - 1,
            inputs.len()
        )));
    }
    let n = inputs[0].len();
    for w in inputs {
        if w.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: w.len(),
            });
        }
        w.check(spec.q())?;
    }
    Ok(n)
}

/// Runs one block through the cascade.
///
/// `inputs[k]` is the word sent by node `k` for `k = 0..m-1`; the sink is
/// implicitly quiet. Entry `i - 1` of the result is the word received by
/// node `i`, for `i = 1..=m`.
pub fn simulate_cascade(spec: &CascadeSpec, inputs: &[Word]) -> Result<Vec<Word>> {
    let n = check_inputs(spec, inputs)?;
    let m = spec.m();
    let received = (1..=m)
        .map(|i| {
            let symbols = (0..n)
                .map(|t| {
                    let own = if i == m { Symbol::Quiet } else { inputs[i].get(t) };
                    channel_output(inputs[i - 1].get(t), own)
                })
                .collect();
            Word(symbols)
        })
        .collect();
    Ok(received)
}

/// First `(slot, upstream node)` at which adjacent nodes transmit together.
pub fn first_collision(spec: &CascadeSpec, inputs: &[Word]) -> Result<Option<(usize, usize)>> {
    let n = check_inputs(spec, inputs)?;
    for t in 0..n {
        for i in 1..inputs.len() {
            if inputs[i - 1].get(t).is_transmit() && inputs[i].get(t).is_transmit() {
                return Ok(Some((t, i - 1)));
            }
        }
    }
    Ok(None)
}

/// `true` iff no slot has two adjacent nodes transmitting.
pub fn is_collision_free(spec: &CascadeSpec, inputs: &[Word]) -> Result<bool> {
    Ok(first_collision(spec, inputs)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(text: &str) -> Word {
        Word::parse(text, 2).unwrap()
    }

    #[test]
    fn link_semantics() {
        use Symbol::*;
        assert_eq!(channel_output(Transmit(0), Quiet), Transmit(0));
        assert_eq!(channel_output(Transmit(0), Transmit(1)), Transmit(1));
        assert_eq!(channel_output(Quiet, Quiet), Quiet);
        assert_eq!(channel_output(Quiet, Transmit(1)), Transmit(1));
    }

    #[test]
    fn two_hop_trace() {
        let spec = CascadeSpec::single_source(2, 2).unwrap();
        let out = simulate_cascade(&spec, &[w("00N"), w("N1N")]).unwrap();
        assert_eq!(out, vec![w("01N"), w("N1N")]);
    }

    #[test]
    fn quiet_in_quiet_out() {
        let spec = CascadeSpec::single_source(4, 3).unwrap();
        let inputs = vec![Word::quiet(5); 4];
        let out = simulate_cascade(&spec, &inputs).unwrap();
        assert!(out.iter().all(Word::is_quiet));
    }

    #[test]
    fn direct_pipe_passes_source_word() {
        let spec = CascadeSpec::single_source(1, 2).unwrap();
        let out = simulate_cascade(&spec, &[w("01N1")]).unwrap();
        assert_eq!(out, vec![w("01N1")]);
    }

    #[test]
    fn collisions() {
        let spec = CascadeSpec::single_source(2, 2).unwrap();
        assert!(is_collision_free(&spec, &[w("0"), w("N")]).unwrap());
        assert!(!is_collision_free(&spec, &[w("0"), w("1")]).unwrap());
        assert!(is_collision_free(&spec, &[w("N010"), w("1NNN")]).unwrap());
        assert_eq!(first_collision(&spec, &[w("N01"), w("NN0")]).unwrap(), Some((2, 0)));
    }

    #[test]
    fn rejects_bad_inputs() {
        let spec = CascadeSpec::single_source(2, 2).unwrap();
        assert!(matches!(
            simulate_cascade(&spec, &[w("00"), w("N")]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(simulate_cascade(&spec, &[w("00")]).is_err());
        assert!(Word::parse("02", 2).is_err());
        assert!(Word::parse("", 2).is_err());
        assert!(matches!(
            simulate_cascade(&spec, &[Word::parse("2", 3).unwrap(), w("N")]),
            Err(Error::SymbolOutOfRange { symbol: 2, q: 2 })
        ));
    }

    #[test]
    fn spec_validation_and_json() {
        assert!(CascadeSpec::new(0, 2, vec![0]).is_err());
        assert!(CascadeSpec::new(2, 0, vec![0]).is_err());
        assert!(CascadeSpec::new(2, 2, vec![1]).is_err());
        assert!(CascadeSpec::new(2, 2, vec![0, 2]).is_err());
        assert!(CascadeSpec::new(3, 2, vec![0, 2, 1]).is_err());

        let spec = CascadeSpec::new(3, 2, vec![0, 2]).unwrap();
        assert_eq!(spec.alpha(2), Some(1));
        assert_eq!(spec.alpha(1), None);
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(json, r#"{"m":3,"q":2,"sources":[0,2]}"#);
        let back: CascadeSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);
        assert!(serde_json::from_str::<CascadeSpec>(r#"{"m":3,"q":2,"sources":[3]}"#).is_err());
    }

    #[test]
    fn word_json_forms() {
        let word = w("N010");
        assert_eq!(serde_json::to_string(&word).unwrap(), r#""N010""#);
        let wide = Word::new(vec![Symbol::Transmit(11), Symbol::Quiet], 12).unwrap();
        let json = serde_json::to_string(&wide).unwrap();
        assert_eq!(json, "[11,null]");
        assert_eq!(serde_json::from_str::<Word>(&json).unwrap(), wide);
        assert_eq!(wide.to_string(), "[11,N]");
    }
}
