//! Maps between message indices and the symbols a node places in the slots
//! its successor listens to.

use num_bigint::BigUint;
use num_integer::binomial;
use num_traits::Pow;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Symbol;

/// How a node turns the message it forwards into `len` payload symbols.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PayloadMap {
    /// Big-endian digits in base `radix`; with `radix = q + 1` the digit `q`
    /// is sent as `N`. Only the source uses this map.
    Digits { len: usize, radix: u32 },
    /// `weight` transmit positions out of `len`, chosen by `w div q^weight`
    /// in lexicographic order of the position sets, carrying the big-endian
    /// digits of `w mod q^weight`.
    Timing { len: usize, weight: usize },
    /// Explicit position sets indexed by the forwarded message; the
    /// transmit symbols carry the node's own message as big-endian digits.
    Patterns { len: usize, patterns: Vec<Vec<usize>> },
}

impl PayloadMap {
    pub fn len(&self) -> usize {
        match self {
            PayloadMap::Digits { len, .. } | PayloadMap::Timing { len, .. } | PayloadMap::Patterns { len, .. } => *len,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of transmit symbols, when it does not depend on the message.
    pub fn weight(&self) -> Option<usize> {
        match self {
            PayloadMap::Digits { .. } => None,
            PayloadMap::Timing { weight, .. } => Some(*weight),
            PayloadMap::Patterns { patterns, .. } => patterns.first().map(Vec::len),
        }
    }

    /// How many forwarded messages the map distinguishes.
    pub fn capacity(&self, q: u32) -> BigUint {
        match self {
            PayloadMap::Digits { len, radix } => Pow::pow(BigUint::from(*radix), *len),
            PayloadMap::Timing { len, weight } => {
                binomial(BigUint::from(*len), BigUint::from(*weight)) * Pow::pow(BigUint::from(q), *weight)
            }
            PayloadMap::Patterns { patterns, .. } => BigUint::from(patterns.len()),
        }
    }

    /// How many own messages ride on the symbols ([`PayloadMap::Patterns`] only).
    /// [`capacity`](Self::capacity) when it fits a `u64`.
    fn capacity_u64(&self, q: u32) -> Option<u64> {
        match self {
            PayloadMap::Digits { len, radix } => u64::from(*radix).checked_pow(*len as u32),
            PayloadMap::Timing { len, weight } => {
                choose_checked(*len, *weight)?.checked_mul(u64::from(q).checked_pow(*weight as u32)?)
            }
            PayloadMap::Patterns { patterns, .. } => Some(patterns.len() as u64),
        }
    }

    pub fn own_capacity(&self, q: u32) -> Option<BigUint> {
        match self {
            PayloadMap::Patterns { patterns, .. } => {
                Some(Pow::pow(BigUint::from(q), patterns.first().map_or(0, Vec::len)))
            }
            _ => None,
        }
    }

    pub(crate) fn validate(&self, q: u32) -> Result<()> {
        match self {
            PayloadMap::Digits { radix, .. } if *radix != q && *radix != q + 1 => Err(Error::InvalidCode(format!(
                "digit radix must be q or q + 1, got {radix}"
            ))),
            PayloadMap::Timing { len, weight } if weight > len => Err(Error::InvalidCode(format!(
                "weight {weight} exceeds payload length {len}"
            ))),
            PayloadMap::Patterns { len, patterns } => {
                let weight = patterns.first().map_or(0, Vec::len);
                for (u, p) in patterns.iter().enumerate() {
                    let sorted = p.windows(2).all(|w| w[0] < w[1]);
                    if p.len() != weight || !sorted || p.iter().any(|&t| t >= *len) {
                        return Err(Error::InvalidCode(format!(
                            "pattern {u} must list {weight} increasing positions below {len}"
                        )));
                    }
                    if patterns[..u].contains(p) {
                        return Err(Error::InvalidCode(format!("pattern {u} repeats an earlier one")));
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Payload symbols for forwarded message `u` and own message `own`.
    pub fn encode(&self, u: u64, own: Option<u64>, q: u32) -> Result<Vec<Symbol>> {
        // capacities beyond u64 fit every index
        let fits = |x: u64, cap: Option<u64>| cap.is_none_or(|c| x < c);
        if !fits(u, self.capacity_u64(q)) {
            return Err(Error::Domain(format!("message {u} does not fit the payload map")));
        }
        match self {
            PayloadMap::Digits { len, radix } => Ok(digits(u, *radix, *len)
                .into_iter()
                .map(|d| Symbol::from_index(d as usize, q))
                .collect()),
            PayloadMap::Timing { len, weight } => {
                let qw = u64::from(q).pow(*weight as u32);
                let positions = unrank_subset(u / qw, *len, *weight);
                Ok(place(*len, &positions, &digits(u % qw, q, *weight)))
            }
            PayloadMap::Patterns { len, patterns } => {
                let own = own.ok_or_else(|| Error::InvalidCode("pattern map needs an own message".into()))?;
                let positions = &patterns[u as usize];
                if !fits(own, u64::from(q).checked_pow(positions.len() as u32)) {
                    return Err(Error::Domain(format!("own message {own} does not fit the symbols")));
                }
                Ok(place(*len, positions, &digits(own, q, positions.len())))
            }
        }
    }

    /// Transmit positions of the payload of `u`, which never depend on the own message.
    pub fn pattern(&self, u: u64, q: u32) -> Result<Vec<usize>> {
        let symbols = self.encode(u, Some(0), q)?;
        Ok((0..symbols.len()).filter(|&t| symbols[t].is_transmit()).collect())
    }

    /// Inverse of [`PayloadMap::encode`]: `(u, own)`.
    pub fn decode(&self, symbols: &[Symbol], q: u32) -> Result<(u64, Option<u64>)> {
        if symbols.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                found: symbols.len(),
            });
        }
        let transmit: Vec<usize> = (0..symbols.len()).filter(|&t| symbols[t].is_transmit()).collect();
        let values: Vec<u32> = transmit
            .iter()
            .map(|&t| match symbols[t] {
                Symbol::Transmit(k) => k,
                Symbol::Quiet => unreachable!(),
            })
            .collect();
        let undecodable = || Error::InvalidWord("payload is not in the codebook".into());
        match self {
            PayloadMap::Digits { radix, .. } => {
                if *radix == q && transmit.len() != symbols.len() {
                    return Err(undecodable());
                }
                let ds: Vec<u32> = symbols.iter().map(|s| s.index(q) as u32).collect();
                Ok((undigits(&ds, *radix).ok_or_else(undecodable)?, None))
            }
            PayloadMap::Timing { len, weight } => {
                if transmit.len() != *weight {
                    return Err(undecodable());
                }
                let qw = u64::from(q).pow(*weight as u32);
                let rank = rank_subset(&transmit, *len);
                let low = undigits(&values, q).ok_or_else(undecodable)?;
                let u = rank
                    .checked_mul(qw)
                    .and_then(|x| x.checked_add(low))
                    .ok_or_else(undecodable)?;
                Ok((u, None))
            }
            PayloadMap::Patterns { patterns, .. } => {
                let u = patterns.iter().position(|p| *p == transmit).ok_or_else(undecodable)?;
                Ok((u as u64, Some(undigits(&values, q).ok_or_else(undecodable)?)))
            }
        }
    }
}

fn place(len: usize, positions: &[usize], values: &[u32]) -> Vec<Symbol> {
    let mut out = vec![Symbol::Quiet; len];
    for (&t, &v) in positions.iter().zip(values) {
        out[t] = Symbol::Transmit(v);
    }
    out
}

/// Big-endian base-`radix` digits of `x`, exactly `len` of them.
fn digits(mut x: u64, radix: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0; len];
    for d in out.iter_mut().rev() {
        *d = (x % u64::from(radix)) as u32;
        x /= u64::from(radix);
    }
    out
}

fn undigits(ds: &[u32], radix: u32) -> Option<u64> {
    ds.iter().try_fold(0u64, |acc, &d| {
        acc.checked_mul(u64::from(radix))?.checked_add(u64::from(d))
    })
}

fn choose_checked(n: usize, k: usize) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k) as u128;
    let mut c: u128 = 1;
    for i in 0..k {
        // exact: c * (n - i) is divisible by i + 1
        c = c.checked_mul(n as u128 - i)? / (i + 1);
        if c > u128::from(u64::MAX) {
            return None;
        }
    }
    Some(c as u64)
}

fn choose(n: usize, k: usize) -> u64 {
    choose_checked(n, k).unwrap_or(u64::MAX)
}

/// Lexicographic rank of an increasing `k`-subset of `0..n`.
pub fn rank_subset(subset: &[usize], n: usize) -> u64 {
    let k = subset.len();
    let mut rank = 0;
    let mut next = 0;
    for (i, &s) in subset.iter().enumerate() {
        for skipped in next..s {
            rank += choose(n - skipped - 1, k - i - 1);
        }
        next = s + 1;
    }
    rank
}

/// The `k`-subset of `0..n` with lexicographic rank `rank`.
pub fn unrank_subset(mut rank: u64, n: usize, k: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut candidate = 0;
    while out.len() < k {
        let remaining = k - out.len();
        let with = choose(n - candidate - 1, remaining - 1);
        if rank < with {
            out.push(candidate);
        } else {
            rank -= with;
        }
        candidate += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_ranking_is_lexicographic() {
        let all: Vec<Vec<usize>> = (0..6).map(|r| unrank_subset(r, 4, 2)).collect();
        assert_eq!(
            all,
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        for (r, s) in all.iter().enumerate() {
            assert_eq!(rank_subset(s, 4), r as u64);
        }
        assert_eq!(unrank_subset(0, 3, 0), Vec::<usize>::new());
    }

    #[test]
    fn relay_map_round_trip() {
        let map = PayloadMap::Timing { len: 4, weight: 1 };
        let w = |u| {
            map.encode(u, None, 2)
                .unwrap()
                .iter()
                .map(|s| s.to_string())
                .collect::<String>()
        };
        assert_eq!(w(1), "1NNN");
        assert_eq!(w(2), "N0NN");
        assert_eq!(w(4), "NN0N");
        for u in 0..8 {
            let s = map.encode(u, None, 2).unwrap();
            assert_eq!(map.decode(&s, 2).unwrap(), (u, None));
        }
        assert!(map.encode(8, None, 2).is_err());
    }

    #[test]
    fn source_digits() {
        let map = PayloadMap::Digits { len: 3, radix: 3 };
        let s = map.encode(5, None, 2).unwrap();
        assert_eq!(s, vec![Symbol::Transmit(0), Symbol::Transmit(1), Symbol::Quiet]);
        assert_eq!(map.decode(&s, 2).unwrap().0, 5);
        let binary = PayloadMap::Digits { len: 3, radix: 2 };
        assert!(binary.decode(&s, 2).is_err());
    }

    #[test]
    fn explicit_patterns() {
        let map = PayloadMap::Patterns {
            len: 4,
            patterns: vec![vec![1, 3], vec![0, 2]],
        };
        let s = map.encode(0, Some(3), 2).unwrap();
        assert_eq!(s.iter().map(|s| s.to_string()).collect::<String>(), "N1N1");
        assert_eq!(map.decode(&s, 2).unwrap(), (0, Some(3)));
        assert_eq!(map.pattern(1, 2).unwrap(), vec![0, 2]);
        let bad = PayloadMap::Patterns {
            len: 4,
            patterns: vec![vec![1, 3], vec![1, 3]],
        };
        assert!(bad.validate(2).is_err());
    }
}
