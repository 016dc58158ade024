//! Block-by-block simulation of a timing code through the cascade.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::code::TimingCode;
use crate::error::{Error, Result};
use crate::model::{first_collision, simulate_cascade, Word};

/// One line of the transcript: what `node` sent (or, for the sink, received)
/// in `block` and what it decoded from that block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub block: usize,
    pub node: usize,
    pub word: Word,
    pub decoded: Option<Vec<u64>>,
}

/// Messages decoded by the sink in one block: `w_0(block - m + 1)` followed
/// by the own messages of relay sources injected in `block`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SinkDecode {
    pub block: usize,
    pub messages: Vec<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineRun {
    pub sink: Vec<SinkDecode>,
    pub transcript: Vec<TranscriptEntry>,
}

/// Messages fed into a run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Messages {
    /// `w_0(1), …, w_0(B)`.
    pub w0: Vec<u64>,
    /// Own messages of the relay source, one per block from block `m` on.
    pub own: Vec<u64>,
}

/// Runs blocks `1..=blocks`.
///
/// Every node encodes from its own decoding history, so a faulty code shows
/// up as a collision or a wrong sink decode rather than being masked.
pub fn run_pipeline(code: &TimingCode, messages: &Messages, blocks: usize) -> Result<PipelineRun> {
    simulate(code, messages, blocks, true)
}

fn simulate(code: &TimingCode, messages: &Messages, blocks: usize, record: bool) -> Result<PipelineRun> {
    let spec = &code.spec;
    let m = spec.m();
    let n = code.block_len;
    let relay_source = code.nodes.iter().position(|c| c.own_size.is_some());
    if blocks < m {
        return Err(Error::Domain(format!("need at least m = {m} blocks, got {blocks}")));
    }
    if messages.w0.len() < blocks {
        return Err(Error::Domain(format!("{blocks} blocks need {blocks} source messages")));
    }
    if let Some(bad) = messages.w0.iter().find(|&&w| w >= code.w0_size) {
        return Err(Error::Domain(format!(
            "message {bad} outside W_0 of size {}",
            code.w0_size
        )));
    }
    let active = blocks - m + 1;
    if let Some(v) = relay_source {
        let size = code.nodes[v].own_size.unwrap_or(0);
        if messages.own.len() < active || messages.own.iter().any(|&w| w >= size) {
            return Err(Error::Domain(format!(
                "relay source {v} needs {active} messages below {size}"
            )));
        }
    }

    // known[k][t] = w_0(t) as decoded by node k
    let mut known: Vec<BTreeMap<usize, u64>> = vec![BTreeMap::new(); m];
    let mut run = PipelineRun::default();
    for b in 1..=blocks {
        known[0].insert(b, messages.w0[b - 1]);
        let mut words = Vec::with_capacity(m);
        // slots node k reads from in block b, as node k itself computes them
        let mut read_slots: Vec<Vec<usize>> = vec![Vec::new(); m + 1];
        for k in 0..m {
            let lookup = |t: usize| known[k].get(&t).copied();
            let succ = code.pattern_in_block(k + 1, b, &lookup)?;
            let own_tx = code.pattern_in_block(k, b, &lookup)?;
            read_slots[k] = match (k, &own_tx) {
                (0, _) => Vec::new(),
                (_, Some(tx)) => (0..n).filter(|t| !tx.contains(t)).collect(),
                (_, None) => code.write_slots(k - 1, None),
            };
            if b <= k {
                words.push(Word::quiet(n));
                continue;
            }
            let slots = code.write_slots(k, succ.as_deref());
            let u = lookup(b - k).expect("forwarded message was decoded earlier");
            let own = (Some(k) == relay_source).then(|| messages.own[b - m]);
            words.push(code.word(k, &slots, u, own)?);
        }
        read_slots[m] = (0..n).collect();

        if let Some((slot, upstream)) = first_collision(spec, &words)? {
            return Err(Error::Collision {
                block: b,
                slot,
                upstream,
                downstream: upstream + 1,
            });
        }
        let received = simulate_cascade(spec, &words)?;

        for k in 0..m {
            let mut decoded = None;
            if k > 0 && b >= k {
                let got = code.read(k - 1, &read_slots[k], &received[k - 1]);
                let expected = messages.w0[b - k];
                match got {
                    Ok((u, _)) if u < code.w0_size => {
                        known[k].insert(b - k + 1, u);
                        decoded = Some(vec![u]);
                        if u != expected {
                            return Err(mismatch(k, b, vec![expected], Some(vec![u])));
                        }
                    }
                    Ok((u, _)) => return Err(mismatch(k, b, vec![expected], Some(vec![u]))),
                    Err(_) => return Err(mismatch(k, b, vec![expected], None)),
                }
            }
            if record {
                run.transcript.push(TranscriptEntry {
                    block: b,
                    node: k,
                    word: words[k].clone(),
                    decoded,
                });
            }
        }

        let mut sink_decoded = None;
        if b >= m {
            let mut expected = vec![messages.w0[b - m]];
            if relay_source.is_some() {
                expected.push(messages.own[b - m]);
            }
            let got = code
                .read(m - 1, &read_slots[m], &received[m - 1])
                .map(|(u, own)| std::iter::once(u).chain(own).collect::<Vec<_>>());
            match got {
                Ok(got) if got == expected => {
                    run.sink.push(SinkDecode {
                        block: b,
                        messages: got.clone(),
                    });
                    sink_decoded = Some(got);
                }
                Ok(got) => return Err(mismatch(m, b, expected, Some(got))),
                Err(_) => return Err(mismatch(m, b, expected, None)),
            }
        }
        if record {
            run.transcript.push(TranscriptEntry {
                block: b,
                node: m,
                word: received[m - 1].clone(),
                decoded: sink_decoded,
            });
        }
    }
    Ok(run)
}

fn mismatch(node: usize, block: usize, expected: Vec<u64>, got: Option<Vec<u64>>) -> Error {
    Error::DecodeMismatch {
        node,
        block,
        expected,
        got,
    }
}

/// Runs every message sequence over `blocks` blocks; returns how many were checked.
///
/// Fails with [`Error::TooLarge`] when there are more than `cap` sequences.
pub fn verify_exhaustive(code: &TimingCode, blocks: usize, cap: u64) -> Result<u64> {
    let m = code.spec.m();
    if blocks < m {
        return Err(Error::Domain(format!("need at least m = {m} blocks, got {blocks}")));
    }
    let own_size = code.nodes.iter().find_map(|c| c.own_size);
    let mut radices = vec![code.w0_size; blocks];
    if let Some(s) = own_size {
        radices.extend(std::iter::repeat_n(s, blocks - m + 1));
    }
    let total = radices
        .iter()
        .try_fold(1u64, |acc, &r| acc.checked_mul(r))
        .filter(|&t| t <= cap)
        .ok_or_else(|| Error::TooLarge(format!("more than {cap} message sequences")))?;
    let mut digits = vec![0u64; radices.len()];
    for _ in 0..total {
        let messages = Messages {
            w0: digits[..blocks].to_vec(),
            own: digits[blocks..].to_vec(),
        };
        simulate(code, &messages, blocks, false)?;
        for (d, r) in digits.iter_mut().zip(&radices) {
            *d += 1;
            if *d < *r {
                break;
            }
            *d = 0;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::{build_single_relay_code, build_table2_code};

    #[test]
    fn table1_trace() {
        let code = build_single_relay_code(4, 1, 2).unwrap();
        let messages = Messages {
            w0: vec![1, 2, 4, 7],
            own: vec![],
        };
        let run = run_pipeline(&code, &messages, 4).unwrap();
        let sent = |node| {
            run.transcript
                .iter()
                .filter(|e| e.node == node)
                .map(|e| e.word.to_string())
                .collect::<Vec<_>>()
        };
        assert_eq!(sent(0), ["001N", "N010", "1N00", "11N1"]);
        assert_eq!(sent(1), ["NNNN", "1NNN", "N0NN", "NN0N"]);
        let sink: Vec<_> = run.sink.iter().map(|d| (d.block, d.messages[0])).collect();
        assert_eq!(sink, [(2, 1), (3, 2), (4, 4)]);
    }

    #[test]
    fn table2_exhaustive() {
        let code = build_table2_code().unwrap();
        assert_eq!(verify_exhaustive(&code, 3, 1 << 20).unwrap(), 4 * 4 * 4 * 4);
        assert_eq!(verify_exhaustive(&code, 4, 1 << 20).unwrap(), 4u64.pow(6));
    }

    #[test]
    fn argument_checks() {
        let code = build_single_relay_code(4, 1, 2).unwrap();
        let short = Messages {
            w0: vec![1],
            own: vec![],
        };
        assert!(run_pipeline(&code, &short, 1).is_err());
        assert!(run_pipeline(&code, &short, 2).is_err());
        let big = Messages {
            w0: vec![8, 0],
            own: vec![],
        };
        assert!(run_pipeline(&code, &big, 2).is_err());
        assert!(matches!(verify_exhaustive(&code, 4, 100), Err(Error::TooLarge(_))));
    }
}
