//! Sentence-level frontend: normalize, tokenize, label, phonemize.
//!
//! [`FrontendOutput`] is what a downstream acoustic model consumes. The
//! phone stream `phones_flat` has `#` between consecutive words and `_` at
//! every punctuation token. Per-word language tags are annotations for
//! inspection; nothing in the output is a language-conditioning input.

use std::collections::BTreeMap;
use std::sync::mpsc;
use std::thread;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::g2p::{G2p, PhoneInventory, BOUNDARY, PAUSE};
use crate::lid::{classify_tokens, LanguageTag, LidBackend};
use crate::textnorm::{normalize, tokenize, TokenKind};

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WordEntry {
    pub surface: String,
    pub lang: LanguageTag,
    pub phones: Vec<String>,
    pub confidence: f64,
    pub fallback: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrontendOutput {
    pub version: String,
    pub text: String,
    pub words: Vec<WordEntry>,
    pub phones_flat: Vec<String>,
}

impl FrontendOutput {
    pub fn empty(text: String) -> Self {
        FrontendOutput {
            version: FORMAT_VERSION.to_string(),
            text,
            words: Vec::new(),
            phones_flat: Vec::new(),
        }
    }

    /// `phones_flat` with pauses removed must equal the word phone lists
    /// joined by the boundary marker.
    pub fn boundaries_consistent(&self) -> bool {
        let mut expected: Vec<&str> = Vec::new();
        for (i, w) in self.words.iter().enumerate() {
            if i > 0 {
                expected.push(BOUNDARY);
            }
            expected.extend(w.phones.iter().map(String::as_str));
        }
        let actual: Vec<&str> = self
            .phones_flat
            .iter()
            .map(String::as_str)
            .filter(|p| *p != PAUSE)
            .collect();
        actual == expected
    }

    /// Checks the version, the phone symbols and the boundary invariant.
    pub fn validate(&self, inv: &PhoneInventory) -> Result<()> {
        if self.version != FORMAT_VERSION {
            return Err(Error::format(format!(
                "unsupported version {:?}",
                self.version
            )));
        }
        for w in &self.words {
            if let Some(p) = w.phones.iter().find(|p| !inv.contains(p)) {
                return Err(Error::format(format!(
                    "word {:?} has phone {p:?} outside the inventory",
                    w.surface
                )));
            }
        }
        if let Some(p) = self
            .phones_flat
            .iter()
            .find(|p| !inv.contains(p) && *p != BOUNDARY && *p != PAUSE)
        {
            return Err(Error::format(format!("phone {p:?} outside the inventory")));
        }
        if !self.boundaries_consistent() {
            return Err(Error::format("phones_flat does not match the word phones"));
        }
        Ok(())
    }
}

/// Runs the full frontend on one raw sentence.
pub fn phonemize_sentence<B: LidBackend + ?Sized>(
    raw: &str,
    g2p: &G2p,
    backend: &mut B,
) -> Result<FrontendOutput> {
    let text = normalize(raw);
    let tokens = tokenize(&text);
    if tokens.is_empty() {
        return Ok(FrontendOutput::empty(text));
    }
    let tagged = classify_tokens(backend, &tokens)?;
    let mut out = FrontendOutput::empty(text);
    for tw in tagged {
        if tw.token.kind == TokenKind::Punct {
            out.phones_flat.push(PAUSE.to_string());
            continue;
        }
        let seq = match tw.token.kind {
            TokenKind::Numeric => g2p.phonemize_numeric(&tw.token.surface)?,
            _ => g2p.phonemize_word(&tw.token.surface, tw.lang)?,
        };
        if !out.words.is_empty() {
            out.phones_flat.push(BOUNDARY.to_string());
        }
        out.phones_flat.extend(seq.phones.iter().cloned());
        out.words.push(WordEntry {
            surface: tw.token.surface,
            lang: tw.lang,
            phones: seq.phones,
            confidence: tw.confidence,
            fallback: seq.fallback,
        });
    }
    Ok(out)
}

/// One JSON object, keys in the order version, text, words, phones_flat.
pub fn serialize(out: &FrontendOutput) -> String {
    serde_json::to_string(out).expect("frontend output is always serializable")
}

pub fn deserialize(line: &str, inv: &PhoneInventory) -> Result<FrontendOutput> {
    let out: FrontendOutput =
        serde_json::from_str(line).map_err(|e| Error::format(e.to_string()))?;
    out.validate(inv)?;
    Ok(out)
}

/// Phonemizes a stream of sentences with `backends.len()` workers and hands
/// serialized lines to `sink` in input order.
///
/// Each worker owns one backend. Lines are dealt round-robin, so a given
/// line always goes to the same worker for a given worker count.
pub fn run_batch<I, B, S>(lines: I, g2p: &G2p, backends: Vec<B>, mut sink: S) -> Result<()>
where
    I: IntoIterator<Item = std::io::Result<String>>,
    B: LidBackend + Send,
    S: FnMut(String) -> Result<()>,
{
    if backends.is_empty() {
        return Err(Error::Config("batch needs at least one worker".into()));
    }
    if backends.len() == 1 {
        let mut backend = backends.into_iter().next().expect("one backend");
        for line in lines {
            sink(serialize(&phonemize_sentence(&line?, g2p, &mut backend)?))?;
        }
        return Ok(());
    }

    thread::scope(|scope| {
        let (result_tx, result_rx) = mpsc::channel::<(usize, Result<String>)>();
        let mut work_txs = Vec::with_capacity(backends.len());
        for mut backend in backends {
            let (tx, rx) = mpsc::sync_channel::<(usize, String)>(64);
            work_txs.push(tx);
            let result_tx = result_tx.clone();
            scope.spawn(move || {
                for (idx, line) in rx {
                    let res = phonemize_sentence(&line, g2p, &mut backend).map(|o| serialize(&o));
                    if result_tx.send((idx, res)).is_err() {
                        break;
                    }
                }
            });
        }
        drop(result_tx);

        let mut pending: BTreeMap<usize, Result<String>> = BTreeMap::new();
        let mut next = 0usize;
        let mut drain = |pending: &mut BTreeMap<usize, Result<String>>, next: &mut usize| {
            while let Some(res) = pending.remove(next) {
                sink(res?)?;
                *next += 1;
            }
            Ok::<(), Error>(())
        };

        let workers = work_txs.len();
        for (idx, line) in lines.into_iter().enumerate() {
            let line = line?;
            if work_txs[idx % workers].send((idx, line)).is_err() {
                break;
            }
            while let Ok((i, res)) = result_rx.try_recv() {
                pending.insert(i, res);
            }
            drain(&mut pending, &mut next)?;
        }
        drop(work_txs);
        for (i, res) in result_rx {
            pending.insert(i, res);
            drain(&mut pending, &mut next)?;
        }
        drain(&mut pending, &mut next)
    })
}
