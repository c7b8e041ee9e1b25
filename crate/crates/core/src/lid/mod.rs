//! Word-level language identification for Indonesian/English text.
//!
//! A [`LidBackend`] labels the *words* of a sentence. [`classify_tokens`]
//! wraps any backend in the same second pass: words the backend could not
//! decide, plus punctuation and numerals, take the majority language of the
//! decided words in the sentence (ties go to Indonesian).

mod builtin;
mod external;
mod metrics;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textnorm::{Token, TokenKind};

pub use builtin::{LidConfig, LidModel};
pub use external::{ExternalSession, PROTOCOL_HANDSHAKE};
pub use metrics::{lid_eval, ClassMetrics, LidReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LanguageTag {
    #[serde(rename = "ID")]
    Id,
    #[serde(rename = "EN")]
    En,
}

impl LanguageTag {
    pub const ALL: [LanguageTag; 2] = [LanguageTag::Id, LanguageTag::En];

    pub fn as_str(self) -> &'static str {
        match self {
            LanguageTag::Id => "ID",
            LanguageTag::En => "EN",
        }
    }

    pub fn other(self) -> LanguageTag {
        match self {
            LanguageTag::Id => LanguageTag::En,
            LanguageTag::En => LanguageTag::Id,
        }
    }

    pub(crate) fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for LanguageTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LanguageTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ID" => Ok(LanguageTag::Id),
            "EN" => Ok(LanguageTag::En),
            other => Err(Error::format(format!("unknown language label {other:?}"))),
        }
    }
}

/// Which step of the classifier produced a label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelSource {
    Lexicon,
    Ngram,
    Tiebreak,
    External,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaggedWord {
    pub token: Token,
    pub lang: LanguageTag,
    pub confidence: f64,
    pub source: LabelSource,
}

/// First-pass verdict of a backend for one word.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WordVerdict {
    Decided {
        lang: LanguageTag,
        confidence: f64,
        source: LabelSource,
    },
    /// The backend has evidence for both languages; resolved by the sentence
    /// majority.
    Ambiguous,
}

/// Labels the words of one sentence, in order.
pub trait LidBackend {
    fn label_words(&mut self, words: &[&str]) -> Result<Vec<WordVerdict>>;
}

impl<B: LidBackend + ?Sized> LidBackend for &mut B {
    fn label_words(&mut self, words: &[&str]) -> Result<Vec<WordVerdict>> {
        (**self).label_words(words)
    }
}

impl<B: LidBackend + ?Sized> LidBackend for Box<B> {
    fn label_words(&mut self, words: &[&str]) -> Result<Vec<WordVerdict>> {
        (**self).label_words(words)
    }
}

/// Labels every token of a sentence. Output has the same length and order as
/// `tokens`.
pub fn classify_tokens<B: LidBackend + ?Sized>(
    backend: &mut B,
    tokens: &[Token],
) -> Result<Vec<TaggedWord>> {
    let words: Vec<&str> = tokens
        .iter()
        .filter(|t| t.kind == TokenKind::Word)
        .map(|t| t.surface.as_str())
        .collect();
    let verdicts = if words.is_empty() {
        Vec::new()
    } else {
        backend.label_words(&words)?
    };
    if verdicts.len() != words.len() {
        return Err(Error::Protocol(format!(
            "backend returned {} labels for {} words",
            verdicts.len(),
            words.len()
        )));
    }

    let mut counts = [0usize; 2];
    for v in &verdicts {
        if let WordVerdict::Decided { lang, .. } = v {
            counts[lang.index()] += 1;
        }
    }
    let (majority, share) = sentence_majority(counts);

    let mut verdicts = verdicts.into_iter();
    let tagged = tokens
        .iter()
        .map(|token| {
            let verdict = if token.kind == TokenKind::Word {
                verdicts.next().unwrap_or(WordVerdict::Ambiguous)
            } else {
                WordVerdict::Ambiguous
            };
            let (lang, confidence, source) = match verdict {
                WordVerdict::Decided {
                    lang,
                    confidence,
                    source,
                } => (lang, confidence, source),
                WordVerdict::Ambiguous => (majority, share, LabelSource::Tiebreak),
            };
            TaggedWord {
                token: token.clone(),
                lang,
                confidence,
                source,
            }
        })
        .collect();
    Ok(tagged)
}

/// Majority language and its share among decided words. No decided words or
/// an exact tie gives Indonesian at 0.5.
fn sentence_majority(counts: [usize; 2]) -> (LanguageTag, f64) {
    let [id, en] = counts;
    let total = id + en;
    if en > id {
        (LanguageTag::En, en as f64 / total as f64)
    } else if total == 0 {
        (LanguageTag::Id, 0.5)
    } else {
        (LanguageTag::Id, id as f64 / total as f64)
    }
}

/// Lifts subword labels to word labels: each word takes the label of its
/// first subword.
pub fn aggregate_sublabels<S: AsRef<str>>(
    sub_units: &[(S, LanguageTag)],
    word_map: &[usize],
) -> Result<Vec<LanguageTag>> {
    let expected: usize = word_map.iter().sum();
    if expected != sub_units.len() {
        return Err(Error::Shape {
            expected,
            actual: sub_units.len(),
        });
    }
    if word_map.contains(&0) {
        return Err(Error::Input("word with zero sub-units".into()));
    }
    let mut offset = 0;
    Ok(word_map
        .iter()
        .map(|&n| {
            let lang = sub_units[offset].1;
            offset += n;
            lang
        })
        .collect())
}
