//! Semantically unpredictable sentences from slotted templates.
//!
//! A template is a space-separated list of parts. `{ID:noun}` is a slot
//! filled from the Indonesian `noun` list; a plain word is fixed text in
//! Indonesian, and `word/EN` is fixed text in English.

use std::collections::{BTreeMap, HashSet};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::g2p::content_lines;
use crate::lid::LanguageTag;
use crate::rng;

/// Attempts per sentence before giving up on finding an unseen one.
pub const MAX_RETRIES: usize = 1000;

const SUS_STREAM: u64 = 0x5005;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Part {
    Slot { lang: LanguageTag, name: String },
    Fixed { word: String, lang: LanguageTag },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Template {
    source: String,
    parts: Vec<Part>,
}

impl Template {
    pub fn parse(text: &str) -> Result<Template> {
        let mut parts = Vec::new();
        for piece in text.split_whitespace() {
            if let Some(inner) = piece.strip_prefix('{') {
                let inner = inner
                    .strip_suffix('}')
                    .ok_or_else(|| Error::Template(format!("unclosed slot {piece:?}")))?;
                let (lang, name) = inner
                    .split_once(':')
                    .ok_or_else(|| Error::Template(format!("slot {piece:?} lacks LANG:name")))?;
                let lang = lang
                    .parse()
                    .map_err(|_| Error::Template(format!("slot {piece:?} has unknown language")))?;
                if name.is_empty() {
                    return Err(Error::Template(format!("slot {piece:?} has no name")));
                }
                parts.push(Part::Slot {
                    lang,
                    name: name.to_string(),
                });
            } else if piece.contains(['{', '}']) {
                return Err(Error::Template(format!("stray brace in {piece:?}")));
            } else {
                let (word, lang) = match piece.rsplit_once('/') {
                    Some((w, "EN")) => (w, LanguageTag::En),
                    Some((w, "ID")) => (w, LanguageTag::Id),
                    _ => (piece, LanguageTag::Id),
                };
                parts.push(Part::Fixed {
                    word: word.to_string(),
                    lang,
                });
            }
        }
        if parts.is_empty() {
            return Err(Error::Template("empty template".into()));
        }
        Ok(Template {
            source: text.to_string(),
            parts,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// Labels every filled sentence of this template will carry.
    pub fn labels(&self) -> Vec<LanguageTag> {
        self.parts
            .iter()
            .map(|p| match p {
                Part::Slot { lang, .. } | Part::Fixed { lang, .. } => *lang,
            })
            .collect()
    }
}

/// Word lists keyed by language and slot name.
#[derive(Debug, Clone, Default)]
pub struct SusLexicon {
    lists: BTreeMap<(LanguageTag, String), Vec<String>>,
}

impl SusLexicon {
    /// Reads `LANG<TAB>slot<TAB>word` lines.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lex = SusLexicon::default();
        for (lineno, line) in content_lines(text) {
            let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
            let [lang, slot, word] = cols[..] else {
                return Err(Error::format_at(lineno, "expected LANG<TAB>slot<TAB>word"));
            };
            let lang: LanguageTag = lang.parse().map_err(|_| {
                Error::format_at(lineno, format!("unknown language {lang:?}"))
            })?;
            if slot.is_empty() || word.is_empty() || word.contains(' ') {
                return Err(Error::format_at(lineno, "slot and word must be non-empty single words"));
            }
            lex.insert(lang, slot, word);
        }
        Ok(lex)
    }

    pub fn insert(&mut self, lang: LanguageTag, slot: &str, word: &str) {
        self.lists
            .entry((lang, slot.to_string()))
            .or_default()
            .push(word.to_string());
    }

    /// Registers a slot with no words, which makes templates using it fail.
    pub fn declare(&mut self, lang: LanguageTag, slot: &str) {
        self.lists.entry((lang, slot.to_string())).or_default();
    }

    fn words(&self, lang: LanguageTag, slot: &str) -> &[String] {
        self.lists
            .get(&(lang, slot.to_string()))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SusSentence {
    pub template: usize,
    pub tokens: Vec<String>,
    pub labels: Vec<LanguageTag>,
}

impl SusSentence {
    pub fn text(&self) -> String {
        self.tokens.join(" ")
    }
}

/// Draws `n` distinct sentences. A repeated draw is discarded and redrawn,
/// at most [`MAX_RETRIES`] times per sentence.
pub fn gen_sus(
    templates: &[Template],
    lexicon: &SusLexicon,
    n: usize,
    seed: u64,
) -> Result<Vec<SusSentence>> {
    if templates.is_empty() {
        return Err(Error::Template("no templates".into()));
    }
    for t in templates {
        for part in &t.parts {
            if let Part::Slot { lang, name } = part {
                if lexicon.words(*lang, name).is_empty() {
                    return Err(Error::Template(format!(
                        "slot {{{lang}:{name}}} has no words"
                    )));
                }
            }
        }
    }

    let mut rng = rng::stream(seed, &[SUS_STREAM]);
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut found = None;
        for _ in 0..MAX_RETRIES {
            let ti = rng.random_range(0..templates.len());
            let tokens: Vec<String> = templates[ti]
                .parts
                .iter()
                .map(|p| match p {
                    Part::Fixed { word, .. } => word.clone(),
                    Part::Slot { lang, name } => {
                        let words = lexicon.words(*lang, name);
                        words[rng.random_range(0..words.len())].clone()
                    }
                })
                .collect();
            if seen.insert(tokens.join(" ").to_lowercase()) {
                found = Some(SusSentence {
                    template: ti,
                    labels: templates[ti].labels(),
                    tokens,
                });
                break;
            }
        }
        match found {
            Some(s) => out.push(s),
            None => {
                return Err(Error::Generation(format!(
                    "no new sentence after {MAX_RETRIES} draws for sentence {}",
                    i + 1
                )))
            }
        }
    }
    Ok(out)
}
