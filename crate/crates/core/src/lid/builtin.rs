use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{LabelSource, LanguageTag, LidBackend, WordVerdict};
use crate::corpus::LabeledSentence;
use crate::error::{Error, Result};
use crate::textnorm::{normalize, tokenize, TokenKind};

const PAD_START: char = '^';
const PAD_END: char = '$';

/// N-gram posteriors are kept strictly inside (0, 1); certainty is reserved
/// for lexicon hits.
const POSTERIOR_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LidConfig {
    pub n: usize,
    pub alpha: f64,
    pub min_lex_count: u32,
}

impl Default for LidConfig {
    fn default() -> Self {
        LidConfig {
            n: 3,
            alpha: 0.1,
            min_lex_count: 2,
        }
    }
}

impl LidConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Config("n-gram order must be at least 1".into()));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::Config(format!(
                "smoothing constant must be positive, got {}",
                self.alpha
            )));
        }
        if self.min_lex_count == 0 {
            return Err(Error::Config("min_lex_count must be at least 1".into()));
        }
        Ok(())
    }
}

/// Per-language statistics of the built-in classifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassStats {
    pub lexicon: BTreeMap<String, u32>,
    pub ngram_counts: BTreeMap<String, u32>,
    pub total_ngrams: u64,
    /// Add-alpha smoothed log-probability for every n-gram in the shared
    /// vocabulary.
    pub ngram_logprob: BTreeMap<String, f64>,
    /// Log-probability of any n-gram outside the vocabulary.
    pub unseen_logprob: f64,
}

/// Lexicon plus character n-gram language identifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LidModel {
    pub config: LidConfig,
    /// Indexed by [`LanguageTag`]: Indonesian first, then English.
    pub classes: [ClassStats; 2],
}

/// Padded character n-grams of a word, in order. `n - 1` pad symbols are
/// added on each side.
pub fn padded_ngrams(word: &str, n: usize) -> Vec<String> {
    let mut chars: Vec<char> = Vec::with_capacity(word.len() + 2 * n);
    chars.extend(std::iter::repeat_n(PAD_START, n - 1));
    chars.extend(word.chars());
    chars.extend(std::iter::repeat_n(PAD_END, n - 1));
    chars.windows(n).map(|w| w.iter().collect()).collect()
}

fn class_words<'a>(
    sentences: impl IntoIterator<Item = &'a String>,
    labeled: &[LabeledSentence],
    lang: LanguageTag,
) -> Vec<String> {
    let mut words: Vec<String> = sentences
        .into_iter()
        .flat_map(|s| tokenize(&normalize(s)))
        .filter(|t| t.kind == TokenKind::Word)
        .map(|t| t.surface.to_lowercase())
        .collect();
    for row in labeled {
        for (w, l) in row.tokens.iter().zip(&row.labels) {
            if *l == lang && w.chars().any(char::is_alphabetic) {
                words.push(normalize(w).to_lowercase());
            }
        }
    }
    words
}

impl LidModel {
    /// Trains the classifier. `cs` rows contribute each word to the class of
    /// its label.
    pub fn train(
        id_sentences: &[String],
        en_sentences: &[String],
        cs: &[LabeledSentence],
        config: LidConfig,
    ) -> Result<LidModel> {
        config.validate()?;
        let per_class = [
            class_words(id_sentences, cs, LanguageTag::Id),
            class_words(en_sentences, cs, LanguageTag::En),
        ];
        for lang in LanguageTag::ALL {
            if per_class[lang.index()].is_empty() {
                return Err(Error::Data(format!("no {lang} words to train on")));
            }
        }

        let counted: Vec<(BTreeMap<String, u32>, BTreeMap<String, u32>)> = per_class
            .iter()
            .map(|words| {
                let mut lex = BTreeMap::new();
                let mut grams = BTreeMap::new();
                for w in words {
                    *lex.entry(w.clone()).or_insert(0) += 1;
                    for g in padded_ngrams(w, config.n) {
                        *grams.entry(g).or_insert(0) += 1;
                    }
                }
                lex.retain(|_, c| *c >= config.min_lex_count);
                (lex, grams)
            })
            .collect();

        let vocab: BTreeSet<&String> = counted.iter().flat_map(|(_, g)| g.keys()).collect();
        let vocab_size = vocab.len() as f64;

        let mut classes = counted.iter().map(|(lexicon, grams)| {
            let total: u64 = grams.values().map(|&c| c as u64).sum();
            let denom = (total as f64 + config.alpha * (vocab_size + 1.0)).ln();
            let ngram_logprob = vocab
                .iter()
                .map(|g| {
                    let c = grams.get(*g).copied().unwrap_or(0) as f64;
                    ((*g).clone(), (c + config.alpha).ln() - denom)
                })
                .collect();
            ClassStats {
                lexicon: lexicon.clone(),
                ngram_counts: grams.clone(),
                total_ngrams: total,
                ngram_logprob,
                unseen_logprob: config.alpha.ln() - denom,
            }
        });
        let id = classes.next().expect("two classes");
        let en = classes.next().expect("two classes");
        Ok(LidModel {
            config,
            classes: [id, en],
        })
    }

    pub fn stats(&self, lang: LanguageTag) -> &ClassStats {
        &self.classes[lang.index()]
    }

    /// Smoothed n-gram log-likelihood of a lowercased word under a class.
    pub fn log_likelihood(&self, word: &str, lang: LanguageTag) -> f64 {
        let stats = self.stats(lang);
        padded_ngrams(word, self.config.n)
            .iter()
            .map(|g| {
                stats
                    .ngram_logprob
                    .get(g)
                    .copied()
                    .unwrap_or(stats.unseen_logprob)
            })
            .sum()
    }

    /// Class posteriors `[P(ID), P(EN)]` under a uniform prior, from n-gram
    /// evidence alone.
    pub fn posterior(&self, word: &str) -> [f64; 2] {
        let word = word.to_lowercase();
        let diff = self.log_likelihood(&word, LanguageTag::Id)
            - self.log_likelihood(&word, LanguageTag::En);
        // Logistic of the log-likelihood ratio.
        let p_id = (1.0 / (1.0 + (-diff).exp())).clamp(POSTERIOR_FLOOR, 1.0 - POSTERIOR_FLOOR);
        [p_id, 1.0 - p_id]
    }

    /// First-pass verdict for one word.
    pub fn verdict(&self, word: &str) -> WordVerdict {
        let word = word.to_lowercase();
        let in_id = self.classes[0].lexicon.contains_key(&word);
        let in_en = self.classes[1].lexicon.contains_key(&word);
        match (in_id, in_en) {
            (true, true) => WordVerdict::Ambiguous,
            (true, false) | (false, true) => WordVerdict::Decided {
                lang: if in_id { LanguageTag::Id } else { LanguageTag::En },
                confidence: 1.0,
                source: LabelSource::Lexicon,
            },
            (false, false) => {
                let [p_id, p_en] = self.posterior(&word);
                // Equal evidence resolves to Indonesian.
                let (lang, confidence) = if p_id >= p_en {
                    (LanguageTag::Id, p_id)
                } else {
                    (LanguageTag::En, p_en)
                };
                WordVerdict::Decided {
                    lang,
                    confidence,
                    source: LabelSource::Ngram,
                }
            }
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<LidModel> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)?;
        let model: LidModel = serde_json::from_str(&text)
            .map_err(|e| Error::format(format!("{}: {e}", path.display())))?;
        model.config.validate()?;
        Ok(model)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let json = serde_json::to_string(self).map_err(|e| Error::format(e.to_string()))?;
        fs::write(path, json)?;
        Ok(())
    }
}

impl LidBackend for &LidModel {
    fn label_words(&mut self, words: &[&str]) -> Result<Vec<WordVerdict>> {
        Ok(words.iter().map(|w| self.verdict(w)).collect())
    }
}
