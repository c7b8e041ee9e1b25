//! Corpus ingestion and the balanced LID training mix.

use std::fs;
use std::io::Write;
use std::path::Path;

use rand::seq::index;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lid::LanguageTag;
use crate::rng;
use crate::textnorm::{normalize, tokenize, Token};

/// A sentence with one language label per word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledSentence {
    pub tokens: Vec<String>,
    pub labels: Vec<LanguageTag>,
}

impl LabeledSentence {
    pub fn new(tokens: Vec<String>, labels: Vec<LanguageTag>) -> Result<Self> {
        let row = LabeledSentence { tokens, labels };
        row.validate()?;
        Ok(row)
    }

    fn validate(&self) -> Result<()> {
        if self.tokens.is_empty() {
            return Err(Error::format("row has no tokens"));
        }
        if self.tokens.len() != self.labels.len() {
            return Err(Error::format(format!(
                "{} tokens but {} labels",
                self.tokens.len(),
                self.labels.len()
            )));
        }
        Ok(())
    }

    /// Plain text of the row, words joined by spaces.
    pub fn text(&self) -> String {
        self.tokens.join(" ")
    }
}

fn read_utf8(path: &Path) -> Result<String> {
    let bytes = fs::read(path)?;
    String::from_utf8(bytes).map_err(|e| {
        Error::Encoding(format!(
            "{}: invalid UTF-8 at byte {}",
            path.display(),
            e.utf8_error().valid_up_to()
        ))
    })
}

/// Reads a one-sentence-per-line file and labels every word `lang`.
pub fn load_monolingual(path: impl AsRef<Path>, lang: LanguageTag) -> Result<Vec<LabeledSentence>> {
    let text = read_utf8(path.as_ref())?;
    Ok(monolingual_rows(text.lines(), lang))
}

pub fn monolingual_rows<'a>(
    lines: impl IntoIterator<Item = &'a str>,
    lang: LanguageTag,
) -> Vec<LabeledSentence> {
    lines
        .into_iter()
        .filter_map(|line| {
            let tokens: Vec<String> = tokenize(&normalize(line))
                .into_iter()
                .filter(Token::is_spoken)
                .map(|t| t.surface)
                .collect();
            (!tokens.is_empty()).then(|| LabeledSentence {
                labels: vec![lang; tokens.len()],
                tokens,
            })
        })
        .collect()
}

/// Reads a JSON-lines file of `{"tokens": [...], "labels": [...]}` rows.
pub fn load_labeled(path: impl AsRef<Path>) -> Result<Vec<LabeledSentence>> {
    parse_labeled(&read_utf8(path.as_ref())?)
}

pub fn parse_labeled(text: &str) -> Result<Vec<LabeledSentence>> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row: LabeledSentence =
            serde_json::from_str(line).map_err(|e| Error::format_at(i + 1, e.to_string()))?;
        row.validate().map_err(|e| match e {
            Error::Format { message, .. } => Error::format_at(i + 1, message),
            other => other,
        })?;
        rows.push(row);
    }
    Ok(rows)
}

pub fn write_labeled<W: Write>(rows: &[LabeledSentence], mut out: W) -> Result<()> {
    for row in rows {
        serde_json::to_writer(&mut out, row).map_err(std::io::Error::from)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Row proportions of the mixed training set, Indonesian : English :
/// code-switched.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    pub id: usize,
    pub en: usize,
    pub cs: usize,
}

impl Default for Ratio {
    fn default() -> Self {
        Ratio { id: 5, en: 5, cs: 1 }
    }
}

impl std::str::FromStr for Ratio {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<usize> = s
            .split(':')
            .map(|p| p.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Config(format!("ratio {s:?} is not of the form A:B:C")))?;
        match parts[..] {
            [id, en, cs] if id > 0 && en > 0 && cs > 0 => Ok(Ratio { id, en, cs }),
            _ => Err(Error::Config(format!(
                "ratio {s:?} needs three positive parts"
            ))),
        }
    }
}

fn sample_block(
    rows: &[LabeledSentence],
    take: usize,
    seed: u64,
    stream: u64,
) -> Vec<LabeledSentence> {
    let mut rng = rng::stream(seed, &[stream]);
    let mut picked = index::sample(&mut rng, rows.len(), take).into_vec();
    picked.sort_unstable();
    picked.into_iter().map(|i| rows[i].clone()).collect()
}

/// Builds the training mix anchored on the code-switched set: with the
/// default 5:5:1 ratio every CS row is kept and exactly five times as many
/// rows are drawn, without replacement, from each monolingual set.
///
/// Output order is the Indonesian block, the English block, then the CS
/// block; each block keeps source order.
pub fn undersample(
    id_rows: &[LabeledSentence],
    en_rows: &[LabeledSentence],
    cs_rows: &[LabeledSentence],
    ratio: Ratio,
    seed: u64,
) -> Result<Vec<LabeledSentence>> {
    if ratio.id == 0 || ratio.en == 0 || ratio.cs == 0 {
        return Err(Error::Config("ratio parts must be positive".into()));
    }
    let unit = cs_rows.len() / ratio.cs;
    if unit == 0 {
        return Err(Error::Size {
            set: "cs",
            needed: ratio.cs,
            available: cs_rows.len(),
        });
    }
    let need_id = unit * ratio.id;
    let need_en = unit * ratio.en;
    if id_rows.len() < need_id {
        return Err(Error::Size {
            set: "id",
            needed: need_id,
            available: id_rows.len(),
        });
    }
    if en_rows.len() < need_en {
        return Err(Error::Size {
            set: "en",
            needed: need_en,
            available: en_rows.len(),
        });
    }
    let mut out = sample_block(id_rows, need_id, seed, 0);
    out.extend(sample_block(en_rows, need_en, seed, 1));
    out.extend(sample_block(cs_rows, unit * ratio.cs, seed, 2));
    Ok(out)
}
