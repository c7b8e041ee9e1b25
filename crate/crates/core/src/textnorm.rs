//! Text normalization and word/punctuation tokenization.
//!
//! Normalization composes the text to NFC, folds typographic quotes and
//! dashes to ASCII and collapses whitespace. Letter case is left alone: the
//! language identifier downstream sees the text as written.
//!
//! Tokenization splits on spaces and peels leading and trailing punctuation
//! runs off each chunk. Anything between the first and last alphanumeric
//! character stays inside the word, so hyphenated compounds and elisions
//! ("state-of-the-art", "don't") remain a single token.

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TokenKind {
    Word,
    Punct,
    Numeric,
}

/// A token of normalized text.
///
/// `span` is a half-open range of *character* indices into the normalized
/// string that produced the token.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub span: (usize, usize),
    pub kind: TokenKind,
}

impl Token {
    /// Builds a token for a bare word list (gold corpora, transcripts), where
    /// spans refer to the words joined by single spaces.
    pub fn from_words<S: AsRef<str>>(words: &[S]) -> Vec<Token> {
        let mut start = 0;
        words
            .iter()
            .map(|w| {
                let surface = w.as_ref().to_string();
                let len = surface.chars().count();
                let tok = Token {
                    kind: classify_surface(&surface),
                    span: (start, start + len),
                    surface,
                };
                start += len + 1;
                tok
            })
            .collect()
    }

    pub fn is_word(&self) -> bool {
        self.kind == TokenKind::Word
    }

    /// Words and numerals: everything that is pronounced.
    pub fn is_spoken(&self) -> bool {
        self.kind != TokenKind::Punct
    }
}

fn classify_surface(s: &str) -> TokenKind {
    if s.chars().any(|c| c.is_numeric()) {
        TokenKind::Numeric
    } else if s.chars().any(char::is_alphabetic) {
        TokenKind::Word
    } else {
        TokenKind::Punct
    }
}

fn fold_typography(c: char) -> Option<&'static str> {
    Some(match c {
        '\u{2018}' | '\u{2019}' | '\u{201A}' | '\u{201B}' | '\u{2032}' => "'",
        '\u{201C}' | '\u{201D}' | '\u{201E}' | '\u{201F}' | '\u{2033}' | '\u{00AB}'
        | '\u{00BB}' => "\"",
        '\u{2010}' | '\u{2011}' | '\u{2012}' | '\u{2013}' | '\u{2014}' | '\u{2015}'
        | '\u{2212}' => "-",
        '\u{2026}' => "...",
        _ => return None,
    })
}

/// Normalizes raw text. Idempotent.
pub fn normalize(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    let mut pending_space = false;
    for c in raw.nfc() {
        if c.is_whitespace() {
            pending_space = !out.is_empty();
            continue;
        }
        if pending_space {
            out.push(' ');
            pending_space = false;
        }
        match fold_typography(c) {
            Some(s) => out.push_str(s),
            None => out.push(c),
        }
    }
    out
}

/// Like [`normalize`], for input that has not been validated as UTF-8.
pub fn normalize_bytes(raw: &[u8]) -> Result<String> {
    let text = std::str::from_utf8(raw).map_err(|e| {
        Error::Encoding(format!(
            "invalid UTF-8 at byte offset {}",
            e.valid_up_to()
        ))
    })?;
    Ok(normalize(text))
}

/// Splits normalized text into word, numeric and punctuation tokens.
pub fn tokenize(text: &str) -> Vec<Token> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if chars[i] == ' ' {
            i += 1;
            continue;
        }
        let start = i;
        while i < chars.len() && chars[i] != ' ' {
            i += 1;
        }
        split_chunk(&chars, start, i, &mut tokens);
    }
    tokens
}

fn split_chunk(chars: &[char], start: usize, end: usize, out: &mut Vec<Token>) {
    let chunk = &chars[start..end];
    let Some(first) = chunk.iter().position(|c| c.is_alphanumeric()) else {
        push(out, chars, start, end, TokenKind::Punct);
        return;
    };
    let last = chunk.iter().rposition(|c| c.is_alphanumeric()).unwrap_or(first);
    let (core_start, core_end) = (start + first, start + last + 1);
    if core_start > start {
        push(out, chars, start, core_start, TokenKind::Punct);
    }
    let surface: String = chars[core_start..core_end].iter().collect();
    push(out, chars, core_start, core_end, classify_surface(&surface));
    if core_end < end {
        push(out, chars, core_end, end, TokenKind::Punct);
    }
}

fn push(out: &mut Vec<Token>, chars: &[char], start: usize, end: usize, kind: TokenKind) {
    out.push(Token {
        surface: chars[start..end].iter().collect(),
        span: (start, end),
        kind,
    });
}

/// Rejoins tokens with a single space before every non-punctuation token
/// except the first, and no space before punctuation.
pub fn join_tokens(tokens: &[Token]) -> String {
    let mut out = String::new();
    for (i, t) in tokens.iter().enumerate() {
        if i > 0 && t.kind != TokenKind::Punct {
            out.push(' ');
        }
        out.push_str(&t.surface);
    }
    out
}

/// Normalized, lowercased, punctuation-free word list. Used to compare
/// transcripts.
pub fn words_for_scoring(raw: &str) -> Vec<String> {
    tokenize(&normalize(raw))
        .into_iter()
        .filter(Token::is_spoken)
        .map(|t| t.surface.to_lowercase())
        .collect()
}
