//! English G2P: pronouncing-dictionary lookup with a letter-to-sound
//! fallback.
//!
//! Dictionary entries are ARPABET; stress digits are dropped and each symbol
//! goes through the inventory's ARPABET map. Words missing from the
//! dictionary are spelled out by [`letter_to_sound`], an ordered cascade of
//! orthographic rules:
//!
//! 1. A final `e` after a consonant is silent when another vowel precedes
//!    it. If that consonant follows a single vowel, the vowel is long
//!    ("make", "bike", "note").
//! 2. Multi-letter patterns match longest first: `tion`, `sion`, `ough`,
//!    `augh`, `eigh`, `tch`, `igh`, `sch`, then digraphs such as `sh`, `ch`,
//!    `th`, `ph`, `ck`, `ng`, `qu`, vowel teams (`ee`, `ea`, `oo`, `ou`,
//!    `ai`, ...) and r-colored vowels (`ar`, `or`, `er`, `ir`, `ur`) when no
//!    vowel follows. `kn`, `wr` and `gh` are context dependent.
//! 3. A doubled consonant is spoken once.
//! 4. Single letters: short vowels by default, long ones under rule 1;
//!    `c` softens before `e`, `i`, `y`; `g` softens before a silent final
//!    `e`; `y` is a consonant word-initially and a vowel elsewhere.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use super::indonesian::fold_letters;
use super::{PhoneInventory, PhoneSeq};
use crate::error::{Error, Result};

/// Word to ARPABET symbols (first listed pronunciation only).
#[derive(Debug, Clone, Default)]
pub struct PronouncingDict {
    entries: HashMap<String, Vec<String>>,
}

impl PronouncingDict {
    /// Parses `WORD  SYM1 SYM2 ...` lines. `;;;` lines are comments, as is
    /// anything after `#`. Variant markers like `word(2)` are folded into the
    /// base word, keeping the first pronunciation.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            if line.starts_with(";;;") {
                continue;
            }
            let line = line.split('#').next().unwrap_or("");
            let mut fields = line.split_whitespace();
            let Some(word) = fields.next() else { continue };
            let syms: Vec<String> = fields.map(String::from).collect();
            if syms.is_empty() {
                return Err(Error::format_at(i + 1, format!("no phones for {word:?}")));
            }
            let word = match word.find('(') {
                Some(p) if word.ends_with(')') => &word[..p],
                _ => word,
            };
            entries.entry(word.to_lowercase()).or_insert(syms);
        }
        Ok(PronouncingDict { entries })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        PronouncingDict::parse(&fs::read_to_string(path)?)
    }

    pub fn get(&self, word: &str) -> Option<&[String]> {
        self.entries.get(word).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn insert(&mut self, word: &str, arpabet: &[&str]) {
        self.entries.insert(
            word.to_lowercase(),
            arpabet.iter().map(|s| s.to_string()).collect(),
        );
    }
}

/// Converts one English word.
pub fn g2p_en(word: &str, dict: &PronouncingDict, inv: &PhoneInventory) -> Result<PhoneSeq> {
    if !word.chars().any(char::is_alphabetic) {
        return Err(Error::Input(format!("{word:?} has no letters")));
    }
    let key = word.to_lowercase();
    if let Some(syms) = dict.get(&key) {
        return Ok(PhoneSeq::new(map_entry(syms, inv)?, false));
    }
    if key.contains('-') {
        let mut phones = Vec::new();
        let mut fallback = false;
        for part in key.split('-').filter(|p| p.chars().any(char::is_alphabetic)) {
            let seq = lookup_or_spell(part, dict, inv)?;
            fallback |= seq.fallback;
            phones.extend(seq.phones);
        }
        if !phones.is_empty() {
            return Ok(PhoneSeq::new(phones, fallback));
        }
    }
    spell(&key)
}

fn lookup_or_spell(word: &str, dict: &PronouncingDict, inv: &PhoneInventory) -> Result<PhoneSeq> {
    match dict.get(word) {
        Some(syms) => Ok(PhoneSeq::new(map_entry(syms, inv)?, false)),
        None => spell(word),
    }
}

fn spell(word: &str) -> Result<PhoneSeq> {
    let letters = fold_letters(word);
    if letters.is_empty() {
        return Err(Error::Input(format!("{word:?} has no Latin letters")));
    }
    Ok(PhoneSeq::new(letter_to_sound(&letters), true))
}

fn map_entry(syms: &[String], inv: &PhoneInventory) -> Result<Vec<String>> {
    let mut out = Vec::with_capacity(syms.len());
    for s in syms {
        out.extend(inv.map_arpabet(s)?.iter().cloned());
    }
    Ok(out)
}

#[derive(Clone, Copy)]
enum When {
    Always,
    Start,
    NotStart,
    End,
    NoVowelAfter,
}

struct Rule {
    graph: &'static str,
    phones: &'static [&'static str],
    when: When,
}

const fn rule(graph: &'static str, phones: &'static [&'static str], when: When) -> Rule {
    Rule {
        graph,
        phones,
        when,
    }
}

// Longest graphs first; within a length, earlier rules win.
const RULES: &[Rule] = &[
    rule("tion", &["ʃ", "ə", "n"], When::Always),
    rule("sion", &["ʒ", "ə", "n"], When::Always),
    rule("ough", &["ɔ"], When::Always),
    rule("augh", &["ɔ"], When::Always),
    rule("eigh", &["eɪ"], When::Always),
    rule("tch", &["tʃ"], When::Always),
    rule("igh", &["aɪ"], When::Always),
    rule("sch", &["s", "k"], When::Always),
    rule("ph", &["f"], When::Always),
    rule("sh", &["ʃ"], When::Always),
    rule("ch", &["tʃ"], When::Always),
    rule("th", &["θ"], When::Always),
    rule("wh", &["w"], When::Always),
    rule("ck", &["k"], When::Always),
    rule("dg", &["dʒ"], When::Always),
    rule("ng", &["ŋ"], When::Always),
    rule("qu", &["k", "w"], When::Always),
    rule("kn", &["n"], When::Start),
    rule("wr", &["ɹ"], When::Start),
    rule("gh", &["g"], When::Start),
    rule("gh", &[], When::NotStart),
    rule("ee", &["iː"], When::Always),
    rule("ea", &["iː"], When::Always),
    rule("oo", &["uː"], When::Always),
    rule("ou", &["aʊ"], When::Always),
    rule("ow", &["oʊ"], When::End),
    rule("ow", &["aʊ"], When::Always),
    rule("oi", &["ɔɪ"], When::Always),
    rule("oy", &["ɔɪ"], When::Always),
    rule("ai", &["eɪ"], When::Always),
    rule("ay", &["eɪ"], When::Always),
    rule("au", &["ɔ"], When::Always),
    rule("aw", &["ɔ"], When::Always),
    rule("ew", &["uː"], When::Always),
    rule("oa", &["oʊ"], When::Always),
    rule("ey", &["iː"], When::End),
    rule("ar", &["ɑ", "ɹ"], When::NoVowelAfter),
    rule("or", &["ɔ", "ɹ"], When::NoVowelAfter),
    rule("er", &["ɝ"], When::NoVowelAfter),
    rule("ir", &["ɝ"], When::NoVowelAfter),
    rule("ur", &["ɝ"], When::NoVowelAfter),
];

fn is_vowel(c: u8) -> bool {
    matches!(c, b'a' | b'e' | b'i' | b'o' | b'u')
}

/// Orthography-driven pronunciation for lowercase ASCII letters. Never
/// returns an empty sequence for non-empty input.
pub fn letter_to_sound(letters: &[u8]) -> Vec<String> {
    let n = letters.len();
    let silent_e = n >= 3
        && letters[n - 1] == b'e'
        && !is_vowel(letters[n - 2])
        && letters[..n - 2].iter().any(|&c| is_vowel(c) || c == b'y');
    let end = if silent_e { n - 1 } else { n };
    let long_vowel_at = (silent_e
        && is_vowel(letters[n - 3])
        && (n < 4 || !is_vowel(letters[n - 4])))
    .then(|| n - 3);

    let mut out: Vec<&str> = Vec::with_capacity(n + 2);
    let mut i = 0;
    'scan: while i < end {
        let rest = &letters[i..end];
        for r in RULES {
            let g = r.graph.as_bytes();
            if !rest.starts_with(g) {
                continue;
            }
            let after = i + g.len();
            let ok = match r.when {
                When::Always => true,
                When::Start => i == 0,
                When::NotStart => i > 0,
                When::End => after == end,
                When::NoVowelAfter => after == end || !is_vowel(letters[after]),
            };
            if ok {
                out.extend_from_slice(r.phones);
                i = after;
                continue 'scan;
            }
        }
        let c = letters[i];
        if !is_vowel(c) && c != b'y' && i + 1 < end && letters[i + 1] == c {
            i += 1;
            continue;
        }
        let long = long_vowel_at == Some(i);
        let next = letters.get(i + 1).copied();
        let has_other_vowel = letters[..end]
            .iter()
            .enumerate()
            .any(|(j, &v)| j != i && is_vowel(v));
        let phones: &[&str] = match c {
            b'a' if long => &["eɪ"],
            b'a' => &["æ"],
            b'e' if long => &["iː"],
            b'e' if i + 1 == end && !has_other_vowel => &["iː"],
            b'e' => &["ɛ"],
            b'i' if long => &["aɪ"],
            b'i' => &["ɪ"],
            b'o' if long || i + 1 == end => &["oʊ"],
            b'o' => &["ɑ"],
            b'u' if long => &["uː"],
            b'u' => &["ʌ"],
            b'y' if i == 0 => &["j"],
            b'y' if i + 1 == end && has_other_vowel => &["iː"],
            b'y' if i + 1 == end => &["aɪ"],
            b'y' if next.is_some_and(is_vowel) => &["j"],
            b'y' => &["ɪ"],
            b'c' if matches!(next, Some(b'e' | b'i' | b'y')) => &["s"],
            b'c' | b'k' | b'q' => &["k"],
            b'g' if silent_e && i + 2 == n => &["dʒ"],
            b'g' => &["g"],
            b'j' => &["dʒ"],
            b'x' => &["k", "s"],
            b'r' => &["ɹ"],
            b'b' => &["b"],
            b'd' => &["d"],
            b'f' => &["f"],
            b'h' => &["h"],
            b'l' => &["l"],
            b'm' => &["m"],
            b'n' => &["n"],
            b'p' => &["p"],
            b's' => &["s"],
            b't' => &["t"],
            b'v' => &["v"],
            b'w' => &["w"],
            b'z' => &["z"],
            _ => &[],
        };
        out.extend_from_slice(phones);
        i += 1;
    }
    if out.is_empty() && n > 0 {
        // Only a silent cluster such as a lone "gh" got here; spell the
        // first letter instead.
        return letter_to_sound(&letters[..1]);
    }
    out.into_iter().map(String::from).collect()
}
