//! Rule-based Indonesian grapheme-to-phoneme conversion.
//!
//! Indonesian spelling is close to phonemic, so a short longest-match table
//! covers it. The one real ambiguity is `e`, which is either schwa (pepet)
//! or /e/ (taling); the rules always pick schwa and the exception lexicon
//! lists the taling words.

use std::collections::HashMap;

use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

use super::PhoneSeq;
use crate::error::{Error, Result};

const DIGRAPHS: [(&str, &str); 4] = [("ng", "ŋ"), ("ny", "ɲ"), ("sy", "ʃ"), ("kh", "x")];

const FINAL_DIPHTHONGS: [(&str, &str); 3] = [("ai", "ai̯"), ("au", "au̯"), ("oi", "oi̯")];

fn single(c: u8) -> &'static [&'static str] {
    match c {
        b'a' => &["a"],
        b'b' => &["b"],
        b'c' => &["tʃ"],
        b'd' => &["d"],
        b'e' => &["ə"],
        b'f' => &["f"],
        b'g' => &["g"],
        b'h' => &["h"],
        b'i' => &["i"],
        b'j' => &["dʒ"],
        b'k' => &["k"],
        b'l' => &["l"],
        b'm' => &["m"],
        b'n' => &["n"],
        b'o' => &["o"],
        b'p' => &["p"],
        b'q' => &["k"],
        b'r' => &["r"],
        b's' => &["s"],
        b't' => &["t"],
        b'u' => &["u"],
        b'v' => &["f"],
        b'w' => &["w"],
        b'x' => &["k", "s"],
        b'y' => &["j"],
        b'z' => &["z"],
        _ => &[],
    }
}

/// Lowercases, strips diacritics and keeps only ASCII letters. Apostrophes,
/// hyphens and anything else are dropped.
pub(crate) fn fold_letters(word: &str) -> Vec<u8> {
    word.nfd()
        .filter(|c| !is_combining_mark(*c))
        .flat_map(char::to_lowercase)
        .filter(char::is_ascii_lowercase)
        .map(|c| c as u8)
        .collect()
}

/// Exception lexicon: lowercased word to phones.
pub type Exceptions = HashMap<String, Vec<String>>;

/// Converts one Indonesian word.
pub fn g2p_id(word: &str, exceptions: &Exceptions) -> Result<PhoneSeq> {
    if !word.chars().any(char::is_alphabetic) {
        return Err(Error::Input(format!("{word:?} has no letters")));
    }
    let key = word.to_lowercase();
    if let Some(phones) = exceptions.get(&key) {
        return Ok(PhoneSeq::new(phones.clone(), false));
    }
    let letters = fold_letters(word);
    if letters.is_empty() {
        return Err(Error::Input(format!("{word:?} has no Latin letters")));
    }
    Ok(PhoneSeq::new(convert_letters(&letters), false))
}

fn convert_letters(letters: &[u8]) -> Vec<String> {
    let (body, tail) = match FINAL_DIPHTHONGS
        .iter()
        .find(|(g, _)| letters.ends_with(g.as_bytes()))
    {
        Some((g, p)) => (&letters[..letters.len() - g.len()], Some(*p)),
        None => (letters, None),
    };
    let mut phones = Vec::with_capacity(letters.len() + 1);
    let mut i = 0;
    'scan: while i < body.len() {
        for (g, p) in DIGRAPHS {
            if body[i..].starts_with(g.as_bytes()) {
                phones.push(p.to_string());
                i += 2;
                continue 'scan;
            }
        }
        phones.extend(single(body[i]).iter().map(|p| p.to_string()));
        i += 1;
    }
    if let Some(d) = tail {
        phones.push(d.to_string());
    }
    phones
}
