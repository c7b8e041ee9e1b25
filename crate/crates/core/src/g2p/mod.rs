//! Per-language grapheme-to-phoneme conversion over one shared inventory.

mod english;
mod indonesian;
mod inventory;

use std::fs;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lid::LanguageTag;

pub use english::{g2p_en, letter_to_sound, PronouncingDict};
pub use indonesian::{g2p_id, Exceptions};
pub use inventory::{PhoneInventory, ARPABET_SYMBOLS, BOUNDARY, PAUSE};

pub(crate) use inventory::content_lines;

const BUILTIN_INVENTORY: &str = include_str!("../../resources/inventory.txt");
const BUILTIN_ARPABET: &str = include_str!("../../resources/arpabet_ipa.tsv");
const BUILTIN_EXCEPTIONS: &str = include_str!("../../resources/id_exceptions.tsv");
const BUILTIN_DICT: &str = include_str!("../../resources/cmudict.dict");

/// Indonesian digit names, used to spell numerals digit by digit.
const ID_DIGITS: [&str; 10] = [
    "nol", "satu", "dua", "tiga", "empat", "lima", "enam", "tujuh", "delapan", "sembilan",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhoneSeq {
    pub phones: Vec<String>,
    /// Set when the phones came from letter-to-sound guessing rather than a
    /// lexicon or the Indonesian rules.
    pub fallback: bool,
}

impl PhoneSeq {
    pub fn new(phones: Vec<String>, fallback: bool) -> Self {
        PhoneSeq { phones, fallback }
    }
}

/// Everything the converters need, loaded once and shared read-only.
#[derive(Debug, Clone)]
pub struct G2p {
    pub inventory: PhoneInventory,
    pub id_exceptions: Exceptions,
    pub en_dict: PronouncingDict,
}

/// Optional file overrides for [`G2p::load`]; `None` keeps the built-in
/// resource.
#[derive(Debug, Clone, Default)]
pub struct G2pPaths<'a> {
    pub inventory: Option<&'a Path>,
    pub arpabet_map: Option<&'a Path>,
    pub id_exceptions: Option<&'a Path>,
    pub en_dict: Option<&'a Path>,
}

/// Parses an exception lexicon (`word<TAB>phone phone ...`) and checks every
/// phone against the inventory.
pub fn parse_exceptions(text: &str, inv: &PhoneInventory) -> Result<Exceptions> {
    let mut out = Exceptions::new();
    for (lineno, line) in content_lines(text) {
        let (word, phones) = line
            .split_once('\t')
            .ok_or_else(|| Error::format_at(lineno, "expected word<TAB>phones"))?;
        let phones: Vec<String> = phones.split_whitespace().map(String::from).collect();
        if phones.is_empty() {
            return Err(Error::format_at(lineno, format!("no phones for {word:?}")));
        }
        if let Some(p) = phones.iter().find(|p| !inv.contains(p)) {
            return Err(Error::Inventory(format!(
                "exception {word:?} uses {p:?}, which is not in the inventory"
            )));
        }
        out.insert(word.trim().to_lowercase(), phones);
    }
    Ok(out)
}

fn read_or(path: Option<&Path>, builtin: &'static str) -> Result<std::borrow::Cow<'static, str>> {
    Ok(match path {
        Some(p) => fs::read_to_string(p)?.into(),
        None => builtin.into(),
    })
}

impl G2p {
    /// The resources shipped with the crate. Parsed once per process.
    pub fn builtin() -> &'static G2p {
        static BUILTIN: OnceLock<G2p> = OnceLock::new();
        BUILTIN.get_or_init(|| {
            G2p::load(&G2pPaths::default()).expect("built-in G2P resources are valid")
        })
    }

    pub fn load(paths: &G2pPaths<'_>) -> Result<G2p> {
        let inventory = PhoneInventory::parse(
            &read_or(paths.inventory, BUILTIN_INVENTORY)?,
            &read_or(paths.arpabet_map, BUILTIN_ARPABET)?,
        )?;
        let id_exceptions =
            parse_exceptions(&read_or(paths.id_exceptions, BUILTIN_EXCEPTIONS)?, &inventory)?;
        let en_dict = PronouncingDict::parse(&read_or(paths.en_dict, BUILTIN_DICT)?)?;
        Ok(G2p {
            inventory,
            id_exceptions,
            en_dict,
        })
    }

    pub fn g2p_id(&self, word: &str) -> Result<PhoneSeq> {
        g2p_id(word, &self.id_exceptions)
    }

    pub fn g2p_en(&self, word: &str) -> Result<PhoneSeq> {
        g2p_en(word, &self.en_dict, &self.inventory)
    }

    /// Phonemizes `word` under the rules of `lang`.
    pub fn phonemize_word(&self, word: &str, lang: LanguageTag) -> Result<PhoneSeq> {
        match lang {
            LanguageTag::Id => self.g2p_id(word),
            LanguageTag::En => self.g2p_en(word),
        }
    }

    /// Placeholder reading for tokens containing digits: letter runs go
    /// through the Indonesian rules and each digit is read by its Indonesian
    /// name. Always flagged as fallback.
    pub fn phonemize_numeric(&self, token: &str) -> Result<PhoneSeq> {
        let mut phones = Vec::new();
        let mut letters = String::new();
        let flush = |letters: &mut String, phones: &mut Vec<String>| -> Result<()> {
            if letters.chars().any(char::is_alphabetic) {
                phones.extend(self.g2p_id(letters)?.phones);
            }
            letters.clear();
            Ok(())
        };
        for c in token.chars() {
            if let Some(d) = c.to_digit(10) {
                flush(&mut letters, &mut phones)?;
                phones.extend(self.g2p_id(ID_DIGITS[d as usize])?.phones);
            } else {
                letters.push(c);
            }
        }
        flush(&mut letters, &mut phones)?;
        if phones.is_empty() {
            return Err(Error::Input(format!("{token:?} has nothing to pronounce")));
        }
        Ok(PhoneSeq::new(phones, true))
    }
}

/// Free-function form of [`G2p::phonemize_word`].
pub fn phonemize_word(word: &str, lang: LanguageTag, resources: &G2p) -> Result<PhoneSeq> {
    resources.phonemize_word(word, lang)
}

/// Lowercased words of the built-in exception lexicon, for inspection.
pub fn exception_words(ex: &Exceptions) -> Vec<&str> {
    let mut words: Vec<&str> = ex.keys().map(String::as_str).collect();
    words.sort_unstable();
    words
}
