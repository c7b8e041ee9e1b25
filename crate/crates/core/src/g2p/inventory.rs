use std::collections::{BTreeMap, HashSet};

use crate::error::{Error, Result};

/// Word boundary marker in flattened phone streams.
pub const BOUNDARY: &str = "#";
/// Pause marker emitted for punctuation.
pub const PAUSE: &str = "_";

/// The 39 ARPABET phonemes with stress digits removed.
pub const ARPABET_SYMBOLS: [&str; 39] = [
    "AA", "AE", "AH", "AO", "AW", "AY", "B", "CH", "D", "DH", "EH", "ER", "EY", "F", "G", "HH",
    "IH", "IY", "JH", "K", "L", "M", "N", "NG", "OW", "OY", "P", "R", "S", "SH", "T", "TH",
    "UH", "UW", "V", "W", "Y", "Z", "ZH",
];

/// The shared IPA phone set for both languages.
#[derive(Debug, Clone)]
pub struct PhoneInventory {
    symbols: Vec<String>,
    index: HashSet<String>,
    arpabet_map: BTreeMap<String, Vec<String>>,
}

impl PhoneInventory {
    pub fn new(symbols: Vec<String>, arpabet_map: BTreeMap<String, Vec<String>>) -> Result<Self> {
        let mut index = HashSet::with_capacity(symbols.len());
        for s in &symbols {
            if s == BOUNDARY || s == PAUSE {
                return Err(Error::Inventory(format!("{s:?} is reserved")));
            }
            if s.is_empty() || s.contains(char::is_whitespace) {
                return Err(Error::Inventory(format!("bad phone symbol {s:?}")));
            }
            if !index.insert(s.clone()) {
                return Err(Error::Inventory(format!("duplicate phone {s:?}")));
            }
        }
        for sym in ARPABET_SYMBOLS {
            let Some(phones) = arpabet_map.get(sym) else {
                return Err(Error::Inventory(format!("no mapping for ARPABET {sym}")));
            };
            if phones.is_empty() {
                return Err(Error::Inventory(format!("empty mapping for ARPABET {sym}")));
            }
            if let Some(p) = phones.iter().find(|p| !index.contains(*p)) {
                return Err(Error::Inventory(format!(
                    "ARPABET {sym} maps to {p:?}, which is not in the inventory"
                )));
            }
        }
        Ok(PhoneInventory {
            symbols,
            index,
            arpabet_map,
        })
    }

    /// Parses an inventory file (one phone per line) and an ARPABET map (TSV,
    /// `SYMBOL<TAB>phone [phone ...]`). Blank lines and `#` comments are
    /// skipped in both.
    pub fn parse(inventory: &str, arpabet_tsv: &str) -> Result<Self> {
        let symbols = content_lines(inventory)
            .map(|(_, l)| l.to_string())
            .collect();
        let mut map = BTreeMap::new();
        for (lineno, line) in content_lines(arpabet_tsv) {
            let (sym, phones) = line
                .split_once('\t')
                .ok_or_else(|| Error::format_at(lineno, "expected SYMBOL<TAB>phones"))?;
            let phones: Vec<String> = phones.split_whitespace().map(String::from).collect();
            map.insert(sym.trim().to_string(), phones);
        }
        PhoneInventory::new(symbols, map)
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn contains(&self, phone: &str) -> bool {
        self.index.contains(phone)
    }

    pub fn arpabet_map(&self) -> &BTreeMap<String, Vec<String>> {
        &self.arpabet_map
    }

    /// Maps one ARPABET symbol, with or without a stress digit.
    pub fn map_arpabet(&self, symbol: &str) -> Result<&[String]> {
        let bare = symbol.trim_end_matches(|c: char| c.is_ascii_digit());
        self.arpabet_map
            .get(bare)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::Inventory(format!("unmapped ARPABET symbol {symbol:?}")))
    }
}

/// Non-blank, non-comment lines with 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
}
