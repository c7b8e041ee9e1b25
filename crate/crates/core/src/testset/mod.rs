//! The seven-case code-switching test set, built from parallel ID/EN pairs
//! by word substitution, and the SUS sentence generator in [`sus`].
//!
//! A word of the source sentence can be swapped when it is at least three
//! characters long, is not a stopword, contains no digit and has a
//! counterpart. The counterpart comes from the pair's word alignment when
//! the pair has one, otherwise from the bilingual dictionary.

pub mod sus;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::g2p::content_lines;
use crate::lid::LanguageTag;
use crate::rng;
use crate::textnorm::{normalize, tokenize, Token};

pub use sus::{gen_sus, SusLexicon, SusSentence, Template};

const STOPWORDS_ID: &str = include_str!("../../resources/stopwords_id.txt");
const STOPWORDS_EN: &str = include_str!("../../resources/stopwords_en.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CsCase {
    #[serde(rename = "EN")]
    En,
    #[serde(rename = "ID")]
    Id,
    #[serde(rename = "ID_CS_1_EN")]
    IdCs1En,
    #[serde(rename = "ID_CS_2_EN")]
    IdCs2En,
    #[serde(rename = "EN_CS_1_ID")]
    EnCs1Id,
    #[serde(rename = "EN_CS_2_ID")]
    EnCs2Id,
    #[serde(rename = "HALF_HALF")]
    HalfHalf,
}

impl CsCase {
    pub const ALL: [CsCase; 7] = [
        CsCase::En,
        CsCase::Id,
        CsCase::IdCs1En,
        CsCase::IdCs2En,
        CsCase::EnCs1Id,
        CsCase::EnCs2Id,
        CsCase::HalfHalf,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CsCase::En => "EN",
            CsCase::Id => "ID",
            CsCase::IdCs1En => "ID_CS_1_EN",
            CsCase::IdCs2En => "ID_CS_2_EN",
            CsCase::EnCs1Id => "EN_CS_1_ID",
            CsCase::EnCs2Id => "EN_CS_2_ID",
            CsCase::HalfHalf => "HALF_HALF",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// Language of the sentence the case starts from.
    pub fn base(self) -> LanguageTag {
        match self {
            CsCase::En | CsCase::EnCs1Id | CsCase::EnCs2Id => LanguageTag::En,
            _ => LanguageTag::Id,
        }
    }

    /// Checks the label constraint of this case.
    pub fn admits(self, labels: &[LanguageTag]) -> bool {
        let en = labels.iter().filter(|l| **l == LanguageTag::En).count();
        let id = labels.len() - en;
        if labels.is_empty() {
            return false;
        }
        match self {
            CsCase::En => id == 0,
            CsCase::Id => en == 0,
            CsCase::IdCs1En => en == 1 && id >= 1,
            CsCase::IdCs2En => en == 2 && id >= 1,
            CsCase::EnCs1Id => id == 1 && en >= 1,
            CsCase::EnCs2Id => id == 2 && en >= 1,
            CsCase::HalfHalf => labels.len() >= 2 && en == labels.len() / 2,
        }
    }
}

impl fmt::Display for CsCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CsCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CsCase::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::format(format!("unknown case {s:?}")))
    }
}

/// One line of the pairs file. `alignment` holds `[id_index, en_index]`
/// pairs over the words of the two sentences.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParallelPair {
    pub id: String,
    pub en: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alignment: Option<Vec<(usize, usize)>>,
}

impl ParallelPair {
    pub fn new(id: &str, en: &str) -> Self {
        ParallelPair {
            id: id.to_string(),
            en: en.to_string(),
            alignment: None,
        }
    }

    pub fn with_alignment(mut self, alignment: Vec<(usize, usize)>) -> Self {
        self.alignment = Some(alignment);
        self
    }

    fn words(&self, lang: LanguageTag) -> Vec<String> {
        let text = match lang {
            LanguageTag::Id => &self.id,
            LanguageTag::En => &self.en,
        };
        tokenize(&normalize(text))
            .into_iter()
            .filter(Token::is_spoken)
            .map(|t| t.surface)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestItem {
    pub case: CsCase,
    pub pair_index: usize,
    pub tokens: Vec<String>,
    pub labels: Vec<LanguageTag>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Skip {
    pub pair_index: usize,
    pub case: CsCase,
    pub reason: String,
}

/// Word-level translation table read from `id<TAB>en` lines. The reverse
/// direction keeps the first Indonesian word listed for each English word.
#[derive(Debug, Clone, Default)]
pub struct BilingualDict {
    id_to_en: HashMap<String, String>,
    en_to_id: HashMap<String, String>,
}

impl BilingualDict {
    pub fn parse(text: &str) -> Result<Self> {
        let mut dict = BilingualDict::default();
        for (lineno, line) in content_lines(text) {
            let mut cols = line.split('\t').map(str::trim);
            let (Some(id), Some(en)) = (cols.next(), cols.next()) else {
                return Err(Error::format_at(lineno, "expected id<TAB>en"));
            };
            if id.is_empty() || en.is_empty() {
                return Err(Error::format_at(lineno, "empty dictionary entry"));
            }
            dict.insert(id, en);
        }
        Ok(dict)
    }

    pub fn insert(&mut self, id: &str, en: &str) {
        let (id, en) = (id.to_lowercase(), en.to_lowercase());
        self.en_to_id.entry(en.clone()).or_insert_with(|| id.clone());
        self.id_to_en.entry(id).or_insert(en);
    }

    /// Counterpart of `word` (a word of language `from`) in the other language.
    pub fn lookup(&self, word: &str, from: LanguageTag) -> Option<&str> {
        let table = match from {
            LanguageTag::Id => &self.id_to_en,
            LanguageTag::En => &self.en_to_id,
        };
        table.get(&word.to_lowercase()).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.id_to_en.len()
    }

    pub fn is_empty(&self) -> bool {
        self.id_to_en.is_empty()
    }
}

/// One lowercased word per line; `#` comments and blank lines ignored.
/// Extra tab-separated columns are allowed and ignored.
pub fn parse_stopwords(text: &str) -> HashSet<String> {
    content_lines(text)
        .map(|(_, line)| line.split('\t').next().unwrap_or("").trim().to_lowercase())
        .filter(|w| !w.is_empty())
        .collect()
}

#[derive(Debug, Clone)]
pub struct TestsetConfig {
    pub seed: u64,
    pub min_word_len: usize,
    pub stopwords_id: HashSet<String>,
    pub stopwords_en: HashSet<String>,
    pub dict: Option<BilingualDict>,
}

impl TestsetConfig {
    /// Built-in stopword lists, no dictionary.
    pub fn new(seed: u64) -> Self {
        TestsetConfig {
            seed,
            min_word_len: 3,
            stopwords_id: parse_stopwords(STOPWORDS_ID),
            stopwords_en: parse_stopwords(STOPWORDS_EN),
            dict: None,
        }
    }

    fn stopwords(&self, lang: LanguageTag) -> &HashSet<String> {
        match lang {
            LanguageTag::Id => &self.stopwords_id,
            LanguageTag::En => &self.stopwords_en,
        }
    }
}

fn check_alignment(pair: &ParallelPair, n_id: usize, n_en: usize) -> Result<()> {
    let Some(al) = &pair.alignment else {
        return Ok(());
    };
    let mut seen_id = HashSet::new();
    let mut seen_en = HashSet::new();
    for &(i, j) in al {
        if i >= n_id || j >= n_en {
            return Err(Error::format(format!(
                "alignment ({i}, {j}) out of range for {n_id} ID and {n_en} EN words"
            )));
        }
        if !seen_id.insert(i) || !seen_en.insert(j) {
            return Err(Error::format(format!(
                "alignment ({i}, {j}) is not one-to-one"
            )));
        }
    }
    Ok(())
}

/// Candidate substitutions `(position, replacement)` in the base sentence.
fn eligible(
    pair: &ParallelPair,
    base: LanguageTag,
    base_words: &[String],
    other_words: &[String],
    cfg: &TestsetConfig,
) -> Vec<(usize, String)> {
    let counterpart: Box<dyn Fn(usize, &str) -> Option<String>> = match &pair.alignment {
        Some(al) => {
            let map: HashMap<usize, usize> = al
                .iter()
                .map(|&(i, j)| match base {
                    LanguageTag::Id => (i, j),
                    LanguageTag::En => (j, i),
                })
                .collect();
            Box::new(move |pos, _| map.get(&pos).map(|&o| other_words[o].clone()))
        }
        None => Box::new(|_, word| {
            cfg.dict
                .as_ref()?
                .lookup(word, base)
                .filter(|w| !w.chars().any(char::is_whitespace))
                .map(String::from)
        }),
    };
    let stop = cfg.stopwords(base);
    base_words
        .iter()
        .enumerate()
        .filter(|(_, w)| {
            w.chars().count() >= cfg.min_word_len
                && !w.chars().any(|c| c.is_ascii_digit())
                && !stop.contains(&w.to_lowercase())
        })
        .filter_map(|(pos, w)| counterpart(pos, w).map(|r| (pos, r)))
        .collect()
}

fn skip(pair_index: usize, case: CsCase, reason: &str) -> std::result::Result<TestItem, Skip> {
    Err(Skip {
        pair_index,
        case,
        reason: reason.to_string(),
    })
}

/// Builds one case from one pair. The outer `Result` carries alignment
/// errors; the inner one is the item or the reason it was skipped.
pub fn build_case(
    pair: &ParallelPair,
    pair_index: usize,
    case: CsCase,
    cfg: &TestsetConfig,
) -> Result<std::result::Result<TestItem, Skip>> {
    let id_words = pair.words(LanguageTag::Id);
    let en_words = pair.words(LanguageTag::En);
    check_alignment(pair, id_words.len(), en_words.len())?;

    let base = case.base();
    let (base_words, other_words) = match base {
        LanguageTag::Id => (id_words, en_words),
        LanguageTag::En => (en_words, id_words),
    };
    let w = base_words.len();
    if w == 0 {
        return Ok(skip(pair_index, case, "empty sentence"));
    }
    let swaps = match case {
        CsCase::En | CsCase::Id => 0,
        CsCase::IdCs1En | CsCase::EnCs1Id => 1,
        CsCase::IdCs2En | CsCase::EnCs2Id => 2,
        CsCase::HalfHalf => w / 2,
    };
    let min_len = match case {
        CsCase::En | CsCase::Id => 1,
        CsCase::HalfHalf => 2,
        _ => swaps + 1,
    };
    if w < min_len {
        return Ok(skip(pair_index, case, "sentence too short"));
    }

    let mut item = TestItem {
        case,
        pair_index,
        labels: vec![base; w],
        tokens: base_words.clone(),
    };
    if swaps > 0 {
        let candidates = eligible(pair, base, &base_words, &other_words, cfg);
        if candidates.len() < swaps {
            return Ok(skip(pair_index, case, "insufficient eligible words"));
        }
        let mut rng = rng::stream(cfg.seed, &[pair_index as u64, case.index() as u64]);
        let mut picked = index::sample(&mut rng, candidates.len(), swaps).into_vec();
        picked.sort_unstable();
        for k in picked {
            let (pos, replacement) = &candidates[k];
            item.tokens[*pos] = replacement.clone();
            item.labels[*pos] = base.other();
        }
    }
    debug_assert!(case.admits(&item.labels));
    Ok(Ok(item))
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct SkipReport {
    pub attempted: usize,
    pub emitted: usize,
    pub skipped: Vec<Skip>,
}

/// Tries all seven cases for every pair, in case order.
pub fn build_testset(
    pairs: &[ParallelPair],
    cfg: &TestsetConfig,
) -> Result<(Vec<TestItem>, SkipReport)> {
    if pairs.is_empty() {
        return Err(Error::Input("no parallel pairs".into()));
    }
    let mut items = Vec::new();
    let mut report = SkipReport::default();
    for (pi, pair) in pairs.iter().enumerate() {
        for case in CsCase::ALL {
            report.attempted += 1;
            match build_case(pair, pi, case, cfg)? {
                Ok(item) => items.push(item),
                Err(s) => report.skipped.push(s),
            }
        }
    }
    report.emitted = items.len();
    Ok((items, report))
}

/// Parses the JSON-lines pairs file.
pub fn parse_pairs(text: &str) -> Result<Vec<ParallelPair>> {
    let mut pairs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let pair: ParallelPair =
            serde_json::from_str(line).map_err(|e| Error::format_at(i + 1, e.to_string()))?;
        pairs.push(pair);
    }
    Ok(pairs)
}

pub fn write_items<W: std::io::Write>(items: &[TestItem], mut out: W) -> Result<()> {
    for item in items {
        serde_json::to_writer(&mut out, item).map_err(std::io::Error::from)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use LanguageTag::{En, Id};

    fn cfg() -> TestsetConfig {
        TestsetConfig::new(11)
    }

    fn words(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn seven_cases_in_order() {
        let names: Vec<_> = CsCase::ALL.iter().map(|c| c.as_str()).collect();
        assert_eq!(
            names,
            ["EN", "ID", "ID_CS_1_EN", "ID_CS_2_EN", "EN_CS_1_ID", "EN_CS_2_ID", "HALF_HALF"]
        );
        for c in CsCase::ALL {
            assert_eq!(c.as_str().parse::<CsCase>().unwrap(), c);
            assert_eq!(serde_json::to_string(&c).unwrap(), format!("\"{c}\""));
        }
        assert!("ID_CS_3_EN".parse::<CsCase>().is_err());
    }

    #[test]
    fn monolingual_cases_copy() {
        let pair = ParallelPair::new("saya suka kopi", "i like coffee");
        let item = build_case(&pair, 0, CsCase::Id, &cfg()).unwrap().unwrap();
        assert_eq!(item.tokens, words(&["saya", "suka", "kopi"]));
        assert_eq!(item.labels, vec![Id; 3]);
        let item = build_case(&pair, 0, CsCase::En, &cfg()).unwrap().unwrap();
        assert_eq!(item.tokens, words(&["i", "like", "coffee"]));
        assert_eq!(item.labels, vec![En; 3]);
    }

    #[test]
    fn single_aligned_word() {
        let pair =
            ParallelPair::new("saya suka kopi", "i like coffee").with_alignment(vec![(2, 2)]);
        let item = build_case(&pair, 0, CsCase::IdCs1En, &cfg()).unwrap().unwrap();
        assert_eq!(item.tokens, words(&["saya", "suka", "coffee"]));
        assert_eq!(item.labels, vec![Id, Id, En]);

        let skipped = build_case(&pair, 0, CsCase::IdCs2En, &cfg()).unwrap().unwrap_err();
        assert_eq!(skipped.reason, "insufficient eligible words");
    }

    #[test]
    fn dictionary_is_used_without_alignment() {
        let mut c = cfg();
        let mut dict = BilingualDict::default();
        dict.insert("kopi", "coffee");
        dict.insert("minum", "drink");
        c.dict = Some(dict);
        let pair = ParallelPair::new("saya minum kopi", "i drink coffee");
        let item = build_case(&pair, 0, CsCase::IdCs2En, &c).unwrap().unwrap();
        assert_eq!(item.tokens, words(&["saya", "drink", "coffee"]));
        let item = build_case(&pair, 0, CsCase::EnCs1Id, &c).unwrap().unwrap();
        assert_eq!(item.labels.iter().filter(|l| **l == Id).count(), 1);
        assert!(item.tokens.contains(&"minum".to_string()) || item.tokens.contains(&"kopi".to_string()));
    }

    #[test]
    fn eligibility_filter() {
        // "ke" is short, "yang" is a stopword, "12" has digits.
        let pair = ParallelPair::new("yang ke 12 rumah", "which to 12 house")
            .with_alignment(vec![(0, 0), (1, 1), (2, 2), (3, 3)]);
        let c = cfg();
        let got = eligible(
            &pair,
            Id,
            &pair.words(Id),
            &pair.words(En),
            &c,
        );
        assert_eq!(got, vec![(3, "house".to_string())]);
    }

    #[test]
    fn half_half_counts() {
        let pair = ParallelPair::new("rumah besar warna merah muda", "house big color red pink")
            .with_alignment((0..5).map(|i| (i, i)).collect());
        let item = build_case(&pair, 3, CsCase::HalfHalf, &cfg()).unwrap().unwrap();
        assert_eq!(item.labels.iter().filter(|l| **l == En).count(), 2);
        let one = ParallelPair::new("rumah", "house").with_alignment(vec![(0, 0)]);
        assert!(build_case(&one, 0, CsCase::HalfHalf, &cfg()).unwrap().is_err());
    }

    #[test]
    fn bad_alignment_is_a_format_error() {
        let pair = ParallelPair::new("saya suka", "i like").with_alignment(vec![(5, 0)]);
        assert!(matches!(
            build_case(&pair, 0, CsCase::Id, &cfg()),
            Err(Error::Format { .. })
        ));
        let pair = ParallelPair::new("saya suka", "i like").with_alignment(vec![(1, 0), (1, 1)]);
        assert!(build_testset(&[pair], &cfg()).is_err());
    }

    #[test]
    fn pairs_file() {
        let pairs = parse_pairs(
            "{\"id\":\"saya suka kopi\",\"en\":\"i like coffee\",\"alignment\":[[2,2]]}\n\n{\"id\":\"a\",\"en\":\"b\"}\n",
        )
        .unwrap();
        assert_eq!(pairs.len(), 2);
        assert_eq!(pairs[0].alignment, Some(vec![(2, 2)]));
        assert!(matches!(
            parse_pairs("{\"id\":\"a\"}"),
            Err(Error::Format { line: Some(1), .. })
        ));
    }

    #[test]
    fn dictionary_file() {
        let d = BilingualDict::parse("# id\ten\nkopi\tcoffee\nrumah\thouse\n").unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.lookup("Kopi", Id), Some("coffee"));
        assert_eq!(d.lookup("house", En), Some("rumah"));
        assert!(BilingualDict::parse("kopi\n").is_err());
    }

    #[test]
    fn fully_eligible_pairs_give_seven_items_each() {
        let pairs: Vec<ParallelPair> = (0..10)
            .map(|_| {
                ParallelPair::new("rumah besar warna merah", "house big color red")
                    .with_alignment((0..4).map(|i| (i, i)).collect())
            })
            .collect();
        let (items, report) = build_testset(&pairs, &cfg()).unwrap();
        assert_eq!(items.len(), 70);
        assert!(report.skipped.is_empty());
        for item in &items {
            assert!(item.case.admits(&item.labels), "{item:?}");
        }
    }

    fn synthetic_pair() -> impl Strategy<Value = ParallelPair> {
        (1usize..9, any::<u64>()).prop_map(|(n, bits)| {
            let id: Vec<String> = (0..n).map(|i| format!("kata{i}")).collect();
            let en: Vec<String> = (0..n).map(|i| format!("word{i}")).collect();
            let alignment = (0..n).filter(|i| bits >> i & 1 == 1).map(|i| (i, i)).collect();
            ParallelPair::new(&id.join(" "), &en.join(" ")).with_alignment(alignment)
        })
    }

    proptest! {
        #[test]
        fn constraints_and_counts(pairs in prop::collection::vec(synthetic_pair(), 1..12), seed in any::<u64>()) {
            let c = TestsetConfig::new(seed);
            let (items, report) = build_testset(&pairs, &c).unwrap();
            prop_assert_eq!(items.len() + report.skipped.len(), 7 * pairs.len());
            prop_assert_eq!(report.emitted, items.len());
            for item in &items {
                prop_assert!(item.case.admits(&item.labels));
                prop_assert!(!item.tokens.is_empty());
                prop_assert_eq!(item.tokens.len(), item.labels.len());
            }
            let (again, _) = build_testset(&pairs, &c).unwrap();
            prop_assert_eq!(items, again);
        }
    }
}
