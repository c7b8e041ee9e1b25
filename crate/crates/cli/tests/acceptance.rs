//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use csfront::eval::{self, PlanParams};
use csfront::g2p::letter_to_sound;
use csfront::lid::{classify_tokens, ExternalSession, LabelSource, LidConfig};
use csfront::pipeline;
use csfront::testset::{self, CsCase, ParallelPair, TestsetConfig};
use csfront::{Error, G2p, LanguageTag, LidModel, Token};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

struct Suite {
    failed: usize,
}

impl Suite {
    fn run(&mut self, name: &str, budget: Duration, f: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(f))
            .unwrap_or_else(|p| Err(format!("panicked: {}", panic_message(&p))));
        let took = start.elapsed();
        let result = match result {
            Ok(_) if took > budget => Err(format!("took {took:.2?}, budget {budget:?}")),
            other => other,
        };
        match result {
            Ok(detail) => println!("PASS  {name}  ({detail}; {took:.2?})"),
            Err(why) => {
                self.failed += 1;
                println!("FAIL  {name}  ({why}; {took:.2?})");
            }
        }
    }
}

fn panic_message(p: &Box<dyn std::any::Any + Send>) -> String {
    p.downcast_ref::<String>()
        .cloned()
        .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_default()
}

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

// ---------------------------------------------------------------- MOS

const MODELS: [&str; 4] = ["STEN-TTS EN", "STEN-TTS ID", "CS-TTS", "CS-TTS Topline"];

/// Published per-case means, rows in case order, columns in `MODELS` order.
const PUBLISHED_MEANS: [[f64; 4]; 7] = [
    [3.571, 1.114, 3.171, 3.114],
    [1.286, 3.114, 2.971, 3.371],
    [1.257, 2.400, 3.714, 3.600],
    [1.286, 2.229, 3.429, 3.800],
    [3.086, 1.114, 3.429, 3.514],
    [2.571, 1.343, 3.429, 3.686],
    [2.086, 1.571, 3.514, 3.714],
];
const PUBLISHED_TOTALS: [f64; 4] = [2.163, 1.841, 3.379, 3.543];

fn published_mos() -> Outcome {
    let file = std::fs::File::open(fixture("published_mos.csv")).map_err(|e| e.to_string())?;
    let responses = eval::read_mos(file).map_err(|e| e.to_string())?;
    ensure!(responses.len() == 7 * 4 * 35, "{} responses", responses.len());
    let table = eval::mos_aggregate(&responses).map_err(|e| e.to_string())?;
    for (ci, case) in CsCase::ALL.iter().enumerate() {
        for (mi, model) in MODELS.iter().enumerate() {
            let got = table.mean(*case, model).ok_or("missing cell")?;
            ensure!(
                (got - PUBLISHED_MEANS[ci][mi]).abs() < 0.0005,
                "{case}/{model}: fixture mean {got} does not round to {}",
                PUBLISHED_MEANS[ci][mi]
            );
        }
    }
    let mut shown = Vec::new();
    for (mi, model) in MODELS.iter().enumerate() {
        let total = table.total(model).ok_or("missing total")?;
        ensure!(
            (total - PUBLISHED_TOTALS[mi]).abs() <= 0.001,
            "{model}: total {total:.5} vs {}",
            PUBLISHED_TOTALS[mi]
        );
        shown.push(format!("{total:.4}"));
    }
    Ok(format!("totals {}", shown.join(" / ")))
}

// ---------------------------------------------------------------- WER

/// Every word list of length <= `max` over `vocab`.
fn all_lists(vocab: &[&'static str], max: usize) -> Vec<Vec<&'static str>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max {
        let mut next = Vec::new();
        for l in &frontier {
            for w in vocab {
                let mut x: Vec<&str> = l.clone();
                x.push(w);
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Edit distance as a shortest path: nodes are the word lists, edges are
/// single insertions, deletions and substitutions.
fn graph_distances(lists: &[Vec<&'static str>], vocab: &[&'static str]) -> Vec<Vec<usize>> {
    let index: HashMap<&Vec<&str>, usize> = lists.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let neighbours: Vec<Vec<usize>> = lists
        .iter()
        .map(|l| {
            let mut n = BTreeSet::new();
            for pos in 0..=l.len() {
                for w in vocab {
                    let mut x = l.clone();
                    x.insert(pos, w);
                    if let Some(&j) = index.get(&x) {
                        n.insert(j);
                    }
                }
            }
            for pos in 0..l.len() {
                let mut x = l.clone();
                x.remove(pos);
                n.insert(index[&x]);
                for w in vocab {
                    let mut x = l.clone();
                    x[pos] = w;
                    n.insert(index[&x]);
                }
            }
            n.into_iter().collect()
        })
        .collect();
    (0..lists.len())
        .map(|src| {
            let mut dist = vec![usize::MAX; lists.len()];
            dist[src] = 0;
            let mut queue = VecDeque::from([src]);
            while let Some(u) = queue.pop_front() {
                for &v in &neighbours[u] {
                    if dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
            dist
        })
        .collect()
}

fn wer_oracle() -> Outcome {
    let vocab = ["saya", "coding", "banget"];
    let lists = all_lists(&vocab, 5);
    let dist = graph_distances(&lists, &vocab);
    let mut pairs = 0usize;
    for (ri, r) in lists.iter().enumerate() {
        if r.is_empty() {
            ensure!(eval::align_wer(r, &lists[1]).is_err(), "empty reference accepted");
            continue;
        }
        for (hi, h) in lists.iter().enumerate() {
            let c = eval::align_wer(r, h).map_err(|e| e.to_string())?;
            ensure!(
                c.errors() == dist[ri][hi],
                "{r:?} vs {h:?}: {} edits, oracle {}",
                c.errors(),
                dist[ri][hi]
            );
            ensure!(c.ref_len == r.len(), "ref_len");
            ensure!(c.substitutions + c.deletions <= c.ref_len, "S + D > N");
            ensure!(c.ref_len - c.deletions + c.insertions == h.len(), "counts do not rebuild hyp");
            pairs += 1;
        }
    }
    Ok(format!("{pairs} pairs"))
}

// ---------------------------------------------------------------- word lists

fn cmudict_words() -> Vec<&'static str> {
    let mut words: Vec<&str> = G2p::builtin()
        .en_dict
        .words()
        .filter(|w| (4..=10).contains(&w.len()) && w.bytes().all(|b| b.is_ascii_lowercase()))
        .collect();
    words.sort_unstable();
    words
}

/// Indonesian-looking words from open CV syllables with an optional final
/// consonant.
fn id_like_word(rng: &mut ChaCha8Rng) -> String {
    const ONSETS: [&str; 20] = [
        "b", "c", "d", "g", "h", "j", "k", "l", "m", "n", "p", "r", "s", "t", "w", "y", "ng", "ny",
        "", "",
    ];
    const VOWELS: [&str; 5] = ["a", "i", "u", "e", "o"];
    const CODAS: [&str; 10] = ["", "", "", "n", "ng", "r", "k", "t", "s", "h"];
    let syllables = rng.random_range(2..=3);
    let mut w = String::new();
    for _ in 0..syllables {
        w.push_str(ONSETS.choose(rng).unwrap());
        w.push_str(VOWELS.choose(rng).unwrap());
    }
    w.push_str(CODAS.choose(rng).unwrap());
    w
}

/// English-looking words built from common English spelling units.
fn en_like_word(rng: &mut ChaCha8Rng) -> String {
    // Plain consonants and vowels are shared with the Indonesian generator so
    // that the two languages overlap.
    const ONSETS: [&str; 32] = [
        "th", "sh", "ch", "wh", "str", "spr", "bl", "cl", "fl", "fr", "gr", "tr", "pl", "sl", "sw",
        "qu", "wr", "b", "d", "f", "g", "h", "k", "l", "m", "n", "p", "r", "s", "t", "w", "",
    ];
    const VOWELS: [&str; 12] = ["a", "e", "i", "o", "u", "ee", "ea", "oo", "ou", "ow", "oa", "ai"];
    const CODAS: [&str; 22] = [
        "ck", "ght", "nd", "st", "rd", "ll", "ss", "tch", "x", "th", "ve", "nk", "rt", "lf", "mp",
        "sh", "n", "t", "s", "k", "r", "",
    ];
    const SUFFIXES: [&str; 8] = ["", "", "", "er", "ing", "ed", "ly", "ness"];
    let mut w = String::new();
    for _ in 0..rng.random_range(1..=2) {
        w.push_str(ONSETS.choose(rng).unwrap());
        w.push_str(VOWELS.choose(rng).unwrap());
        w.push_str(CODAS.choose(rng).unwrap());
    }
    w.push_str(SUFFIXES.choose(rng).unwrap());
    w
}

fn en_words(n: usize, seed: u64, exclude: &HashSet<&str>) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    while out.len() < n {
        let w = en_like_word(&mut rng);
        if !exclude.contains(w.as_str()) && seen.insert(w.clone()) {
            out.push(w);
        }
    }
    out
}

fn id_words(n: usize, seed: u64, exclude: &HashSet<&str>) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    while out.len() < n {
        let w = id_like_word(&mut rng);
        if !exclude.contains(w.as_str()) && seen.insert(w.clone()) {
            out.push(w);
        }
    }
    out
}

// ---------------------------------------------------------------- LID

fn sentences_from(words: &[String], reps: usize, len: usize, rng: &mut ChaCha8Rng) -> Vec<String> {
    let mut pool: Vec<&String> = words.iter().flat_map(|w| std::iter::repeat_n(w, reps)).collect();
    pool.shuffle(rng);
    pool.chunks(len)
        .map(|c| c.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(" "))
        .collect()
}

fn lid_guarantee() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut id = id_words(500, 7, &HashSet::new());
    let id_set: HashSet<&str> = id.iter().map(String::as_str).collect();
    let mut en = en_words(500, 8, &id_set);
    drop(id_set);
    en.shuffle(&mut rng);
    id.shuffle(&mut rng);
    let (id_train, id_test) = id.split_at(400);
    let (en_train, en_test) = en.split_at(400);

    let id_sents = sentences_from(id_train, 3, 8, &mut rng);
    let en_sents = sentences_from(en_train, 3, 8, &mut rng);
    let model = LidModel::train(&id_sents, &en_sents, &[], LidConfig::default())
        .map_err(|e| e.to_string())?;
    let mut backend = &model;

    // Exclusive lexicon words.
    let mut exclusive = 0;
    for lang in LanguageTag::ALL {
        let other = model.stats(lang.other());
        for word in model.stats(lang).lexicon.keys() {
            if other.lexicon.contains_key(word) {
                continue;
            }
            let tagged = classify_tokens(&mut backend, &Token::from_words(&[word]))
                .map_err(|e| e.to_string())?;
            let t = &tagged[0];
            ensure!(
                t.lang == lang && t.confidence == 1.0 && t.source == LabelSource::Lexicon,
                "{word}: {:?} {} {:?}",
                t.lang,
                t.confidence,
                t.source
            );
            exclusive += 1;
        }
    }
    ensure!(exclusive == 800, "expected 800 exclusive words, saw {exclusive}");

    // Held-out code-switched sentences: mostly one language with one to
    // three words of the other.
    let mut correct = 0usize;
    let mut total = 0usize;
    for s in 0..200 {
        let (major, minor, major_lang) = if s % 2 == 0 {
            (id_test, en_test, LanguageTag::Id)
        } else {
            (en_test, id_test, LanguageTag::En)
        };
        let mut words: Vec<(&String, LanguageTag)> = major
            .choose_multiple(&mut rng, 6)
            .map(|w| (w, major_lang))
            .collect();
        let k = rng.random_range(1..=3);
        for w in minor.choose_multiple(&mut rng, k) {
            let at = rng.random_range(0..=words.len());
            words.insert(at, (w, major_lang.other()));
        }
        let surfaces: Vec<&str> = words.iter().map(|(w, _)| w.as_str()).collect();
        let tagged = classify_tokens(&mut backend, &Token::from_words(&surfaces))
            .map_err(|e| e.to_string())?;
        for (t, (_, gold)) in tagged.iter().zip(&words) {
            total += 1;
            correct += usize::from(t.lang == *gold);
        }
    }
    let acc = correct as f64 / total as f64;
    ensure!(acc >= 0.90, "held-out accuracy {acc:.4} < 0.90");
    Ok(format!("{exclusive} exclusive words exact; held-out accuracy {acc:.4} over {total} words"))
}

// ---------------------------------------------------------------- G2P

fn g2p_table() -> Outcome {
    let g = G2p::builtin();
    // Indonesian: spelling rules, with enak/sore/kerja from the taling list.
    let id_table: [(&str, &str); 24] = [
        ("nyanyi", "ɲ a ɲ i"),
        ("mengapa", "m ə ŋ a p a"),
        ("syukur", "ʃ u k u r"),
        ("akhir", "a x i r"),
        ("khusus", "x u s u s"),
        ("cuci", "tʃ u tʃ i"),
        ("jalan", "dʒ a l a n"),
        ("sampai", "s a m p ai̯"),
        ("pulau", "p u l au̯"),
        ("amboi", "a m b oi̯"),
        ("daun", "d a u n"),
        ("besar", "b ə s a r"),
        ("sekolah", "s ə k o l a h"),
        ("ketupat", "k ə t u p a t"),
        ("yakin", "j a k i n"),
        ("quran", "k u r a n"),
        ("variasi", "f a r i a s i"),
        ("xilofon", "k s i l o f o n"),
        ("bunga", "b u ŋ a"),
        ("anggur", "a ŋ g u r"),
        ("pohon", "p o h o n"),
        ("enak", "e n a k"),
        ("sore", "s o r e"),
        ("kerja", "k e r dʒ a"),
    ];
    // English: pronouncing-dictionary entries, stress removed, mapped to IPA.
    let en_table: [(&str, &str); 25] = [
        ("speech", "s p iː tʃ"),
        ("coding", "k oʊ d ɪ ŋ"),
        ("meeting", "m iː t ɪ ŋ"),
        ("deadline", "d ɛ d l aɪ n"),
        ("weekend", "w iː k ɛ n d"),
        ("laptop", "l æ p t ɑ p"),
        ("software", "s ɔ f t w ɛ ɹ"),
        ("project", "p ɹ ɑ dʒ ɛ k t"),
        ("email", "iː m eɪ l"),
        ("online", "ɔ n l aɪ n"),
        ("happy", "h æ p iː"),
        ("thanks", "θ æ ŋ k s"),
        ("family", "f æ m ə l iː"),
        ("computer", "k ə m p j uː t ɝ"),
        ("update", "ə p d eɪ t"),
        ("download", "d aʊ n l oʊ d"),
        ("weather", "w ɛ ð ɝ"),
        ("nothing", "n ə θ ɪ ŋ"),
        ("judge", "dʒ ə dʒ"),
        ("pleasure", "p l ɛ ʒ ɝ"),
        ("thought", "θ ɔ t"),
        ("yellow", "j ɛ l oʊ"),
        ("church", "tʃ ɝ tʃ"),
        ("voice", "v ɔɪ s"),
        ("measure", "m ɛ ʒ ɝ"),
    ];
    for (word, want) in id_table {
        let got = g.g2p_id(word).map_err(|e| e.to_string())?;
        ensure!(got.phones.join(" ") == want, "ID {word}: {} vs {want}", got.phones.join(" "));
        ensure!(!got.fallback, "ID {word} flagged fallback");
    }
    for (word, want) in en_table {
        let got = g.g2p_en(word).map_err(|e| e.to_string())?;
        ensure!(got.phones.join(" ") == want, "EN {word}: {} vs {want}", got.phones.join(" "));
        ensure!(!got.fallback, "EN {word} flagged fallback");
    }

    // Closure over 10k-word samples per path.
    let inv = &g.inventory;
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let letters = b"abcdefghijklmnopqrstuvwxyz";
    let random_word = |rng: &mut ChaCha8Rng| -> String {
        let n = rng.random_range(1..=12);
        (0..n).map(|_| *letters.choose(rng).unwrap() as char).collect()
    };
    let mut checked = 0;
    let ids = id_words(5_000, 5, &HashSet::new());
    for w in ids.iter().cloned().chain((0..5_000).map(|_| random_word(&mut rng))) {
        let seq = g.g2p_id(&w).map_err(|e| e.to_string())?;
        ensure!(!seq.phones.is_empty(), "ID {w}: no phones");
        if let Some(p) = seq.phones.iter().find(|p| !inv.contains(p)) {
            return Err(format!("ID {w}: {p} outside inventory"));
        }
        checked += 1;
    }
    let dict = cmudict_words();
    for w in dict.choose_multiple(&mut rng, 10_000) {
        let seq = g.g2p_en(w).map_err(|e| e.to_string())?;
        if let Some(p) = seq.phones.iter().find(|p| !inv.contains(p)) {
            return Err(format!("EN {w}: {p} outside inventory"));
        }
        checked += 1;
    }
    for _ in 0..10_000 {
        let w = random_word(&mut rng);
        let phones = letter_to_sound(w.as_bytes());
        ensure!(!phones.is_empty(), "LTS {w}: no phones");
        if let Some(p) = phones.iter().find(|p| !inv.contains(p)) {
            return Err(format!("LTS {w}: {p} outside inventory"));
        }
        checked += 1;
    }
    Ok(format!(
        "{} ID + {} EN table words exact; {checked} closure samples",
        id_table.len(),
        en_table.len()
    ))
}

// ---------------------------------------------------------------- TestSet

fn synthetic_pairs(n: usize, seed: u64) -> Vec<ParallelPair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let id_vocab = id_words(300, 11, &HashSet::new());
    let en_vocab = cmudict_words();
    let id_stop = ["yang", "di", "dan", "ke"];
    let en_stop = ["the", "of", "and", "to"];
    (0..n)
        .map(|_| {
            let w = rng.random_range(1..=10);
            let mut id = Vec::new();
            let mut en = Vec::new();
            for _ in 0..w {
                if rng.random_bool(0.2) {
                    let k = rng.random_range(0..id_stop.len());
                    id.push(id_stop[k].to_string());
                    en.push(en_stop[k].to_string());
                } else {
                    id.push(id_vocab.choose(&mut rng).unwrap().clone());
                    en.push(en_vocab.choose(&mut rng).unwrap().to_string());
                }
            }
            let aligned: Vec<(usize, usize)> =
                (0..w).filter(|_| rng.random_bool(0.7)).map(|i| (i, i)).collect();
            ParallelPair::new(&id.join(" "), &en.join(" ")).with_alignment(aligned)
        })
        .collect()
}

fn testset_constraints() -> Outcome {
    let pairs = synthetic_pairs(100, 31);
    let cfg = TestsetConfig::new(5);
    let (items, report) = testset::build_testset(&pairs, &cfg).map_err(|e| e.to_string())?;
    ensure!(
        items.len() == 700 - report.skipped.len(),
        "{} items with {} skips",
        items.len(),
        report.skipped.len()
    );
    let json = serde_json::to_string(&report).map_err(|e| e.to_string())?;
    let parsed: serde_json::Value = serde_json::from_str(&json).map_err(|e| e.to_string())?;
    ensure!(
        parsed["skipped"].as_array().map(Vec::len) == Some(report.skipped.len()),
        "skip report does not round-trip"
    );

    for item in &items {
        let en = item.labels.iter().filter(|l| **l == LanguageTag::En).count();
        let id = item.labels.len() - en;
        let w = item.labels.len();
        let ok = w > 0
            && item.tokens.len() == w
            && match item.case {
                CsCase::En => id == 0,
                CsCase::Id => en == 0,
                CsCase::IdCs1En => en == 1 && id >= 1,
                CsCase::IdCs2En => en == 2 && id >= 1,
                CsCase::EnCs1Id => id == 1 && en >= 1,
                CsCase::EnCs2Id => id == 2 && en >= 1,
                CsCase::HalfHalf => en == w / 2,
            };
        ensure!(ok, "pair {} case {} violates its constraint: {:?}", item.pair_index, item.case, item.labels);
    }

    // Independent count of which cases should have been skipped.
    let mut expected_skips = BTreeSet::new();
    for (pi, pair) in pairs.iter().enumerate() {
        let id_words: Vec<&str> = pair.id.split(' ').collect();
        let en_words: Vec<&str> = pair.en.split(' ').collect();
        let aligned: HashSet<usize> = pair.alignment.iter().flatten().map(|&(i, _)| i).collect();
        let eligible = |words: &[&str], stop: &HashSet<String>| {
            (0..words.len())
                .filter(|i| aligned.contains(i) && words[*i].len() >= 3 && !stop.contains(words[*i]))
                .count()
        };
        let e_id = eligible(&id_words, &cfg.stopwords_id);
        let e_en = eligible(&en_words, &cfg.stopwords_en);
        let w = id_words.len();
        for case in CsCase::ALL {
            let emitted = match case {
                CsCase::En | CsCase::Id => true,
                CsCase::IdCs1En => w >= 2 && e_id >= 1,
                CsCase::IdCs2En => w >= 3 && e_id >= 2,
                CsCase::EnCs1Id => w >= 2 && e_en >= 1,
                CsCase::EnCs2Id => w >= 3 && e_en >= 2,
                CsCase::HalfHalf => w >= 2 && e_id >= w / 2,
            };
            if !emitted {
                expected_skips.insert((pi, case));
            }
        }
    }
    let actual: BTreeSet<(usize, CsCase)> =
        report.skipped.iter().map(|s| (s.pair_index, s.case)).collect();
    ensure!(actual == expected_skips, "skip set differs from the independent count");

    let (again, _) = testset::build_testset(&pairs, &cfg).map_err(|e| e.to_string())?;
    ensure!(again == items, "not deterministic");
    Ok(format!("{} items, {} skips, all constraints hold", items.len(), report.skipped.len()))
}

// ---------------------------------------------------------------- plans

fn allocation_plans() -> Outcome {
    let mos = PlanParams::mos(7, 4, 7);
    let plan = eval::plan_allocation(&mos).map_err(|e| e.to_string())?;
    ensure!(plan.segment_count() == 196, "MOS total {}", plan.segment_count());
    ensure!(plan.questionnaires.len() == 7, "MOS questionnaires");
    let mut seen = HashSet::new();
    for q in &plan.questionnaires {
        ensure!(q.len() == 28, "MOS questionnaire of {}", q.len());
        for s in q {
            ensure!(seen.insert(*s), "MOS segment {s:?} repeated");
        }
        for m in 0..4 {
            ensure!(q.iter().filter(|s| s.model == m).count() == 7, "MOS model balance");
        }
    }
    ensure!(seen.len() == 7 * 7 * 4, "MOS coverage");

    let sus = PlanParams::sus(14, 4, 7);
    let plan = eval::plan_allocation(&sus).map_err(|e| e.to_string())?;
    ensure!(plan.segment_count() == 56, "SUS total {}", plan.segment_count());
    let mut seen = HashSet::new();
    for q in &plan.questionnaires {
        ensure!(q.len() == 8, "SUS questionnaire of {}", q.len());
        for m in 0..4 {
            ensure!(q.iter().filter(|s| s.model == m).count() == 2, "SUS model balance");
        }
        for s in q {
            ensure!(seen.insert((s.text, s.model)), "SUS segment repeated");
        }
    }
    ensure!(seen.len() == 56, "SUS coverage");
    ensure!(
        matches!(eval::plan_allocation(&PlanParams::sus(14, 4, 5)), Err(Error::Config(_))),
        "q=5 accepted"
    );
    Ok("196 = 7 x 28 and 56 = 7 x 8 with 2 per model".into())
}

// ---------------------------------------------------------------- E2E

fn mixed_corpus(n: usize, seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let id = id_words(400, 3, &HashSet::new());
    let en = cmudict_words();
    let mut text = String::new();
    for _ in 0..n {
        let len = rng.random_range(1..=12);
        let mut words: Vec<String> = (0..len)
            .map(|_| {
                if rng.random_bool(0.3) {
                    en.choose(&mut rng).unwrap().to_string()
                } else {
                    id.choose(&mut rng).unwrap().clone()
                }
            })
            .collect();
        if rng.random_bool(0.2) {
            words.insert(rng.random_range(0..=words.len()), rng.random_range(1..2025).to_string());
        }
        if rng.random_bool(0.3) {
            let at = rng.random_range(0..words.len());
            words[at].push(',');
        }
        let mut first = words[0].chars();
        let head = first.next().unwrap().to_uppercase().collect::<String>();
        words[0] = head + first.as_str();
        let end = ["", ".", "?", "!"].choose(&mut rng).unwrap();
        text.push_str(&words.join(" "));
        text.push_str(end);
        text.push('\n');
    }
    text
}

fn phonemize_cli(input: &Path, jobs: usize) -> Result<Vec<u8>, String> {
    let mock = env!("CARGO_BIN_EXE_csfront-mock-lid");
    let out = Command::new(env!("CARGO_BIN_EXE_csfront"))
        .env_remove("CSFRONT_CONFIG")
        .args(["--lid-backend", "extern", "--lid-command"])
        .arg(format!("'{mock}' --pattern ID,ID,EN"))
        .arg("--jobs")
        .arg(jobs.to_string())
        .arg("phonemize")
        .arg(input)
        .stderr(Stdio::piped())
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "exit {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(out.stdout)
}

fn e2e_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let input = dir.path().join("corpus.txt");
    std::fs::write(&input, mixed_corpus(1000, 77)).map_err(|e| e.to_string())?;
    let a = phonemize_cli(&input, 1)?;
    let b = phonemize_cli(&input, 1)?;
    let c = phonemize_cli(&input, 4)?;
    ensure!(a == b, "two --jobs 1 runs differ");
    ensure!(a == c, "--jobs 1 and --jobs 4 differ");
    let text = String::from_utf8(a).map_err(|e| e.to_string())?;
    let inv = &G2p::builtin().inventory;
    let mut lines = 0;
    for line in text.lines() {
        pipeline::deserialize(line, inv).map_err(|e| format!("line {}: {e}", lines + 1))?;
        lines += 1;
    }
    ensure!(lines == 1000, "{lines} output lines");
    Ok(format!("1000 lines, {} bytes identical across runs and job counts", text.len()))
}

// ---------------------------------------------------------------- protocol

fn protocol_negatives() -> Outcome {
    let mock = env!("CARGO_BIN_EXE_csfront-mock-lid");
    let words = ["saya", "suka", "coding"];
    let request = |args: &[&str]| -> Result<Vec<LanguageTag>, Error> {
        let mut session = ExternalSession::spawn(mock, args)?;
        session.request(&words)
    };

    let ok = request(&["--respond", "ID ID EN"]).map_err(|e| e.to_string())?;
    ensure!(ok == [LanguageTag::Id, LanguageTag::Id, LanguageTag::En], "echo mock: {ok:?}");

    let short = request(&["--short"]);
    ensure!(matches!(short, Err(Error::Protocol(_))), "short response gave {short:?}");
    let unknown = request(&["--bad-label", "FR"]);
    ensure!(matches!(unknown, Err(Error::Protocol(_))), "unknown label gave {unknown:?}");
    let missing = request(&["--no-handshake"]);
    ensure!(matches!(missing, Err(Error::Handshake(_))), "missing handshake gave {missing:?}");
    let wrong = request(&["--handshake", "LIDPROTO 2"]);
    ensure!(matches!(wrong, Err(Error::Handshake(_))), "wrong greeting gave {wrong:?}");
    let gone = request(&["--exit-after", "0"]);
    ensure!(matches!(gone, Err(Error::Transport(_))), "early exit gave {gone:?}");
    Ok("short/unknown label -> protocol, no greeting -> handshake, exit -> transport".into())
}

fn main() {
    let mut suite = Suite { failed: 0 };
    suite.run("mos-published-totals", Duration::from_secs(1), published_mos);
    suite.run("wer-oracle-equivalence", Duration::from_secs(30), wer_oracle);
    suite.run("lid-lexicon-guarantee", Duration::from_secs(10), lid_guarantee);
    suite.run("g2p-oracle-table", Duration::from_secs(60), g2p_table);
    suite.run("testset-constraints", Duration::from_secs(5), testset_constraints);
    suite.run("allocation-plans", Duration::from_secs(5), allocation_plans);
    suite.run("e2e-determinism", Duration::from_secs(120), e2e_determinism);
    suite.run("protocol-negatives", Duration::from_secs(30), protocol_negatives);
    if suite.failed > 0 {
        println!("{} acceptance criteria failed", suite.failed);
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
