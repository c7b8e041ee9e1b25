use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Subcommand};
use serde_json::json;

use csfront::corpus::{self, LabeledSentence, Ratio};
use csfront::eval::{self, PlanMode, PlanParams};
use csfront::g2p::G2pPaths;
use csfront::lid::{self, ExternalSession, WordVerdict};
use csfront::pipeline;
use csfront::testset::{self, BilingualDict, SusLexicon, Template, TestsetConfig};
use csfront::{Error, G2p, LanguageTag, LidBackend, LidModel, Result, Token};

use crate::config::{BackendKind, Config};

#[derive(Debug, Subcommand)]
pub enum LidCommand {
    /// Train the built-in lexicon + n-gram model
    Train {
        /// Indonesian sentences, one per line
        #[arg(long)]
        id: PathBuf,
        /// English sentences, one per line
        #[arg(long)]
        en: PathBuf,
        /// Word-labeled code-switched rows (JSON lines)
        #[arg(long)]
        cs: Option<PathBuf>,
        /// Where to write the model (default: standard output)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Label every token of each input sentence
    Tag {
        /// Sentences, one per line (default: standard input)
        input: Option<PathBuf>,
    },
    /// Score the configured backend against word-labeled rows
    Eval {
        /// Gold rows (JSON lines)
        gold: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Args)]
pub struct PhonemizeArgs {
    /// Sentences, one per line (default: standard input)
    input: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum CorpusCommand {
    /// Build the mixed LID training set at a fixed row ratio
    Undersample {
        #[arg(long)]
        id: PathBuf,
        #[arg(long)]
        en: PathBuf,
        #[arg(long)]
        cs: PathBuf,
        /// ID:EN:CS row ratio
        #[arg(long, default_value = "5:5:1")]
        ratio: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum TestsetCommand {
    /// Build the seven-case test set from parallel pairs
    Build {
        /// Pairs file (JSON lines with id, en and optional alignment)
        #[arg(long)]
        pairs: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Where to write the skip report as JSON
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum SusCommand {
    /// Generate distinct sentences from slotted templates
    Gen {
        /// One template per line
        #[arg(long)]
        templates: PathBuf,
        /// LANG<TAB>slot<TAB>word lines
        #[arg(long)]
        lexicon: PathBuf,
        #[arg(short, long, default_value_t = 14)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum EvalCommand {
    /// Pooled WER per model from item_id,model,reference,transcript rows
    Wer {
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// MOS table from respondent,case,model,score rows
    Mos {
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Preference ranks from respondent,case,rank1,...,rankN rows
    Rank {
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    /// mos or sus
    #[arg(long)]
    mode: String,
    /// Texts per case (mos) or sentences (sus)
    #[arg(long)]
    texts: usize,
    #[arg(long)]
    models: usize,
    #[arg(long)]
    questionnaires: usize,
    /// Shuffle question order inside each questionnaire using the seed
    #[arg(long)]
    shuffle: bool,
    /// Emit the full plan as JSON instead of a summary table
    #[arg(long)]
    json: bool,
}

fn read_utf8(path: &Path) -> Result<String> {
    let bytes = fs::read(path)
        .map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
    String::from_utf8(bytes)
        .map_err(|_| Error::Encoding(format!("{} is not valid UTF-8", path.display())))
}

fn open_input(path: Option<&Path>) -> Result<Box<dyn BufRead>> {
    Ok(match path {
        Some(p) if p != Path::new("-") => Box::new(BufReader::new(
            File::open(p).map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", p.display())))?,
        )),
        _ => Box::new(io::stdin().lock()),
    })
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

/// Lines of `input`, rejecting invalid UTF-8 with the line number.
fn utf8_lines(input: Box<dyn BufRead>) -> impl Iterator<Item = io::Result<String>> {
    input.split(b'\n').enumerate().map(|(i, line)| {
        let mut bytes = line?;
        if bytes.last() == Some(&b'\r') {
            bytes.pop();
        }
        String::from_utf8(bytes).map_err(|_| {
            io::Error::new(io::ErrorKind::InvalidData, format!("line {}: invalid UTF-8", i + 1))
        })
    })
}

fn io_to_encoding(e: Error) -> Error {
    match e {
        Error::Io(io) if io.kind() == io::ErrorKind::InvalidData => Error::Encoding(io.to_string()),
        other => other,
    }
}

fn load_g2p(cfg: &Config) -> Result<G2p> {
    let paths = G2pPaths {
        inventory: cfg.inventory.as_deref(),
        arpabet_map: cfg.arpabet_map.as_deref(),
        id_exceptions: cfg.id_exceptions.as_deref(),
        en_dict: cfg.en_dict.as_deref(),
    };
    if paths.inventory.is_none()
        && paths.arpabet_map.is_none()
        && paths.id_exceptions.is_none()
        && paths.en_dict.is_none()
    {
        return Ok(G2p::builtin().clone());
    }
    G2p::load(&paths)
}

/// The configured LID backend for one worker.
enum Backend<'m> {
    Builtin(&'m LidModel),
    Extern(ExternalSession),
}

impl LidBackend for Backend<'_> {
    fn label_words(&mut self, words: &[&str]) -> Result<Vec<WordVerdict>> {
        match self {
            Backend::Builtin(m) => m.label_words(words),
            Backend::Extern(s) => s.label_words(words),
        }
    }
}

fn load_model(cfg: &Config) -> Result<Option<LidModel>> {
    match cfg.lid_backend {
        BackendKind::Builtin => {
            let path = cfg.lid_model.as_deref().ok_or_else(|| {
                Error::Config("the builtin LID backend needs lid_model (train one with `lid train`)".into())
            })?;
            LidModel::load(path).map(Some)
        }
        BackendKind::Extern => Ok(None),
    }
}

fn make_backends<'m>(cfg: &Config, model: Option<&'m LidModel>, n: usize) -> Result<Vec<Backend<'m>>> {
    (0..n)
        .map(|_| match (cfg.lid_backend, model) {
            (BackendKind::Builtin, Some(m)) => Ok(Backend::Builtin(m)),
            (BackendKind::Builtin, None) => Err(Error::Config("no LID model loaded".into())),
            (BackendKind::Extern, _) => {
                let argv = cfg.lid_command.as_ref().ok_or_else(|| {
                    Error::Config("the extern LID backend needs lid_command".into())
                })?;
                ExternalSession::spawn(&argv[0], &argv[1..]).map(Backend::Extern)
            }
        })
        .collect()
}

fn write_json_line<W: Write + ?Sized>(out: &mut W, value: &serde_json::Value) -> Result<()> {
    writeln!(out, "{value}")?;
    Ok(())
}

pub fn lid(cmd: LidCommand, cfg: &Config) -> Result<()> {
    match cmd {
        LidCommand::Train { id, en, cs, out } => {
            let text = |rows: Vec<LabeledSentence>| rows.iter().map(LabeledSentence::text).collect::<Vec<_>>();
            let id_rows = text(corpus::load_monolingual(&id, LanguageTag::Id)?);
            let en_rows = text(corpus::load_monolingual(&en, LanguageTag::En)?);
            let cs_rows = match &cs {
                Some(p) => corpus::load_labeled(p)?,
                None => Vec::new(),
            };
            let model = LidModel::train(&id_rows, &en_rows, &cs_rows, cfg.lid)?;
            eprintln!(
                "trained on {} ID, {} EN, {} CS rows; lexicons {} ID / {} EN words",
                id_rows.len(),
                en_rows.len(),
                cs_rows.len(),
                model.stats(LanguageTag::Id).lexicon.len(),
                model.stats(LanguageTag::En).lexicon.len()
            );
            match out {
                Some(p) => model.save(p),
                None => {
                    let mut stdout = io::stdout().lock();
                    serde_json::to_writer(&mut stdout, &model).map_err(io::Error::from)?;
                    writeln!(stdout)?;
                    Ok(())
                }
            }
        }
        LidCommand::Tag { input } => {
            let model = load_model(cfg)?;
            let mut backend = make_backends(cfg, model.as_ref(), 1)?.pop().expect("one backend");
            let mut out = io::stdout().lock();
            for line in utf8_lines(open_input(input.as_deref())?) {
                let text = csfront::normalize(&line.map_err(|e| io_to_encoding(e.into()))?);
                let tagged = lid::classify_tokens(&mut backend, &csfront::tokenize(&text))?;
                let tokens: Vec<serde_json::Value> = tagged
                    .iter()
                    .map(|t| {
                        json!({
                            "surface": t.token.surface,
                            "kind": t.token.kind,
                            "lang": t.lang,
                            "confidence": t.confidence,
                            "source": t.source,
                        })
                    })
                    .collect();
                write_json_line(&mut out, &json!({ "text": text, "tokens": tokens }))?;
            }
            Ok(())
        }
        LidCommand::Eval { gold, json } => {
            let rows = corpus::load_labeled(&gold)?;
            let model = load_model(cfg)?;
            let mut backend = make_backends(cfg, model.as_ref(), 1)?.pop().expect("one backend");
            let mut pred = Vec::new();
            let mut want = Vec::new();
            for row in &rows {
                let tagged = lid::classify_tokens(&mut backend, &Token::from_words(&row.tokens))?;
                pred.extend(tagged.iter().map(|t| t.lang));
                want.extend(row.labels.iter().copied());
            }
            let report = lid::lid_eval(&pred, &want)?;
            let mut out = io::stdout().lock();
            if json {
                serde_json::to_writer(&mut out, &report).map_err(io::Error::from)?;
                writeln!(out)?;
            } else {
                writeln!(out, "words     {}", report.total)?;
                writeln!(out, "accuracy  {:.4}", report.accuracy)?;
                writeln!(out, "class  precision  recall      f1")?;
                for lang in LanguageTag::ALL {
                    let c = report.class(lang);
                    writeln!(out, "{lang:<5}  {:>9.4}  {:>6.4}  {:>6.4}", c.precision, c.recall, c.f1)?;
                }
                writeln!(out, "confusion (rows gold, columns predicted: ID EN)")?;
                for (lang, row) in LanguageTag::ALL.iter().zip(report.confusion) {
                    writeln!(out, "{lang:<5}  {:>6}  {:>6}", row[0], row[1])?;
                }
            }
            Ok(())
        }
    }
}

pub fn phonemize(args: PhonemizeArgs, cfg: &Config) -> Result<()> {
    let g2p = load_g2p(cfg)?;
    let model = load_model(cfg)?;
    let backends = make_backends(cfg, model.as_ref(), cfg.jobs)?;
    let mut out = io::stdout().lock();
    pipeline::run_batch(utf8_lines(open_input(args.input.as_deref())?), &g2p, backends, |line| {
        writeln!(out, "{line}")?;
        Ok(())
    })
    .map_err(io_to_encoding)?;
    out.flush()?;
    Ok(())
}

pub fn corpus(cmd: CorpusCommand, cfg: &Config) -> Result<()> {
    match cmd {
        CorpusCommand::Undersample { id, en, cs, ratio, out } => {
            let ratio: Ratio = ratio.parse()?;
            let id_rows = corpus::load_monolingual(&id, LanguageTag::Id)?;
            let en_rows = corpus::load_monolingual(&en, LanguageTag::En)?;
            let cs_rows = corpus::load_labeled(&cs)?;
            let mixed = corpus::undersample(&id_rows, &en_rows, &cs_rows, ratio, cfg.seed)?;
            let unit = cs_rows.len() / ratio.cs;
            eprintln!(
                "kept {} of {} ID, {} of {} EN, {} of {} CS rows",
                unit * ratio.id,
                id_rows.len(),
                unit * ratio.en,
                en_rows.len(),
                unit * ratio.cs,
                cs_rows.len()
            );
            let mut w = open_output(out.as_deref())?;
            corpus::write_labeled(&mixed, &mut w)?;
            w.flush()?;
            Ok(())
        }
    }
}

fn testset_config(cfg: &Config) -> Result<TestsetConfig> {
    let mut tc = TestsetConfig::new(cfg.seed);
    if let Some(p) = &cfg.stopwords_id {
        tc.stopwords_id = testset::parse_stopwords(&read_utf8(p)?);
    }
    if let Some(p) = &cfg.stopwords_en {
        tc.stopwords_en = testset::parse_stopwords(&read_utf8(p)?);
    }
    if let Some(p) = &cfg.bilingual_dict {
        tc.dict = Some(BilingualDict::parse(&read_utf8(p)?)?);
    }
    Ok(tc)
}

pub fn testset(cmd: TestsetCommand, cfg: &Config) -> Result<()> {
    match cmd {
        TestsetCommand::Build { pairs, out, report } => {
            let pairs = testset::parse_pairs(&read_utf8(&pairs)?)?;
            let (items, skips) = testset::build_testset(&pairs, &testset_config(cfg)?)?;
            let mut w = open_output(out.as_deref())?;
            testset::write_items(&items, &mut w)?;
            w.flush()?;
            eprintln!(
                "{} items from {} pairs, {} skipped",
                skips.emitted,
                pairs.len(),
                skips.skipped.len()
            );
            if let Some(p) = report {
                let f = BufWriter::new(File::create(p)?);
                serde_json::to_writer_pretty(f, &skips).map_err(io::Error::from)?;
            }
            Ok(())
        }
    }
}

pub fn sus(cmd: SusCommand, cfg: &Config) -> Result<()> {
    match cmd {
        SusCommand::Gen { templates, lexicon, n, out } => {
            let templates: Vec<Template> = read_utf8(&templates)?
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(Template::parse)
                .collect::<Result<_>>()?;
            let lexicon = SusLexicon::parse(&read_utf8(&lexicon)?)?;
            let sentences = testset::gen_sus(&templates, &lexicon, n, cfg.seed)?;
            let mut w = open_output(out.as_deref())?;
            for s in &sentences {
                serde_json::to_writer(&mut w, s).map_err(io::Error::from)?;
                writeln!(w)?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

fn read_file(path: &Path) -> Result<impl Read> {
    File::open(path).map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", path.display())).into())
}

pub fn eval(cmd: EvalCommand) -> Result<()> {
    let mut out = io::stdout().lock();
    match cmd {
        EvalCommand::Wer { input, json } => {
            let rows = eval::read_transcripts(read_file(&input)?)?;
            let by_model = eval::wer_by_model(&rows)?;
            let mut pooled = eval::AlignmentCounts::default();
            for m in &by_model {
                pooled.add(&m.counts);
            }
            if json {
                write_json_line(
                    &mut out,
                    &json!({ "models": by_model, "pooled": pooled, "wer": pooled.wer() }),
                )?;
            } else {
                writeln!(out, "{:<16} {:>6} {:>6} {:>5} {:>5} {:>5} {:>8}", "Model", "Items", "Words", "S", "D", "I", "WER")?;
                for m in &by_model {
                    let c = m.counts;
                    writeln!(
                        out,
                        "{:<16} {:>6} {:>6} {:>5} {:>5} {:>5} {:>7.2}%",
                        m.model,
                        m.items,
                        c.ref_len,
                        c.substitutions,
                        c.deletions,
                        c.insertions,
                        100.0 * m.wer
                    )?;
                }
            }
        }
        EvalCommand::Mos { input, json } => {
            let table = eval::mos_aggregate(&eval::read_mos(read_file(&input)?)?)?;
            if json {
                serde_json::to_writer(&mut out, &table).map_err(io::Error::from)?;
                writeln!(out)?;
            } else {
                write!(out, "{}", table.to_text())?;
            }
        }
        EvalCommand::Rank { input, json } => {
            let tally = eval::rank_tally(&eval::read_ranks(read_file(&input)?)?)?;
            if json {
                serde_json::to_writer(&mut out, &tally).map_err(io::Error::from)?;
                writeln!(out)?;
            } else {
                write!(out, "{}", tally.to_text())?;
            }
        }
    }
    Ok(())
}

pub fn plan(args: PlanArgs, cfg: &Config) -> Result<()> {
    let mode: PlanMode = args.mode.parse()?;
    let params = PlanParams {
        mode,
        texts: args.texts,
        models: args.models,
        questionnaires: args.questionnaires,
        seed: args.shuffle.then_some(cfg.seed),
    };
    let plan = eval::plan_allocation(&params)?;
    plan.audit(&eval::expected_segments(&params))?;
    let mut out = io::stdout().lock();
    if args.json {
        serde_json::to_writer(&mut out, &plan).map_err(io::Error::from)?;
        writeln!(out)?;
    } else {
        write!(out, "{}", plan.to_text())?;
        writeln!(out, "{} segments in {} questionnaires", plan.segment_count(), plan.questionnaires.len())?;
    }
    Ok(())
}
