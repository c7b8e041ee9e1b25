mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use csfront::Error;

use crate::config::Config;

/// Indonesian-English code-switching TTS frontend and evaluation tools.
#[derive(Debug, Parser)]
#[command(name = "csfront", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,

    #[command(subcommand)]
    command: Command,
}

/// Settings that can also come from the config file. Flags win.
#[derive(Debug, Args)]
struct GlobalArgs {
    /// Config file (default: $CSFRONT_CONFIG)
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<String>,
    #[arg(long, global = true, value_name = "PATH")]
    inventory: Option<String>,
    #[arg(long, global = true, value_name = "PATH")]
    arpabet_map: Option<String>,
    #[arg(long, global = true, value_name = "PATH")]
    id_exceptions: Option<String>,
    #[arg(long, global = true, value_name = "PATH")]
    en_dict: Option<String>,
    #[arg(long, global = true, value_name = "PATH")]
    stopwords_id: Option<String>,
    #[arg(long, global = true, value_name = "PATH")]
    stopwords_en: Option<String>,
    #[arg(long, global = true, value_name = "PATH")]
    bilingual_dict: Option<String>,
    /// builtin or extern
    #[arg(long, global = true)]
    lid_backend: Option<String>,
    /// Trained model for the builtin backend
    #[arg(long, global = true, value_name = "PATH")]
    lid_model: Option<String>,
    /// Command line of the external backend, shell-quoted
    #[arg(long, global = true, value_name = "CMD")]
    lid_command: Option<String>,
    #[arg(long, global = true)]
    ngram_order: Option<String>,
    #[arg(long, global = true)]
    ngram_alpha: Option<String>,
    #[arg(long, global = true)]
    min_lex_count: Option<String>,
    /// Worker count for batch phonemization
    #[arg(long, global = true)]
    jobs: Option<String>,
}

impl GlobalArgs {
    fn overrides(&self) -> Vec<(&'static str, &str)> {
        let flags = [
            ("seed", &self.seed),
            ("inventory", &self.inventory),
            ("arpabet_map", &self.arpabet_map),
            ("id_exceptions", &self.id_exceptions),
            ("en_dict", &self.en_dict),
            ("stopwords_id", &self.stopwords_id),
            ("stopwords_en", &self.stopwords_en),
            ("bilingual_dict", &self.bilingual_dict),
            ("lid_backend", &self.lid_backend),
            ("lid_model", &self.lid_model),
            ("lid_command", &self.lid_command),
            ("ngram_order", &self.ngram_order),
            ("ngram_alpha", &self.ngram_alpha),
            ("min_lex_count", &self.min_lex_count),
            ("jobs", &self.jobs),
        ];
        flags
            .into_iter()
            .filter_map(|(k, v)| v.as_deref().map(|v| (k, v)))
            .collect()
    }

    fn resolve(&self) -> csfront::Result<Config> {
        let mut cfg = Config::discover(self.config.as_deref())?;
        for (key, value) in self.overrides() {
            cfg.set(key, value, None)
                .map_err(|e| Error::Config(format!("--{}: {e}", key.replace('_', "-"))))?;
        }
        cfg.check()?;
        Ok(cfg)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Train, apply and score word-level language identification
    #[command(subcommand)]
    Lid(commands::LidCommand),
    /// Phonemize sentences, one per line, into JSON lines
    Phonemize(commands::PhonemizeArgs),
    /// Training-data preparation
    #[command(subcommand)]
    Corpus(commands::CorpusCommand),
    /// Code-switching test sets
    #[command(subcommand)]
    Testset(commands::TestsetCommand),
    /// Semantically unpredictable sentences
    #[command(subcommand)]
    Sus(commands::SusCommand),
    /// Score listening tests and transcripts
    #[command(subcommand)]
    Eval(commands::EvalCommand),
    /// Assign audio segments to questionnaires
    Plan(commands::PlanArgs),
}

fn run(command: Command, cfg: &Config) -> csfront::Result<()> {
    match command {
        Command::Lid(c) => commands::lid(c, cfg),
        Command::Phonemize(a) => commands::phonemize(a, cfg),
        Command::Corpus(c) => commands::corpus(c, cfg),
        Command::Testset(c) => commands::testset(c, cfg),
        Command::Sus(c) => commands::sus(c, cfg),
        Command::Eval(c) => commands::eval(c),
        Command::Plan(a) => commands::plan(a, cfg),
    }
}

fn exit_status(err: &Error) -> u8 {
    match err {
        Error::Config(_) | Error::Inventory(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = cli
        .global
        .resolve()
        .and_then(|cfg| run(cli.command, &cfg));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("csfront: {e}");
            ExitCode::from(exit_status(&e))
        }
    }
}
