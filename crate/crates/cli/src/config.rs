//! Flat `key = value` configuration shared by all subcommands.
//!
//! Values come from built-in defaults, then the config file (`--config` or
//! the `CSFRONT_CONFIG` variable), then command-line flags.

use std::path::{Path, PathBuf};

use csfront::lid::LidConfig;
use csfront::{Error, Result};

pub const CONFIG_ENV: &str = "CSFRONT_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BackendKind {
    #[default]
    Builtin,
    Extern,
}

#[derive(Debug, Clone, Default)]
pub struct Config {
    pub inventory: Option<PathBuf>,
    pub arpabet_map: Option<PathBuf>,
    pub id_exceptions: Option<PathBuf>,
    pub en_dict: Option<PathBuf>,
    pub stopwords_id: Option<PathBuf>,
    pub stopwords_en: Option<PathBuf>,
    pub bilingual_dict: Option<PathBuf>,
    pub lid_backend: BackendKind,
    pub lid_model: Option<PathBuf>,
    pub lid_command: Option<Vec<String>>,
    pub lid: LidConfig,
    pub seed: u64,
    pub jobs: usize,
}

fn bad(key: &str, value: &str, what: &str) -> Error {
    Error::Config(format!("{key} = {value:?}: {what}"))
}

fn unquote(v: &str) -> &str {
    let v = v.trim();
    for q in ['"', '\''] {
        if let Some(inner) = v.strip_prefix(q).and_then(|s| s.strip_suffix(q)) {
            return inner;
        }
    }
    v
}

impl Config {
    pub fn new() -> Self {
        Config {
            jobs: 1,
            ..Config::default()
        }
    }

    /// Parses config text. Relative paths are taken relative to `base`.
    pub fn parse(text: &str, base: Option<&Path>) -> Result<Config> {
        let mut cfg = Config::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected key = value", i + 1))
            })?;
            cfg.set(key.trim(), unquote(value), base)
                .map_err(|e| match e {
                    Error::Config(m) => Error::Config(format!("line {}: {m}", i + 1)),
                    other => other,
                })?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        Config::parse(&text, path.parent())
    }

    /// Config named by `explicit`, else by `CSFRONT_CONFIG`, else defaults.
    pub fn discover(explicit: Option<&Path>) -> Result<Config> {
        if let Some(p) = explicit {
            return Config::load(p);
        }
        match std::env::var_os(CONFIG_ENV) {
            Some(p) if !p.is_empty() => Config::load(Path::new(&p)),
            _ => Ok(Config::new()),
        }
    }

    pub fn set(&mut self, key: &str, value: &str, base: Option<&Path>) -> Result<()> {
        let path = || {
            let p = PathBuf::from(value);
            match base {
                Some(b) if p.is_relative() => b.join(p),
                _ => p,
            }
        };
        match key {
            "inventory" => self.inventory = Some(path()),
            "arpabet_map" => self.arpabet_map = Some(path()),
            "id_exceptions" => self.id_exceptions = Some(path()),
            "en_dict" => self.en_dict = Some(path()),
            "stopwords_id" => self.stopwords_id = Some(path()),
            "stopwords_en" => self.stopwords_en = Some(path()),
            "bilingual_dict" => self.bilingual_dict = Some(path()),
            "lid_model" => self.lid_model = Some(path()),
            "lid_backend" => {
                self.lid_backend = match value {
                    "builtin" => BackendKind::Builtin,
                    "extern" => BackendKind::Extern,
                    _ => return Err(bad(key, value, "expected builtin or extern")),
                }
            }
            "lid_command" => {
                let argv = shlex::split(value)
                    .filter(|a| !a.is_empty())
                    .ok_or_else(|| bad(key, value, "not a valid command line"))?;
                self.lid_command = Some(argv);
            }
            "ngram_order" => {
                self.lid.n = value.parse().map_err(|_| bad(key, value, "expected an integer"))?
            }
            "ngram_alpha" => {
                self.lid.alpha = value.parse().map_err(|_| bad(key, value, "expected a number"))?
            }
            "min_lex_count" => {
                self.lid.min_lex_count =
                    value.parse().map_err(|_| bad(key, value, "expected an integer"))?
            }
            "seed" => {
                self.seed = value
                    .parse()
                    .map_err(|_| bad(key, value, "expected an unsigned 64-bit integer"))?
            }
            "jobs" => {
                self.jobs = value
                    .parse()
                    .ok()
                    .filter(|&j: &usize| j > 0)
                    .ok_or_else(|| bad(key, value, "expected a positive integer"))?
            }
            _ => return Err(Error::Config(format!("unknown config key {key:?}"))),
        }
        Ok(())
    }

    /// Every referenced file must exist, and the LID settings must be usable.
    pub fn check(&self) -> Result<()> {
        let paths = [
            ("inventory", &self.inventory),
            ("arpabet_map", &self.arpabet_map),
            ("id_exceptions", &self.id_exceptions),
            ("en_dict", &self.en_dict),
            ("stopwords_id", &self.stopwords_id),
            ("stopwords_en", &self.stopwords_en),
            ("bilingual_dict", &self.bilingual_dict),
            ("lid_model", &self.lid_model),
        ];
        for (key, p) in paths {
            if let Some(p) = p {
                if !p.exists() {
                    return Err(Error::Config(format!("{key}: {} does not exist", p.display())));
                }
            }
        }
        self.lid.validate()
    }
}
