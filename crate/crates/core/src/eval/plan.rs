//! Assignment of audio segments to listening-test questionnaires.
//!
//! A segment is one text rendered by one model. Every segment goes into
//! exactly one questionnaire and every questionnaire carries the same number
//! of segments from each model.

use std::collections::{BTreeMap, HashSet};
use std::str::FromStr;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;
use crate::testset::CsCase;

use super::text_table;

const PLAN_STREAM: u64 = 0x9a1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlanMode {
    Mos,
    Sus,
}

impl FromStr for PlanMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mos" => Ok(PlanMode::Mos),
            "sus" => Ok(PlanMode::Sus),
            _ => Err(Error::Config(format!("unknown plan mode {s:?}"))),
        }
    }
}

/// For MOS plans `texts` is the number of texts per case; for SUS plans it
/// is the number of sentences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanParams {
    pub mode: PlanMode,
    pub texts: usize,
    pub models: usize,
    pub questionnaires: usize,
    /// Shuffles question order inside each questionnaire when set.
    pub seed: Option<u64>,
}

impl PlanParams {
    pub fn mos(texts: usize, models: usize, questionnaires: usize) -> Self {
        PlanParams {
            mode: PlanMode::Mos,
            texts,
            models,
            questionnaires,
            seed: None,
        }
    }

    pub fn sus(texts: usize, models: usize, questionnaires: usize) -> Self {
        PlanParams {
            mode: PlanMode::Sus,
            ..PlanParams::mos(texts, models, questionnaires)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Segment {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case: Option<CsCase>,
    pub text: usize,
    pub model: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Plan {
    pub mode: PlanMode,
    pub models: usize,
    pub questionnaires: Vec<Vec<Segment>>,
}

impl Plan {
    pub fn segment_count(&self) -> usize {
        self.questionnaires.iter().map(Vec::len).sum()
    }

    /// Re-checks the plan against `expected` segments: each appears exactly
    /// once and every questionnaire has the same per-model count.
    pub fn audit(&self, expected: &[Segment]) -> Result<()> {
        let mut seen = HashSet::new();
        for (qi, q) in self.questionnaires.iter().enumerate() {
            for s in q {
                if !seen.insert(*s) {
                    return Err(Error::Data(format!("segment {s:?} repeated (questionnaire {qi})")));
                }
            }
        }
        let want: HashSet<Segment> = expected.iter().copied().collect();
        if seen != want {
            return Err(Error::Data("plan does not cover the expected segments".into()));
        }
        let per_model = |q: &Vec<Segment>| {
            let mut c = vec![0usize; self.models];
            for s in q {
                c[s.model] += 1;
            }
            c
        };
        let first = per_model(&self.questionnaires[0]);
        if first.iter().any(|&c| c != first[0]) {
            return Err(Error::Data("questionnaire 0 is not model-balanced".into()));
        }
        for (qi, q) in self.questionnaires.iter().enumerate() {
            if per_model(q) != first {
                return Err(Error::Data(format!("questionnaire {qi} is unbalanced")));
            }
        }
        Ok(())
    }

    /// One line per questionnaire with its segment count per model.
    pub fn to_text(&self) -> String {
        let mut header = vec!["Questionnaire".to_string(), "Segments".to_string()];
        header.extend((0..self.models).map(|m| format!("model{m}")));
        let rows: Vec<Vec<String>> = self
            .questionnaires
            .iter()
            .enumerate()
            .map(|(qi, q)| {
                let mut by: BTreeMap<usize, usize> = BTreeMap::new();
                for s in q {
                    *by.entry(s.model).or_default() += 1;
                }
                let mut row = vec![(qi + 1).to_string(), q.len().to_string()];
                row.extend((0..self.models).map(|m| by.get(&m).copied().unwrap_or(0).to_string()));
                row
            })
            .collect();
        text_table(&header, &rows)
    }
}

/// All segments a plan with these parameters must contain.
pub fn expected_segments(p: &PlanParams) -> Vec<Segment> {
    let mut out = Vec::new();
    match p.mode {
        PlanMode::Mos => {
            for case in CsCase::ALL {
                for text in 0..p.texts {
                    for model in 0..p.models {
                        out.push(Segment {
                            case: Some(case),
                            text,
                            model,
                        });
                    }
                }
            }
        }
        PlanMode::Sus => {
            for text in 0..p.texts {
                for model in 0..p.models {
                    out.push(Segment {
                        case: None,
                        text,
                        model,
                    });
                }
            }
        }
    }
    out
}

/// MOS: questionnaire `i` holds text `i` of every case from every model.
///
/// SUS: sentences are cut into `q` consecutive blocks of `s / q`; model `m`
/// reads block `(i - m) mod q` in questionnaire `i`. Each questionnaire then
/// gets `s / q` sentences per model, and no sentence repeats inside one
/// questionnaire as long as there are no more models than questionnaires.
pub fn plan_allocation(p: &PlanParams) -> Result<Plan> {
    if p.texts == 0 || p.models == 0 || p.questionnaires == 0 {
        return Err(Error::Config("plan sizes must be positive".into()));
    }
    let q = p.questionnaires;
    let mut questionnaires = vec![Vec::new(); q];
    match p.mode {
        PlanMode::Mos => {
            if p.texts != q {
                return Err(Error::Config(format!(
                    "MOS plans need as many texts per case as questionnaires ({} vs {q})",
                    p.texts
                )));
            }
            for s in expected_segments(p) {
                questionnaires[s.text].push(s);
            }
        }
        PlanMode::Sus => {
            let total = p.texts * p.models;
            if total % q != 0 || (total / q) % p.models != 0 {
                return Err(Error::Config(format!(
                    "{} sentences x {} models do not split evenly over {q} questionnaires",
                    p.texts, p.models
                )));
            }
            let block = p.texts / q;
            for s in expected_segments(p) {
                questionnaires[(s.text / block + s.model) % q].push(s);
            }
        }
    }
    if let Some(seed) = p.seed {
        for (qi, qs) in questionnaires.iter_mut().enumerate() {
            qs.shuffle(&mut rng::stream(seed, &[PLAN_STREAM, qi as u64]));
        }
    }
    Ok(Plan {
        mode: p.mode,
        models: p.models,
        questionnaires,
    })
}
