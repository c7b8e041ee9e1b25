use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textnorm::words_for_scoring;

use super::csv_rows;

/// Edit counts of one alignment, or of several pooled together.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlignmentCounts {
    pub substitutions: usize,
    pub deletions: usize,
    pub insertions: usize,
    pub ref_len: usize,
}

impl AlignmentCounts {
    pub fn errors(&self) -> usize {
        self.substitutions + self.deletions + self.insertions
    }

    pub fn wer(&self) -> f64 {
        if self.ref_len == 0 {
            return 0.0;
        }
        self.errors() as f64 / self.ref_len as f64
    }

    pub fn add(&mut self, other: &AlignmentCounts) {
        self.substitutions += other.substitutions;
        self.deletions += other.deletions;
        self.insertions += other.insertions;
        self.ref_len += other.ref_len;
    }
}

#[derive(Clone, Copy, Default)]
struct Cell {
    cost: usize,
    s: usize,
    d: usize,
    i: usize,
}

/// Minimum-edit alignment with unit costs. Words compare case-insensitively.
/// Among equally cheap alignments the one preferring substitutions, then
/// deletions, then insertions is counted.
pub fn align_wer<R: AsRef<str>, H: AsRef<str>>(reference: &[R], hyp: &[H]) -> Result<AlignmentCounts> {
    if reference.is_empty() {
        return Err(Error::Input("empty reference".into()));
    }
    let r: Vec<String> = reference.iter().map(|w| w.as_ref().to_lowercase()).collect();
    let h: Vec<String> = hyp.iter().map(|w| w.as_ref().to_lowercase()).collect();

    let mut prev: Vec<Cell> = (0..=h.len())
        .map(|j| Cell {
            cost: j,
            i: j,
            ..Cell::default()
        })
        .collect();
    let mut cur = vec![Cell::default(); h.len() + 1];
    for (ri, rw) in r.iter().enumerate() {
        cur[0] = Cell {
            cost: ri + 1,
            d: ri + 1,
            ..Cell::default()
        };
        for (hj, hw) in h.iter().enumerate() {
            let j = hj + 1;
            let same = rw == hw;
            let diag = prev[j - 1];
            let diag = Cell {
                cost: diag.cost + usize::from(!same),
                s: diag.s + usize::from(!same),
                ..diag
            };
            let del = Cell {
                cost: prev[j].cost + 1,
                d: prev[j].d + 1,
                ..prev[j]
            };
            let ins = Cell {
                cost: cur[j - 1].cost + 1,
                i: cur[j - 1].i + 1,
                ..cur[j - 1]
            };
            let mut best = diag;
            if del.cost < best.cost {
                best = del;
            }
            if ins.cost < best.cost {
                best = ins;
            }
            cur[j] = best;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    let end = prev[h.len()];
    Ok(AlignmentCounts {
        substitutions: end.s,
        deletions: end.d,
        insertions: end.i,
        ref_len: r.len(),
    })
}

/// Normalizes both strings, drops punctuation and aligns the words.
pub fn align_text(reference: &str, hyp: &str) -> Result<AlignmentCounts> {
    align_wer(&words_for_scoring(reference), &words_for_scoring(hyp))
}

/// Pooled counts over all items: total errors over total reference words.
pub fn pooled_counts<R: AsRef<str>, H: AsRef<str>>(
    items: &[(Vec<R>, Vec<H>)],
) -> Result<AlignmentCounts> {
    if items.is_empty() {
        return Err(Error::Input("no items to score".into()));
    }
    let mut total = AlignmentCounts::default();
    for (r, h) in items {
        total.add(&align_wer(r, h)?);
    }
    Ok(total)
}

pub fn corpus_wer<R: AsRef<str>, H: AsRef<str>>(items: &[(Vec<R>, Vec<H>)]) -> Result<f64> {
    Ok(pooled_counts(items)?.wer())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SusTranscript {
    pub item_id: String,
    pub model: String,
    pub reference: String,
    pub transcript: String,
}

/// Reads `item_id,model,reference,transcript` rows.
pub fn read_transcripts<R: Read>(input: R) -> Result<Vec<SusTranscript>> {
    csv_rows(input, &["item_id", "model", "reference", "transcript"])?
        .into_iter()
        .map(|(_, mut f)| {
            Ok(SusTranscript {
                transcript: f.pop().unwrap_or_default(),
                reference: f.pop().unwrap_or_default(),
                model: f.pop().unwrap_or_default(),
                item_id: f.pop().unwrap_or_default(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelWer {
    pub model: String,
    pub items: usize,
    pub counts: AlignmentCounts,
    pub wer: f64,
}

/// Pooled WER per model, models in order of first appearance.
pub fn wer_by_model(rows: &[SusTranscript]) -> Result<Vec<ModelWer>> {
    if rows.is_empty() {
        return Err(Error::Input("no transcripts".into()));
    }
    let mut out: Vec<ModelWer> = Vec::new();
    for row in rows {
        let counts = align_text(&row.reference, &row.transcript).map_err(|e| match e {
            Error::Input(m) => Error::Input(format!("item {}: {m}", row.item_id)),
            other => other,
        })?;
        let entry = match out.iter_mut().position(|m| m.model == row.model) {
            Some(i) => &mut out[i],
            None => {
                out.push(ModelWer {
                    model: row.model.clone(),
                    items: 0,
                    counts: AlignmentCounts::default(),
                    wer: 0.0,
                });
                out.last_mut().expect("just pushed")
            }
        };
        entry.items += 1;
        entry.counts.add(&counts);
        entry.wer = entry.counts.wer();
    }
    Ok(out)
}
