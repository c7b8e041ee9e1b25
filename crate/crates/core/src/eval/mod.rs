//! Listening-test and intelligibility metrics: WER over SUS transcripts, MOS
//! tables, preference-rank tallies and questionnaire allocation.

mod mos;
mod plan;
mod rank;
mod wer;

use std::io::Read;

use crate::error::{Error, Result};

pub use mos::{mos_aggregate, read_mos, MosResponse, MosTable};
pub use plan::{expected_segments, plan_allocation, Plan, PlanMode, PlanParams, Segment};
pub use rank::{rank_tally, read_ranks, RankResponse, RankTally};
pub use wer::{
    align_text, align_wer, corpus_wer, pooled_counts, read_transcripts, wer_by_model,
    AlignmentCounts, ModelWer, SusTranscript,
};

type Rows = Vec<(usize, Vec<String>)>;

/// Header plus data rows with their 1-based line numbers.
fn csv_table<R: Read>(input: R) -> Result<(Vec<String>, Rows)> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| Error::format_at(1, e.to_string()))?
        .iter()
        .map(String::from)
        .collect();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize);
            Error::Format {
                line,
                message: e.to_string(),
            }
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        rows.push((line, record.iter().map(String::from).collect()));
    }
    Ok((headers, rows))
}

fn csv_rows<R: Read>(input: R, expected: &[&str]) -> Result<Rows> {
    let (headers, rows) = csv_table(input)?;
    if headers != expected {
        return Err(Error::format_at(
            1,
            format!("expected header {}, got {}", expected.join(","), headers.join(",")),
        ));
    }
    Ok(rows)
}

/// Left-aligned first column, right-aligned numbers, a rule under the header.
fn text_table(header: &[String], rows: &[Vec<String>]) -> String {
    let cols = header.len();
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate().take(cols) {
            widths[i] = widths[i].max(cell.chars().count());
        }
    }
    let render = |row: &[String]| {
        let cells: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if i == 0 {
                    format!("{c:<w$}", w = widths[i])
                } else {
                    format!("{c:>w$}", w = widths[i])
                }
            })
            .collect();
        cells.join("  ").trim_end().to_string()
    };
    let mut out = render(header);
    out.push('\n');
    let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
    out.push_str(&rule.join("  "));
    out.push('\n');
    for row in rows {
        out.push_str(&render(row));
        out.push('\n');
    }
    out
}
