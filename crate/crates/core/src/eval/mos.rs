use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::testset::CsCase;

use super::{csv_rows, text_table};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MosResponse {
    pub respondent: String,
    pub case: CsCase,
    pub model: String,
    pub score: u8,
}

fn check_score(score: i64) -> Result<u8> {
    if (1..=5).contains(&score) {
        Ok(score as u8)
    } else {
        Err(Error::format(format!("score {score} is outside 1..=5")))
    }
}

impl MosResponse {
    pub fn new(respondent: &str, case: CsCase, model: &str, score: i64) -> Result<Self> {
        Ok(MosResponse {
            respondent: respondent.to_string(),
            case,
            model: model.to_string(),
            score: check_score(score)?,
        })
    }
}

/// Reads `respondent,case,model,score` rows.
pub fn read_mos<R: Read>(input: R) -> Result<Vec<MosResponse>> {
    csv_rows(input, &["respondent", "case", "model", "score"])?
        .into_iter()
        .map(|(line, f)| {
            let at = |e: Error| match e {
                Error::Format { message, .. } => Error::format_at(line, message),
                other => other,
            };
            let case: CsCase = f[1].parse().map_err(at)?;
            let score: i64 = f[3]
                .trim()
                .parse()
                .map_err(|_| Error::format_at(line, format!("score {:?} is not an integer", f[3])))?;
            MosResponse::new(&f[0], case, &f[2], score).map_err(at)
        })
        .collect()
}

/// Mean score per case and model, plus each model's Total: the unweighted
/// mean of its seven case means.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MosTable {
    pub models: Vec<String>,
    pub cases: Vec<CsCase>,
    /// `means[case][model]`
    pub means: Vec<Vec<f64>>,
    pub counts: Vec<Vec<usize>>,
    pub totals: Vec<f64>,
}

impl MosTable {
    pub fn mean(&self, case: CsCase, model: &str) -> Option<f64> {
        let m = self.models.iter().position(|x| x == model)?;
        Some(self.means[case.index()][m])
    }

    pub fn total(&self, model: &str) -> Option<f64> {
        let m = self.models.iter().position(|x| x == model)?;
        Some(self.totals[m])
    }

    /// Cases as rows, models as columns, values to three decimals.
    pub fn to_text(&self) -> String {
        let mut header = vec!["Case".to_string()];
        header.extend(self.models.iter().cloned());
        let mut rows: Vec<Vec<String>> = self
            .cases
            .iter()
            .zip(&self.means)
            .map(|(c, row)| {
                std::iter::once(c.to_string())
                    .chain(row.iter().map(|v| format!("{v:.3}")))
                    .collect()
            })
            .collect();
        rows.push(
            std::iter::once("Total".to_string())
                .chain(self.totals.iter().map(|v| format!("{v:.3}")))
                .collect(),
        );
        text_table(&header, &rows)
    }
}

pub fn mos_aggregate(responses: &[MosResponse]) -> Result<MosTable> {
    if responses.is_empty() {
        return Err(Error::Input("no MOS responses".into()));
    }
    let mut models: Vec<String> = Vec::new();
    for r in responses {
        if !models.contains(&r.model) {
            models.push(r.model.clone());
        }
    }
    let mut sums = vec![vec![0u64; models.len()]; CsCase::ALL.len()];
    let mut counts = vec![vec![0usize; models.len()]; CsCase::ALL.len()];
    for r in responses {
        check_score(i64::from(r.score))?;
        let m = models.iter().position(|x| *x == r.model).expect("model collected");
        sums[r.case.index()][m] += u64::from(r.score);
        counts[r.case.index()][m] += 1;
    }
    let mut missing = Vec::new();
    for case in CsCase::ALL {
        for (m, model) in models.iter().enumerate() {
            if counts[case.index()][m] == 0 {
                missing.push(format!("{case}/{model}"));
            }
        }
    }
    if !missing.is_empty() {
        return Err(Error::Coverage(missing));
    }
    let means: Vec<Vec<f64>> = sums
        .iter()
        .zip(&counts)
        .map(|(s, n)| s.iter().zip(n).map(|(&s, &n)| s as f64 / n as f64).collect())
        .collect();
    let totals = (0..models.len())
        .map(|m| means.iter().map(|row| row[m]).sum::<f64>() / CsCase::ALL.len() as f64)
        .collect();
    Ok(MosTable {
        models,
        cases: CsCase::ALL.to_vec(),
        means,
        counts,
        totals,
    })
}
