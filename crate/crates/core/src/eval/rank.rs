use std::collections::HashSet;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::testset::CsCase;

use super::{csv_table, text_table};

/// One listener's preference order, best first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankResponse {
    pub respondent: String,
    pub case: CsCase,
    pub ranking: Vec<String>,
}

/// Reads `respondent,case,rank1,rank2,...` rows, where `rankK` is the model
/// placed K-th.
pub fn read_ranks<R: Read>(input: R) -> Result<Vec<RankResponse>> {
    let (headers, rows) = csv_table(input)?;
    let ranks = headers.len().saturating_sub(2);
    let well_formed = headers.len() >= 4
        && headers[0] == "respondent"
        && headers[1] == "case"
        && (0..ranks).all(|k| headers[k + 2] == format!("rank{}", k + 1));
    if !well_formed {
        return Err(Error::format_at(
            1,
            format!("expected respondent,case,rank1,...,rankN header, got {}", headers.join(",")),
        ));
    }
    rows.into_iter()
        .map(|(line, f)| {
            let case: CsCase = f[1]
                .parse()
                .map_err(|_| Error::format_at(line, format!("unknown case {:?}", f[1])))?;
            Ok(RankResponse {
                respondent: f[0].clone(),
                case,
                ranking: f[2..].to_vec(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankTally {
    pub models: Vec<String>,
    /// `counts[model][position]`, position 0 is the top rank.
    pub counts: Vec<Vec<usize>>,
    pub mean_rank: Vec<f64>,
    pub responses: usize,
}

impl RankTally {
    pub fn count(&self, model: &str, rank: usize) -> Option<usize> {
        let m = self.models.iter().position(|x| x == model)?;
        self.counts[m].get(rank.checked_sub(1)?).copied()
    }

    pub fn mean(&self, model: &str) -> Option<f64> {
        let m = self.models.iter().position(|x| x == model)?;
        Some(self.mean_rank[m])
    }

    pub fn to_text(&self) -> String {
        let mut header = vec!["Model".to_string()];
        header.extend((1..=self.models.len()).map(|k| format!("#{k}")));
        header.push("Mean".into());
        let rows: Vec<Vec<String>> = self
            .models
            .iter()
            .enumerate()
            .map(|(m, name)| {
                std::iter::once(name.clone())
                    .chain(self.counts[m].iter().map(usize::to_string))
                    .chain(std::iter::once(format!("{:.3}", self.mean_rank[m])))
                    .collect()
            })
            .collect();
        text_table(&header, &rows)
    }
}

/// Counts how often each model landed at each position. The model set is
/// taken from the first response, in its order.
pub fn rank_tally(responses: &[RankResponse]) -> Result<RankTally> {
    let first = responses
        .first()
        .ok_or_else(|| Error::Input("no rank responses".into()))?;
    let models = first.ranking.clone();
    let set: HashSet<&String> = models.iter().collect();
    if set.len() != models.len() || models.is_empty() {
        return Err(Error::format(format!(
            "ranking by {} is not a permutation",
            first.respondent
        )));
    }
    let mut counts = vec![vec![0usize; models.len()]; models.len()];
    for r in responses {
        let mut seen = HashSet::new();
        let ok = r.ranking.len() == models.len()
            && r.ranking.iter().all(|m| set.contains(m) && seen.insert(m));
        if !ok {
            return Err(Error::format(format!(
                "ranking by {} ({}) is not a permutation of {}",
                r.respondent,
                r.ranking.join(","),
                models.join(",")
            )));
        }
        for (pos, name) in r.ranking.iter().enumerate() {
            let m = models.iter().position(|x| x == name).expect("checked");
            counts[m][pos] += 1;
        }
    }
    let n = responses.len() as f64;
    let mean_rank = counts
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(pos, &c)| (pos + 1) as f64 * c as f64)
                .sum::<f64>()
                / n
        })
        .collect();
    Ok(RankTally {
        models,
        counts,
        mean_rank,
        responses: responses.len(),
    })
}
