use serde::Serialize;

use super::LanguageTag;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Label-quality summary. `confusion[gold][pred]`, indexed ID then EN.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LidReport {
    pub total: usize,
    pub accuracy: f64,
    pub id: ClassMetrics,
    pub en: ClassMetrics,
    pub confusion: [[usize; 2]; 2],
}

impl LidReport {
    pub fn class(&self, lang: LanguageTag) -> &ClassMetrics {
        match lang {
            LanguageTag::Id => &self.id,
            LanguageTag::En => &self.en,
        }
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn class_metrics(confusion: &[[usize; 2]; 2], c: usize) -> ClassMetrics {
    let tp = confusion[c][c];
    let predicted = confusion[0][c] + confusion[1][c];
    let gold = confusion[c][0] + confusion[c][1];
    if predicted == 0 && gold == 0 {
        // Nothing to find and nothing claimed.
        return ClassMetrics {
            precision: 1.0,
            recall: 1.0,
            f1: 1.0,
        };
    }
    let precision = ratio(tp, predicted);
    let recall = ratio(tp, gold);
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    ClassMetrics {
        precision,
        recall,
        f1,
    }
}

/// Accuracy, per-class precision/recall/F1 and the confusion matrix.
pub fn lid_eval(pred: &[LanguageTag], gold: &[LanguageTag]) -> Result<LidReport> {
    if pred.len() != gold.len() {
        return Err(Error::Input(format!(
            "{} predictions for {} gold labels",
            pred.len(),
            gold.len()
        )));
    }
    if gold.is_empty() {
        return Err(Error::Input("nothing to evaluate".into()));
    }
    let mut confusion = [[0usize; 2]; 2];
    for (p, g) in pred.iter().zip(gold) {
        confusion[g.index()][p.index()] += 1;
    }
    let correct = confusion[0][0] + confusion[1][1];
    Ok(LidReport {
        total: gold.len(),
        accuracy: ratio(correct, gold.len()),
        id: class_metrics(&confusion, 0),
        en: class_metrics(&confusion, 1),
        confusion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use LanguageTag::{En, Id};

    #[test]
    fn perfect_prediction() {
        let gold = [Id, En, En, Id, Id];
        let r = lid_eval(&gold, &gold).unwrap();
        assert_eq!(r.accuracy, 1.0);
        assert_eq!(r.id.f1, 1.0);
        assert_eq!(r.en.f1, 1.0);
    }

    #[test]
    fn hand_confusion_matrix() {
        let r = lid_eval(&[Id, En, En, En], &[Id, Id, En, En]).unwrap();
        assert_eq!(r.confusion, [[1, 1], [0, 2]]);
        assert_eq!(r.accuracy, 0.75);
        assert!((r.en.precision - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(r.en.recall, 1.0);
        assert_eq!(r.id.precision, 1.0);
        assert_eq!(r.id.recall, 0.5);
        assert!((r.en.f1 - 0.8).abs() < 1e-12);
    }

    #[test]
    fn absent_class_scores_one() {
        let r = lid_eval(&[Id, Id], &[Id, Id]).unwrap();
        assert_eq!(r.en, ClassMetrics { precision: 1.0, recall: 1.0, f1: 1.0 });
    }

    #[test]
    fn shape_errors() {
        assert!(matches!(lid_eval(&[Id], &[Id, En]), Err(Error::Input(_))));
        assert!(matches!(lid_eval(&[], &[]), Err(Error::Input(_))));
    }
}
