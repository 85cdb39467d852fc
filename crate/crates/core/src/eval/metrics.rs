use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::morpho::GenderLabel;

/// Outcome for one test sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalRecord {
    pub sent_id: usize,
    pub gold_gender: GenderLabel,
    /// Gender of the translated primary entity; `None` when it could not
    /// be determined.
    pub predicted_gender: Option<GenderLabel>,
    pub correct: bool,
}

impl EvalRecord {
    pub fn new(sent_id: usize, gold_gender: GenderLabel, predicted_gender: Option<GenderLabel>) -> Self {
        let correct = predicted_gender.as_ref() == Some(&gold_gender);
        EvalRecord {
            sent_id,
            gold_gender,
            predicted_gender,
            correct,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport {
    pub sentences: usize,
    pub accuracy: f64,
    pub f1_masculine: f64,
    pub f1_feminine: f64,
    /// `f1_masculine - f1_feminine`.
    pub delta_g: f64,
    /// Number of sentences per gold label.
    pub gold_counts: BTreeMap<GenderLabel, usize>,
}

/// One-vs-rest F1 for `label`, 0 when precision + recall is 0.
fn f1(records: &[EvalRecord], label: &GenderLabel) -> f64 {
    let mut tp = 0usize;
    let mut gold = 0usize;
    let mut retrieved = 0usize;
    for r in records {
        let is_gold = &r.gold_gender == label;
        let is_pred = r.predicted_gender.as_ref() == Some(label);
        gold += is_gold as usize;
        retrieved += is_pred as usize;
        tp += (is_gold && is_pred) as usize;
    }
    if tp == 0 {
        return 0.0;
    }
    let p = tp as f64 / retrieved as f64;
    let r = tp as f64 / gold as f64;
    2.0 * p * r / (p + r)
}

pub fn score_records(records: &[EvalRecord]) -> Result<MetricReport> {
    if records.is_empty() {
        return Err(Error::EmptyRecords);
    }
    let correct = records.iter().filter(|r| r.correct).count();
    let mut gold_counts = BTreeMap::new();
    for r in records {
        *gold_counts.entry(r.gold_gender.clone()).or_insert(0) += 1;
    }
    let f1_masculine = f1(records, &GenderLabel::Masculine);
    let f1_feminine = f1(records, &GenderLabel::Feminine);
    Ok(MetricReport {
        sentences: records.len(),
        accuracy: correct as f64 / records.len() as f64,
        f1_masculine,
        f1_feminine,
        delta_g: f1_masculine - f1_feminine,
        gold_counts,
    })
}

impl MetricReport {
    /// Machine-readable `metric,value` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("metric,value\n");
        let _ = writeln!(out, "sentences,{}", self.sentences);
        let _ = writeln!(out, "accuracy,{}", self.accuracy);
        let _ = writeln!(out, "f1_masculine,{}", self.f1_masculine);
        let _ = writeln!(out, "f1_feminine,{}", self.f1_feminine);
        let _ = writeln!(out, "delta_g,{}", self.delta_g);
        for (label, n) in &self.gold_counts {
            let _ = writeln!(out, "gold_{label},{n}");
        }
        out
    }

    pub fn summary(&self) -> String {
        let counts = self
            .gold_counts
            .iter()
            .map(|(l, n)| format!("{l}={n}"))
            .collect::<Vec<_>>()
            .join(" ");
        format!(
            "sentences {}  accuracy {:.1}%  F1(m) {:.3}  F1(f) {:.3}  ΔG {:+.3}  gold [{}]",
            self.sentences,
            100.0 * self.accuracy,
            self.f1_masculine,
            self.f1_feminine,
            self.delta_g,
            counts
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    use GenderLabel::{Feminine as F, Masculine as M};

    fn recs(pairs: &[(GenderLabel, Option<GenderLabel>)]) -> Vec<EvalRecord> {
        pairs
            .iter()
            .enumerate()
            .map(|(i, (g, p))| EvalRecord::new(i, g.clone(), p.clone()))
            .collect()
    }

    #[test]
    fn hand_computed_confusion() {
        let r = score_records(&recs(&[
            (M, Some(M)),
            (M, Some(M)),
            (F, Some(M)),
            (F, Some(F)),
        ]))
        .unwrap();
        assert!((r.accuracy - 0.75).abs() < 1e-12);
        assert!((r.f1_masculine - 0.8).abs() < 1e-12);
        assert!((r.f1_feminine - 2.0 / 3.0).abs() < 1e-12);
        assert!((r.delta_g - (0.8 - 2.0 / 3.0)).abs() < 1e-12);
        assert_eq!(r.gold_counts[&M], 2);
    }

    #[test]
    fn perfect_is_symmetric() {
        let r = score_records(&recs(&[(M, Some(M)), (F, Some(F))])).unwrap();
        assert_eq!(r.accuracy, 1.0);
        assert_eq!(r.delta_g, 0.0);
    }

    #[test]
    fn all_undetermined() {
        let r = score_records(&recs(&[(M, None), (F, None)])).unwrap();
        assert_eq!(r.accuracy, 0.0);
        assert_eq!((r.f1_masculine, r.f1_feminine, r.delta_g), (0.0, 0.0, 0.0));
        assert!(!EvalRecord::new(0, M, None).correct);
    }

    #[test]
    fn empty_is_an_error() {
        assert!(matches!(score_records(&[]), Err(Error::EmptyRecords)));
    }

    #[test]
    fn csv_layout() {
        let r = score_records(&recs(&[(M, Some(M)), (F, Some(M))])).unwrap();
        let csv = r.to_csv();
        assert!(csv.starts_with("metric,value\nsentences,2\naccuracy,0.5\n"));
        assert!(csv.contains("gold_feminine,1\n"));
    }
}
