//! Binary classification metrics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

fn check_labels(y: &[u8]) -> Result<()> {
    match y.iter().find(|&&v| v > 1) {
        Some(v) => Err(Error::domain(format!("labels must be 0 or 1, found {v}"))),
        None => Ok(()),
    }
}

pub fn confusion(y_true: &[u8], y_pred: &[u8]) -> Result<ConfusionCounts> {
    if y_true.len() != y_pred.len() {
        return Err(Error::domain(format!(
            "length mismatch: {} labels, {} predictions",
            y_true.len(),
            y_pred.len()
        )));
    }
    if y_true.is_empty() {
        return Err(Error::domain("no samples"));
    }
    check_labels(y_true)?;
    check_labels(y_pred)?;
    let mut c = ConfusionCounts::default();
    for (&t, &p) in y_true.iter().zip(y_pred) {
        match (t, p) {
            (1, 1) => c.tp += 1,
            (0, 1) => c.fp += 1,
            (0, 0) => c.tn += 1,
            _ => c.fn_ += 1,
        }
    }
    Ok(c)
}

/// A metric value; `degenerate` marks a zero denominator, in which case the
/// value is reported as 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Score {
    pub value: f64,
    pub degenerate: bool,
}

fn ratio(num: usize, den: usize) -> Score {
    if den == 0 {
        Score {
            value: 0.0,
            degenerate: true,
        }
    } else {
        Score {
            value: num as f64 / den as f64,
            degenerate: false,
        }
    }
}

impl ConfusionCounts {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn accuracy(&self) -> f64 {
        (self.tp + self.tn) as f64 / self.total() as f64
    }

    pub fn precision(&self) -> Score {
        ratio(self.tp, self.tp + self.fp)
    }

    pub fn recall(&self) -> Score {
        ratio(self.tp, self.tp + self.fn_)
    }

    pub fn f1(&self) -> Score {
        let (p, r) = (self.precision(), self.recall());
        if p.degenerate || r.degenerate || p.value + r.value == 0.0 {
            return Score {
                value: 0.0,
                degenerate: true,
            };
        }
        Score {
            value: 2.0 * p.value * r.value / (p.value + r.value),
            degenerate: false,
        }
    }
}

/// Area under the ROC curve, computed from average ranks so that tied scores
/// across classes count one half.
pub fn roc_auc(y_true: &[u8], scores: &[f64]) -> Result<f64> {
    if y_true.len() != scores.len() {
        return Err(Error::domain("labels and scores differ in length"));
    }
    check_labels(y_true)?;
    if scores.iter().any(|s| s.is_nan()) {
        return Err(Error::domain("scores contain NaN"));
    }
    let n_pos = y_true.iter().filter(|&&v| v == 1).count();
    let n_neg = y_true.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::domain("ROC AUC needs both classes present"));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let mut pos_rank_sum = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        // 1-based ranks i+1..=j+1 share their average
        let avg = (i + j + 2) as f64 / 2.0;
        let pos_in_group = order[i..=j].iter().filter(|&&k| y_true[k] == 1).count();
        pos_rank_sum += avg * pos_in_group as f64;
        i = j + 1;
    }
    let (p, n) = (n_pos as f64, n_neg as f64);
    Ok((pos_rank_sum - p * (p + 1.0) / 2.0) / (p * n))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub accuracy: f64,
    pub auc: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub confusion: ConfusionCounts,
    /// Names of metrics whose denominator was zero.
    pub degenerate: Vec<String>,
    pub threshold: f64,
}

pub const CSV_HEADER: &str = "ACC,AUC,PRE,Recall,F1";

impl EvalReport {
    pub fn compute(y_true: &[u8], proba: &[f64], threshold: f64) -> Result<Self> {
        let y_pred: Vec<u8> = proba.iter().map(|&p| u8::from(p >= threshold)).collect();
        let confusion = confusion(y_true, &y_pred)?;
        let auc = roc_auc(y_true, proba)?;
        let (precision, recall, f1) = (confusion.precision(), confusion.recall(), confusion.f1());
        let degenerate = [("precision", precision), ("recall", recall), ("f1", f1)]
            .into_iter()
            .filter(|(_, s)| s.degenerate)
            .map(|(n, _)| n.to_owned())
            .collect();
        Ok(EvalReport {
            accuracy: confusion.accuracy(),
            auc,
            precision: precision.value,
            recall: recall.value,
            f1: f1.value,
            confusion,
            degenerate,
            threshold,
        })
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{:.4},{:.4},{:.4},{:.4},{:.4}",
            self.accuracy, self.auc, self.precision, self.recall, self.f1
        )
    }

    pub fn to_csv(&self) -> String {
        format!("{CSV_HEADER}\n{}\n", self.csv_row())
    }
}
