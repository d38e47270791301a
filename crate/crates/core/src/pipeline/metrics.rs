use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Classification scores for one evaluation run.
///
/// `confusion[t][p]` counts instances of true class `t` predicted as `p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub accuracy: f64,
    pub macro_precision: f64,
    pub macro_recall: f64,
    pub macro_f1: f64,
    pub confusion: Vec<Vec<u64>>,
}

/// Accuracy and macro-averaged precision, recall and F1.
///
/// Macro averages run over the classes that occur in `y_true` or `y_pred`.
/// A class never predicted has precision 0; per-class F1 is 0 when both
/// precision and recall are 0.
pub fn compute_metrics(y_true: &[usize], y_pred: &[usize], classes: usize) -> Result<Metrics> {
    if y_true.len() != y_pred.len() {
        return Err(Error::LengthMismatch {
            left: y_true.len(),
            right: y_pred.len(),
        });
    }
    if y_true.is_empty() {
        return Err(Error::NoDataRows);
    }
    let mut confusion = vec![vec![0u64; classes]; classes];
    for (&t, &p) in y_true.iter().zip(y_pred) {
        for label in [t, p] {
            if label >= classes {
                return Err(Error::LabelOutOfRange { label, classes });
            }
        }
        confusion[t][p] += 1;
    }

    let mut precision = Vec::new();
    let mut recall = Vec::new();
    let mut f1 = Vec::new();
    for c in 0..classes {
        let tp = confusion[c][c] as f64;
        let actual: u64 = confusion[c].iter().sum();
        let predicted: u64 = confusion.iter().map(|row| row[c]).sum();
        if actual == 0 && predicted == 0 {
            continue;
        }
        let p = if predicted > 0 {
            tp / predicted as f64
        } else {
            0.0
        };
        let r = if actual > 0 { tp / actual as f64 } else { 0.0 };
        precision.push(p);
        recall.push(r);
        f1.push(if p + r > 0.0 {
            2.0 * p * r / (p + r)
        } else {
            0.0
        });
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let correct: u64 = (0..classes).map(|c| confusion[c][c]).sum();
    Ok(Metrics {
        accuracy: correct as f64 / y_true.len() as f64,
        macro_precision: mean(&precision),
        macro_recall: mean(&recall),
        macro_f1: mean(&f1),
        confusion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_predictions() {
        let y = [0, 1, 2, 1, 0];
        let m = compute_metrics(&y, &y, 3).unwrap();
        assert_eq!(
            (m.accuracy, m.macro_precision, m.macro_recall, m.macro_f1),
            (1.0, 1.0, 1.0, 1.0)
        );
    }

    #[test]
    fn half_right_binary() {
        let m = compute_metrics(&[0, 0, 1, 1], &[0, 1, 0, 1], 2).unwrap();
        assert_eq!(m.accuracy, 0.5);
        assert_eq!(m.macro_f1, 0.5);
        assert_eq!(m.confusion, vec![vec![1, 1], vec![1, 1]]);
    }

    #[test]
    fn constant_predictor() {
        let m = compute_metrics(&[0, 0, 1, 1], &[0, 0, 0, 0], 2).unwrap();
        assert_eq!(m.macro_recall, 0.5);
        assert_eq!(m.macro_precision, 0.25);
        assert!((m.macro_f1 - (2.0 / 3.0) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn errors() {
        assert!(compute_metrics(&[0, 1], &[0], 2).is_err());
        assert!(compute_metrics(&[0, 2], &[0, 1], 2).is_err());
    }
}
