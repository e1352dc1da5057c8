//! Confusion matrix, overall accuracy, average accuracy and Cohen's kappa.
//!
//! Counts are kept as integers; each metric converts to `f64` only at its
//! final division.

use alloc::vec;
use alloc::vec::Vec;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("no labels to compare")]
    Empty,
    #[error("{truth} true labels but {predicted} predictions")]
    LengthMismatch { truth: usize, predicted: usize },
    #[error("label {label} at position {index} is outside 0..{classes}")]
    LabelOutOfRange { index: usize, label: usize, classes: usize },
    #[error("confusion matrix is empty")]
    ZeroTotal,
    #[error("class {0} has no true samples")]
    EmptyClass(usize),
    #[error("kappa is undefined: chance agreement is 1 but observed agreement is not")]
    DegenerateKappa,
    #[error("confusion matrix must be square and nonempty")]
    NotSquare,
}

/// `counts[t][p]` = number of samples of true class `t` predicted as `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn from_counts(counts: Vec<Vec<u64>>) -> Result<Self, MetricsError> {
        let k = counts.len();
        if k == 0 || counts.iter().any(|row| row.len() != k) {
            return Err(MetricsError::NotSquare);
        }
        Ok(ConfusionMatrix { counts })
    }

    pub fn num_classes(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.num_classes()).map(|k| self.counts[k][k]).sum()
    }

    pub fn row_sum(&self, k: usize) -> u64 {
        self.counts[k].iter().sum()
    }

    pub fn col_sum(&self, k: usize) -> u64 {
        self.counts.iter().map(|row| row[k]).sum()
    }

    pub fn is_diagonal(&self) -> bool {
        self.counts
            .iter()
            .enumerate()
            .all(|(t, row)| row.iter().enumerate().all(|(p, &c)| t == p || c == 0))
    }

    /// Per-class recall `counts[k][k] / row_sum(k)`; `None` for classes with no samples.
    pub fn class_accuracies(&self) -> Vec<Option<f64>> {
        (0..self.num_classes())
            .map(|k| match self.row_sum(k) {
                0 => None,
                r => Some(self.counts[k][k] as f64 / r as f64),
            })
            .collect()
    }
}

pub fn confusion(truth: &[usize], predicted: &[usize], k: usize) -> Result<ConfusionMatrix, MetricsError> {
    if truth.len() != predicted.len() {
        return Err(MetricsError::LengthMismatch {
            truth: truth.len(),
            predicted: predicted.len(),
        });
    }
    if truth.is_empty() {
        return Err(MetricsError::Empty);
    }
    if k == 0 {
        return Err(MetricsError::NotSquare);
    }
    let mut counts = vec![vec![0u64; k]; k];
    for (index, (&t, &p)) in truth.iter().zip(predicted).enumerate() {
        for label in [t, p] {
            if label >= k {
                return Err(MetricsError::LabelOutOfRange { index, label, classes: k });
            }
        }
        counts[t][p] += 1;
    }
    Ok(ConfusionMatrix { counts })
}

/// `trace / total`.
pub fn overall_accuracy(cm: &ConfusionMatrix) -> Result<f64, MetricsError> {
    let total = cm.total();
    if total == 0 {
        return Err(MetricsError::ZeroTotal);
    }
    Ok(cm.trace() as f64 / total as f64)
}

/// Mean per-class recall.
pub fn average_accuracy(cm: &ConfusionMatrix) -> Result<f64, MetricsError> {
    let mut sum = 0.0;
    for (k, acc) in cm.class_accuracies().into_iter().enumerate() {
        sum += acc.ok_or(MetricsError::EmptyClass(k))?;
    }
    Ok(sum / cm.num_classes() as f64)
}

/// Cohen's kappa `(p_o − p_e) / (1 − p_e)`.
///
/// Evaluated as `(N·trace − Σ r_k c_k) / (N² − Σ r_k c_k)` in integers.
pub fn kappa(cm: &ConfusionMatrix) -> Result<f64, MetricsError> {
    let total = cm.total() as u128;
    if total == 0 {
        return Err(MetricsError::ZeroTotal);
    }
    let chance: u128 = (0..cm.num_classes())
        .map(|k| cm.row_sum(k) as u128 * cm.col_sum(k) as u128)
        .sum();
    let observed = total * cm.trace() as u128;
    let denom = total * total - chance;
    if denom == 0 {
        return if observed == total * total {
            Ok(1.0)
        } else {
            Err(MetricsError::DegenerateKappa)
        };
    }
    let num = observed as i128 - chance as i128;
    Ok(num as f64 / denom as f64)
}
