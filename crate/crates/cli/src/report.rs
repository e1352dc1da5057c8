//! Accuracy table: per-class accuracy rows `c1…cK`, then AA, OA and Kappa.
//! Accuracies are percentages with two decimals, kappa has three.

use psc_core::metrics::MetricsError;
use psc_core::{average_accuracy, kappa, overall_accuracy, ConfusionMatrix};

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub method: String,
    pub class_accuracies: Vec<Option<f64>>,
    pub average_accuracy: f64,
    pub overall_accuracy: f64,
    pub kappa: f64,
}

impl Report {
    pub fn new(method: &str, cm: &ConfusionMatrix) -> Result<Self, MetricsError> {
        Ok(Report {
            method: method.to_string(),
            class_accuracies: cm.class_accuracies(),
            average_accuracy: average_accuracy(cm)?,
            overall_accuracy: overall_accuracy(cm)?,
            kappa: kappa(cm)?,
        })
    }

    pub fn render(&self) -> String {
        let mut out = format!("{:<8}{}\n", "Method", self.method);
        for (k, acc) in self.class_accuracies.iter().enumerate() {
            let cell = acc.map_or_else(|| "-".to_string(), |a| format!("{:.2}", 100.0 * a));
            out.push_str(&format!("{:<8}{cell}\n", format!("c{}", k + 1)));
        }
        out.push_str(&format!("{:<8}{:.2}\n", "AA", 100.0 * self.average_accuracy));
        out.push_str(&format!("{:<8}{:.2}\n", "OA", 100.0 * self.overall_accuracy));
        out.push_str(&format!("{:<8}{:.3}\n", "Kappa", self.kappa));
        out
    }
}
