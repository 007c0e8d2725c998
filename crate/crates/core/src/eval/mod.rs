//! Exact-match evaluation over composite language tags.
//!
//! Each distinct language set is an atomic class, so a document counts as
//! correct only if its predicted set equals the gold set. Weighted averages use
//! gold support as weights, which makes weighted recall identical to accuracy.

mod chisq;
mod gamma;

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;

pub use chisq::{chi2_sf, chi_square_gof, format_p_value, ChiSquareResult, P_REPORT_FLOOR};
pub use gamma::{gamma_p, gamma_q, ln_gamma};

use crate::error::{Error, Result};
use crate::tag::{ClassScheme, LanguageTag};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfusionMatrix {
    pub classes: Vec<String>,
    /// `counts[gold][pred]`
    pub counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    /// Builds a matrix from explicit counts; `counts` must be square and match `classes`.
    pub fn from_counts(classes: Vec<String>, counts: Vec<Vec<u64>>) -> Result<Self> {
        if counts.len() != classes.len() || counts.iter().any(|row| row.len() != classes.len()) {
            return Err(Error::DimensionMismatch(format!("confusion matrix must be {0}x{0}", classes.len())));
        }
        Ok(Self { classes, counts })
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.classes.len()).map(|i| self.counts[i][i]).sum()
    }

    pub fn row_sum(&self, i: usize) -> u64 {
        self.counts[i].iter().sum()
    }

    pub fn col_sum(&self, j: usize) -> u64 {
        self.counts.iter().map(|row| row[j]).sum()
    }

    pub fn get(&self, gold: &str, pred: &str) -> Option<u64> {
        let g = self.classes.iter().position(|c| c == gold)?;
        let p = self.classes.iter().position(|c| c == pred)?;
        Some(self.counts[g][p])
    }
}

pub fn confusion(gold: &[LanguageTag], pred: &[LanguageTag], scheme: &ClassScheme) -> Result<ConfusionMatrix> {
    if gold.len() != pred.len() {
        return Err(Error::LengthMismatch { left: gold.len(), right: pred.len() });
    }
    if gold.is_empty() {
        return Err(Error::EmptyInput);
    }
    let gold: Vec<String> = gold.iter().map(|t| scheme.classify(t)).collect();
    let pred: Vec<String> = pred.iter().map(|t| scheme.classify(t)).collect();
    let classes = scheme.ordered_classes(gold.iter().chain(&pred).map(String::as_str));
    let index: HashMap<&str, usize> = classes.iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();
    let mut counts = vec![vec![0u64; classes.len()]; classes.len()];
    for (g, p) in gold.iter().zip(&pred) {
        counts[index[g.as_str()]][index[p.as_str()]] += 1;
    }
    Ok(ConfusionMatrix { classes, counts })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassMetrics {
    pub class: String,
    pub precision: f64,
    pub recall: f64,
    /// gold documents of this class
    pub support: u64,
    /// documents predicted as this class
    pub predicted: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub total: u64,
    pub accuracy: f64,
    pub weighted_precision: f64,
    pub weighted_recall: f64,
    pub per_class: Vec<ClassMetrics>,
    /// Classes never predicted; their precision is reported as 0.
    pub zero_prediction_classes: Vec<String>,
}

pub fn metrics(m: &ConfusionMatrix) -> Result<EvalReport> {
    let total = m.total();
    if total == 0 {
        return Err(Error::EmptyInput);
    }
    let n = total as f64;
    let mut per_class = Vec::with_capacity(m.classes.len());
    let mut zero_prediction_classes = Vec::new();
    let (mut wp, mut wr) = (0.0, 0.0);
    for (i, class) in m.classes.iter().enumerate() {
        let hit = m.counts[i][i] as f64;
        let support = m.row_sum(i);
        let predicted = m.col_sum(i);
        let precision = if predicted == 0 { 0.0 } else { hit / predicted as f64 };
        let recall = if support == 0 { 0.0 } else { hit / support as f64 };
        if predicted == 0 {
            zero_prediction_classes.push(class.clone());
        }
        if support > 0 {
            let w = support as f64 / n;
            wp += w * precision;
            wr += w * recall;
        }
        per_class.push(ClassMetrics { class: class.clone(), precision, recall, support, predicted });
    }
    Ok(EvalReport {
        total,
        accuracy: m.trace() as f64 / n,
        weighted_precision: wp,
        weighted_recall: wr,
        per_class,
        zero_prediction_classes,
    })
}

/// Accuracy of always predicting the most frequent gold class.
pub fn majority_baseline(gold: &[LanguageTag]) -> Result<f64> {
    if gold.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut freq: HashMap<&LanguageTag, usize> = HashMap::new();
    for t in gold {
        *freq.entry(t).or_default() += 1;
    }
    let top = freq.values().copied().max().unwrap_or(0);
    Ok(top as f64 / gold.len() as f64)
}

/// Everything `evaluate` produces, as one serializable document.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationDocument {
    pub confusion: ConfusionMatrix,
    pub metrics: EvalReport,
    pub majority_baseline: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi_square: Option<ChiSquareResult>,
}

impl EvaluationDocument {
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let m = &self.confusion;
        let width = m.classes.iter().map(String::len).max().unwrap_or(0).max("gold\\pred".len()).max(6);
        let cell = m.counts.iter().flatten().map(|c| c.to_string().len()).max().unwrap_or(1).max(
            m.classes.iter().map(String::len).max().unwrap_or(1),
        );
        let _ = write!(out, "{:<width$}", "gold\\pred");
        for c in &m.classes {
            let _ = write!(out, "  {c:>cell$}");
        }
        out.push('\n');
        for (class, row) in m.classes.iter().zip(&m.counts) {
            let _ = write!(out, "{class:<width$}");
            for v in row {
                let _ = write!(out, "  {v:>cell$}");
            }
            out.push('\n');
        }
        out.push('\n');
        let _ = writeln!(out, "{:<width$}  {:>9}  {:>9}  {:>7}", "class", "precision", "recall", "support");
        for c in &self.metrics.per_class {
            let _ = writeln!(out, "{:<width$}  {:>9.4}  {:>9.4}  {:>7}", c.class, c.precision, c.recall, c.support);
        }
        out.push('\n');
        let r = &self.metrics;
        let _ = writeln!(out, "documents           {}", r.total);
        let _ = writeln!(out, "accuracy            {:.4}", r.accuracy);
        let _ = writeln!(out, "weighted precision  {:.4}", r.weighted_precision);
        let _ = writeln!(out, "weighted recall     {:.4}", r.weighted_recall);
        let _ = writeln!(out, "majority baseline   {:.4}", self.majority_baseline);
        if !r.zero_prediction_classes.is_empty() {
            let _ = writeln!(out, "never predicted (precision = 0): {}", r.zero_prediction_classes.join(" "));
        }
        if let Some(x) = &self.chi_square {
            let _ = writeln!(out, "chi-square          {:.3}, df = {}, p-value {}", x.statistic, x.df, x.p_display());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tags(s: &[&str]) -> Vec<LanguageTag> {
        s.iter().map(|t| t.parse().unwrap()).collect()
    }

    #[test]
    fn direct_tally() {
        let m = confusion(&tags(&["aa", "aa", "bb", "bb"]), &tags(&["aa", "bb", "bb", "bb"]), &ClassScheme::Exact)
            .unwrap();
        assert_eq!(m.classes, ["aa", "bb"]);
        assert_eq!(m.counts, [[1, 1], [0, 2]]);
        let r = metrics(&m).unwrap();
        assert_eq!(r.accuracy, 0.75);
        assert!((r.weighted_precision - 5.0 / 6.0).abs() < 1e-12);
        assert!((r.weighted_recall - 0.75).abs() < 1e-12);
    }

    #[test]
    fn zero_column_precision() {
        let m = confusion(&tags(&["aa", "bb"]), &tags(&["aa", "aa"]), &ClassScheme::Exact).unwrap();
        let r = metrics(&m).unwrap();
        assert!((r.weighted_precision - 0.25).abs() < 1e-12);
        assert_eq!(r.zero_prediction_classes, ["bb"]);
    }

    #[test]
    fn set_equal_tags_match() {
        let m = confusion(&tags(&["en,zu"]), &tags(&["zu,en"]), &ClassScheme::Exact).unwrap();
        assert_eq!(m.trace(), 1);
        assert_eq!(metrics(&m).unwrap().accuracy, 1.0);
    }

    #[test]
    fn perfect_predictions() {
        let g = tags(&["en", "zu", "en,zu", "xh", "en"]);
        let m = confusion(&g, &g, &ClassScheme::Exact).unwrap();
        for (i, row) in m.counts.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                assert!(i == j || v == 0);
            }
        }
        let r = metrics(&m).unwrap();
        assert_eq!((r.accuracy, r.weighted_precision, r.weighted_recall), (1.0, 1.0, 1.0));
    }

    #[test]
    fn bucketing_and_errors() {
        let scheme = ClassScheme::bucketed(["en", "zu"]).unwrap();
        let m = confusion(&tags(&["en", "st", "en,zu"]), &tags(&["en", "en", "xh"]), &scheme).unwrap();
        assert_eq!(m.classes, ["en", "zu", "other"]);
        assert_eq!(m.get("other", "other"), Some(1));
        assert_eq!(m.get("other", "en"), Some(1));
        assert!(matches!(confusion(&tags(&["en"]), &[], &scheme), Err(Error::LengthMismatch { .. })));
        assert!(matches!(confusion(&[], &[], &scheme), Err(Error::EmptyInput)));
        let empty = ConfusionMatrix::from_counts(vec!["a".into()], vec![vec![0]]).unwrap();
        assert!(matches!(metrics(&empty), Err(Error::EmptyInput)));
        assert!(ConfusionMatrix::from_counts(vec!["a".into()], vec![vec![0, 1]]).is_err());
    }

    #[test]
    fn baseline() {
        let mut gold = vec!["en".parse::<LanguageTag>().unwrap(); 306];
        gold.extend(vec!["zu".parse().unwrap(); 94]);
        assert_eq!(majority_baseline(&gold).unwrap(), 0.765);
        assert_eq!(majority_baseline(&tags(&["en", "zu"])).unwrap(), 0.5);
        assert_eq!(majority_baseline(&tags(&["en,zu", "zu,en"])).unwrap(), 1.0);
        assert!(matches!(majority_baseline(&[]), Err(Error::EmptyInput)));
    }

    #[test]
    fn table_mentions_headline_numbers() {
        let g = tags(&["aa", "aa", "bb", "bb"]);
        let p = tags(&["aa", "bb", "bb", "bb"]);
        let confusion = confusion(&g, &p, &ClassScheme::Exact).unwrap();
        let doc = EvaluationDocument {
            metrics: metrics(&confusion).unwrap(),
            confusion,
            majority_baseline: majority_baseline(&g).unwrap(),
            chi_square: Some(chi_square_gof(&[306, 18, 13, 63], &[0.557, 0.203, 0.084, 0.155]).unwrap()),
        };
        let table = doc.render_table();
        assert!(table.contains("accuracy            0.7500"));
        assert!(table.contains("weighted precision  0.8333"));
        assert!(table.contains("p-value < 2.2e-16"));
    }
}
