use crate::connectives::RelationLabel;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write;

const K: usize = RelationLabel::ALL.len();

/// Harmonic mean of precision and recall; 0 when both are 0.
pub fn f1_score(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ClassScores {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Metrics of a single run. Confusion rows are gold labels, columns are
/// predictions, both in label declaration order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scores {
    pub per_class: BTreeMap<RelationLabel, ClassScores>,
    pub macro_avg: Aggregate,
    pub weighted: Aggregate,
    pub accuracy: f64,
    pub confusion: [[u64; K]; K],
}

/// Scores gold labels against predictions. Both slices must have equal
/// length.
pub fn score(gold: &[RelationLabel], predicted: &[RelationLabel]) -> Scores {
    assert_eq!(gold.len(), predicted.len(), "gold and predicted lengths differ");
    let mut confusion = [[0u64; K]; K];
    for (g, p) in gold.iter().zip(predicted) {
        confusion[g.index()][p.index()] += 1;
    }
    let total = gold.len() as u64;
    let mut per_class = BTreeMap::new();
    let (mut macro_avg, mut weighted) = (Aggregate::default(), Aggregate::default());
    for label in RelationLabel::ALL {
        let c = label.index();
        let tp = confusion[c][c];
        let gold_n: u64 = confusion[c].iter().sum();
        let pred_n: u64 = confusion.iter().map(|row| row[c]).sum();
        let precision = ratio(tp, pred_n);
        let recall = ratio(tp, gold_n);
        let s = ClassScores { precision, recall, f1: f1_score(precision, recall), support: gold_n as f64 };
        let w = ratio(gold_n, total);
        macro_avg.precision += s.precision / K as f64;
        macro_avg.recall += s.recall / K as f64;
        macro_avg.f1 += s.f1 / K as f64;
        weighted.precision += w * s.precision;
        weighted.recall += w * s.recall;
        weighted.f1 += w * s.f1;
        per_class.insert(label, s);
    }
    let correct: u64 = (0..K).map(|i| confusion[i][i]).sum();
    Scores { per_class, macro_avg, weighted, accuracy: ratio(correct, total), confusion }
}

/// Mean over one or more runs, with the runs kept alongside.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub per_class: BTreeMap<RelationLabel, ClassScores>,
    pub macro_avg: Aggregate,
    pub weighted: Aggregate,
    pub accuracy: f64,
    pub confusion: [[f64; K]; K],
    pub n_runs: usize,
    pub runs: Vec<Scores>,
}

impl EvalReport {
    /// Arithmetic mean of `runs`, which must be non-empty.
    pub fn from_runs(runs: Vec<Scores>) -> Self {
        assert!(!runs.is_empty(), "a report needs at least one run");
        let n = runs.len() as f64;
        let mean = |f: &dyn Fn(&Scores) -> f64| runs.iter().map(f).sum::<f64>() / n;
        let agg = |f: &dyn Fn(&Scores) -> Aggregate| Aggregate {
            precision: mean(&|s| f(s).precision),
            recall: mean(&|s| f(s).recall),
            f1: mean(&|s| f(s).f1),
        };
        let per_class = RelationLabel::ALL
            .iter()
            .map(|&l| {
                let c = |s: &Scores| s.per_class[&l];
                let scores = ClassScores {
                    precision: mean(&|s| c(s).precision),
                    recall: mean(&|s| c(s).recall),
                    f1: mean(&|s| c(s).f1),
                    support: mean(&|s| c(s).support),
                };
                (l, scores)
            })
            .collect();
        let mut confusion = [[0.0; K]; K];
        for (i, row) in confusion.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = mean(&|s| s.confusion[i][j] as f64);
            }
        }
        EvalReport {
            per_class,
            macro_avg: agg(&|s| s.macro_avg),
            weighted: agg(&|s| s.weighted),
            accuracy: mean(&|s| s.accuracy),
            confusion,
            n_runs: runs.len(),
            runs,
        }
    }

    /// Per-class rows followed by the weighted and macro aggregates.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<14} {:>9} {:>9} {:>9} {:>9}", "relation", "precision", "recall", "f1", "support");
        for (label, s) in &self.per_class {
            let _ = writeln!(
                out,
                "{:<14} {:>9.2} {:>9.2} {:>9.2} {:>9.1}",
                label.as_str(),
                s.precision,
                s.recall,
                s.f1,
                s.support
            );
        }
        for (name, a) in [("weighted avg", self.weighted), ("macro avg", self.macro_avg)] {
            let _ = writeln!(out, "{:<14} {:>9.2} {:>9.2} {:>9.2}", name, a.precision, a.recall, a.f1);
        }
        let _ = writeln!(out, "{:<14} {:>9.2}   (runs: {})", "accuracy", self.accuracy, self.n_runs);
        out
    }
}
