//! Counting reference for classification metrics: every quantity is
//! recomputed by scanning the example list per class.

#![allow(dead_code)]

use discomine::connectives::RelationLabel;

pub struct OracleClass {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: usize,
}

pub struct OracleScores {
    pub classes: Vec<OracleClass>,
    pub confusion: Vec<Vec<u64>>,
    pub accuracy: f64,
    pub macro_f1: f64,
    pub weighted_f1: f64,
    pub weighted_precision: f64,
    pub weighted_recall: f64,
}

pub fn oracle_scores(gold: &[RelationLabel], pred: &[RelationLabel]) -> OracleScores {
    let labels = RelationLabel::ALL;
    let pairs: Vec<(RelationLabel, RelationLabel)> = gold.iter().copied().zip(pred.iter().copied()).collect();
    let count = |f: &dyn Fn(&(RelationLabel, RelationLabel)) -> bool| pairs.iter().filter(|p| f(p)).count();
    let confusion =
        labels.iter().map(|&g| labels.iter().map(|&p| count(&|x| x.0 == g && x.1 == p) as u64).collect()).collect();
    let mut classes = Vec::new();
    for &c in &labels {
        let tp = count(&|x| x.0 == c && x.1 == c);
        let fp = count(&|x| x.0 != c && x.1 == c);
        let fneg = count(&|x| x.0 == c && x.1 != c);
        let precision = if tp + fp == 0 { 0.0 } else { tp as f64 / (tp + fp) as f64 };
        let recall = if tp + fneg == 0 { 0.0 } else { tp as f64 / (tp + fneg) as f64 };
        let f1 = if precision + recall == 0.0 { 0.0 } else { 2.0 * precision * recall / (precision + recall) };
        classes.push(OracleClass { precision, recall, f1, support: tp + fneg });
    }
    let n = pairs.len() as f64;
    let weighted = |f: &dyn Fn(&OracleClass) -> f64| classes.iter().map(|c| f(c) * c.support as f64 / n).sum::<f64>();
    OracleScores {
        accuracy: count(&|x| x.0 == x.1) as f64 / n,
        macro_f1: classes.iter().map(|c| c.f1).sum::<f64>() / labels.len() as f64,
        weighted_f1: weighted(&|c| c.f1),
        weighted_precision: weighted(&|c| c.precision),
        weighted_recall: weighted(&|c| c.recall),
        classes,
        confusion,
    }
}
