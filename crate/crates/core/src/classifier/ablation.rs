use super::{run_repeated, ClassifierError, EvalReport, Example, TrainConfig};
use crate::extractor::RelationPair;
use crate::features::{build_space_from_annotations, vectorize_all, Family, PairAnnotation, ProviderRegistry};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashSet};
use std::fmt::Write;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AblationRow {
    pub name: String,
    pub families: BTreeSet<Family>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AblationPlan {
    pub rows: Vec<AblationRow>,
}

/// Display order of the single-family rows.
const ROW_ORDER: [Family; 5] =
    [Family::DialogueAct, Family::Intent, Family::Topic, Family::Sentiment, Family::EntityType];

fn display(f: Family) -> &'static str {
    match f {
        Family::DialogueAct => "dialogue act",
        Family::Sentiment => "sentiment",
        Family::Intent => "intent",
        Family::Topic => "topic",
        Family::EntityType => "entity type",
    }
}

impl Default for AblationPlan {
    /// Each family alone, all of them, then each leave-one-out set.
    fn default() -> Self {
        let all: BTreeSet<Family> = Family::ALL.into_iter().collect();
        let mut rows: Vec<AblationRow> =
            ROW_ORDER.iter().map(|&f| AblationRow { name: display(f).into(), families: BTreeSet::from([f]) }).collect();
        rows.push(AblationRow { name: "All".into(), families: all.clone() });
        for f in ROW_ORDER {
            let mut families = all.clone();
            families.remove(&f);
            rows.push(AblationRow { name: format!("All - {}", display(f)), families });
        }
        AblationPlan { rows }
    }
}

impl AblationPlan {
    /// Only the rows whose families are all in `enabled`.
    pub fn restricted_to(&self, enabled: &BTreeSet<Family>) -> Self {
        AblationPlan { rows: self.rows.iter().filter(|r| r.families.is_subset(enabled)).cloned().collect() }
    }

    pub fn validate(&self) -> Result<(), ClassifierError> {
        if self.rows.is_empty() {
            return Err(ClassifierError::InvalidPlan("no rows".into()));
        }
        let mut names = HashSet::new();
        for row in &self.rows {
            if row.families.is_empty() {
                return Err(ClassifierError::InvalidPlan(format!("row `{}` has no families", row.name)));
            }
            if !names.insert(&row.name) {
                return Err(ClassifierError::InvalidPlan(format!("duplicate row `{}`", row.name)));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationResult {
    pub name: String,
    pub families: BTreeSet<Family>,
    pub dim: usize,
    pub report: EvalReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationTable {
    pub rows: Vec<AblationResult>,
    /// Index of the row with the highest weighted F1 (first on ties).
    pub best: usize,
}

impl AblationTable {
    /// Weighted P/R/F1 per row, with the macro F1 alongside and the best row
    /// starred.
    pub fn to_table(&self) -> String {
        let name_w = self.rows.iter().map(|r| r.name.len()).max().unwrap_or(0).max("features".len());
        let mut out = String::new();
        let header = format!(
            "  {:name_w$} | {:>5} | {:>9} | {:>6} | {:>4} | {:>8}",
            "features", "dim", "precision", "recall", "f1", "macro f1"
        );
        let _ = writeln!(out, "{header}");
        let _ = writeln!(out, "{}", "-".repeat(header.len()));
        for (i, r) in self.rows.iter().enumerate() {
            let mark = if i == self.best { '*' } else { ' ' };
            let w = r.report.weighted;
            let _ = writeln!(
                out,
                "{mark} {:name_w$} | {:>5} | {:>9.2} | {:>6.2} | {:>4.2} | {:>8.2}",
                r.name, r.dim, w.precision, w.recall, w.f1, r.report.macro_avg.f1
            );
        }
        out
    }
}

/// Annotates both splits once, then for every row rebuilds the space from
/// the training annotations restricted to that row's families and runs the
/// repeated train/evaluate protocol on the fixed test split.
pub fn run_ablation(
    train_pairs: &[RelationPair],
    test_pairs: &[RelationPair],
    registry: &ProviderRegistry,
    plan: &AblationPlan,
    config: &TrainConfig,
    n_runs: usize,
) -> Result<AblationTable, ClassifierError> {
    plan.validate()?;
    if train_pairs.is_empty() {
        return Err(ClassifierError::EmptyTrainingSet);
    }
    if test_pairs.is_empty() {
        return Err(ClassifierError::EmptyTestSet);
    }
    let train_ann = registry.annotate_all(train_pairs);
    let test_ann = registry.annotate_all(test_pairs);
    let rows = plan
        .rows
        .par_iter()
        .map(|row| run_row(row, (&train_ann, train_pairs), (&test_ann, test_pairs), config, n_runs))
        .collect::<Result<Vec<_>, _>>()?;
    let mut best = 0;
    for (i, r) in rows.iter().enumerate() {
        if r.report.weighted.f1 > rows[best].report.weighted.f1 {
            best = i;
        }
    }
    Ok(AblationTable { rows, best })
}

fn run_row(
    row: &AblationRow,
    train: (&[PairAnnotation], &[RelationPair]),
    test: (&[PairAnnotation], &[RelationPair]),
    config: &TrainConfig,
    n_runs: usize,
) -> Result<AblationResult, ClassifierError> {
    let space = build_space_from_annotations(train.0, &row.families)?;
    let examples = |(ann, pairs): (&[PairAnnotation], &[RelationPair])| -> Vec<Example> {
        vectorize_all(ann, &space).into_iter().zip(pairs.iter().map(|p| p.relation)).collect()
    };
    let report = run_repeated(&examples(train), &examples(test), config, n_runs)?;
    Ok(AblationResult { name: row.name.clone(), families: row.families.clone(), dim: space.len(), report })
}
