use super::RelationPair;
use crate::connectives::{Pattern, RelationLabel};
use crate::corpus::count_words;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write;

/// Dataset statistics in the shape of the usual corpus summary table.
/// Averages are word counts (punctuation excluded), rounded to one decimal.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub total_pairs: usize,
    pub pairs_per_relation: BTreeMap<RelationLabel, usize>,
    pub avg_tokens_arg1: f64,
    pub avg_tokens_arg2: f64,
    pub pairs_per_pattern: BTreeMap<Pattern, usize>,
    /// P2 pairs split into `within_turn` and `cross_turn`.
    pub p2_by_mode: BTreeMap<String, usize>,
    pub pairs_per_connective: BTreeMap<String, usize>,
    pub duplicates_removed: usize,
}

fn round1(x: f64) -> f64 {
    (x * 10.0).round() / 10.0
}

pub fn compute_stats(pairs: &[RelationPair]) -> DatasetStats {
    if pairs.is_empty() {
        return DatasetStats::default();
    }
    let mut stats = DatasetStats {
        total_pairs: pairs.len(),
        pairs_per_relation: RelationLabel::ALL.iter().map(|&r| (r, 0)).collect(),
        pairs_per_pattern: [(Pattern::P1Intra, 0), (Pattern::P2Cross, 0)].into_iter().collect(),
        p2_by_mode: [("cross_turn".to_string(), 0), ("within_turn".to_string(), 0)].into_iter().collect(),
        ..Default::default()
    };
    let (mut words1, mut words2) = (0usize, 0usize);
    for p in pairs {
        *stats.pairs_per_relation.entry(p.relation).or_default() += 1;
        *stats.pairs_per_pattern.entry(p.pattern).or_default() += 1;
        *stats.pairs_per_connective.entry(p.connective.clone()).or_default() += 1;
        if p.pattern == Pattern::P2Cross {
            let mode = if p.is_cross_turn() { "cross_turn" } else { "within_turn" };
            *stats.p2_by_mode.entry(mode.to_string()).or_default() += 1;
        }
        words1 += count_words(&p.arg1);
        words2 += count_words(&p.arg2);
    }
    let n = pairs.len() as f64;
    stats.avg_tokens_arg1 = round1(words1 as f64 / n);
    stats.avg_tokens_arg2 = round1(words2 as f64 / n);
    stats
}

impl DatasetStats {
    /// Plain-text table: totals, average argument lengths, then one row per
    /// relation, followed by the pattern and sub-mode breakdown.
    pub fn to_table(&self) -> String {
        let count = |r: RelationLabel| self.pairs_per_relation.get(&r).copied().unwrap_or(0);
        let mut rows: Vec<(String, String)> = vec![
            ("# pairs of all relations".into(), self.total_pairs.to_string()),
            ("avg # words of arg 1".into(), format!("{:.1}", self.avg_tokens_arg1)),
            ("avg # words of arg 2".into(), format!("{:.1}", self.avg_tokens_arg2)),
        ];
        let relation_rows = RelationLabel::ALL.len();
        for r in RelationLabel::ALL {
            rows.push((format!("# pairs of '{r}'"), count(r).to_string()));
        }
        let mut extra: Vec<(String, String)> = Vec::new();
        for p in [Pattern::P1Intra, Pattern::P2Cross] {
            let n = self.pairs_per_pattern.get(&p).copied().unwrap_or(0);
            extra.push((format!("# pairs via {}", p.short_name()), n.to_string()));
        }
        for mode in ["within_turn", "cross_turn"] {
            let n = self.p2_by_mode.get(mode).copied().unwrap_or(0);
            extra.push((format!("  P2 {}", mode.replace('_', "-")), n.to_string()));
        }
        extra.push(("duplicates removed".into(), self.duplicates_removed.to_string()));

        let label_w = rows.iter().chain(&extra).map(|(l, _)| l.len()).max().unwrap_or(0);
        let value_w = rows.iter().chain(&extra).map(|(_, v)| v.len()).max().unwrap_or(0).max("pairs".len());
        let rule = "=".repeat(label_w + value_w + 3);
        let thin = "-".repeat(label_w + value_w + 3);
        let mut out = String::new();
        let _ = writeln!(out, "{rule}");
        let _ = writeln!(out, "{:label_w$} | {:>value_w$}", "", "pairs");
        let _ = writeln!(out, "{thin}");
        for (i, (label, value)) in rows.iter().enumerate() {
            if i == rows.len() - relation_rows {
                let _ = writeln!(out, "{thin}");
            }
            let _ = writeln!(out, "{label:label_w$} | {value:>value_w$}");
        }
        let _ = writeln!(out, "{thin}");
        for (label, value) in &extra {
            let _ = writeln!(out, "{label:label_w$} | {value:>value_w$}");
        }
        let _ = writeln!(out, "{rule}");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extractor::{PairSpans, TurnSpan};

    fn pair(arg1: &str, arg2: &str, relation: RelationLabel, pattern: Pattern, turns: Vec<usize>) -> RelationPair {
        let span = TurnSpan { turn: 0, start: 0, end: 0 };
        RelationPair {
            arg1: arg1.into(),
            arg2: arg2.into(),
            relation,
            connective: "but".into(),
            pattern,
            conv_id: "c".into(),
            topic: None,
            turns,
            spans: PairSpans { arg1: span, arg2: span, connective: span },
            comma: false,
        }
    }

    #[test]
    fn averages_round_to_one_decimal() {
        use RelationLabel::*;
        let pairs = vec![
            pair("a b c d e f g", "x y z", Comparison, Pattern::P1Intra, vec![0]),
            pair("a b c d e f g", "x y z", Comparison, Pattern::P1Intra, vec![0]),
            pair("a b c d e f g h", "x y z", Temporal, Pattern::P2Cross, vec![0, 1]),
        ];
        let s = compute_stats(&pairs);
        assert_eq!(s.avg_tokens_arg1, 7.3);
        assert_eq!(s.avg_tokens_arg2, 3.0);
        assert_eq!(s.total_pairs, 3);
        assert_eq!(s.pairs_per_relation.values().sum::<usize>(), 3);
        assert_eq!(s.pairs_per_pattern.values().sum::<usize>(), 3);
        assert_eq!(s.pairs_per_relation[&Contingency], 0);
        assert_eq!(s.p2_by_mode["cross_turn"], 1);
        assert_eq!(s.pairs_per_connective["but"], 3);
    }

    #[test]
    fn punctuation_is_not_counted() {
        let pairs = vec![pair("well, it's fine", "ok , sure", RelationLabel::Expansion, Pattern::P1Intra, vec![0])];
        let s = compute_stats(&pairs);
        assert_eq!(s.avg_tokens_arg1, 3.0);
        assert_eq!(s.avg_tokens_arg2, 2.0);
    }

    #[test]
    fn empty_input_is_all_zero() {
        let s = compute_stats(&[]);
        assert_eq!(s.total_pairs, 0);
        assert_eq!(s.avg_tokens_arg1, 0.0);
        assert_eq!(s.avg_tokens_arg2, 0.0);
    }

    #[test]
    fn table_lists_relations_in_order() {
        let pairs = vec![pair("a b c", "d e f", RelationLabel::Comparison, Pattern::P1Intra, vec![0])];
        let table = compute_stats(&pairs).to_table();
        let positions: Vec<usize> = ["'Comparison'", "'Contingency'", "'Expansion'", "'Temporal'"]
            .iter()
            .map(|r| table.find(r).unwrap())
            .collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]));
        assert!(table.contains("# pairs of all relations"));
        assert!(table.contains("avg # words of arg 1"));
    }

    #[test]
    fn stats_json_round_trip() {
        let pairs = vec![pair("a b c", "d e f", RelationLabel::Comparison, Pattern::P2Cross, vec![0])];
        let s = compute_stats(&pairs);
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.contains("\"P2\":1"));
        let back: DatasetStats = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }
}
