mod common;

use common::oracle::oracle_mine;
use discomine::connectives::{builtin_lexicon, parse_lexicon, Pattern};
use discomine::corpus::{normalize_text, split_sentences, tokenize, Conversation};
use discomine::extractor::{mine_corpus, ExtractionConfig};
use proptest::prelude::*;
use std::collections::BTreeSet;

const CLAUSES: &[&str] = &[
    "i watched the game with my dad",
    "the team played really well",
    "we went to the beach",
    "she cooked dinner for everyone",
    "the movie was too long",
    "if it is raining",
    "so good",
    "the red one",
    "they had a $5 off the price",
    "i bought it",
    "and fries",
    "it is so cold",
    "then we left",
];
const CONNECTIVES: &[&str] = &[
    "but",
    "however",
    "so",
    "and",
    "or",
    "then",
    "because",
    "as a result",
    "for example",
    "in fact",
    "also",
    "later",
    "by contrast",
    "although",
    "before",
];
const ENDS: &[&str] = &[".", "!", "?", "", "..."];

fn sentence() -> impl Strategy<Value = String> {
    let clause = proptest::sample::select(CLAUSES);
    let conn = proptest::sample::select(CONNECTIVES);
    let end = proptest::sample::select(ENDS);
    prop_oneof![
        (clause.clone(), conn.clone(), clause.clone(), any::<bool>(), end.clone())
            .prop_map(|(a, c, b, comma, e)| format!("{a}{} {c} {b}{e}", if comma { "," } else { "" })),
        (conn, any::<bool>(), clause.clone(), end.clone())
            .prop_map(|(c, comma, b, e)| format!("{c}{} {b}{e}", if comma { "," } else { "" })),
        (clause, end).prop_map(|(a, e)| format!("{a}{e}")),
    ]
}

fn turn() -> impl Strategy<Value = String> {
    prop::collection::vec(sentence(), 1..4).prop_map(|s| s.join(" "))
}

fn conversation(id: usize) -> impl Strategy<Value = Conversation> {
    prop::collection::vec(turn(), 1..5)
        .prop_map(move |turns| Conversation::from_raw(format!("g{id}"), Some("music"), &turns).unwrap())
}

fn corpus() -> impl Strategy<Value = Vec<Conversation>> {
    (1usize..6).prop_flat_map(|n| (0..n).map(conversation).collect::<Vec<_>>())
}

fn config() -> impl Strategy<Value = ExtractionConfig> {
    (1usize..5, any::<bool>(), 1usize..3, any::<bool>(), any::<bool>(), any::<bool>()).prop_map(
        |(min, verb, window, gates, within, cross)| ExtractionConfig {
            min_arg_tokens: min,
            require_verb: verb,
            segment_window_sentences: window,
            enabled_pos_gates: if gates { ExtractionConfig::default().enabled_pos_gates } else { BTreeSet::new() },
            p2_within_turn: within,
            p2_cross_turn: cross,
            ..Default::default()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn tokens_cover_all_visible_text(raw in "\\PC{0,60}") {
        let text = normalize_text(&raw);
        let tokens = tokenize(&text);
        let mut prev_end = 0;
        for t in &tokens {
            prop_assert!(t.span.start >= prev_end && t.span.end > t.span.start);
            prop_assert_eq!(t.span.slice(&text).to_lowercase(), t.surface.clone());
            prev_end = t.span.end;
        }
        let visible: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let covered: String = tokens.iter().map(|t| t.span.slice(&text)).collect::<String>()
            .chars().filter(|c| !c.is_whitespace()).collect();
        prop_assert_eq!(visible, covered);
    }

    #[test]
    fn sentences_partition_visible_text(raw in "[a-z .!?\"')]{0,80}") {
        let spans = split_sentences(&raw);
        let mut prev_end = 0;
        for s in &spans {
            prop_assert!(s.start >= prev_end && s.end > s.start);
            let piece = s.slice(&raw);
            prop_assert_eq!(piece.trim(), piece);
            prop_assert!(raw[prev_end..s.start].trim().is_empty());
            prev_end = s.end;
        }
        prop_assert!(raw[prev_end..].trim().is_empty());
    }

    #[test]
    fn miner_agrees_with_oracle(convs in corpus(), cfg in config()) {
        let lex = builtin_lexicon();
        let (pairs, stats) = mine_corpus(&convs, &lex, &cfg).unwrap();
        prop_assert_eq!(&pairs, &oracle_mine(&convs, &lex, &cfg));
        prop_assert_eq!(stats.total_pairs, pairs.len());
    }

    #[test]
    fn labels_are_sound_and_connectives_removed(convs in corpus()) {
        let lex = builtin_lexicon();
        let (pairs, _) = mine_corpus(&convs, &lex, &ExtractionConfig::default()).unwrap();
        for p in &pairs {
            let entry = lex.lookup(&p.connective).unwrap();
            prop_assert_eq!(entry.relation, p.relation);
            prop_assert!(entry.allowed_patterns.contains(&p.pattern));
            let words: Vec<&str> = entry.surface.split(' ').collect();
            for arg in [&p.arg1, &p.arg2] {
                let toks: Vec<String> = tokenize(arg).into_iter().map(|t| t.surface).collect();
                prop_assert!(!toks.windows(words.len()).any(|w| w.iter().zip(&words).all(|(a, b)| a == b)));
            }
        }
    }

    #[test]
    fn provenance_spans_point_at_the_text(convs in corpus()) {
        let (pairs, _) = mine_corpus(&convs, &builtin_lexicon(), &ExtractionConfig::default()).unwrap();
        for p in &pairs {
            let conv = convs.iter().find(|c| c.id == p.conv_id).unwrap();
            prop_assert_eq!(p.spans.arg1.slice(conv), Some(p.arg1.as_str()));
            prop_assert_eq!(p.spans.arg2.slice(conv), Some(p.arg2.as_str()));
            prop_assert_eq!(p.spans.connective.slice(conv), Some(p.connective.as_str()));
            prop_assert!(p.spans.connective.end <= p.spans.arg2.start);
            match p.pattern {
                Pattern::P1Intra => {
                    prop_assert_eq!(p.turns.len(), 1);
                    prop_assert!(p.spans.arg1.end <= p.spans.connective.start);
                }
                Pattern::P2Cross if p.turns.len() == 2 => prop_assert_eq!(p.turns[1], p.turns[0] + 1),
                Pattern::P2Cross => prop_assert!(p.spans.arg1.end <= p.spans.connective.start),
            }
        }
    }

    #[test]
    fn mining_is_deterministic(convs in corpus()) {
        let lex = builtin_lexicon();
        let cfg = ExtractionConfig::default();
        prop_assert_eq!(mine_corpus(&convs, &lex, &cfg).unwrap(), mine_corpus(&convs, &lex, &cfg).unwrap());
    }

    #[test]
    fn adding_a_conversation_keeps_earlier_pairs(convs in corpus(), extra in conversation(99)) {
        let lex = builtin_lexicon();
        let cfg = ExtractionConfig::default();
        let (before, s1) = mine_corpus(&convs, &lex, &cfg).unwrap();
        let mut grown = convs.clone();
        grown.push(extra);
        let (after, s2) = mine_corpus(&grown, &lex, &cfg).unwrap();
        prop_assert!(after.len() >= before.len());
        prop_assert_eq!(&after[..before.len()], &before[..]);
        prop_assert!(s2.total_pairs + s2.duplicates_removed >= s1.total_pairs + s1.duplicates_removed);
    }

    #[test]
    fn lexicon_round_trips_through_tsv(n in 1usize..27) {
        let lex = builtin_lexicon();
        let tsv: String = lex.to_tsv().lines().take(n + 1).map(|l| format!("{l}\n")).collect();
        let parsed = parse_lexicon(&tsv).unwrap();
        prop_assert_eq!(parsed.len(), n);
        prop_assert_eq!(parsed.to_tsv(), tsv);
        let surfaces: BTreeSet<&str> = parsed.entries().iter().map(|e| e.surface.as_str()).collect();
        prop_assert_eq!(surfaces.len(), n);
    }
}

#[test]
fn conflicting_relations_are_rejected() {
    let text = "but\tComparison\tP1_intra\t\t\nbut\tTemporal\tP1_intra\t\t\n";
    assert!(parse_lexicon(text).is_err());
}
