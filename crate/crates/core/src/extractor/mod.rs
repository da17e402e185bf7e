//! Mining weakly labeled implicit relation pairs.
//!
//! A pair is produced wherever a lexicon connective links two full-sentence
//! arguments, either inside one sentence (P1) or at the start of a sentence
//! that follows another one in the same or the previous turn (P2). The
//! connective itself is dropped and its relation becomes the label.

mod patterns;
mod stats;

pub use patterns::{apply_segment_window, full_sentence_filter, match_pattern1, match_pattern2, RejectReason, Side};
pub use stats::{compute_stats, DatasetStats};

use crate::connectives::{Lexicon, Pattern, PosGate, RelationLabel};
use crate::corpus::{Conversation, PosTagger, RuleTagger, Sentence};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashSet};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ExtractError {
    #[error("invalid extraction config: {0}")]
    InvalidConfig(String),
    #[error("segment window anchor {anchor} out of range for {len} sentences ({side:?})")]
    WindowOutOfRange { anchor: usize, len: usize, side: Side },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractionConfig {
    pub min_arg_tokens: usize,
    pub require_verb: bool,
    pub segment_window_sentences: usize,
    pub enabled_pos_gates: BTreeSet<PosGate>,
    pub patterns_enabled: BTreeSet<Pattern>,
    /// P2 between consecutive sentences of one turn.
    pub p2_within_turn: bool,
    /// P2 between the last sentence of a turn and the first of the next.
    pub p2_cross_turn: bool,
}

impl Default for ExtractionConfig {
    fn default() -> Self {
        ExtractionConfig {
            min_arg_tokens: 3,
            require_verb: true,
            segment_window_sentences: 1,
            enabled_pos_gates: PosGate::ALL.into_iter().collect(),
            patterns_enabled: [Pattern::P1Intra, Pattern::P2Cross].into_iter().collect(),
            p2_within_turn: true,
            p2_cross_turn: true,
        }
    }
}

impl ExtractionConfig {
    pub fn validate(&self) -> Result<(), ExtractError> {
        if self.min_arg_tokens < 1 {
            return Err(ExtractError::InvalidConfig("min_arg_tokens must be >= 1".into()));
        }
        if self.segment_window_sentences < 1 {
            return Err(ExtractError::InvalidConfig("segment_window_sentences must be >= 1".into()));
        }
        Ok(())
    }

    pub fn gate_enabled(&self, gate: PosGate) -> bool {
        self.enabled_pos_gates.contains(&gate)
    }
}

/// A byte span inside one turn of a conversation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TurnSpan {
    pub turn: usize,
    pub start: usize,
    pub end: usize,
}

impl TurnSpan {
    /// The referenced text, if the span is valid for `conv`.
    pub fn slice<'a>(&self, conv: &'a Conversation) -> Option<&'a str> {
        conv.turns.get(self.turn)?.text.get(self.start..self.end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PairSpans {
    pub arg1: TurnSpan,
    pub arg2: TurnSpan,
    pub connective: TurnSpan,
}

/// One mined argument pair with its provenance.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RelationPair {
    pub arg1: String,
    pub arg2: String,
    pub relation: RelationLabel,
    pub connective: String,
    pub pattern: Pattern,
    pub conv_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub topic: Option<String>,
    pub turns: Vec<usize>,
    pub spans: PairSpans,
    /// P2 only: whether a comma followed the connective.
    #[serde(default)]
    pub comma: bool,
}

impl RelationPair {
    pub fn is_cross_turn(&self) -> bool {
        self.turns.len() > 1
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("relation pairs always serialize")
    }
}

/// Mines with the built-in rule tagger.
pub fn mine_corpus(
    conversations: &[Conversation],
    lexicon: &Lexicon,
    config: &ExtractionConfig,
) -> Result<(Vec<RelationPair>, DatasetStats), ExtractError> {
    mine_corpus_with_tagger(conversations, lexicon, config, &RuleTagger::default())
}

pub fn mine_corpus_with_tagger(
    conversations: &[Conversation],
    lexicon: &Lexicon,
    config: &ExtractionConfig,
    tagger: &dyn PosTagger,
) -> Result<(Vec<RelationPair>, DatasetStats), ExtractError> {
    config.validate()?;
    let per_conv: Vec<Vec<RelationPair>> = conversations
        .par_iter()
        .map(|conv| mine_conversation(conv, lexicon, config, tagger))
        .collect::<Result<_, _>>()?;

    let mut seen: HashSet<(String, String, RelationLabel)> = HashSet::new();
    let mut pairs = Vec::new();
    let mut duplicates = 0;
    for pair in per_conv.into_iter().flatten() {
        if seen.insert((pair.arg1.clone(), pair.arg2.clone(), pair.relation)) {
            pairs.push(pair);
        } else {
            duplicates += 1;
        }
    }
    let mut stats = compute_stats(&pairs);
    stats.duplicates_removed = duplicates;
    Ok((pairs, stats))
}

/// Pairs of one conversation in (turn, offset) order, before deduplication.
pub fn mine_conversation(
    conv: &Conversation,
    lexicon: &Lexicon,
    config: &ExtractionConfig,
    tagger: &dyn PosTagger,
) -> Result<Vec<RelationPair>, ExtractError> {
    let sentences: Vec<Vec<Sentence>> = conv.turns.iter().map(|t| Sentence::analyze_turn(&t.text, tagger)).collect();
    let p1 = config.patterns_enabled.contains(&Pattern::P1Intra);
    let p2 = config.patterns_enabled.contains(&Pattern::P2Cross);
    let mut out = Vec::new();
    for (t, turn_sents) in sentences.iter().enumerate() {
        for (k, sentence) in turn_sents.iter().enumerate() {
            if p2 {
                let context = if k > 0 && config.p2_within_turn {
                    Some((t, apply_segment_window(turn_sents, k, Side::Before, config)?))
                } else if k == 0 && t > 0 && config.p2_cross_turn && !sentences[t - 1].is_empty() {
                    let prev = &sentences[t - 1];
                    Some((t - 1, apply_segment_window(prev, prev.len(), Side::Before, config)?))
                } else {
                    None
                };
                if let Some((pt, ctx)) = context {
                    out.extend(match_pattern2(conv, (pt, &ctx), (t, sentence), lexicon, config));
                }
            }
            if p1 {
                out.extend(match_pattern1(conv, t, sentence, lexicon, config));
            }
        }
    }
    Ok(out)
}
