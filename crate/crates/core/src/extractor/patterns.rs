use super::{ExtractError, ExtractionConfig, PairSpans, RelationPair, TurnSpan};
use crate::connectives::{ConnectiveEntry, Lexicon, Pattern};
use crate::corpus::{Conversation, Pos, Sentence, Span, Token};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RejectReason {
    TooShort,
    NoVerb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Before,
    After,
}

/// Accepts an argument iff it has at least `min_arg_tokens` non-punctuation
/// tokens and, when `require_verb` is set, at least one verb.
pub fn full_sentence_filter(arg_tokens: &[Token], config: &ExtractionConfig) -> Result<(), RejectReason> {
    let words = arg_tokens.iter().filter(|t| !t.is_punct()).count();
    if words < config.min_arg_tokens {
        return Err(RejectReason::TooShort);
    }
    if config.require_verb && !arg_tokens.iter().any(|t| t.pos == Pos::Verb) {
        return Err(RejectReason::NoVerb);
    }
    Ok(())
}

/// The context sentence(s) next to `anchor`: up to `segment_window_sentences`
/// sentences before it (`anchor` may equal the length, meaning "after the
/// last one") or after it, merged into one sentence in text order.
pub fn apply_segment_window(
    turn_sentences: &[Sentence],
    anchor: usize,
    side: Side,
    config: &ExtractionConfig,
) -> Result<Sentence, ExtractError> {
    let len = turn_sentences.len();
    let w = config.segment_window_sentences.max(1);
    let range = match side {
        Side::Before if anchor >= 1 && anchor <= len => anchor.saturating_sub(w)..anchor,
        Side::After if anchor + 1 < len => anchor + 1..(anchor + 1 + w).min(len),
        _ => return Err(ExtractError::WindowOutOfRange { anchor, len, side }),
    };
    let chosen = &turn_sentences[range];
    let first = chosen.first().expect("non-empty window");
    let last = chosen.last().expect("non-empty window");
    Ok(Sentence {
        span: Span::new(first.span.start, last.span.end),
        tokens: chosen.iter().flat_map(|s| s.tokens.iter().cloned()).collect(),
    })
}

fn trim_punct(tokens: &[Token]) -> &[Token] {
    let start = tokens.iter().position(|t| !t.is_punct()).unwrap_or(tokens.len());
    let end = tokens.iter().rposition(|t| !t.is_punct()).map_or(start, |e| e + 1);
    &tokens[start..end.max(start)]
}

fn contains_connective(tokens: &[Token], entry: &ConnectiveEntry) -> bool {
    let words: Vec<&str> = entry.words().collect();
    tokens.windows(words.len()).any(|w| w.iter().zip(&words).all(|(t, word)| t.surface == *word))
}

fn covering(turn: usize, tokens: &[Token]) -> TurnSpan {
    TurnSpan { turn, start: tokens[0].span.start, end: tokens[tokens.len() - 1].span.end }
}

struct Candidate<'a> {
    entry: &'a ConnectiveEntry,
    arg1: &'a [Token],
    connective: &'a [Token],
    arg2: &'a [Token],
}

impl Candidate<'_> {
    fn acceptable(&self, config: &ExtractionConfig) -> bool {
        if self.arg1.is_empty() || self.arg2.is_empty() {
            return false;
        }
        if let Some(gate) = self.entry.pos_gate {
            if config.gate_enabled(gate) && !gate.admits(self.arg1, self.connective, self.arg2) {
                return false;
            }
        }
        !contains_connective(self.arg1, self.entry)
            && !contains_connective(self.arg2, self.entry)
            && full_sentence_filter(self.arg1, config).is_ok()
            && full_sentence_filter(self.arg2, config).is_ok()
    }
}

fn build_pair(
    conv: &Conversation,
    cand: &Candidate<'_>,
    pattern: Pattern,
    arg1_turn: usize,
    arg2_turn: usize,
    comma: bool,
) -> RelationPair {
    let spans = PairSpans {
        arg1: covering(arg1_turn, cand.arg1),
        arg2: covering(arg2_turn, cand.arg2),
        connective: covering(arg2_turn, cand.connective),
    };
    let text = |s: &TurnSpan| s.slice(conv).expect("spans come from this conversation").to_string();
    let mut turns = vec![arg1_turn];
    if arg2_turn != arg1_turn {
        turns.push(arg2_turn);
    }
    RelationPair {
        arg1: text(&spans.arg1),
        arg2: text(&spans.arg2),
        relation: cand.entry.relation,
        connective: cand.entry.surface.clone(),
        pattern,
        conv_id: conv.id.clone(),
        topic: conv.topic.clone(),
        turns,
        spans,
        comma,
    }
}

/// `(Arg1) (connective) (Arg2)` inside one sentence of turn `turn`. The
/// leftmost occurrence that passes its gate and leaves two full-sentence
/// arguments wins; at most one pair per sentence.
pub fn match_pattern1(
    conv: &Conversation,
    turn: usize,
    sentence: &Sentence,
    lexicon: &Lexicon,
    config: &ExtractionConfig,
) -> Option<RelationPair> {
    let toks = &sentence.tokens;
    (0..toks.len()).find_map(|i| {
        if toks[i].is_punct() {
            return None;
        }
        let (entry, n) = lexicon.relation_for(toks, i)?;
        if !entry.allows(Pattern::P1Intra) {
            return None;
        }
        let cand = Candidate {
            entry,
            arg1: trim_punct(&toks[..i]),
            connective: &toks[i..i + n],
            arg2: trim_punct(&toks[i + n..]),
        };
        cand.acceptable(config).then(|| build_pair(conv, &cand, Pattern::P1Intra, turn, turn, false))
    })
}

/// `(Arg1). (Connective)[,] (Arg2)`: `next` starts with a P2-eligible
/// connective and `prev` is the windowed context preceding it, either in the
/// same turn or at the end of the previous turn.
pub fn match_pattern2(
    conv: &Conversation,
    prev: (usize, &Sentence),
    next: (usize, &Sentence),
    lexicon: &Lexicon,
    config: &ExtractionConfig,
) -> Option<RelationPair> {
    let (prev_turn, prev_sentence) = prev;
    let (next_turn, next_sentence) = next;
    let cross_turn = prev_turn != next_turn;
    if (cross_turn && !config.p2_cross_turn) || (!cross_turn && !config.p2_within_turn) {
        return None;
    }
    let toks = &next_sentence.tokens;
    let start = toks.iter().position(|t| !t.is_punct())?;
    let (entry, n) = lexicon.relation_for(toks, start)?;
    if !entry.allows(Pattern::P2Cross) {
        return None;
    }
    let rest = &toks[start + n..];
    let comma = rest.first().is_some_and(|t| t.surface == ",");
    let cand = Candidate {
        entry,
        arg1: trim_punct(&prev_sentence.tokens),
        connective: &toks[start..start + n],
        arg2: trim_punct(rest),
    };
    cand.acceptable(config).then(|| build_pair(conv, &cand, Pattern::P2Cross, prev_turn, next_turn, comma))
}
