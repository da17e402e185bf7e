//! Brute-force reference miner.
//!
//! Shares only the text primitives (normalization, sentence split, tokens,
//! POS tags) and the record types with the library. Connective matching,
//! gates, argument filters, windows and deduplication are re-derived here
//! by exhaustive scanning.

#![allow(dead_code)]

use discomine::connectives::{ConnectiveEntry, Lexicon, Pattern, PosGate};
use discomine::corpus::{Conversation, Pos, RuleTagger, Sentence, Token};
use discomine::extractor::{ExtractionConfig, PairSpans, RelationPair, TurnSpan};

fn is_punct(t: &Token) -> bool {
    t.pos == Pos::Punct
}

fn entry_words(e: &ConnectiveEntry) -> Vec<String> {
    e.surface.split_whitespace().map(str::to_string).collect()
}

fn matches_at(tokens: &[Token], i: usize, words: &[String]) -> bool {
    if i + words.len() > tokens.len() {
        return false;
    }
    (0..words.len()).all(|j| !is_punct(&tokens[i + j]) && tokens[i + j].surface == words[j])
}

/// The longest entry matching at `i`, scanning the whole lexicon.
fn connective_at<'a>(lex: &'a Lexicon, tokens: &[Token], i: usize) -> Option<(&'a ConnectiveEntry, usize)> {
    let mut best: Option<(&ConnectiveEntry, usize)> = None;
    for e in lex.entries() {
        let words = entry_words(e);
        if matches_at(tokens, i, &words) && best.is_none_or(|(_, n)| words.len() > n) {
            best = Some((e, words.len()));
        }
    }
    best
}

fn strip(tokens: &[Token]) -> Vec<Token> {
    let mut v: Vec<Token> = tokens.to_vec();
    while v.first().is_some_and(is_punct) {
        v.remove(0);
    }
    while v.last().is_some_and(is_punct) {
        v.pop();
    }
    v
}

fn full_sentence(arg: &[Token], cfg: &ExtractionConfig) -> bool {
    let words = arg.iter().filter(|t| !is_punct(t)).count();
    let verb = arg.iter().any(|t| t.pos == Pos::Verb);
    words >= cfg.min_arg_tokens && (verb || !cfg.require_verb)
}

fn holds_connective(arg: &[Token], words: &[String]) -> bool {
    (0..arg.len()).any(|i| i + words.len() <= arg.len() && (0..words.len()).all(|j| arg[i + j].surface == words[j]))
}

fn gate_ok(gate: PosGate, arg1: &[Token], conn: &[Token], arg2: &[Token]) -> bool {
    match gate {
        PosGate::NotDegreeAdverb => conn[0].pos != Pos::Adv,
        PosGate::NotIfThen => arg1.iter().all(|t| t.surface != "if"),
        PosGate::ClausalCoordination => {
            arg1.iter().any(|t| t.pos == Pos::Verb) && arg2.iter().any(|t| t.pos == Pos::Verb)
        }
    }
}

fn accepted(e: &ConnectiveEntry, arg1: &[Token], conn: &[Token], arg2: &[Token], cfg: &ExtractionConfig) -> bool {
    if arg1.is_empty() || arg2.is_empty() {
        return false;
    }
    if let Some(g) = e.pos_gate {
        if cfg.enabled_pos_gates.contains(&g) && !gate_ok(g, arg1, conn, arg2) {
            return false;
        }
    }
    let words = entry_words(e);
    full_sentence(arg1, cfg)
        && full_sentence(arg2, cfg)
        && !holds_connective(arg1, &words)
        && !holds_connective(arg2, &words)
}

fn span(turn: usize, toks: &[Token]) -> TurnSpan {
    TurnSpan { turn, start: toks[0].span.start, end: toks.last().unwrap().span.end }
}

#[allow(clippy::too_many_arguments)]
fn record(
    conv: &Conversation,
    e: &ConnectiveEntry,
    pattern: Pattern,
    (t1, arg1): (usize, &[Token]),
    (t2, conn, arg2): (usize, &[Token], &[Token]),
    comma: bool,
) -> RelationPair {
    let spans = PairSpans { arg1: span(t1, arg1), arg2: span(t2, arg2), connective: span(t2, conn) };
    let text = |s: TurnSpan| conv.turns[s.turn].text[s.start..s.end].to_string();
    RelationPair {
        arg1: text(spans.arg1),
        arg2: text(spans.arg2),
        relation: e.relation,
        connective: e.surface.clone(),
        pattern,
        conv_id: conv.id.clone(),
        topic: conv.topic.clone(),
        turns: if t1 == t2 { vec![t1] } else { vec![t1, t2] },
        spans,
        comma,
    }
}

fn concat(sents: &[Sentence]) -> Vec<Token> {
    sents.iter().flat_map(|s| s.tokens.clone()).collect()
}

/// All pairs in conversation order, deduplicated on (arg1, arg2, relation).
pub fn oracle_mine(convs: &[Conversation], lex: &Lexicon, cfg: &ExtractionConfig) -> Vec<RelationPair> {
    let tagger = RuleTagger::default();
    let w = cfg.segment_window_sentences;
    let mut raw = Vec::new();
    for conv in convs {
        let turns: Vec<Vec<Sentence>> = conv.turns.iter().map(|t| Sentence::analyze_turn(&t.text, &tagger)).collect();
        for t in 0..turns.len() {
            for k in 0..turns[t].len() {
                let toks = &turns[t][k].tokens;
                if cfg.patterns_enabled.contains(&Pattern::P2Cross) {
                    let ctx = if k > 0 && cfg.p2_within_turn {
                        Some((t, concat(&turns[t][k.saturating_sub(w)..k])))
                    } else if k == 0 && t > 0 && cfg.p2_cross_turn && !turns[t - 1].is_empty() {
                        let prev = &turns[t - 1];
                        Some((t - 1, concat(&prev[prev.len().saturating_sub(w)..])))
                    } else {
                        None
                    };
                    if let Some((pt, ctx)) = ctx {
                        if let Some(s) = toks.iter().position(|x| !is_punct(x)) {
                            if let Some((e, n)) = connective_at(lex, toks, s) {
                                let arg1 = strip(&ctx);
                                let arg2 = strip(&toks[s + n..]);
                                let conn = &toks[s..s + n];
                                if e.allowed_patterns.contains(&Pattern::P2Cross)
                                    && accepted(e, &arg1, conn, &arg2, cfg)
                                {
                                    let comma = toks.get(s + n).is_some_and(|x| x.surface == ",");
                                    raw.push(record(conv, e, Pattern::P2Cross, (pt, &arg1), (t, conn, &arg2), comma));
                                }
                            }
                        }
                    }
                }
                if cfg.patterns_enabled.contains(&Pattern::P1Intra) {
                    for i in 0..toks.len() {
                        if is_punct(&toks[i]) {
                            continue;
                        }
                        let Some((e, n)) = connective_at(lex, toks, i) else { continue };
                        if !e.allowed_patterns.contains(&Pattern::P1Intra) {
                            continue;
                        }
                        let arg1 = strip(&toks[..i]);
                        let arg2 = strip(&toks[i + n..]);
                        let conn = &toks[i..i + n];
                        if accepted(e, &arg1, conn, &arg2, cfg) {
                            raw.push(record(conv, e, Pattern::P1Intra, (t, &arg1), (t, conn, &arg2), false));
                            break;
                        }
                    }
                }
            }
        }
    }
    let mut out: Vec<RelationPair> = Vec::new();
    for p in raw {
        if !out.iter().any(|q| q.arg1 == p.arg1 && q.arg2 == p.arg2 && q.relation == p.relation) {
            out.push(p);
        }
    }
    out
}
