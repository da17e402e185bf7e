//! Dialogue corpus model and ingestion.
//!
//! Conversations are loaded from either a CSV layout (one conversation per
//! row, `topic, turn_0 .. turn_n`) or JSONL (`{"id", "topic", "turns"}` per
//! line). All text is NFC-normalized, curly quotes are folded to ASCII and
//! everything is lowercased at load time, so every byte span produced
//! downstream indexes into [`Turn::text`] directly.

mod load;
pub mod pos;
mod segment;
mod tokenize;

pub use load::{load_corpus, parse_jsonl, CorpusFormat, LoadReport};
pub use pos::{Pos, PosTagger, RuleTagger};
pub use segment::split_sentences;
pub use tokenize::{count_words, tokenize, tokenize_with};

use serde::{Deserialize, Serialize};
use std::ops::Range;
use std::path::PathBuf;
use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read corpus {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("corpus {} does not look like {format}: {failed} of {total} records malformed", path.display())]
    Format { path: PathBuf, format: CorpusFormat, failed: usize, total: usize },
}

/// Byte offsets into a turn's normalized text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        Span { start, end }
    }

    pub fn range(self) -> Range<usize> {
        self.start..self.end
    }

    pub fn is_empty(self) -> bool {
        self.start >= self.end
    }

    pub fn slice(self, text: &str) -> &str {
        &text[self.range()]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Speaker {
    A,
    B,
}

impl Speaker {
    /// Self-dialogue corpora alternate speakers, starting with `A`.
    pub fn for_index(index: usize) -> Self {
        if index.is_multiple_of(2) {
            Speaker::A
        } else {
            Speaker::B
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Turn {
    pub speaker: Speaker,
    pub text: String,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conversation {
    pub id: String,
    pub topic: Option<String>,
    pub turns: Vec<Turn>,
}

impl Conversation {
    /// Builds a conversation from raw turn strings, normalizing each one and
    /// discarding turns that are empty after trimming. Returns `None` when no
    /// turn survives.
    pub fn from_raw<S: AsRef<str>>(id: impl Into<String>, topic: Option<&str>, raw_turns: &[S]) -> Option<Self> {
        let turns: Vec<Turn> = raw_turns
            .iter()
            .map(|t| normalize_text(t.as_ref()))
            .filter(|t| !t.is_empty())
            .enumerate()
            .map(|(index, text)| Turn { speaker: Speaker::for_index(index), text, index })
            .collect();
        if turns.is_empty() {
            return None;
        }
        let topic = topic.map(normalize_text).filter(|t| !t.is_empty());
        Some(Conversation { id: id.into(), topic, turns })
    }
}

/// Canonical text form used everywhere: NFC, ASCII quotes, lowercase, trimmed.
pub fn normalize_text(raw: &str) -> String {
    let folded: String = raw
        .nfc()
        .map(|c| match c {
            '\u{2018}' | '\u{2019}' | '\u{201A}' | '\u{201B}' | '\u{2032}' | '`' => '\'',
            '\u{201C}' | '\u{201D}' | '\u{201E}' | '\u{201F}' | '\u{2033}' => '"',
            c => c,
        })
        .collect();
    // Lowercasing can produce decomposed sequences, so renormalize.
    folded.trim().to_lowercase().nfc().collect()
}

/// A sentence inside a turn: its span and its tagged tokens. Token spans are
/// absolute offsets into the same turn text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub span: Span,
    pub tokens: Vec<Token>,
}

impl Sentence {
    pub fn text<'a>(&self, turn_text: &'a str) -> &'a str {
        self.span.slice(turn_text)
    }

    /// Segments and tags one turn.
    pub fn analyze_turn(turn_text: &str, tagger: &dyn PosTagger) -> Vec<Sentence> {
        if turn_text.trim().is_empty() {
            return Vec::new();
        }
        split_sentences(turn_text)
            .into_iter()
            .filter_map(|span| {
                let tokens: Vec<Token> =
                    tokenize_with(span.slice(turn_text), tagger).into_iter().map(|t| t.offset(span.start)).collect();
                (!tokens.is_empty()).then_some(Sentence { span, tokens })
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub pos: Pos,
    pub span: Span,
}

impl Token {
    pub fn is_punct(&self) -> bool {
        self.pos == Pos::Punct
    }

    fn offset(mut self, by: usize) -> Self {
        self.span = Span::new(self.span.start + by, self.span.end + by);
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_folds_quotes_and_case() {
        assert_eq!(normalize_text("  It\u{2019}s GREAT  "), "it's great");
        assert_eq!(normalize_text("\u{201C}Hi\u{201D}"), "\"hi\"");
        // e + combining acute composes to a single scalar
        assert_eq!(normalize_text("Cafe\u{301}"), "caf\u{e9}");
    }

    #[test]
    fn from_raw_reindexes_turns() {
        let conv = Conversation::from_raw("c1", Some("Music"), &["  ", "Hello", "", "Hi there"]).unwrap();
        assert_eq!(conv.turns.len(), 2);
        assert_eq!(conv.turns[1].index, 1);
        assert_eq!(conv.turns[1].speaker, Speaker::B);
        assert_eq!(conv.topic.as_deref(), Some("music"));
        assert!(Conversation::from_raw("c2", None, &["", "   "]).is_none());
    }

    #[test]
    fn analyze_turn_spans_round_trip() {
        let text = "i saw dr. smith. he waved!  ok";
        let sents = Sentence::analyze_turn(text, &RuleTagger::default());
        assert_eq!(sents.len(), 3);
        for s in &sents {
            let joined: Vec<&str> = s.tokens.iter().map(|t| t.span.slice(text)).collect();
            for (tok, surf) in s.tokens.iter().zip(&joined) {
                assert_eq!(&tok.surface, surf);
            }
            assert!(s.span.start <= s.tokens[0].span.start);
            assert!(s.tokens.last().unwrap().span.end <= s.span.end);
        }
    }
}
