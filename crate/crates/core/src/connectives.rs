//! Connective lexicon: surface forms mapped to a single discourse relation,
//! the extraction patterns they may take part in, and an optional POS gate.

use crate::corpus::{Pos, Token};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use thiserror::Error;

const BUILTIN_TSV: &str = include_str!("../data/connectives.tsv");

/// Level-1 discourse relation classes, in declaration order. The order is
/// also the argmax tie-break order of the classifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RelationLabel {
    Comparison,
    Contingency,
    Expansion,
    Temporal,
}

impl RelationLabel {
    pub const ALL: [RelationLabel; 4] =
        [RelationLabel::Comparison, RelationLabel::Contingency, RelationLabel::Expansion, RelationLabel::Temporal];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RelationLabel::Comparison => "Comparison",
            RelationLabel::Contingency => "Contingency",
            RelationLabel::Expansion => "Expansion",
            RelationLabel::Temporal => "Temporal",
        }
    }
}

impl fmt::Display for RelationLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RelationLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|r| r.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown relation `{s}`"))
    }
}

/// Extraction pattern: `(Arg1) (conn) (Arg2)` inside one sentence, or
/// `(Arg1). (Conn), (Arg2)` across a sentence or turn boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Pattern {
    #[serde(rename = "P1")]
    P1Intra,
    #[serde(rename = "P2")]
    P2Cross,
}

impl Pattern {
    pub fn lexicon_name(self) -> &'static str {
        match self {
            Pattern::P1Intra => "P1_intra",
            Pattern::P2Cross => "P2_cross",
        }
    }

    pub fn short_name(self) -> &'static str {
        match self {
            Pattern::P1Intra => "P1",
            Pattern::P2Cross => "P2",
        }
    }
}

impl FromStr for Pattern {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "P1_intra" | "P1" | "p1" => Ok(Pattern::P1Intra),
            "P2_cross" | "P2" | "p2" => Ok(Pattern::P2Cross),
            other => Err(format!("unknown pattern `{other}`")),
        }
    }
}

/// Named rules that decide whether a connective occurrence functions as a
/// relation marker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PosGate {
    /// Reject when the connective was tagged as a degree adverb ("so good").
    NotDegreeAdverb,
    /// Reject when the left context contains "if" (the "if .. then" frame).
    NotIfThen,
    /// Require a verb on both sides, i.e. coordination of clauses.
    ClausalCoordination,
}

impl PosGate {
    pub const ALL: [PosGate; 3] = [PosGate::NotDegreeAdverb, PosGate::NotIfThen, PosGate::ClausalCoordination];

    pub fn name(self) -> &'static str {
        match self {
            PosGate::NotDegreeAdverb => "not_degree_adverb",
            PosGate::NotIfThen => "not_if_then",
            PosGate::ClausalCoordination => "clausal_coordination",
        }
    }

    /// `left` is the Arg1 context, `connective` the matched tokens, `right`
    /// the Arg2 context.
    pub fn admits(self, left: &[Token], connective: &[Token], right: &[Token]) -> bool {
        let has_verb = |toks: &[Token]| toks.iter().any(|t| t.pos == Pos::Verb);
        match self {
            PosGate::NotDegreeAdverb => connective.first().is_some_and(|t| t.pos != Pos::Adv),
            PosGate::NotIfThen => !left.iter().any(|t| t.surface == "if"),
            PosGate::ClausalCoordination => has_verb(left) && has_verb(right),
        }
    }
}

impl FromStr for PosGate {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|g| g.name() == s.trim()).ok_or_else(|| format!("unknown POS gate `{s}`"))
    }
}

impl fmt::Display for PosGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConnectiveEntry {
    pub surface: String,
    pub relation: RelationLabel,
    pub allowed_patterns: BTreeSet<Pattern>,
    pub pos_gate: Option<PosGate>,
    pub association_probability: Option<f64>,
}

impl ConnectiveEntry {
    /// Entry with the default pattern eligibility and gate for `surface`:
    /// everything allows P1; all but "and"/"or" allow P2; "so", "then",
    /// "and" and "or" carry their gates.
    pub fn with_defaults(surface: &str, relation: RelationLabel) -> Self {
        let mut allowed_patterns = BTreeSet::from([Pattern::P1Intra]);
        if !matches!(surface, "and" | "or") {
            allowed_patterns.insert(Pattern::P2Cross);
        }
        let pos_gate = match surface {
            "so" => Some(PosGate::NotDegreeAdverb),
            "then" => Some(PosGate::NotIfThen),
            "and" | "or" => Some(PosGate::ClausalCoordination),
            _ => None,
        };
        ConnectiveEntry {
            surface: surface.to_string(),
            relation,
            allowed_patterns,
            pos_gate,
            association_probability: None,
        }
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.surface.split(' ')
    }

    pub fn word_count(&self) -> usize {
        self.words().count()
    }

    pub fn allows(&self, pattern: Pattern) -> bool {
        self.allowed_patterns.contains(&pattern)
    }

    fn to_tsv_line(&self) -> String {
        let patterns: Vec<&str> = self.allowed_patterns.iter().map(|p| p.lexicon_name()).collect();
        format!(
            "{}\t{}\t{}\t{}\t{}",
            self.surface,
            self.relation,
            patterns.join(","),
            self.pos_gate.map_or("", PosGate::name),
            self.association_probability.map(|p| p.to_string()).unwrap_or_default()
        )
    }
}

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("cannot read lexicon {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("lexicon line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("connective `{surface}` is mapped to both {first} and {second}")]
    ConflictingRelation { surface: String, first: RelationLabel, second: RelationLabel },
    #[error("connective `{surface}` is listed twice")]
    Duplicate { surface: String },
    #[error("invalid connective entry `{surface}`: {message}")]
    InvalidEntry { surface: String, message: String },
    #[error("association probability {probability} for `{surface}` is outside [0, 1]")]
    ProbabilityOutOfRange { surface: String, probability: f64 },
}

/// A validated set of connectives with a longest-first matching index.
#[derive(Debug, Clone, PartialEq)]
pub struct Lexicon {
    entries: Vec<ConnectiveEntry>,
    /// first word -> entry indices, longest entry first
    by_first_word: BTreeMap<String, Vec<usize>>,
}

impl Lexicon {
    pub fn new(entries: Vec<ConnectiveEntry>) -> Result<Self, LexiconError> {
        let mut seen: BTreeMap<&str, RelationLabel> = BTreeMap::new();
        for e in &entries {
            validate_entry(e)?;
            if let Some(&first) = seen.get(e.surface.as_str()) {
                return Err(if first == e.relation {
                    LexiconError::Duplicate { surface: e.surface.clone() }
                } else {
                    LexiconError::ConflictingRelation { surface: e.surface.clone(), first, second: e.relation }
                });
            }
            seen.insert(&e.surface, e.relation);
        }
        let mut by_first_word: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for (i, e) in entries.iter().enumerate() {
            let first = e.words().next().unwrap_or_default().to_string();
            by_first_word.entry(first).or_default().push(i);
        }
        for idxs in by_first_word.values_mut() {
            idxs.sort_by(|&a, &b| {
                entries[b]
                    .word_count()
                    .cmp(&entries[a].word_count())
                    .then_with(|| entries[a].surface.cmp(&entries[b].surface))
            });
        }
        Ok(Lexicon { entries, by_first_word })
    }

    pub fn entries(&self) -> &[ConnectiveEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lookup(&self, surface: &str) -> Option<&ConnectiveEntry> {
        let surface = surface.trim().to_lowercase();
        self.entries.iter().find(|e| e.surface == surface)
    }

    pub fn count_by_relation(&self) -> BTreeMap<RelationLabel, usize> {
        let mut counts: BTreeMap<RelationLabel, usize> = RelationLabel::ALL.iter().map(|&r| (r, 0)).collect();
        for e in &self.entries {
            *counts.entry(e.relation).or_default() += 1;
        }
        counts
    }

    /// Longest entry whose words match `tokens` starting at `start`.
    /// Returns the entry and how many tokens it spans.
    pub fn relation_for(&self, tokens: &[Token], start: usize) -> Option<(&ConnectiveEntry, usize)> {
        let first = tokens.get(start)?;
        let candidates = self.by_first_word.get(first.surface.to_lowercase().as_str())?;
        candidates.iter().map(|&i| &self.entries[i]).find_map(|e| {
            let n = e.word_count();
            let window = tokens.get(start..start + n)?;
            let matched = window.iter().zip(e.words()).all(|(t, w)| !t.is_punct() && t.surface.eq_ignore_ascii_case(w));
            matched.then_some((e, n))
        })
    }

    /// Serializes in the lexicon file format, header line included.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("# surface\trelation\tpatterns\tpos_gate\tassociation_probability\n");
        for e in &self.entries {
            out.push_str(&e.to_tsv_line());
            out.push('\n');
        }
        out
    }
}

fn validate_entry(e: &ConnectiveEntry) -> Result<(), LexiconError> {
    let invalid =
        |message: &str| LexiconError::InvalidEntry { surface: e.surface.clone(), message: message.to_string() };
    if e.surface.is_empty() {
        return Err(invalid("empty surface"));
    }
    if e.surface != e.surface.to_lowercase() {
        return Err(invalid("surface must be lowercase"));
    }
    if e.surface.split(' ').any(str::is_empty) || e.surface.chars().any(|c| c.is_whitespace() && c != ' ') {
        return Err(invalid("words must be separated by single spaces"));
    }
    if e.allowed_patterns.is_empty() {
        return Err(invalid("no allowed patterns"));
    }
    if let Some(p) = e.association_probability {
        if !(0.0..=1.0).contains(&p) {
            return Err(LexiconError::ProbabilityOutOfRange { surface: e.surface.clone(), probability: p });
        }
    }
    Ok(())
}

/// The 27 connectives shipped with the toolkit: 4 Comparison,
/// 6 Contingency, 11 Expansion, 6 Temporal.
pub fn builtin_lexicon() -> Lexicon {
    parse_lexicon(BUILTIN_TSV).expect("built-in lexicon is valid")
}

pub fn load_lexicon(path: &Path) -> Result<Lexicon, LexiconError> {
    let text = std::fs::read_to_string(path).map_err(|source| LexiconError::Io { path: path.to_path_buf(), source })?;
    parse_lexicon(&text)
}

/// Parses `surface<TAB>relation<TAB>patterns<TAB>pos_gate?<TAB>prob?` lines.
/// Blank lines and `#` comments are skipped.
pub fn parse_lexicon(text: &str) -> Result<Lexicon, LexiconError> {
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
            continue;
        }
        let parse_err = |message: String| LexiconError::Parse { line, message };
        let fields: Vec<&str> = raw.split('\t').collect();
        if fields.len() < 3 || fields.len() > 5 {
            return Err(parse_err(format!("expected 3 to 5 tab-separated fields, found {}", fields.len())));
        }
        let surface = fields[0].trim().to_string();
        let relation: RelationLabel = fields[1].parse().map_err(parse_err)?;
        let allowed_patterns = fields[2]
            .split(',')
            .filter(|p| !p.trim().is_empty())
            .map(str::parse)
            .collect::<Result<BTreeSet<Pattern>, _>>()
            .map_err(parse_err)?;
        let pos_gate = match fields.get(3).map(|s| s.trim()) {
            None | Some("") => None,
            Some(g) => Some(g.parse().map_err(parse_err)?),
        };
        let association_probability = match fields.get(4).map(|s| s.trim()) {
            None | Some("") => None,
            Some(p) => Some(p.parse::<f64>().map_err(|e| parse_err(format!("bad probability `{p}`: {e}")))?),
        };
        entries.push(ConnectiveEntry { surface, relation, allowed_patterns, pos_gate, association_probability });
    }
    Lexicon::new(entries)
}

/// Keeps candidates that are strongly (> 0.95) associated with exactly one
/// relation. A surface seen with two different relations is dropped
/// whatever its probabilities. Output is sorted by surface and carries the
/// default pattern/gate assignment.
pub fn filter_by_association(
    candidates: &[(String, RelationLabel, f64)],
) -> Result<Vec<ConnectiveEntry>, LexiconError> {
    let mut relations: BTreeMap<&str, BTreeSet<RelationLabel>> = BTreeMap::new();
    for (surface, relation, p) in candidates {
        if !(0.0..=1.0).contains(p) {
            return Err(LexiconError::ProbabilityOutOfRange { surface: surface.clone(), probability: *p });
        }
        relations.entry(surface.as_str()).or_default().insert(*relation);
    }
    let mut kept: BTreeMap<&str, ConnectiveEntry> = BTreeMap::new();
    for (surface, relation, p) in candidates {
        if *p > 0.95 && relations[surface.as_str()].len() == 1 {
            let entry =
                kept.entry(surface.as_str()).or_insert_with(|| ConnectiveEntry::with_defaults(surface, *relation));
            let best = entry.association_probability.map_or(*p, |q| q.max(*p));
            entry.association_probability = Some(best);
        }
    }
    Ok(kept.into_values().collect())
}
