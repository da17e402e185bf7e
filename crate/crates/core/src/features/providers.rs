//! Deterministic rule and lexicon providers for the five dialogue feature
//! families. They stand in for trained NLU components and are swappable
//! through [`LabelProvider`].

use super::FeatureError;
use crate::corpus::{tokenize, Token};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::OnceLock;

const INTENTS: &str = include_str!("../../data/intents.txt");
const TOPICS: &str = include_str!("../../data/topics.txt");
const TOPIC_ALIASES: &str = include_str!("../../data/topic_aliases.tsv");
const TOPIC_KEYWORDS: &str = include_str!("../../data/topic_keywords.tsv");
const ENTITY_TYPES: &str = include_str!("../../data/entity_types.txt");
const GAZETTEER: &str = include_str!("../../data/gazetteer.tsv");
const POSITIVE: &str = include_str!("../../data/sentiment_positive.txt");
const NEGATIVE: &str = include_str!("../../data/sentiment_negative.txt");
const NEGATORS: &str = include_str!("../../data/negators.txt");

/// Per-utterance context available to providers.
#[derive(Debug, Clone, Copy, Default)]
pub struct UtteranceContext<'a> {
    pub conversation_topic: Option<&'a str>,
}

/// Maps an utterance to label(s) from a closed vocabulary. Single-valued
/// families return exactly one label; entity types may return any number.
pub trait LabelProvider: Send + Sync {
    fn labels(&self, utterance: &str, ctx: &UtteranceContext<'_>) -> Vec<String>;
}

/// Non-comment, non-blank lines.
pub(crate) fn data_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines().map(str::trim_end).filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
}

fn tsv_pairs<'a>(text: &'a str, file: &str) -> Result<Vec<(&'a str, &'a str)>, FeatureError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| {
            l.split_once('\t').map(|(a, b)| (a.trim(), b.trim())).ok_or_else(|| FeatureError::Data {
                file: file.to_string(),
                line: i + 1,
                message: "expected two tab-separated fields".into(),
            })
        })
        .collect()
}

fn words(tokens: &[Token]) -> Vec<&str> {
    tokens.iter().filter(|t| !t.is_punct()).map(|t| t.surface.as_str()).collect()
}

fn starts_with_phrase(words: &[&str], phrase: &str) -> bool {
    let p: Vec<&str> = phrase.split(' ').collect();
    words.len() >= p.len() && words[..p.len()] == p[..]
}

fn contains_phrase(words: &[&str], phrase: &str) -> bool {
    let p: Vec<&str> = phrase.split(' ').collect();
    words.windows(p.len()).any(|w| w == p.as_slice())
}

// ---------------------------------------------------------------- dialogue act

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DialogueAct {
    Accept,
    Bye,
    Clarify,
    Continuer,
    Emotion,
    Emphasis,
    Greet,
    NoAnswer,
    Other,
    Reject,
    Statement,
    System,
    WhQuestion,
    YesAnswer,
    YesNoQuestion,
}

impl DialogueAct {
    pub const ALL: [DialogueAct; 15] = [
        DialogueAct::Accept,
        DialogueAct::Bye,
        DialogueAct::Clarify,
        DialogueAct::Continuer,
        DialogueAct::Emotion,
        DialogueAct::Emphasis,
        DialogueAct::Greet,
        DialogueAct::NoAnswer,
        DialogueAct::Other,
        DialogueAct::Reject,
        DialogueAct::Statement,
        DialogueAct::System,
        DialogueAct::WhQuestion,
        DialogueAct::YesAnswer,
        DialogueAct::YesNoQuestion,
    ];

    pub fn label(self) -> &'static str {
        match self {
            DialogueAct::Accept => "Accept",
            DialogueAct::Bye => "Bye",
            DialogueAct::Clarify => "Clarify",
            DialogueAct::Continuer => "Continuer",
            DialogueAct::Emotion => "Emotion",
            DialogueAct::Emphasis => "Emphasis",
            DialogueAct::Greet => "Greet",
            DialogueAct::NoAnswer => "No Answer",
            DialogueAct::Other => "Other",
            DialogueAct::Reject => "Reject",
            DialogueAct::Statement => "Statement",
            DialogueAct::System => "System",
            DialogueAct::WhQuestion => "Wh-Question",
            DialogueAct::YesAnswer => "Yes Answer",
            DialogueAct::YesNoQuestion => "Yes/No Question",
        }
    }
}

impl fmt::Display for DialogueAct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

const GREETINGS: &[&str] =
    &["hi", "hello", "hey", "howdy", "greetings", "yo", "hiya", "good morning", "good afternoon", "good evening"];
const FAREWELLS: &[&str] =
    &["bye", "goodbye", "cya", "see you", "see ya", "good night", "take care", "talk to you later"];
const WH_WORDS: &[&str] =
    &["what", "what's", "who", "who's", "where", "where's", "when", "why", "how", "how's", "which", "whose"];
const AUX_OPENERS: &[&str] = &[
    "do", "does", "did", "is", "are", "was", "were", "can", "could", "will", "would", "have", "has", "should", "shall",
    "may", "am", "isn't", "aren't", "don't", "doesn't", "didn't", "won't", "can't", "wouldn't", "couldn't",
];
const YES_WORDS: &[&str] = &["yes", "yeah", "yep", "yup", "yea", "sure", "absolutely", "definitely"];
const NO_WORDS: &[&str] = &["no", "nope", "nah"];
const ACCEPT_PHRASES: &[&str] = &[
    "i agree",
    "agreed",
    "exactly",
    "right",
    "true",
    "ok",
    "okay",
    "sounds good",
    "good point",
    "fair enough",
    "me too",
];
const REJECT_PHRASES: &[&str] = &["i disagree", "not really", "no way", "i don't think so", "i doubt"];
const CLARIFY_PHRASES: &[&str] = &["i mean", "in other words", "that is", "to clarify", "what i meant"];
const CONTINUERS: &[&str] = &["and", "also", "plus", "anyway", "anyways"];
const EMOTION_WORDS: &[&str] = &["lol", "haha", "hahaha", "lmao", "omg", "wow", "ugh", "yay", "<3"];

/// Rule-based act tagging; the first matching rule wins and `Statement` is
/// the fallback.
pub fn extract_dialogue_act(utterance: &str) -> DialogueAct {
    let trimmed = utterance.trim();
    if trimmed.starts_with('/') {
        return DialogueAct::System;
    }
    let tokens = tokenize(&trimmed.to_lowercase());
    let w = words(&tokens);
    if w.is_empty() {
        return DialogueAct::Other;
    }
    let last_punct = tokens.last().filter(|t| t.is_punct()).map(|t| t.surface.as_str());
    let any = |phrases: &[&str]| phrases.iter().any(|p| starts_with_phrase(&w, p));
    if any(GREETINGS) {
        return DialogueAct::Greet;
    }
    if any(FAREWELLS) {
        return DialogueAct::Bye;
    }
    if WH_WORDS.contains(&w[0]) {
        return DialogueAct::WhQuestion;
    }
    let asks = last_punct.is_some_and(|p| p.contains('?'));
    let declarative = last_punct.is_some_and(|p| p.contains('.') || p.contains('!'));
    if asks || (AUX_OPENERS.contains(&w[0]) && !declarative) {
        return DialogueAct::YesNoQuestion;
    }
    if any(REJECT_PHRASES) {
        return DialogueAct::Reject;
    }
    if YES_WORDS.contains(&w[0]) {
        return DialogueAct::YesAnswer;
    }
    if NO_WORDS.contains(&w[0]) {
        return DialogueAct::NoAnswer;
    }
    if any(ACCEPT_PHRASES) {
        return DialogueAct::Accept;
    }
    if any(CLARIFY_PHRASES) {
        return DialogueAct::Clarify;
    }
    if CONTINUERS.contains(&w[0]) {
        return DialogueAct::Continuer;
    }
    if w.iter().any(|x| EMOTION_WORDS.contains(x)) || trimmed.contains(":)") || trimmed.contains(":(") {
        return DialogueAct::Emotion;
    }
    if last_punct.is_some_and(|p| p.contains('!')) {
        return DialogueAct::Emphasis;
    }
    DialogueAct::Statement
}

#[derive(Debug, Default, Clone, Copy)]
pub struct DialogueActProvider;

impl LabelProvider for DialogueActProvider {
    fn labels(&self, utterance: &str, _: &UtteranceContext<'_>) -> Vec<String> {
        vec![extract_dialogue_act(utterance).label().to_string()]
    }
}

// ------------------------------------------------------------------ sentiment

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sentiment {
    VeryNegative,
    Negative,
    Neutral,
    Positive,
    VeryPositive,
}

impl Sentiment {
    pub const ALL: [Sentiment; 5] = [
        Sentiment::VeryNegative,
        Sentiment::Negative,
        Sentiment::Neutral,
        Sentiment::Positive,
        Sentiment::VeryPositive,
    ];

    pub fn from_score(score: i64) -> Self {
        match score {
            i64::MIN..=-2 => Sentiment::VeryNegative,
            -1 => Sentiment::Negative,
            0 => Sentiment::Neutral,
            1 => Sentiment::Positive,
            _ => Sentiment::VeryPositive,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Sentiment::VeryNegative => "very negative",
            Sentiment::Negative => "negative",
            Sentiment::Neutral => "neutral",
            Sentiment::Positive => "positive",
            Sentiment::VeryPositive => "very positive",
        }
    }
}

/// Signed lexicon count; a negator up to two words before a hit flips it.
#[derive(Debug, Clone)]
pub struct SentimentLexicon {
    positive: HashSet<String>,
    negative: HashSet<String>,
    negators: HashSet<String>,
}

impl Default for SentimentLexicon {
    fn default() -> Self {
        Self::from_lists(POSITIVE, NEGATIVE, NEGATORS)
    }
}

impl SentimentLexicon {
    /// Builds from one-term-per-line lists.
    pub fn from_lists(positive: &str, negative: &str, negators: &str) -> Self {
        let set = |t: &str| data_lines(t).map(|l| l.trim().to_lowercase()).collect();
        SentimentLexicon { positive: set(positive), negative: set(negative), negators: set(negators) }
    }

    fn is_negator(&self, word: &str) -> bool {
        self.negators.contains(word) || word.ends_with("n't")
    }

    pub fn score(&self, utterance: &str) -> i64 {
        let tokens = tokenize(&utterance.to_lowercase());
        let w = words(&tokens);
        let mut score = 0;
        for (i, word) in w.iter().enumerate() {
            let polarity = if self.positive.contains(*word) {
                1
            } else if self.negative.contains(*word) {
                -1
            } else {
                continue;
            };
            let negated = w[i.saturating_sub(2)..i].iter().any(|p| self.is_negator(p));
            score += if negated { -polarity } else { polarity };
        }
        score
    }

    pub fn classify(&self, utterance: &str) -> Sentiment {
        Sentiment::from_score(self.score(utterance))
    }
}

pub(crate) fn default_sentiment() -> &'static SentimentLexicon {
    static LEX: OnceLock<SentimentLexicon> = OnceLock::new();
    LEX.get_or_init(SentimentLexicon::default)
}

pub fn extract_sentiment(utterance: &str) -> Sentiment {
    default_sentiment().classify(utterance)
}

impl LabelProvider for SentimentLexicon {
    fn labels(&self, utterance: &str, _: &UtteranceContext<'_>) -> Vec<String> {
        vec![self.classify(utterance).label().to_string()]
    }
}

// --------------------------------------------------------------------- intent

pub fn intent_vocabulary() -> Vec<String> {
    data_lines(INTENTS).map(|l| l.trim().to_string()).collect()
}

const TOPIC_SHIFT: &[&str] = &[
    "talk about something else",
    "something else",
    "change the subject",
    "change the topic",
    "let's talk about",
    "talk about something",
    "new topic",
    "different topic",
    "can we talk about",
];
const OPINION_REQUESTS: &[&str] = &[
    "what do you think",
    "what's your opinion",
    "your opinion",
    "how do you feel about",
    "what about you",
    "do you like",
    "do you think",
    "what's your favorite",
    "what is your favorite",
    "your thoughts",
];
const IMPERATIVES: &[&str] = &[
    "play",
    "tell",
    "show",
    "give",
    "find",
    "stop",
    "read",
    "open",
    "turn",
    "set",
    "search",
    "recommend",
    "help",
    "sing",
    "start",
    "repeat",
    "call",
    "send",
];
const SERVICE_OPENERS: &[&str] = &["can you", "could you", "would you", "please"];
const LIKE_PHRASES: &[&str] = &["i like", "i love", "i enjoy", "my favorite", "i really like", "i really love"];
const DISLIKE_PHRASES: &[&str] = &["i hate", "i don't like", "i dislike", "can't stand", "i didn't like"];

/// Rule-based intent: topic-shift markers, opinion requests and imperatives
/// first, then a few secondary patterns, falling back to `inform`.
pub fn extract_intent(utterance: &str) -> &'static str {
    let tokens = tokenize(&utterance.trim().to_lowercase());
    let w = words(&tokens);
    if w.is_empty() {
        return "inform";
    }
    let contains = |ps: &[&str]| ps.iter().any(|p| contains_phrase(&w, p));
    let starts = |ps: &[&str]| ps.iter().any(|p| starts_with_phrase(&w, p));
    if contains(TOPIC_SHIFT) {
        return "request_change_topic";
    }
    if contains(OPINION_REQUESTS) {
        return "request_opinion";
    }
    if IMPERATIVES.contains(&w[0]) || starts(SERVICE_OPENERS) {
        return "request_service";
    }
    if w.iter().any(|x| x.starts_with("thank")) {
        return "express_gratitude";
    }
    if starts(GREETINGS) {
        return "greeting";
    }
    if starts(FAREWELLS) {
        return "farewell";
    }
    if YES_WORDS.contains(&w[0]) {
        return "answer_yes";
    }
    if NO_WORDS.contains(&w[0]) {
        return "answer_no";
    }
    if WH_WORDS.contains(&w[0]) || tokens.last().is_some_and(|t| t.surface.contains('?')) {
        return "request_info";
    }
    if contains(DISLIKE_PHRASES) {
        return "express_dislike";
    }
    if contains(LIKE_PHRASES) {
        return "express_like";
    }
    if starts(&["i agree", "exactly", "me too"]) {
        return "express_agreement";
    }
    if starts(&["i disagree", "not really"]) {
        return "express_disagreement";
    }
    "inform"
}

#[derive(Debug, Default, Clone, Copy)]
pub struct IntentProvider;

impl LabelProvider for IntentProvider {
    fn labels(&self, utterance: &str, _: &UtteranceContext<'_>) -> Vec<String> {
        vec![extract_intent(utterance).to_string()]
    }
}

// ---------------------------------------------------------------------- topic

/// Topic from conversation metadata via an alias table, else from keyword
/// hits in the utterance; `other` when nothing matches.
#[derive(Debug, Clone)]
pub struct TopicClassifier {
    labels: Vec<String>,
    aliases: BTreeMap<String, String>,
    /// keyword phrase -> label index
    keywords: Vec<(Vec<String>, usize)>,
}

impl Default for TopicClassifier {
    fn default() -> Self {
        Self::from_data(TOPICS, TOPIC_ALIASES, TOPIC_KEYWORDS).expect("bundled topic data is valid")
    }
}

impl TopicClassifier {
    pub fn from_data(labels: &str, aliases: &str, keywords: &str) -> Result<Self, FeatureError> {
        let labels: Vec<String> = data_lines(labels).map(|l| l.trim().to_string()).collect();
        let position = |label: &str, file: &str| {
            labels.iter().position(|l| l == label).ok_or_else(|| FeatureError::Data {
                file: file.to_string(),
                line: 0,
                message: format!("unknown topic label `{label}`"),
            })
        };
        let mut alias_map = BTreeMap::new();
        for (alias, label) in tsv_pairs(aliases, "topic_aliases.tsv")? {
            position(label, "topic_aliases.tsv")?;
            alias_map.insert(alias.to_lowercase(), label.to_string());
        }
        let mut kw = Vec::new();
        for (label, keyword) in tsv_pairs(keywords, "topic_keywords.tsv")? {
            let idx = position(label, "topic_keywords.tsv")?;
            kw.push((keyword.to_lowercase().split(' ').map(String::from).collect(), idx));
        }
        if !labels.iter().any(|l| l == "other") {
            return Err(FeatureError::Data {
                file: "topics.txt".into(),
                line: 0,
                message: "the topic vocabulary needs an `other` fallback".into(),
            });
        }
        Ok(TopicClassifier { labels, aliases: alias_map, keywords: kw })
    }

    pub fn vocabulary(&self) -> &[String] {
        &self.labels
    }

    pub fn from_metadata(&self, topic: &str) -> Option<&str> {
        let key = topic.trim().to_lowercase().replace(['_', '-'], " ");
        self.aliases
            .get(&key)
            .or_else(|| self.aliases.get(topic.trim().to_lowercase().as_str()))
            .map(String::as_str)
            .or_else(|| self.labels.iter().find(|l| **l == key.replace(' ', "_")).map(String::as_str))
    }

    pub fn from_keywords(&self, utterance: &str) -> &str {
        let tokens = tokenize(&utterance.to_lowercase());
        let w = words(&tokens);
        let mut hits = vec![0usize; self.labels.len()];
        for (phrase, idx) in &self.keywords {
            let p: Vec<&str> = phrase.iter().map(String::as_str).collect();
            hits[*idx] += w.windows(p.len()).filter(|win| *win == p.as_slice()).count();
        }
        let best = hits.iter().copied().max().unwrap_or(0);
        if best == 0 {
            return "other";
        }
        let idx = hits.iter().position(|&h| h == best).expect("max exists");
        &self.labels[idx]
    }

    pub fn classify(&self, utterance: &str, conversation_topic: Option<&str>) -> String {
        conversation_topic
            .and_then(|t| self.from_metadata(t))
            .unwrap_or_else(|| self.from_keywords(utterance))
            .to_string()
    }
}

pub(crate) fn default_topics() -> &'static TopicClassifier {
    static TOPICS: OnceLock<TopicClassifier> = OnceLock::new();
    TOPICS.get_or_init(TopicClassifier::default)
}

pub fn extract_topic(utterance: &str, conversation_topic: Option<&str>) -> String {
    default_topics().classify(utterance, conversation_topic)
}

impl LabelProvider for TopicClassifier {
    fn labels(&self, utterance: &str, ctx: &UtteranceContext<'_>) -> Vec<String> {
        vec![self.classify(utterance, ctx.conversation_topic)]
    }
}

// --------------------------------------------------------------- entity types

pub fn entity_type_vocabulary() -> Vec<String> {
    data_lines(ENTITY_TYPES).map(|l| l.trim().to_string()).collect()
}

/// Longest-match gazetteer lookup over word n-grams. Text is lowercase by
/// the time it gets here, so there is no capitalization cue to use.
#[derive(Debug, Clone)]
pub struct Gazetteer {
    /// surface words -> types
    entries: HashMap<Vec<String>, BTreeSet<String>>,
    max_len: usize,
}

impl Default for Gazetteer {
    fn default() -> Self {
        Self::from_tsv(GAZETTEER, &entity_type_vocabulary()).expect("bundled gazetteer is valid")
    }
}

impl Gazetteer {
    /// Parses `surface<TAB>type` lines; every type must be in `vocabulary`.
    pub fn from_tsv(text: &str, vocabulary: &[String]) -> Result<Self, FeatureError> {
        let vocab: HashSet<&str> = vocabulary.iter().map(String::as_str).collect();
        let mut entries: HashMap<Vec<String>, BTreeSet<String>> = HashMap::new();
        for (surface, ty) in tsv_pairs(text, "gazetteer.tsv")? {
            if !vocab.contains(ty) {
                return Err(FeatureError::Data {
                    file: "gazetteer.tsv".into(),
                    line: 0,
                    message: format!("type `{ty}` is not in the entity type vocabulary"),
                });
            }
            let key: Vec<String> =
                tokenize(&surface.to_lowercase()).into_iter().filter(|t| !t.is_punct()).map(|t| t.surface).collect();
            if !key.is_empty() {
                entries.entry(key).or_default().insert(ty.to_string());
            }
        }
        let max_len = entries.keys().map(Vec::len).max().unwrap_or(0);
        Ok(Gazetteer { entries, max_len })
    }

    pub fn types_in(&self, utterance: &str) -> BTreeSet<String> {
        let tokens = tokenize(&utterance.to_lowercase());
        let w: Vec<String> = words(&tokens).into_iter().map(String::from).collect();
        let mut found = BTreeSet::new();
        let mut i = 0;
        while i < w.len() {
            let longest = (1..=self.max_len.min(w.len() - i))
                .rev()
                .find_map(|n| self.entries.get(&w[i..i + n]).map(|types| (n, types)));
            match longest {
                Some((n, types)) => {
                    found.extend(types.iter().cloned());
                    i += n;
                }
                None => i += 1,
            }
        }
        found
    }
}

pub(crate) fn default_gazetteer() -> &'static Gazetteer {
    static GAZ: OnceLock<Gazetteer> = OnceLock::new();
    GAZ.get_or_init(Gazetteer::default)
}

pub fn extract_entity_types(utterance: &str) -> BTreeSet<String> {
    default_gazetteer().types_in(utterance)
}

impl LabelProvider for Gazetteer {
    fn labels(&self, utterance: &str, _: &UtteranceContext<'_>) -> Vec<String> {
        self.types_in(utterance).into_iter().collect()
    }
}
