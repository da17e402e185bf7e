//! Coarse part-of-speech tagging.
//!
//! The default [`RuleTagger`] uses closed-class word lists, a small verb and
//! adjective lexicon and suffix heuristics, falling back to `NOUN`. It exists
//! to drive connective gating and the verb check of the argument filter; any
//! better tagger can be plugged in through [`PosTagger`].

use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Pos {
    Verb,
    Noun,
    Adj,
    Adv,
    Conj,
    Sconj,
    Pron,
    Det,
    Num,
    Punct,
    Other,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Pos::Verb => "VERB",
            Pos::Noun => "NOUN",
            Pos::Adj => "ADJ",
            Pos::Adv => "ADV",
            Pos::Conj => "CONJ",
            Pos::Sconj => "SCONJ",
            Pos::Pron => "PRON",
            Pos::Det => "DET",
            Pos::Num => "NUM",
            Pos::Punct => "PUNCT",
            Pos::Other => "OTHER",
        };
        f.write_str(s)
    }
}

pub trait PosTagger: Send + Sync {
    /// Tags lowercase token surfaces; must return one tag per input.
    fn tag(&self, tokens: &[&str]) -> Vec<Pos>;
}

const PRONOUNS: &[&str] = &[
    "i",
    "me",
    "my",
    "mine",
    "myself",
    "you",
    "your",
    "yours",
    "yourself",
    "yourselves",
    "he",
    "him",
    "his",
    "himself",
    "she",
    "her",
    "hers",
    "herself",
    "it",
    "its",
    "itself",
    "we",
    "us",
    "our",
    "ours",
    "ourselves",
    "they",
    "them",
    "their",
    "theirs",
    "themselves",
    "who",
    "whom",
    "whose",
    "what",
    "which",
    "something",
    "anything",
    "nothing",
    "everything",
    "someone",
    "anyone",
    "everyone",
    "somebody",
    "anybody",
    "everybody",
    "nobody",
    "one",
    "ya",
    "u",
];

const DETERMINERS: &[&str] = &[
    "the", "a", "an", "this", "that", "these", "those", "some", "any", "every", "each", "no", "all", "both", "either",
    "neither", "another", "such", "many", "few", "several", "most", "more", "less", "other",
];

const CONJUNCTIONS: &[&str] = &["and", "or", "but", "nor", "yet", "plus"];

const SUBORDINATORS: &[&str] = &[
    "because", "although", "though", "if", "unless", "while", "whereas", "since", "whether", "until", "till", "after",
    "before", "as", "once", "cause", "cuz", "than",
];

const ADVERBS: &[&str] = &[
    "very",
    "really",
    "too",
    "also",
    "then",
    "however",
    "therefore",
    "thus",
    "consequently",
    "moreover",
    "furthermore",
    "indeed",
    "instead",
    "previously",
    "earlier",
    "later",
    "just",
    "not",
    "never",
    "always",
    "often",
    "sometimes",
    "usually",
    "now",
    "here",
    "there",
    "still",
    "even",
    "already",
    "quite",
    "pretty",
    "probably",
    "maybe",
    "perhaps",
    "actually",
    "definitely",
    "almost",
    "again",
    "far",
    "ever",
    "soon",
    "ago",
    "away",
    "anyway",
    "anyways",
    "else",
    "much",
    "well",
    "why",
    "how",
    "when",
    "where",
    "only",
    "once",
    "together",
    "totally",
    "kinda",
    "sorta",
    "rather",
    "somewhat",
    "lately",
    "recently",
    "yet",
    "back",
    "otherwise",
    "n't",
    "hopefully",
    "apparently",
    "basically",
    "honestly",
    "seriously",
    "literally",
];

const PREPOSITIONS: &[&str] = &[
    "of", "in", "on", "at", "to", "for", "with", "by", "from", "about", "into", "onto", "over", "under", "through",
    "off", "out", "up", "down", "like", "around", "against", "between", "during", "without", "within", "across",
    "behind", "beyond", "near", "per", "via", "toward", "towards", "upon", "among",
];

const INTERJECTIONS: &[&str] = &[
    "yes", "yeah", "yep", "yup", "no", "nope", "nah", "oh", "ah", "wow", "hey", "hi", "hello", "ok", "okay", "lol",
    "haha", "hmm", "um", "uh", "please", "thanks", "bye", "omg",
];

const AUXILIARIES: &[&str] = &[
    "is", "am", "are", "was", "were", "be", "been", "being", "do", "does", "did", "have", "has", "had", "having",
    "can", "could", "will", "would", "shall", "should", "may", "might", "must", "gonna", "wanna", "gotta",
];

/// Common verbs whose forms the suffix rules would miss or mis-tag.
const VERBS: &[&str] = &[
    "buy",
    "bought",
    "like",
    "likes",
    "love",
    "loves",
    "hate",
    "hates",
    "think",
    "thinks",
    "thought",
    "know",
    "knows",
    "knew",
    "known",
    "want",
    "wants",
    "go",
    "goes",
    "went",
    "gone",
    "get",
    "gets",
    "got",
    "gotten",
    "see",
    "sees",
    "saw",
    "seen",
    "watch",
    "watches",
    "play",
    "plays",
    "make",
    "makes",
    "made",
    "say",
    "says",
    "said",
    "take",
    "takes",
    "took",
    "taken",
    "come",
    "comes",
    "came",
    "give",
    "gives",
    "gave",
    "given",
    "look",
    "looks",
    "find",
    "finds",
    "found",
    "tell",
    "tells",
    "told",
    "feel",
    "feels",
    "felt",
    "seem",
    "seems",
    "need",
    "needs",
    "listen",
    "listens",
    "read",
    "reads",
    "eat",
    "eats",
    "ate",
    "eaten",
    "drink",
    "drank",
    "run",
    "runs",
    "ran",
    "win",
    "wins",
    "won",
    "lose",
    "loses",
    "lost",
    "leave",
    "left",
    "keep",
    "keeps",
    "kept",
    "begin",
    "began",
    "begun",
    "start",
    "starts",
    "stop",
    "stops",
    "try",
    "tries",
    "use",
    "uses",
    "work",
    "works",
    "call",
    "calls",
    "put",
    "puts",
    "mean",
    "means",
    "meant",
    "let",
    "lets",
    "become",
    "became",
    "sing",
    "sang",
    "sung",
    "write",
    "wrote",
    "written",
    "hear",
    "heard",
    "pay",
    "paid",
    "meet",
    "met",
    "sit",
    "sat",
    "stand",
    "stood",
    "understand",
    "understood",
    "remember",
    "forget",
    "forgot",
    "happen",
    "happens",
    "agree",
    "agrees",
    "guess",
    "hope",
    "wish",
    "enjoy",
    "enjoys",
    "prefer",
    "prefers",
    "believe",
    "believes",
    "sleep",
    "slept",
    "live",
    "lives",
    "move",
    "moves",
    "bring",
    "brought",
    "sell",
    "sold",
    "send",
    "sent",
    "spend",
    "spent",
    "build",
    "built",
    "fall",
    "fell",
    "throw",
    "threw",
    "thrown",
    "catch",
    "caught",
    "teach",
    "taught",
    "fight",
    "fought",
    "drive",
    "drove",
    "driven",
    "ride",
    "rode",
    "choose",
    "chose",
    "wear",
    "wore",
    "break",
    "broke",
    "grow",
    "grew",
    "draw",
    "drew",
    "fly",
    "flew",
    "cost",
    "costs",
    "hit",
    "hurt",
    "quit",
    "set",
    "shut",
    "cut",
    "beat",
    "do",
    "did",
    "love",
    "check",
    "rock",
    "rocks",
    "suck",
    "sucks",
    "cook",
    "cooks",
    "visit",
    "wait",
    "talk",
    "talks",
    "help",
    "helps",
    "show",
    "shows",
    "sound",
    "sounds",
    "miss",
    "misses",
];

const ADJECTIVES: &[&str] = &[
    "good",
    "great",
    "bad",
    "best",
    "better",
    "worse",
    "worst",
    "new",
    "old",
    "big",
    "small",
    "little",
    "nice",
    "favorite",
    "favourite",
    "red",
    "blue",
    "green",
    "black",
    "white",
    "yellow",
    "high",
    "low",
    "long",
    "short",
    "young",
    "large",
    "hard",
    "easy",
    "cool",
    "fun",
    "funny",
    "awesome",
    "amazing",
    "terrible",
    "awful",
    "real",
    "sure",
    "happy",
    "sad",
    "fine",
    "true",
    "right",
    "wrong",
    "cheap",
    "expensive",
    "fast",
    "slow",
    "hot",
    "cold",
    "huge",
    "tiny",
    "weird",
    "strange",
    "boring",
    "great",
    "first",
    "last",
    "next",
    "same",
    "different",
    "whole",
    "own",
    "okay",
    "overrated",
    "underrated",
    "ok",
    "dead",
    "alive",
    "late",
    "early",
    "full",
    "free",
    "busy",
    "tired",
    "smart",
    "dumb",
    "crazy",
    "entire",
    "main",
    "top",
    "sweet",
    "scary",
    "pretty",
    "ugly",
    "cute",
    "rich",
    "poor",
    "strong",
    "weak",
    "safe",
    "able",
];

/// Irregular words that the `-ed`/`-ing` rules would mis-tag as verbs.
const NOT_VERB_ED_ING: &[&str] = &[
    "thing",
    "things",
    "something",
    "anything",
    "nothing",
    "everything",
    "morning",
    "evening",
    "ceiling",
    "king",
    "ring",
    "spring",
    "string",
    "wing",
    "sing",
    "bed",
    "red",
    "need",
    "seed",
    "speed",
    "feed",
    "weed",
    "shed",
    "sled",
    "bled",
    "hundred",
    "wedding",
    "building",
    "ending",
    "during",
    "ceiling",
    "pudding",
    "darling",
    "sibling",
    "clothing",
    "meaning",
    "feeling",
    "painting",
    "setting",
    "opening",
    "beginning",
    "awning",
];

const NUMBER_WORDS: &[&str] = &[
    "zero", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "eleven", "twelve", "twenty",
    "thirty", "forty", "fifty", "hundred", "thousand", "million", "billion",
];

/// Pronoun-headed contractions that carry an auxiliary (`it's` = it is).
const AUX_CONTRACTION_HEADS: &[&str] = &[
    "it",
    "he",
    "she",
    "that",
    "what",
    "there",
    "here",
    "who",
    "where",
    "how",
    "let",
    "this",
    "when",
    "why",
    "everything",
    "nothing",
    "something",
    "everyone",
    "one",
];

pub struct RuleTagger {
    pronouns: HashSet<&'static str>,
    determiners: HashSet<&'static str>,
    conjunctions: HashSet<&'static str>,
    subordinators: HashSet<&'static str>,
    adverbs: HashSet<&'static str>,
    prepositions: HashSet<&'static str>,
    interjections: HashSet<&'static str>,
    auxiliaries: HashSet<&'static str>,
    verbs: HashSet<&'static str>,
    adjectives: HashSet<&'static str>,
    not_verb: HashSet<&'static str>,
    numbers: HashSet<&'static str>,
}

impl Default for RuleTagger {
    fn default() -> Self {
        let set = |words: &[&'static str]| words.iter().copied().collect::<HashSet<_>>();
        RuleTagger {
            pronouns: set(PRONOUNS),
            determiners: set(DETERMINERS),
            conjunctions: set(CONJUNCTIONS),
            subordinators: set(SUBORDINATORS),
            adverbs: set(ADVERBS),
            prepositions: set(PREPOSITIONS),
            interjections: set(INTERJECTIONS),
            auxiliaries: set(AUXILIARIES),
            verbs: set(VERBS),
            adjectives: set(ADJECTIVES),
            not_verb: set(NOT_VERB_ED_ING),
            numbers: set(NUMBER_WORDS),
        }
    }
}

impl RuleTagger {
    /// Context-free tag for one lowercase word.
    pub fn tag_word(&self, word: &str) -> Pos {
        if !word.chars().any(char::is_alphanumeric) {
            return Pos::Punct;
        }
        if word == "so" {
            return Pos::Conj;
        }
        if is_numeric(word) || self.numbers.contains(word) {
            return Pos::Num;
        }
        if let Some(pos) = self.tag_contraction(word) {
            return pos;
        }
        // Order matters for words in several lists ("that", "no", "once", "yet").
        if self.auxiliaries.contains(word) || self.verbs.contains(word) {
            return Pos::Verb;
        }
        if self.pronouns.contains(word) {
            return Pos::Pron;
        }
        if self.determiners.contains(word) {
            return Pos::Det;
        }
        if self.conjunctions.contains(word) {
            return Pos::Conj;
        }
        if self.subordinators.contains(word) {
            return Pos::Sconj;
        }
        if self.adverbs.contains(word) {
            return Pos::Adv;
        }
        if self.adjectives.contains(word) {
            return Pos::Adj;
        }
        if self.prepositions.contains(word) || self.interjections.contains(word) {
            return Pos::Other;
        }
        self.tag_by_suffix(word)
    }

    fn tag_contraction(&self, word: &str) -> Option<Pos> {
        let (head, tail) = word.split_once('\'')?;
        Some(match tail {
            "t" if head.ends_with('n') => Pos::Verb,
            "re" | "m" | "ve" | "ll" | "d" => Pos::Verb,
            "s" if AUX_CONTRACTION_HEADS.contains(&head) => Pos::Verb,
            "s" => Pos::Noun,
            _ => return None,
        })
    }

    fn tag_by_suffix(&self, word: &str) -> Pos {
        let len = word.chars().count();
        if self.not_verb.contains(word) {
            return Pos::Noun;
        }
        if len > 4 && (word.ends_with("ed") || word.ends_with("ing")) {
            return Pos::Verb;
        }
        if len > 4 && word.ends_with("ly") {
            return Pos::Adv;
        }
        const ADJ_SUFFIXES: &[&str] = &["ous", "ful", "ive", "able", "ible", "less", "ical", "ish", "est", "ary", "ic"];
        if len > 4 && ADJ_SUFFIXES.iter().any(|s| word.ends_with(s)) {
            return Pos::Adj;
        }
        if len > 3 && (word.ends_with("ize") || word.ends_with("ise") || word.ends_with("ify")) {
            return Pos::Verb;
        }
        Pos::Noun
    }
}

fn is_numeric(word: &str) -> bool {
    let core = word.trim_start_matches(['$', '#']).trim_end_matches('%');
    !core.is_empty()
        && core.chars().next().is_some_and(|c| c.is_ascii_digit())
        && core.chars().all(|c| c.is_ascii_digit() || matches!(c, '.' | ',' | ':' | '/' | '-'))
}

impl PosTagger for RuleTagger {
    fn tag(&self, tokens: &[&str]) -> Vec<Pos> {
        let mut tags: Vec<Pos> = tokens.iter().map(|t| self.tag_word(t)).collect();
        // "so" directly modifying an adjective or adverb is a degree adverb
        // ("so good", "so far"); otherwise it is the clause-linking conjunction.
        for i in 0..tokens.len() {
            if tokens[i] == "so" {
                let next = tags.get(i + 1).copied();
                if matches!(next, Some(Pos::Adj) | Some(Pos::Adv))
                    || matches!(tokens.get(i + 1), Some(&"many") | Some(&"much"))
                {
                    tags[i] = Pos::Adv;
                }
            }
        }
        tags
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tags(words: &[&str]) -> Vec<Pos> {
        RuleTagger::default().tag(words)
    }

    #[test]
    fn closed_classes() {
        use Pos::*;
        assert_eq!(tags(&["i", "bought", "it", "."]), vec![Pron, Verb, Pron, Punct]);
        assert_eq!(tags(&["the", "red", "car"]), vec![Det, Adj, Noun]);
        assert_eq!(tags(&["because", "and", "however"]), vec![Sconj, Conj, Adv]);
    }

    #[test]
    fn degree_so_versus_connective_so() {
        use Pos::*;
        assert_eq!(tags(&["so", "far", "so", "good"]), vec![Adv, Adv, Adv, Adj]);
        assert_eq!(tags(&["so", "i", "left"]), vec![Conj, Pron, Verb]);
        assert_eq!(tags(&["so", ","]), vec![Conj, Punct]);
        assert_eq!(tags(&["so"]), vec![Conj]);
    }

    #[test]
    fn contractions_and_suffixes() {
        use Pos::*;
        assert_eq!(
            tags(&["it's", "don't", "john's", "walked", "quickly", "famous", "$5", "thing"]),
            vec![Verb, Verb, Noun, Verb, Adv, Adj, Num, Noun]
        );
    }
}
